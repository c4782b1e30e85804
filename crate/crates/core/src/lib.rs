//! Exact computer algebra for the semicrossed product `C₀(X) ×_φ ℤ₊` of a
//! discrete dynamical system, its ideals `I ~ {X_n}`, and their left, right
//! and two-sided approximate units.

pub mod dynamics;
pub mod algebra;
pub mod ideals;
pub mod units;
pub mod harness;
