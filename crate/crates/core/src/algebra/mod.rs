//! The Banach algebra `ℓ¹(ℤ₊, C₀(X))` restricted to finitely supported
//! elements, with exact complex-rational arithmetic.
//!
//! Only the singular-value step in [`rep`] leaves exact arithmetic.

mod func;
pub mod rep;
mod series;
mod surd;

pub use func::{modulus, real, scalar, Func, Scalar};
pub use rep::{opnorm_bracket, opnorm_lower, rep_matrix, NormBracket, RepMatrix, TruncationParams};
pub use series::{ParseSeriesError, Series};
pub use surd::Surd;
