use serde::Serialize;

use super::{IdealError, IdealSpec, Mutation, SpecForm};
use crate::dynamics::{Check, CoSet, DynamicalSystem};
use crate::units::{witness_no_left_au_with, witness_no_right_au_with, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
}

/// The clause of a characterization that settled a decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// All `X_n` equal: right approximate unit `U⁰u_F`.
    #[serde(rename = "rau.constant")]
    RauConstant,
    /// Some `X_{n+1} ⊊ X_n`.
    #[serde(rename = "rau.strict-drop")]
    RauStrictDrop,
    /// Condition (3) holds: left approximate unit `U⁰u_F`.
    #[serde(rename = "lau.cond3")]
    LauCond3,
    /// Condition (3) fails at some step.
    #[serde(rename = "lau.cond3-fails")]
    LauCond3Fails,
    /// `X₀ = X`, so `E₀` kills every element of the ideal.
    #[serde(rename = "lau.x0-proper")]
    LauX0Proper,
    /// `(S, W)` invariants hold, which give condition (2).
    #[serde(rename = "lau.sw-invariants")]
    LauSwInvariants,
    #[serde(rename = "au.both-sides")]
    AuBothSides,
    #[serde(rename = "au.right-fails")]
    AuRightFails,
    #[serde(rename = "au.left-fails")]
    AuLeftFails,
    /// M-ideals of a unital semicrossed product are the ideals with an approximate unit.
    #[serde(rename = "m-ideal.au")]
    MIdealAu,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Self::RauConstant => "rau.constant",
            Self::RauStrictDrop => "rau.strict-drop",
            Self::LauCond3 => "lau.cond3",
            Self::LauCond3Fails => "lau.cond3-fails",
            Self::LauX0Proper => "lau.x0-proper",
            Self::LauSwInvariants => "lau.sw-invariants",
            Self::AuBothSides => "au.both-sides",
            Self::AuRightFails => "au.right-fails",
            Self::AuLeftFails => "au.left-fails",
            Self::MIdealAu => "m-ideal.au",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    /// The net `U⁰ 1_{F∖X₀}` along the canonical window exhaustion.
    ApproximateUnit { recipe: String },
    Obstruction {
        witness: Witness,
        /// The step at which condition (3) or the set equality failed, if any.
        #[serde(skip_serializing_if = "Option::is_none")]
        failed_at: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub rule: Rule,
    pub evidence: Evidence,
    /// Internal consistency checks run alongside the decision.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
}

impl Decision {
    pub fn witness(&self) -> Option<&Witness> {
        match &self.evidence {
            Evidence::Obstruction { witness, .. } => Some(witness),
            Evidence::ApproximateUnit { .. } => None,
        }
    }

    fn unit(rule: Rule) -> Self {
        Self {
            verdict: Verdict::Yes,
            rule,
            evidence: Evidence::ApproximateUnit {
                recipe: "U^0 1_(F \\ X_0) along the canonical window exhaustion".into(),
            },
            checks: Vec::new(),
        }
    }

    fn obstruction(rule: Rule, witness: Witness, failed_at: Option<String>) -> Self {
        Self { verdict: Verdict::No, rule, evidence: Evidence::Obstruction { witness, failed_at }, checks: Vec::new() }
    }
}

/// Result of the bounded check of `X₀ ⊊ X` and `φⁿ(X∖Xₙ) = X∖X₀`, `n ≤ n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cond2Report {
    pub n_max: usize,
    pub x0_proper: bool,
    /// The first `n` at which the equality fails.
    pub first_failure: Option<usize>,
}

impl Cond2Report {
    pub fn passed(&self) -> bool {
        self.x0_proper && self.first_failure.is_none()
    }
}

/// `image ~ target` under the (possibly mutated) equality of condition (3).
fn cond3_holds(sys: &DynamicalSystem, image: &CoSet, target: &CoSet, mutation: Mutation) -> bool {
    match mutation {
        Mutation::Cond3Covering => sys.is_subset(target, image),
        Mutation::Cond3Forward => sys.is_subset(image, target),
        _ => sys.set_eq(image, target),
    }
}

impl IdealSpec {
    pub fn decide_right_au(&self) -> Result<Decision, IdealError> {
        self.decide_right_au_with(Mutation::None)
    }

    pub fn decide_right_au_with(&self, mutation: Mutation) -> Result<Decision, IdealError> {
        self.require_decidable()?;
        let constant = match self.form() {
            SpecForm::Stable { sets } => sets.windows(2).all(|p| p[0] == p[1]),
            SpecForm::Sw { w, .. } => w.is_empty(),
        };
        if constant {
            return Ok(Decision::unit(Rule::RauConstant));
        }
        let witness = witness_no_right_au_with(self, mutation)?;
        let at = format!("X_{} ⊊ X_{}", witness.n0 + 1, witness.n0);
        Ok(Decision::obstruction(Rule::RauStrictDrop, witness, Some(at)))
    }

    pub fn decide_left_au(&self) -> Result<Decision, IdealError> {
        self.decide_left_au_with(Mutation::None)
    }

    /// Decides through condition (3), which only involves finitely many set
    /// equalities once the sequence is constant.
    pub fn decide_left_au_with(&self, mutation: Mutation) -> Result<Decision, IdealError> {
        self.require_decidable()?;
        let sys = self.system();
        let m = match self.form() {
            // The invariants checked by require_decidable give condition (2).
            SpecForm::Sw { .. } => return Ok(Decision::unit(Rule::LauSwInvariants)),
            SpecForm::Stable { sets } => sets.len() - 1,
        };
        let x = |n: usize| self.x_n(n).expect("stable");
        if mutation != Mutation::DropX0Proper && sys.is_full_set(x(0)) {
            let witness = witness_no_left_au_with(self, mutation)?;
            return Ok(Decision::obstruction(Rule::LauX0Proper, witness, Some("X_0 = X".into())));
        }
        let mut failed = None;
        let first = sys.image_set(&sys.complement(x(1)))?;
        if !cond3_holds(sys, &first, &sys.complement(x(0)), mutation) {
            failed = Some("φ(X \\ X_1) ≠ X \\ X_0".to_string());
        }
        // Past m both sides are empty.
        for n in 0..=m {
            if failed.is_some() {
                break;
            }
            let image = sys.image_set(&sys.difference(x(n + 1), x(n + 2)))?;
            if !cond3_holds(sys, &image, &sys.difference(x(n), x(n + 1)), mutation) {
                failed = Some(format!("φ(X_{} \\ X_{}) ≠ X_{n} \\ X_{}", n + 1, n + 2, n + 1));
            }
        }
        match failed {
            None => Ok(Decision::unit(Rule::LauCond3)),
            Some(at) => {
                let witness = witness_no_left_au_with(self, mutation)?;
                Ok(Decision::obstruction(Rule::LauCond3Fails, witness, Some(at)))
            }
        }
    }

    /// Condition (2) checked directly for `n ≤ n_max`. Exact once
    /// `n_max ≥ m + 1`; used only to cross-validate the condition (3) path.
    pub fn check_lau_cond2(&self, n_max: usize) -> Result<Cond2Report, IdealError> {
        let sys = self.system();
        let Some(x0) = self.x_n(0) else {
            return Err(IdealError::InvalidSpec("condition (2) check needs a stable spec".into()));
        };
        let target = sys.complement(x0);
        let x0_proper = !sys.is_full_set(x0);
        let mut first_failure = None;
        if x0_proper {
            for n in 0..=n_max {
                let image = sys.image_set_iter(&sys.complement(self.x_n(n).expect("stable")), n)?;
                if !sys.set_eq(&image, &target) {
                    first_failure = Some(n);
                    break;
                }
            }
        }
        Ok(Cond2Report { n_max, x0_proper, first_failure })
    }

    /// The direct two-sided conditions: all `X_n` equal and `φ(X∖X₀) = X∖X₀`.
    pub fn au_direct(&self) -> Result<bool, IdealError> {
        let sys = self.system();
        let core = match self.form() {
            SpecForm::Stable { sets } if sets.windows(2).all(|p| p[0] == p[1]) => &sets[0],
            SpecForm::Sw { s, w, .. } if w.is_empty() => s,
            _ => return Ok(false),
        };
        let outside = sys.complement(core);
        Ok(sys.set_eq(&sys.image_set(&outside)?, &outside))
    }

    pub fn decide_au(&self) -> Result<Decision, IdealError> {
        self.decide_au_with(Mutation::None)
    }

    pub fn decide_au_with(&self, mutation: Mutation) -> Result<Decision, IdealError> {
        let right = self.decide_right_au_with(mutation)?;
        let left = self.decide_left_au_with(mutation)?;
        let direct = self.au_direct()?;
        let mut decision = match (right.verdict, left.verdict) {
            (Verdict::Yes, Verdict::Yes) => Decision::unit(Rule::AuBothSides),
            (Verdict::No, _) => Decision { rule: Rule::AuRightFails, ..right },
            (Verdict::Yes, Verdict::No) => Decision { rule: Rule::AuLeftFails, ..left },
        };
        let agree = (decision.verdict == Verdict::Yes) == direct;
        decision.checks = vec![Check::new(
            "au.direct-conditions",
            agree,
            format!("constant with φ(X \\ X_0) = X \\ X_0: {direct}"),
        )];
        Ok(decision)
    }

    pub fn decide_m_ideal(&self) -> Result<Decision, IdealError> {
        self.decide_m_ideal_with(Mutation::None)
    }

    /// Only for compact (here: finite) carriers, where the algebra is unital.
    pub fn decide_m_ideal_with(&self, mutation: Mutation) -> Result<Decision, IdealError> {
        if !self.system().is_finite() {
            return Err(IdealError::NotCompact);
        }
        let au = self.decide_au_with(mutation)?;
        Ok(Decision { rule: Rule::MIdealAu, ..au })
    }
}
