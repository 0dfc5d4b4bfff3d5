//! The nine perfect-correlation identities between Alice's and Bob's results,
//! checked against a state both in expectation and outcome by outcome.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{tensor, ComplexMatrix, TOLERANCE};
use crate::observables::{
    build_context, canonical_observables, commute, DichotomicObservable, MeasurementContext,
    ObservableSet, CANONICAL_LABELS,
};
use crate::state::StateVector;

/// Outcomes with probability at or below this are treated as exact zeros.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

/// `∏ alice results = sign · ∏ bob results`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrelationConstraint {
    pub id: u8,
    pub alice: Vec<String>,
    pub bob: Vec<String>,
    pub sign: i8,
}

impl CorrelationConstraint {
    pub fn new(id: u8, alice: &[&str], bob: &[&str], sign: i8) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be ±1");
        Self {
            id,
            alice: alice.iter().map(|s| s.to_string()).collect(),
            bob: bob.iter().map(|s| s.to_string()).collect(),
            sign,
        }
    }

    pub fn with_sign(&self, sign: i8) -> Self {
        Self::new(
            self.id,
            &self.alice.iter().map(String::as_str).collect::<Vec<_>>(),
            &self.bob.iter().map(String::as_str).collect::<Vec<_>>(),
            sign,
        )
    }

    /// Human-readable identity, e.g. `A(D) A(u) = +B(Du)`.
    pub fn describe(&self) -> String {
        let side = |party: &str, labels: &[String]| {
            labels
                .iter()
                .map(|l| format!("{party}({l})"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let sign = if self.sign > 0 { "+" } else { "-" };
        format!("{} = {}{}", side("A", &self.alice), sign, side("B", &self.bob))
    }
}

/// The nine identities in their canonical order.
pub fn nine_constraints() -> Vec<CorrelationConstraint> {
    vec![
        CorrelationConstraint::new(1, &["D"], &["D"], -1),
        CorrelationConstraint::new(2, &["d"], &["d"], -1),
        CorrelationConstraint::new(3, &["U"], &["U"], 1),
        CorrelationConstraint::new(4, &["u"], &["u"], -1),
        CorrelationConstraint::new(5, &["Dd"], &["D", "d"], 1),
        CorrelationConstraint::new(6, &["Uu"], &["U", "u"], -1),
        CorrelationConstraint::new(7, &["D", "u"], &["Du"], 1),
        CorrelationConstraint::new(8, &["U", "d"], &["Ud"], -1),
        CorrelationConstraint::new(9, &["Dd", "Uu"], &["Du", "Ud"], 1),
    ]
}

fn product_of(observables: &[DichotomicObservable]) -> Result<ComplexMatrix> {
    for (i, a) in observables.iter().enumerate() {
        for b in &observables[i + 1..] {
            if !commute(a, b)? {
                return Err(Error::NonCommuting(a.label().into(), b.label().into()));
            }
        }
    }
    let mut acc = ComplexMatrix::identity(observables.first().ok_or(Error::EmptyContext)?.dim());
    for o in observables {
        acc = acc.matmul(o.matrix())?;
    }
    Ok(acc)
}

/// `Re ⟨state| (∏ alice) ⊗ (∏ bob) |state⟩`. Fails if the imaginary part
/// exceeds the global tolerance.
pub fn correlation_value(
    state: &StateVector,
    c: &CorrelationConstraint,
    obs: &ObservableSet,
) -> Result<f64> {
    let alice = product_of(&obs.resolve(&c.alice)?)?;
    let bob = product_of(&obs.resolve(&c.bob)?)?;
    let z = state.expectation(&tensor(&alice, &bob))?;
    if z.im.abs() > TOLERANCE {
        return Err(Error::ComplexExpectation(z.im));
    }
    Ok(z.re)
}

/// Measurement contexts for the two sides of a constraint.
pub fn constraint_contexts(
    c: &CorrelationConstraint,
    obs: &ObservableSet,
) -> Result<(MeasurementContext, MeasurementContext)> {
    Ok((
        build_context(&obs.resolve(&c.alice)?)?,
        build_context(&obs.resolve(&c.bob)?)?,
    ))
}

/// Born probability of one pair of joint outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct JointProbability {
    pub alice_index: usize,
    pub bob_index: usize,
    pub probability: f64,
}

/// `P(a, b) = ⟨state| P_a ⊗ P_b |state⟩` over all pairs of joint outcomes,
/// Alice's index slowest.
pub fn joint_distribution(
    state: &StateVector,
    alice: &MeasurementContext,
    bob: &MeasurementContext,
) -> Result<Vec<JointProbability>> {
    let mut out = Vec::with_capacity(alice.joint_projectors().len() * bob.joint_projectors().len());
    for (ai, a) in alice.joint_projectors().iter().enumerate() {
        for (bi, b) in bob.joint_projectors().iter().enumerate() {
            let p = state.expectation(&tensor(&a.projector, &b.projector))?;
            out.push(JointProbability {
                alice_index: ai,
                bob_index: bi,
                probability: p.re,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerfectCorrelationCheck {
    pub holds: bool,
    /// Largest Born weight carried by any single outcome that violates the
    /// identity.
    pub max_violating_probability: f64,
}

/// Checks that every outcome with nonzero probability satisfies the identity.
pub fn verify_perfect(
    state: &StateVector,
    c: &CorrelationConstraint,
    obs: &ObservableSet,
) -> Result<PerfectCorrelationCheck> {
    let (alice, bob) = constraint_contexts(c, obs)?;
    let dist = joint_distribution(state, &alice, &bob)?;
    let mut max_violating: f64 = 0.0;
    for cell in &dist {
        let a = alice.joint_projectors()[cell.alice_index].product();
        let b = bob.joint_projectors()[cell.bob_index].product();
        if a != c.sign * b {
            max_violating = max_violating.max(cell.probability);
        }
    }
    Ok(PerfectCorrelationCheck {
        holds: max_violating <= PROBABILITY_FLOOR,
        max_violating_probability: max_violating,
    })
}

/// Serialized form of one constraint check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub id: u8,
    pub alice: Vec<String>,
    pub bob: Vec<String>,
    pub sign: i8,
    pub value: f64,
    pub holds: bool,
    pub max_violating_probability: f64,
}

pub fn constraint_report(
    state: &StateVector,
    c: &CorrelationConstraint,
    obs: &ObservableSet,
) -> Result<ConstraintReport> {
    let value = correlation_value(state, c, obs)?;
    let check = verify_perfect(state, c, obs)?;
    Ok(ConstraintReport {
        id: c.id,
        alice: c.alice.clone(),
        bob: c.bob.clone(),
        sign: c.sign,
        value,
        holds: check.holds,
        max_violating_probability: check.max_violating_probability,
    })
}

/// Conjugates every canonical observable by `r` (`O ↦ r O r†`). Keys keep the
/// canonical labels so the nine constraints apply unchanged; the observables
/// themselves are labelled `R(O)`.
pub fn rotated_constraints(r: &ComplexMatrix) -> Result<(ObservableSet, Vec<CorrelationConstraint>)> {
    if r.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: r.dim(),
        });
    }
    let defect = r.unitarity_defect();
    if defect > TOLERANCE {
        return Err(Error::NotUnitary(defect));
    }
    let canonical = canonical_observables();
    let mut rotated = ObservableSet::default();
    for label in CANONICAL_LABELS {
        let o = canonical.get(label)?;
        rotated.insert(label, o.conjugated(r, format!("R({label})"))?);
    }
    Ok((rotated, nine_constraints()))
}
