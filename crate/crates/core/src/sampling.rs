//! Born-rule Monte Carlo of joint measurement rounds.
//!
//! Each round draws one pair of joint outcomes `(a, b)` from the full
//! distribution `⟨ψ|P_a ⊗ P_b|ψ⟩`. Random numbers come from `ChaCha8Rng`:
//! [`run_experiment`] seeds it with `seed_from_u64(seed)` and gives the k-th
//! constraint its own stream via `set_stream(k)`, so outcome streams are
//! reproducible across builds and independent of constraint order.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::correlations::{constraint_contexts, joint_distribution, CorrelationConstraint};
use crate::error::{Error, Result};
use crate::observables::{MeasurementContext, ObservableSet};
use crate::state::StateVector;

/// Allowed deviation of the total Born weight from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundOutcome {
    pub alice_outcomes: BTreeMap<String, i8>,
    pub bob_outcomes: BTreeMap<String, i8>,
    /// `alice_index · (number of Bob cells) + bob_index`.
    pub joint_probability_index: usize,
}

/// Precomputed cumulative distribution over joint outcome pairs.
#[derive(Debug, Clone)]
pub struct JointSampler {
    cells: Vec<(usize, usize)>,
    cumulative: Vec<f64>,
}

impl JointSampler {
    pub fn new(
        state: &StateVector,
        alice: &MeasurementContext,
        bob: &MeasurementContext,
    ) -> Result<Self> {
        let dist = joint_distribution(state, alice, bob)?;
        let weights: Vec<f64> = dist.iter().map(|c| c.probability.max(0.0)).collect();
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::Unnormalized(total));
        }
        let mut acc = 0.0;
        let mut cumulative: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w / total;
                acc
            })
            .collect();
        if let Some(last) = cumulative.last_mut() {
            *last = 1.0;
        }
        Ok(Self {
            cells: dist.iter().map(|c| (c.alice_index, c.bob_index)).collect(),
            cumulative,
        })
    }

    /// Index into the joint distribution, and the (Alice, Bob) cell pair.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, (usize, usize)) {
        let u: f64 = rng.random();
        let k = self.cumulative.partition_point(|&c| c <= u);
        let k = k.min(self.cells.len() - 1);
        (k, self.cells[k])
    }
}

fn outcome_map(ctx: &MeasurementContext, cell: usize) -> BTreeMap<String, i8> {
    ctx.labels()
        .into_iter()
        .map(String::from)
        .zip(ctx.joint_projectors()[cell].outcomes.iter().copied())
        .collect()
}

/// One measurement round with both parties' contexts.
pub fn sample_round<R: Rng + ?Sized>(
    state: &StateVector,
    alice: &MeasurementContext,
    bob: &MeasurementContext,
    rng: &mut R,
) -> Result<RoundOutcome> {
    let sampler = JointSampler::new(state, alice, bob)?;
    let (index, (a, b)) = sampler.sample(rng);
    Ok(RoundOutcome {
        alice_outcomes: outcome_map(alice, a),
        bob_outcomes: outcome_map(bob, b),
        joint_probability_index: index,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintTally {
    pub id: u8,
    pub shots: u64,
    pub agree: u64,
    pub disagree: u64,
    /// `(agree − disagree)/shots`, or 0 with `no_data` set when `shots = 0`.
    pub empirical_value: f64,
    pub no_data: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentStats {
    pub shots: u64,
    pub seed: u64,
    pub per_constraint: Vec<ConstraintTally>,
}

/// Runs `shots` rounds per constraint and tallies whether
/// `∏ alice = sign · ∏ bob` held in each.
pub fn run_experiment(
    state: &StateVector,
    constraints: &[CorrelationConstraint],
    obs: &ObservableSet,
    shots: u64,
    seed: u64,
) -> Result<ExperimentStats> {
    let mut per_constraint = Vec::with_capacity(constraints.len());
    for (k, c) in constraints.iter().enumerate() {
        let (alice, bob) = constraint_contexts(c, obs)?;
        let sampler = JointSampler::new(state, &alice, &bob)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);

        let mut agree = 0u64;
        for _ in 0..shots {
            let (_, (a, b)) = sampler.sample(&mut rng);
            let pa = alice.joint_projectors()[a].product();
            let pb = bob.joint_projectors()[b].product();
            if pa == c.sign * pb {
                agree += 1;
            }
        }
        let disagree = shots - agree;
        let empirical_value = if shots == 0 {
            0.0
        } else {
            (agree as f64 - disagree as f64) / shots as f64
        };
        per_constraint.push(ConstraintTally {
            id: c.id,
            shots,
            agree,
            disagree,
            empirical_value,
            no_data: shots == 0,
        });
    }
    Ok(ExperimentStats {
        shots,
        seed,
        per_constraint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::nine_constraints;
    use crate::observables::{build_context, canonical_observables};
    use crate::spin::Spin;
    use crate::state::singlet;

    fn psi() -> StateVector {
        singlet(Spin::THREE_HALVES).unwrap()
    }

    #[test]
    fn zero_shots() {
        let stats = run_experiment(&psi(), &nine_constraints(), &canonical_observables(), 0, 0).unwrap();
        assert_eq!(stats.per_constraint.len(), 9);
        for t in &stats.per_constraint {
            assert_eq!((t.agree, t.disagree, t.empirical_value, t.no_data), (0, 0, 0.0, true));
        }
    }

    #[test]
    fn big_d_always_opposite() {
        let obs = canonical_observables();
        let ctx = build_context(&obs.resolve(&["D"]).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let r = sample_round(&psi(), &ctx, &ctx, &mut rng).unwrap();
            assert_eq!(r.alice_outcomes["D"], -r.bob_outcomes["D"]);
        }
    }

    #[test]
    fn sz_basis_rounds_are_anti_aligned() {
        let obs = canonical_observables();
        let ctx = build_context(&obs.resolve(&["D", "d"]).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let r = sample_round(&psi(), &ctx, &ctx, &mut rng).unwrap();
            // Alice in |m⟩ forces Bob in |−m⟩: D flips, d flips.
            assert_eq!(r.alice_outcomes["D"], -r.bob_outcomes["D"]);
            assert_eq!(r.alice_outcomes["d"], -r.bob_outcomes["d"]);
        }
    }

    #[test]
    fn rounds_are_deterministic_per_seed() {
        let obs = canonical_observables();
        let ctx = build_context(&obs.resolve(&["U"]).unwrap()).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..50)
                .map(|_| sample_round(&psi(), &ctx, &ctx, &mut rng).unwrap().joint_probability_index)
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(17), draw(17));
        assert_ne!(draw(17), draw(18));
    }

    #[test]
    fn unnormalized_state_is_reported() {
        let obs = canonical_observables();
        let ctx = build_context(&obs.resolve(&["D"]).unwrap()).unwrap();
        let scaled = psi().evolve(&crate::matrix::ComplexMatrix::identity(16).scale(
            num_complex::Complex64::new(1.1, 0.0),
        )).unwrap();
        assert!(matches!(
            JointSampler::new(&scaled, &ctx, &ctx),
            Err(Error::Unnormalized(_))
        ));
    }
}
