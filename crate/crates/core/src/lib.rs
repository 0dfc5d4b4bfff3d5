//! Numerical verification of the inequality-free Bell contradiction for two
//! spin-3/2 particles in the singlet state.
//!
//! The crate builds the singlet and the eight dichotomic observables
//! `D, d, U, u, Dd, Du, Ud, Uu`, checks the nine perfect correlations between
//! Alice's and Bob's results exactly, enumerates every local ±1 assignment to
//! show none reproduces them, and repeats the quantum check after an arbitrary
//! common rotation of all measuring devices.
//!
//! ```
//! use nonlocal_core::{canonical_observables, correlation_value, nine_constraints, singlet, Spin};
//!
//! let psi = singlet(Spin::THREE_HALVES).unwrap();
//! let obs = canonical_observables();
//! for c in nine_constraints() {
//!     let v = correlation_value(&psi, &c, &obs).unwrap();
//!     assert!((v - c.sign as f64).abs() < 1e-12);
//! }
//! assert_eq!(nonlocal_core::exhaustive_search().perfectly_satisfying, 0);
//! ```

pub mod correlations;
pub mod eigen;
pub mod error;
pub mod lhv;
pub mod matrix;
pub mod observables;
pub mod rotations;
pub mod sampling;
pub mod spin;
pub mod state;

pub use correlations::{
    constraint_report, correlation_value, joint_distribution, nine_constraints,
    rotated_constraints, verify_perfect, ConstraintReport, CorrelationConstraint,
    PerfectCorrelationCheck, PROBABILITY_FLOOR,
};
pub use eigen::{hermitian_eigensystem, matrix_exponential_skew_hermitian, SpectralComponent};
pub use error::{Error, Result};
pub use lhv::{
    constraint_satisfied, exhaustive_search, parity_argument, LhvAssignment, LhvSearchReport,
    ParityReport, Party,
};
pub use matrix::{tensor, ComplexMatrix, TOLERANCE};
pub use num_complex::Complex64;
pub use observables::{
    build_context, canonical_observables, commute, sz_readout, DichotomicObservable,
    MeasurementContext, ObservableSet, CANONICAL_LABELS,
};
pub use rotations::{random_rotation, rotation_operator, rotation_stream, RotationSpec};
pub use sampling::{run_experiment, sample_round, ConstraintTally, ExperimentStats, RoundOutcome};
pub use spin::{spin_operators, Spin, SpinTriple};
pub use state::{invariance_defect, rotation_overlap, singlet, StateVector};
