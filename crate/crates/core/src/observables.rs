//! Dichotomic (±1-valued) local observables on one spin-3/2 particle, and
//! joint measurement contexts of mutually compatible observables.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, TOLERANCE};

/// Stable labels of the eight canonical observables, generators first.
pub const CANONICAL_LABELS: [&str; 8] = ["D", "d", "U", "u", "Dd", "Du", "Ud", "Uu"];

/// A Hermitian involution, so its spectrum lies in {−1, +1}.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomicObservable {
    label: String,
    matrix: ComplexMatrix,
}

impl DichotomicObservable {
    pub fn new(label: impl Into<String>, matrix: ComplexMatrix) -> Result<Self> {
        let label = label.into();
        let herm = matrix.hermiticity_defect();
        if herm > TOLERANCE {
            return Err(Error::NotHermitian(herm));
        }
        let square = &matrix * &matrix;
        let deviation = square.max_abs_diff(&ComplexMatrix::identity(matrix.dim()))?;
        if deviation > TOLERANCE {
            return Err(Error::NotInvolution { label, deviation });
        }
        Ok(Self { label, matrix })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Spectral projector `(I + outcome·O)/2` onto the `outcome` eigenspace.
    pub fn projector(&self, outcome: i8) -> ComplexMatrix {
        let signed = self.matrix.scale(Complex64::new(outcome as f64, 0.0));
        (&ComplexMatrix::identity(self.dim()) + &signed).scale(Complex64::new(0.5, 0.0))
    }

    /// The product observable `self·other`, labelled `label`. The factors must
    /// commute, otherwise the product is not Hermitian.
    pub fn product(&self, other: &Self, label: impl Into<String>) -> Result<Self> {
        if !commute(self, other)? {
            return Err(Error::NonCommuting(self.label.clone(), other.label.clone()));
        }
        Self::new(label, self.matrix.matmul(&other.matrix)?)
    }

    /// `r·O·r†`, relabelled.
    pub fn conjugated(&self, r: &ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        let m = r.matmul(&self.matrix)?.matmul(&r.adjoint())?;
        Self::new(label, m)
    }
}

/// Observables keyed by label.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ObservableSet {
    map: BTreeMap<String, DichotomicObservable>,
}

impl ObservableSet {
    pub fn insert(&mut self, key: impl Into<String>, obs: DichotomicObservable) {
        self.map.insert(key.into(), obs);
    }

    pub fn get(&self, label: &str) -> Result<&DichotomicObservable> {
        self.map
            .get(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Resolves every label in order.
    pub fn resolve(&self, labels: &[impl AsRef<str>]) -> Result<Vec<DichotomicObservable>> {
        labels.iter().map(|l| self.get(l.as_ref()).cloned()).collect()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &DichotomicObservable)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// D, d, U, u as printed, plus the products Dd, Du, Ud, Uu.
pub fn canonical_observables() -> ObservableSet {
    let big_d = ComplexMatrix::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0]);
    let small_d = ComplexMatrix::from_real_diagonal(&[1.0, -1.0, 1.0, -1.0]);
    let big_u = ComplexMatrix::from_real_rows([
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ]);
    let small_u = ComplexMatrix::from_real_rows([
        [0.0, 1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
    ]);

    let generators = [("D", big_d), ("d", small_d), ("U", big_u), ("u", small_u)]
        .map(|(l, m)| DichotomicObservable::new(l, m).expect("generators are involutions"));
    let [big_d, small_d, big_u, small_u] = &generators;

    let mut set = ObservableSet::default();
    for g in &generators {
        set.insert(g.label(), g.clone());
    }
    for (a, b) in [(big_d, small_d), (big_d, small_u), (big_u, small_d), (big_u, small_u)] {
        let label = format!("{}{}", a.label(), b.label());
        let p = a.product(b, label.clone()).expect("product factors commute");
        set.insert(label, p);
    }
    set
}

/// `true` iff `‖ab − ba‖_max ≤ 1e−12`.
pub fn commute(a: &DichotomicObservable, b: &DichotomicObservable) -> Result<bool> {
    let c = a.matrix.commutator(&b.matrix)?;
    Ok(c.max_abs_diff(&ComplexMatrix::zeros(c.dim()))? <= TOLERANCE)
}

/// One cell of a joint measurement: the ±1 result of every observable in the
/// context, and the projector onto states producing it.
#[derive(Debug, Clone)]
pub struct JointOutcome {
    pub outcomes: Vec<i8>,
    pub projector: ComplexMatrix,
}

impl JointOutcome {
    pub fn product(&self) -> i8 {
        self.outcomes.iter().product()
    }
}

/// A list of pairwise commuting observables measured together.
#[derive(Debug, Clone)]
pub struct MeasurementContext {
    observables: Vec<DichotomicObservable>,
    joint: Vec<JointOutcome>,
}

impl MeasurementContext {
    pub fn observables(&self) -> &[DichotomicObservable] {
        &self.observables
    }

    pub fn labels(&self) -> Vec<&str> {
        self.observables.iter().map(|o| o.label()).collect()
    }

    pub fn joint_projectors(&self) -> &[JointOutcome] {
        &self.joint
    }

    pub fn dim(&self) -> usize {
        self.observables[0].dim()
    }
}

/// Intersects the ±1 eigenspaces of every observable. Outcome tuples are
/// enumerated with +1 before −1, first observable slowest; tuples whose joint
/// projector has rank zero are dropped.
pub fn build_context(observables: &[DichotomicObservable]) -> Result<MeasurementContext> {
    let first = observables.first().ok_or(Error::EmptyContext)?;
    for (i, a) in observables.iter().enumerate() {
        if a.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                actual: a.dim(),
            });
        }
        for b in &observables[i + 1..] {
            if !commute(a, b)? {
                return Err(Error::NonCommuting(a.label.clone(), b.label.clone()));
            }
        }
    }

    let k = observables.len();
    let mut joint = Vec::new();
    for code in 0..(1usize << k) {
        let outcomes: Vec<i8> = (0..k)
            .map(|i| if code >> (k - 1 - i) & 1 == 0 { 1 } else { -1 })
            .collect();
        let mut projector = ComplexMatrix::identity(first.dim());
        for (obs, &o) in observables.iter().zip(&outcomes) {
            projector = projector.matmul(&obs.projector(o))?;
        }
        if projector.trace().re > 0.5 {
            joint.push(JointOutcome {
                outcomes,
                projector,
            });
        }
    }
    Ok(MeasurementContext {
        observables: observables.to_vec(),
        joint,
    })
}

/// Maps an `S_z` result on a spin-3/2 particle to the values of `D` and `d`:
/// `D` is the sign of `S_z`, `d` is +1 for `S_z ∈ {3/2, −1/2}`.
pub fn sz_readout(sz_outcome: f64) -> Result<(i8, i8)> {
    match sz_outcome {
        1.5 => Ok((1, 1)),
        0.5 => Ok((1, -1)),
        -0.5 => Ok((-1, 1)),
        -1.5 => Ok((-1, -1)),
        x => Err(Error::InvalidSzOutcome(x)),
    }
}
