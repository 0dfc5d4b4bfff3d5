//! Local hidden-variable side: preexisting ±1 values for the twelve local
//! observables, exhaustive search over all 2¹² assignments, and the symbolic
//! parity count that explains why none works.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::correlations::{nine_constraints, CorrelationConstraint};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn prefix(self) -> &'static str {
        match self {
            Party::Alice => "A",
            Party::Bob => "B",
        }
    }
}

/// The twelve classical variables in enumeration order. Alice's products are
/// `Dd`, `Uu`; Bob's are `Du`, `Ud`.
pub const LHV_LABELS: [(Party, &str); 12] = [
    (Party::Alice, "D"),
    (Party::Alice, "d"),
    (Party::Alice, "U"),
    (Party::Alice, "u"),
    (Party::Alice, "Dd"),
    (Party::Alice, "Uu"),
    (Party::Bob, "D"),
    (Party::Bob, "d"),
    (Party::Bob, "U"),
    (Party::Bob, "u"),
    (Party::Bob, "Du"),
    (Party::Bob, "Ud"),
];

pub const TOTAL_ASSIGNMENTS: u32 = 1 << LHV_LABELS.len();

fn qualified(party: Party, label: &str) -> String {
    format!("{}:{}", party.prefix(), label)
}

fn position(party: Party, label: &str) -> Option<usize> {
    LHV_LABELS
        .iter()
        .position(|&(p, l)| p == party && l == label)
}

/// A ±1 value for each of the twelve labels.
///
/// Assignment `index` sets label `i` to −1 iff bit `11 − i` of `index` is set,
/// so bit 0 drives the last label (`B:Ud`) and index 0 is all +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "BTreeMap<String, i8>", try_from = "BTreeMap<String, i8>")]
pub struct LhvAssignment {
    values: [i8; 12],
}

impl LhvAssignment {
    pub fn from_index(index: u32) -> Self {
        assert!(index < TOTAL_ASSIGNMENTS, "assignment index out of range");
        let n = LHV_LABELS.len();
        let mut values = [1i8; 12];
        for (i, v) in values.iter_mut().enumerate() {
            if index >> (n - 1 - i) & 1 == 1 {
                *v = -1;
            }
        }
        Self { values }
    }

    pub fn index(&self) -> u32 {
        let n = LHV_LABELS.len();
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == -1)
            .map(|(i, _)| 1 << (n - 1 - i))
            .sum()
    }

    pub fn get(&self, party: Party, label: &str) -> Result<i8> {
        position(party, label)
            .map(|i| self.values[i])
            .ok_or_else(|| Error::UnknownLabel(qualified(party, label)))
    }

    pub fn values(&self) -> &[i8; 12] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (String, i8)> + '_ {
        LHV_LABELS
            .iter()
            .zip(self.values)
            .map(|(&(p, l), v)| (qualified(p, l), v))
    }
}

impl From<LhvAssignment> for BTreeMap<String, i8> {
    fn from(a: LhvAssignment) -> Self {
        a.iter().collect()
    }
}

impl TryFrom<BTreeMap<String, i8>> for LhvAssignment {
    type Error = String;

    fn try_from(map: BTreeMap<String, i8>) -> std::result::Result<Self, String> {
        if map.len() != LHV_LABELS.len() {
            return Err(format!("expected 12 labels, got {}", map.len()));
        }
        let mut values = [0i8; 12];
        for (i, &(p, l)) in LHV_LABELS.iter().enumerate() {
            let key = qualified(p, l);
            match map.get(&key) {
                Some(&v) if v == 1 || v == -1 => values[i] = v,
                Some(v) => return Err(format!("{key} has value {v}, expected ±1")),
                None => return Err(format!("missing label {key}")),
            }
        }
        Ok(Self { values })
    }
}

impl fmt::Display for LhvAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .iter()
            .map(|(k, v)| format!("{k}={}", if v > 0 { "+1" } else { "-1" }))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Whether the preexisting values satisfy `∏ A:ℓ = sign · ∏ B:ℓ`.
pub fn constraint_satisfied(a: &LhvAssignment, c: &CorrelationConstraint) -> Result<bool> {
    let side = |party, labels: &[String]| -> Result<i8> {
        labels
            .iter()
            .try_fold(1i8, |acc, l| Ok(acc * a.get(party, l)?))
    };
    Ok(side(Party::Alice, &c.alice)? == c.sign * side(Party::Bob, &c.bob)?)
}

pub fn satisfied_count(a: &LhvAssignment, constraints: &[CorrelationConstraint]) -> Result<usize> {
    let mut n = 0;
    for c in constraints {
        if constraint_satisfied(a, c)? {
            n += 1;
        }
    }
    Ok(n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LhvSearchReport {
    #[serde(rename = "total")]
    pub total_assignments: u32,
    #[serde(rename = "perfect")]
    pub perfectly_satisfying: u32,
    pub max_satisfied: usize,
    /// Lowest-index assignment reaching `max_satisfied`.
    pub witness: Option<LhvAssignment>,
    /// `histogram[k]` = number of assignments satisfying exactly `k` constraints.
    pub histogram: Vec<u32>,
    /// True when every assignment violates an odd number of constraints.
    pub violations_always_odd: bool,
}

/// Exhaustive search against the nine canonical identities.
pub fn exhaustive_search() -> LhvSearchReport {
    exhaustive_search_with(&nine_constraints()).expect("canonical constraints use the twelve labels")
}

pub fn exhaustive_search_with(constraints: &[CorrelationConstraint]) -> Result<LhvSearchReport> {
    let mut histogram = vec![0u32; constraints.len() + 1];
    let mut witness: Option<(usize, LhvAssignment)> = None;
    let mut always_odd = true;
    for index in 0..TOTAL_ASSIGNMENTS {
        let a = LhvAssignment::from_index(index);
        let k = satisfied_count(&a, constraints)?;
        histogram[k] += 1;
        always_odd &= (constraints.len() - k) % 2 == 1;
        if witness.is_none_or(|(best, _)| k > best) {
            witness = Some((k, a));
        }
    }
    let (max_satisfied, witness) = witness.expect("at least one assignment");
    Ok(LhvSearchReport {
        total_assignments: TOTAL_ASSIGNMENTS,
        perfectly_satisfying: histogram[constraints.len()],
        max_satisfied,
        witness: Some(witness),
        histogram,
        violations_always_odd: always_odd,
    })
}

/// Outcome of multiplying all identities together symbolically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    /// Sign of the product of the left-hand sides, valid for every assignment.
    pub lhs_sign: i8,
    /// Sign of the product of the right-hand sides, valid for every assignment.
    pub rhs_sign: i8,
    /// Occurrences of each qualified label on its own side.
    pub label_counts: BTreeMap<String, u32>,
}

/// Counts occurrences of each label on its side. When every count is even,
/// each value enters squared, so the product of the left-hand sides is +1 and
/// the product of the right-hand sides is the product of the signs. Returns
/// `None` if some label occurs an odd number of times.
pub fn parity_argument_for(constraints: &[CorrelationConstraint]) -> Option<ParityReport> {
    let mut counts: BTreeMap<String, u32> = BTreeMap::new();
    for c in constraints {
        for l in &c.alice {
            *counts.entry(qualified(Party::Alice, l)).or_default() += 1;
        }
        for l in &c.bob {
            *counts.entry(qualified(Party::Bob, l)).or_default() += 1;
        }
    }
    if counts.values().any(|n| n % 2 == 1) {
        return None;
    }
    Some(ParityReport {
        lhs_sign: 1,
        rhs_sign: constraints.iter().map(|c| c.sign).product(),
        label_counts: counts,
    })
}

/// Parity count for the nine canonical identities; every label appears twice.
pub fn parity_argument() -> ParityReport {
    let report = parity_argument_for(&nine_constraints()).expect("every label occurs an even number of times");
    assert_eq!(report.label_counts.len(), 12);
    assert!(report.label_counts.values().all(|&n| n == 2));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip_and_bit_order() {
        let all_plus = LhvAssignment::from_index(0);
        assert!(all_plus.values().iter().all(|&v| v == 1));
        let last = LhvAssignment::from_index(1);
        assert_eq!(last.get(Party::Bob, "Ud").unwrap(), -1);
        assert_eq!(last.values().iter().filter(|&&v| v == -1).count(), 1);
        let first = LhvAssignment::from_index(1 << 11);
        assert_eq!(first.get(Party::Alice, "D").unwrap(), -1);
        for i in [0, 1, 77, 2048, 4095] {
            assert_eq!(LhvAssignment::from_index(i).index(), i);
        }
    }

    #[test]
    fn all_plus_assignment() {
        let a = LhvAssignment::from_index(0);
        let cs = nine_constraints();
        assert!(constraint_satisfied(&a, &cs[2]).unwrap());
        assert!(!constraint_satisfied(&a, &cs[0]).unwrap());
        assert_eq!(satisfied_count(&a, &cs).unwrap(), 4);
    }

    #[test]
    fn missing_label() {
        let a = LhvAssignment::from_index(0);
        let c = CorrelationConstraint::new(0, &["Du"], &["D"], 1);
        assert_eq!(
            constraint_satisfied(&a, &c).unwrap_err(),
            Error::UnknownLabel("A:Du".into())
        );
    }

    #[test]
    fn odd_label_count_has_no_parity_report() {
        let cs = vec![CorrelationConstraint::new(1, &["D"], &["D"], -1)];
        assert!(parity_argument_for(&cs).is_none());
    }

    #[test]
    fn assignment_serializes_as_label_map() {
        let a = LhvAssignment::from_index(5);
        let json = serde_json::to_string(&a).unwrap();
        assert!(json.contains("\"B:Ud\":-1"));
        let back: LhvAssignment = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<LhvAssignment>("{\"A:D\":1}").is_err());
    }
}
