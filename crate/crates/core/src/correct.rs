//! Region correctability, dressed-cleanability and checkers for the
//! standard correctable-set lemmas.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::SubsystemCode;
use crate::pauli::{kernel_on_support, BitMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("qubit {0} out of range for n = {1}")]
    OutOfRange(usize, usize),
    #[error("region w is not a subset of region u")]
    NotSubset,
    #[error("regions overlap on qubit {0}")]
    Overlap(usize),
    #[error("parts do not cover all qubits (missing qubit {0})")]
    NotCovering(usize),
    #[error("lemma requires an abelian gauge group")]
    NonAbelian,
}

/// A set of qubits, kept sorted and deduplicated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Region {
    pub qubits: Vec<usize>,
}

impl Region {
    pub fn new(qubits: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = qubits.into_iter().collect();
        Region { qubits: set.into_iter().collect() }
    }

    pub fn checked(n: usize, qubits: impl IntoIterator<Item = usize>) -> Result<Self, RegionError> {
        let r = Region::new(qubits);
        match r.qubits.last() {
            Some(&q) if q >= n => Err(RegionError::OutOfRange(q, n)),
            _ => Ok(r),
        }
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.qubits.binary_search(&q).is_ok()
    }

    pub fn union(&self, other: &Region) -> Region {
        Region::new(self.qubits.iter().chain(&other.qubits).copied())
    }
}

fn kernel_in_gauge(code: &SubsystemCode, u: &[usize], constraints: &BitMatrix) -> bool {
    let ker = kernel_on_support(u, constraints).expect("region qubits must be < n");
    ker.rows().iter().all(|v| code.in_gauge_span(v))
}

/// No nontrivial dressed logical is supported on `u`.
pub fn is_correctable(code: &SubsystemCode, u: &[usize]) -> bool {
    kernel_in_gauge(code, u, code.stabilizer_basis())
}

/// No nontrivial bare logical is supported on `u`.
pub fn is_dressed_cleanable(code: &SubsystemCode, u: &[usize]) -> bool {
    kernel_in_gauge(code, u, &code.gauge_span_basis())
}

/// The implication "u correctable ⇒ w correctable" for `w ⊆ u`.
pub fn check_subset_closure(code: &SubsystemCode, u: &Region, w: &Region) -> Result<bool, RegionError> {
    if !w.qubits.iter().all(|&q| u.contains(q)) {
        return Err(RegionError::NotSubset);
    }
    Ok(!is_correctable(code, &u.qubits) || is_correctable(code, &w.qubits))
}

/// Adjacency lists of the interaction graph.
pub fn interaction_graph(code: &SubsystemCode) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); code.n()];
    for &(i, j) in code.interaction_pairs().keys() {
        adj[i].push(j);
        adj[j].push(i);
    }
    adj
}

/// Outer boundary ∪ inner boundary of `u`.
pub fn boundary(code: &SubsystemCode, u: &Region) -> Region {
    boundary_with(&interaction_graph(code), u)
}

pub(crate) fn boundary_with(adj: &[Vec<usize>], u: &Region) -> Region {
    let mut out = BTreeSet::new();
    for &q in &u.qubits {
        for &p in &adj[q] {
            if !u.contains(p) {
                out.insert(p);
                out.insert(q);
            }
        }
    }
    Region { qubits: out.into_iter().collect() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeClass {
    Subsystem,
    Projector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnionReport {
    pub decoupled: bool,
    pub each_correctable: Vec<bool>,
    pub hypotheses_met: bool,
    /// Union dressed-cleanable (subsystem) or correctable (projector).
    pub conclusion: bool,
    /// False only if the hypotheses hold and the conclusion fails.
    pub holds: bool,
}

pub fn check_union_lemma(code: &SubsystemCode, regions: &[Region], mode: CodeClass) -> Result<UnionReport, RegionError> {
    if mode == CodeClass::Projector && !code.is_abelian() {
        return Err(RegionError::NonAbelian);
    }
    let mut owner = vec![usize::MAX; code.n()];
    for (i, r) in regions.iter().enumerate() {
        for &q in &r.qubits {
            if q >= code.n() {
                return Err(RegionError::OutOfRange(q, code.n()));
            }
            if owner[q] != usize::MAX {
                return Err(RegionError::Overlap(q));
            }
            owner[q] = i;
        }
    }
    let decoupled = code.interaction_pairs().keys().all(|&(i, j)| {
        let (a, b) = (owner[i], owner[j]);
        a == usize::MAX || b == usize::MAX || a == b
    });
    let each_correctable: Vec<bool> = regions.iter().map(|r| is_correctable(code, &r.qubits)).collect();
    let hypotheses_met = decoupled && each_correctable.iter().all(|&c| c);
    let all: Vec<usize> = regions.iter().flat_map(|r| r.qubits.iter().copied()).collect();
    let conclusion = match mode {
        CodeClass::Subsystem => is_dressed_cleanable(code, &all),
        CodeClass::Projector => is_correctable(code, &all),
    };
    Ok(UnionReport { decoupled, each_correctable, hypotheses_met, conclusion, holds: !hypotheses_met || conclusion })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub u_correctable: bool,
    pub t_correctable: bool,
    pub t_covers_boundary: bool,
    pub hypotheses_met: bool,
    pub conclusion: bool,
    pub holds: bool,
}

pub fn check_expansion_lemma(code: &SubsystemCode, u: &Region, t: &Region) -> ExpansionReport {
    let adj = interaction_graph(code);
    expansion_with(code, &adj, u, t)
}

pub(crate) fn expansion_with(code: &SubsystemCode, adj: &[Vec<usize>], u: &Region, t: &Region) -> ExpansionReport {
    let u_correctable = is_correctable(code, &u.qubits);
    let t_correctable = is_correctable(code, &t.qubits);
    let t_covers_boundary = boundary_with(adj, u).qubits.iter().all(|&q| t.contains(q));
    let hypotheses_met = u_correctable && t_correctable && t_covers_boundary;
    let conclusion = is_correctable(code, &u.union(t).qubits);
    ExpansionReport { u_correctable, t_correctable, t_covers_boundary, hypotheses_met, conclusion, holds: !hypotheses_met || conclusion }
}

fn check_partition(n: usize, parts: &[&Region]) -> Result<(), RegionError> {
    let mut seen = vec![false; n];
    for r in parts {
        for &q in &r.qubits {
            if q >= n {
                return Err(RegionError::OutOfRange(q, n));
            }
            if seen[q] {
                return Err(RegionError::Overlap(q));
            }
            seen[q] = true;
        }
    }
    match seen.iter().position(|&s| !s) {
        Some(q) => Err(RegionError::NotCovering(q)),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbReport {
    pub k: usize,
    pub a_cleanable: bool,
    pub b_size: usize,
    /// `k ≤ |B|`, evaluated only when A is dressed-cleanable.
    pub bound: Option<bool>,
}

impl AbReport {
    pub fn holds(&self) -> bool {
        self.bound != Some(false)
    }
}

pub fn ab_bound_check(code: &SubsystemCode, a: &Region, b: &Region) -> Result<AbReport, RegionError> {
    check_partition(code.n(), &[a, b])?;
    let k = code.k();
    let a_cleanable = is_dressed_cleanable(code, &a.qubits);
    let bound = a_cleanable.then_some(k <= b.len());
    Ok(AbReport { k, a_cleanable, b_size: b.len(), bound })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbcReport {
    pub k: usize,
    pub a_correctable: bool,
    pub b_correctable: bool,
    pub c_size: usize,
    /// `k ≤ |C|`, evaluated only when A and B are correctable.
    pub bound: Option<bool>,
}

impl AbcReport {
    pub fn holds(&self) -> bool {
        self.bound != Some(false)
    }
}

pub fn abc_bound_check(code: &SubsystemCode, a: &Region, b: &Region, c: &Region) -> Result<AbcReport, RegionError> {
    check_partition(code.n(), &[a, b, c])?;
    if !code.is_abelian() {
        return Err(RegionError::NonAbelian);
    }
    let k = code.k();
    let a_correctable = is_correctable(code, &a.qubits);
    let b_correctable = is_correctable(code, &b.qubits);
    let bound = (a_correctable && b_correctable).then_some(k <= c.len());
    Ok(AbcReport { k, a_correctable, b_correctable, c_size: c.len(), bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five() -> SubsystemCode {
        SubsystemCode::from_strings(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]).unwrap()
    }

    #[test]
    fn empty_region() {
        let c = five();
        assert!(is_correctable(&c, &[]));
        assert!(is_dressed_cleanable(&c, &[]));
    }

    #[test]
    fn full_set_not_cleanable() {
        let c = five();
        let all: Vec<usize> = (0..5).collect();
        assert!(!is_dressed_cleanable(&c, &all));
    }

    #[test]
    fn abc_five_qubit() {
        let c = five();
        let r = abc_bound_check(&c, &Region::new([0, 1]), &Region::new([2, 3]), &Region::new([4])).unwrap();
        assert!(r.a_correctable && r.b_correctable);
        assert_eq!(r.bound, Some(true));
    }

    #[test]
    fn ab_trivial_cases() {
        let c = five();
        let all = Region::new(0..5);
        let r = ab_bound_check(&c, &Region::default(), &all).unwrap();
        assert_eq!(r.bound, Some(true));
        let r = ab_bound_check(&c, &all, &Region::default()).unwrap();
        assert!(!r.a_cleanable);
        assert_eq!(r.bound, None);
    }

    #[test]
    fn partition_errors() {
        let c = five();
        assert_eq!(ab_bound_check(&c, &Region::new([0]), &Region::new([0, 1, 2, 3, 4])), Err(RegionError::Overlap(0)));
        assert_eq!(ab_bound_check(&c, &Region::new([0]), &Region::new([1, 2, 3])), Err(RegionError::NotCovering(4)));
        let bs = SubsystemCode::from_strings(&["XIXI", "IXIX", "ZZII", "IIZZ"]).unwrap();
        let all = Region::new(0..4);
        assert_eq!(abc_bound_check(&bs, &all, &Region::default(), &Region::default()), Err(RegionError::NonAbelian));
    }

    #[test]
    fn subset_requires_subset() {
        let c = five();
        assert_eq!(check_subset_closure(&c, &Region::new([0]), &Region::new([1])), Err(RegionError::NotSubset));
        assert_eq!(check_subset_closure(&c, &Region::new(0..5), &Region::new([1])), Ok(true));
    }
}
