//! Subsystem codes given by gauge generators.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::correct::is_correctable;
use crate::gf2::{nullspace, Bits, Echelon};
use crate::pauli::{kernel_on_support, BitMatrix, PauliError, PauliVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("gauge generator {index} acts on {len} qubits, code has {n}")]
    GeneratorLength { index: usize, len: usize, n: usize },
    #[error("code encodes no logical qubits (k = 0)")]
    NoLogicalQubits,
}

/// On-disk form: `{ "n": int, "gauge_generators": [paulistring, ...] }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeFile {
    pub n: usize,
    pub gauge_generators: Vec<PauliVector>,
}

/// A subsystem code. Stabilizer codes are the special case of an abelian
/// gauge group.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "CodeFile", into = "CodeFile")]
pub struct SubsystemCode {
    n: usize,
    gauge_generators: Vec<PauliVector>,
    gauge_span: Echelon,
    stabilizer_basis: BitMatrix,
}

impl PartialEq for SubsystemCode {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.gauge_generators == other.gauge_generators
    }
}

impl TryFrom<CodeFile> for SubsystemCode {
    type Error = CodeError;
    fn try_from(f: CodeFile) -> Result<Self, CodeError> {
        SubsystemCode::new(f.n, f.gauge_generators)
    }
}

impl From<SubsystemCode> for CodeFile {
    fn from(c: SubsystemCode) -> CodeFile {
        CodeFile { n: c.n, gauge_generators: c.gauge_generators }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceResult {
    Exact(usize),
    /// Every region up to the cap is correctable.
    GreaterThan(usize),
}

impl DistanceResult {
    /// Exact distance, or the certified lower bound `cap + 1`.
    pub fn lower_bound(self) -> usize {
        match self {
            DistanceResult::Exact(d) => d,
            DistanceResult::GreaterThan(c) => c + 1,
        }
    }

    pub fn exact(self) -> Option<usize> {
        match self {
            DistanceResult::Exact(d) => Some(d),
            DistanceResult::GreaterThan(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParameters {
    pub n: usize,
    pub k: usize,
    pub g: usize,
    pub s: usize,
    /// Rank of the gauge span.
    pub r: usize,
    pub d: Option<DistanceResult>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalPair {
    pub index: usize,
    pub x_bar: PauliVector,
    pub z_bar: PauliVector,
}

impl SubsystemCode {
    pub fn new(n: usize, gauge_generators: Vec<PauliVector>) -> Result<Self, CodeError> {
        PauliVector::identity(n)?;
        for (index, g) in gauge_generators.iter().enumerate() {
            if g.n() != n {
                return Err(CodeError::GeneratorLength { index, len: g.n(), n });
            }
        }
        let gauge_span = Echelon::from_rows(2 * n, &gauge_generators.iter().map(PauliVector::to_row).collect::<Vec<_>>());
        let stabilizer_basis = center(n, &gauge_span);
        Ok(SubsystemCode { n, gauge_generators, gauge_span, stabilizer_basis })
    }

    /// Parses generator strings, as found in a code file.
    pub fn from_strings<S: AsRef<str>>(gens: &[S]) -> Result<Self, CodeError> {
        let ps = gens.iter().map(|s| s.as_ref().parse()).collect::<Result<Vec<PauliVector>, _>>()?;
        let n = ps.first().map_or(0, PauliVector::n);
        SubsystemCode::new(n, ps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gauge_generators(&self) -> &[PauliVector] {
        &self.gauge_generators
    }

    pub fn stabilizer_basis(&self) -> &BitMatrix {
        &self.stabilizer_basis
    }

    /// Canonical reduced basis of the gauge span.
    pub fn gauge_span_basis(&self) -> BitMatrix {
        let rows = self.gauge_span.rows().iter().map(|r| PauliVector::from_row(r).expect("n checked")).collect();
        BitMatrix::new(self.n, rows).expect("n checked")
    }

    pub fn in_gauge_span(&self, p: &PauliVector) -> bool {
        self.gauge_span.contains(&p.to_row())
    }

    pub fn gauge_rank(&self) -> usize {
        self.gauge_span.rank()
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.gauge_generators;
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| !g[i].anticommutes(&g[j])))
    }

    pub fn parameters(&self) -> CodeParameters {
        let r = self.gauge_span.rank();
        let s = self.stabilizer_basis.len();
        let g = (r - s) / 2;
        CodeParameters { n: self.n, k: self.n - s - g, g, s, r, d: None }
    }

    pub fn k(&self) -> usize {
        self.parameters().k
    }

    /// Smallest number of qubits supporting a dressed logical operator,
    /// searched up to `weight_cap`.
    pub fn distance(&self, weight_cap: usize) -> Result<DistanceResult, CodeError> {
        if self.k() == 0 {
            return Err(CodeError::NoLogicalQubits);
        }
        let cap = weight_cap.min(self.n);
        for w in 1..=cap {
            let found = (0..self.n).combinations(w).any(|u| !is_correctable(self, &u));
            if found {
                return Ok(DistanceResult::Exact(w));
            }
        }
        Ok(DistanceResult::GreaterThan(weight_cap))
    }

    /// `k` pairs of bare logical operators, built by symplectic
    /// Gram-Schmidt on the centralizer of the gauge group modulo the gauge
    /// span.
    pub fn logical_representatives(&self) -> Result<Vec<LogicalPair>, CodeError> {
        let k = self.k();
        if k == 0 {
            return Err(CodeError::NoLogicalQubits);
        }
        let all: Vec<usize> = (0..self.n).collect();
        let cent = kernel_on_support(&all, &self.gauge_span_basis())?;
        let mut span = self.gauge_span.clone();
        let mut pool: Vec<PauliVector> = Vec::new();
        for v in cent.rows() {
            if span.insert(v.to_row()) {
                pool.push(v.clone());
            }
        }
        debug_assert_eq!(pool.len(), 2 * k);
        let mut pairs = Vec::with_capacity(k);
        while let Some(a) = pool.first().cloned() {
            pool.remove(0);
            let j = pool
                .iter()
                .position(|b| a.anticommutes(b))
                .expect("symplectic form is nondegenerate on C(G)/S");
            let b = pool.remove(j);
            for v in pool.iter_mut() {
                if v.anticommutes(&b) {
                    v.mul_assign(&a);
                }
                if v.anticommutes(&a) {
                    v.mul_assign(&b);
                }
            }
            pairs.push(LogicalPair { index: pairs.len(), x_bar: a, z_bar: b });
        }
        Ok(pairs)
    }

    /// Unordered qubit pairs sharing a gauge generator, with the number of
    /// generators in which each pair co-occurs.
    pub fn interaction_pairs(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for g in &self.gauge_generators {
            let s = g.support();
            for (a, &i) in s.iter().enumerate() {
                for &j in &s[a + 1..] {
                    *out.entry((i, j)).or_insert(0) += 1;
                }
            }
        }
        out
    }
}

/// Center of the span: combinations of basis rows commuting with every row.
fn center(n: usize, span: &Echelon) -> BitMatrix {
    let basis: Vec<PauliVector> = span.rows().iter().map(|r| PauliVector::from_row(r).expect("n checked")).collect();
    let r = basis.len();
    let omega: Vec<Bits> = basis
        .iter()
        .map(|a| Bits::from_indices(r, (0..r).filter(|&j| a.anticommutes(&basis[j]))))
        .collect();
    let mut stab = Echelon::new(2 * n);
    for c in nullspace(&omega, r) {
        let mut v = PauliVector::identity(n).expect("n checked");
        for j in c.ones() {
            v.mul_assign(&basis[j]);
        }
        stab.insert(v.to_row());
    }
    let rows = stab.rows().iter().map(|r| PauliVector::from_row(r).expect("n checked")).collect();
    BitMatrix::new(n, rows).expect("n checked")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_gauge() {
        let c = SubsystemCode::new(3, vec![]).unwrap();
        let p = c.parameters();
        assert_eq!((p.k, p.g, p.s), (3, 0, 0));
        assert!(c.stabilizer_basis().is_empty());
    }

    #[test]
    fn trivial_one_qubit_logicals() {
        let c = SubsystemCode::new(1, vec![]).unwrap();
        let l = c.logical_representatives().unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l[0].x_bar.to_string(), "X");
        assert_eq!(l[0].z_bar.to_string(), "Z");
    }

    #[test]
    fn xx_zz_center_is_whole_group() {
        let c = SubsystemCode::from_strings(&["XX", "ZZ"]).unwrap();
        assert_eq!(c.stabilizer_basis().len(), 2);
        assert!(crate::pauli::in_span(&"YY".parse().unwrap(), c.stabilizer_basis()).unwrap());
        assert_eq!(c.parameters().k, 0);
        assert_eq!(c.distance(2), Err(CodeError::NoLogicalQubits));
    }

    #[test]
    fn bit_flip_distance_one() {
        let c = SubsystemCode::from_strings(&["ZZI", "IZZ"]).unwrap();
        assert_eq!(c.k(), 1);
        assert_eq!(c.distance(3).unwrap(), DistanceResult::Exact(1));
    }

    #[test]
    fn rejects_bad_generator_length() {
        let e = SubsystemCode::new(3, vec!["XX".parse().unwrap()]);
        assert!(matches!(e, Err(CodeError::GeneratorLength { index: 0, len: 2, n: 3 })));
    }

    #[test]
    fn json_roundtrip() {
        let c = SubsystemCode::from_strings(&["XXI", "IZZ"]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"n":3,"gauge_generators":["XXI","IZZ"]}"#);
        let back: SubsystemCode = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
