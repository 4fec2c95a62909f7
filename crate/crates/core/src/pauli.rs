//! Phase-free Pauli operators in symplectic form.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::gf2::{nullspace, Bits, Echelon};

/// Largest qubit count accepted by any constructor.
pub const MAX_QUBITS: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("length mismatch: {0} vs {1} qubits")]
    LengthMismatch(usize, usize),
    #[error("{0} qubits exceeds the supported maximum of {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("invalid Pauli character {0:?} at position {1}")]
    InvalidChar(char, usize),
    #[error("qubit {0} out of range for n = {1}")]
    QubitOutOfRange(usize, usize),
}

fn check_n(n: usize) -> Result<(), PauliError> {
    if n > MAX_QUBITS {
        Err(PauliError::TooManyQubits(n))
    } else {
        Ok(())
    }
}

/// A Pauli operator on `n` qubits with phase dropped: bit `x[i]` marks an X
/// component on qubit `i`, `z[i]` a Z component, both together a Y.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliVector {
    x: Bits,
    z: Bits,
}

impl PauliVector {
    pub fn identity(n: usize) -> Result<Self, PauliError> {
        check_n(n)?;
        Ok(PauliVector { x: Bits::zeros(n), z: Bits::zeros(n) })
    }

    pub fn from_bits(x: Bits, z: Bits) -> Result<Self, PauliError> {
        if x.len() != z.len() {
            return Err(PauliError::LengthMismatch(x.len(), z.len()));
        }
        check_n(x.len())?;
        Ok(PauliVector { x, z })
    }

    /// Single-qubit Pauli `p` (one of 'X', 'Y', 'Z') on qubit `q`.
    pub fn single(n: usize, q: usize, p: char) -> Result<Self, PauliError> {
        let mut v = PauliVector::identity(n)?;
        if q >= n {
            return Err(PauliError::QubitOutOfRange(q, n));
        }
        match p {
            'X' => v.x.set(q, true),
            'Z' => v.z.set(q, true),
            'Y' => {
                v.x.set(q, true);
                v.z.set(q, true);
            }
            _ => return Err(PauliError::InvalidChar(p, q)),
        }
        Ok(v)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &Bits {
        &self.x
    }

    pub fn z_bits(&self) -> &Bits {
        &self.z
    }

    pub fn x_at(&self, i: usize) -> bool {
        self.x.get(i)
    }

    pub fn z_at(&self, i: usize) -> bool {
        self.z.get(i)
    }

    pub fn char_at(&self, i: usize) -> char {
        match (self.x.get(i), self.z.get(i)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (false, true) => 'Z',
            (true, true) => 'Y',
        }
    }

    pub fn set_at(&mut self, i: usize, x: bool, z: bool) {
        self.x.set(i, x);
        self.z.set(i, z);
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn support_bits(&self) -> Bits {
        self.x.or(&self.z)
    }

    pub fn support(&self) -> Vec<usize> {
        self.support_bits().ones().collect()
    }

    pub fn weight(&self) -> usize {
        self.support_bits().count_ones()
    }

    /// Product of two Paulis, phase dropped.
    pub fn mul(&self, other: &PauliVector) -> Result<PauliVector, PauliError> {
        if self.n() != other.n() {
            return Err(PauliError::LengthMismatch(self.n(), other.n()));
        }
        let mut out = self.clone();
        out.mul_assign(other);
        Ok(out)
    }

    pub(crate) fn mul_assign(&mut self, other: &PauliVector) {
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// Concatenated `x | z` row of length 2n.
    pub fn to_row(&self) -> Bits {
        let n = self.n();
        let mut r = Bits::zeros(2 * n);
        for i in self.x.ones() {
            r.set(i, true);
        }
        for i in self.z.ones() {
            r.set(n + i, true);
        }
        r
    }

    pub fn from_row(row: &Bits) -> Result<Self, PauliError> {
        let n = row.len() / 2;
        let mut v = PauliVector::identity(n)?;
        for i in row.ones() {
            if i < n {
                v.x.set(i, true);
            } else {
                v.z.set(i - n, true);
            }
        }
        Ok(v)
    }

    /// Row with x and z halves swapped, so that an ordinary dot product with
    /// `q.to_row()` gives the symplectic product.
    #[inline]
    pub(crate) fn anticommutes(&self, other: &PauliVector) -> bool {
        self.x.dot(&other.z) ^ self.z.dot(&other.x)
    }
}

/// `x_p·z_q + z_p·x_q mod 2`: false iff the two operators commute.
pub fn symplectic_product(p: &PauliVector, q: &PauliVector) -> Result<bool, PauliError> {
    if p.n() != q.n() {
        return Err(PauliError::LengthMismatch(p.n(), q.n()));
    }
    Ok(p.anticommutes(q))
}

pub fn weight(p: &PauliVector) -> usize {
    p.weight()
}

impl fmt::Display for PauliVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n() {
            write!(f, "{}", self.char_at(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl FromStr for PauliVector {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().collect();
        let mut v = PauliVector::identity(chars.len())?;
        for (i, c) in chars.into_iter().enumerate() {
            match c {
                'I' => {}
                'X' => v.x.set(i, true),
                'Z' => v.z.set(i, true),
                'Y' => v.set_at(i, true, true),
                other => return Err(PauliError::InvalidChar(other, i)),
            }
        }
        Ok(v)
    }
}

impl Serialize for PauliVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A list of Paulis on a common number of qubits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitMatrix {
    n: usize,
    rows: Vec<PauliVector>,
}

impl BitMatrix {
    pub fn empty(n: usize) -> Self {
        BitMatrix { n, rows: Vec::new() }
    }

    pub fn new(n: usize, rows: Vec<PauliVector>) -> Result<Self, PauliError> {
        check_n(n)?;
        if let Some(r) = rows.iter().find(|r| r.n() != n) {
            return Err(PauliError::LengthMismatch(r.n(), n));
        }
        Ok(BitMatrix { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[PauliVector] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn echelon(&self) -> Echelon {
        let rows: Vec<Bits> = self.rows.iter().map(PauliVector::to_row).collect();
        Echelon::from_rows(2 * self.n, &rows)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }
}

/// True iff `v` is a GF(2) combination of the rows of `m`.
pub fn in_span(v: &PauliVector, m: &BitMatrix) -> Result<bool, PauliError> {
    if v.n() != m.n() {
        return Err(PauliError::LengthMismatch(v.n(), m.n()));
    }
    Ok(m.echelon().contains(&v.to_row()))
}

/// Basis of the Paulis supported inside `support` that commute with every
/// row of `constraints`.
pub fn kernel_on_support(support: &[usize], constraints: &BitMatrix) -> Result<BitMatrix, PauliError> {
    let n = constraints.n();
    let mut sup: Vec<usize> = support.to_vec();
    sup.sort_unstable();
    sup.dedup();
    if let Some(&q) = sup.iter().find(|&&q| q >= n) {
        return Err(PauliError::QubitOutOfRange(q, n));
    }
    let cols = 2 * sup.len();
    // Variable 2j is the x bit on sup[j], 2j+1 the z bit.
    let eqs: Vec<Bits> = constraints
        .rows()
        .iter()
        .map(|r| {
            let mut e = Bits::zeros(cols);
            for (j, &q) in sup.iter().enumerate() {
                if r.z_at(q) {
                    e.set(2 * j, true);
                }
                if r.x_at(q) {
                    e.set(2 * j + 1, true);
                }
            }
            e
        })
        .collect();
    let rows = nullspace(&eqs, cols)
        .into_iter()
        .map(|sol| {
            let mut p = PauliVector::identity(n).expect("n already checked");
            for (j, &q) in sup.iter().enumerate() {
                p.set_at(q, sol.get(2 * j), sol.get(2 * j + 1));
            }
            p
        })
        .collect();
    Ok(BitMatrix { n, rows })
}
