//! Built-in code families with local embeddings, subsystem concatenation
//! and the dilated block embedding of concatenated codes.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{projector_bounds, subsystem_bounds, BoundMode, BoundsError};
use crate::code::{CodeError, DistanceResult, SubsystemCode};
use crate::correct::CodeClass;
use crate::geometry::{extract_interactions, lattice_side, Embedding, GeometryError};
use crate::pauli::{PauliError, PauliVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("{family} needs size at least {min}, got {got}")]
    TooSmall { family: &'static str, min: usize, got: usize },
    #[error("unknown code name {0:?} (expected steane, five_one_three or repetition(r))")]
    UnknownCode(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("inner embedding is {inner}-dimensional, outer is {outer}-dimensional")]
    DimensionMismatch { inner: usize, outer: usize },
    #[error("target length {ell_target} must exceed l' = {ell_prime}")]
    TargetTooShort { ell_target: f64, ell_prime: f64 },
    #[error("dilated blocks collide: {0} point pairs closer than 1")]
    Collision(usize),
    #[error("code has {code} qubits but embedding has {embedding} points")]
    SizeMismatch { code: usize, embedding: usize },
}

/// A code together with a valid embedding of its qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedCode {
    pub family: String,
    pub parameters: BTreeMap<String, usize>,
    pub code: SubsystemCode,
    pub embedding: Embedding,
}

impl EmbeddedCode {
    pub fn new(family: impl Into<String>, code: SubsystemCode, embedding: Embedding) -> Result<Self, ConstructionError> {
        if code.n() != embedding.len() {
            return Err(ConstructionError::SizeMismatch { code: code.n(), embedding: embedding.len() });
        }
        let bad = embedding.validate();
        if !bad.is_empty() {
            return Err(ConstructionError::Collision(bad.len()));
        }
        let p = code.parameters();
        let parameters = BTreeMap::from([("n".to_string(), p.n), ("k".to_string(), p.k), ("g".to_string(), p.g)]);
        Ok(EmbeddedCode { family: family.into(), parameters, code, embedding })
    }
}

fn two_body(n: usize, a: usize, b: usize, c: char) -> PauliVector {
    let mut p = PauliVector::identity(n).expect("small n");
    let (x, z) = (c == 'X', c == 'Z');
    p.set_at(a, x, z);
    p.set_at(b, x, z);
    p
}

/// Qubit `r·m + c` sits at `(c, r)`.
fn grid(m: usize) -> Embedding {
    Embedding::cubic_lattice(m * m, 2)
}

/// `m × m` Bacon-Shor code: XX on vertical neighbours, ZZ on horizontal ones.
pub fn bacon_shor(m: usize) -> Result<EmbeddedCode, ConstructionError> {
    if m < 2 {
        return Err(ConstructionError::TooSmall { family: "bacon_shor", min: 2, got: m });
    }
    let n = m * m;
    let mut gens = Vec::new();
    for r in 0..m {
        for c in 0..m {
            let q = r * m + c;
            if r + 1 < m {
                gens.push(two_body(n, q, q + m, 'X'));
            }
            if c + 1 < m {
                gens.push(two_body(n, q, q + 1, 'Z'));
            }
        }
    }
    EmbeddedCode::new("bacon_shor", SubsystemCode::new(n, gens)?, grid(m))
}

/// Rotated planar surface code on an `m × m` grid of qubits.
pub fn surface_code(m: usize) -> Result<EmbeddedCode, ConstructionError> {
    if m < 2 {
        return Err(ConstructionError::TooSmall { family: "surface_code", min: 2, got: m });
    }
    let n = m * m;
    let mi = m as i64;
    let mut gens = Vec::new();
    // Face (i, j) touches qubits (i..=i+1, j..=j+1); X-type when i + j is even.
    for i in -1..mi {
        for j in -1..mi {
            let qs: Vec<usize> = [(i, j), (i, j + 1), (i + 1, j), (i + 1, j + 1)]
                .into_iter()
                .filter(|&(r, c)| (0..mi).contains(&r) && (0..mi).contains(&c))
                .map(|(r, c)| (r * mi + c) as usize)
                .collect();
            let x_type = (i + j).rem_euclid(2) == 0;
            let horizontal_edge = i == -1 || i == mi - 1;
            let keep = match qs.len() {
                4 => true,
                2 => x_type == horizontal_edge,
                _ => false,
            };
            if keep {
                let mut p = PauliVector::identity(n)?;
                for q in qs {
                    p.set_at(q, x_type, !x_type);
                }
                gens.push(p);
            }
        }
    }
    EmbeddedCode::new("surface_code", SubsystemCode::new(n, gens)?, grid(m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerCode {
    Steane,
    FiveOneThree,
    Repetition(usize),
}

impl FromStr for InnerCode {
    type Err = ConstructionError;
    fn from_str(s: &str) -> Result<Self, ConstructionError> {
        let t = s.trim();
        match t {
            "steane" => return Ok(InnerCode::Steane),
            "five_one_three" => return Ok(InnerCode::FiveOneThree),
            _ => {}
        }
        t.strip_prefix("repetition(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|r| r.parse().ok())
            .map(InnerCode::Repetition)
            .ok_or_else(|| ConstructionError::UnknownCode(s.to_string()))
    }
}

/// A named small code on a cubic lattice of side `⌈n^{1/D}⌉`.
pub fn small_inner_codes(name: InnerCode, dim: usize) -> Result<EmbeddedCode, ConstructionError> {
    let (family, gens): (&str, Vec<String>) = match name {
        InnerCode::Steane => {
            let rows = ["IIIXXXX", "IXXIIXX", "XIXIXIX"];
            let mut g: Vec<String> = rows.iter().map(|s| s.to_string()).collect();
            g.extend(rows.iter().map(|s| s.replace('X', "Z")));
            ("steane", g)
        }
        InnerCode::FiveOneThree => ("five_one_three", ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"].iter().map(|s| s.to_string()).collect()),
        InnerCode::Repetition(r) => {
            if r < 1 {
                return Err(ConstructionError::TooSmall { family: "repetition", min: 1, got: r });
            }
            let g = (0..r.saturating_sub(1))
                .map(|i| (0..r).map(|q| if q == i || q == i + 1 { 'Z' } else { 'I' }).collect())
                .collect();
            ("repetition", g)
        }
    };
    let code = match name {
        InnerCode::Repetition(r) if r == 1 => SubsystemCode::new(1, vec![])?,
        _ => SubsystemCode::from_strings(&gens)?,
    };
    let n = code.n();
    EmbeddedCode::new(family, code, Embedding::cubic_lattice(n, dim))
}

/// Concatenation with the inner code on every outer qubit. Block `b`
/// occupies qubits `b·n₁ .. (b+1)·n₁`; for `k₁ > 1` the outer code is
/// repeated once per inner logical qubit.
pub fn concatenate(inner: &SubsystemCode, outer: &SubsystemCode) -> Result<SubsystemCode, ConstructionError> {
    let logicals = inner.logical_representatives()?;
    let n1 = inner.n();
    let n2 = outer.n();
    let n = n1 * n2;
    let place = |p: &PauliVector, block: usize, out: &mut PauliVector| {
        for q in p.support() {
            out.set_at(block * n1 + q, p.x_at(q), p.z_at(q));
        }
    };
    let mut gens = Vec::new();
    for b in 0..n2 {
        for g in inner.gauge_generators() {
            let mut p = PauliVector::identity(n)?;
            place(g, b, &mut p);
            gens.push(p);
        }
    }
    for pair in &logicals {
        for g in outer.gauge_generators() {
            let mut p = PauliVector::identity(n)?;
            for b in g.support() {
                let mut bar = PauliVector::identity(n1)?;
                if g.x_at(b) {
                    bar = bar.mul(&pair.x_bar)?;
                }
                if g.z_at(b) {
                    bar = bar.mul(&pair.z_bar)?;
                }
                place(&bar, b, &mut p);
            }
            gens.push(p);
        }
    }
    Ok(SubsystemCode::new(n, gens)?)
}

/// Recipe for embedding a concatenated code: each outer qubit becomes a
/// lattice block and the outer layout is dilated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcatPlan {
    pub inner: EmbeddedCode,
    pub outer: EmbeddedCode,
    pub ell_target: f64,
    /// Outer locality; measured from the outer embedding when absent.
    pub ell2: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcatEmbedding {
    pub embedded: EmbeddedCode,
    pub ell2: f64,
    pub ell_prime: f64,
    pub dilation: f64,
    pub ell_target: f64,
    /// `dilation·ℓ₂ + √D·(side - 1)`, an upper bound on every interaction length.
    pub triangle_bound: f64,
    pub max_length: f64,
}

impl ConcatEmbedding {
    pub fn within_target(&self) -> bool {
        self.max_length < self.ell_target && self.max_length <= self.triangle_bound * (1.0 + 1e-12)
    }
}

pub fn build_concat_embedding(plan: &ConcatPlan) -> Result<ConcatEmbedding, ConstructionError> {
    let dim = plan.inner.embedding.dimension();
    let outer_dim = plan.outer.embedding.dimension();
    if dim != outer_dim {
        return Err(ConstructionError::DimensionMismatch { inner: dim, outer: outer_dim });
    }
    let ell2 = match plan.ell2 {
        Some(v) => v,
        None => extract_interactions(&plan.outer.code, &plan.outer.embedding)?.max_length(),
    };
    let df = dim as f64;
    let ell_prime = 2.0 * (df.sqrt() + ell2);
    if plan.ell_target <= ell_prime {
        return Err(ConstructionError::TargetTooShort { ell_target: plan.ell_target, ell_prime });
    }
    let dilation = plan.ell_target / ell_prime;
    let code = concatenate(&plan.inner.code, &plan.outer.code)?;
    let mut coords = Vec::with_capacity(code.n());
    for b in 0..plan.outer.code.n() {
        let centre = plan.outer.embedding.point(b);
        for q in 0..plan.inner.code.n() {
            let p = plan.inner.embedding.point(q);
            coords.push(centre.iter().zip(p).map(|(c, x)| dilation * c + x).collect());
        }
    }
    let embedding = Embedding::new(dim, coords)?;
    let clashes = embedding.validate().len();
    if clashes > 0 {
        return Err(ConstructionError::Collision(clashes));
    }
    let side = lattice_side(plan.inner.code.n(), dim) as f64;
    let max_length = extract_interactions(&code, &embedding)?.max_length();
    let embedded = EmbeddedCode::new(format!("{}∘{}", plan.outer.family, plan.inner.family), code, embedding)?;
    Ok(ConcatEmbedding {
        embedded,
        ell2,
        ell_prime,
        dilation,
        ell_target: plan.ell_target,
        triangle_bound: dilation * ell2 + df.sqrt() * (side - 1.0),
        max_length,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaturationReport {
    pub family: String,
    pub code_class: CodeClass,
    pub n: usize,
    pub k: usize,
    pub d: DistanceResult,
    pub distance_term: f64,
    pub dimension_term: f64,
    /// Asymptotic `ℓ*`, evaluated at the exact distance or its lower bound.
    pub ell_star: f64,
    pub max_length: f64,
    pub ratio: f64,
}

/// Compares the longest interaction of an embedded code with `ℓ*`.
pub fn saturation_report(ec: &EmbeddedCode, class: CodeClass, weight_cap: usize) -> Result<SaturationReport, ConstructionError> {
    let p = ec.code.parameters();
    let d = ec.code.distance(weight_cap)?;
    let dl = d.lower_bound().min(p.n) as f64;
    let dim = ec.embedding.dimension();
    let b = match class {
        CodeClass::Subsystem => subsystem_bounds(p.n as f64, p.k as f64, dl, dim, BoundMode::Asymptotic)?,
        CodeClass::Projector => projector_bounds(p.n as f64, p.k as f64, dl, dim, BoundMode::Asymptotic)?,
    };
    let max_length = extract_interactions(&ec.code, &ec.embedding)?.max_length();
    Ok(SaturationReport {
        family: ec.family.clone(),
        code_class: class,
        n: p.n,
        k: p.k,
        d,
        distance_term: b.distance_term,
        dimension_term: b.dimension_term,
        ell_star: b.ell_star,
        max_length,
        ratio: max_length / b.ell_star,
    })
}
