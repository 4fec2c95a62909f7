//! Exponent-space tables of `log_n ℓ*` and `log_n M*` over
//! `κ = log_n k`, `δ = log_n d`.

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::correct::CodeClass;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContourError {
    #[error("grid step must satisfy 0 < step <= 1/2, got {0}")]
    Step(String),
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
}

/// Parses a decimal or `p/q` string exactly.
pub fn parse_rational(s: &str) -> Option<Rational64> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let (p, q): (i64, i64) = (p.trim().parse().ok()?, q.trim().parse().ok()?);
        return (q != 0).then(|| Rational64::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 15 {
        return None;
    }
    let denom = 10i64.checked_pow(frac.len() as u32)?;
    let int_part: i64 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let frac_part: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    let v = Rational64::new(int_part.checked_mul(denom)?.checked_add(frac_part)?, denom);
    Some(if neg { -v } else { v })
}

/// `log_n ℓ*` for `k = n^κ`, `d = n^δ`, clamped at 0.
pub fn ell_exponent(dim: usize, class: CodeClass, kappa: Rational64, delta: Rational64) -> Rational64 {
    let d = Rational64::from_integer(dim as i64);
    let one = Rational64::one();
    let a = match class {
        CodeClass::Subsystem => one,
        CodeClass::Projector => Rational64::from_integer(2),
    };
    let frac = (d - one) / d;
    let distance = delta - frac;
    let dimension = frac / a * (kappa + a * delta / (d - one) - one);
    distance.max(dimension).max(Rational64::zero())
}

/// `log_n M* = max(κ, δ)`, reported where positive.
pub fn count_exponent(kappa: Rational64, delta: Rational64) -> Option<Rational64> {
    let m = kappa.max(delta);
    (m > Rational64::zero()).then_some(m)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourPoint {
    pub kappa: Rational64,
    pub delta: Rational64,
    pub log_ell_star: Rational64,
    pub log_m_star: Option<Rational64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourTable {
    pub dimension: usize,
    pub code_class: CodeClass,
    pub grid_step: Rational64,
    pub points: Vec<ContourPoint>,
}

impl ContourTable {
    pub fn lookup(&self, kappa: Rational64, delta: Rational64) -> Option<&ContourPoint> {
        self.points.iter().find(|p| p.kappa == kappa && p.delta == delta)
    }

    /// `kappa,delta,log_ell_star,log_m_star` with decimal values.
    pub fn to_csv(&self) -> String {
        let f = |r: Rational64| *r.numer() as f64 / *r.denom() as f64;
        let mut out = String::from("kappa,delta,log_ell_star,log_m_star\n");
        for p in &self.points {
            let m = p.log_m_star.map(|m| f(m).to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{},{}\n", f(p.kappa), f(p.delta), f(p.log_ell_star), m));
        }
        out
    }
}

/// Table over the grid `{0, step, 2·step, …} ∩ [0, 1]` in both `κ` and `δ`.
pub fn emit_contours(dim: usize, class: CodeClass, grid_step: Rational64) -> Result<ContourTable, ContourError> {
    if dim < 2 {
        return Err(ContourError::Dimension(dim));
    }
    if grid_step <= Rational64::zero() || grid_step > Rational64::new(1, 2) {
        return Err(ContourError::Step(grid_step.to_string()));
    }
    let mut axis = Vec::new();
    let mut x = Rational64::zero();
    while x <= Rational64::one() {
        axis.push(x);
        x += grid_step;
    }
    let mut points = Vec::with_capacity(axis.len() * axis.len());
    for &kappa in &axis {
        for &delta in &axis {
            points.push(ContourPoint { kappa, delta, log_ell_star: ell_exponent(dim, class, kappa, delta), log_m_star: count_exponent(kappa, delta) });
        }
    }
    Ok(ContourTable { dimension: dim, code_class: class, grid_step, points })
}
