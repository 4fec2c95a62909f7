//! Closed-form bounds on long-range interactions and the constants used in
//! their proofs.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::correct::CodeClass;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("dimension must be at least {min}, got {got}")]
    Dimension { got: usize, min: usize },
    #[error("parameters out of range: {0}")]
    Domain(String),
}

/// Volume of the unit ball in `R^dim`, via `V_D = 2π/D · V_{D-2}`.
pub(crate) fn unit_ball_volume(dim: usize) -> f64 {
    match dim {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / dim as f64 * unit_ball_volume(dim - 2),
    }
}

pub(crate) fn ball_volume(dim: usize) -> f64 {
    unit_ball_volume(dim)
}

/// `π^{D/2} / Γ(D/2 + 1)`.
pub fn try_ball_volume(dim: usize) -> Result<f64, BoundsError> {
    if dim < 1 {
        return Err(BoundsError::Dimension { got: dim, min: 1 });
    }
    Ok(unit_ball_volume(dim))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    Asymptotic,
    Explicit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    DistanceBranch,
    DimensionBranch,
}

/// Constants and values of one branch of the bound as they appear in its
/// proof.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchConstants {
    pub c0: f64,
    pub c1: f64,
    /// Interaction length the proof argues about.
    pub ell: f64,
    /// Number of interactions of that length the proof forces.
    pub count: f64,
    pub hypothesis_met: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub dimension: usize,
    pub n: f64,
    pub k: f64,
    pub d: f64,
    pub code_class: CodeClass,
    pub mode: BoundMode,
    /// `d / n^{(D-1)/D}`.
    pub distance_term: f64,
    /// `(k d^{1/(D-1)}/n)^{(D-1)/D}`, or the `2/(D-1)` analogue for projector codes.
    pub dimension_term: f64,
    pub m_star: f64,
    pub ell_star: f64,
    pub c0: f64,
    pub c1: f64,
    pub regime: Regime,
    pub hypothesis_distance: bool,
    pub hypothesis_dimension: bool,
    pub distance_branch: Option<BranchConstants>,
    pub dimension_branch: Option<BranchConstants>,
}

fn check_params(n: f64, k: f64, d: f64, dim: usize) -> Result<(), BoundsError> {
    if dim < 2 {
        return Err(BoundsError::Dimension { got: dim, min: 2 });
    }
    if !(n.is_finite() && k >= 1.0 && d >= 1.0 && k <= n && d <= n) {
        return Err(BoundsError::Domain(format!("need 1 <= k, d <= n, got n={n}, k={k}, d={d}")));
    }
    Ok(())
}

/// Relative tolerance under which the two branches count as tied.
const TIE: f64 = 1e-12;

fn pick(distance: f64, dimension: f64) -> Regime {
    if distance >= dimension || (dimension - distance) <= TIE * dimension {
        Regime::DistanceBranch
    } else {
        Regime::DimensionBranch
    }
}

fn exponent_family(class: CodeClass) -> f64 {
    match class {
        CodeClass::Subsystem => 1.0,
        CodeClass::Projector => 2.0,
    }
}

/// Branch driven by the distance alone, shared by both code classes.
pub fn distance_branch_constants(n: f64, d: f64, dim: usize) -> BranchConstants {
    let v = ball_volume(dim);
    let df = dim as f64;
    let six = 6f64.powi(dim as i32);
    let c0 = v / (six * df);
    let c1 = 2.0 * (six * df / v).powf(df / (df - 1.0));
    let scale = n.powf((df - 1.0) / df);
    BranchConstants { c0, c1, ell: c0 * d / scale, count: d / 4.0, hypothesis_met: d >= c1 * scale }
}

/// Branch driven by `k` and `d` together.
pub fn dimension_branch_constants(n: f64, k: f64, d: f64, dim: usize, class: CodeClass) -> BranchConstants {
    let v = ball_volume(dim);
    let df = dim as f64;
    let a = exponent_family(class);
    let (c0, c1) = match class {
        CodeClass::Subsystem => {
            let c0 = v.powf(1.0 / df) / (400.0 * df);
            (c0, (1.0 / c0).powf(df / (df - 1.0)))
        }
        CodeClass::Projector => {
            let c0 = v.powf(1.0 / df) / (800.0 * df * df);
            (c0, (1.0 / c0).powf(2.0 * df / (df - 1.0)))
        }
    };
    let ratio = k * d.powf(a / (df - 1.0)) / n;
    BranchConstants { c0, c1, ell: c0 * ratio.powf((df - 1.0) / (a * df)), count: c0 * k, hypothesis_met: ratio >= c1 }
}

fn bounds(n: f64, k: f64, d: f64, dim: usize, class: CodeClass, mode: BoundMode) -> Result<BoundReport, BoundsError> {
    check_params(n, k, d, dim)?;
    let df = dim as f64;
    let a = exponent_family(class);
    let distance_term = d / n.powf((df - 1.0) / df);
    let dimension_term = (k * d.powf(a / (df - 1.0)) / n).powf((df - 1.0) / (a * df));
    let mut r = BoundReport {
        dimension: dim,
        n,
        k,
        d,
        code_class: class,
        mode,
        distance_term,
        dimension_term,
        m_star: k.max(d),
        ell_star: distance_term.max(dimension_term),
        c0: 1.0,
        c1: 1.0,
        regime: pick(distance_term, dimension_term),
        hypothesis_distance: distance_term >= 1.0,
        hypothesis_dimension: k * d.powf(a / (df - 1.0)) >= n,
        distance_branch: None,
        dimension_branch: None,
    };
    if mode == BoundMode::Explicit {
        let db = distance_branch_constants(n, d, dim);
        let kb = dimension_branch_constants(n, k, d, dim, class);
        r.regime = pick(db.ell, kb.ell);
        let active = match r.regime {
            Regime::DistanceBranch => &db,
            Regime::DimensionBranch => &kb,
        };
        r.ell_star = active.ell;
        r.m_star = active.count;
        r.c0 = active.c0;
        r.c1 = active.c1;
        r.hypothesis_distance = db.hypothesis_met;
        r.hypothesis_dimension = kb.hypothesis_met;
        r.distance_branch = Some(db);
        r.dimension_branch = Some(kb);
    }
    Ok(r)
}

/// Lower bound for subsystem codes.
pub fn subsystem_bounds(n: f64, k: f64, d: f64, dim: usize, mode: BoundMode) -> Result<BoundReport, BoundsError> {
    bounds(n, k, d, dim, CodeClass::Subsystem, mode)
}

/// Lower bound for commuting projector codes.
pub fn projector_bounds(n: f64, k: f64, d: f64, dim: usize, mode: BoundMode) -> Result<BoundReport, BoundsError> {
    bounds(n, k, d, dim, CodeClass::Projector, mode)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub bravyi_ratio: f64,
    pub bpt_ratio: f64,
    pub distance_ratio: f64,
    pub family: CodeClass,
    pub local: bool,
}

/// `kd^{1/(D-1)}/n`, `kd^{2/(D-1)}/n` and `d/n^{(D-1)/D}`; the parameters are
/// local for a family when its ratio and the distance ratio are at most 1.
pub fn regime_check(n: f64, k: f64, d: f64, dim: usize, family: CodeClass) -> Result<RegimeReport, BoundsError> {
    check_params(n, k, d, dim)?;
    let df = dim as f64;
    let bravyi_ratio = k * d.powf(1.0 / (df - 1.0)) / n;
    let bpt_ratio = k * d.powf(2.0 / (df - 1.0)) / n;
    let distance_ratio = d / n.powf((df - 1.0) / df);
    let governing = match family {
        CodeClass::Subsystem => bravyi_ratio,
        CodeClass::Projector => bpt_ratio,
    };
    Ok(RegimeReport { bravyi_ratio, bpt_ratio, distance_ratio, family, local: governing <= 1.0 && distance_ratio <= 1.0 })
}

/// `(vol(B_D)/(2·4^{D+1}·D) · d/ℓ)^{1/(D-1)}`, the largest cube side the
/// holographic argument handles.
pub fn w0(d: f64, ell: f64, dim: usize) -> f64 {
    let df = dim as f64;
    (ball_volume(dim) / (2.0 * 4f64.powi(dim as i32 + 1) * df) * d / ell).powf(1.0 / (df - 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofConstants {
    pub dimension: usize,
    pub d: f64,
    pub ell: f64,
    pub alpha: f64,
    pub w0: f64,
    pub c: f64,
    /// `ℓ ≤ c·d^{1/D}`.
    pub hypothesis_met: bool,
    pub ineq1_lhs: f64,
    pub ineq1_rhs: f64,
    pub ineq1: bool,
    /// `w0 ≥ 100αDℓ`.
    pub ineq2: bool,
    /// `w0 ≥ (d/ℓ)^{1/(D-1)} / (90√D)`.
    pub ineq3: bool,
}

pub fn proof_constants(d: f64, ell: f64, dim: usize, alpha: f64) -> Result<ProofConstants, BoundsError> {
    if dim < 2 {
        return Err(BoundsError::Dimension { got: dim, min: 2 });
    }
    if !(d > 0.0 && ell > 0.0 && alpha >= 1.0) {
        return Err(BoundsError::Domain(format!("need d, l > 0 and alpha >= 1, got d={d}, l={ell}, alpha={alpha}")));
    }
    let df = dim as f64;
    let v = ball_volume(dim);
    let w0 = w0(d, ell, dim);
    let c = v.powf(1.0 / df) / (400.0 * alpha * df);
    let ineq1_lhs = 2f64.powi(dim as i32) / v * (2.0 * w0).powf(df - 1.0) * ell;
    let ineq1_rhs = d / (16.0 * df);
    Ok(ProofConstants {
        dimension: dim,
        d,
        ell,
        alpha,
        w0,
        c,
        hypothesis_met: ell <= c * d.powf(1.0 / df),
        ineq1_lhs,
        ineq1_rhs,
        ineq1: ((ineq1_lhs - ineq1_rhs) / ineq1_rhs).abs() < 1e-9,
        ineq2: w0 >= 100.0 * alpha * df * ell,
        ineq3: w0 >= (d / ell).powf(1.0 / (df - 1.0)) / (90.0 * df.sqrt()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volumes() {
        assert_eq!(try_ball_volume(1).unwrap(), 2.0);
        assert!((try_ball_volume(2).unwrap() - PI).abs() < 1e-15);
        assert!((try_ball_volume(3).unwrap() - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!(try_ball_volume(0).is_err());
    }

    #[test]
    fn headline_example() {
        let r = subsystem_bounds(1e6, 1e4, 1e3, 2, BoundMode::Asymptotic).unwrap();
        assert!((r.ell_star - 10f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.m_star, 1e4);
        assert_eq!(r.regime, Regime::DimensionBranch);
        let p = projector_bounds(1e6, 1e4, 1e3, 2, BoundMode::Asymptotic).unwrap();
        assert!((p.ell_star - 10.0).abs() < 1e-9);
    }

    #[test]
    fn worst_case_root_n() {
        let n = 4096.0;
        let r = subsystem_bounds(n, n, n, 2, BoundMode::Asymptotic).unwrap();
        assert!((r.ell_star - 64.0).abs() < 1e-9);
        assert_eq!(r.m_star, n);
    }

    #[test]
    fn explicit_c0() {
        let r = subsystem_bounds(1e6, 1e4, 1e3, 2, BoundMode::Explicit).unwrap();
        let kb = r.dimension_branch.unwrap();
        assert!((kb.c0 - PI.sqrt() / 800.0).abs() < 1e-12);
        let p = projector_bounds(1e6, 1e4, 1e3, 2, BoundMode::Explicit).unwrap();
        assert!((p.dimension_branch.unwrap().c0 - PI.sqrt() / 3200.0).abs() < 1e-12);
        assert!(!r.hypothesis_dimension && !r.hypothesis_distance);
    }

    #[test]
    fn crossover_tie_goes_to_distance() {
        let r = projector_bounds(1e6, 1e4, 1e5, 2, BoundMode::Asymptotic).unwrap();
        assert_eq!(r.regime, Regime::DistanceBranch);
        let s = subsystem_bounds(900.0, 7.0, 7.0, 2, BoundMode::Asymptotic).unwrap();
        assert_eq!(s.regime, Regime::DistanceBranch);
    }

    #[test]
    fn regimes() {
        let r = regime_check(9.0, 1.0, 3.0, 2, CodeClass::Subsystem).unwrap();
        assert!(r.local);
        assert!((r.distance_ratio - 1.0).abs() < 1e-15);
        assert!(!regime_check(100.0, 100.0, 100.0, 2, CodeClass::Subsystem).unwrap().local);
        assert!(regime_check(100.0, 1.0, 1.0, 2, CodeClass::Projector).unwrap().local);
    }

    #[test]
    fn w0_example() {
        let p = proof_constants(1000.0, 2.0, 2, 1.0).unwrap();
        assert!((p.w0 - 500.0 * PI / 256.0).abs() < 1e-12);
        assert!(p.ineq1);
        let far = proof_constants(1000.0, 50.0, 2, 1.0).unwrap();
        assert!(!far.hypothesis_met);
    }

    #[test]
    fn domain_errors() {
        assert!(subsystem_bounds(10.0, 11.0, 2.0, 2, BoundMode::Asymptotic).is_err());
        assert!(subsystem_bounds(10.0, 1.0, 2.0, 1, BoundMode::Asymptotic).is_err());
        assert!(proof_constants(10.0, 1.0, 2, 0.5).is_err());
    }
}
