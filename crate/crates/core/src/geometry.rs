//! Embeddings in `R^D`, interaction lengths, the point-density bound, grid
//! tilings and box subdivision.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::ball_volume;
use crate::code::SubsystemCode;
use crate::correct::Region;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("point {index} has {got} coordinates, expected {expected}")]
    DimensionMismatch { index: usize, got: usize, expected: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("code has {code} qubits but embedding has {embedding} points")]
    SizeMismatch { code: usize, embedding: usize },
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("tiling needs w >= 4l, got w = {w}, l = {ell}")]
    TilingWidth { w: f64, ell: f64 },
    #[error("box height {h} is below 5l = {min}")]
    ShortBox { h: f64, min: f64 },
    #[error("box min {min:?} exceeds max {max:?}")]
    InvertedBox { min: Vec<f64>, max: Vec<f64> },
}

fn positive(name: &'static str, value: f64) -> Result<(), GeometryError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(GeometryError::NonPositive { name, value })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct EmbeddingFile {
    dimension: usize,
    coordinates: Vec<Vec<f64>>,
}

/// Qubit positions in `R^D`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EmbeddingFile")]
pub struct Embedding {
    dimension: usize,
    coordinates: Vec<Vec<f64>>,
}

impl TryFrom<EmbeddingFile> for Embedding {
    type Error = GeometryError;
    fn try_from(f: EmbeddingFile) -> Result<Self, GeometryError> {
        Embedding::new(f.dimension, f.coordinates)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
}

pub fn euclidean(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Smallest `s` with `s^dim >= n`.
pub fn lattice_side(n: usize, dim: usize) -> usize {
    let mut s = 1usize;
    while s.checked_pow(dim as u32).is_some_and(|v| v < n) {
        s += 1;
    }
    s
}

impl Embedding {
    pub fn new(dimension: usize, coordinates: Vec<Vec<f64>>) -> Result<Self, GeometryError> {
        if dimension == 0 {
            return Err(GeometryError::ZeroDimension);
        }
        for (index, p) in coordinates.iter().enumerate() {
            if p.len() != dimension {
                return Err(GeometryError::DimensionMismatch { index, got: p.len(), expected: dimension });
            }
        }
        Ok(Embedding { dimension, coordinates })
    }

    /// First `n` points of the cubic lattice of side `lattice_side(n, dim)`,
    /// in row-major order with the first coordinate fastest.
    pub fn cubic_lattice(n: usize, dim: usize) -> Self {
        let side = lattice_side(n, dim);
        let coordinates = (0..n)
            .map(|mut i| {
                (0..dim)
                    .map(|_| {
                        let c = i % side;
                        i /= side;
                        c as f64
                    })
                    .collect()
            })
            .collect();
        Embedding { dimension: dim.max(1), coordinates }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.coordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coordinates.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coordinates[i]
    }

    pub fn coordinates(&self) -> &[Vec<f64>] {
        &self.coordinates
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        euclidean(&self.coordinates[i], &self.coordinates[j])
    }

    /// Pairs closer than 1 (with 1e-12 slack).
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let distance = self.distance(i, j);
                if distance < 1.0 - 1e-12 {
                    out.push(Violation { i, j, distance });
                }
            }
        }
        out
    }

    /// Qubits inside any of the closed boxes.
    pub fn region_in_boxes(&self, boxes: &[AxisBox]) -> Region {
        Region::new((0..self.len()).filter(|&i| boxes.iter().any(|b| b.contains(self.point(i)))))
    }

    pub fn count_in(&self, b: &AxisBox) -> usize {
        self.coordinates.iter().filter(|p| b.contains(p)).count()
    }
}

pub fn validate_embedding(e: &Embedding) -> Vec<Violation> {
    e.validate()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interaction {
    pub i: usize,
    pub j: usize,
    pub length: f64,
    /// Number of gauge generators whose support contains both qubits.
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteractionSet {
    pub n: usize,
    pub pairs: Vec<Interaction>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LongCount {
    pub ell: f64,
    /// Number of interactions of length at least `ell`.
    pub m: usize,
    /// Per-qubit count of such interactions.
    pub f: Vec<usize>,
}

impl LongCount {
    pub fn bad_qubits(&self) -> Region {
        Region::new(self.f.iter().enumerate().filter(|(_, &c)| c > 0).map(|(q, _)| q))
    }

    pub fn total(&self, r: &[usize]) -> usize {
        r.iter().map(|&q| self.f[q]).sum()
    }
}

pub fn extract_interactions(code: &SubsystemCode, e: &Embedding) -> Result<InteractionSet, GeometryError> {
    if code.n() != e.len() {
        return Err(GeometryError::SizeMismatch { code: code.n(), embedding: e.len() });
    }
    let pairs = code
        .interaction_pairs()
        .into_iter()
        .map(|((i, j), multiplicity)| Interaction { i, j, length: e.distance(i, j), multiplicity })
        .collect();
    Ok(InteractionSet { n: code.n(), pairs })
}

impl InteractionSet {
    pub fn count_long(&self, ell: f64) -> Result<LongCount, GeometryError> {
        positive("ell", ell)?;
        let mut f = vec![0; self.n];
        let mut m = 0;
        for p in self.pairs.iter().filter(|p| p.length >= ell) {
            m += 1;
            f[p.i] += 1;
            f[p.j] += 1;
        }
        Ok(LongCount { ell, m, f })
    }

    pub fn max_length(&self) -> f64 {
        self.pairs.iter().map(|p| p.length).fold(0.0, f64::max)
    }

    /// Qubits outside `u` with a long interaction into `u`, together with
    /// qubits of `u` with a long interaction leaving it.
    pub fn long_boundary(&self, u: &Region, ell: f64) -> (Region, Region) {
        let mut outer = Vec::new();
        let mut inner = Vec::new();
        for p in self.pairs.iter().filter(|p| p.length >= ell) {
            match (u.contains(p.i), u.contains(p.j)) {
                (true, false) => {
                    inner.push(p.i);
                    outer.push(p.j);
                }
                (false, true) => {
                    inner.push(p.j);
                    outer.push(p.i);
                }
                _ => {}
            }
        }
        (Region::new(outer), Region::new(inner))
    }
}

/// Closed axis-parallel box `[min_1, max_1] × … × [min_D, max_D]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisBox {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl AxisBox {
    pub fn new(min: Vec<f64>, max: Vec<f64>) -> Result<Self, GeometryError> {
        if min.len() != max.len() {
            return Err(GeometryError::DimensionMismatch { index: 0, got: max.len(), expected: min.len() });
        }
        if min.iter().zip(&max).any(|(a, b)| a > b) {
            return Err(GeometryError::InvertedBox { min, max });
        }
        Ok(AxisBox { min, max })
    }

    pub fn cube(center: &[f64], side: f64) -> Self {
        AxisBox {
            min: center.iter().map(|c| c - side / 2.0).collect(),
            max: center.iter().map(|c| c + side / 2.0).collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.min.len()
    }

    pub fn sides(&self) -> Vec<f64> {
        self.min.iter().zip(&self.max).map(|(a, b)| b - a).collect()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter().zip(self.min.iter().zip(&self.max)).all(|(x, (a, b))| a <= x && x <= b)
    }

    /// `[min, max)` in every coordinate.
    pub fn contains_half_open(&self, p: &[f64]) -> bool {
        p.iter().zip(self.min.iter().zip(&self.max)).all(|(x, (a, b))| a <= x && x < b)
    }

    /// ℓ∞ distance from `p` to the union of the box's faces of codimension
    /// `codim` (1 = facets, 2 = ridges).
    pub fn linf_to_faces(&self, p: &[f64], codim: usize) -> f64 {
        let dim = self.dimension();
        if codim > dim {
            return f64::INFINITY;
        }
        // Distance in each coordinate to the interval, and to its nearer endpoint.
        let to_interval: Vec<f64> = (0..dim).map(|c| interval_gap(p[c], self.min[c], self.max[c])).collect();
        let to_end: Vec<f64> = (0..dim).map(|c| (p[c] - self.min[c]).abs().min((p[c] - self.max[c]).abs())).collect();
        let mut best = f64::INFINITY;
        for_each_subset(dim, codim, &mut |fixed| {
            let d = (0..dim)
                .map(|c| if fixed.contains(&c) { to_end[c] } else { to_interval[c] })
                .fold(0.0, f64::max);
            best = best.min(d);
        });
        best
    }
}

fn interval_gap(x: f64, a: f64, b: f64) -> f64 {
    if x < a {
        a - x
    } else if x > b {
        x - b
    } else {
        0.0
    }
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), f);
}

/// Upper bound on the number of embedded points in a box.
pub fn packing_bound(b: &AxisBox) -> f64 {
    let dim = b.dimension();
    let prod: f64 = b.sides().iter().map(|l| 1.0 + l).product();
    2f64.powi(dim as i32) / ball_volume(dim) * prod
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityCheck {
    pub count: usize,
    pub bound: f64,
    pub holds: bool,
}

pub fn check_density(b: &AxisBox, e: &Embedding) -> DensityCheck {
    let count = e.count_in(b);
    let bound = packing_bound(b);
    DensityCheck { count, bound, holds: count as f64 <= bound }
}

/// A point carrying a nonnegative integer mass (or multiplicity).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointMass {
    pub point: Vec<f64>,
    pub mass: u64,
}

impl PointMass {
    pub fn unit(point: Vec<f64>) -> Self {
        PointMass { point, mass: 1 }
    }
}

/// Tiling of `R^D` by cubes `offset + w·(m + [0,1)^D)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridTiling {
    pub width: f64,
    pub offset: Vec<f64>,
}

impl GridTiling {
    pub fn residue(&self, x: f64, c: usize) -> f64 {
        (x - self.offset[c]).rem_euclid(self.width)
    }

    /// Number of coordinates of `p` within `radius` of a grid hyperplane.
    pub fn near_coords(&self, p: &[f64], radius: f64) -> usize {
        (0..p.len())
            .filter(|&c| {
                let r = self.residue(p[c], c);
                r <= radius || r >= self.width - radius
            })
            .count()
    }

    pub fn cube_index(&self, p: &[f64]) -> Vec<i64> {
        p.iter().enumerate().map(|(c, x)| ((x - self.offset[c]) / self.width).floor() as i64).collect()
    }

    pub fn cube(&self, m: &[i64]) -> AxisBox {
        AxisBox {
            min: m.iter().enumerate().map(|(c, &i)| self.offset[c] + i as f64 * self.width).collect(),
            max: m.iter().enumerate().map(|(c, &i)| self.offset[c] + (i + 1) as f64 * self.width).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TilingMethod {
    Sampled,
    ExactSearch,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TilingReport {
    pub tiling: GridTiling,
    pub ell: f64,
    pub method: TilingMethod,
    pub samples: usize,
    pub x_near: u64,
    pub x_total: u64,
    pub x_fraction: f64,
    pub x_allowed: f64,
    pub y_near: u64,
    pub y_total: u64,
    pub y_fraction: f64,
    pub y_allowed: f64,
}

fn near_mass(t: &GridTiling, pts: &[PointMass], radius: f64, at_least: usize) -> u64 {
    pts.iter().filter(|p| t.near_coords(&p.point, radius) >= at_least).map(|p| p.mass).sum()
}

fn fraction(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

fn evaluate_tiling(t: GridTiling, x: &[PointMass], y: &[PointMass], ell: f64, method: TilingMethod, samples: usize) -> TilingReport {
    let dim = t.offset.len() as f64;
    let w = t.width;
    let x_near = near_mass(&t, x, 2.0 * ell, 2);
    let y_near = near_mass(&t, y, 2.0 * ell, 1);
    let x_total = x.iter().map(|p| p.mass).sum();
    let y_total = y.iter().map(|p| p.mass).sum();
    TilingReport {
        tiling: t,
        ell,
        method,
        samples,
        x_near,
        x_total,
        x_fraction: fraction(x_near, x_total),
        x_allowed: (4.0 * ell * dim / w).powi(2),
        y_near,
        y_total,
        y_fraction: fraction(y_near, y_total),
        y_allowed: 8.0 * ell * dim / w,
    }
}

impl TilingReport {
    /// Both near-face masses are within the allowed fractions.
    pub fn satisfied(&self) -> bool {
        self.x_near as f64 <= self.x_allowed * self.x_total as f64 && self.y_near as f64 <= self.y_allowed * self.y_total as f64
    }
}

/// Searches for a grid offset such that few points of `x` lie near a
/// codimension-2 face and few points of `y` near a codimension-1 face.
/// Random offsets are tried first; after `max_samples` failures an exact
/// search over the finitely many combinatorially distinct offsets runs.
pub fn find_tiling<R: Rng + ?Sized>(
    x: &[PointMass],
    y: &[PointMass],
    w: f64,
    ell: f64,
    dim: usize,
    rng: &mut R,
    max_samples: usize,
) -> Result<TilingReport, GeometryError> {
    positive("ell", ell)?;
    positive("w", w)?;
    if dim == 0 {
        return Err(GeometryError::ZeroDimension);
    }
    if w < 4.0 * ell {
        return Err(GeometryError::TilingWidth { w, ell });
    }
    for (index, p) in x.iter().chain(y).enumerate() {
        if p.point.len() != dim {
            return Err(GeometryError::DimensionMismatch { index, got: p.point.len(), expected: dim });
        }
    }
    let zero = evaluate_tiling(GridTiling { width: w, offset: vec![0.0; dim] }, x, y, ell, TilingMethod::Sampled, 0);
    if x.is_empty() && y.is_empty() {
        return Ok(zero);
    }
    for s in 1..=max_samples {
        let offset = (0..dim).map(|_| rng.gen_range(0.0..w)).collect();
        let r = evaluate_tiling(GridTiling { width: w, offset }, x, y, ell, TilingMethod::Sampled, s);
        if r.satisfied() {
            return Ok(r);
        }
    }
    Ok(exact_tiling_search(x, y, w, ell, dim, max_samples))
}

/// Per coordinate, the near/far status of every point only changes at the
/// offsets `p_c ± 2ℓ (mod w)`, and the status on an open gap between such
/// breakpoints is never worse than at its endpoints, so the gap midpoints
/// are a complete candidate set.
fn exact_tiling_search(x: &[PointMass], y: &[PointMass], w: f64, ell: f64, dim: usize, samples: usize) -> TilingReport {
    let candidates: Vec<Vec<f64>> = (0..dim)
        .map(|c| {
            let mut bp: Vec<f64> = x
                .iter()
                .chain(y)
                .flat_map(|p| [(p.point[c] - 2.0 * ell).rem_euclid(w), (p.point[c] + 2.0 * ell).rem_euclid(w)])
                .collect();
            bp.sort_by(f64::total_cmp);
            bp.dedup();
            if bp.is_empty() {
                return vec![0.0];
            }
            let mut mids: Vec<f64> = bp.windows(2).map(|p| (p[0] + p[1]) / 2.0).collect();
            let last = *bp.last().unwrap();
            mids.push(((last + bp[0] + w) / 2.0).rem_euclid(w));
            mids
        })
        .collect();
    let mut idx = vec![0usize; dim];
    let mut best: Option<TilingReport> = None;
    loop {
        let offset = (0..dim).map(|c| candidates[c][idx[c]]).collect();
        let r = evaluate_tiling(GridTiling { width: w, offset }, x, y, ell, TilingMethod::ExactSearch, samples);
        if r.satisfied() {
            return r;
        }
        let score = r.x_fraction + r.y_fraction;
        if best.as_ref().map_or(true, |b| score < b.x_fraction + b.y_fraction) {
            best = Some(r);
        }
        let mut c = 0;
        loop {
            if c == dim {
                // Unreachable when the existence argument applies; report
                // the best offset found so callers can see the shortfall.
                return best.expect("at least one candidate");
            }
            idx[c] += 1;
            if idx[c] < candidates[c].len() {
                break;
            }
            idx[c] = 0;
            c += 1;
        }
    }
}

/// Total mass in the closed box.
pub fn mass_in(b: &AxisBox, masses: &[PointMass]) -> u64 {
    masses.iter().filter(|p| b.contains(&p.point)).map(|p| p.mass).sum()
}

/// Splits `b` by hyperplanes orthogonal to the first axis into the fewest
/// slabs such that every slab has height at least 5ℓ and either mass at most
/// `d1` or height at most 10ℓ. Slabs are half-open `[lo, hi)` along the first
/// axis except the last, which is closed.
pub fn subdivide(b: &AxisBox, masses: &[PointMass], ell: f64, d1: f64) -> Result<Vec<AxisBox>, GeometryError> {
    positive("ell", ell)?;
    positive("d1", d1)?;
    let lo = b.min[0];
    let hi = b.max[0];
    if hi - lo < 5.0 * ell {
        return Err(GeometryError::ShortBox { h: hi - lo, min: 5.0 * ell });
    }
    // Masses grouped by first coordinate, restricted to the box.
    let mut pts: Vec<(f64, u64)> = masses.iter().filter(|p| b.contains(&p.point) && p.mass > 0).map(|p| (p.point[0], p.mass)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut groups: Vec<(f64, u64)> = Vec::new();
    for (x, m) in pts {
        match groups.last_mut() {
            Some(g) if g.0 == x => g.1 += m,
            _ => groups.push((x, m)),
        }
    }
    // First position where the running mass from `a` exceeds d1.
    let overflow = |a: f64| -> Option<f64> {
        let mut acc = 0.0;
        for &(x, m) in groups.iter().filter(|g| g.0 >= a) {
            acc += m as f64;
            if acc > d1 {
                return Some(x);
            }
        }
        None
    };
    let last_start = hi - 5.0 * ell;
    // Furthest admissible next cut from `a`.
    let reach = |a: f64| -> f64 {
        let r = match overflow(a) {
            Some(t) if t > a + 10.0 * ell => t,
            Some(_) => {
                let mut c = a + 10.0 * ell;
                while c - a > 10.0 * ell {
                    c = c.next_down();
                }
                c
            }
            None => hi,
        };
        r.min(last_start)
    };
    // Largest group position whose suffix mass exceeds d1: a final slab
    // heavier than d1 must start after it.
    let mut suffix = 0.0;
    let mut heavy_until = f64::NEG_INFINITY;
    for &(x, m) in groups.iter().rev() {
        suffix += m as f64;
        if suffix > d1 {
            heavy_until = x;
            break;
        }
    }
    let final_ok = |a: f64| a + 10.0 * ell >= hi || a > heavy_until;

    // Reachable start positions after j cuts form an interval [L_j, U_j].
    let mut layers: Vec<(f64, f64)> = vec![(lo, lo)];
    let final_start = loop {
        let (l, u) = *layers.last().unwrap();
        let mut cand = u.min(last_start);
        while hi - cand < 5.0 * ell {
            cand = cand.next_down();
        }
        if cand >= l && final_ok(cand) {
            break cand;
        }
        debug_assert!(l <= last_start, "cut layers overran the box");
        layers.push((l + 5.0 * ell, reach(u)));
    };
    let mut cuts = vec![final_start];
    for &(l, u) in layers[..layers.len() - 1].iter().rev() {
        let next = *cuts.last().unwrap();
        let mut c = u.min(next - 5.0 * ell).max(l);
        while next - c < 5.0 * ell {
            c = c.next_down();
        }
        cuts.push(c);
    }
    cuts.reverse();
    cuts[0] = lo;
    cuts.push(hi);
    Ok(cuts
        .windows(2)
        .map(|c| {
            let mut min = b.min.clone();
            let mut max = b.max.clone();
            min[0] = c[0];
            max[0] = c[1];
            AxisBox { min, max }
        })
        .collect())
}

/// Mass of the `i`-th slab of a subdivision under the half-open convention.
pub fn slab_mass(slabs: &[AxisBox], i: usize, masses: &[PointMass]) -> u64 {
    let s = &slabs[i];
    let last = i + 1 == slabs.len();
    masses
        .iter()
        .filter(|p| s.contains(&p.point) && (last || p.point[0] < s.max[0]))
        .map(|p| p.mass)
        .sum()
}
