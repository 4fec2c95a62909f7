//! Brute-force reference implementations, independent of the GF(2)
//! elimination code in the library. Paulis are `(x, z)` bitmasks.
#![allow(dead_code)]

use std::collections::HashSet;

use locality::geometry::Embedding;
use locality::{PauliVector, SubsystemCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type P = (u32, u32);

pub fn mask(p: &PauliVector) -> P {
    let mut x = 0;
    let mut z = 0;
    for i in 0..p.n() {
        if p.x_at(i) {
            x |= 1 << i;
        }
        if p.z_at(i) {
            z |= 1 << i;
        }
    }
    (x, z)
}

pub fn anti(a: P, b: P) -> bool {
    ((a.0 & b.1).count_ones() + (a.1 & b.0).count_ones()) % 2 == 1
}

pub fn weight(p: P) -> u32 {
    (p.0 | p.1).count_ones()
}

/// Every element of the group generated by `gens`, phases dropped.
pub fn group(gens: &[P]) -> HashSet<P> {
    let mut out = HashSet::from([(0, 0)]);
    for &g in gens {
        let extra: Vec<P> = out.iter().map(|&(x, z)| (x ^ g.0, z ^ g.1)).collect();
        out.extend(extra);
    }
    out
}

pub struct Oracle {
    pub n: usize,
    pub gauge: HashSet<P>,
    pub stabilizer: Vec<P>,
}

impl Oracle {
    pub fn new(code: &SubsystemCode) -> Self {
        let gens: Vec<P> = code.gauge_generators().iter().map(mask).collect();
        let gauge = group(&gens);
        let stabilizer = gauge.iter().copied().filter(|&s| gens.iter().all(|&g| !anti(s, g))).collect();
        Oracle { n: code.n(), gauge, stabilizer }
    }

    pub fn r(&self) -> usize {
        self.gauge.len().trailing_zeros() as usize
    }

    pub fn s(&self) -> usize {
        self.stabilizer.len().trailing_zeros() as usize
    }

    pub fn k(&self) -> usize {
        let g = (self.r() - self.s()) / 2;
        self.n - self.s() - g
    }

    fn dressed(&self, p: P) -> bool {
        !self.gauge.contains(&p) && self.stabilizer.iter().all(|&s| !anti(p, s))
    }

    fn bare(&self, p: P, gens: &[P]) -> bool {
        !self.gauge.contains(&p) && gens.iter().all(|&g| !anti(p, g))
    }

    /// Every Pauli supported on the qubits of `m`.
    pub fn paulis_on(m: u32) -> Vec<P> {
        let mut out = Vec::new();
        let mut x = m;
        loop {
            let mut z = m;
            loop {
                out.push((x, z));
                if z == 0 {
                    break;
                }
                z = (z - 1) & m;
            }
            if x == 0 {
                break;
            }
            x = (x - 1) & m;
        }
        out
    }

    pub fn correctable(&self, u: &[usize]) -> bool {
        let m = u.iter().fold(0u32, |a, &q| a | 1 << q);
        Self::paulis_on(m).into_iter().all(|p| !self.dressed(p))
    }

    pub fn cleanable(&self, code: &SubsystemCode, u: &[usize]) -> bool {
        let gens: Vec<P> = code.gauge_generators().iter().map(mask).collect();
        let m = u.iter().fold(0u32, |a, &q| a | 1 << q);
        Self::paulis_on(m).into_iter().all(|p| !self.bare(p, &gens))
    }

    /// Minimum weight of a dressed logical, or `None` when `k = 0`.
    pub fn distance(&self) -> Option<u32> {
        let full = (1u32 << self.n) - 1;
        Self::paulis_on(full).into_iter().filter(|&p| self.dressed(p)).map(weight).min()
    }
}

pub fn bits_of(m: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&q| m >> q & 1 == 1).collect()
}

pub fn five_one_three() -> SubsystemCode {
    SubsystemCode::from_strings(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]).unwrap()
}

pub fn bacon_shor_2() -> SubsystemCode {
    SubsystemCode::from_strings(&["XIXI", "IXIX", "ZZII", "IIZZ"]).unwrap()
}

/// Points on a jittered lattice: spacing `s ≥ 1` and jitter at most `(s-1)/2`
/// keep every pair at distance at least 1.
pub fn jittered(dim: usize, side: usize, seed: u64) -> Embedding {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s: f64 = rng.gen_range(1.0..2.0);
    let j = (s - 1.0) / 2.0;
    let mut pts = Vec::new();
    let total = side.pow(dim as u32);
    for idx in 0..total {
        if rng.gen_bool(0.3) {
            continue;
        }
        let mut p = Vec::with_capacity(dim);
        let mut r = idx;
        for _ in 0..dim {
            p.push((r % side) as f64 * s + rng.gen_range(-j..=j));
            r /= side;
        }
        pts.push(p);
    }
    Embedding::new(dim, pts).unwrap()
}
