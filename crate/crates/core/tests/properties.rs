mod common;

use common::{anti, bits_of, group, jittered, mask, Oracle};
use locality::bounds::{projector_bounds, subsystem_bounds, try_ball_volume, BoundMode};
use locality::certify::{expansion_sweep, Certificate, Mode, Outcome};
use locality::code::DistanceResult;
use locality::contours::{ell_exponent, emit_contours};
use locality::correct::{check_subset_closure, is_correctable, is_dressed_cleanable, CodeClass, Region};
use locality::geometry::{check_density, extract_interactions, find_tiling, subdivide, AxisBox, Embedding, PointMass};
use locality::{in_span, kernel_on_support, symplectic_product, BitMatrix, PauliVector, SubsystemCode};
use num_rational::Rational64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pauli(n: usize) -> impl Strategy<Value = PauliVector> {
    proptest::collection::vec(prop_oneof![Just('I'), Just('X'), Just('Y'), Just('Z')], n)
        .prop_map(|cs| cs.into_iter().collect::<String>().parse().unwrap())
}

fn code_on(n: usize, max_gens: usize) -> impl Strategy<Value = SubsystemCode> {
    proptest::collection::vec(pauli(n), 0..=max_gens).prop_map(move |g| SubsystemCode::new(n, g).unwrap())
}

fn small_code() -> impl Strategy<Value = SubsystemCode> {
    (1usize..=5).prop_flat_map(|n| code_on(n, 6))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn symplectic_form_is_bilinear((p, q, r) in (1usize..8).prop_flat_map(|n| (pauli(n), pauli(n), pauli(n)))) {
        prop_assert_eq!(symplectic_product(&p, &q).unwrap(), symplectic_product(&q, &p).unwrap());
        prop_assert!(!symplectic_product(&p, &p).unwrap());
        let pq = p.mul(&q).unwrap();
        prop_assert_eq!(symplectic_product(&pq, &r).unwrap(), symplectic_product(&p, &r).unwrap() ^ symplectic_product(&q, &r).unwrap());
        prop_assert_eq!(symplectic_product(&p, &q).unwrap(), anti(mask(&p), mask(&q)));
    }

    #[test]
    fn kernel_matches_enumeration((n, rows, sup) in (1usize..=5).prop_flat_map(|n| (Just(n), proptest::collection::vec(pauli(n), 0..5), 0u32..(1 << n)))) {
        let m = BitMatrix::new(n, rows.clone()).unwrap();
        let support = bits_of(sup, n);
        let ker = kernel_on_support(&support, &m).unwrap();
        let cons: Vec<_> = rows.iter().map(mask).collect();
        let count = Oracle::paulis_on(sup).into_iter().filter(|&p| cons.iter().all(|&c| !anti(p, c))).count();
        prop_assert_eq!(1usize << ker.rank(), count);
        prop_assert_eq!(ker.rank(), ker.len());
        for v in ker.rows() {
            prop_assert!(v.support().iter().all(|q| support.contains(q)));
            prop_assert!(cons.iter().all(|&c| !anti(mask(v), c)));
        }
    }

    #[test]
    fn span_membership_matches_group((rows, v) in (1usize..=5).prop_flat_map(|n| (proptest::collection::vec(pauli(n), 0..5), pauli(n)))) {
        let n = v.n();
        let g = group(&rows.iter().map(mask).collect::<Vec<_>>());
        prop_assert_eq!(in_span(&v, &BitMatrix::new(n, rows).unwrap()).unwrap(), g.contains(&mask(&v)));
    }

    #[test]
    fn parameters_match_group_orders(code in small_code()) {
        let o = Oracle::new(&code);
        let p = code.parameters();
        prop_assert_eq!(p.r, o.r());
        prop_assert_eq!(p.s, o.s());
        prop_assert_eq!(p.k, o.k());
        prop_assert_eq!(p.k + p.g + p.s, p.n);
        prop_assert_eq!(p.r, p.s + 2 * p.g);
    }

    #[test]
    fn logical_pairs_are_symplectic(code in small_code()) {
        let k = code.k();
        match code.logical_representatives() {
            Err(_) => prop_assert_eq!(k, 0),
            Ok(pairs) => {
                prop_assert_eq!(pairs.len(), k);
                let gens: Vec<_> = code.gauge_generators().iter().map(mask).collect();
                let o = Oracle::new(&code);
                for (i, a) in pairs.iter().enumerate() {
                    for p in [&a.x_bar, &a.z_bar] {
                        prop_assert!(gens.iter().all(|&g| !anti(mask(p), g)));
                        prop_assert!(!o.gauge.contains(&mask(p)));
                    }
                    prop_assert!(anti(mask(&a.x_bar), mask(&a.z_bar)));
                    for b in &pairs[i + 1..] {
                        for (p, q) in [(&a.x_bar, &b.x_bar), (&a.x_bar, &b.z_bar), (&a.z_bar, &b.x_bar), (&a.z_bar, &b.z_bar)] {
                            prop_assert!(!anti(mask(p), mask(q)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn correctability_matches_enumeration((code, u) in small_code().prop_flat_map(|c| { let n = c.n(); (Just(c), 0u32..(1 << n)) })) {
        let o = Oracle::new(&code);
        let region = bits_of(u, code.n());
        prop_assert_eq!(is_correctable(&code, &region), o.correctable(&region));
        prop_assert_eq!(is_dressed_cleanable(&code, &region), o.cleanable(&code, &region));
        // Correctable regions are dressed-cleanable.
        prop_assert!(!o.correctable(&region) || o.cleanable(&code, &region));
    }

    #[test]
    fn distance_matches_enumeration(code in small_code()) {
        let o = Oracle::new(&code);
        match o.distance() {
            None => prop_assert!(code.distance(code.n()).is_err()),
            Some(d) => prop_assert_eq!(code.distance(code.n()).unwrap(), DistanceResult::Exact(d as usize)),
        }
    }

    #[test]
    fn subset_closure_random((code, u, w) in small_code().prop_flat_map(|c| { let n = c.n(); (Just(c), 0u32..(1 << n), 0u32..(1 << n)) })) {
        let n = code.n();
        let uu = Region::new(bits_of(u, n));
        let ww = Region::new(bits_of(u & w, n));
        prop_assert!(check_subset_closure(&code, &uu, &ww).unwrap());
    }

    #[test]
    fn density_bound_holds(dim in 2usize..=3, seed in any::<u64>(), lo in proptest::collection::vec(-2.0f64..6.0, 3), sides in proptest::collection::vec(0.0f64..5.0, 3)) {
        let e = jittered(dim, 5, seed);
        prop_assert!(e.validate().is_empty());
        let b = AxisBox::new(lo[..dim].to_vec(), lo[..dim].iter().zip(&sides).map(|(a, s)| a + s).collect()).unwrap();
        prop_assert!(check_density(&b, &e).holds);
    }

    #[test]
    fn ell_star_monotone(n in 10.0f64..1e6, kf in 0.0f64..1.0, df in 0.0f64..1.0, bump in 1.0f64..3.0, dim in 2usize..5) {
        let k = (n * kf).max(1.0);
        let d = (n * df).max(1.0);
        for f in [subsystem_bounds, projector_bounds] {
            let base = f(n, k, d, dim, BoundMode::Asymptotic).unwrap().ell_star;
            let more_d = f(n, k, (d * bump).min(n), dim, BoundMode::Asymptotic).unwrap().ell_star;
            let more_k = f(n, (k * bump).min(n), d, dim, BoundMode::Asymptotic).unwrap().ell_star;
            prop_assert!(more_d >= base * (1.0 - 1e-12));
            prop_assert!(more_k >= base * (1.0 - 1e-12));
        }
    }

    #[test]
    fn contours_agree_with_bounds(ki in 0i64..=10, di in 0i64..=10, dim in 2usize..=4, projector in any::<bool>()) {
        let kappa = Rational64::new(ki, 10);
        let delta = Rational64::new(di, 10);
        let class = if projector { CodeClass::Projector } else { CodeClass::Subsystem };
        let exact = ell_exponent(dim, class, kappa, delta);
        let n: f64 = 1e6;
        let k = n.powf(ki as f64 / 10.0);
        let d = n.powf(di as f64 / 10.0);
        let r = match class {
            CodeClass::Subsystem => subsystem_bounds(n, k, d, dim, BoundMode::Asymptotic),
            CodeClass::Projector => projector_bounds(n, k, d, dim, BoundMode::Asymptotic),
        }.unwrap();
        let measured = (r.ell_star.ln() / n.ln()).max(0.0);
        prop_assert!((measured - *exact.numer() as f64 / *exact.denom() as f64).abs() < 1e-6);
    }

    #[test]
    fn tiling_always_found(seed in any::<u64>(), nx in 0usize..12, ny in 0usize..12, ell in 0.2f64..2.0, ratio in 4.0f64..20.0, dim in 1usize..=3) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = |m: usize| -> Vec<PointMass> {
            (0..m).map(|_| PointMass { point: (0..dim).map(|_| rng.gen_range(-20.0..20.0)).collect(), mass: rng.gen_range(1..4) }).collect()
        };
        let x = pts(nx);
        let y = pts(ny);
        let r = find_tiling(&x, &y, ratio * ell, ell, dim, &mut rng, 20).unwrap();
        prop_assert!(r.satisfied());
    }

    #[test]
    fn subdivide_postconditions(seed in any::<u64>(), h_over in 5.0f64..60.0, ell in 0.5f64..2.0, count in 0usize..30, d1 in 1.0f64..10.0) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = h_over * ell;
        let b = AxisBox::new(vec![0.0, 0.0], vec![h, 4.0]).unwrap();
        let masses: Vec<PointMass> = (0..count).map(|_| PointMass { point: vec![rng.gen_range(0.0..=h), rng.gen_range(0.0..=4.0)], mass: rng.gen_range(1..3) }).collect();
        let slabs = subdivide(&b, &masses, ell, d1).unwrap();
        prop_assert_eq!(slabs[0].min[0], 0.0);
        prop_assert_eq!(slabs.last().unwrap().max[0], h);
        for (i, s) in slabs.iter().enumerate() {
            if i > 0 {
                prop_assert_eq!(s.min[0], slabs[i - 1].max[0]);
            }
            prop_assert!(s.min[0] + 5.0 * ell <= s.max[0]);
            let last = i + 1 == slabs.len();
            let mass: u64 = masses.iter().filter(|p| p.point[0] >= s.min[0] && (p.point[0] < s.max[0] || last && p.point[0] <= s.max[0])).map(|p| p.mass).sum();
            prop_assert!(mass as f64 <= d1 || s.min[0] + 10.0 * ell >= s.max[0]);
        }
    }

    #[test]
    fn verified_sweep_accepts_only_correctable(code in (2usize..=5).prop_flat_map(|n| code_on(n, 5)), ell in 0.5f64..2.0, tau in 0.5f64..4.0) {
        let e = Embedding::cubic_lattice(code.n(), 2);
        let s = extract_interactions(&code, &e).unwrap();
        let cert = expansion_sweep(Some(&code), &e, &s, ell, Some(tau), 2, Mode::Verified).unwrap();
        let o = Oracle::new(&code);
        for st in cert.steps.iter().filter(|s| s.accepted && s.rule.starts_with("expand")) {
            prop_assert!(o.correctable(&st.region));
        }
        if let Outcome::ContradictionReached { k } = cert.outcome {
            prop_assert!(k >= 1);
        }
        if cert.outcome == Outcome::CertifiedCorrectable {
            prop_assert_eq!(code.k(), 0);
        }
        prop_assert_eq!(Certificate::from_json_lines(&cert.to_json_lines()).unwrap(), cert);
    }

    #[test]
    fn code_json_roundtrip(code in small_code()) {
        let s = serde_json::to_string(&code).unwrap();
        prop_assert_eq!(serde_json::from_str::<SubsystemCode>(&s).unwrap(), code);
    }

    #[test]
    fn embedding_json_roundtrip(dim in 1usize..=3, seed in any::<u64>()) {
        let e = jittered(dim, 3, seed);
        let s = serde_json::to_string(&e).unwrap();
        prop_assert_eq!(serde_json::from_str::<Embedding>(&s).unwrap(), e);
    }
}

#[test]
fn ball_volume_matches_gamma_formula() {
    use statrs::function::gamma::gamma;
    for dim in 1..=12 {
        let d = dim as f64;
        let expect = std::f64::consts::PI.powf(d / 2.0) / gamma(d / 2.0 + 1.0);
        let got = try_ball_volume(dim).unwrap();
        assert!((got - expect).abs() <= 1e-12 * expect, "D = {dim}: {got} vs {expect}");
    }
}

#[test]
fn region_and_contour_json_roundtrip() {
    let r = Region::new([3, 1, 2]);
    assert_eq!(serde_json::from_str::<Region>(&serde_json::to_string(&r).unwrap()).unwrap(), r);
    let t = emit_contours(3, CodeClass::Projector, Rational64::new(1, 4)).unwrap();
    let back: locality::ContourTable = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
    assert_eq!(back, t);
}
