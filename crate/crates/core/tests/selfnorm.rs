use asymtail::mc::McConfig;
use asymtail::selfnorm::*;
use asymtail::thresholds::m_star;
use asymtail::{Error, FiniteDist, RngSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn law(pairs: &[(f64, f64)]) -> FiniteDist {
    FiniteDist::new(pairs.to_vec()).unwrap()
}

fn two_atom() -> FiniteDist {
    law(&[(-1.0, 2.0 / 3.0), (2.0, 1.0 / 3.0)])
}

fn random_zero_mean(r: &mut ChaCha8Rng) -> FiniteDist {
    let side = |r: &mut ChaCha8Rng, sign: f64| -> Vec<(f64, f64)> {
        (0..r.random_range(1..5))
            .map(|_| (sign * r.random_range(0.1..3.0), r.random_range(0.05..1.0)))
            .collect()
    };
    let neg = side(r, -1.0);
    let mut pos = side(r, 1.0);
    let moment = |v: &[(f64, f64)]| v.iter().map(|&(x, p)| x.abs() * p).sum::<f64>();
    let k = moment(&neg) / moment(&pos);
    for a in &mut pos {
        a.1 *= k;
    }
    let mut pairs: Vec<(f64, f64)> = neg.into_iter().chain(pos).collect();
    if r.random::<f64>() < 0.3 {
        pairs.push((0.0, 0.2));
    }
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    let d = FiniteDist::new(pairs.iter().map(|&(v, p)| (v, p / total)).collect()).unwrap();
    assert!(d.mean().abs() < 1e-14);
    d
}

#[test]
fn g_examples() {
    let map = ReciprocatingMap::new(two_atom()).unwrap();
    assert!((map.g(2.0) - 2.0 / 3.0).abs() < 1e-15);
    assert!((map.g(-1.0) - 2.0 / 3.0).abs() < 1e-15);
    assert_eq!(map.g(0.0), 0.0);
    assert_eq!(map.g(1.9), 0.0);
    let sym =
        ReciprocatingMap::new(law(&[(-1.0, 0.3), (-0.4, 0.2), (0.4, 0.2), (1.0, 0.3)])).unwrap();
    for x in [0.1, 0.4, 0.7, 1.0, 5.0] {
        assert_eq!(sym.g(x), sym.g(-x));
    }
}

#[test]
fn inverse_examples() {
    let map = ReciprocatingMap::new(law(&[(-1.0, 0.5), (1.0, 0.5)])).unwrap();
    assert_eq!(map.x_plus(0.0), 0.0);
    assert_eq!(map.x_plus(0.3), 1.0);
    assert_eq!(map.x_plus(0.6), f64::INFINITY);
    assert_eq!(map.x_minus(0.6), f64::NEG_INFINITY);
    for h in [0.0, 0.1, 0.3, 0.5] {
        assert_eq!(map.x_minus(h), -map.x_plus(h));
    }
}

#[test]
fn reciprocate_examples() {
    let sym = ReciprocatingMap::new(law(&[
        (-2.0, 0.1),
        (-1.0, 0.2),
        (0.0, 0.4),
        (1.0, 0.2),
        (2.0, 0.1),
    ]))
    .unwrap();
    for u in [1e-9, 0.1, 0.5, 0.9, 1.0 - 1e-12] {
        for x in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            assert_eq!(sym.reciprocate(x, u), -x);
        }
    }
    let map = ReciprocatingMap::new(two_atom()).unwrap();
    for u in [1e-12, 0.3, 0.999] {
        assert_eq!(map.reciprocate(2.0, u), -1.0);
        assert_eq!(map.reciprocate(-1.0, u), 2.0);
        assert_eq!(map.reciprocate(0.0, u), 0.0);
    }
}

#[test]
fn reciprocate_is_nonincreasing() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let map = ReciprocatingMap::new(random_zero_mean(&mut r)).unwrap();
        let mut xs: Vec<f64> = map.base().atoms().iter().map(|a| a.v).collect();
        xs.extend((0..40).map(|i| -4.0 + 0.2 * i as f64));
        xs.sort_by(f64::total_cmp);
        for u in [0.2, 0.7] {
            let rs: Vec<f64> = xs.iter().map(|&x| map.reciprocate(x, u)).collect();
            assert!(rs.windows(2).all(|w| w[1] <= w[0]), "{rs:?}");
        }
    }
}

#[test]
fn reciprocate_is_involution_off_atoms_of_split() {
    // Atoms that pair one-to-one in G are exchanged by r.
    let map = ReciprocatingMap::new(law(&[
        (-1.5, 0.2),
        (-0.5, 0.4),
        (0.0, 0.1),
        (1.0, 0.2),
        (3.0, 0.1),
    ]))
    .unwrap();
    for x in [-1.5, -0.5, 1.0, 3.0] {
        let y = map.reciprocate(x, 0.5);
        assert!((map.reciprocate(y, 0.5) - x).abs() < 1e-9);
    }
}

#[test]
fn rejects_nonzero_mean() {
    let d = law(&[(-1.0, 0.5), (1.0, 0.25), (3.0, 0.25)]);
    assert!(matches!(
        ReciprocatingMap::new(d),
        Err(Error::InvalidDist(_))
    ));
}

#[test]
fn decomposition_examples() {
    let d = law(&[(-0.7, 0.5), (0.7, 0.5)]);
    let comps = ReciprocatingMap::new(d.clone())
        .unwrap()
        .two_point_decomposition();
    assert_eq!(comps.len(), 1);
    assert!((comps[0].weight - 1.0).abs() < 1e-15);
    assert_eq!(comps[0].dist, d);

    let d = law(&[(-2.0, 0.5), (1.0, 0.25), (3.0, 0.25)]);
    let comps = ReciprocatingMap::new(d.clone())
        .unwrap()
        .two_point_decomposition();
    assert_eq!(comps.len(), 2);
    assert_eq!((comps[0].a, comps[0].b), (-2.0, 1.0));
    assert!((comps[0].weight - 3.0 / 8.0).abs() < 1e-15);
    assert_eq!((comps[1].a, comps[1].b), (-2.0, 3.0));
    assert!((comps[1].weight - 5.0 / 8.0).abs() < 1e-15);
    let back = recombine(&comps);
    for (x, y) in back.atoms().iter().zip(d.atoms()) {
        assert_eq!(x.v, y.v);
        assert!((x.p - y.p).abs() <= 1e-12);
    }
}

#[test]
fn decomposition_recombines_random_laws() {
    let mut r = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let d = random_zero_mean(&mut r);
        let comps = ReciprocatingMap::new(d.clone())
            .unwrap()
            .two_point_decomposition();
        let wsum: f64 = comps.iter().map(|c| c.weight).sum();
        assert!((wsum - 1.0).abs() <= 1e-12);
        for c in &comps {
            assert!(c.dist.len() <= 2);
            assert!(c.dist.mean().abs() <= 1e-12, "{c:?}");
        }
        let back = recombine(&comps);
        assert_eq!(back.len(), d.len());
        for (x, y) in back.atoms().iter().zip(d.atoms()) {
            assert_eq!(x.v, y.v);
            assert!((x.p - y.p).abs() <= 1e-12);
        }
    }
}

#[test]
fn bounded_asymmetry() {
    let map = ReciprocatingMap::new(two_atom()).unwrap();
    assert!((map.max_asymmetry().0 - 2.0).abs() < 1e-15);
    assert!(map.check_bounded_asymmetry(1.0 / 3.0).is_ok());
    let e = map.check_bounded_asymmetry(0.45).unwrap_err();
    assert!(matches!(e, Error::Condition(ref s) if s.contains("(-1, 2)")));
}

#[test]
fn hat_examples() {
    let d = law(&[(-1.0, 0.5), (2.0, 0.25), (-0.5, 0.25)]);
    let spec = RngSpec::new(5, 0);
    assert_eq!(hat_sample(&d, spec, 1000).unwrap(), d.sample(spec, 1000));

    let d = law(&[(-1.0, 0.25), (0.0, 0.5), (1.0, 0.25)]);
    let n = 200_000;
    let xs = hat_sample(&d, RngSpec::new(8, 1), n).unwrap();
    assert!(xs.iter().all(|&x| x != 0.0));
    let up = xs.iter().filter(|&&x| x == 1.0).count() as f64 / n as f64;
    assert!((up - 0.5).abs() < 4.0 * (0.25 / n as f64).sqrt());
    assert_eq!(hat_dist(&d).unwrap(), law(&[(-1.0, 0.5), (1.0, 0.5)]));
    assert!(matches!(
        hat_sample(&FiniteDist::point(0.0), spec, 3),
        Err(Error::Degenerate(_))
    ));
}

#[test]
fn variance_identity() {
    let d = law(&[(-1.0, 0.5), (1.0, 0.5)]);
    assert_eq!(var_identity_check(&d, |x| x * x).unwrap(), 0.0);
    let d = law(&[(-1.0, 0.25), (0.0, 0.5), (1.0, 0.25)]);
    assert!(var_identity_check(&d, |x| x * x).unwrap().abs() <= 1e-12);
    assert!(var_identity_check(&d, |x| x.powi(4)).unwrap().abs() <= 1e-12);
    let mut r = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..50 {
        let d = random_zero_mean(&mut r);
        for g in [
            |x: f64| x * x,
            |x: f64| x.powi(4),
            |x: f64| (x * x).min(1.0),
        ] {
            assert!(var_identity_check(&d, g).unwrap().abs() <= 1e-12);
        }
    }
}

#[test]
fn statistic_identities() {
    let mut r = ChaCha8Rng::seed_from_u64(31);
    let n = 7;
    for _ in 0..200 {
        let row: Vec<Coord> = (0..n)
            .map(|_| {
                Coord::plain(if r.random::<f64>() < 0.2 {
                    0.0
                } else {
                    r.random_range(-2.0..2.0)
                })
            })
            .collect();
        let v = stat_row(&row, StatKind::V).value;
        let vw = stat_row(&row, StatKind::VW).value;
        let vy = stat_row(&row, StatKind::VYm { m: 1.0 }).value;
        assert!((v - vw).abs() <= 1e-12 && (v - vy).abs() <= 1e-12);
        assert!(v.abs() <= (n as f64).sqrt() * (1.0 + 1e-12));
        let vh = stat_row(&row, StatKind::VHatSymm { m: 1.0, p: 0.8 }).value;
        assert!(vh.abs() <= (n as f64 / 0.8).sqrt() * (1.0 + 1e-12));
    }
    let zero = vec![Coord::plain(0.0); 4];
    for k in [
        StatKind::V,
        StatKind::VW,
        StatKind::VYm { m: 2.0 },
        StatKind::VSymm { m: 1.0, p: 0.5 },
    ] {
        let s = stat_row(&zero, k);
        assert_eq!((s.value, s.denominator), (0.0, 0.0));
    }
    assert!(selfnorm_stat(&[zero], StatKind::VYm { m: 0.5 }).is_err());
}

fn mc(samples: usize) -> McConfig {
    McConfig::new(41, samples)
}

#[test]
fn bound_check_rademacher() {
    let d = law(&[(-1.0, 0.5), (1.0, 0.5)]);
    let r = selfnorm_bound_check(&d, 8, 0.5, 1.0, &mc(100_000)).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(r.checks.len(), 5);
    assert_eq!(r.hat_sup_ok, Some(true));
}

#[test]
fn bound_check_asymmetric_two_atom() {
    let p = 1.0 / 3.0;
    let r = selfnorm_bound_check(&two_atom(), 6, p, m_star(p).unwrap(), &mc(100_000)).unwrap();
    assert!(r.pass, "{:?}", r.checks.iter().find(|c| !c.pass));
    assert_eq!(r.checks.len(), 3);
    assert_eq!(r.hat_sup_ok, None);
}

#[test]
fn bound_check_support_rows_are_empty() {
    let d = law(&[(-1.0, 0.3), (0.0, 0.4), (1.0, 0.3)]);
    let r = selfnorm_bound_check(&d, 5, 0.5, 1.0, &mc(50_000)).unwrap();
    let sup = (5.0 / r.p_symm).sqrt();
    for c in &r.checks {
        assert!(c.max_value <= sup * (1.0 + 1e-12));
        for row in c.rows.iter().filter(|row| row.x > sup) {
            assert_eq!(row.hits, 0);
        }
    }
}

#[test]
fn bound_check_errors() {
    let d = two_atom();
    assert!(matches!(
        selfnorm_bound_check(&d, 4, 0.45, 2.0, &mc(10)),
        Err(Error::Condition(_))
    ));
    assert!(matches!(
        selfnorm_bound_check(&d, 4, 1.0 / 3.0, 1.0, &mc(10)),
        Err(Error::Condition(_))
    ));
}
