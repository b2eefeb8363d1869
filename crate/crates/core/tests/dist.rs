use asymtail::dist::*;
use asymtail::MomentFunction;
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn assert_same(a: &FiniteDist, b: &FiniteDist, tol: f64) {
    assert_eq!(a.len(), b.len(), "{a:?} vs {b:?}");
    for (x, y) in a.atoms().iter().zip(b.atoms()) {
        assert!(
            close(x.v, y.v, tol) && close(x.p, y.p, tol),
            "{x:?} vs {y:?}"
        );
    }
}

fn valid(d: &FiniteDist) -> bool {
    d.atoms().windows(2).all(|w| w[0].v < w[1].v)
        && d.atoms().iter().all(|a| a.p > 0.0)
        && (d.total_mass() - 1.0).abs() <= MASS_TOL * 10.0
}

#[test]
fn bs_examples() {
    let r = bs(0.5).unwrap();
    assert_same(
        &r,
        &FiniteDist::new(vec![(-1.0, 0.5), (1.0, 0.5)]).unwrap(),
        1e-15,
    );
    let d = bs(0.2).unwrap();
    assert_same(
        &d,
        &FiniteDist::new(vec![(-0.5, 0.8), (2.0, 0.2)]).unwrap(),
        1e-15,
    );
    for p in [0.01, 0.2, 0.5, 0.77, 0.999] {
        let d = bs(p).unwrap();
        assert!(d.mean().abs() < 1e-14 && close(d.variance(), 1.0, 1e-12));
    }
    assert!(bs(0.0).is_err() && bs(1.0).is_err() && bs(f64::NAN).is_err());
}

#[test]
fn st_examples() {
    assert_same(&st(1.0).unwrap(), &bs(0.5).unwrap(), 1e-15);
    let s2 = 2f64.sqrt();
    let want = FiniteDist::new(vec![(-s2, 0.25), (0.0, 0.5), (s2, 0.25)]).unwrap();
    assert_same(&st(0.5).unwrap(), &want, 1e-15);
    for p in [0.05, 0.3, 0.5, 0.9] {
        let d = st(p).unwrap();
        assert!(d.mean().abs() < 1e-15 && close(d.variance(), 1.0, 1e-12));
        assert!(close(d.kurtosis(), 1.0 / p, 1e-10 / p));
    }
    assert!(st(0.0).is_err() && st(1.1).is_err());
}

#[test]
fn bc_examples() {
    assert_same(
        &bc(0.5).unwrap(),
        &FiniteDist::new(vec![(-0.5, 0.5), (0.5, 0.5)]).unwrap(),
        1e-15,
    );
    for p in [0.1f64, 0.3, 0.8] {
        let q = 1.0 - p;
        assert_same(
            &bc(p).unwrap(),
            &bs(p).unwrap().scale((p * q).sqrt()),
            1e-15,
        );
    }
    assert!(close(bc(0.3).unwrap().variance(), 0.21, 1e-15));
}

#[test]
fn scale_examples() {
    let d = bs(0.3).unwrap();
    assert_eq!(d.scale(1.0), d);
    assert_eq!(d.scale(0.0), FiniteDist::point(0.0));
    let s = d.scale(-2.0);
    assert!(s.atoms()[0].v < s.atoms()[1].v);
    assert!(close(s.mean(), -2.0 * d.mean(), 1e-15));
}

#[test]
fn convolution_examples() {
    let d = weighted_bs_sum(0.3, &[1.0, 2.0, 0.5]).unwrap();
    assert_eq!(FiniteDist::point(0.0).convolve(&d), d);
    let two = bs(0.5).unwrap().iid_sum(2);
    assert_same(
        &two,
        &FiniteDist::new(vec![(-2.0, 0.25), (0.0, 0.5), (2.0, 0.25)]).unwrap(),
        1e-15,
    );
    // BS(r) + BS(1-r) is a rescaled ST(p) with mass 1-p at zero
    for p in [0.1f64, 0.3, 0.5] {
        let r = (1.0 - (1.0 - 2.0 * p).sqrt()) / 2.0;
        let sum = bs(r).unwrap().convolve(&bs(1.0 - r).unwrap());
        assert_eq!(sum.len(), 3);
        assert!(close(sum.mass_at(0.0), 1.0 - p, 1e-12));
        let sigma = sum.variance().sqrt();
        assert_same(&sum, &st(p).unwrap().scale(sigma), 1e-12);
    }
}

#[test]
fn weighted_sum_examples() {
    let a = weighted_bs_sum(0.5, &[1.0, 1.0]).unwrap();
    assert_same(&a, &bs(0.5).unwrap().iid_sum(2), 1e-15);
    let eq = weighted_bs_sum(0.3, &[1.7; 5]).unwrap();
    assert_same(&eq, &bs(0.3).unwrap().iid_sum(5).scale(1.7), 1e-12);
    let c = [0.3, 1.0, 2.0, 0.7];
    let p = 0.2f64;
    let d = weighted_bs_sum(p, &c).unwrap();
    let top: f64 = c.iter().sum::<f64>() * (0.8f64 / 0.2).sqrt();
    assert!(close(d.max(), top, 1e-12));
    assert!(close(d.tail(d.max()), p.powi(4), 1e-15));
    assert!(weighted_bs_sum(0.5, &[1.0; 25]).is_err());
    assert!(weighted_bs_sum(0.5, &[-1.0]).is_err());
}

#[test]
fn tail_examples() {
    assert_eq!(bs(0.5).unwrap().tail(1.0), 0.5);
    let d = weighted_bs_sum(0.3, &[0.2, 0.9, 1.4]).unwrap();
    assert!(close(d.tail(d.min()), 1.0, 1e-15));
    assert_eq!(d.tail(d.max() + 1e-6), 0.0);
    let t = bs(0.3).unwrap().iid_sum(3);
    assert!(close(t.tail(t.max()), 0.027, 1e-15));
}

#[test]
fn expect_examples() {
    for p in [0.1, 0.6] {
        let d = bs(p).unwrap();
        assert!(d.expect_with(|x| x).abs() < 1e-15);
        assert!(close(d.expect_with(|x| x * x), 1.0, 1e-14));
    }
    let d = bs(0.5).unwrap();
    assert!(close(
        d.expect(&MomentFunction::power_plus(3.0, 0.0)),
        0.5,
        1e-15
    ));
    assert_eq!(d.expect(&MomentFunction::exponential(1e6)), f64::INFINITY);
}

#[test]
fn sampling() {
    let z = FiniteDist::point(0.0).sample(RngSpec::new(1, 0), 5);
    assert_eq!(z, vec![0.0; 5]);
    let d = bs(0.2).unwrap();
    let a = d.sample(RngSpec::new(42, 3), 1_000_000);
    let b = d.sample(RngSpec::new(42, 3), 1_000_000);
    assert_eq!(a, b);
    let c = d.sample(RngSpec::new(42, 4), 100);
    assert_ne!(&a[..100], &c[..]);
    let mean = a.iter().sum::<f64>() / a.len() as f64;
    // sd of the mean is 1/1000
    assert!(mean.abs() < 4e-3, "mean {mean}");
    let ups = a.iter().filter(|&&x| x > 0.0).count() as f64 / a.len() as f64;
    assert!((ups - 0.2).abs() < 4.0 * (0.16f64 / 1e6).sqrt());
}

/// Brute-force law of sum c_i BS_i by listing all 2^n outcomes.
fn brute(p: f64, c: &[f64]) -> Vec<(f64, f64)> {
    let q = 1.0 - p;
    let (up, down) = ((q / p).sqrt(), -(p / q).sqrt());
    let n = c.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let (mut v, mut w) = (0.0, 1.0);
        for (i, ci) in c.iter().enumerate() {
            if mask >> i & 1 == 1 {
                v += ci * up;
                w *= p;
            } else {
                v += ci * down;
                w *= q;
            }
        }
        out.push((v, w));
    }
    out
}

fn small_dist() -> impl Strategy<Value = FiniteDist> {
    prop::collection::vec((-5.0f64..5.0, 0.05f64..1.0), 1..5).prop_map(|v| {
        let total: f64 = v.iter().map(|x| x.1).sum();
        FiniteDist::new(v.into_iter().map(|(a, w)| (a, w / total)).collect())
            .unwrap_or_else(|_| FiniteDist::point(0.0))
    })
}

proptest! {
    #[test]
    fn weighted_sum_matches_brute_force(p in 0.05f64..0.95, c in prop::collection::vec(0.1f64..3.0, 1..=10)) {
        let d = weighted_bs_sum(p, &c).unwrap();
        prop_assert!(valid(&d));
        for (v, _) in brute(p, &c) {
            let want: f64 = brute(p, &c).iter().filter(|o| (o.0 - v).abs() <= 1e-12 * v.abs().max(1.0)).map(|o| o.1).sum();
            prop_assert!((d.mass_at(v) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn convolution_laws(a in small_dist(), b in small_dist(), c in small_dist()) {
        let ab = a.convolve(&b);
        prop_assert!(valid(&ab));
        assert_same(&ab, &b.convolve(&a), 1e-12);
        assert_same(&ab.convolve(&c), &a.convolve(&b.convolve(&c)), 1e-11);
        prop_assert!((ab.mean() - a.mean() - b.mean()).abs() < 1e-10);
        prop_assert!((ab.variance() - a.variance() - b.variance()).abs() < 1e-10);
    }

    #[test]
    fn scaled_mean(d in small_dist(), c in -3.0f64..3.0) {
        let s = d.scale(c);
        prop_assert!(valid(&s));
        prop_assert!((s.mean() - c * d.mean()).abs() < 1e-12);
    }
}
