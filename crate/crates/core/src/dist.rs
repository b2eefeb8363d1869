//! Exact finite discrete distributions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_domain, check_prob_open, Error, Result};
use crate::moment::MomentFunction;

/// Relative tolerance under which two atoms are merged.
pub const MERGE_TOL: f64 = 1e-12;
/// Allowed deviation of the total mass from one.
pub const MASS_TOL: f64 = 1e-12;
/// Largest n accepted by [`weighted_bs_sum`].
pub const MAX_ENUM: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub v: f64,
    pub p: f64,
}

/// A probability distribution with finitely many atoms, stored sorted by value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteDist {
    atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct RawDist {
    atoms: Vec<Atom>,
}

impl<'de> Deserialize<'de> for FiniteDist {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = RawDist::deserialize(de)?;
        FiniteDist::new(raw.atoms.into_iter().map(|a| (a.v, a.p)).collect())
            .map_err(serde::de::Error::custom)
    }
}

impl FiniteDist {
    /// Builds a distribution from (value, mass) pairs; sorts and merges near ties.
    pub fn new(pairs: Vec<(f64, f64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidDist("no atoms".into()));
        }
        for &(v, p) in &pairs {
            if !v.is_finite() || !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidDist(format!("bad atom ({v}, {p})")));
            }
        }
        let d = Self::from_unsorted(pairs);
        let total: f64 = d.atoms.iter().map(|a| a.p).sum();
        if d.atoms.is_empty() || (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidDist(format!("total mass {total} is not 1")));
        }
        Ok(d)
    }

    /// Internal constructor: trusts the masses, sorts and merges.
    pub(crate) fn from_unsorted(mut pairs: Vec<(f64, f64)>) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms: Vec<Atom> = Vec::with_capacity(pairs.len());
        for (v, p) in pairs {
            if p <= 0.0 {
                continue;
            }
            match atoms.last_mut() {
                Some(last) if v - last.v <= MERGE_TOL * last.v.abs().max(1.0) => last.p += p,
                _ => atoms.push(Atom { v, p }),
            }
        }
        FiniteDist { atoms }
    }

    /// Point mass at `v`.
    pub fn point(v: f64) -> Self {
        FiniteDist {
            atoms: vec![Atom { v, p: 1.0 }],
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.atoms[0].v
    }

    pub fn max(&self) -> f64 {
        self.atoms[self.atoms.len() - 1].v
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.p).sum()
    }

    /// Mass at exactly `v` (up to the merge tolerance).
    pub fn mass_at(&self, v: f64) -> f64 {
        self.atoms
            .iter()
            .find(|a| (a.v - v).abs() <= MERGE_TOL * v.abs().max(1.0))
            .map_or(0.0, |a| a.p)
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|a| a.p * a.v).sum()
    }

    /// E D^k about zero.
    pub fn raw_moment(&self, k: i32) -> f64 {
        self.atoms.iter().map(|a| a.p * a.v.powi(k)).sum()
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.atoms.iter().map(|a| a.p * (a.v - mu).powi(2)).sum()
    }

    /// Standardized fourth moment.
    pub fn kurtosis(&self) -> f64 {
        let mu = self.mean();
        let m4: f64 = self.atoms.iter().map(|a| a.p * (a.v - mu).powi(4)).sum();
        m4 / self.variance().powi(2)
    }

    /// P(D >= x).
    pub fn tail(&self, x: f64) -> f64 {
        let i = self.atoms.partition_point(|a| a.v < x);
        self.atoms[i..].iter().rev().map(|a| a.p).sum()
    }

    /// P(D >= v_k) for every atom v_k, accumulated from the top.
    pub fn tails(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.atoms.len()];
        let mut acc = 0.0;
        for (i, a) in self.atoms.iter().enumerate().rev() {
            acc += a.p;
            out[i] = acc;
        }
        out
    }

    pub fn expect(&self, f: &MomentFunction) -> f64 {
        self.expect_with(|x| f.eval(x))
    }

    pub fn expect_with<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.atoms.iter().map(|a| a.p * f(a.v)).sum()
    }

    /// Law of c * D.
    pub fn scale(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::point(0.0);
        }
        Self::from_unsorted(self.atoms.iter().map(|a| (c * a.v, a.p)).collect())
    }

    /// Law of D + c.
    pub fn shift(&self, c: f64) -> Self {
        Self::from_unsorted(self.atoms.iter().map(|a| (a.v + c, a.p)).collect())
    }

    /// Law of -D.
    pub fn reflect(&self) -> Self {
        self.scale(-1.0)
    }

    /// Law of X + Y for independent X ~ self, Y ~ other.
    pub fn convolve(&self, other: &FiniteDist) -> Self {
        let mut pairs = Vec::with_capacity(self.len() * other.len());
        for a in &self.atoms {
            for b in &other.atoms {
                pairs.push((a.v + b.v, a.p * b.p));
            }
        }
        Self::from_unsorted(pairs)
    }

    /// Law of the sum of n independent copies.
    pub fn iid_sum(&self, n: usize) -> Self {
        let mut acc = Self::point(0.0);
        for _ in 0..n {
            acc = acc.convolve(self);
        }
        acc
    }

    /// Conditional law given D != 0.
    pub fn nonzero_part(&self) -> Result<Self> {
        let pairs: Vec<(f64, f64)> = self
            .atoms
            .iter()
            .filter(|a| a.v != 0.0)
            .map(|a| (a.v, a.p))
            .collect();
        let mass: f64 = pairs.iter().map(|x| x.1).sum();
        if pairs.is_empty() || mass <= 0.0 {
            return Err(Error::Degenerate(
                "distribution is the point mass at 0".into(),
            ));
        }
        Ok(Self::from_unsorted(
            pairs.into_iter().map(|(v, p)| (v, p / mass)).collect(),
        ))
    }

    pub fn sampler(&self) -> Sampler {
        Sampler::new(self)
    }

    /// `k` i.i.d. draws, deterministic in `rng`.
    pub fn sample(&self, rng: RngSpec, k: usize) -> Vec<f64> {
        let s = self.sampler();
        let mut r = rng.rng();
        (0..k).map(|_| s.draw(&mut r)).collect()
    }
}

/// Inverse-CDF sampler over the sorted atoms.
#[derive(Debug, Clone)]
pub struct Sampler {
    values: Vec<f64>,
    cdf: Vec<f64>,
}

impl Sampler {
    pub fn new(d: &FiniteDist) -> Self {
        let mut acc = 0.0;
        let mut cdf = Vec::with_capacity(d.len());
        for a in d.atoms() {
            acc += a.p;
            cdf.push(acc);
        }
        let total = acc;
        for c in &mut cdf {
            *c /= total;
        }
        Sampler {
            values: d.atoms().iter().map(|a| a.v).collect(),
            cdf,
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let i = self.cdf.partition_point(|&c| c <= u);
        self.values[i.min(self.values.len() - 1)]
    }
}

/// Seed and stream identifying a reproducible random sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngSpec { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream);
        r
    }

    pub fn with_stream(&self, stream: u64) -> Self {
        RngSpec {
            seed: self.seed,
            stream,
        }
    }
}

/// Standardized Bernoulli law BS(p).
pub fn bs(p: f64) -> Result<FiniteDist> {
    check_prob_open(p)?;
    let q = 1.0 - p;
    Ok(FiniteDist::from_unsorted(vec![
        (-(p / q).sqrt(), q),
        ((q / p).sqrt(), p),
    ]))
}

/// Standardized symmetric three-point law ST(p).
pub fn st(p: f64) -> Result<FiniteDist> {
    check_domain(p > 0.0 && p <= 1.0, "p", p, "(0, 1]")?;
    let a = 1.0 / p.sqrt();
    Ok(FiniteDist::from_unsorted(vec![
        (-a, p / 2.0),
        (0.0, 1.0 - p),
        (a, p / 2.0),
    ]))
}

/// Centered Bernoulli law BC(p).
pub fn bc(p: f64) -> Result<FiniteDist> {
    check_prob_open(p)?;
    Ok(FiniteDist::from_unsorted(vec![(-p, 1.0 - p), (1.0 - p, p)]))
}

/// Exact law of sum c_i BS_i with BS_i i.i.d. BS(p).
pub fn weighted_bs_sum(p: f64, coeffs: &[f64]) -> Result<FiniteDist> {
    if coeffs.len() > MAX_ENUM {
        return Err(Error::Size {
            size: coeffs.len(),
            limit: MAX_ENUM,
        });
    }
    for &c in coeffs {
        check_domain(c >= 0.0 && c.is_finite(), "coefficient", c, "[0, inf)")?;
    }
    let b = bs(p)?;
    Ok(coeffs
        .iter()
        .fold(FiniteDist::point(0.0), |acc, &c| acc.convolve(&b.scale(c))))
}

/// Law of scale * (BS_1 + ... + BS_n).
pub fn bs_sum(p: f64, n: usize, scale: f64) -> Result<FiniteDist> {
    Ok(bs(p)?.iid_sum(n).scale(scale))
}
