//! Exponential families on finite sample spaces.
//!
//! A family is given by tables `C(x)` and `F(x) = (F_1(x), ..., F_n(x))` over
//! `Ω = {x_0, ..., x_m}`; its members are
//! `p_θ(x) = exp(C(x) + <F(x), θ> - ψ(θ))`.
//!
//! Natural parameters `θ` are the affine coordinates of the exponential
//! connection, so the flat structure is carried implicitly by the
//! parameterization.

use std::collections::HashSet;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rational::{rational_to_f64, RationalMatrix, RationalVector};

/// Seed of the Gaussian θ sampler behind [`ExponentialFamily::is_full`].
pub const FULLNESS_SEED: u64 = 0xC0FFEE;
/// Default pivot tolerance of the fullness rank test.
pub const FULLNESS_TOL: f64 = 1e-9;
/// Probability weights must sum to one within this bound.
pub const SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSpace {
    labels: Vec<String>,
}

impl SampleSpace {
    /// At least two distinct labels. The last label is the base point `x_m`.
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::InvalidSampleSpace(format!(
                "need at least 2 points, got {}",
                labels.len()
            )));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidSampleSpace(format!("duplicate label {l:?}")));
            }
        }
        Ok(SampleSpace { labels })
    }

    /// Labels `x0, ..., x{m}`.
    pub fn indexed(points: usize) -> Result<Self> {
        Self::new((0..points).map(|i| format!("x{i}")).collect())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// `m`, the index of the last point.
    pub fn m(&self) -> usize {
        self.labels.len() - 1
    }
}

/// One entry of the `C` table: `C(x) = linear + ln(log_of)`.
///
/// Binomial coefficients enter as `ln binom(n, k)`; keeping the argument of
/// the logarithm as an exact rational lets `e^{C(x)}` stay exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseTerm {
    linear: BigRational,
    log_of: BigRational,
}

impl BaseTerm {
    pub fn rational(value: BigRational) -> Self {
        BaseTerm {
            linear: value,
            log_of: BigRational::one(),
        }
    }

    pub fn log_of(value: BigRational) -> Result<Self> {
        Self::new(BigRational::zero(), value)
    }

    pub fn new(linear: BigRational, log_of: BigRational) -> Result<Self> {
        if !log_of.is_positive() {
            return Err(Error::parse(
                "C_log_of",
                format!("log argument must be positive, got {log_of}"),
            ));
        }
        Ok(BaseTerm { linear, log_of })
    }

    pub fn linear(&self) -> &BigRational {
        &self.linear
    }

    pub fn log_argument(&self) -> &BigRational {
        &self.log_of
    }

    pub fn value(&self) -> f64 {
        rational_to_f64(&self.linear) + ln_rational(&self.log_of)
    }

    /// `e^{C(x)}` when it is rational, i.e. when the linear part vanishes.
    pub fn exp_exact(&self) -> Option<BigRational> {
        self.linear.is_zero().then(|| self.log_of.clone())
    }
}

fn ln_rational(q: &BigRational) -> f64 {
    if q.is_one() {
        return 0.0;
    }
    // ln(a/b) via bit lengths so huge binomial coefficients do not overflow.
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

fn ln_bigint(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits < 1000 {
        return v.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural parameter θ. When built with [`NaturalParameter::log_of`] it also
/// carries `e^{θ_i}` exactly, which enables exact weights.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalParameter {
    theta: Vec<f64>,
    exp_exact: Option<Vec<BigRational>>,
}

impl NaturalParameter {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if let Some(i) = theta.iter().position(|t| !t.is_finite()) {
            return Err(Error::parse(format!("theta[{i}]"), "non-finite value"));
        }
        Ok(NaturalParameter { theta, exp_exact: None })
    }

    /// `θ_i = ln(ratios_i)` for positive rationals.
    pub fn log_of(ratios: Vec<BigRational>) -> Result<Self> {
        if let Some(i) = ratios.iter().position(|r| !r.is_positive()) {
            return Err(Error::parse(format!("theta[{i}]"), "log argument must be positive"));
        }
        Ok(NaturalParameter {
            theta: ratios.iter().map(ln_rational).collect(),
            exp_exact: Some(ratios),
        })
    }

    pub fn zeros(n: usize) -> Self {
        NaturalParameter {
            theta: vec![0.0; n],
            exp_exact: Some(vec![BigRational::one(); n]),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.theta
    }

    pub fn exp_exact(&self) -> Option<&[BigRational]> {
        self.exp_exact.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }
}

/// A probability function on Ω, optionally with exact rational weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    weights: Vec<f64>,
    exact: Option<Vec<BigRational>>,
}

impl ProbabilityDistribution {
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        Ok(ProbabilityDistribution { weights, exact: None })
    }

    pub fn from_rational(weights: Vec<BigRational>) -> Result<Self> {
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::InvalidDistribution("negative weight".into()));
        }
        let total = weights.iter().fold(BigRational::zero(), |a, w| a + w);
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        Ok(ProbabilityDistribution {
            weights: weights.iter().map(rational_to_f64).collect(),
            exact: Some(weights),
        })
    }

    pub fn point_mass(points: usize, index: usize) -> Self {
        let exact: Vec<BigRational> = (0..points)
            .map(|i| {
                if i == index {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        Self::from_rational(exact).expect("point mass is a distribution")
    }

    pub fn uniform(points: usize) -> Self {
        let w = BigRational::new(BigInt::one(), BigInt::from(points));
        Self::from_rational(vec![w; points]).expect("uniform is a distribution")
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exact(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `E_p(X) = Σ X(x) p(x)`.
    pub fn expectation(&self, x_table: &[f64]) -> Result<f64> {
        if x_table.len() != self.weights.len() {
            return Err(Error::LengthMismatch {
                what: "random variable table".into(),
                expected: self.weights.len(),
                got: x_table.len(),
            });
        }
        Ok(self.weights.iter().zip(x_table).map(|(p, x)| p * x).sum())
    }

    pub fn expectation_exact(&self, x_table: &[BigRational]) -> Result<BigRational> {
        let exact = self.exact.as_ref().ok_or(Error::NonRationalWeights)?;
        if x_table.len() != exact.len() {
            return Err(Error::LengthMismatch {
                what: "random variable table".into(),
                expected: exact.len(),
                got: x_table.len(),
            });
        }
        Ok(exact
            .iter()
            .zip(x_table)
            .fold(BigRational::zero(), |a, (p, x)| a + p * x))
    }
}

/// Outcome of the numeric fullness test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fullness {
    pub full: bool,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentialFamily {
    space: SampleSpace,
    c_table: Vec<BaseTerm>,
    f_table: Vec<RationalVector>,
    n: usize,
}

impl ExponentialFamily {
    /// Validates table lengths and the rank of the rows `(1, F(x))`.
    pub fn new(space: SampleSpace, c_table: Vec<BaseTerm>, f_table: Vec<RationalVector>) -> Result<Self> {
        let points = space.len();
        if c_table.len() != points {
            return Err(Error::LengthMismatch {
                what: "C table".into(),
                expected: points,
                got: c_table.len(),
            });
        }
        if f_table.len() != points {
            return Err(Error::LengthMismatch {
                what: "F table".into(),
                expected: points,
                got: f_table.len(),
            });
        }
        let n = f_table[0].dim();
        if n == 0 {
            return Err(Error::LengthMismatch {
                what: "F(x_0)".into(),
                expected: 1,
                got: 0,
            });
        }
        for f in &f_table {
            if f.dim() != n {
                return Err(Error::LengthMismatch {
                    what: "F row".into(),
                    expected: n,
                    got: f.dim(),
                });
            }
        }
        let rows: Vec<Vec<BigRational>> = f_table
            .iter()
            .map(|f| {
                let mut row = vec![BigRational::one()];
                row.extend(f.iter().cloned());
                row
            })
            .collect();
        let rank = RationalMatrix::from_rows(rows)?.rank();
        if rank != n + 1 {
            return Err(Error::RankDeficient { rank, needed: n + 1 });
        }
        Ok(ExponentialFamily {
            space,
            c_table,
            f_table,
            n,
        })
    }

    /// Family with `C = 0` on points labelled `x0..`.
    pub fn from_int_table(f_rows: &[Vec<i64>]) -> Result<Self> {
        let space = SampleSpace::indexed(f_rows.len())?;
        let c = vec![BaseTerm::rational(BigRational::zero()); f_rows.len()];
        let f = f_rows.iter().map(|r| RationalVector::from_ints(r)).collect();
        Self::new(space, c, f)
    }

    pub fn bernoulli() -> Self {
        Self::from_int_table(&[vec![0], vec![1]]).expect("bernoulli is valid")
    }

    /// Binomial laws on `{0, ..., n}`: `C(k) = ln binom(n, k)`, `F(k) = k`,
    /// natural parameter `θ = logit(q)`.
    pub fn binomial(n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidN(n));
        }
        let size = n as usize + 1;
        let space = SampleSpace::new((0..size).map(|k| k.to_string()).collect())?;
        let c = (0..size)
            .map(|k| BaseTerm::log_of(BigRational::from_integer(binomial_coefficient(n as u64, k as u64))))
            .collect::<Result<Vec<_>>>()?;
        let f = (0..size).map(|k| RationalVector::from_ints(&[k as i64])).collect();
        Self::new(space, c, f)
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn c_table(&self) -> &[BaseTerm] {
        &self.c_table
    }

    pub fn f_table(&self) -> &[RationalVector] {
        &self.f_table
    }

    /// Dimension `n` of the parameter space.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Index of the last sample point.
    pub fn m(&self) -> usize {
        self.space.m()
    }

    /// Column `F_i` as floats.
    pub fn statistic(&self, i: usize) -> Vec<f64> {
        self.f_table.iter().map(|f| rational_to_f64(&f[i])).collect()
    }

    fn check_theta(&self, theta: &[f64]) {
        assert_eq!(theta.len(), self.n, "theta has wrong dimension");
    }

    fn log_terms(&self, theta: &[f64]) -> Vec<f64> {
        self.check_theta(theta);
        self.c_table
            .iter()
            .zip(&self.f_table)
            .map(|(c, f)| c.value() + f.iter().zip(theta).map(|(fi, t)| rational_to_f64(fi) * t).sum::<f64>())
            .collect()
    }

    /// ψ(θ) = log Σ exp(C(x) + <F(x), θ>), shifted by the max term.
    pub fn log_partition(&self, theta: &[f64]) -> f64 {
        let terms = self.log_terms(theta);
        let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        max + terms.iter().map(|s| (s - max).exp()).sum::<f64>().ln()
    }

    fn weights(&self, theta: &[f64]) -> Vec<f64> {
        let terms = self.log_terms(theta);
        let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let raw: Vec<f64> = terms.iter().map(|s| (s - max).exp()).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    }

    /// `p_θ`. Exact weights are attached whenever [`Self::pdf_exact`] applies.
    pub fn pdf(&self, theta: &NaturalParameter) -> ProbabilityDistribution {
        if let Some(exact) = self.pdf_exact(theta) {
            return exact;
        }
        ProbabilityDistribution {
            weights: self.weights(theta.values()),
            exact: None,
        }
    }

    /// Exact `p_θ` when every `e^{C(x)}` is rational, `F` is integral and θ
    /// carries exact exponentials. Otherwise `None`.
    pub fn pdf_exact(&self, theta: &NaturalParameter) -> Option<ProbabilityDistribution> {
        let exp_theta = theta.exp_exact()?;
        self.check_theta(theta.values());
        let mut raw = Vec::with_capacity(self.space.len());
        for (c, f) in self.c_table.iter().zip(&self.f_table) {
            let mut w = c.exp_exact()?;
            for (fi, e) in f.iter().zip(exp_theta) {
                if !fi.is_integer() {
                    return None;
                }
                let k = fi.to_integer().to_i32()?;
                w *= e.pow(k);
            }
            raw.push(w);
        }
        let total = raw.iter().fold(BigRational::zero(), |a, w| a + w);
        let exact: Vec<BigRational> = raw.into_iter().map(|w| w / &total).collect();
        Some(ProbabilityDistribution {
            weights: exact.iter().map(rational_to_f64).collect(),
            exact: Some(exact),
        })
    }

    /// η(θ) = E_{p_θ}(F), the gradient of ψ.
    pub fn mean_params(&self, theta: &[f64]) -> Vec<f64> {
        let w = self.weights(theta);
        (0..self.n)
            .map(|i| {
                self.f_table
                    .iter()
                    .zip(&w)
                    .map(|(f, p)| p * rational_to_f64(&f[i]))
                    .sum()
            })
            .collect()
    }

    /// Fisher metric `Cov_{p_θ}(F)`, the Hessian of ψ.
    pub fn fisher(&self, theta: &[f64]) -> DMatrix<f64> {
        let w = self.weights(theta);
        let eta = self.mean_params(theta);
        let mut h = DMatrix::zeros(self.n, self.n);
        for (f, p) in self.f_table.iter().zip(&w) {
            let centered: Vec<f64> = f.iter().zip(&eta).map(|(fi, e)| rational_to_f64(fi) - e).collect();
            for i in 0..self.n {
                for j in 0..self.n {
                    h[(i, j)] += p * centered[i] * centered[j];
                }
            }
        }
        h
    }

    /// Numeric fullness test with the default sample count `4(m+1)`.
    pub fn is_full_default(&self) -> Fullness {
        self.is_full(4 * (self.m() + 1), FULLNESS_TOL)
    }

    /// Samples θ from a seeded standard Gaussian and computes the numeric
    /// rank of `{p_θ - p_θ0}` inside the hyperplane `Σ p = 1`. Full iff the
    /// rank reaches `m`.
    pub fn is_full(&self, num_samples: usize, tol: f64) -> Fullness {
        let num_samples = num_samples.max(self.m() + 1);
        let mut rng = ChaCha8Rng::seed_from_u64(FULLNESS_SEED);
        let samples: Vec<Vec<f64>> = (0..num_samples)
            .map(|_| (0..self.n).map(|_| StandardNormal.sample(&mut rng)).collect())
            .collect();
        let base = self.weights(&samples[0]);
        let rows: Vec<Vec<f64>> = samples[1..]
            .iter()
            .map(|t| self.weights(t).iter().zip(&base).map(|(a, b)| a - b).collect())
            .collect();
        let rank = numeric_rank(rows, tol);
        Fullness {
            full: rank == self.m(),
            rank,
        }
    }
}

/// Row echelon with complete pivoting; a pivot counts when it exceeds
/// `tol` times the largest initial entry.
fn numeric_rank(mut rows: Vec<Vec<f64>>, tol: f64) -> usize {
    let r = rows.len();
    if r == 0 {
        return 0;
    }
    let c = rows[0].len();
    let scale = rows.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return 0;
    }
    let mut col_order: Vec<usize> = (0..c).collect();
    let mut rank = 0;
    while rank < r.min(c) {
        let mut best = (rank, rank, 0.0f64);
        for (i, row) in rows.iter().enumerate().skip(rank) {
            for (jj, &j) in col_order.iter().enumerate().skip(rank) {
                if row[j].abs() > best.2 {
                    best = (i, jj, row[j].abs());
                }
            }
        }
        if best.2 <= tol * scale {
            break;
        }
        rows.swap(rank, best.0);
        col_order.swap(rank, best.1);
        let pc = col_order[rank];
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            let f = row[pc] / pivot_row[pc];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn binomial_coefficient(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `binom(n, k)` as an exact rational, for callers building tables.
pub fn binomial_rational(n: u64, k: u64) -> BigRational {
    BigRational::from_integer(binomial_coefficient(n, k))
}
