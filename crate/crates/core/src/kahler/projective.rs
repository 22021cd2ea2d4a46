//! Complex projective space `P^m` with the scaled Fubini–Study metric.
//!
//! The metric with holomorphic sectional curvature `c` is, in an affine
//! chart `w`, `g = (4/c) Re h` with
//! `h_{jk} = ((1 + |w|^2) δ_jk - conj(w_j) w_k) / (1 + |w|^2)^2`,
//! and `ω(u, v) = g(i u, v)`. A projective line then has area `4π/c` and
//! `μ'/c` is a momentum map for the phase action on the first `m` coordinates.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expfam::ProbabilityDistribution;
use crate::fd::{self, FD_STEP};
use crate::report::VerificationReport;

/// A point of `P^m`, stored as the unit-norm representative whose first
/// nonzero coordinate is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint {
    z: Vec<Complex64>,
}

impl ProjectivePoint {
    pub fn new(z: Vec<Complex64>) -> Result<Self> {
        if z.len() < 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: z.len(),
            });
        }
        if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::parse("z", "non-finite coordinate"));
        }
        let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::parse("z", "all homogeneous coordinates are zero"));
        }
        let first = z.iter().find(|c| c.norm_sqr() > 0.0).copied().expect("nonzero");
        let phase = first.conj() / first.norm();
        Ok(ProjectivePoint {
            z: z.into_iter().map(|c| c * phase / norm).collect(),
        })
    }

    pub fn from_real(z: &[f64]) -> Result<Self> {
        Self::new(z.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.z
    }

    /// Complex dimension `m`.
    pub fn dim(&self) -> usize {
        self.z.len() - 1
    }

    /// Euclidean distance between canonical representatives.
    pub fn distance(&self, other: &ProjectivePoint) -> f64 {
        self.z
            .iter()
            .zip(&other.z)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Index of the largest-modulus coordinate (the preferred chart).
    pub fn largest_index(&self) -> usize {
        let mut best = 0;
        for (i, c) in self.z.iter().enumerate() {
            if c.norm_sqr() > self.z[best].norm_sqr() {
                best = i;
            }
        }
        best
    }

    /// Real chart coordinates `(Re w, Im w)` of `w_k = z_k / z_chart`,
    /// skipping the chart index.
    pub fn chart_coords(&self, chart: usize) -> Result<Vec<f64>> {
        let pivot = self.z[chart];
        if pivot.norm() < 1e-300 {
            return Err(Error::ChartSingular { chart });
        }
        Ok(self
            .z
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != chart)
            .flat_map(|(_, c)| {
                let w = c / pivot;
                [w.re, w.im]
            })
            .collect())
    }

    /// Inverse of [`Self::chart_coords`].
    pub fn from_chart(chart: usize, x: &[f64]) -> Result<Self> {
        let m = x.len() / 2;
        let mut z = Vec::with_capacity(m + 1);
        let mut it = x.chunks(2);
        for k in 0..=m {
            if k == chart {
                z.push(Complex64::new(1.0, 0.0));
            } else {
                let c = it.next().expect("enough chart coordinates");
                z.push(Complex64::new(c[0], c[1]));
            }
        }
        Self::new(z)
    }
}

/// `K(z)(x_k) = |z_k|^2 / |z|^2` (0-based).
pub fn k_map(z: &ProjectivePoint) -> ProbabilityDistribution {
    let total: f64 = z.coords().iter().map(|c| c.norm_sqr()).sum();
    let mut w: Vec<f64> = z.coords().iter().map(|c| c.norm_sqr() / total).collect();
    // Renormalize once more so the sum is 1 to the last bit available.
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= s);
    ProbabilityDistribution::from_weights(w).expect("normalized weights")
}

/// `α(p) = -4π (p(x_0), ..., p(x_{m-1}))`.
pub fn alpha_map(p: &ProbabilityDistribution) -> Vec<f64> {
    let w = p.weights();
    w[..w.len() - 1].iter().map(|v| -4.0 * PI * v).collect()
}

/// `μ' = α ∘ K`.
pub fn mu_prime(z: &ProjectivePoint) -> Vec<f64> {
    alpha_map(&k_map(z))
}

/// Membership in `-4π Δ_m` up to `tol`.
pub fn in_scaled_simplex(v: &[f64], tol: f64) -> bool {
    let scaled: Vec<f64> = v.iter().map(|x| -x / (4.0 * PI)).collect();
    scaled.iter().all(|&s| s >= -tol) && scaled.iter().sum::<f64>() <= 1.0 + tol
}

/// `[t] · [z_0, ..., z_m] = [e^{2πi t_0} z_0, ..., e^{2πi t_{m-1}} z_{m-1}, z_m]`.
pub fn torus_action_pm(t: &[f64], z: &ProjectivePoint) -> ProjectivePoint {
    assert_eq!(t.len(), z.dim(), "torus dimension must equal m");
    let coords = z
        .coords()
        .iter()
        .enumerate()
        .map(|(k, c)| match t.get(k) {
            Some(tk) => c * Complex64::from_polar(1.0, 2.0 * PI * tk),
            None => *c,
        })
        .collect();
    ProjectivePoint::new(coords).expect("action preserves validity")
}

/// `μ_c([z_0, z_1]) = -(4π/c) |z_0|^2 / (|z_0|^2 + |z_1|^2)`.
pub fn mu_c_p1(c: f64, z: &ProjectivePoint) -> f64 {
    assert_eq!(z.dim(), 1, "μ_c is defined on P^1");
    let a = z.coords()[0].norm_sqr();
    let b = z.coords()[1].norm_sqr();
    -(4.0 * PI / c) * a / (a + b)
}

/// The Fubini–Study metric of curvature `c` at a point, in one affine chart.
#[derive(Debug, Clone)]
pub struct FsMetric {
    chart: usize,
    w: Vec<Complex64>,
    c: f64,
}

/// Metric in the chart of the largest-modulus coordinate.
pub fn fs_metric(z: &ProjectivePoint, c: f64) -> Result<FsMetric> {
    FsMetric::in_chart(z, c, z.largest_index())
}

impl FsMetric {
    pub fn in_chart(z: &ProjectivePoint, c: f64, chart: usize) -> Result<Self> {
        assert!(c > 0.0, "curvature must be positive");
        let x = z.chart_coords(chart)?;
        Ok(FsMetric {
            chart,
            w: x.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect(),
            c,
        })
    }

    pub fn chart(&self) -> usize {
        self.chart
    }

    pub fn curvature(&self) -> f64 {
        self.c
    }

    /// `(4/c) h_{jk}`.
    pub fn hermitian(&self) -> DMatrix<Complex64> {
        let m = self.w.len();
        let s = 1.0 + self.w.iter().map(|v| v.norm_sqr()).sum::<f64>();
        let scale = 4.0 / self.c / (s * s);
        DMatrix::from_fn(m, m, |j, k| {
            let delta = if j == k {
                Complex64::new(s, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            (delta - self.w[j].conj() * self.w[k]) * scale
        })
    }

    /// Real `2m × 2m` metric in coordinates `(Re w_1, Im w_1, ...)`.
    pub fn real_matrix(&self) -> DMatrix<f64> {
        let h = self.hermitian();
        let m = h.nrows();
        let mut g = DMatrix::zeros(2 * m, 2 * m);
        for j in 0..m {
            for k in 0..m {
                let p = h[(j, k)].re;
                let q = h[(j, k)].im;
                g[(2 * j, 2 * k)] = p;
                g[(2 * j + 1, 2 * k + 1)] = p;
                g[(2 * j, 2 * k + 1)] = q;
                g[(2 * j + 1, 2 * k)] = -q;
            }
        }
        g
    }

    /// `ω(u, v) = g(i u, v)` as a real matrix.
    pub fn kahler_matrix(&self) -> DMatrix<f64> {
        let m = self.w.len();
        // J (a, b) = (-b, a) per complex coordinate.
        let mut j = DMatrix::zeros(2 * m, 2 * m);
        for k in 0..m {
            j[(2 * k, 2 * k + 1)] = -1.0;
            j[(2 * k + 1, 2 * k)] = 1.0;
        }
        j.transpose() * self.real_matrix()
    }

    pub fn eval(&self, u: &[f64], v: &[f64]) -> f64 {
        let g = self.real_matrix();
        let mut acc = 0.0;
        for i in 0..u.len() {
            for k in 0..v.len() {
                acc += u[i] * g[(i, k)] * v[k];
            }
        }
        acc
    }
}

/// Area of a projective line under the curvature-`c` metric, by midpoint
/// quadrature of `sqrt(det g)` over the chart `w = z_0 / z_1`, using
/// `|w| = tan s`.
pub fn fs_line_area(c: f64, steps: usize) -> f64 {
    let h = (PI / 2.0) / steps as f64;
    (0..steps)
        .map(|i| {
            let s = (i as f64 + 0.5) * h;
            let rho = s.tan();
            let z = ProjectivePoint::from_real(&[rho, 1.0]).expect("valid");
            let g = FsMetric::in_chart(&z, c, 1).expect("chart 1 is regular").real_matrix();
            let density = g.determinant().sqrt();
            2.0 * PI * rho * density / (s.cos() * s.cos()) * h
        })
        .sum()
}

/// Fundamental vector field of generator `a` in real chart coordinates.
fn generator_field(chart: usize, m: usize, a: usize, x: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * m);
    let mut idx = 0;
    for k in 0..=m {
        if k == chart {
            continue;
        }
        let rate = (if k == a { 1.0 } else { 0.0 }) - (if chart == a { 1.0 } else { 0.0 });
        let (re, im) = (x[2 * idx], x[2 * idx + 1]);
        // d/dt w = 2πi · rate · w
        out.push(-2.0 * PI * rate * im);
        out.push(2.0 * PI * rate * re);
        idx += 1;
    }
    out
}

/// `ω(ξ_a, u) = dμ^a(u)` on `P^m` for the phase action, where the metric has
/// curvature `c` and the momentum map is `μ'/c`.
pub fn hamiltonian_check_pm(m: usize, c: f64, z: &ProjectivePoint, tol: f64) -> Result<VerificationReport> {
    hamiltonian_check_pm_with(m, c, c, z, tol)
}

/// As [`hamiltonian_check_pm`] with separate curvatures for the metric and
/// for the momentum map being tested.
pub fn hamiltonian_check_pm_with(
    m: usize,
    metric_c: f64,
    momentum_c: f64,
    z: &ProjectivePoint,
    tol: f64,
) -> Result<VerificationReport> {
    if z.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: z.dim(),
        });
    }
    let metric = fs_metric(z, metric_c)?;
    let chart = metric.chart();
    let omega = metric.kahler_matrix();
    let x0 = z.chart_coords(chart)?;
    let mut report = VerificationReport::new(format!("P^{m} momentum map is Hamiltonian"));
    for a in 0..m {
        let xi = generator_field(chart, m, a, &x0);
        for d in 0..2 * m {
            let lhs: f64 = (0..2 * m).map(|i| xi[i] * omega[(i, d)]).sum();
            let mut u = vec![0.0; 2 * m];
            u[d] = 1.0;
            let rhs = fd::directional(
                |x| {
                    let p = ProjectivePoint::from_chart(chart, x).expect("chart point");
                    mu_prime(&p)[a] / momentum_c
                },
                &x0,
                &u,
                FD_STEP,
            );
            report.push_close(format!("generator {a}, direction {d}: dμ vs ω(ξ, u)"), rhs, lhs, tol);
        }
    }
    Ok(report)
}
