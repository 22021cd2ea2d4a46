//! Kähler geometry of the tube `TM / Γ(L)` over an exponential family.
//!
//! Coordinates are `(q, r)` with `q = θ` and complex structure
//! `z = q + i r`. The metric is `diag(h, h)` with `h` the Fisher metric, and
//! `ω(u, v) = g(J u, v)`, which in `(q, r)` block order is `[[0, h], [-h, 0]]`.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::expfam::ExponentialFamily;
use crate::fd::{self, FD_STEP};
use crate::moment::TorificationData;
use crate::rational::RationalVector;
use crate::report::VerificationReport;

/// Scale `s` of the torus frame `B = s I`, fixed by [`calibrate_frame_scale`]
/// so that the tube momentum map satisfies `ω(ξ_N, ·) = dμ^ξ`.
pub const TUBE_FRAME_SCALE: f64 = -4.0 * PI;

/// A Riemannian metric on the parameter domain.
pub trait MetricField {
    fn dim(&self) -> usize;
    fn metric(&self, theta: &[f64]) -> DMatrix<f64>;
}

impl MetricField for ExponentialFamily {
    fn dim(&self) -> usize {
        self.n()
    }

    fn metric(&self, theta: &[f64]) -> DMatrix<f64> {
        self.fisher(theta)
    }
}

/// Point of the tube: base point `theta` and fiber coordinate `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct TubePoint {
    theta: Vec<f64>,
    r: Vec<f64>,
}

impl TubePoint {
    pub fn new(theta: Vec<f64>, r: Vec<f64>) -> Result<Self> {
        if theta.len() != r.len() {
            return Err(Error::DimensionMismatch {
                expected: theta.len(),
                got: r.len(),
            });
        }
        if theta.iter().chain(&r).any(|v| !v.is_finite()) {
            return Err(Error::parse("tube point", "non-finite coordinate"));
        }
        Ok(TubePoint { theta, r })
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    /// Flattened `(q, r)` coordinates.
    pub fn coords(&self) -> Vec<f64> {
        self.theta.iter().chain(&self.r).copied().collect()
    }

    fn from_coords(x: &[f64]) -> Self {
        let n = x.len() / 2;
        TubePoint {
            theta: x[..n].to_vec(),
            r: x[n..].to_vec(),
        }
    }

    /// Representative of `r` in the fundamental cell `B [0, 1)^n` of the
    /// lattice generated by the frame.
    pub fn reduced(&self, frame: &Frame) -> TubePoint {
        let u = frame.inverse() * nalgebra::DVector::from_column_slice(&self.r);
        let frac = u.map(|v| v - v.floor());
        let r = &frame.b * frac;
        TubePoint {
            theta: self.theta.clone(),
            r: r.iter().copied().collect(),
        }
    }
}

/// Parallel frame: columns of `b` are `E_1, ..., E_n` in the `∂/∂θ` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    b: DMatrix<f64>,
}

impl Frame {
    pub fn new(b: DMatrix<f64>) -> Result<Self> {
        if !b.is_square() {
            return Err(Error::InvalidFrame("frame matrix must be square".into()));
        }
        if b.clone().try_inverse().is_none() || b.determinant() == 0.0 {
            return Err(Error::InvalidFrame("frame matrix is singular".into()));
        }
        Ok(Frame { b })
    }

    pub fn scaled_identity(n: usize, s: f64) -> Result<Self> {
        Self::new(DMatrix::identity(n, n) * s)
    }

    /// `B = TUBE_FRAME_SCALE · I`.
    pub fn calibrated(n: usize) -> Self {
        Self::scaled_identity(n, TUBE_FRAME_SCALE).expect("nonzero scale")
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn negated(&self) -> Self {
        Frame { b: -&self.b }
    }

    fn inverse(&self) -> DMatrix<f64> {
        self.b.clone().try_inverse().expect("validated invertible")
    }
}

/// `g = diag(h, h)` in `(q, r)` coordinates.
pub fn dombrowski_metric(fam: &ExponentialFamily, theta: &[f64]) -> DMatrix<f64> {
    let h = fam.fisher(theta);
    let n = h.nrows();
    let mut g = DMatrix::zeros(2 * n, 2 * n);
    g.view_mut((0, 0), (n, n)).copy_from(&h);
    g.view_mut((n, n), (n, n)).copy_from(&h);
    g
}

/// `ω = [[0, h], [-h, 0]]` for a metric block `h`.
pub fn kahler_form_from_metric(h: &DMatrix<f64>) -> DMatrix<f64> {
    let n = h.nrows();
    let mut w = DMatrix::zeros(2 * n, 2 * n);
    w.view_mut((0, n), (n, n)).copy_from(h);
    w.view_mut((n, 0), (n, n)).copy_from(&(-h));
    w
}

pub fn kahler_form(fam: &ExponentialFamily, theta: &[f64]) -> DMatrix<f64> {
    kahler_form_from_metric(&fam.fisher(theta))
}

/// `dω = 0` reduces to `∂_k h_ij = ∂_i h_kj`; both sides by central
/// differences of the metric.
pub fn closedness_check(field: &impl MetricField, theta: &[f64], tol: f64) -> VerificationReport {
    let n = field.dim();
    let mut report = VerificationReport::new("Kähler form is closed");
    // derivs[k] = ∂h/∂θ_k
    let derivs: Vec<DMatrix<f64>> = (0..n)
        .map(|k| {
            let mut plus = theta.to_vec();
            let mut minus = theta.to_vec();
            plus[k] += FD_STEP;
            minus[k] -= FD_STEP;
            (field.metric(&plus) - field.metric(&minus)) / (2.0 * FD_STEP)
        })
        .collect();
    for i in 0..n {
        for k in i + 1..n {
            for j in 0..n {
                report.push_close(
                    format!("∂_{k} h_{i}{j} vs ∂_{i} h_{k}{j}"),
                    derivs[k][(i, j)],
                    derivs[i][(k, j)],
                    tol,
                );
            }
        }
    }
    if n == 1 {
        report.note("one-dimensional base: closedness holds trivially");
    }
    report
}

/// `r <- r + B t`.
pub fn tube_action(point: &TubePoint, frame: &Frame, t: &[f64]) -> TubePoint {
    let shift = &frame.b * nalgebra::DVector::from_column_slice(t);
    TubePoint {
        theta: point.theta.clone(),
        r: point.r.iter().zip(shift.iter()).map(|(a, b)| a + b).collect(),
    }
}

/// `μ(θ, r) = 4π · A(η(θ))`, in true units.
pub fn tube_momentum(fam: &ExponentialFamily, data: &TorificationData, point: &TubePoint) -> Vec<f64> {
    let eta = fam.mean_params(point.theta());
    let a = data.a_map();
    let linear = a.linear_part().to_f64_rows();
    let offset = a.offset().to_f64();
    linear
        .iter()
        .zip(&offset)
        .map(|(row, c)| 4.0 * PI * (row.iter().zip(&eta).map(|(l, e)| l * e).sum::<f64>() + c))
        .collect()
}

/// Checks `ω(ξ_N, u) = dμ^ξ(u)` for every generator `ξ = e_a` and every
/// coordinate direction `u`, with `dμ^ξ` by central differences.
pub fn hamiltonian_check_tube(
    fam: &ExponentialFamily,
    data: &TorificationData,
    point: &TubePoint,
    frame: &Frame,
    tol: f64,
) -> VerificationReport {
    let n = fam.n();
    let omega = kahler_form(fam, point.theta());
    let x0 = point.coords();
    let mut report = VerificationReport::new("tube momentum map is Hamiltonian");
    for a in 0..n {
        // ξ_N = (0, B e_a)
        let mut xi = vec![0.0; 2 * n];
        for i in 0..n {
            xi[n + i] = frame.b[(i, a)];
        }
        for d in 0..2 * n {
            let lhs: f64 = (0..2 * n).map(|i| xi[i] * omega[(i, d)]).sum();
            let mut u = vec![0.0; 2 * n];
            u[d] = 1.0;
            let rhs = fd::directional(
                |x| tube_momentum(fam, data, &TubePoint::from_coords(x))[a],
                &x0,
                &u,
                FD_STEP,
            );
            report.push_close(format!("generator {a}, direction {d}: dμ vs ω(ξ, u)"), rhs, lhs, tol);
        }
    }
    report
}

/// Picks the frame scale in `{4π, -4π}` for which the Hamiltonian identity
/// holds on the Bernoulli family with canonical data.
pub fn calibrate_frame_scale() -> Option<f64> {
    let fam = ExponentialFamily::bernoulli();
    let data = crate::moment::canonical_torification(&fam, &RationalVector::zeros(1)).ok()?;
    let point = TubePoint::new(vec![0.3], vec![0.0]).ok()?;
    [4.0 * PI, -4.0 * PI].into_iter().find(|&s| {
        let frame = Frame::scaled_identity(1, s).expect("nonzero");
        hamiltonian_check_tube(&fam, &data, &point, &frame, 1e-5).passed
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moment::canonical_torification;

    fn bern_data() -> (ExponentialFamily, TorificationData) {
        let fam = ExponentialFamily::bernoulli();
        let data = canonical_torification(&fam, &RationalVector::zeros(1)).unwrap();
        (fam, data)
    }

    #[test]
    fn dombrowski_metric_values() {
        let g = dombrowski_metric(&ExponentialFamily::bernoulli(), &[0.0]);
        assert_eq!(
            g,
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.25, 0.25]))
        );
        let g = dombrowski_metric(&ExponentialFamily::binomial(4).unwrap(), &[0.0]);
        assert!((g - DMatrix::<f64>::identity(2, 2)).abs().max() < 1e-14);
    }

    #[test]
    fn kahler_form_of_bernoulli() {
        let w = kahler_form(&ExponentialFamily::bernoulli(), &[0.0]);
        assert_eq!(w, DMatrix::from_row_slice(2, 2, &[0.0, 0.25, -0.25, 0.0]));
        assert_eq!(&w + w.transpose(), DMatrix::zeros(2, 2));
    }

    #[test]
    fn closedness_on_binomial() {
        let fam = ExponentialFamily::binomial(3).unwrap();
        assert!(closedness_check(&fam, &[0.7], 1e-5).passed);
    }

    struct NonHessian;
    impl MetricField for NonHessian {
        fn dim(&self) -> usize {
            2
        }
        fn metric(&self, theta: &[f64]) -> DMatrix<f64> {
            DMatrix::from_row_slice(2, 2, &[2.0, theta[0], theta[0], 2.0])
        }
    }

    #[test]
    fn closedness_detects_non_hessian_metric() {
        let r = closedness_check(&NonHessian, &[0.1, 0.2], 1e-5);
        assert!(!r.passed);
    }

    #[test]
    fn tube_action_is_a_translation() {
        let frame = Frame::scaled_identity(2, 1.0).unwrap();
        let p = TubePoint::new(vec![0.1, 0.2], vec![0.3, 0.4]).unwrap();
        assert_eq!(tube_action(&p, &frame, &[0.0, 0.0]), p);
        let moved = tube_action(&p, &frame, &[1.0, 0.0]);
        assert_eq!(moved.r(), &[1.3, 0.4]);
        let reduced = moved.reduced(&frame);
        assert!((reduced.r()[0] - 0.3).abs() < 1e-12);
        let ts = tube_action(&tube_action(&p, &frame, &[0.25, 0.5]), &frame, &[0.5, -0.25]);
        let direct = tube_action(&p, &frame, &[0.75, 0.25]);
        for (a, b) in ts.r().iter().zip(direct.r()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn momentum_values() {
        let (fam, data) = bern_data();
        let p = TubePoint::new(vec![0.0], vec![0.0]).unwrap();
        assert!((tube_momentum(&fam, &data, &p)[0] + 2.0 * PI).abs() < 1e-14);
        let shifted = TubePoint::new(vec![0.0], vec![0.3]).unwrap();
        assert_eq!(tube_momentum(&fam, &data, &p), tube_momentum(&fam, &data, &shifted));

        let b4 = ExponentialFamily::binomial(4).unwrap();
        let d4 = canonical_torification(&b4, &RationalVector::zeros(1)).unwrap();
        let hi = tube_momentum(&b4, &d4, &TubePoint::new(vec![40.0], vec![0.0]).unwrap())[0];
        let lo = tube_momentum(&b4, &d4, &TubePoint::new(vec![-40.0], vec![0.0]).unwrap())[0];
        assert!(hi.abs() < 1e-12);
        assert!((lo + 16.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn calibration_is_frozen() {
        assert_eq!(calibrate_frame_scale(), Some(TUBE_FRAME_SCALE));
    }

    #[test]
    fn hamiltonian_tube_sign() {
        let (fam, data) = bern_data();
        let p = TubePoint::new(vec![0.3], vec![0.0]).unwrap();
        let frame = Frame::calibrated(1);
        assert!(hamiltonian_check_tube(&fam, &data, &p, &frame, 1e-5).passed);
        let wrong = hamiltonian_check_tube(&fam, &data, &p, &frame.negated(), 1e-5);
        assert!(!wrong.passed);
        let w = wrong.failures().next().unwrap();
        let (e, a): (f64, f64) = (w.expected.parse().unwrap(), w.actual.parse().unwrap());
        assert!((e + a).abs() < 1e-5, "sign-flipped witness");
    }

    #[test]
    fn frame_must_be_invertible() {
        assert!(Frame::new(DMatrix::zeros(2, 2)).is_err());
        assert!(Frame::new(DMatrix::zeros(2, 3)).is_err());
    }
}
