//! The Veronese immersion `P^1(1/n) -> P^n(1)` realizing the binomial
//! family, with its torus homomorphism `ρ([t]) = [nt, (n-1)t, ..., t]`.

use crate::error::Result;
use crate::expfam::binomial_coefficient;
use crate::fd::{self, FD_STEP};
use crate::moment::t_from_rho;
use crate::rational::{rational_to_f64, RationalMatrix, RationalVector};
use crate::report::VerificationReport;

use super::projective::{fs_metric, mu_c_p1, mu_prime, torus_action_pm, FsMetric, ProjectivePoint};

/// `[z_0, z_1] -> [..., binom(n, k)^{1/2} z_0^{n-k} z_1^k, ...]`.
pub fn veronese(n: usize, z: &ProjectivePoint) -> ProjectivePoint {
    assert!(n >= 1, "veronese degree must be >= 1");
    assert_eq!(z.dim(), 1, "veronese is defined on P^1");
    let (z0, z1) = (z.coords()[0], z.coords()[1]);
    let coords = (0..=n)
        .map(|k| {
            let b = binomial_coefficient(n as u64, k as u64);
            let scale = rational_to_f64(&num_rational::BigRational::from_integer(b)).sqrt();
            z0.powu((n - k) as u32) * z1.powu(k as u32) * scale
        })
        .collect();
    ProjectivePoint::new(coords).expect("image of a nonzero point is nonzero")
}

/// `ρ(t) = (n t, (n-1) t, ..., t)`.
pub fn rho_binomial(n: usize, t: f64) -> Vec<f64> {
    (1..=n).rev().map(|k| k as f64 * t).collect()
}

/// `ρ_*` as an `n × 1` integer column.
pub fn rho_binomial_derivative(n: usize) -> RationalMatrix {
    let rows: Vec<Vec<i64>> = (1..=n as i64).rev().map(|k| vec![k]).collect();
    RationalMatrix::from_int_rows(&rows).expect("rectangular")
}

/// `T = [n, n-1, ..., 1]`.
pub fn t_binomial(n: usize) -> RationalMatrix {
    t_from_rho(&rho_binomial_derivative(n))
}

/// `f(Φ_t z) = Φ'_{ρ(t)} f(z)`.
pub fn verify_equivariance(n: usize, t: f64, z: &ProjectivePoint, tol: f64) -> VerificationReport {
    verify_equivariance_with(n, |s| rho_binomial(n, s), t, z, tol)
}

pub fn verify_equivariance_with(
    n: usize,
    rho: impl Fn(f64) -> Vec<f64>,
    t: f64,
    z: &ProjectivePoint,
    tol: f64,
) -> VerificationReport {
    let lhs = veronese(n, &torus_action_pm(&[t], z));
    let rhs = torus_action_pm(&rho(t), &veronese(n, z));
    let mut report = VerificationReport::new("Veronese immersion is equivariant");
    report.push_close(
        format!("|f(Φ_t z) - Φ'_ρ(t) f(z)|, t = {t}"),
        0.0,
        lhs.distance(&rhs),
        tol,
    );
    report
}

/// `T μ'(f(z)) + C` against `μ_{1/n}(z)` plus the constant fixed at `[0, 1]`.
/// `c_offset` is in 4π units.
pub fn verify_veronese_momentum(
    n: usize,
    z: &ProjectivePoint,
    c_offset: &RationalVector,
    tol: f64,
) -> VerificationReport {
    let t = t_binomial(n).to_f64_rows();
    let c = 4.0 * std::f64::consts::PI * rational_to_f64(&c_offset[0]);
    let lhs_at = |p: &ProjectivePoint| -> f64 {
        let mp = mu_prime(&veronese(n, p));
        t[0].iter().zip(&mp).map(|(a, b)| a * b).sum::<f64>() + c
    };
    let c_curv = 1.0 / n as f64;
    let fixed = ProjectivePoint::from_real(&[0.0, 1.0]).expect("valid");
    let constant = lhs_at(&fixed) - mu_c_p1(c_curv, &fixed);

    let mut report = VerificationReport::new("μ = T∘μ'∘f + C on P^1(1/n)");
    report.push_close("calibrated constant", c, constant, tol);
    report.push_close(
        "T μ'(f(z)) + C vs μ_{1/n}(z) + const",
        mu_c_p1(c_curv, z) + constant,
        lhs_at(z),
        tol,
    );
    report
}

/// Pullback of `g_FS(c = 1)` on `P^n` through `f` (finite-difference
/// Jacobian) against `g_FS(c = 1/n)` on `P^1`.
pub fn pullback_isometry_check(n: usize, z: &ProjectivePoint, tol: f64) -> Result<VerificationReport> {
    let src_chart = z.largest_index();
    let source = FsMetric::in_chart(z, 1.0 / n as f64, src_chart)?.real_matrix();
    let image = veronese(n, z);
    let target = fs_metric(&image, 1.0)?;
    let tgt_chart = target.chart();
    let x0 = z.chart_coords(src_chart)?;
    let jac = fd::jacobian(
        |x| {
            let p = ProjectivePoint::from_chart(src_chart, x).expect("chart point");
            veronese(n, &p)
                .chart_coords(tgt_chart)
                .expect("target chart stays regular")
        },
        &x0,
        FD_STEP,
    );
    let j = nalgebra::DMatrix::from_fn(jac.len(), 2, |r, c| jac[r][c]);
    let pulled = j.transpose() * target.real_matrix() * j;
    let rel = (&pulled - &source).norm() / source.norm();

    let mut report = VerificationReport::new(format!("Veronese f: P^1(1/{n}) -> P^{n}(1) is isometric"));
    for r in 0..2 {
        for c in 0..2 {
            report.push(
                format!("g[{r}{c}] pullback vs source"),
                source[(r, c)].to_string(),
                pulled[(r, c)].to_string(),
                true,
            );
        }
    }
    report.push_close("relative Frobenius error", 0.0, rel, tol);
    Ok(report)
}

/// Weight of `k` under the binomial law with success probability `q`.
pub fn binomial_pmf(n: usize, q: f64) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            rational_to_f64(&num_rational::BigRational::from_integer(binomial_coefficient(
                n as u64, k as u64,
            ))) * q.powi(k as i32)
                * (1.0 - q).powi((n - k) as i32)
        })
        .collect()
}
