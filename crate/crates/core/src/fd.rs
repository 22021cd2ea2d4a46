//! Central finite differences, used as independent oracles.

/// Step used by every finite-difference check in the toolkit.
pub const FD_STEP: f64 = 1e-4;

pub fn gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|i| {
            xp[i] = x[i] + h;
            let fp = f(&xp);
            xp[i] = x[i] - h;
            let fm = f(&xp);
            xp[i] = x[i];
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

pub fn hessian(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let n = x.len();
    let f0 = f(x);
    let mut out = vec![vec![0.0; n]; n];
    let mut xp = x.to_vec();
    for i in 0..n {
        xp[i] = x[i] + h;
        let fp = f(&xp);
        xp[i] = x[i] - h;
        let fm = f(&xp);
        xp[i] = x[i];
        out[i][i] = (fp - 2.0 * f0 + fm) / (h * h);
        for j in 0..i {
            let mut eval = |si: f64, sj: f64| {
                xp[i] = x[i] + si * h;
                xp[j] = x[j] + sj * h;
                let v = f(&xp);
                xp[i] = x[i];
                xp[j] = x[j];
                v
            };
            let v = (eval(1.0, 1.0) - eval(1.0, -1.0) - eval(-1.0, 1.0) + eval(-1.0, -1.0)) / (4.0 * h * h);
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    out
}

/// Derivative of `f` at `x` along `u`.
pub fn directional(f: impl Fn(&[f64]) -> f64, x: &[f64], u: &[f64], h: f64) -> f64 {
    let shifted = |s: f64| -> Vec<f64> { x.iter().zip(u).map(|(a, b)| a + s * h * b).collect() };
    (f(&shifted(1.0)) - f(&shifted(-1.0))) / (2.0 * h)
}

/// Jacobian of a vector map, one row per output component.
pub fn jacobian(f: impl Fn(&[f64]) -> Vec<f64>, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let mut xp = x.to_vec();
    let cols: Vec<Vec<f64>> = (0..x.len())
        .map(|j| {
            xp[j] = x[j] + h;
            let fp = f(&xp);
            xp[j] = x[j] - h;
            let fm = f(&xp);
            xp[j] = x[j];
            fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h)).collect()
        })
        .collect();
    let rows = cols.first().map_or(0, Vec::len);
    (0..rows).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_is_exact() {
        let f = |x: &[f64]| 3.0 * x[0] * x[0] + x[0] * x[1] - 2.0 * x[1] * x[1];
        let g = gradient(f, &[1.0, 2.0], FD_STEP);
        assert!((g[0] - 8.0).abs() < 1e-8 && (g[1] + 7.0).abs() < 1e-8);
        let h = hessian(f, &[1.0, 2.0], FD_STEP);
        assert!((h[0][0] - 6.0).abs() < 1e-5);
        assert!((h[0][1] - 1.0).abs() < 1e-5);
        assert!((h[1][1] + 4.0).abs() < 1e-5);
        let d = directional(f, &[1.0, 2.0], &[1.0, 1.0], FD_STEP);
        assert!((d - 1.0).abs() < 1e-8);
    }

    #[test]
    fn jacobian_of_linear_map() {
        let j = jacobian(|x| vec![x[0] + 2.0 * x[1], -x[1]], &[0.3, 0.7], FD_STEP);
        assert!((j[0][0] - 1.0).abs() < 1e-10);
        assert!((j[0][1] - 2.0).abs() < 1e-10);
        assert!((j[1][1] + 1.0).abs() < 1e-10);
    }
}
