//! Exact feasibility for `{x : A x = b, x >= 0}`.
//!
//! Phase-one simplex over `BigRational` with Bland's rule, so it always
//! terminates and never rounds.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::rational::{RationalMatrix, RationalVector};

/// Returns a nonnegative solution of `A x = b`, or `None` if none exists.
pub fn feasible_point(a: &RationalMatrix, b: &RationalVector) -> Option<RationalVector> {
    let rows = a.rows();
    let vars = a.cols();
    assert_eq!(b.dim(), rows, "rhs length must match row count");
    let width = vars + rows;

    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(rows);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(rows);
    for i in 0..rows {
        let flip = b[i].is_negative();
        let mut row: Vec<BigRational> = (0..vars)
            .map(|j| if flip { -a.get(i, j) } else { a.get(i, j).clone() })
            .collect();
        row.extend((0..rows).map(|k| {
            if k == i {
                BigRational::from_integer(1.into())
            } else {
                BigRational::zero()
            }
        }));
        tab.push(row);
        rhs.push(if flip { -&b[i] } else { b[i].clone() });
    }
    let mut basis: Vec<usize> = (vars..width).collect();

    // Reduced costs of the phase-one objective (sum of artificials).
    let mut cost = vec![BigRational::zero(); width];
    let mut cost_rhs = BigRational::zero();
    for i in 0..rows {
        for j in 0..vars {
            cost[j] -= &tab[i][j];
        }
        cost_rhs -= &rhs[i];
    }

    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..rows {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &tab[i][enter];
            let better = match &best {
                None => true,
                Some(r) => ratio < *r || (ratio == *r && basis[i] < basis[leave.unwrap()]),
            };
            if better {
                best = Some(ratio);
                leave = Some(i);
            }
        }
        // The phase-one objective is bounded below by zero.
        let leave = leave.expect("phase-one LP cannot be unbounded");

        let inv = tab[leave][enter].recip();
        for v in tab[leave].iter_mut() {
            *v *= &inv;
        }
        rhs[leave] *= &inv;
        let pivot_row = tab[leave].clone();
        let pivot_rhs = rhs[leave].clone();
        for i in 0..rows {
            if i == leave || tab[i][enter].is_zero() {
                continue;
            }
            let f = tab[i][enter].clone();
            for (v, p) in tab[i].iter_mut().zip(&pivot_row) {
                *v -= &f * p;
            }
            rhs[i] -= &f * &pivot_rhs;
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for (v, p) in cost.iter_mut().zip(&pivot_row) {
                *v -= &f * p;
            }
            cost_rhs -= &f * &pivot_rhs;
        }
        basis[leave] = enter;
    }

    if !cost_rhs.is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); vars];
    for (i, &j) in basis.iter().enumerate() {
        if j < vars {
            x[j] = rhs[i].clone();
        }
    }
    Some(RationalVector::new(x))
}

/// Convex-combination system: finds `lambda >= 0` with `sum lambda = 1` and
/// `sum lambda_i points_i = target`.
pub fn convex_combination(points: &[RationalVector], target: &RationalVector) -> Option<RationalVector> {
    let dim = target.dim();
    let mut a = RationalMatrix::zeros(dim + 1, points.len());
    for (j, p) in points.iter().enumerate() {
        for i in 0..dim {
            a.set(i, j, p[i].clone());
        }
        a.set(dim, j, BigRational::from_integer(1.into()));
    }
    let mut b = target.clone().into_entries();
    b.push(BigRational::from_integer(1.into()));
    feasible_point(&a, &RationalVector::new(b))
}

/// True iff `target` is a combination of *all* `points` with strictly
/// positive weights summing to one, i.e. lies in the relative interior of
/// their hull.
///
/// Homogenized form: `lambda_i = s + mu_i` with `s > 0`; scaling fixes
/// `s = 1` and leaves `tau = sum lambda` free, giving
/// `sum mu_i p_i - tau * target = -sum p_i`, `sum mu_i - tau = -k`.
pub fn strictly_positive_combination(points: &[RationalVector], target: &RationalVector) -> bool {
    let dim = target.dim();
    let k = points.len();
    let mut a = RationalMatrix::zeros(dim + 1, k + 1);
    let mut b = vec![BigRational::zero(); dim + 1];
    for (j, p) in points.iter().enumerate() {
        for i in 0..dim {
            a.set(i, j, p[i].clone());
            b[i] -= &p[i];
        }
        a.set(dim, j, BigRational::from_integer(1.into()));
    }
    for i in 0..dim {
        a.set(i, k, -&target[i]);
    }
    a.set(dim, k, BigRational::from_integer((-1).into()));
    b[dim] = BigRational::from_integer(num_bigint::BigInt::from(-(k as i64)));
    feasible_point(&a, &RationalVector::new(b)).is_some()
}
