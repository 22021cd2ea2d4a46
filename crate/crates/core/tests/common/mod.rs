//! Shared fixtures: a seeded corpus of integer families and a brute-force
//! hull oracle that works in machine integers (no LP).

#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use toricfam::kahler::ProjectivePoint;
use toricfam::{ExponentialFamily, ProbabilityDistribution, RationalVector};

pub const CORPUS_SEED: u64 = 0x70_41C0;
pub const CORPUS_SIZE: usize = 20;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer `F` tables with `n <= 3`, `m <= 8`, pairwise distinct rows and
/// rank `n + 1` for the rows `(1, F(x))`.
pub fn corpus_tables() -> Vec<Vec<Vec<i64>>> {
    let mut rng = rng(CORPUS_SEED);
    let mut out = Vec::new();
    while out.len() < CORPUS_SIZE {
        let n = rng.random_range(1..=3usize);
        let m = rng.random_range(n..=8usize);
        let rows: Vec<Vec<i64>> = (0..=m)
            .map(|_| (0..n).map(|_| rng.random_range(-3..=3)).collect())
            .collect();
        let mut sorted = rows.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != rows.len() || ExponentialFamily::from_int_table(&rows).is_err() {
            continue;
        }
        out.push(rows);
    }
    out
}

pub fn corpus() -> Vec<ExponentialFamily> {
    corpus_tables()
        .iter()
        .map(|rows| ExponentialFamily::from_int_table(rows).expect("validated"))
        .collect()
}

/// Rational distribution with small integer weights (zeros allowed).
pub fn random_rational_distribution(rng: &mut impl Rng, points: usize) -> ProbabilityDistribution {
    loop {
        let raw: Vec<i64> = (0..points).map(|_| rng.random_range(0..=9)).collect();
        let total: i64 = raw.iter().sum();
        if total == 0 {
            continue;
        }
        let weights = raw
            .iter()
            .map(|&w| BigRational::new(BigInt::from(w), BigInt::from(total)))
            .collect();
        return ProbabilityDistribution::from_rational(weights).expect("sums to one");
    }
}

pub fn gaussian_vec(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

pub fn random_projective(rng: &mut impl Rng, m: usize) -> ProjectivePoint {
    let z = (0..=m)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    ProjectivePoint::new(z).expect("nonzero with probability one")
}

pub fn to_rational(points: &[Vec<i64>]) -> Vec<RationalVector> {
    points.iter().map(|p| RationalVector::from_ints(p)).collect()
}

/// Random point cloud in `Z^d`, sometimes confined to a lower-dimensional
/// affine subspace.
pub fn random_cloud(rng: &mut impl Rng) -> Vec<Vec<i64>> {
    let d = rng.random_range(1..=3usize);
    let count = rng.random_range(1..=25usize);
    if d >= 2 && rng.random_bool(0.25) {
        let base: Vec<i64> = (0..d).map(|_| rng.random_range(-3..=3)).collect();
        let dirs: Vec<Vec<i64>> = (0..d - 1)
            .map(|_| (0..d).map(|_| rng.random_range(-2..=2)).collect())
            .collect();
        let k = rng.random_range(1..=d - 1);
        (0..count)
            .map(|_| {
                let coeffs: Vec<i64> = (0..k).map(|_| rng.random_range(-2..=2)).collect();
                (0..d)
                    .map(|i| base[i] + (0..k).map(|j| coeffs[j] * dirs[j][i]).sum::<i64>())
                    .collect()
            })
            .collect()
    } else {
        (0..count)
            .map(|_| (0..d).map(|_| rng.random_range(-4..=4)).collect())
            .collect()
    }
}

/// Rank of an integer matrix by fraction-free elimination.
pub fn int_rank(rows: &[Vec<i128>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..a.len() {
            let (f, g) = (a[r][c], a[rank][c]);
            let pivot = a[rank].clone();
            for (x, p) in a[r].iter_mut().zip(&pivot) {
                *x = *x * g - p * f;
            }
            let gcd = a[r].iter().fold(0i128, |acc, &x| gcd(acc, x.abs()));
            if gcd > 1 {
                a[r].iter_mut().for_each(|x| *x /= gcd);
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn affine_rank(points: &[&Vec<i64>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let diffs: Vec<Vec<i128>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(points[0]).map(|(a, b)| (a - b) as i128).collect())
        .collect();
    int_rank(&diffs)
}

/// Determinant of the leading `k × k` block by fraction-free (Bareiss)
/// elimination.
fn det(mut a: [[i64; 4]; 4], k: usize) -> i64 {
    let mut sign = 1;
    let mut prev = 1;
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| a[r][c] != 0) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            sign = -sign;
        }
        for r in c + 1..k {
            for j in c + 1..k {
                a[r][j] = (a[r][j] * a[c][c] - a[r][c] * a[c][j]) / prev;
            }
        }
        prev = a[c][c];
    }
    sign * a[k - 1][k - 1]
}

/// Whether `v` lies in the simplex spanned by `simplex` (d+1 points of
/// `Z^d`), by Cramer's rule on barycentric coordinates.
fn in_simplex(simplex: &[&[i64]], v: &[i64]) -> Option<bool> {
    let d = v.len();
    let matrix = |replace: Option<usize>| {
        let mut m = [[0i64; 4]; 4];
        for c in 0..=d {
            let col: &[i64] = if replace == Some(c) { v } else { simplex[c] };
            for r in 0..d {
                m[r][c] = col[r];
            }
            m[d][c] = 1;
        }
        m
    };
    let full = det(matrix(None), d + 1);
    if full == 0 {
        return None;
    }
    Some((0..=d).all(|i| det(matrix(Some(i)), d + 1) * full.signum() >= 0))
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if visit(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Vertices of `conv(points)`, sorted: a point is kept iff it lies in no
/// full-dimensional simplex spanned by the other points (after projecting
/// injectively onto coordinates spanning the affine hull).
pub fn brute_force_vertices(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let all: Vec<&Vec<i64>> = pts.iter().collect();
    let d = affine_rank(&all);
    if d == 0 {
        return pts;
    }
    let ambient = pts[0].len();
    let mut coords = Vec::new();
    combinations(ambient, d, |c| {
        let projected: Vec<Vec<i64>> = pts.iter().map(|p| c.iter().map(|&i| p[i]).collect()).collect();
        let refs: Vec<&Vec<i64>> = projected.iter().collect();
        if affine_rank(&refs) == d {
            coords = c.to_vec();
            true
        } else {
            false
        }
    });
    let proj: Vec<Vec<i64>> = pts.iter().map(|p| coords.iter().map(|&i| p[i]).collect()).collect();

    let mut vertices = Vec::new();
    for (vi, v) in proj.iter().enumerate() {
        let others: Vec<&Vec<i64>> = proj
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != vi)
            .map(|(_, p)| p)
            .collect();
        let mut inside = false;
        if affine_rank(&others) == d {
            combinations(others.len(), d + 1, |s| {
                let simplex: Vec<&[i64]> = s.iter().map(|&i| others[i].as_slice()).collect();
                inside = in_simplex(&simplex, v) == Some(true);
                inside
            });
        }
        if !inside {
            vertices.push(pts[vi].clone());
        }
    }
    vertices
}
