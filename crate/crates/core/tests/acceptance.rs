//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use toricfam::expfam::ExponentialFamily;
use toricfam::fd::{self, FD_STEP};
use toricfam::kahler::{
    binomial_pmf, closedness_check, hamiltonian_check_pm, hamiltonian_check_tube, k_map, mu_c_p1,
    pullback_isometry_check, t_binomial, verify_equivariance, verify_veronese_momentum, veronese, Frame,
    ProjectivePoint, TubePoint, KAHLER_SEED,
};
use toricfam::moment::{
    canonical_torification, corollary_report, marginal_polytope, moment_polytope, verify_identity, verify_theorem,
};
use toricfam::polytope::{hull, AffineMap, Polytope, Units};
use toricfam::{RationalMatrix, RationalVector};

use common::*;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: &[String], summary: String) -> Self {
        let ok = failures.is_empty();
        let detail = if ok {
            summary
        } else {
            format!("{summary}; first failure: {}", failures[0])
        };
        Outcome { ok, detail }
    }
}

fn zeros(n: usize) -> RationalVector {
    RationalVector::zeros(n)
}

fn binomial_pipeline() -> Outcome {
    let mut failures = Vec::new();
    for n in 1..=8i64 {
        let fam = ExponentialFamily::binomial(n).unwrap();
        let data = canonical_torification(&fam, &zeros(1)).unwrap();
        if data.t_matrix() != &t_binomial(n as usize) {
            failures.push(format!("n={n}: T = {:?}", data.t_matrix().to_string_rows()));
        }
        let seg = Polytope::from_points(
            &[RationalVector::from_ints(&[-n]), RationalVector::from_ints(&[0])],
            Units::FourPi,
        )
        .unwrap();
        let moment = moment_polytope(&data, fam.m()).unwrap();
        if moment != seg {
            failures.push(format!("n={n}: moment polytope {moment}"));
        }
        let report = verify_theorem(&fam, &data).unwrap();
        if !report.passed {
            failures.push(format!("n={n}: verify_theorem failed"));
        }
    }
    Outcome::new(
        &failures,
        "n = 1..8: T = [n..1], polytope [-n, 0] (×4π), theorem exact".into(),
    )
}

fn corollary(corpus: &[ExponentialFamily]) -> Outcome {
    let mut failures = Vec::new();
    let binomials: Vec<ExponentialFamily> = (1..=8).map(|n| ExponentialFamily::binomial(n).unwrap()).collect();
    for (i, fam) in corpus.iter().chain(&binomials).enumerate() {
        let data = canonical_torification(fam, &zeros(fam.n())).unwrap();
        let report = corollary_report(&moment_polytope(&data, fam.m()).unwrap()).unwrap();
        if !report.passed {
            failures.push(format!("family {i}"));
        }
    }
    Outcome::new(
        &failures,
        format!(
            "{} families, vertex differences in 4πℤⁿ",
            corpus.len() + binomials.len()
        ),
    )
}

fn identity(corpus: &[ExponentialFamily]) -> Outcome {
    let mut rng = rng(CORPUS_SEED ^ 3);
    let mut failures = Vec::new();
    let mut checked = 0;
    for (i, fam) in corpus.iter().enumerate() {
        let c: Vec<i64> = (0..fam.n()).map(|_| rng.random_range(-3..=3)).collect();
        let data = canonical_torification(fam, &RationalVector::from_ints(&c)).unwrap();
        for _ in 0..100 {
            let p = random_rational_distribution(&mut rng, fam.space().len());
            let report = verify_identity(fam, &data, &p).unwrap();
            checked += 1;
            if !report.passed {
                failures.push(format!("family {i}: {}", report.witnesses[0].description));
            }
        }
    }
    Outcome::new(&failures, format!("{checked} (family, p) pairs, exact"))
}

fn theorem_and_mutations(corpus: &[ExponentialFamily]) -> Outcome {
    let mut failures = Vec::new();
    for (i, fam) in corpus.iter().enumerate() {
        let data = canonical_torification(fam, &zeros(fam.n())).unwrap();
        if !verify_theorem(fam, &data).unwrap().passed {
            failures.push(format!("family {i}: theorem failed"));
        }
    }
    let mut rng = rng(CORPUS_SEED ^ 4);
    let mut detected = 0;
    for run in 0..20 {
        let fam = &corpus[run % corpus.len()];
        let data = canonical_torification(fam, &zeros(fam.n())).unwrap();
        let row = rng.random_range(0..fam.n());
        let col = rng.random_range(0..fam.m());
        let mut delta = 0;
        while delta == 0 {
            delta = rng.random_range(-3..=3i64);
        }
        let value = data.t_matrix().get(row, col) + BigRational::from_integer(BigInt::from(delta));
        let mutant = data.with_t_entry(row, col, value);
        let report = verify_theorem(fam, &mutant).unwrap();
        let vertex_witness = report.failures().any(|w| w.description.starts_with("vertex"));
        if !report.passed && vertex_witness {
            detected += 1;
        } else {
            failures.push(format!(
                "mutation {run} (T[{row}][{col}] += {delta}) not detected by a vertex witness"
            ));
        }
    }
    Outcome::new(
        &failures,
        format!("{} families exact; {detected}/20 mutations caught", corpus.len()),
    )
}

fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let norm: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    diff / norm.max(f64::MIN_POSITIVE)
}

fn statistical_oracles(corpus: &[ExponentialFamily]) -> Outcome {
    let mut rng = rng(CORPUS_SEED ^ 5);
    let mut failures = Vec::new();
    let (mut worst_grad, mut worst_hess) = (0.0f64, 0.0f64);
    for k in 0..50 {
        let fam = &corpus[k % corpus.len()];
        let theta = gaussian_vec(&mut rng, fam.n());
        let psi = |t: &[f64]| fam.log_partition(t);
        let grad = fd::gradient(psi, &theta, FD_STEP);
        let g = rel_err(&fam.mean_params(&theta), &grad);
        let hess: Vec<f64> = fd::hessian(psi, &theta, FD_STEP).concat();
        let fisher = fam.fisher(&theta);
        let fisher_rows: Vec<f64> = (0..fam.n())
            .flat_map(|r| (0..fam.n()).map(move |c| (r, c)))
            .map(|(r, c)| fisher[(r, c)])
            .collect();
        let h = rel_err(&fisher_rows, &hess);
        worst_grad = worst_grad.max(g);
        worst_hess = worst_hess.max(h);
        if g > 1e-6 {
            failures.push(format!("pair {k}: gradient rel err {g:e}"));
        }
        if h > 1e-5 {
            failures.push(format!("pair {k}: Hessian rel err {h:e}"));
        }
    }
    Outcome::new(
        &failures,
        format!("50 pairs; max rel err gradient {worst_grad:.2e} (≤ 1e-6), Hessian {worst_hess:.2e} (≤ 1e-5)"),
    )
}

fn kahler_suite(corpus: &[ExponentialFamily]) -> Outcome {
    let mut rng = rng(KAHLER_SEED);
    let mut failures = Vec::new();
    let multi: Vec<&ExponentialFamily> = corpus.iter().filter(|f| f.n() >= 2).collect();
    for k in 0..20 {
        let fam = multi[k % multi.len()];
        let theta = gaussian_vec(&mut rng, fam.n());
        if !closedness_check(fam, &theta, 1e-5).passed {
            failures.push(format!("closedness point {k}"));
        }
    }
    for k in 0..10 {
        let fam = &corpus[k % corpus.len()];
        let data = canonical_torification(fam, &zeros(fam.n())).unwrap();
        let point = TubePoint::new(gaussian_vec(&mut rng, fam.n()), gaussian_vec(&mut rng, fam.n())).unwrap();
        if !hamiltonian_check_tube(fam, &data, &point, &Frame::calibrated(fam.n()), 1e-5).passed {
            failures.push(format!("tube Hamiltonian point {k}"));
        }
    }
    for k in 0..10 {
        let m = 1 + k % 3;
        let c = [1.0, 0.5, 2.0][k % 3];
        let z = random_projective(&mut rng, m);
        if !hamiltonian_check_pm(m, c, &z, 1e-5).unwrap().passed {
            failures.push(format!("P^{m} Hamiltonian point {k}"));
        }
    }
    let e0 = ProjectivePoint::from_real(&[1.0, 0.0]).unwrap();
    let e1 = ProjectivePoint::from_real(&[0.0, 1.0]).unwrap();
    if (mu_c_p1(1.0, &e0) + 4.0 * PI).abs() > 1e-12 || mu_c_p1(1.0, &e1).abs() > 1e-12 {
        failures.push("μ_1 endpoints".into());
    }
    Outcome::new(
        &failures,
        "closedness ×20, tube Hamiltonian ×10, P^m Hamiltonian ×10, μ_1 endpoints".into(),
    )
}

fn veronese_suite() -> Outcome {
    let mut rng = rng(KAHLER_SEED ^ 7);
    let mut failures = Vec::new();
    for k in 0..25 {
        let n = 1 + k % 5;
        let t = rng.random_range(-1.0..1.0);
        let z = random_projective(&mut rng, 1);
        if !verify_equivariance(n, t, &z, 1e-10).passed {
            failures.push(format!("equivariance pair {k}"));
        }
    }
    let mut worst_k = 0.0f64;
    for k in 0..50 {
        let n = 1 + k % 6;
        let z = random_projective(&mut rng, 1);
        let q = z.coords()[1].norm_sqr() / (z.coords()[0].norm_sqr() + z.coords()[1].norm_sqr());
        let err = k_map(&veronese(n, &z))
            .weights()
            .iter()
            .zip(binomial_pmf(n, q))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        worst_k = worst_k.max(err);
        if err > 1e-12 {
            failures.push(format!("K∘f point {k}: {err:e}"));
        }
    }
    for n in 1..=6 {
        for k in 0..25 {
            let z = random_projective(&mut rng, 1);
            if !verify_veronese_momentum(n, &z, &zeros(1), 1e-9).passed {
                failures.push(format!("veronese momentum n={n} point {k}"));
            }
        }
    }
    for n in 1..=4 {
        for k in 0..10 {
            let z = random_projective(&mut rng, 1);
            if !pullback_isometry_check(n, &z, 1e-5).unwrap().passed {
                failures.push(format!("isometry n={n} point {k}"));
            }
        }
    }
    Outcome::new(
        &failures,
        format!("equivariance ×25, K∘f ×50 (max err {worst_k:.1e}), μ = T∘μ'∘f + C ×150, isometry ×40"),
    )
}

fn random_affine(rng: &mut impl Rng, input: usize, output: usize) -> AffineMap {
    let rows: Vec<Vec<i64>> = (0..output)
        .map(|_| (0..input).map(|_| rng.random_range(-2..=2)).collect())
        .collect();
    let offset: Vec<i64> = (0..output).map(|_| rng.random_range(-3..=3)).collect();
    AffineMap::new(
        RationalMatrix::from_int_rows(&rows).unwrap(),
        RationalVector::from_ints(&offset),
    )
    .unwrap()
}

fn hull_kernel() -> Outcome {
    let mut rng = rng(CORPUS_SEED ^ 8);
    let mut failures = Vec::new();
    for k in 0..200 {
        let cloud = random_cloud(&mut rng);
        let points = to_rational(&cloud);
        let p = hull(&points).unwrap();
        let expected = to_rational(&brute_force_vertices(&cloud));
        if p.vertices() != expected.as_slice() {
            failures.push(format!("instance {k}: hull {p} vs oracle {} vertices", expected.len()));
        }
        if hull(p.vertices()).unwrap() != p {
            failures.push(format!("instance {k}: hull not idempotent"));
        }
        let d = points[0].dim();
        let (mid, out) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let f = random_affine(&mut rng, d, mid);
        let g = random_affine(&mut rng, mid, out);
        let stepwise = p.affine_image(&f).unwrap().affine_image(&g).unwrap();
        let composed = p.affine_image(&f.then(&g).unwrap()).unwrap();
        let pointwise = hull(&points.iter().map(|x| f.apply(x).unwrap()).collect::<Vec<_>>()).unwrap();
        if stepwise != composed || p.affine_image(&f).unwrap() != pointwise {
            failures.push(format!("instance {k}: affine composition"));
        }
    }
    Outcome::new(
        &failures,
        "200 instances match the brute-force oracle; idempotence and composition exact".into(),
    )
}

fn main() -> ExitCode {
    let corpus = corpus();
    assert!(corpus.iter().all(|f| marginal_polytope(f).ambient_dim() == f.n()));
    let criteria: Vec<Criterion> = vec![
        ("binomial pipeline", Box::new(binomial_pipeline)),
        ("vertex differences integral", Box::new(|| corollary(&corpus))),
        ("torification identity", Box::new(|| identity(&corpus))),
        (
            "moment polytope theorem and mutations",
            Box::new(|| theorem_and_mutations(&corpus)),
        ),
        ("ψ derivative oracles", Box::new(|| statistical_oracles(&corpus))),
        ("Kähler suite", Box::new(|| kahler_suite(&corpus))),
        ("Veronese suite", Box::new(veronese_suite)),
        ("hull kernel", Box::new(hull_kernel)),
    ];
    let mut all_ok = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        all_ok &= outcome.ok;
        println!(
            "[{}] criterion {}: {name}: {} ({:.2}s)",
            if outcome.ok { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
