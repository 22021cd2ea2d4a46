//! Command execution. Produces an [`Outcome`] that `render` turns into the
//! requested output format.

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use toricfam::io::parse_family_document;
use toricfam::kahler::{
    closedness_check, hamiltonian_check_pm, hamiltonian_check_tube, pullback_isometry_check, verify_equivariance,
    verify_veronese_momentum, Frame, ProjectivePoint, TubePoint,
};
use toricfam::moment::{
    canonical_torification, corollary_report, marginal_polytope, moment_polytope, verify_identity, verify_theorem,
};
use toricfam::rational::{format_sig12, rational_to_f64};
use toricfam::{
    Error, ExponentialFamily, NaturalParameter, Polytope, ProbabilityDistribution, RationalVector, TorificationData,
    Units, VerificationReport,
};

use crate::config::{Command, Input, RunConfig, DEFAULT_SAMPLES};

const CLOSEDNESS_POINTS: usize = 20;
const HAMILTONIAN_POINTS: usize = 10;
const EQUIVARIANCE_POINTS: usize = 25;
const MOMENTUM_POINTS: usize = 25;
const ISOMETRY_POINTS: usize = 10;

/// A parse or validation failure (exit code 2).
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub field: Option<String>,
    pub message: String,
}

impl CliError {
    pub fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError {
            field: Some(field.into()),
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { field, message } => CliError::field(field, message),
            Error::NonIntegralF { index, ref value } => CliError::field(
                format!("F[{index}]"),
                format!("F(x_m) - F(x_{index}) = {value} is not integral"),
            ),
            other => CliError {
                field: None,
                message: other.to_string(),
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.field {
            Some(field) => write!(f, "invalid {field}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// A named result shown before the reports.
#[derive(Debug, Clone)]
pub struct Info {
    pub key: String,
    pub text: String,
    pub json: Value,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: &'static str,
    pub info: Vec<Info>,
    pub reports: Vec<VerificationReport>,
    /// Vertex table used by `--format csv` for polytope-valued commands.
    pub polytope_csv: Option<String>,
}

impl Outcome {
    fn new(command: &'static str) -> Self {
        Outcome {
            command,
            info: Vec::new(),
            reports: Vec::new(),
            polytope_csv: None,
        }
    }

    fn info(&mut self, key: &str, text: impl Into<String>, json: Value) {
        self.info.push(Info {
            key: key.to_string(),
            text: text.into(),
            json,
        });
    }

    fn polytope(&mut self, key: &str, p: &Polytope) {
        let mut json = p.to_json();
        json["display"] = json!(p.to_string());
        self.info(key, polytope_text(p), json);
    }

    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }
}

/// `[-5, 0] (×4π) ≈ [-62.8318530718, 0]` for momentum-side polytopes.
fn polytope_text(p: &Polytope) -> String {
    if p.units() != Units::FourPi {
        return p.to_string();
    }
    let scaled: Vec<String> = p
        .vertices()
        .iter()
        .map(|v| {
            let coords: Vec<String> = v.iter().map(|q| format_sig12(4.0 * PI * rational_to_f64(q))).collect();
            format!("({})", coords.join(", "))
        })
        .collect();
    let decimal = if p.ambient_dim() == 1 {
        let ends: Vec<&str> = scaled.iter().map(|s| s.trim_matches(['(', ')'])).collect();
        format!("[{}]", [ends[0], ends[ends.len() - 1]].join(", "))
    } else {
        format!("conv{{{}}}", scaled.join(", "))
    };
    format!("{p} ≈ {decimal}")
}

fn vector_text(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| format_sig12(x)).collect();
    format!("({})", parts.join(", "))
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = Outcome::new(config.command.name());
    match &config.command {
        Command::FamilyShow { theta } => {
            let (fam, _) = load(config)?;
            family_show(&mut out, &fam, theta)?;
        }
        Command::Hull => {
            let (fam, _) = load(config)?;
            let p = marginal_polytope(&fam);
            out.polytope_csv = Some(p.to_csv());
            out.polytope("marginal polytope", &p);
        }
        Command::VerifyTheorem => {
            let (fam, data) = load_with_data(config)?;
            describe_data(&mut out, &fam, &data)?;
            out.reports.push(verify_theorem(&fam, &data)?);
        }
        Command::VerifyCorollary { polytope: Some(path) } => {
            let p = read_polytope(path)?;
            out.polytope("moment polytope", &p);
            out.reports.push(corollary_report(&p)?);
        }
        Command::VerifyCorollary { polytope: None } => {
            let (fam, data) = load_with_data(config)?;
            let p = moment_polytope(&data, fam.m())?;
            out.polytope("moment polytope", &p);
            out.reports.push(corollary_report(&p)?);
        }
        Command::VerifyIdentity { samples } => {
            let (fam, data) = load_with_data(config)?;
            out.reports.push(identity_suite(&fam, &data, *samples, config.seed)?);
        }
        Command::VerifyKahler => {
            let (fam, data) = load_with_data(config)?;
            if binomial_degree(&fam).is_none() {
                out.info("veronese", "skipped (family is not binomial)", json!("skipped"));
            }
            out.reports.extend(kahler_suites(&fam, &data, config)?);
        }
        Command::ExampleBinomial { n } => {
            let fam = ExponentialFamily::binomial(*n).map_err(|e| CliError::field("--n", e.to_string()))?;
            let data = canonical_torification(&fam, &c_offset(config, fam.n())?)?;
            describe_data(&mut out, &fam, &data)?;
            out.polytope("marginal polytope", &marginal_polytope(&fam));
            let moment = moment_polytope(&data, fam.m())?;
            out.polytope_csv = Some(moment.to_csv());
            out.reports.push(verify_theorem(&fam, &data)?);
            out.reports.push(corollary_report(&moment)?);
            out.reports
                .push(identity_suite(&fam, &data, DEFAULT_SAMPLES, config.seed)?);
            out.reports.extend(kahler_suites(&fam, &data, config)?);
        }
    }
    out.reports.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

fn load(config: &RunConfig) -> Result<(ExponentialFamily, Option<TorificationData>), CliError> {
    match config.input.as_ref().expect("validated config has an input") {
        Input::Binomial(n) => {
            let fam = ExponentialFamily::binomial(*n).map_err(|e| CliError::field("--binomial", e.to_string()))?;
            Ok((fam, None))
        }
        Input::File(path) => {
            let text = read(path, "--file")?;
            let doc = parse_family_document(&text)?;
            Ok((doc.family, doc.torification))
        }
    }
}

fn load_with_data(config: &RunConfig) -> Result<(ExponentialFamily, TorificationData), CliError> {
    let (fam, supplied) = load(config)?;
    let data = match supplied {
        Some(data) => {
            if !config.c_offset.is_empty() {
                return Err(CliError::field(
                    "--c-offset",
                    "the family file already supplies torification data",
                ));
            }
            data
        }
        None => canonical_torification(&fam, &c_offset(config, fam.n())?)?,
    };
    Ok((fam, data))
}

fn read(path: &Path, field: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::field(field, format!("{}: {e}", path.display())))
}

fn read_polytope(path: &Path) -> Result<Polytope, CliError> {
    let text = read(path, "--polytope")?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::field("--polytope", e.to_string()))?;
    Ok(Polytope::from_json(&value)?)
}

fn c_offset(config: &RunConfig, n: usize) -> Result<RationalVector, CliError> {
    if config.c_offset.is_empty() {
        return Ok(RationalVector::zeros(n));
    }
    if config.c_offset.len() != n {
        return Err(CliError::field(
            "--c-offset",
            format!("expected {n} entries, got {}", config.c_offset.len()),
        ));
    }
    Ok(RationalVector::parse("--c-offset", &config.c_offset)?)
}

fn family_show(out: &mut Outcome, fam: &ExponentialFamily, theta: &[String]) -> Result<(), CliError> {
    let theta: Vec<f64> = if theta.is_empty() {
        vec![0.0; fam.n()]
    } else {
        theta
            .iter()
            .enumerate()
            .map(|(i, s)| match s.trim().parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                _ => Err(CliError::field(
                    format!("--theta[{i}]"),
                    format!("not a finite number: {s:?}"),
                )),
            })
            .collect::<Result<_, _>>()?
    };
    if theta.len() != fam.n() {
        return Err(CliError::field(
            "--theta",
            format!("expected {} entries, got {}", fam.n(), theta.len()),
        ));
    }
    let fullness = fam.is_full_default();
    out.info(
        "family",
        format!("{} points, n = {}, m = {}", fam.space().len(), fam.n(), fam.m()),
        json!({"points": fam.space().len(), "n": fam.n(), "m": fam.m()}),
    );
    out.info("theta", vector_text(&theta), json!(theta));
    let psi = fam.log_partition(&theta);
    out.info("psi", format_sig12(psi), json!(psi));
    let eta = fam.mean_params(&theta);
    out.info("eta", vector_text(&eta), json!(eta));
    let fisher = fam.fisher(&theta);
    let rows: Vec<Vec<f64>> = (0..fam.n())
        .map(|r| (0..fam.n()).map(|c| fisher[(r, c)]).collect())
        .collect();
    let text: Vec<String> = rows.iter().map(|r| vector_text(r)).collect();
    out.info("fisher", format!("[{}]", text.join(", ")), json!(rows));
    let pdf: Vec<f64> = fam
        .pdf(&NaturalParameter::new(theta).expect("finite"))
        .weights()
        .to_vec();
    out.info("pdf", vector_text(&pdf), json!(pdf));
    out.info(
        "full",
        format!("{} (rank {})", if fullness.full { "yes" } else { "no" }, fullness.rank),
        json!({"full": fullness.full, "rank": fullness.rank}),
    );
    Ok(())
}

fn describe_data(out: &mut Outcome, fam: &ExponentialFamily, data: &TorificationData) -> Result<(), CliError> {
    let rows = data.t_matrix().to_string_rows();
    let text: Vec<String> = rows.iter().map(|r| r.join(" ")).collect();
    out.info("T", format!("[{}]", text.join("; ")), json!(rows));
    out.info(
        "C",
        format!("{} (×4π)", data.c_offset()),
        json!(data.c_offset().to_strings()),
    );
    out.polytope("moment polytope", &moment_polytope(data, fam.m())?);
    Ok(())
}

fn rational_distribution(rng: &mut impl Rng, points: usize) -> ProbabilityDistribution {
    loop {
        let raw: Vec<i64> = (0..points).map(|_| rng.random_range(0..=9)).collect();
        let total: i64 = raw.iter().sum();
        if total > 0 {
            let weights = raw
                .iter()
                .map(|&w| BigRational::new(BigInt::from(w), BigInt::from(total)))
                .collect();
            return ProbabilityDistribution::from_rational(weights).expect("normalized");
        }
    }
}

fn identity_suite(
    fam: &ExponentialFamily,
    data: &TorificationData,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = Vec::with_capacity(samples);
    for k in 0..samples {
        let p = rational_distribution(&mut rng, fam.space().len());
        parts.push((format!("sample {k}"), verify_identity(fam, data, &p)?));
    }
    Ok(merge(format!("T∘α(p) + C = A(E_p F) on {samples} samples"), parts))
}

/// Flattens per-point reports into one, prefixing witness descriptions.
fn merge(name: String, parts: Vec<(String, VerificationReport)>) -> VerificationReport {
    let mut merged = VerificationReport::new(name);
    for (label, part) in parts {
        for w in part.witnesses {
            merged.push(format!("{label}: {}", w.description), w.expected, w.actual, w.ok);
        }
        for note in part.notes {
            if !merged.notes.contains(&note) {
                merged.note(note);
            }
        }
        if let Some(e) = part.max_error {
            merged.max_error = Some(merged.max_error.map_or(e, |m| m.max(e)));
        }
    }
    merged
}

fn uniform_vec(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-2.0..2.0)).collect()
}

fn random_point(rng: &mut impl Rng, m: usize) -> ProjectivePoint {
    loop {
        let z: Vec<Complex64> = (0..=m)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        if z.iter().map(|c| c.norm_sqr()).sum::<f64>() > 1e-6 {
            return ProjectivePoint::new(z).expect("nonzero");
        }
    }
}

/// Degree of the binomial family this family coincides with, if any.
fn binomial_degree(fam: &ExponentialFamily) -> Option<usize> {
    let reference = ExponentialFamily::binomial(fam.m() as i64).ok()?;
    (reference.f_table() == fam.f_table() && reference.c_table() == fam.c_table()).then_some(fam.m())
}

fn kahler_suites(
    fam: &ExponentialFamily,
    data: &TorificationData,
    config: &RunConfig,
) -> Result<Vec<VerificationReport>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = fam.n();
    let mut reports = Vec::new();

    let parts = (0..CLOSEDNESS_POINTS)
        .map(|k| {
            (
                format!("point {k}"),
                closedness_check(fam, &uniform_vec(&mut rng, n), config.tol_fd),
            )
        })
        .collect();
    reports.push(merge("Kähler form is closed".into(), parts));

    let frame = Frame::calibrated(n);
    let mut parts = Vec::new();
    for k in 0..HAMILTONIAN_POINTS {
        let point = TubePoint::new(uniform_vec(&mut rng, n), uniform_vec(&mut rng, n))?;
        parts.push((
            format!("point {k}"),
            hamiltonian_check_tube(fam, data, &point, &frame, config.tol_fd),
        ));
    }
    reports.push(merge("tube momentum map is Hamiltonian".into(), parts));

    let m = fam.m();
    let mut parts = Vec::new();
    for k in 0..HAMILTONIAN_POINTS {
        let z = random_point(&mut rng, m);
        parts.push((format!("point {k}"), hamiltonian_check_pm(m, 1.0, &z, config.tol_fd)?));
    }
    reports.push(merge(format!("P^{m} momentum map is Hamiltonian"), parts));

    if let Some(degree) = binomial_degree(fam) {
        let parts = (0..EQUIVARIANCE_POINTS)
            .map(|k| {
                let t = rng.random_range(-1.0..1.0);
                let z = random_point(&mut rng, 1);
                (
                    format!("pair {k}"),
                    verify_equivariance(degree, t, &z, config.tol_check),
                )
            })
            .collect();
        reports.push(merge("Veronese immersion is equivariant".into(), parts));

        let parts = (0..MOMENTUM_POINTS)
            .map(|k| {
                let z = random_point(&mut rng, 1);
                let report = verify_veronese_momentum(degree, &z, data.c_offset(), config.tol_check);
                (format!("point {k}"), report)
            })
            .collect();
        reports.push(merge("μ = T∘μ'∘f + C on P^1(1/n)".into(), parts));

        let mut parts = Vec::new();
        for k in 0..ISOMETRY_POINTS {
            let z = random_point(&mut rng, 1);
            parts.push((
                format!("point {k}"),
                pullback_isometry_check(degree, &z, config.tol_fd)?,
            ));
        }
        reports.push(merge(
            format!("Veronese f: P^1(1/{degree}) -> P^{degree}(1) is isometric"),
            parts,
        ));
    }
    Ok(reports)
}
