//! Marginal and moment polytopes, and the exact identities linking them.
//!
//! All momentum-side quantities (`T`, `C`, `A`) live in 4π units: a moment
//! polytope `-4πT(Δ_m) + C` is stored as `-T(Δ_m) + C/4π`.

use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::expfam::{ExponentialFamily, NaturalParameter, ProbabilityDistribution};
use crate::polytope::{self, AffineMap, Polytope, Units};
use crate::rational::{rational_from_f64, RationalMatrix, RationalVector};
use crate::report::VerificationReport;

/// Relative shrink applied to the marginal polytope before testing a
/// floating-point mean for interior membership.
pub const INTERIOR_MARGIN: (i64, i64) = (1, 1_000_000_000);

/// Torification data of a family, in 4π units.
///
/// `t_matrix` is `n × m`, `c_offset` is `C/4π`, and `a_map` is `A/4π`.
/// Integrality of `T` and the point-mass correspondences
/// `A(F(x_k)) = -T e_{k+1} + C`, `A(F(x_m)) = C` are checked by
/// [`TorificationData::consistency_report`] rather than at construction, so
/// that user-supplied or deliberately corrupted data can be represented and
/// rejected by the verifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorificationData {
    t_matrix: RationalMatrix,
    c_offset: RationalVector,
    a_map: AffineMap,
}

impl TorificationData {
    pub fn new(t_matrix: RationalMatrix, c_offset: RationalVector, a_map: AffineMap) -> Result<Self> {
        let n = t_matrix.rows();
        if c_offset.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: c_offset.dim(),
            });
        }
        if a_map.input_dim() != n || a_map.output_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: a_map.output_dim(),
            });
        }
        if !a_map.is_invertible() {
            return Err(Error::NotInvertible);
        }
        Ok(TorificationData {
            t_matrix,
            c_offset,
            a_map,
        })
    }

    pub fn t_matrix(&self) -> &RationalMatrix {
        &self.t_matrix
    }

    pub fn c_offset(&self) -> &RationalVector {
        &self.c_offset
    }

    pub fn a_map(&self) -> &AffineMap {
        &self.a_map
    }

    pub fn n(&self) -> usize {
        self.t_matrix.rows()
    }

    pub fn m(&self) -> usize {
        self.t_matrix.cols()
    }

    pub fn t_is_integral(&self) -> bool {
        self.t_matrix.is_integral()
    }

    /// Replaces one entry of `T`; used to build mutants.
    pub fn with_t_entry(&self, row: usize, col: usize, value: BigRational) -> Self {
        let mut t = self.t_matrix.clone();
        t.set(row, col, value);
        TorificationData {
            t_matrix: t,
            ..self.clone()
        }
    }

    /// `x -> -T x + C`, sending `Δ_m` onto the moment polytope.
    pub fn simplex_map(&self) -> AffineMap {
        AffineMap::new(self.t_matrix.neg(), self.c_offset.clone()).expect("dimensions validated")
    }

    /// Checks that `T` is integral and that `A` sends each `F(x_k)` to the
    /// image of the matching simplex vertex.
    pub fn consistency_report(&self, fam: &ExponentialFamily) -> Result<VerificationReport> {
        let mut report = VerificationReport::new("torification consistency");
        self.check_family(fam)?;
        report.push(
            "T has integer entries",
            "integral",
            if self.t_is_integral() {
                "integral"
            } else {
                "non-integral"
            },
            self.t_is_integral(),
        );
        self.push_vertex_witnesses(fam, &mut report)?;
        Ok(report)
    }

    fn push_vertex_witnesses(&self, fam: &ExponentialFamily, report: &mut VerificationReport) -> Result<()> {
        let m = fam.m();
        let simplex_map = self.simplex_map();
        for (k, f) in fam.f_table().iter().enumerate() {
            let vertex = if k < m {
                RationalVector::unit(m, k)
            } else {
                RationalVector::zeros(m)
            };
            let expected = self.a_map.apply(f)?;
            let actual = simplex_map.apply(&vertex)?;
            let label = if k < m {
                format!("vertex e_{} of Δ_m: A(F(x_{k})) vs -T e_{} + C", k + 1, k + 1)
            } else {
                format!("vertex 0 of Δ_m: A(F(x_{m})) vs C")
            };
            report.push_eq(label, &expected, &actual);
        }
        Ok(())
    }

    fn check_family(&self, fam: &ExponentialFamily) -> Result<()> {
        if fam.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: fam.n(),
                got: self.n(),
            });
        }
        if fam.m() != self.m() {
            return Err(Error::DimensionMismatch {
                expected: fam.m(),
                got: self.m(),
            });
        }
        Ok(())
    }
}

/// Hull of `{F(x) : x ∈ Ω}`, plain units.
pub fn marginal_polytope(fam: &ExponentialFamily) -> Polytope {
    polytope::hull(fam.f_table()).expect("F table is nonempty and rectangular")
}

/// Exact `E_p(F)` for a distribution with rational weights.
pub fn expected_statistic(fam: &ExponentialFamily, p: &ProbabilityDistribution) -> Result<RationalVector> {
    let weights = p.exact().ok_or(Error::NonRationalWeights)?;
    if weights.len() != fam.space().len() {
        return Err(Error::LengthMismatch {
            what: "distribution".into(),
            expected: fam.space().len(),
            got: weights.len(),
        });
    }
    let mut acc = RationalVector::zeros(fam.n());
    for (w, f) in weights.iter().zip(fam.f_table()) {
        acc = &acc + &f.scale(w);
    }
    Ok(acc)
}

/// Whether `η(θ)` lies in the relative interior of the marginal polytope.
///
/// Exact when `p_θ` has rational weights; otherwise the float mean is
/// converted exactly and tested against the polytope shrunk by
/// [`INTERIOR_MARGIN`].
pub fn mean_in_interior(fam: &ExponentialFamily, theta: &NaturalParameter) -> bool {
    let marginal = marginal_polytope(fam);
    if let Some(p) = fam.pdf_exact(theta) {
        let eta = expected_statistic(fam, &p).expect("exact weights");
        return marginal.relative_interior_contains(&eta).expect("dimensions agree");
    }
    let eta = fam.mean_params(theta.values());
    let Some(entries) = eta.iter().map(|&e| rational_from_f64(e)).collect::<Option<Vec<_>>>() else {
        return false;
    };
    let delta = BigRational::new(INTERIOR_MARGIN.0.into(), INTERIOR_MARGIN.1.into());
    marginal
        .shrink(&delta)
        .relative_interior_contains(&RationalVector::new(entries))
        .expect("dimensions agree")
}

/// Exact relative-interior test for an arbitrary mean vector.
pub fn point_in_interior(fam: &ExponentialFamily, eta: &RationalVector) -> Result<bool> {
    marginal_polytope(fam).relative_interior_contains(eta)
}

/// Canonical data: column `k+1` of `T` is `F(x_m) - F(x_k)` and
/// `A(y) = y - F(x_m) + C` (4π units).
pub fn canonical_torification(fam: &ExponentialFamily, c_offset: &RationalVector) -> Result<TorificationData> {
    let n = fam.n();
    if c_offset.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: c_offset.dim(),
        });
    }
    let m = fam.m();
    let base = &fam.f_table()[m];
    let mut columns = Vec::with_capacity(m);
    for (k, f) in fam.f_table()[..m].iter().enumerate() {
        let col = base - f;
        if let Some(bad) = col.iter().find(|q| !q.is_integer()) {
            return Err(Error::NonIntegralF {
                index: k,
                value: bad.to_string(),
            });
        }
        columns.push(col);
    }
    let t = RationalMatrix::from_columns(&columns, n);
    let a = AffineMap::translation(c_offset - base);
    let data = TorificationData::new(t, c_offset.clone(), a)?;
    debug_assert!(data.consistency_report(fam).map(|r| r.passed).unwrap_or(false));
    Ok(data)
}

/// `T` is the transpose of `ρ_*` under the Euclidean pairings.
pub fn t_from_rho(rho_star: &RationalMatrix) -> RationalMatrix {
    rho_star.transpose()
}

/// `-T(Δ_m) + C` in 4π units.
pub fn moment_polytope(data: &TorificationData, m: usize) -> Result<Polytope> {
    if m != data.m() {
        return Err(Error::DimensionMismatch {
            expected: data.m(),
            got: m,
        });
    }
    Ok(polytope::simplex(m as i64)?
        .affine_image(&data.simplex_map())?
        .with_units(Units::FourPi))
}

/// Checks `A(M) = -T(Δ_m) + C` exactly, together with the vertex
/// correspondences and the integrality of `T`.
pub fn verify_theorem(fam: &ExponentialFamily, data: &TorificationData) -> Result<VerificationReport> {
    data.check_family(fam)?;
    let mut report = VerificationReport::new("moment polytope theorem");
    let fullness = fam.is_full_default();
    if !fullness.full {
        report.note(format!(
            "warning: family is not full (numeric rank {} < m = {}); the theorem's hypothesis fails",
            fullness.rank,
            fam.m()
        ));
    }
    report.push(
        "T has integer entries",
        "integral",
        if data.t_is_integral() {
            "integral"
        } else {
            "non-integral"
        },
        data.t_is_integral(),
    );
    data.push_vertex_witnesses(fam, &mut report)?;

    let image = marginal_polytope(fam)
        .affine_image(data.a_map())?
        .with_units(Units::FourPi);
    let moment = moment_polytope(data, fam.m())?;
    for v in moment.vertices() {
        if !image.contains(v)? {
            report.push(
                format!("moment-polytope vertex {v} lies in A(M)"),
                "contained",
                "outside",
                false,
            );
        }
    }
    for v in image.vertices() {
        if !moment.contains(v)? {
            report.push(
                format!("A(M) vertex {v} lies in -T(Δ_m)+C"),
                "contained",
                "outside",
                false,
            );
        }
    }
    report.push_eq("A(M) = -T(Δ_m) + C (4π units)", &moment, &image);
    Ok(report)
}

/// Exact check of `-T (p(x_0), ..., p(x_{m-1})) + C = A(E_p F)` in 4π units.
pub fn verify_identity(
    fam: &ExponentialFamily,
    data: &TorificationData,
    p: &ProbabilityDistribution,
) -> Result<VerificationReport> {
    data.check_family(fam)?;
    let weights = p.exact().ok_or(Error::NonRationalWeights)?;
    let m = fam.m();
    let head = RationalVector::new(weights[..m].to_vec());
    let lhs = data.simplex_map().apply(&head)?;
    let rhs = data.a_map().apply(&expected_statistic(fam, p)?)?;
    let mut report = VerificationReport::new("T∘α(p) + C = A(E_p F)");
    report.push_eq(format!("p = {}", RationalVector::new(weights.to_vec())), &rhs, &lhs);
    Ok(report)
}

/// Integrality of vertex differences of the moment polytope.
pub fn verify_corollary(data: &TorificationData, m: usize) -> Result<VerificationReport> {
    corollary_report(&moment_polytope(data, m)?)
}

/// Integrality of all pairwise vertex differences of a 4π-unit polytope.
pub fn corollary_report(polytope: &Polytope) -> Result<VerificationReport> {
    if polytope.units() != Units::FourPi {
        return Err(Error::UnitMismatch("corollary check needs 4pi units".into()));
    }
    let mut report = VerificationReport::new("vertex differences lie in 4πZ^n");
    for (i, j, d) in polytope.vertex_differences() {
        let bad: Vec<String> = d
            .iter()
            .filter(|q| !q.is_integer())
            .map(|q| format!("{} ∉ ℤ", q.abs()))
            .collect();
        let actual = if bad.is_empty() {
            d.to_string()
        } else {
            format!("{d}: {}", bad.join(", "))
        };
        report.push(
            format!("v{j} - v{i} (×4π)"),
            format!("∈ ℤ^{}", d.dim()),
            actual,
            bad.is_empty(),
        );
    }
    Ok(report)
}
