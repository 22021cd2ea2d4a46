//! Exact convex polytopes in V-representation.
//!
//! Vertex sets are always minimal and sorted, so two polytopes are equal iff
//! their vertex lists are equal.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp;
use crate::rational::{affine_rank, format_sig12, rational_to_f64, RationalMatrix, RationalVector};

/// Coordinate convention. `FourPi` coordinates are momentum values divided
/// by 4π, which keeps every momentum-side quantity rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Units {
    #[serde(rename = "plain")]
    Plain,
    #[serde(rename = "4pi")]
    FourPi,
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Units::Plain => write!(f, "plain"),
            Units::FourPi => write!(f, "4pi"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polytope {
    ambient_dim: usize,
    vertices: Vec<RationalVector>,
    units: Units,
}

/// `x -> linear * x + offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    linear: RationalMatrix,
    offset: RationalVector,
}

impl AffineMap {
    pub fn new(linear: RationalMatrix, offset: RationalVector) -> Result<Self> {
        if linear.rows() != offset.dim() {
            return Err(Error::DimensionMismatch {
                expected: linear.rows(),
                got: offset.dim(),
            });
        }
        Ok(AffineMap { linear, offset })
    }

    pub fn linear(linear: RationalMatrix) -> Self {
        let offset = RationalVector::zeros(linear.rows());
        AffineMap { linear, offset }
    }

    pub fn identity(dim: usize) -> Self {
        Self::linear(RationalMatrix::identity(dim))
    }

    pub fn translation(offset: RationalVector) -> Self {
        AffineMap {
            linear: RationalMatrix::identity(offset.dim()),
            offset,
        }
    }

    pub fn input_dim(&self) -> usize {
        self.linear.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.linear.rows()
    }

    pub fn linear_part(&self) -> &RationalMatrix {
        &self.linear
    }

    pub fn offset(&self) -> &RationalVector {
        &self.offset
    }

    pub fn apply(&self, x: &RationalVector) -> Result<RationalVector> {
        Ok(&self.linear.mul_vec(x)? + &self.offset)
    }

    /// `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &AffineMap) -> Result<AffineMap> {
        let linear = other.linear.mul(&self.linear)?;
        let offset = other.apply(&self.offset)?;
        Ok(AffineMap { linear, offset })
    }

    pub fn is_invertible(&self) -> bool {
        self.linear.rows() == self.linear.cols() && self.linear.inverse().is_some()
    }
}

fn check_dims(points: &[RationalVector]) -> Result<usize> {
    let first = points.first().ok_or(Error::Empty)?;
    let dim = first.dim();
    for p in points {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
    }
    Ok(dim)
}

/// Removes points lying in the hull of the remaining ones. What is left is
/// exactly the vertex set, sorted.
fn minimal_vertices(points: &[RationalVector]) -> Vec<RationalVector> {
    let mut kept: Vec<RationalVector> = points.to_vec();
    kept.sort();
    kept.dedup();
    let mut i = 0;
    while i < kept.len() {
        if kept.len() == 1 {
            break;
        }
        let candidate = kept[i].clone();
        let others: Vec<RationalVector> = kept
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p.clone())
            .collect();
        if lp::convex_combination(&others, &candidate).is_some() {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    kept
}

/// Convex hull of a finite point set, in plain units.
pub fn hull(points: &[RationalVector]) -> Result<Polytope> {
    hull_with_units(points, Units::Plain)
}

pub fn hull_with_units(points: &[RationalVector], units: Units) -> Result<Polytope> {
    let ambient_dim = check_dims(points)?;
    Ok(Polytope {
        ambient_dim,
        vertices: minimal_vertices(points),
        units,
    })
}

/// The standard simplex `{x >= 0, sum x <= 1}` in `R^m`.
pub fn simplex(m: i64) -> Result<Polytope> {
    if m < 1 {
        return Err(Error::InvalidM(m));
    }
    let m = m as usize;
    let mut vertices = vec![RationalVector::zeros(m)];
    vertices.extend((0..m).map(|k| RationalVector::unit(m, k)));
    vertices.sort();
    Ok(Polytope {
        ambient_dim: m,
        vertices,
        units: Units::Plain,
    })
}

impl Polytope {
    /// Rebuilds a polytope from an arbitrary vertex list (re-minimized).
    pub fn from_points(points: &[RationalVector], units: Units) -> Result<Self> {
        hull_with_units(points, units)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn with_units(mut self, units: Units) -> Self {
        self.units = units;
        self
    }

    /// Affine dimension.
    pub fn dim(&self) -> usize {
        affine_rank(&self.vertices)
    }

    pub fn contains(&self, x: &RationalVector) -> Result<bool> {
        self.contains_tagged(x, self.units)
    }

    pub fn contains_tagged(&self, x: &RationalVector, units: Units) -> Result<bool> {
        if units != self.units {
            return Err(Error::UnitMismatch(format!(
                "polytope is in {} units, point in {units}",
                self.units
            )));
        }
        self.check_point_dim(x)?;
        Ok(lp::convex_combination(&self.vertices, x).is_some())
    }

    /// Membership in the interior relative to the affine hull.
    pub fn relative_interior_contains(&self, x: &RationalVector) -> Result<bool> {
        self.check_point_dim(x)?;
        Ok(lp::strictly_positive_combination(&self.vertices, x))
    }

    fn check_point_dim(&self, x: &RationalVector) -> Result<()> {
        if x.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: x.dim(),
            });
        }
        Ok(())
    }

    pub fn affine_image(&self, map: &AffineMap) -> Result<Polytope> {
        if map.input_dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: map.input_dim(),
            });
        }
        let images = self.vertices.iter().map(|v| map.apply(v)).collect::<Result<Vec<_>>>()?;
        hull_with_units(&images, self.units)
    }

    pub fn equals(&self, other: &Polytope) -> Result<bool> {
        if self.units != other.units {
            return Err(Error::UnitMismatch(format!(
                "comparing {} with {}",
                self.units, other.units
            )));
        }
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        Ok(self.vertices == other.vertices)
    }

    /// All ordered pairs `(i, j)` with `i < j` and `v_j - v_i`.
    pub fn vertex_differences(&self) -> Vec<(usize, usize, RationalVector)> {
        let mut out = Vec::new();
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                out.push((i, j, &self.vertices[j] - &self.vertices[i]));
            }
        }
        out
    }

    /// Every pairwise vertex difference is an integer vector. Only
    /// meaningful in 4π units, where the lattice `4πZ^n` becomes `Z^n`.
    pub fn vertex_diffs_integral(&self) -> Result<bool> {
        if self.units != Units::FourPi {
            return Err(Error::UnitMismatch("vertex integrality is defined in 4pi units".into()));
        }
        Ok(self.vertex_differences().iter().all(|(_, _, d)| d.is_integral()))
    }

    /// Shrinks towards the vertex barycenter by the factor `1 - delta`.
    pub fn shrink(&self, delta: &BigRational) -> Polytope {
        let k = BigRational::from_integer((self.vertices.len() as i64).into());
        let mut center = RationalVector::zeros(self.ambient_dim);
        for v in &self.vertices {
            center = &center + v;
        }
        let center = center.scale(&k.recip());
        let factor = BigRational::one() - delta;
        let vertices: Vec<_> = self
            .vertices
            .iter()
            .map(|v| &center + &(v - &center).scale(&factor))
            .collect();
        Polytope {
            ambient_dim: self.ambient_dim,
            vertices: if factor.is_zero() {
                vec![center]
            } else {
                let mut v = vertices;
                v.sort();
                v
            },
            units: self.units,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PolytopeFile {
            units: self.units,
            vertices: self.vertices.iter().map(RationalVector::to_strings).collect(),
        })
        .expect("polytope serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let file: PolytopeFile =
            serde_json::from_value(value.clone()).map_err(|e| Error::parse("polytope", e.to_string()))?;
        let points = file
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| RationalVector::parse(&format!("vertices[{i}]"), v))
            .collect::<Result<Vec<_>>>()?;
        hull_with_units(&points, file.units)
    }

    /// Decimal CSV, 12 significant digits, one vertex per row, in the
    /// polytope's own units.
    pub fn to_csv(&self) -> String {
        let suffix = match self.units {
            Units::Plain => "",
            Units::FourPi => "_4pi",
        };
        let header: Vec<String> = (1..=self.ambient_dim).map(|i| format!("x{i}{suffix}")).collect();
        let mut out = header.join(",");
        out.push('\n');
        for v in &self.vertices {
            let row: Vec<String> = v.iter().map(|q| format_sig12(rational_to_f64(q))).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = if self.units == Units::FourPi { " (×4π)" } else { "" };
        if self.ambient_dim == 1 {
            let lo = &self.vertices[0][0];
            let hi = &self.vertices[self.vertices.len() - 1][0];
            if self.vertices.len() == 1 {
                return write!(f, "{{{lo}}}{suffix}");
            }
            return write!(f, "[{lo}, {hi}]{suffix}");
        }
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}{suffix}")
    }
}

#[derive(Serialize, Deserialize)]
struct PolytopeFile {
    units: Units,
    vertices: Vec<Vec<String>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;

    fn v(e: &[i64]) -> RationalVector {
        RationalVector::from_ints(e)
    }

    fn vq(e: &[&str]) -> RationalVector {
        RationalVector::parse("t", e).unwrap()
    }

    #[test]
    fn hull_of_interval_points() {
        let p = hull(&[v(&[0]), v(&[1]), v(&[2]), v(&[3])]).unwrap();
        assert_eq!(p.vertices(), &[v(&[0]), v(&[3])]);
    }

    #[test]
    fn hull_drops_interior_point() {
        let pts = vec![v(&[0, 0]), v(&[1, 0]), v(&[0, 1]), v(&[1, 1]), vq(&["1/2", "1/2"])];
        let p = hull(&pts).unwrap();
        assert_eq!(p.vertices(), &[v(&[0, 0]), v(&[0, 1]), v(&[1, 0]), v(&[1, 1])]);
    }

    #[test]
    fn hull_errors() {
        assert_eq!(hull(&[]).unwrap_err(), Error::Empty);
        assert!(matches!(
            hull(&[v(&[0]), v(&[0, 1])]).unwrap_err(),
            Error::DimensionMismatch { .. }
        ));
    }

    #[test]
    fn degenerate_inputs() {
        let p = hull(&[v(&[2, 2]), v(&[2, 2]), v(&[2, 2])]).unwrap();
        assert_eq!(p.vertices().len(), 1);
        assert_eq!(p.dim(), 0);
    }

    #[test]
    fn simplex_shapes() {
        assert_eq!(simplex(1).unwrap().vertices(), &[v(&[0]), v(&[1])]);
        assert_eq!(simplex(2).unwrap().vertices(), &[v(&[0, 0]), v(&[0, 1]), v(&[1, 0])]);
        let s5 = simplex(5).unwrap();
        assert_eq!(s5.vertices().len(), 6);
        assert_eq!(s5.dim(), 5);
        assert_eq!(simplex(0).unwrap_err(), Error::InvalidM(0));
    }

    #[test]
    fn containment() {
        let s2 = simplex(2).unwrap();
        assert!(s2.contains(&vq(&["1/3", "1/3"])).unwrap());
        assert!(!s2.contains(&v(&[1, 1])).unwrap());
        for vert in s2.vertices() {
            assert!(s2.contains(vert).unwrap());
        }
        assert!(matches!(
            s2.contains_tagged(&v(&[0, 0]), Units::FourPi).unwrap_err(),
            Error::UnitMismatch(_)
        ));
        assert!(matches!(
            s2.contains(&v(&[0])).unwrap_err(),
            Error::DimensionMismatch { .. }
        ));
    }

    #[test]
    fn affine_images() {
        let neg = AffineMap::linear(RationalMatrix::from_int_rows(&[vec![-1]]).unwrap());
        let img = simplex(1).unwrap().affine_image(&neg).unwrap();
        assert_eq!(img.vertices(), &[v(&[-1]), v(&[0])]);

        let sum = AffineMap::linear(RationalMatrix::from_int_rows(&[vec![1, 1]]).unwrap());
        let img = simplex(2).unwrap().affine_image(&sum).unwrap();
        assert_eq!(img.vertices(), &[v(&[0]), v(&[1])]);

        let t = AffineMap::linear(RationalMatrix::from_int_rows(&[vec![5, 4, 3, 2, 1]]).unwrap());
        let img = simplex(5).unwrap().affine_image(&t).unwrap();
        assert_eq!(img.vertices(), &[v(&[0]), v(&[5])]);
    }

    #[test]
    fn equality() {
        let s2 = simplex(2).unwrap();
        let mut pts = s2.vertices().to_vec();
        pts.push(vq(&["1/3", "1/3"]));
        assert!(s2.equals(&hull(&pts).unwrap()).unwrap());
        let two = AffineMap::linear(RationalMatrix::from_int_rows(&[vec![2, 0], vec![0, 2]]).unwrap());
        assert!(!s2.equals(&s2.affine_image(&two).unwrap()).unwrap());
        let tagged = s2.clone().with_units(Units::FourPi);
        assert!(matches!(s2.equals(&tagged).unwrap_err(), Error::UnitMismatch(_)));
    }

    #[test]
    fn dimensions() {
        assert_eq!(simplex(3).unwrap().dim(), 3);
        assert_eq!(hull(&[v(&[0, 0, 0]), v(&[1, 2, 3])]).unwrap().dim(), 1);
    }

    #[test]
    fn integrality_of_vertex_differences() {
        let seg = hull_with_units(&[v(&[-5]), v(&[0])], Units::FourPi).unwrap();
        assert!(seg.vertex_diffs_integral().unwrap());
        let half = hull_with_units(&[vq(&["-1/2"]), v(&[0])], Units::FourPi).unwrap();
        assert!(!half.vertex_diffs_integral().unwrap());
        let plain = hull(&[v(&[0]), v(&[1])]).unwrap();
        assert!(matches!(
            plain.vertex_diffs_integral().unwrap_err(),
            Error::UnitMismatch(_)
        ));
    }

    #[test]
    fn relative_interior() {
        let seg = hull(&[v(&[0, 0]), v(&[2, 0])]).unwrap();
        assert!(seg.relative_interior_contains(&v(&[1, 0])).unwrap());
        assert!(!seg.relative_interior_contains(&v(&[0, 0])).unwrap());
        let point = hull(&[v(&[3])]).unwrap();
        assert!(point.relative_interior_contains(&v(&[3])).unwrap());
    }

    #[test]
    fn shrink_keeps_vertex_count() {
        let s = simplex(2).unwrap();
        let delta = parse_rational("d", "1/10").unwrap();
        let small = s.shrink(&delta);
        assert_eq!(small.vertices().len(), 3);
        assert!(s.contains(&small.vertices()[0]).unwrap());
        assert!(!small.contains(&v(&[0, 0])).unwrap());
    }

    #[test]
    fn json_and_csv_export() {
        let seg = hull_with_units(&[v(&[-5]), v(&[0])], Units::FourPi).unwrap();
        let json = seg.to_json();
        assert_eq!(json.to_string(), r#"{"units":"4pi","vertices":[["-5"],["0"]]}"#);
        assert_eq!(Polytope::from_json(&json).unwrap(), seg);
        assert_eq!(seg.to_csv(), "x1_4pi\n-5\n0\n");
        assert_eq!(seg.to_string(), "[-5, 0] (×4π)");
        let third = hull(&[vq(&["1/3", "0"])]).unwrap();
        assert_eq!(third.to_csv(), "x1,x2\n0.333333333333,0\n");
    }
}
