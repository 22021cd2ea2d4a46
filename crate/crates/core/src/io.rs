//! JSON family files.
//!
//! ```json
//! {"labels": ["tails", "heads"], "C": ["0", "0"], "F": [["0"], ["1"]]}
//! ```
//!
//! Rationals are strings, `"a/b"` or `"a"`. The optional `"C_log_of"` array
//! adds `ln(value)` to `C` pointwise (either key may be omitted; both absent
//! means `C = 0`). An optional `"torification"` object supplies data
//! explicitly: `{"T": [[...]], "c_offset": [...], "A": {"linear": [[...]], "offset": [...]}}`,
//! all in 4π units; `c_offset` defaults to zero and `A` to the canonical
//! translation `y - F(x_m) + c_offset`.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::expfam::{BaseTerm, ExponentialFamily, SampleSpace};
use crate::moment::TorificationData;
use crate::polytope::AffineMap;
use crate::rational::{parse_rational, RationalMatrix, RationalVector};

/// Parsed family file.
#[derive(Debug, Clone)]
pub struct FamilyDocument {
    pub family: ExponentialFamily,
    pub torification: Option<TorificationData>,
}

const FAMILY_KEYS: [&str; 5] = ["labels", "C", "C_log_of", "F", "torification"];

pub fn parse_family_document(text: &str) -> Result<FamilyDocument> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::parse("json", e.to_string()))?;
    family_document_from_value(&value)
}

pub fn family_document_from_value(value: &Value) -> Result<FamilyDocument> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::parse("$", "family file must be a JSON object"))?;
    reject_unknown(obj, &FAMILY_KEYS, "$")?;

    let labels = string_array(obj.get("labels"), "labels")?.ok_or_else(|| Error::parse("labels", "missing"))?;
    let points = labels.len();
    let space = SampleSpace::new(labels).map_err(|e| Error::parse("labels", e.to_string()))?;

    let f_rows = match obj.get("F") {
        Some(Value::Array(rows)) => rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let field = format!("F[{i}]");
                let strings = string_array(Some(row), &field)?.expect("present");
                RationalVector::parse(&field, &strings)
            })
            .collect::<Result<Vec<_>>>()?,
        Some(_) => return Err(Error::parse("F", "expected an array of arrays")),
        None => return Err(Error::parse("F", "missing")),
    };
    check_len("F", points, f_rows.len())?;

    let linear = match string_array(obj.get("C"), "C")? {
        Some(c) => {
            check_len("C", points, c.len())?;
            RationalVector::parse("C", &c)?.into_entries()
        }
        None => vec![BigRational::zero(); points],
    };
    let log_of = match string_array(obj.get("C_log_of"), "C_log_of")? {
        Some(c) => {
            check_len("C_log_of", points, c.len())?;
            RationalVector::parse("C_log_of", &c)?.into_entries()
        }
        None => vec![BigRational::one(); points],
    };
    let c_table = linear
        .into_iter()
        .zip(log_of)
        .enumerate()
        .map(|(i, (l, g))| BaseTerm::new(l, g).map_err(|_| Error::parse(format!("C_log_of[{i}]"), "must be positive")))
        .collect::<Result<Vec<_>>>()?;

    let family = ExponentialFamily::new(space, c_table, f_rows)?;
    let torification = match obj.get("torification") {
        None | Some(Value::Null) => None,
        Some(t) => Some(parse_torification(t, &family)?),
    };
    Ok(FamilyDocument { family, torification })
}

fn parse_torification(value: &Value, fam: &ExponentialFamily) -> Result<TorificationData> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::parse("torification", "expected an object"))?;
    reject_unknown(obj, &["T", "c_offset", "A"], "torification")?;
    let t = matrix(obj.get("T"), "torification.T")?.ok_or_else(|| Error::parse("torification.T", "missing"))?;
    if t.rows() != fam.n() || t.cols() != fam.m() {
        return Err(Error::parse(
            "torification.T",
            format!("expected {}x{} matrix, got {}x{}", fam.n(), fam.m(), t.rows(), t.cols()),
        ));
    }
    let c_offset = match string_array(obj.get("c_offset"), "torification.c_offset")? {
        Some(c) => {
            check_len("torification.c_offset", fam.n(), c.len())?;
            RationalVector::parse("torification.c_offset", &c)?
        }
        None => RationalVector::zeros(fam.n()),
    };
    let a = match obj.get("A") {
        None | Some(Value::Null) => AffineMap::translation(&c_offset - &fam.f_table()[fam.m()]),
        Some(Value::Object(a)) => {
            reject_unknown(a, &["linear", "offset"], "torification.A")?;
            let linear = matrix(a.get("linear"), "torification.A.linear")?
                .ok_or_else(|| Error::parse("torification.A.linear", "missing"))?;
            let offset = string_array(a.get("offset"), "torification.A.offset")?
                .ok_or_else(|| Error::parse("torification.A.offset", "missing"))?;
            let offset = RationalVector::parse("torification.A.offset", &offset)?;
            AffineMap::new(linear, offset).map_err(|e| Error::parse("torification.A", e.to_string()))?
        }
        Some(_) => return Err(Error::parse("torification.A", "expected an object")),
    };
    TorificationData::new(t, c_offset, a).map_err(|e| Error::parse("torification", e.to_string()))
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], at: &str) -> Result<()> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            let field = if at == "$" { key.clone() } else { format!("{at}.{key}") };
            return Err(Error::parse(field, "unknown key"));
        }
    }
    Ok(())
}

fn check_len(field: &str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::parse(
            field,
            format!("expected {expected} entries (one per label), got {got}"),
        ));
    }
    Ok(())
}

fn string_array(value: Option<&Value>, field: &str) -> Result<Option<Vec<String>>> {
    let Some(value) = value else {
        return Ok(None);
    };
    let items = value
        .as_array()
        .ok_or_else(|| Error::parse(field, "expected an array of strings"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::parse(format!("{field}[{i}]"), "expected a string"))
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

fn matrix(value: Option<&Value>, field: &str) -> Result<Option<RationalMatrix>> {
    let Some(value) = value else {
        return Ok(None);
    };
    let rows = value
        .as_array()
        .ok_or_else(|| Error::parse(field, "expected an array of arrays"))?;
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let f = format!("{field}[{i}]");
            let strings = string_array(Some(row), &f)?.expect("present");
            strings
                .iter()
                .enumerate()
                .map(|(j, s)| parse_rational(&format!("{f}[{j}]"), s))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    RationalMatrix::from_rows(parsed)
        .map(Some)
        .map_err(|e| Error::parse(field, e.to_string()))
}

/// Serializes a family in the file format (no torification section).
pub fn family_to_json(fam: &ExponentialFamily) -> Value {
    let c: Vec<String> = fam.c_table().iter().map(|c| c.linear().to_string()).collect();
    let mut obj = Map::new();
    obj.insert("labels".into(), json!(fam.space().labels()));
    obj.insert("C".into(), json!(c));
    if fam.c_table().iter().any(|c| !c.log_argument().is_one()) {
        let logs: Vec<String> = fam.c_table().iter().map(|c| c.log_argument().to_string()).collect();
        obj.insert("C_log_of".into(), json!(logs));
    }
    let f: Vec<Vec<String>> = fam.f_table().iter().map(RationalVector::to_strings).collect();
    obj.insert("F".into(), json!(f));
    Value::Object(obj)
}
