use serde::{Deserialize, Serialize};

/// One compared quantity. `ok` records whether `actual` matched `expected`
/// (exactly, or within the check's tolerance for numeric checks).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub description: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub passed: bool,
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        VerificationReport {
            name: name.into(),
            passed: true,
            witnesses: Vec::new(),
            max_error: None,
            notes: Vec::new(),
        }
    }

    pub fn push(
        &mut self,
        description: impl Into<String>,
        expected: impl Into<String>,
        actual: impl Into<String>,
        ok: bool,
    ) {
        self.passed &= ok;
        self.witnesses.push(Witness {
            description: description.into(),
            expected: expected.into(),
            actual: actual.into(),
            ok,
        });
    }

    /// Records an exact comparison.
    pub fn push_eq<T: PartialEq + ToString>(&mut self, description: impl Into<String>, expected: &T, actual: &T) {
        let ok = expected == actual;
        self.push(description, expected.to_string(), actual.to_string(), ok);
    }

    /// Records `|expected - actual| <= tol`.
    pub fn push_close(&mut self, description: impl Into<String>, expected: f64, actual: f64, tol: f64) {
        let err = (expected - actual).abs();
        self.max_error = Some(self.max_error.map_or(err, |m| m.max(err)));
        self.push(description, expected.to_string(), actual.to_string(), err <= tol);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Largest numeric deviation seen by `push_close`, zero if none.
    pub fn max_abs_error(&self) -> f64 {
        self.max_error.unwrap_or(0.0)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Witness> {
        self.witnesses.iter().filter(|w| !w.ok)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
