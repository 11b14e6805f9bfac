use std::fmt;

/// The first instance of an identity that failed, with its witness.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Failure {
    /// Name of the violated identity, e.g. `associativity` or `anom2`.
    pub relation: String,
    /// Indices of the violating elements, morphisms or basis vectors.
    pub witness: Vec<usize>,
    /// Human readable rendering of the witness.
    pub message: String,
}

/// Outcome of an exhaustive check. `checked` counts instances examined,
/// which equals `total` on success.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Verdict {
    pub relation: String,
    pub unit: String,
    pub checked: usize,
    pub total: usize,
    pub failure: Option<Failure>,
}

impl Verdict {
    pub fn new(relation: impl Into<String>, unit: impl Into<String>) -> Self {
        Verdict {
            relation: relation.into(),
            unit: unit.into(),
            checked: 0,
            total: 0,
            failure: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    /// Record one instance; returns `false` once a failure is recorded so
    /// callers can stop early.
    pub fn record(&mut self, ok: bool, fail: impl FnOnce() -> Failure) -> bool {
        if self.failure.is_some() {
            return false;
        }
        self.checked += 1;
        if !ok {
            self.failure = Some(fail());
        }
        ok
    }

    /// Close an exhaustive sweep: every examined instance counts toward the total.
    pub fn finish(mut self) -> Self {
        self.total = self.checked;
        self
    }

    pub fn with_total(mut self, total: usize) -> Self {
        self.total = total;
        self
    }

    pub fn fail(relation: &str, unit: &str, witness: Vec<usize>, message: String) -> Self {
        Verdict {
            relation: relation.to_string(),
            unit: unit.to_string(),
            checked: 1,
            total: 1,
            failure: Some(Failure {
                relation: relation.to_string(),
                witness,
                message,
            }),
        }
    }
}

impl Failure {
    pub fn new(relation: &str, witness: Vec<usize>, message: String) -> Self {
        Failure {
            relation: relation.to_string(),
            witness,
            message,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(
                f,
                "{} holds ({}/{} {})",
                self.relation, self.checked, self.total, self.unit
            ),
            Some(fail) => write!(f, "{} violated at {}", fail.relation, fail.message),
        }
    }
}
