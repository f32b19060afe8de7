use std::fmt;

use serde::Serialize;

/// Outcome of one identity check: both sides rendered, and whether they agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub inputs: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl CheckReport {
    pub fn compare<T: PartialEq + fmt::Display>(
        check: &str,
        inputs: impl Into<String>,
        lhs: &T,
        rhs: &T,
    ) -> Self {
        CheckReport {
            check: check.to_string(),
            inputs: inputs.into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass: lhs == rhs,
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "pass" } else { "FAIL" };
        write!(f, "{verdict} {} [{}]", self.check, self.inputs)?;
        if !self.pass {
            write!(f, "\n  lhs: {}\n  rhs: {}", self.lhs, self.rhs)?;
        }
        Ok(())
    }
}
