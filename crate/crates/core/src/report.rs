//! Outcomes of numerical checks and the exit codes derived from them.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    /// The hypotheses were never met, so the check said nothing.
    Vacuous,
    /// Expected to pass but explained by a known limitation, such as a lower bound that is not sharp.
    SoftFail,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Vacuous => "vacuous",
            Status::SoftFail => "soft-fail",
            Status::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub measured: f64,
    pub bound: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, measured: f64, bound: f64) -> Self {
        Check { name: name.into(), status, measured, bound, detail: String::new() }
    }

    /// Pass iff `measured <= bound`.
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        let status = if measured <= bound { Status::Pass } else { Status::Fail };
        Check::new(name, status, measured, bound)
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<9} {:<40} measured {:<12.6e} bound {:.6e}", self.status, self.name, self.measured, self.bound)?;
        if !self.detail.is_empty() {
            write!(f, "  {}", self.detail)?;
        }
        Ok(())
    }
}

/// Worst status of a set of checks; an empty set passes.
pub fn worst(checks: &[Check]) -> Status {
    checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass)
}

/// 0 when everything passed or was vacuous, 1 on any hard failure, 3 on soft failures only.
pub fn exit_code(checks: &[Check]) -> i32 {
    match worst(checks) {
        Status::Pass | Status::Vacuous => 0,
        Status::SoftFail => 3,
        Status::Fail => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let pass = Check::at_most("a", 1.0, 2.0);
        let fail = Check::at_most("b", 3.0, 2.0);
        let soft = Check::new("c", Status::SoftFail, 0.0, 0.0);
        assert_eq!(exit_code(&[]), 0);
        assert_eq!(exit_code(std::slice::from_ref(&pass)), 0);
        assert_eq!(exit_code(&[pass.clone(), soft.clone()]), 3);
        assert_eq!(exit_code(&[soft, fail, pass]), 1);
    }

    #[test]
    fn status_names() {
        assert_eq!(Status::SoftFail.to_string(), "soft-fail");
        let c = Check::new("x", Status::Vacuous, 1.0, 2.0);
        assert!(!c.passed());
        assert!(c.to_string().starts_with("vacuous"));
    }
}
