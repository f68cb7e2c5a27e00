//! Pass/fail reports for identity checks.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), checks: Vec::new() }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        let detail = if passed { String::new() } else { detail.into() };
        self.checks.push(Check { name: name.into(), passed, detail });
    }

    /// Records an equality of displayable values; on failure the detail shows
    /// both sides.
    pub fn check_eq<T: PartialEq + fmt::Display>(&mut self, name: impl Into<String>, lhs: &T, rhs: &T) {
        let passed = lhs == rhs;
        let detail = if passed { String::new() } else { format!("lhs = {lhs}, rhs = {rhs}") };
        self.checks.push(Check { name: name.into(), passed, detail });
    }

    pub fn merge(&mut self, other: Report) {
        for mut c in other.checks {
            c.name = format!("{}: {}", other.title, c.name);
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {}", self.title)?;
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "[{tag}] {}", c.name)?;
            } else {
                writeln!(f, "[{tag}] {} ({})", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}
