use serde::Serialize;

/// One named check inside a [`ValidationReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub violation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Named violation magnitudes; passes iff every check is within its tolerance.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self {
            checks: Vec::new(),
            passed: true,
        }
    }

    pub fn push(&mut self, name: impl Into<String>, violation: f64, tolerance: f64) {
        // NaN never passes
        let passed = violation < tolerance;
        self.passed &= passed;
        self.checks.push(Check {
            name: name.into(),
            violation,
            tolerance,
            passed,
        });
    }

    /// Records a boolean check; a failure shows up as violation 1.
    pub fn push_flag(&mut self, name: impl Into<String>, ok: bool) {
        self.push(name, if ok { 0.0 } else { 1.0 }, 0.5);
    }

    pub fn violation(&self, name: &str) -> Option<f64> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.violation)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}
