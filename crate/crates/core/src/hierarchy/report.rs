//! Machine-readable verification results.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Window {
    pub genus_max: u32,
    pub deg_max: u32,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The identity being checked, in words.
    pub property: String,
    pub window: Window,
    pub passed: bool,
    /// The offending residue when the check fails.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per check.
    pub fn to_plain(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!(
                "{} {} [{}] (genus <= {}, arity <= {})",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.property,
                c.window.genus_max,
                c.window.deg_max
            ));
            if let Some(w) = &c.witness {
                s.push_str(&format!(": {w}"));
            }
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let mut r = Report::default();
        r.push(Check {
            name: "x".into(),
            property: "p".into(),
            window: Window { genus_max: 1, deg_max: 3 },
            passed: true,
            witness: None,
        });
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["checks"][0]["window"]["deg_max"], 3);
        assert!(v["checks"][0].get("witness").is_none());
        assert!(r.all_passed());
    }
}
