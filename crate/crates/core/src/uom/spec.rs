use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::label::Label;
use crate::error::{Error, Result};

/// `value(subject)` must differ, as a ray, from every `value(l)` with `l` in
/// `forbidden`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub subject: Label,
    pub forbidden: Vec<Label>,
}

/// Symbolic m x n orthogonal matrix with its inequality side conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UomSpec {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub grid: Vec<Vec<Label>>,
    #[serde(default)]
    pub constraints: Vec<Constraint>,
}

/// Finding reported by [`UomSpec::lint`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LintFinding {
    /// The constraint on `subject` excludes one of the constants `0`, `1` but
    /// not the other.
    PartialConstantExclusion { subject: String, missing: String },
    /// The variable appears in the grid but has no constraint of its own.
    UnconstrainedVariable { name: String },
}

impl UomSpec {
    /// Parses and validates the JSON wire format.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: UomSpec = serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("UomSpec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let field_err = |location: String, message: String| Error::Parse { location, message };
        if self.rows == 0 || self.cols == 0 {
            return Err(field_err("rows/cols".into(), "dimensions must be positive".into()));
        }
        if self.grid.len() != self.rows {
            return Err(field_err("grid".into(), format!("{} rows, expected {}", self.grid.len(), self.rows)));
        }
        for (r, row) in self.grid.iter().enumerate() {
            if row.len() != self.cols {
                return Err(field_err(format!("grid[{r}]"), format!("{} entries, expected {}", row.len(), self.cols)));
            }
        }
        let vars = self.variables();
        for c in &self.constraints {
            for l in std::iter::once(&c.subject).chain(&c.forbidden) {
                if let Some(n) = l.var_name() {
                    if !vars.contains(n) {
                        return Err(Error::UnknownVariable(n.to_string()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Names of all vector variables in the grid, sorted.
    pub fn variables(&self) -> BTreeSet<String> {
        self.grid.iter().flatten().filter_map(|l| l.var_name().map(str::to_string)).collect()
    }

    pub fn column(&self, c: usize) -> Vec<&Label> {
        self.grid.iter().map(|r| &r[c]).collect()
    }

    /// Forces `value(name) = with`. Inequality atoms that the identification
    /// would contradict are deleted first, and constraints left with no
    /// atoms disappear.
    pub fn force_equal(&self, name: &str, with: &Label) -> UomSpec {
        let subst = |l: &Label| l.substitute(name, with);
        let grid = self.grid.iter().map(|r| r.iter().map(subst).collect()).collect();
        let mut constraints = Vec::new();
        for c in &self.constraints {
            let subject = subst(&c.subject);
            let mut forbidden: Vec<Label> = Vec::new();
            for f in c.forbidden.iter().map(subst) {
                if f != subject && !forbidden.contains(&f) {
                    forbidden.push(f);
                }
            }
            if forbidden.is_empty() || subject.is_const() && forbidden.iter().all(Label::is_const) {
                continue;
            }
            constraints.push(Constraint { subject, forbidden });
        }
        UomSpec {
            name: format!("{}[{}={}]", self.name, name, with),
            rows: self.rows,
            cols: self.cols,
            grid,
            constraints,
        }
    }

    /// Every `(subject variable, forbidden label)` inequality atom, in order.
    pub fn inequality_atoms(&self) -> Vec<(String, Label)> {
        let mut out = Vec::new();
        for c in &self.constraints {
            let Some(name) = c.subject.var_name() else { continue };
            for f in &c.forbidden {
                // express the atom as `name = label` so force_equal can apply it
                let target = if matches!(c.subject, Label::VarPrime(_)) { f.prime() } else { f.clone() };
                out.push((name.to_string(), target));
            }
        }
        out
    }

    /// Flags constraints that look incomplete next to their siblings. The
    /// catalog is never repaired automatically.
    pub fn lint(&self) -> Vec<LintFinding> {
        let mut out = Vec::new();
        let mut constrained = BTreeSet::new();
        for c in &self.constraints {
            if let Some(n) = c.subject.var_name() {
                constrained.insert(n.to_string());
            }
            let has0 = c.forbidden.contains(&Label::Const0);
            let has1 = c.forbidden.contains(&Label::Const1);
            if has0 != has1 {
                out.push(LintFinding::PartialConstantExclusion {
                    subject: c.subject.to_string(),
                    missing: if has0 { "1".into() } else { "0".into() },
                });
            }
        }
        for v in self.variables() {
            if !constrained.contains(&v) {
                out.push(LintFinding::UnconstrainedVariable { name: v });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> &'static str {
        r#"{"name":"t","rows":2,"cols":2,
            "grid":[["0","x"],["1","x'"]],
            "constraints":[{"subject":"x","forbidden":["0","1"]}]}"#
    }

    #[test]
    fn parse_roundtrip() {
        let s = UomSpec::from_json(tiny()).unwrap();
        assert_eq!(s.grid[1][1], Label::VarPrime("x".into()));
        assert_eq!(UomSpec::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn ragged_grid_is_a_parse_error() {
        let text = r#"{"name":"t","rows":1,"cols":4,"grid":[["0","0","0"]]}"#;
        match UomSpec::from_json(text) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "grid[0]"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dangling_constraint_variable() {
        let text = r#"{"name":"t","rows":1,"cols":1,"grid":[["x"]],
            "constraints":[{"subject":"x","forbidden":["q"]}]}"#;
        assert_eq!(UomSpec::from_json(text), Err(Error::UnknownVariable("q".into())));
    }

    #[test]
    fn json_syntax_error_has_position() {
        match UomSpec::from_json("{\n\"name\": }") {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("line 2")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn force_equal_drops_contradicted_atom() {
        let text = r#"{"name":"t","rows":2,"cols":1,"grid":[["a"],["b"]],
            "constraints":[{"subject":"a","forbidden":["0","1","b"]}]}"#;
        let s = UomSpec::from_json(text).unwrap();
        let f = s.force_equal("a", &Label::var("b"));
        assert_eq!(f.grid, vec![vec![Label::var("b")], vec![Label::var("b")]]);
        assert_eq!(f.constraints, vec![Constraint { subject: Label::var("b"), forbidden: vec![Label::Const0, Label::Const1] }]);
        let g = s.force_equal("a", &Label::Const0);
        assert_eq!(g.constraints[0].forbidden, vec![Label::Const1, Label::var("b")]);
    }
}
