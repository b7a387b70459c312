use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Entry of a UOM grid: a constant ray or a vector variable, possibly primed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Const0,
    Const1,
    Var(String),
    VarPrime(String),
}

impl Label {
    pub fn var(name: &str) -> Self {
        Label::Var(name.to_string())
    }

    /// The orthogonal label; `0' = 1` and `1' = 0`.
    pub fn prime(&self) -> Self {
        match self {
            Label::Const0 => Label::Const1,
            Label::Const1 => Label::Const0,
            Label::Var(n) => Label::VarPrime(n.clone()),
            Label::VarPrime(n) => Label::Var(n.clone()),
        }
    }

    pub fn var_name(&self) -> Option<&str> {
        match self {
            Label::Var(n) | Label::VarPrime(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_const(&self) -> bool {
        matches!(self, Label::Const0 | Label::Const1)
    }

    /// Replaces variable `name` by `with` (and `name'` by `with'`).
    pub fn substitute(&self, name: &str, with: &Label) -> Label {
        match self {
            Label::Var(n) if n == name => with.clone(),
            Label::VarPrime(n) if n == name => with.prime(),
            other => other.clone(),
        }
    }

    /// Key shared by `x` and `x'`; the constants share one key.
    pub(crate) fn pair_key(&self) -> Option<&str> {
        match self {
            Label::Const0 | Label::Const1 => None,
            Label::Var(n) | Label::VarPrime(n) => Some(n),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Const0 => write!(f, "0"),
            Label::Const1 => write!(f, "1"),
            Label::Var(n) => write!(f, "{n}"),
            Label::VarPrime(n) => write!(f, "{n}'"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let (base, primes) = {
            let base = s.trim_end_matches('\'');
            (base, s.len() - base.len())
        };
        let label = match base {
            "0" => Label::Const0,
            "1" => Label::Const1,
            "" => return Err(bad_label(s)),
            name if name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                && name.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) =>
            {
                Label::Var(name.to_string())
            }
            _ => return Err(bad_label(s)),
        };
        Ok(if primes % 2 == 1 { label.prime() } else { label })
    }
}

fn bad_label(s: &str) -> Error {
    Error::Parse { location: "label".into(), message: format!("invalid label {s:?}") }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_prime() {
        assert_eq!("0".parse::<Label>().unwrap(), Label::Const0);
        assert_eq!("0'".parse::<Label>().unwrap(), Label::Const1);
        assert_eq!("g3'".parse::<Label>().unwrap(), Label::VarPrime("g3".into()));
        assert_eq!("g3''".parse::<Label>().unwrap(), Label::var("g3"));
        assert!("'".parse::<Label>().is_err());
        assert!("3x".parse::<Label>().is_err());
        assert_eq!(Label::var("x").prime().prime(), Label::var("x"));
    }

    #[test]
    fn substitution_respects_primes() {
        let l = Label::VarPrime("i3".into());
        assert_eq!(l.substitute("i3", &Label::VarPrime("i4".into())), Label::var("i4"));
        assert_eq!(l.substitute("i3", &Label::Const0), Label::Const1);
        assert_eq!(l.substitute("g3", &Label::Const0), l);
    }
}
