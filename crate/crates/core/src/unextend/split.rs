use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An ordered grouping of qubits (0-based indices) into parties.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartySplit {
    parties: Vec<Vec<usize>>,
}

fn letter(q: usize) -> char {
    (b'A' + q as u8) as char
}

impl PartySplit {
    /// Checks that `parties` is a disjoint cover of `0..n_qubits` with no
    /// empty party.
    pub fn new(parties: Vec<Vec<usize>>, n_qubits: usize) -> Result<Self> {
        let mut seen = vec![false; n_qubits];
        for p in &parties {
            if p.is_empty() {
                return Err(Error::BadSplit("empty party".into()));
            }
            for &q in p {
                if q >= n_qubits {
                    return Err(Error::BadSplit(format!("qubit {} outside {n_qubits} qubits", letter(q))));
                }
                if seen[q] {
                    return Err(Error::BadSplit(format!("qubit {} appears twice", letter(q))));
                }
                seen[q] = true;
            }
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(Error::BadSplit(format!("qubit {} is not covered", letter(q))));
        }
        Ok(PartySplit { parties })
    }

    /// Parses `"AB:CD"`, `"A|BCD"`, `"A:B:CD"`; a string with no separator,
    /// such as `"ABCD"`, puts every qubit in its own party.
    pub fn parse(s: &str, n_qubits: usize) -> Result<Self> {
        let s = s.trim();
        let groups: Vec<&str> = if s.contains([':', '|']) {
            s.split([':', '|']).collect()
        } else {
            s.char_indices().map(|(i, c)| &s[i..i + c.len_utf8()]).collect()
        };
        let mut parties = Vec::new();
        for g in groups {
            let mut party = Vec::new();
            for c in g.chars() {
                if !c.is_ascii_uppercase() {
                    return Err(Error::BadSplit(format!("unexpected character {c:?} in {s:?}")));
                }
                party.push((c as u8 - b'A') as usize);
            }
            parties.push(party);
        }
        PartySplit::new(parties, n_qubits)
    }

    /// Every qubit its own party.
    pub fn finest(n_qubits: usize) -> Self {
        PartySplit { parties: (0..n_qubits).map(|q| vec![q]).collect() }
    }

    /// `m` parties of `arity` consecutive qubits each.
    pub fn uniform(m: usize, arity: usize) -> Self {
        PartySplit { parties: (0..m).map(|k| (k * arity..(k + 1) * arity).collect()).collect() }
    }

    pub fn four_qubit() -> Self {
        Self::finest(4)
    }

    pub fn ab_cd() -> Self {
        PartySplit { parties: vec![vec![0, 1], vec![2, 3]] }
    }

    pub fn ac_bd() -> Self {
        PartySplit { parties: vec![vec![0, 2], vec![1, 3]] }
    }

    pub fn ad_bc() -> Self {
        PartySplit { parties: vec![vec![0, 3], vec![1, 2]] }
    }

    /// The 2 x 2 x 4 split `A:B:CD`.
    pub fn a_b_cd() -> Self {
        PartySplit { parties: vec![vec![0], vec![1], vec![2, 3]] }
    }

    /// All two-party splits of `n_qubits`; the party holding qubit `A` comes
    /// first. Ordered by the bitmask of the second party.
    pub fn bipartitions(n_qubits: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for mask in 1..(1usize << (n_qubits - 1)) {
            let second: Vec<usize> = (1..n_qubits).filter(|&q| mask & (1 << (q - 1)) != 0).collect();
            let first: Vec<usize> = (0..n_qubits).filter(|q| !second.contains(q)).collect();
            out.push(PartySplit { parties: vec![first, second] });
        }
        out
    }

    pub fn parties(&self) -> &[Vec<usize>] {
        &self.parties
    }

    pub fn n_parties(&self) -> usize {
        self.parties.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.parties.iter().map(Vec::len).sum()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parties.iter().map(|p| 1 << p.len()).collect()
    }

    /// Reorders the qubits: party entries `q` become `perm[q]`. Used to
    /// follow a qubit permutation of the underlying set.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        PartySplit { parties: self.parties.iter().map(|p| p.iter().map(|&q| perm[q]).collect()).collect() }
    }

    /// Label with the given separator, e.g. `"A|BCD"`.
    pub fn label_with(&self, sep: &str) -> String {
        self.parties
            .iter()
            .map(|p| p.iter().map(|&q| letter(q)).collect::<String>())
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl fmt::Display for PartySplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label_with(":"))
    }
}

impl FromStr for PartySplit {
    type Err = Error;

    /// Parses with the qubit count implied by the highest letter used.
    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().filter(char::is_ascii_uppercase).map(|c| (c as u8 - b'A') as usize + 1).max().unwrap_or(0);
        PartySplit::parse(s, n)
    }
}

impl Serialize for PartySplit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PartySplit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(PartySplit::parse("AB:CD", 4).unwrap(), PartySplit::ab_cd());
        assert_eq!(PartySplit::parse("ABCD", 4).unwrap(), PartySplit::four_qubit());
        assert_eq!(PartySplit::parse("A:B:C:D", 4).unwrap(), PartySplit::four_qubit());
        assert_eq!(PartySplit::parse("A:B:CD", 4).unwrap(), PartySplit::a_b_cd());
        assert_eq!(PartySplit::parse("A|BCD", 4).unwrap().dims(), vec![2, 8]);
        assert!(PartySplit::parse("AB:BD", 4).is_err());
        assert!(PartySplit::parse("AB:C", 4).is_err());
        assert!(PartySplit::parse("ab:cd", 4).is_err());
    }

    #[test]
    fn seven_bipartitions_of_four_qubits() {
        let b = PartySplit::bipartitions(4);
        assert_eq!(b.len(), 7);
        let labels: Vec<String> = b.iter().map(|s| s.label_with("|")).collect();
        assert!(labels.contains(&"A|BCD".to_string()));
        assert!(labels.contains(&"AB|CD".to_string()));
        assert!(labels.contains(&"ACD|B".to_string()));
    }

    #[test]
    fn display_roundtrip() {
        let s = PartySplit::ac_bd();
        assert_eq!(s.to_string(), "AC:BD");
        assert_eq!(s.to_string().parse::<PartySplit>().unwrap(), s);
    }
}
