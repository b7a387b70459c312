//! Exact values on the wire: rationals as `"num/den"` strings (a bare
//! integer when the denominator is one), Gaussian rationals as
//! `{"re", "im"}`.

use serde::{Deserialize, Serialize};
use upb_core::exact::{parse_rat, rat_to_string};
use upb_core::unextend::{ExtensionWitness, OrthogonalSolutionSet, SolutionFamily};
use upb_core::{CMatrix, GaussRat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactComplex {
    pub re: String,
    pub im: String,
}

impl From<&GaussRat> for ExactComplex {
    fn from(z: &GaussRat) -> Self {
        ExactComplex { re: rat_to_string(&z.re), im: rat_to_string(&z.im) }
    }
}

impl ExactComplex {
    pub fn to_gauss(&self) -> Option<GaussRat> {
        Some(GaussRat::new(parse_rat(&self.re)?, parse_rat(&self.im)?))
    }
}

pub type ExactVector = Vec<ExactComplex>;

/// One product vector: a canonical vector per party, in split order.
pub type Solution = Vec<ExactVector>;

pub fn vector(v: &CMatrix) -> ExactVector {
    v.entries().iter().map(ExactComplex::from).collect()
}

pub fn parse_vector(v: &[ExactComplex]) -> Option<CMatrix> {
    Some(CMatrix::column(v.iter().map(ExactComplex::to_gauss).collect::<Option<Vec<_>>>()?))
}

pub fn solution(parts: &[CMatrix]) -> Solution {
    parts.iter().map(vector).collect()
}

pub fn witness(w: &ExtensionWitness) -> Solution {
    solution(&w.vectors)
}

pub fn solutions(sol: &OrthogonalSolutionSet) -> Vec<Solution> {
    sol.vectors.iter().map(|p| solution(p)).collect()
}

/// Nullspace bases of a positive-dimensional family, per party.
pub fn family(f: &SolutionFamily) -> Vec<Vec<ExactVector>> {
    f.bases.iter().map(|b| b.iter().map(vector).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use upb_core::exact::rat;

    #[test]
    fn complex_roundtrip() {
        let z = GaussRat::new(rat(-3, 4), rat(5, 1));
        let w = ExactComplex::from(&z);
        assert_eq!(w, ExactComplex { re: "-3/4".into(), im: "5".into() });
        assert_eq!(w.to_gauss(), Some(z));
        assert_eq!(ExactComplex { re: "1/0".into(), im: "0".into() }.to_gauss(), None);
    }

    #[test]
    fn vector_roundtrip() {
        let v = CMatrix::column(vec![GaussRat::from_ints(1, 0), GaussRat::new(rat(2, 7), rat(-1, 3))]);
        let json = serde_json::to_string(&vector(&v)).unwrap();
        let back: ExactVector = serde_json::from_str(&json).unwrap();
        assert_eq!(parse_vector(&back), Some(v));
    }
}
