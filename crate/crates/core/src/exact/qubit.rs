//! Single-qubit pure states as points of the complex projective line.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::gauss::GaussRat;
use super::matrix::CMatrix;

/// `Finite(c)` is the ray of `(1, c)`, `Infinity` the ray of `(0, 1)`.
/// The label `0` is `Finite(0)` and the label `1` is `Infinity`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjQubit {
    Finite(GaussRat),
    Infinity,
}

impl ProjQubit {
    pub fn zero() -> Self {
        ProjQubit::Finite(GaussRat::zero())
    }

    pub fn one() -> Self {
        ProjQubit::Infinity
    }

    /// Ray through `(a, b)`; `None` for the zero vector.
    pub fn from_coords(a: &GaussRat, b: &GaussRat) -> Option<Self> {
        if a.is_zero() {
            if b.is_zero() {
                None
            } else {
                Some(ProjQubit::Infinity)
            }
        } else {
            Some(ProjQubit::Finite(b / a))
        }
    }

    /// Unnormalized representative with first nonzero coordinate one.
    pub fn coords(&self) -> [GaussRat; 2] {
        match self {
            ProjQubit::Finite(c) => [GaussRat::one(), c.clone()],
            ProjQubit::Infinity => [GaussRat::zero(), GaussRat::one()],
        }
    }

    pub fn vector(&self) -> CMatrix {
        CMatrix::column(self.coords().to_vec())
    }

    /// The unique ray orthogonal to `self`; an involution.
    pub fn orthogonal(&self) -> Self {
        match self {
            ProjQubit::Infinity => ProjQubit::zero(),
            ProjQubit::Finite(c) if c.is_zero() => ProjQubit::Infinity,
            // (1, c) is orthogonal to (1, -1/conj(c))
            ProjQubit::Finite(c) => ProjQubit::Finite(-c.conj().inv().expect("nonzero")),
        }
    }

    pub fn is_orthogonal_to(&self, other: &ProjQubit) -> bool {
        inner2(self, other).is_zero()
    }

    /// Applies a 2x2 matrix to the ray. Returns `None` when the matrix maps
    /// the representative to zero.
    pub fn apply(&self, op: &CMatrix) -> Option<Self> {
        let v = op.mul(&self.vector());
        ProjQubit::from_coords(v.get(0, 0), v.get(1, 0))
    }
}

/// `<p|q>` on the unnormalized representatives, conjugate-linear in `p`.
pub fn inner2(p: &ProjQubit, q: &ProjQubit) -> GaussRat {
    let [a0, a1] = p.coords();
    let [b0, b1] = q.coords();
    &(&a0.conj() * &b0) + &(&a1.conj() * &b1)
}

impl fmt::Display for ProjQubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjQubit::Infinity => write!(f, "1"),
            ProjQubit::Finite(c) if c.is_zero() => write!(f, "0"),
            ProjQubit::Finite(c) => write!(f, "(1,{c})"),
        }
    }
}

impl fmt::Debug for ProjQubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Wire form: `{"inf": true}` or `{"re": "a/b", "im": "c/d"}`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ProjQubitRepr {
    Infinity { inf: bool },
    Finite { re: String, im: String },
}

impl Serialize for ProjQubit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use super::gauss::rat_to_string;
        match self {
            ProjQubit::Infinity => ProjQubitRepr::Infinity { inf: true },
            ProjQubit::Finite(c) => ProjQubitRepr::Finite { re: rat_to_string(&c.re), im: rat_to_string(&c.im) },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjQubit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use super::gauss::parse_rat;
        use serde::de::Error;
        match ProjQubitRepr::deserialize(d)? {
            ProjQubitRepr::Infinity { .. } => Ok(ProjQubit::Infinity),
            ProjQubitRepr::Finite { re, im } => {
                let re = parse_rat(&re).ok_or_else(|| D::Error::custom(format!("bad rational {re:?}")))?;
                let im = parse_rat(&im).ok_or_else(|| D::Error::custom(format!("bad rational {im:?}")))?;
                Ok(ProjQubit::Finite(GaussRat::new(re, im)))
            }
        }
    }
}

impl Default for ProjQubit {
    fn default() -> Self {
        ProjQubit::zero()
    }
}

impl From<GaussRat> for ProjQubit {
    fn from(c: GaussRat) -> Self {
        ProjQubit::Finite(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_examples() {
        assert_eq!(ProjQubit::zero().orthogonal(), ProjQubit::Infinity);
        assert_eq!(ProjQubit::Infinity.orthogonal(), ProjQubit::zero());
        let plus = ProjQubit::Finite(GaussRat::one());
        assert_eq!(plus.orthogonal(), ProjQubit::Finite(GaussRat::from(-1)));
    }

    #[test]
    fn inner_examples() {
        assert_eq!(inner2(&ProjQubit::zero(), &ProjQubit::zero()), GaussRat::one());
        assert_eq!(inner2(&ProjQubit::zero(), &ProjQubit::Infinity), GaussRat::zero());
        let z = ProjQubit::Finite(GaussRat::from_ints(2, 1));
        assert_eq!(inner2(&z, &z), GaussRat::from(6));
    }

    #[test]
    fn from_coords_canonicalizes() {
        let q = ProjQubit::from_coords(&GaussRat::from(2), &GaussRat::from_ints(0, 4)).unwrap();
        assert_eq!(q, ProjQubit::Finite(GaussRat::from_ints(0, 2)));
        assert_eq!(ProjQubit::from_coords(&GaussRat::zero(), &GaussRat::from(3)), Some(ProjQubit::Infinity));
        assert_eq!(ProjQubit::from_coords(&GaussRat::zero(), &GaussRat::zero()), None);
    }

    #[test]
    fn serde_roundtrip() {
        let q = ProjQubit::Finite(GaussRat::from_ints(-3, 2));
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"{"re":"-3","im":"2"}"#);
        assert_eq!(serde_json::from_str::<ProjQubit>(&s).unwrap(), q);
        let inf = serde_json::to_string(&ProjQubit::Infinity).unwrap();
        assert_eq!(serde_json::from_str::<ProjQubit>(&inf).unwrap(), ProjQubit::Infinity);
    }
}
