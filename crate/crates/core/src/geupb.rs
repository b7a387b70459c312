//! Bipartite unextendibility across every cut, and tensor products of
//! multipartite UPBs.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::ProjQubit;
use crate::product::ProductVectorSet;
use crate::unextend::{find_extension_with, group, ExtensionWitness, GroupedSet, PartySplit, SearchOptions};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutVerdict {
    Upb,
    ExtendibleWith(ExtensionWitness),
    /// A cut with a single qubit on one side; never a UPB, witness attached.
    TwoByNAutoFail(ExtensionWitness),
}

impl CutVerdict {
    pub fn is_upb(&self) -> bool {
        matches!(self, CutVerdict::Upb)
    }

    pub fn witness(&self) -> Option<&ExtensionWitness> {
        match self {
            CutVerdict::Upb => None,
            CutVerdict::ExtendibleWith(w) | CutVerdict::TwoByNAutoFail(w) => Some(w),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeVerdict {
    /// Keyed by cut label, e.g. `"AB:CD"`.
    pub per_bipartition: BTreeMap<String, CutVerdict>,
    pub is_geupb: bool,
    /// Every cut with both sides of dimension at least four is a UPB
    /// (vacuously true when there is no such cut).
    pub is_almost_ge: bool,
}

/// Checks every bipartition of the qubits. Cuts with one qubit on a side
/// get the constructive witness of [`two_by_n_witness`].
pub fn ge_check(set: &ProductVectorSet) -> Result<GeVerdict> {
    set.require_orthogonal()?;
    if set.len() >= set.dim() {
        return Err(Error::SetTooLarge { rows: set.len(), dim: set.dim() });
    }
    let mut per_bipartition = BTreeMap::new();
    let mut is_almost_ge = true;
    for cut in PartySplit::bipartitions(set.n_qubits()) {
        let g = group(set, &cut)?;
        let small_side = cut.parties().iter().any(|p| p.len() == 1);
        let verdict = if small_side {
            CutVerdict::TwoByNAutoFail(two_by_n_witness(set, &g)?)
        } else {
            match find_extension_with(&g, SearchOptions::default())?.0 {
                None => CutVerdict::Upb,
                Some(w) => {
                    is_almost_ge = false;
                    CutVerdict::ExtendibleWith(w)
                }
            }
        };
        per_bipartition.insert(cut.to_string(), verdict);
    }
    let is_geupb = per_bipartition.values().all(CutVerdict::is_upb);
    Ok(GeVerdict { per_bipartition, is_geupb, is_almost_ge })
}

/// Witness for a cut with a single qubit `q` on one side: for the class of
/// rows sharing one value on `q` (tried in row order), the qubit side takes
/// the orthogonal state and kills that class; the other side is then solved
/// against the remaining rows. Falls back to the generic search if no class
/// leaves a solvable remainder.
pub fn two_by_n_witness(set: &ProductVectorSet, g: &GroupedSet) -> Result<ExtensionWitness> {
    let split = g.split();
    let qp = split.parties().iter().position(|p| p.len() == 1).ok_or_else(|| {
        Error::BadSplit(format!("{split} has no single-qubit side"))
    })?;
    assert_eq!(split.n_parties(), 2, "two_by_n_witness expects a bipartition");
    let other = 1 - qp;
    let q = split.parties()[qp][0];
    let mut tried: Vec<&ProjQubit> = Vec::new();
    for row in set.rows() {
        let value = &row[q];
        if tried.contains(&value) {
            continue;
        }
        tried.push(value);
        let assignment: Vec<usize> = set.rows().iter().map(|r| if &r[q] == value { qp } else { other }).collect();
        let rest: Vec<_> = g
            .rows()
            .iter()
            .zip(&assignment)
            .filter(|(_, &p)| p == other)
            .map(|(r, _)| r[other].conj().entries().to_vec())
            .collect();
        let dim = split.dims()[other];
        let null = if rest.is_empty() {
            crate::exact::CMatrix::identity(dim).columns()
        } else {
            crate::exact::CMatrix::from_rows(&rest).nullspace()
        };
        let Some(b) = null.first() else { continue };
        let mut vectors = vec![b.projective_canonical(); 2];
        vectors[qp] = value.orthogonal().vector();
        let w = ExtensionWitness { split: split.clone(), assignment, vectors };
        if w.verify(g) {
            return Ok(w);
        }
    }
    find_extension_with(g, SearchOptions::default())?
        .0
        .ok_or_else(|| Error::BadSplit(format!("no product vector orthogonal to the set across {split}")))
}

fn arity(set: &ProductVectorSet, m: usize) -> Result<usize> {
    if m == 0 || set.n_qubits() % m != 0 {
        return Err(Error::ArityMismatch(format!("{} qubits cannot form {m} equal parties", set.n_qubits())));
    }
    Ok(set.n_qubits() / m)
}

/// All `|S| * |T|` rows `s (x) t`, regrouped so that party `k` of the
/// output holds party `k` of `s` followed by party `k` of `t`. Rows run
/// over `s` first, then `t`.
pub fn tensor_upb(s: &ProductVectorSet, t: &ProductVectorSet, m: usize) -> Result<ProductVectorSet> {
    let a = arity(s, m)?;
    let b = arity(t, m)?;
    let mut rows = Vec::with_capacity(s.len() * t.len());
    for rs in s.rows() {
        for rt in t.rows() {
            let mut row = Vec::with_capacity(m * (a + b));
            for k in 0..m {
                row.extend_from_slice(&rs[k * a..(k + 1) * a]);
                row.extend_from_slice(&rt[k * b..(k + 1) * b]);
            }
            rows.push(row);
        }
    }
    ProductVectorSet::new(m * (a + b), rows)
}

/// The split matching [`tensor_upb`]'s layout.
pub fn tensor_split(s: &ProductVectorSet, t: &ProductVectorSet, m: usize) -> Result<PartySplit> {
    Ok(PartySplit::uniform(m, arity(s, m)? + arity(t, m)?))
}

/// Rotates the `m` parties one step: new party `k` is old party `k + 1`,
/// so `(A, B, C)` becomes `(B, C, A)`.
pub fn cyclic_relabel(set: &ProductVectorSet, m: usize) -> Result<ProductVectorSet> {
    let a = arity(set, m)?;
    let n = set.n_qubits();
    let perm: Vec<usize> = (0..n).map(|q| (q + a) % n).collect();
    set.permute_qubits(&perm)
}

/// `S (x) S_rot (x) S_rot^2` for an `m`-partite set: the three-factor
/// construction. Its unextendibility search is far beyond the default
/// budget; it is built, not verified.
pub fn triple_tensor(s: &ProductVectorSet, m: usize) -> Result<ProductVectorSet> {
    let s1 = cyclic_relabel(s, m)?;
    let s2 = cyclic_relabel(&s1, m)?;
    let st = tensor_upb(s, &s1, m)?;
    tensor_upb(&st, &s2, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis_pair() -> ProductVectorSet {
        ProductVectorSet::new(2, vec![vec![ProjQubit::zero(), ProjQubit::zero()], vec![ProjQubit::one(), ProjQubit::one()]])
            .unwrap()
    }

    #[test]
    fn tensor_size_and_layout() {
        let s = basis_pair();
        let t = tensor_upb(&s, &s, 2).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.n_qubits(), 4);
        // (|00>) (x) (|11>): party A = (s_A, t_A) = (0, 1)
        assert_eq!(t.row(1), &[ProjQubit::zero(), ProjQubit::one(), ProjQubit::zero(), ProjQubit::one()]);
        assert!(matches!(tensor_upb(&s, &s, 3), Err(Error::ArityMismatch(_))));
    }

    #[test]
    fn cyclic_relabel_has_order_m() {
        let s = ProductVectorSet::new(3, vec![vec![ProjQubit::zero(), ProjQubit::one(), ProjQubit::zero()]]).unwrap();
        let once = cyclic_relabel(&s, 3).unwrap();
        assert_eq!(once.row(0), &[ProjQubit::one(), ProjQubit::zero(), ProjQubit::zero()]);
        let thrice = cyclic_relabel(&cyclic_relabel(&once, 3).unwrap(), 3).unwrap();
        assert_eq!(thrice, s);
    }
}
