//! Concrete sets of multiqubit product vectors.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{inner2, CMatrix, GaussRat, ProjQubit};

/// A list of n-qubit product vectors, each stored as its per-qubit rays.
/// Row `i` is the UOM row `i + 1`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ProductVectorSet {
    n_qubits: usize,
    rows: Vec<Vec<ProjQubit>>,
}

impl ProductVectorSet {
    /// Rejects rows of the wrong length and repeated rows.
    pub fn new(n_qubits: usize, rows: Vec<Vec<ProjQubit>>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::DimensionMismatch("a product vector needs at least one qubit".into()));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != n_qubits) {
            return Err(Error::DimensionMismatch(format!(
                "row {} has {} qubits, expected {n_qubits}",
                bad + 1,
                rows[bad].len()
            )));
        }
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                if rows[i] == rows[j] {
                    return Err(Error::DuplicateRows(i + 1, j + 1));
                }
            }
        }
        Ok(ProductVectorSet { n_qubits, rows })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Hilbert-space dimension `2^n`.
    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn rows(&self) -> &[Vec<ProjQubit>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[ProjQubit] {
        &self.rows[i]
    }

    pub fn column(&self, q: usize) -> Vec<&ProjQubit> {
        self.rows.iter().map(|r| &r[q]).collect()
    }

    /// Inner product of rows `i` and `j` (0-based): the product of the
    /// per-qubit inner products.
    pub fn inner(&self, i: usize, j: usize) -> GaussRat {
        let mut acc = GaussRat::one();
        for (a, b) in self.rows[i].iter().zip(&self.rows[j]) {
            let s = inner2(a, b);
            if s.is_zero() {
                return s;
            }
            acc = &acc * &s;
        }
        acc
    }

    /// First pair of non-orthogonal rows, 0-based, in row-major order.
    pub fn first_non_orthogonal_pair(&self) -> Option<(usize, usize)> {
        for i in 0..self.rows.len() {
            for j in i + 1..self.rows.len() {
                if !self.inner(i, j).is_zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn require_orthogonal(&self) -> Result<()> {
        match self.first_non_orthogonal_pair() {
            Some((i, j)) => Err(Error::NotOrthogonal(i + 1, j + 1)),
            None => Ok(()),
        }
    }

    /// The full `2^n`-dimensional (unnormalized) ket of row `i`.
    pub fn row_vector(&self, i: usize) -> CMatrix {
        kron_qubits(self.rows[i].iter())
    }

    /// Removes row `i` (1-based), keeping the order of the others.
    pub fn drop_row(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.rows.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.rows.len() });
        }
        let mut rows = self.rows.clone();
        rows.remove(i - 1);
        Ok(ProductVectorSet { n_qubits: self.n_qubits, rows })
    }

    /// New qubit `k` is old qubit `perm[k]`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self> {
        check_perm(perm, self.n_qubits)?;
        let rows = self.rows.iter().map(|r| perm.iter().map(|&p| r[p].clone()).collect()).collect();
        Ok(ProductVectorSet { n_qubits: self.n_qubits, rows })
    }

    /// New row `k` is old row `perm[k]`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        check_perm(perm, self.rows.len())?;
        let rows = perm.iter().map(|&p| self.rows[p].clone()).collect();
        Ok(ProductVectorSet { n_qubits: self.n_qubits, rows })
    }

    /// Applies an invertible 2x2 matrix to one qubit of every row.
    pub fn apply_local(&self, qubit: usize, op: &CMatrix) -> Result<Self> {
        if qubit >= self.n_qubits || op.rows() != 2 || op.cols() != 2 {
            return Err(Error::DimensionMismatch(format!("local operator on qubit {qubit}")));
        }
        let mut rows = self.rows.clone();
        for r in rows.iter_mut() {
            r[qubit] = r[qubit]
                .apply(op)
                .ok_or_else(|| Error::DimensionMismatch("local operator is singular".into()))?;
        }
        ProductVectorSet::new(self.n_qubits, rows)
    }
}

pub(crate) fn kron_qubits<'a>(qubits: impl Iterator<Item = &'a ProjQubit>) -> CMatrix {
    qubits.fold(CMatrix::column(vec![GaussRat::one()]), |acc, q| acc.kron(&q.vector()))
}

fn check_perm(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::DimensionMismatch(format!("permutation of length {} for {n} items", perm.len())));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::DimensionMismatch(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Scalar multiples of the unitaries used as exact local operations.
pub mod local_ops {
    use super::*;

    /// Bit flip `|0> <-> |1>`.
    pub fn flip() -> CMatrix {
        CMatrix::from_rows(&[vec![GaussRat::zero(), GaussRat::one()], vec![GaussRat::one(), GaussRat::zero()]])
    }

    /// Phase `diag(1, i)`.
    pub fn phase_i() -> CMatrix {
        CMatrix::diag(&[GaussRat::one(), GaussRat::i()])
    }

    /// `sqrt(2)` times the Hadamard gate; projectively a unitary.
    pub fn hadamard_scaled() -> CMatrix {
        CMatrix::from_rows(&[vec![GaussRat::one(), GaussRat::one()], vec![GaussRat::one(), GaussRat::from(-1)]])
    }

    /// True when `op op^dagger` is a nonzero multiple of the identity.
    pub fn is_scaled_unitary(op: &CMatrix) -> bool {
        let p = op.mul(&op.adjoint());
        let c = p.get(0, 0).clone();
        !c.is_zero() && p == CMatrix::identity(op.rows()).scale(&c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q0() -> ProjQubit {
        ProjQubit::zero()
    }
    fn q1() -> ProjQubit {
        ProjQubit::Infinity
    }

    #[test]
    fn rejects_duplicates_and_ragged_rows() {
        assert_eq!(
            ProductVectorSet::new(2, vec![vec![q0(), q1()], vec![q0(), q1()]]),
            Err(Error::DuplicateRows(1, 2))
        );
        assert!(matches!(ProductVectorSet::new(2, vec![vec![q0()]]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn drop_row_keeps_order() {
        let s = ProductVectorSet::new(1, vec![vec![q0()], vec![q1()]]).unwrap();
        let d = s.drop_row(1).unwrap();
        assert_eq!(d.rows(), &[vec![q1()]]);
        assert_eq!(s.drop_row(3), Err(Error::IndexOutOfRange { index: 3, len: 2 }));
        assert_eq!(s.drop_row(0), Err(Error::IndexOutOfRange { index: 0, len: 2 }));
    }

    #[test]
    fn local_ops_are_scaled_unitaries() {
        assert!(local_ops::is_scaled_unitary(&local_ops::flip()));
        assert!(local_ops::is_scaled_unitary(&local_ops::phase_i()));
        assert!(local_ops::is_scaled_unitary(&local_ops::hadamard_scaled()));
    }

    #[test]
    fn row_vector_is_kron() {
        let s = ProductVectorSet::new(2, vec![vec![q1(), q0()]]).unwrap();
        let v = s.row_vector(0);
        assert_eq!(v.entries(), &[GaussRat::zero(), GaussRat::zero(), GaussRat::one(), GaussRat::zero()]);
    }
}
