//! Slow, unpruned reference computations used to cross-check the engine.
//! Nothing here calls the search, the rank routines or the PSD test of the
//! library; only the scalar type and the data structures are shared.
#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use upb_core::{GaussRat, PartySplit, ProductVectorSet, ProjQubit};

pub type Vector = Vec<GaussRat>;

pub fn kron(a: &[GaussRat], b: &[GaussRat]) -> Vector {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Ket of the given qubit states, first state most significant.
pub fn ket(states: &[&ProjQubit]) -> Vector {
    states.iter().fold(vec![GaussRat::one()], |acc, q| kron(&acc, &q.coords()))
}

pub fn row_ket(set: &ProductVectorSet, i: usize) -> Vector {
    ket(&set.row(i).iter().collect::<Vec<_>>())
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn dot(a: &[GaussRat], b: &[GaussRat]) -> GaussRat {
    let mut acc = GaussRat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += &(&x.conj() * y);
    }
    acc
}

/// Row echelon form by plain Gaussian elimination; returns the reduced rows
/// and the pivot columns.
fn rref(mut rows: Vec<Vector>, cols: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = GaussRat::one() / &rows[r][c];
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..cols {
                    let t = &f * &rows[r][k];
                    rows[i][k] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: &[Vector]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    rref(rows.to_vec(), cols).1.len()
}

/// Basis of `{v : M v = 0}` for the matrix with the given rows.
pub fn nullspace(rows: &[Vector], cols: usize) -> Vec<Vector> {
    let (red, pivots) = rref(rows.to_vec(), cols);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![GaussRat::zero(); cols];
        v[free] = GaussRat::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -&red[r][free];
        }
        out.push(v);
    }
    out
}

/// Scales so the first nonzero entry is one.
pub fn normalize(v: &[GaussRat]) -> Vector {
    let lead = v.iter().find(|x| !x.is_zero()).expect("nonzero vector").clone();
    let inv = GaussRat::one() / &lead;
    v.iter().map(|x| x * &inv).collect()
}

/// Positive semidefiniteness of a Hermitian matrix by repeated Schur
/// complements on a positive diagonal pivot. A zero diagonal entry forces
/// its whole row to vanish.
pub fn is_psd(m: &[Vector]) -> bool {
    let mut m = m.to_vec();
    loop {
        let n = m.len();
        if n == 0 {
            return true;
        }
        if m.iter().enumerate().any(|(i, r)| r[i].re.is_negative()) {
            return false;
        }
        let Some(p) = (0..n).find(|&i| !m[i][i].is_zero()) else {
            return m.iter().all(|r| r.iter().all(Zero::is_zero));
        };
        for i in 0..n {
            if m[i][i].is_zero() && !m[i][p].is_zero() {
                return false;
            }
        }
        let piv = m[p][p].clone();
        let mut next = Vec::with_capacity(n - 1);
        for i in (0..n).filter(|&i| i != p) {
            let mut row = Vec::with_capacity(n - 1);
            for j in (0..n).filter(|&j| j != p) {
                let t = &(&m[i][p] * &m[p][j]) / &piv;
                row.push(&m[i][j] - &t);
            }
            next.push(row);
        }
        m = next;
    }
}

/// `I - sum |v><v| / <v|v>`, unscaled.
pub fn complement_projector(set: &ProductVectorSet) -> Vec<Vector> {
    let d = set.dim();
    let mut m: Vec<Vector> = (0..d)
        .map(|r| (0..d).map(|c| if r == c { GaussRat::one() } else { GaussRat::zero() }).collect())
        .collect();
    for i in 0..set.len() {
        let v = row_ket(set, i);
        let norm = dot(&v, &v);
        for r in 0..d {
            for c in 0..d {
                let t = &(&v[r] * &v[c].conj()) / &norm;
                m[r][c] -= &t;
            }
        }
    }
    m
}

/// Partial transpose on the qubits in `qubits`, straight from the index
/// definition: swap the row and column bits of the transposed qubits.
pub fn partial_transpose(m: &[Vector], n_qubits: usize, qubits: &[usize]) -> Vec<Vector> {
    let d = m.len();
    let mut out = m.to_vec();
    for r in 0..d {
        for c in 0..d {
            let (mut r2, mut c2) = (r, c);
            for &q in qubits {
                let bit = 1 << (n_qubits - 1 - q);
                let (rb, cb) = (r & bit, c & bit);
                r2 = (r2 & !bit) | cb;
                c2 = (c2 & !bit) | rb;
            }
            out[r2][c2] = m[r][c].clone();
        }
    }
    out
}

/// Party components of each row as kets.
fn party_kets(set: &ProductVectorSet, split: &PartySplit) -> Vec<Vec<Vector>> {
    (0..set.len())
        .map(|i| {
            split
                .parties()
                .iter()
                .map(|p| ket(&p.iter().map(|&q| &set.row(i)[q]).collect::<Vec<_>>()))
                .collect()
        })
        .collect()
}

/// Outcome of the exhaustive enumeration.
#[derive(Debug, PartialEq)]
pub enum Brute {
    /// Distinct normalized product kets, parties in split order.
    Finite(Vec<Vector>),
    Infinite,
}

/// Tries every one of `k^m` row-to-party assignments without pruning. Each
/// party's vector must be orthogonal to the rows assigned to it.
pub fn brute_enumerate(set: &ProductVectorSet, split: &PartySplit) -> Brute {
    let comps = party_kets(set, split);
    let k = split.n_parties();
    let dims = split.dims();
    let m = set.len();
    let total = k.pow(m as u32);
    let mut found: Vec<Vector> = Vec::new();
    for code in 0..total {
        let mut assignment = vec![0; m];
        let mut c = code;
        for a in assignment.iter_mut() {
            *a = c % k;
            c /= k;
        }
        let mut parts = Vec::with_capacity(k);
        let mut dims_null = Vec::with_capacity(k);
        for p in 0..k {
            let rows: Vec<Vector> = (0..m)
                .filter(|&i| assignment[i] == p)
                .map(|i| comps[i][p].iter().map(GaussRat::conj).collect())
                .collect();
            let null = if rows.is_empty() {
                nullspace(&[vec![GaussRat::zero(); dims[p]]], dims[p])
            } else {
                nullspace(&rows, dims[p])
            };
            dims_null.push(null.len());
            parts.push(null.into_iter().next());
        }
        if dims_null.contains(&0) {
            continue;
        }
        if dims_null.iter().any(|&n| n > 1) {
            return Brute::Infinite;
        }
        let parts: Vec<Vector> = parts.into_iter().map(|p| p.expect("one-dimensional")).collect();
        let v = normalize(&parts.iter().fold(vec![GaussRat::one()], |acc, p| kron(&acc, p)));
        if !found.contains(&v) {
            found.push(v);
        }
    }
    Brute::Finite(found)
}

/// A set is a UPB across `split` iff the exhaustive enumeration is empty.
pub fn brute_is_upb(set: &ProductVectorSet, split: &PartySplit) -> bool {
    brute_enumerate(set, split) == Brute::Finite(Vec::new())
}

/// Kets of the party vectors reordered into qubit order, so product kets
/// under different splits can be compared with row kets.
pub fn to_qubit_order(v: &[GaussRat], split: &PartySplit) -> Vector {
    let n = split.n_qubits();
    let order: Vec<usize> = split.parties().iter().flatten().copied().collect();
    let mut out = vec![GaussRat::zero(); v.len()];
    for (idx, x) in v.iter().enumerate() {
        // bit j (from the top) of idx is qubit order[j]
        let mut q_idx = 0;
        for (j, &q) in order.iter().enumerate() {
            if idx & (1 << (n - 1 - j)) != 0 {
                q_idx |= 1 << (n - 1 - q);
            }
        }
        out[q_idx] = x.clone();
    }
    out
}
