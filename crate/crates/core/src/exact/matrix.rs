//! Dense matrices over the Gaussian rationals.
//!
//! Rank is computed by fraction-free (Bareiss) elimination over the Gaussian
//! integers after clearing denominators row by row; nullspaces come from a
//! reduced row echelon form over the Gaussian rationals. The two routes are
//! independent, which the property tests exploit.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::gauss::{GaussRat, Rat};

/// Gaussian integer used by the fraction-free routines.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn zero() -> Self {
        GaussInt { re: BigInt::zero(), im: BigInt::zero() }
    }

    pub fn from_int(v: BigInt) -> Self {
        GaussInt { re: v, im: BigInt::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn mul(&self, o: &GaussInt) -> GaussInt {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussInt::from_int(&self.re * &o.re);
        }
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn add_assign(&mut self, o: &GaussInt) {
        self.re += &o.re;
        self.im += &o.im;
    }

    /// Exact quotient; the caller guarantees divisibility.
    pub fn div_exact(&self, d: &GaussInt) -> GaussInt {
        if d.im.is_zero() {
            debug_assert!((&self.re % &d.re).is_zero() && (&self.im % &d.re).is_zero());
            return GaussInt { re: &self.re / &d.re, im: &self.im / &d.re };
        }
        let n = &d.re * &d.re + &d.im * &d.im;
        let re = &self.re * &d.re + &self.im * &d.im;
        let im = &self.im * &d.re - &self.re * &d.im;
        debug_assert!((&re % &n).is_zero() && (&im % &n).is_zero());
        GaussInt { re: re / &n, im: im / n }
    }

    pub fn div_exact_int(&self, k: &BigInt) -> GaussInt {
        debug_assert!((&self.re % k).is_zero() && (&self.im % k).is_zero());
        GaussInt { re: &self.re / k, im: &self.im / k }
    }

    fn scaled(g: &GaussRat, scale: &BigInt) -> GaussInt {
        let re = g.re.clone() * Rat::from_integer(scale.clone());
        let im = g.im.clone() * Rat::from_integer(scale.clone());
        debug_assert!(re.is_integer() && im.is_integer());
        GaussInt { re: re.to_integer(), im: im.to_integer() }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussRat>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![GaussRat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = GaussRat::one();
        }
        m
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<GaussRat>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows * cols");
        CMatrix { rows, cols, data }
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows(rows: &[Vec<GaussRat>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        CMatrix { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn column(entries: Vec<GaussRat>) -> Self {
        CMatrix { rows: entries.len(), cols: 1, data: entries }
    }

    pub fn diag(entries: &[GaussRat]) -> Self {
        let n = entries.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[GaussRat] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussRat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussRat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[GaussRat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn conj(&self) -> Self {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(GaussRat::conj).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut t = CMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }

    pub fn trace(&self) -> GaussRat {
        let mut t = GaussRat::zero();
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    pub fn scale(&self, s: &GaussRat) -> Self {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|e| e * s).collect() }
    }

    pub fn add(&self, o: &CMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &CMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, o: &CMatrix) -> Self {
        assert_eq!(self.cols, o.rows, "inner dimensions differ");
        let mut out = CMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    /// Kronecker product; dimensions multiply.
    pub fn kron(&self, o: &CMatrix) -> Self {
        let rows = self.rows * o.rows;
        let cols = self.cols * o.cols;
        let mut out = CMatrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        out.data[(i * o.rows + k) * cols + j * o.cols + l] = a * o.get(k, l);
                    }
                }
            }
        }
        out
    }

    /// `<self|other>` for column vectors, conjugating `self`.
    pub fn inner(&self, other: &CMatrix) -> GaussRat {
        assert_eq!(self.data.len(), other.data.len());
        let mut acc = GaussRat::zero();
        for (a, b) in self.data.iter().zip(&other.data) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(&a.conj() * b);
            }
        }
        acc
    }

    /// `|v><w|` for column vectors `v = self`, `w = other`.
    pub fn outer(&self, other: &CMatrix) -> Self {
        let n = self.data.len();
        let m = other.data.len();
        let mut out = CMatrix::zeros(n, m);
        for i in 0..n {
            for j in 0..m {
                out.data[i * m + j] = &self.data[i] * &other.data[j].conj();
            }
        }
        out
    }

    /// The columns as separate column vectors.
    pub fn columns(&self) -> Vec<CMatrix> {
        (0..self.cols).map(|c| CMatrix::column((0..self.rows).map(|r| self.get(r, c).clone()).collect())).collect()
    }

    /// Scales a vector so its first nonzero coordinate is one. The zero
    /// vector is returned unchanged.
    pub fn projective_canonical(&self) -> Self {
        match self.data.iter().find(|e| !e.is_zero()) {
            Some(lead) => {
                let inv = lead.inv().expect("nonzero lead");
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Exact rank via fraction-free elimination.
    pub fn rank(&self) -> usize {
        bareiss_rank(self.to_gauss_int_rows())
    }

    /// Clears denominators row by row (row scaling preserves rank).
    pub(crate) fn to_gauss_int_rows(&self) -> Vec<Vec<GaussInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let mut scale = BigInt::one();
                for e in row {
                    scale = num_integer::Integer::lcm(&scale, &e.denom_lcm());
                }
                row.iter().map(|e| GaussInt::scaled(e, &scale)).collect()
            })
            .collect()
    }

    /// Basis of `{v : self * v = 0}` as column vectors; its length is
    /// `cols - rank`.
    pub fn nullspace(&self) -> Vec<CMatrix> {
        let (rref, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![GaussRat::zero(); self.cols];
            v[free] = GaussRat::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rref.get(r, free).clone();
            }
            basis.push(CMatrix::column(v));
        }
        basis
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (CMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Fraction-free Gaussian elimination; every division is exact in Z[i].
pub(crate) fn bareiss_rank(mut m: Vec<Vec<GaussInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = GaussInt::from_int(BigInt::one());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = m[r][c].mul(&m[i][j]).sub(&m[i][c].mul(&m[r][j]));
                m[i][j] = v.div_exact(&prev);
            }
            m[i][c] = GaussInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::gauss::rat;

    fn g(re: i64, im: i64) -> GaussRat {
        GaussRat::from_ints(re, im)
    }

    #[test]
    fn rank_of_trivial_matrices() {
        assert_eq!(CMatrix::zeros(4, 4).rank(), 0);
        assert_eq!(CMatrix::identity(4).rank(), 4);
    }

    #[test]
    fn nullspace_of_row_vector() {
        let m = CMatrix::from_rows(&[vec![g(1, 0), g(0, 0)]]);
        let basis = m.nullspace();
        assert_eq!(basis, vec![CMatrix::column(vec![g(0, 0), g(1, 0)])]);
        assert!(CMatrix::identity(3).nullspace().is_empty());
    }

    #[test]
    fn rank_with_complex_dependency() {
        // second row = (1+i) * first row; third independent
        let r1 = vec![g(1, 0), g(0, 1), GaussRat::new(rat(1, 2), rat(0, 1))];
        let r2: Vec<GaussRat> = r1.iter().map(|e| e * &g(1, 1)).collect();
        let r3 = vec![g(0, 0), g(3, 0), g(0, -2)];
        let m = CMatrix::from_rows(&[r1, r2, r3]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul(&ns[0]).is_zero());
    }

    #[test]
    fn kron_of_basis_kets() {
        let e0 = CMatrix::column(vec![g(1, 0), g(0, 0)]);
        let e1 = CMatrix::column(vec![g(0, 0), g(1, 0)]);
        assert_eq!(e0.kron(&e0).entries(), &[g(1, 0), g(0, 0), g(0, 0), g(0, 0)]);
        assert_eq!(e1.kron(&e1).entries(), &[g(0, 0), g(0, 0), g(0, 0), g(1, 0)]);
        let plus = CMatrix::column(vec![g(1, 0), g(1, 0)]);
        let minus = CMatrix::column(vec![g(1, 0), g(-1, 0)]);
        assert_eq!(plus.kron(&minus).entries(), &[g(1, 0), g(-1, 0), g(1, 0), g(-1, 0)]);
    }

    #[test]
    fn kron_dimensions_multiply() {
        let a = CMatrix::identity(2);
        let b = CMatrix::zeros(3, 1);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (6, 2));
    }
}
