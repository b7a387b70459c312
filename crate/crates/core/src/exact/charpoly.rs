//! Characteristic polynomials and exact positive-semidefiniteness.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::gauss::{GaussRat, Rat};
use super::matrix::{CMatrix, GaussInt};
use crate::error::{Error, Result};

/// Coefficients `e_0..e_n` with `det(tI - H) = sum_k (-1)^k e_k t^(n-k)`, so
/// `e_k` is the k-th elementary symmetric function of the eigenvalues.
///
/// Uses the Faddeev–LeVerrier recurrence on `D * H`, where `D` clears every
/// denominator, so the whole recurrence runs over the Gaussian integers and
/// each division by `k` is exact.
pub fn char_poly(h: &CMatrix) -> Result<Vec<Rat>> {
    if !h.is_hermitian() {
        return Err(Error::NonHermitianInput);
    }
    let n = h.rows();
    let mut scale = BigInt::one();
    for e in h.entries() {
        scale = num_integer::Integer::lcm(&scale, &e.denom_lcm());
    }
    let b = to_int_matrix(&h.scale(&GaussRat::real(Rat::from_integer(scale.clone()))));

    // c[k] is the coefficient of t^k of det(tI - B)
    let mut c = vec![GaussInt::zero(); n + 1];
    c[n] = GaussInt::from_int(BigInt::one());
    let mut m = identity_int(n);
    for k in 1..=n {
        let am = mat_mul(&b, &m, n);
        let tr = trace(&am, n);
        let coeff = GaussInt { re: -tr.re, im: -tr.im }.div_exact_int(&BigInt::from(k));
        c[n - k] = coeff.clone();
        if k < n {
            m = am;
            for i in 0..n {
                m[i * n + i].add_assign(&coeff);
            }
        }
    }

    let mut out = Vec::with_capacity(n + 1);
    let mut denom = BigInt::one();
    for k in 0..=n {
        let ck = &c[n - k];
        // Hermitian spectra are real, so every coefficient is real.
        debug_assert!(ck.im.is_zero(), "imaginary char-poly coefficient for Hermitian input");
        let signed = if k % 2 == 0 { ck.re.clone() } else { -ck.re.clone() };
        out.push(Rat::new(signed, denom.clone()));
        denom *= &scale;
    }
    Ok(out)
}

/// True iff every eigenvalue of the Hermitian `h` is nonnegative, decided by
/// the signs of the elementary symmetric functions of the spectrum.
pub fn is_psd(h: &CMatrix) -> Result<bool> {
    Ok(char_poly(h)?.iter().all(|e| !e.is_negative()))
}

fn to_int_matrix(m: &CMatrix) -> Vec<GaussInt> {
    m.entries()
        .iter()
        .map(|e| {
            debug_assert!(e.re.is_integer() && e.im.is_integer());
            GaussInt { re: e.re.to_integer(), im: e.im.to_integer() }
        })
        .collect()
}

fn identity_int(n: usize) -> Vec<GaussInt> {
    let mut m = vec![GaussInt::zero(); n * n];
    for i in 0..n {
        m[i * n + i] = GaussInt::from_int(BigInt::one());
    }
    m
}

fn mat_mul(a: &[GaussInt], b: &[GaussInt], n: usize) -> Vec<GaussInt> {
    let mut out = vec![GaussInt::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = &a[i * n + k];
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                let y = &b[k * n + j];
                if !y.is_zero() {
                    out[i * n + j].add_assign(&x.mul(y));
                }
            }
        }
    }
    out
}

fn trace(a: &[GaussInt], n: usize) -> GaussInt {
    let mut t = GaussInt::zero();
    for i in 0..n {
        t.add_assign(&a[i * n + i]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::gauss::rat;

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn identity_and_zero() {
        let e = char_poly(&CMatrix::identity(2)).unwrap();
        assert_eq!(e, vec![rat(1, 1), rat(2, 1), rat(1, 1)]);
        let z = char_poly(&CMatrix::zeros(2, 2)).unwrap();
        assert_eq!(z, vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
    }

    #[test]
    fn padded_scaled_projector() {
        // eight eigenvalues 1/8 and eight zeros: e_k = C(8,k) / 8^k
        let mut d = vec![GaussRat::real(rat(1, 8)); 8];
        d.extend(vec![GaussRat::zero(); 8]);
        let e = char_poly(&CMatrix::diag(&d)).unwrap();
        for (k, ek) in e.iter().enumerate() {
            let expect = if k <= 8 { rat(binom(8, k as u64) as i64, 8i64.pow(k as u32)) } else { rat(0, 1) };
            assert_eq!(*ek, expect, "e_{k}");
        }
    }

    #[test]
    fn psd_decisions() {
        assert!(is_psd(&CMatrix::identity(3)).unwrap());
        let d = CMatrix::diag(&[GaussRat::from(1), GaussRat::from(-1)]);
        assert!(!is_psd(&d).unwrap());
        let non_herm = CMatrix::from_rows(&[
            vec![GaussRat::from(1), GaussRat::from(2)],
            vec![GaussRat::from(0), GaussRat::from(1)],
        ]);
        assert_eq!(char_poly(&non_herm), Err(Error::NonHermitianInput));
    }

    #[test]
    fn complex_hermitian_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let h = CMatrix::from_rows(&[
            vec![GaussRat::from(2), GaussRat::from_ints(0, 1)],
            vec![GaussRat::from_ints(0, -1), GaussRat::from(2)],
        ]);
        assert_eq!(char_poly(&h).unwrap(), vec![rat(1, 1), rat(4, 1), rat(3, 1)]);
    }
}
