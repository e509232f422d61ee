//! Sums of ℓ-th roots of unity as elements of Z[x]/(x^ℓ - 1).
//!
//! Two sums denote the same algebraic integer exactly when their difference is
//! divisible by the cyclotomic polynomial Φ_ℓ.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclotomicError {
    #[error("cyclotomic sums with different moduli ({0} vs {1})")]
    ModulusMismatch(u64, u64),
    #[error("{p} divides the modulus {ell}")]
    BadModulus { p: u64, ell: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclotomicSum {
    ell: u64,
    coeffs: Vec<i64>,
}

impl CyclotomicSum {
    pub fn zero(ell: u64) -> Self {
        assert!(ell > 0, "modulus must be positive");
        CyclotomicSum { ell, coeffs: vec![0; ell as usize] }
    }

    pub fn constant(ell: u64, c: i64) -> Self {
        let mut s = Self::zero(ell);
        s.coeffs[0] = c;
        s
    }

    pub fn from_coeffs(ell: u64, coeffs: &[i64]) -> Self {
        let mut s = Self::zero(ell);
        for (j, &c) in coeffs.iter().enumerate() {
            s.coeffs[j % ell as usize] += c;
        }
        s
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.ell, other.ell);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicSum { ell: self.ell, coeffs }
    }

    pub fn neg(&self) -> Self {
        CyclotomicSum { ell: self.ell, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ell, other.ell);
        let l = self.ell as usize;
        let mut coeffs = vec![0i64; l];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[(i + j) % l] += a * b;
            }
        }
        CyclotomicSum { ell: self.ell, coeffs }
    }

    /// Complex conjugate: x^j ↦ x^{-j}.
    pub fn conj(&self) -> Self {
        let l = self.ell as usize;
        let mut coeffs = vec![0i64; l];
        for (j, &c) in self.coeffs.iter().enumerate() {
            coeffs[(l - j) % l] += c;
        }
        CyclotomicSum { ell: self.ell, coeffs }
    }

    /// Remainder modulo Φ_ℓ, as a coefficient vector of length φ(ℓ).
    pub fn reduce(&self) -> Vec<i64> {
        let phi = cyclotomic_polynomial(self.ell);
        poly_rem(&self.coeffs, &phi)
    }

    /// The integer this sum equals in Z[ζ_ℓ], if it is rational.
    pub fn as_integer(&self) -> Option<i64> {
        let r = self.reduce();
        if r.iter().skip(1).all(|&c| c == 0) {
            Some(r.first().copied().unwrap_or(0))
        } else {
            None
        }
    }
}

fn trim(mut a: Vec<i64>) -> Vec<i64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` by the monic polynomial `f`.
fn poly_rem(a: &[i64], f: &[i64]) -> Vec<i64> {
    let df = f.len() - 1;
    let mut r = a.to_vec();
    if r.len() < df {
        r.resize(df, 0);
    }
    for top in (df..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for (i, &fi) in f.iter().enumerate() {
            r[top - df + i] -= c * fi;
        }
    }
    r.truncate(df);
    r
}

/// Exact quotient of `a` by the monic polynomial `f`; panics if the division is inexact.
fn poly_div_exact(a: &[i64], f: &[i64]) -> Vec<i64> {
    let a = trim(a.to_vec());
    let df = f.len() - 1;
    if a.len() <= df {
        assert!(a.is_empty(), "inexact polynomial division");
        return Vec::new();
    }
    let mut r = a;
    let mut q = vec![0i64; r.len() - df];
    for top in (df..r.len()).rev() {
        let c = r[top];
        q[top - df] = c;
        if c == 0 {
            continue;
        }
        for (i, &fi) in f.iter().enumerate() {
            r[top - df + i] -= c * fi;
        }
    }
    assert!(r.iter().all(|&c| c == 0), "inexact polynomial division");
    q
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Φ_ℓ, little-endian, computed as (x^ℓ - 1) / Π_{d | ℓ, d < ℓ} Φ_d.
pub fn cyclotomic_polynomial(ell: u64) -> Vec<i64> {
    assert!(ell > 0, "modulus must be positive");
    let mut num = vec![0i64; ell as usize + 1];
    num[0] = -1;
    num[ell as usize] = 1;
    let mut den = vec![1i64];
    for d in (1..ell).filter(|d| ell.is_multiple_of(*d)) {
        den = poly_mul(&den, &cyclotomic_polynomial(d));
    }
    poly_div_exact(&num, &den)
}

/// Σ x^e over the multiset of exponents.
pub fn cyc_sum(ell: u64, exponents: impl IntoIterator<Item = u64>) -> CyclotomicSum {
    let mut s = CyclotomicSum::zero(ell);
    for e in exponents {
        s.coeffs[(e % ell) as usize] += 1;
    }
    s
}

pub fn cyc_equal_in_zeta(u: &CyclotomicSum, v: &CyclotomicSum) -> Result<bool, CyclotomicError> {
    if u.ell != v.ell {
        return Err(CyclotomicError::ModulusMismatch(u.ell, v.ell));
    }
    Ok(u.sub(v).reduce().iter().all(|&c| c == 0))
}

/// The Galois action ζ ↦ ζ^p.
pub fn cyc_frobenius(u: &CyclotomicSum, p: u64) -> Result<CyclotomicSum, CyclotomicError> {
    if num_integer::gcd(p, u.ell) != 1 {
        return Err(CyclotomicError::BadModulus { p, ell: u.ell });
    }
    let l = u.ell;
    let mut out = CyclotomicSum::zero(l);
    for (j, &c) in u.coeffs.iter().enumerate() {
        out.coeffs[((j as u64 * (p % l)) % l) as usize] += c;
    }
    Ok(out)
}
