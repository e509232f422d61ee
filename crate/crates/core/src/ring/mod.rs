//! Exact arithmetic: Galois rings, cyclotomic sums, and dense linear algebra
//! over finite chain rings.

mod cyclotomic;
mod fp_poly;
mod galois;
mod linalg;
mod matrix;

pub use cyclotomic::{
    cyc_equal_in_zeta, cyc_frobenius, cyc_sum, cyclotomic_polynomial, CyclotomicError,
    CyclotomicSum,
};
pub use fp_poly::{find_primitive_poly, is_irreducible_mod_p};
pub use galois::{GaloisRing, GrElem, RingError, RingSpec, SubringEmbedding};
pub use linalg::{
    howell_form, howell_rows, kernel, smith_valuations, solve_linear, HowellForm, LinearSolution, Unsolvable,
};
pub use matrix::{Matrix, MatrixRing};

use std::fmt::Debug;
use std::hash::Hash;

/// A finite commutative ring with explicit element representatives.
///
/// Elements are plain values; all arithmetic goes through the ring object so
/// that moduli and defining polynomials live in one place.
pub trait CommRing: Send + Sync {
    type Elem: Clone + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_unit(&self, a: &Self::Elem) -> bool;
    /// Multiplicative inverse, `None` for non-units.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut f = 2u128;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiplicative order of `x` modulo `modulus`, or `None` if they share a factor.
pub fn multiplicative_order(x: u64, modulus: u64) -> Option<u64> {
    if modulus == 1 {
        return Some(1);
    }
    if num_integer::gcd(x % modulus, modulus) != 1 {
        return None;
    }
    let mut acc = x % modulus;
    let mut k = 1;
    while acc != 1 {
        acc = acc * (x % modulus) % modulus;
        k += 1;
    }
    Some(k)
}
