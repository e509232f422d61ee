//! Galois rings GR(p^m, d) = W(F_{p^d}) / p^m.
//!
//! Elements are stored in the polynomial basis 1, ξ, …, ξ^{d-1} where ξ is the
//! Teichmüller lift of a primitive element of F_{p^d}. With that choice the
//! defining polynomial is the Teichmüller lift of a primitive polynomial, the
//! Frobenius is simply ξ ↦ ξ^p, and rings of the same (p, d) at different
//! precisions are compatible under coefficient-wise reduction.
//!
//! The Teichmüller digit expansion x = Σ p^i ω(x_i) is available through
//! [`GaloisRing::digits`] / [`GaloisRing::from_digits`]; it is unique and is
//! what Frobenius and subring coercion act on digit by digit.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use super::fp_poly::{find_primitive_poly, is_irreducible_mod_p};
use super::{is_prime, CommRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid ring parameters: {0}")]
    BadParameters(String),
    #[error("defining polynomial is not irreducible mod {p}")]
    Reducible { p: u64 },
    #[error("element is not fixed by the {d0}-th power of Frobenius")]
    NotInSubring { d0: usize },
    #[error("no primitive {ell}-th root of unity in residue degree {d}")]
    NoRootOfUnity { ell: u64, d: usize },
}

/// Parameters of a Galois ring: characteristic p^m, residue field F_{p^d}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    pub p: u64,
    pub m: u32,
    pub d: usize,
    /// Monic, little-endian, coefficients in [0, p^m).
    pub defining_poly: Vec<u64>,
}

impl RingSpec {
    pub fn validate(&self) -> Result<(), RingError> {
        if !is_prime(self.p) {
            return Err(RingError::NotPrime(self.p));
        }
        if self.m == 0 || self.d == 0 || self.defining_poly.len() != self.d + 1 {
            return Err(RingError::BadParameters(format!("{self:?}")));
        }
        if self.defining_poly[self.d] != 1 {
            return Err(RingError::BadParameters("defining polynomial not monic".into()));
        }
        if !is_irreducible_mod_p(&self.defining_poly, self.p) {
            return Err(RingError::Reducible { p: self.p });
        }
        Ok(())
    }
}

/// Coefficient vector of a Galois ring element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GrElem(SmallVec<[u64; 4]>);

impl GrElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for GrElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            write!(f, "{:?}", self.0.as_slice())
        }
    }
}

fn mul_raw(a: &[u64], b: &[u64], f: &[u64], modulus: u64) -> SmallVec<[u64; 4]> {
    let d = f.len() - 1;
    let mut prod: SmallVec<[u64; 8]> = SmallVec::from_elem(0, 2 * d - 1);
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % modulus;
        }
    }
    for i in (d..2 * d - 1).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        for j in 0..d {
            let s = c * f[j] % modulus;
            prod[i - d + j] = (prod[i - d + j] + modulus - s) % modulus;
        }
    }
    SmallVec::from_slice(&prod[..d])
}

fn pow_raw(a: &[u64], mut e: u128, f: &[u64], modulus: u64) -> SmallVec<[u64; 4]> {
    let d = f.len() - 1;
    let mut acc: SmallVec<[u64; 4]> = SmallVec::from_elem(0, d);
    acc[0] = 1 % modulus;
    let mut base: SmallVec<[u64; 4]> = SmallVec::from_slice(a);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_raw(&acc, &base, f, modulus);
        }
        e >>= 1;
        if e > 0 {
            base = mul_raw(&base, &base, f, modulus);
        }
    }
    acc
}

/// The class of `x` in (Z/modulus)[x]/(f).
fn x_class(f: &[u64], modulus: u64) -> SmallVec<[u64; 4]> {
    let d = f.len() - 1;
    let mut v: SmallVec<[u64; 4]> = SmallVec::from_elem(0, d);
    if d == 1 {
        v[0] = (modulus - f[0] % modulus) % modulus;
    } else {
        v[1] = 1;
    }
    v
}

/// Teichmüller lift of the residue polynomial `fbar` to precision p^m: the
/// monic polynomial whose roots are the Teichmüller lifts of the roots of `fbar`.
fn teichmuller_poly(p: u64, m: u32, fbar: &[u64]) -> Vec<u64> {
    let d = fbar.len() - 1;
    let modulus = p.pow(m);
    let x = x_class(fbar, modulus);
    let exp = (p as u128).pow((d as u32) * (m - 1));
    let omega = pow_raw(&x, exp, fbar, modulus);
    // product over the Frobenius orbit ω, ω^p, …, ω^{p^{d-1}}
    let mut conj = omega.clone();
    let mut poly: Vec<SmallVec<[u64; 4]>> = vec![{
        let mut one = SmallVec::from_elem(0, d);
        one[0] = 1;
        one
    }];
    for _ in 0..d {
        let mut next: Vec<SmallVec<[u64; 4]>> = vec![SmallVec::from_elem(0, d); poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            // next[j+1] += c ; next[j] -= conj * c
            for t in 0..d {
                next[j + 1][t] = (next[j + 1][t] + c[t]) % modulus;
            }
            let prod = mul_raw(&conj, c, fbar, modulus);
            for t in 0..d {
                next[j][t] = (next[j][t] + modulus - prod[t]) % modulus;
            }
        }
        poly = next;
        conj = pow_raw(&conj, p as u128, fbar, modulus);
    }
    poly.iter()
        .map(|c| {
            debug_assert!(c[1..].iter().all(|&t| t == 0), "non-rational coefficient");
            c[0]
        })
        .collect()
}

/// The Galois ring GR(p^m, d) with arithmetic context.
#[derive(Clone, Debug)]
pub struct GaloisRing {
    spec: RingSpec,
    modulus: u64,
    residue_poly: Vec<u64>,
    generator: GrElem,
    frob: Vec<GrElem>,
}

impl PartialEq for GaloisRing {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}
impl Eq for GaloisRing {}

impl GaloisRing {
    pub fn new(p: u64, m: u32, d: usize) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        if m == 0 || d == 0 {
            return Err(RingError::BadParameters(format!("m={m}, d={d}")));
        }
        let modulus = p
            .checked_pow(m)
            .filter(|&q| q < (1 << 31))
            .ok_or_else(|| RingError::BadParameters(format!("p^m too large: p={p}, m={m}")))?;
        if (p as u128).checked_pow(d as u32).is_none_or(|q| q > 1 << 40) {
            return Err(RingError::BadParameters(format!("residue field too large: p={p}, d={d}")));
        }
        let residue_poly = find_primitive_poly(p, d);
        let defining_poly = teichmuller_poly(p, m, &residue_poly);
        let spec = RingSpec { p, m, d, defining_poly };
        let generator = GrElem(x_class(&spec.defining_poly, modulus));
        let mut ring = GaloisRing { spec, modulus, residue_poly, generator, frob: Vec::new() };
        let gp = ring.pow(&ring.generator, p as u128);
        let mut frob = Vec::with_capacity(d);
        let mut acc = ring.one();
        for _ in 0..d {
            frob.push(acc.clone());
            acc = ring.mul(&acc, &gp);
        }
        ring.frob = frob;
        Ok(ring)
    }

    /// Ring with the same (p, d) at a different precision.
    pub fn with_precision(&self, m: u32) -> Result<Self, RingError> {
        GaloisRing::new(self.spec.p, m, self.spec.d)
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }
    pub fn p(&self) -> u64 {
        self.spec.p
    }
    pub fn m(&self) -> u32 {
        self.spec.m
    }
    pub fn d(&self) -> usize {
        self.spec.d
    }
    /// p^m.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    /// Number of elements, p^{md}.
    pub fn size(&self) -> u128 {
        (self.modulus as u128).pow(self.spec.d as u32)
    }
    /// Primitive polynomial over F_p that the defining polynomial lifts.
    pub fn residue_poly(&self) -> &[u64] {
        &self.residue_poly
    }
    /// The basis element ξ: a Teichmüller element of order p^d - 1.
    pub fn generator(&self) -> &GrElem {
        &self.generator
    }

    pub fn residue_field(&self) -> GaloisRing {
        self.with_precision(1).expect("residue field of a valid ring")
    }

    pub fn prime_subring(&self) -> GaloisRing {
        GaloisRing::new(self.spec.p, self.spec.m, 1).expect("prime subring of a valid ring")
    }

    pub fn from_coeffs(&self, c: &[u64]) -> GrElem {
        assert_eq!(c.len(), self.spec.d, "coefficient vector length");
        GrElem(c.iter().map(|&x| x % self.modulus).collect())
    }

    /// Every element, in lexicographic coefficient order. Only sensible for tiny rings.
    pub fn elements(&self) -> impl Iterator<Item = GrElem> + '_ {
        let d = self.spec.d;
        let q = self.modulus;
        (0..self.size()).map(move |mut idx| {
            let mut c: SmallVec<[u64; 4]> = SmallVec::from_elem(0, d);
            for slot in c.iter_mut() {
                *slot = (idx % q as u128) as u64;
                idx /= q as u128;
            }
            GrElem(c)
        })
    }

    /// p-adic valuation; `m` for zero.
    pub fn valuation(&self, a: &GrElem) -> u32 {
        a.0.iter()
            .filter(|&&c| c != 0)
            .map(|&c| {
                let mut v = 0;
                let mut c = c;
                while c % self.spec.p == 0 {
                    c /= self.spec.p;
                    v += 1;
                }
                v
            })
            .min()
            .unwrap_or(self.spec.m)
    }

    /// a / p^v for `a` divisible by p^v (coefficient-wise; result is defined mod p^{m-v}).
    pub fn div_p_pow(&self, a: &GrElem, v: u32) -> GrElem {
        let pv = self.spec.p.pow(v);
        GrElem(
            a.0.iter()
                .map(|&c| {
                    debug_assert_eq!(c % pv, 0, "not divisible by p^{v}");
                    c / pv
                })
                .collect(),
        )
    }

    /// Canonical representative of a modulo p^v: coefficients reduced into [0, p^v).
    pub fn rem_p_pow(&self, a: &GrElem, v: u32) -> GrElem {
        let pv = self.spec.p.pow(v);
        GrElem(a.0.iter().map(|&c| c % pv).collect())
    }

    pub fn mul_p_pow(&self, a: &GrElem, v: u32) -> GrElem {
        if v >= self.spec.m {
            return self.zero();
        }
        let pv = self.spec.p.pow(v);
        GrElem(a.0.iter().map(|&c| c * pv % self.modulus).collect())
    }

    /// Image in the residue field (an element of `self.residue_field()`).
    pub fn residue(&self, a: &GrElem) -> GrElem {
        self.rem_p_pow(a, 1)
    }

    /// Reduction to a lower-precision ring with the same (p, d).
    pub fn reduce_to(&self, a: &GrElem, target: &GaloisRing) -> GrElem {
        debug_assert!(target.spec.p == self.spec.p && target.spec.d == self.spec.d);
        debug_assert!(target.spec.m <= self.spec.m);
        GrElem(a.0.iter().map(|&c| c % target.modulus).collect())
    }

    /// Coefficient-wise lift from a lower-precision ring (a set-theoretic section).
    pub fn lift_coefficients(&self, a: &GrElem) -> GrElem {
        debug_assert_eq!(a.0.len(), self.spec.d);
        a.clone()
    }

    /// Teichmüller lift ω(x) of a residue-field element.
    pub fn teichmuller(&self, x: &GrElem) -> GrElem {
        let exp = (self.spec.p as u128).pow(self.spec.d as u32 * (self.spec.m - 1));
        let lifted = self.rem_p_pow(x, 1);
        self.pow(&lifted, exp)
    }

    /// Teichmüller digits x_0, …, x_{m-1} with a = Σ p^i ω(x_i).
    pub fn digits(&self, a: &GrElem) -> Vec<GrElem> {
        let mut cur = a.clone();
        let mut out = Vec::with_capacity(self.spec.m as usize);
        for _ in 0..self.spec.m {
            let x = self.residue(&cur);
            let diff = self.sub(&cur, &self.teichmuller(&x));
            cur = self.div_p_pow(&diff, 1);
            out.push(x);
        }
        out
    }

    pub fn from_digits(&self, digits: &[GrElem]) -> GrElem {
        let mut acc = self.zero();
        for (i, x) in digits.iter().enumerate().take(self.spec.m as usize) {
            let t = self.mul_p_pow(&self.teichmuller(x), i as u32);
            acc = self.add(&acc, &t);
        }
        acc
    }

    /// Absolute Frobenius: the ring automorphism lifting x ↦ x^p on the residue field.
    pub fn frobenius(&self, a: &GrElem) -> GrElem {
        let mut acc = self.zero();
        for (i, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = self.mul(&self.from_int(c as i64), &self.frob[i]);
            acc = self.add(&acc, &term);
        }
        acc
    }

    pub fn frobenius_pow(&self, a: &GrElem, e: usize) -> GrElem {
        (0..e % self.spec.d).fold(a.clone(), |x, _| self.frobenius(&x))
    }

    /// A primitive ℓ-th root of unity: ξ^{(p^d - 1)/ℓ}.
    pub fn root_of_unity(&self, ell: u64) -> Result<GrElem, RingError> {
        let order = (self.spec.p as u128).pow(self.spec.d as u32) - 1;
        if ell == 0 || !order.is_multiple_of(ell as u128) {
            return Err(RingError::NoRootOfUnity { ell, d: self.spec.d });
        }
        Ok(self.pow(&self.generator, order / ell as u128))
    }

    /// Coerce a Frobenius^{d0}-fixed element into GR(p^m, d0).
    pub fn coerce_to_subring(&self, a: &GrElem, d0: usize) -> Result<(GaloisRing, GrElem), RingError> {
        let emb = SubringEmbedding::new(self, d0)?;
        let x = emb.coerce(a)?;
        Ok((emb.small().clone(), x))
    }
}

impl CommRing for GaloisRing {
    type Elem = GrElem;

    fn zero(&self) -> GrElem {
        GrElem(SmallVec::from_elem(0, self.spec.d))
    }

    fn one(&self) -> GrElem {
        self.from_int(1)
    }

    fn from_int(&self, n: i64) -> GrElem {
        let mut c: SmallVec<[u64; 4]> = SmallVec::from_elem(0, self.spec.d);
        c[0] = n.rem_euclid(self.modulus as i64) as u64;
        GrElem(c)
    }

    fn add(&self, a: &GrElem, b: &GrElem) -> GrElem {
        GrElem(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + y) % self.modulus).collect())
    }

    fn neg(&self, a: &GrElem) -> GrElem {
        GrElem(a.0.iter().map(|&x| (self.modulus - x) % self.modulus).collect())
    }

    fn sub(&self, a: &GrElem, b: &GrElem) -> GrElem {
        GrElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| (x + self.modulus - y) % self.modulus)
                .collect(),
        )
    }

    fn mul(&self, a: &GrElem, b: &GrElem) -> GrElem {
        if self.spec.d == 1 {
            let mut c: SmallVec<[u64; 4]> = SmallVec::new();
            c.push(a.0[0] * b.0[0] % self.modulus);
            return GrElem(c);
        }
        GrElem(mul_raw(&a.0, &b.0, &self.spec.defining_poly, self.modulus))
    }

    fn is_zero(&self, a: &GrElem) -> bool {
        a.is_zero()
    }

    fn is_unit(&self, a: &GrElem) -> bool {
        !self.residue(a).is_zero()
    }

    fn inv(&self, a: &GrElem) -> Option<GrElem> {
        if !self.is_unit(a) {
            return None;
        }
        let q = (self.spec.p as u128).pow(self.spec.d as u32);
        // residue inverse, then Newton: y <- y (2 - a y)
        let mut y = self.pow(&self.residue(a), q - 2);
        let two = self.from_int(2);
        for _ in 0..=64 {
            let ay = self.mul(a, &y);
            if ay == self.one() {
                return Some(y);
            }
            y = self.mul(&y, &self.sub(&two, &ay));
        }
        unreachable!("Newton iteration for a unit inverse did not converge")
    }
}

/// A fixed embedding GR(p^m, d0) ↪ GR(p^m, d) for d0 | d.
///
/// The embedding sends the small ring's generator to the Teichmüller lift of
/// the first root (in enumeration order) of its residue polynomial inside
/// F_{p^d}. Coercion back is digit-local.
#[derive(Clone, Debug)]
pub struct SubringEmbedding {
    small: GaloisRing,
    big: GaloisRing,
    root_powers: Vec<GrElem>,
    residue_table: HashMap<GrElem, GrElem>,
}

impl SubringEmbedding {
    pub fn new(big: &GaloisRing, d0: usize) -> Result<Self, RingError> {
        if d0 == 0 || !big.d().is_multiple_of(d0) {
            return Err(RingError::BadParameters(format!(
                "subring degree {d0} does not divide {}",
                big.d()
            )));
        }
        let small = big.with_precision(big.m())?.clone_with_degree(d0)?;
        let kbig = big.residue_field();
        let fbar = small.residue_poly().to_vec();
        let eval = |y: &GrElem| {
            let mut acc = kbig.zero();
            for &c in fbar.iter().rev() {
                acc = kbig.add(&kbig.mul(&acc, y), &kbig.from_int(c as i64));
            }
            acc
        };
        let root_bar = kbig
            .elements()
            .find(|y| eval(y).is_zero())
            .expect("residue polynomial of a subfield has a root");
        let root = big.teichmuller(&root_bar);
        let mut root_powers = Vec::with_capacity(d0);
        let mut acc = big.one();
        for _ in 0..d0 {
            root_powers.push(acc.clone());
            acc = big.mul(&acc, &root);
        }
        let ksmall = small.residue_field();
        let mut residue_table = HashMap::new();
        for r in ksmall.elements() {
            let mut img = kbig.zero();
            let mut pw = kbig.one();
            for &c in r.coeffs() {
                img = kbig.add(&img, &kbig.mul(&kbig.from_int(c as i64), &pw));
                pw = kbig.mul(&pw, &root_bar);
            }
            residue_table.insert(img, r);
        }
        Ok(SubringEmbedding { small, big: big.clone(), root_powers, residue_table })
    }

    pub fn small(&self) -> &GaloisRing {
        &self.small
    }

    pub fn big(&self) -> &GaloisRing {
        &self.big
    }

    pub fn embed(&self, x: &GrElem) -> GrElem {
        let mut acc = self.big.zero();
        for (&c, pw) in x.coeffs().iter().zip(&self.root_powers) {
            acc = self.big.add(&acc, &self.big.mul(&self.big.from_int(c as i64), pw));
        }
        acc
    }

    pub fn coerce(&self, a: &GrElem) -> Result<GrElem, RingError> {
        let digits = self
            .big
            .digits(a)
            .iter()
            .map(|x| {
                self.residue_table
                    .get(x)
                    .cloned()
                    .ok_or(RingError::NotInSubring { d0: self.small.d() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.small.from_digits(&digits))
    }
}

impl GaloisRing {
    fn clone_with_degree(&self, d: usize) -> Result<GaloisRing, RingError> {
        GaloisRing::new(self.spec.p, self.spec.m, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teichmuller_lift_examples() {
        let r = GaloisRing::new(3, 2, 1).unwrap();
        let k = r.residue_field();
        assert_eq!(r.teichmuller(&k.from_int(0)), r.from_int(0));
        // brute force: the unique e in Z/9 with e^3 = e and e = 2 mod 3
        let expected: Vec<u64> = (0..9u64).filter(|e| e * e * e % 9 == *e && e % 3 == 2).collect();
        assert_eq!(expected, vec![8]);
        assert_eq!(r.teichmuller(&k.from_int(2)), r.from_int(8));

        let r2 = GaloisRing::new(2, 3, 1).unwrap();
        assert_eq!(r2.teichmuller(&r2.residue_field().one()), r2.one());
    }

    #[test]
    fn teichmuller_elements_are_fixed_by_q_power() {
        for &(p, m, d) in &[(2, 3, 2), (3, 3, 2), (5, 2, 1), (2, 4, 3)] {
            let r = GaloisRing::new(p, m, d).unwrap();
            let k = r.residue_field();
            let q = (p as u128).pow(d as u32);
            for x in k.elements() {
                let w = r.teichmuller(&x);
                assert_eq!(r.residue(&w), x);
                assert_eq!(r.pow(&w, q), w);
            }
        }
    }

    #[test]
    fn defining_poly_is_teichmuller_and_irreducible() {
        let r = GaloisRing::new(3, 4, 2).unwrap();
        r.spec().validate().unwrap();
        // ξ^{p^d - 1} = 1
        assert_eq!(r.pow(r.generator(), 8), r.one());
        // precisions are compatible
        let r2 = r.with_precision(2).unwrap();
        let reduced: Vec<u64> = r.spec().defining_poly.iter().map(|c| c % 9).collect();
        assert_eq!(reduced, r2.spec().defining_poly);
    }

    #[test]
    fn frobenius_trivial_on_prime_ring() {
        let r = GaloisRing::new(3, 3, 1).unwrap();
        for x in r.elements() {
            assert_eq!(r.frobenius(&x), x);
        }
    }

    #[test]
    fn frobenius_on_f4_generator() {
        let r = GaloisRing::new(2, 3, 2).unwrap();
        let k = r.residue_field();
        let g = k.generator().clone();
        let g2 = k.mul(&g, &g);
        assert_eq!(r.frobenius(&r.teichmuller(&g)), r.teichmuller(&g2));
    }

    #[test]
    fn frobenius_acts_digitwise_and_has_order_d() {
        let r = GaloisRing::new(2, 3, 3).unwrap();
        let k = r.residue_field();
        for a in r.elements().step_by(7) {
            let digits = r.digits(&a);
            let fd: Vec<GrElem> = digits.iter().map(|x| k.pow(x, 2)).collect();
            assert_eq!(r.digits(&r.frobenius(&a)), fd);
            assert_eq!(r.frobenius_pow(&a, 3), a);
        }
    }

    #[test]
    fn digits_round_trip_exhaustive() {
        for &(p, m, d) in &[(3, 2, 1), (2, 3, 2), (3, 2, 2), (5, 2, 1), (2, 5, 1)] {
            let r = GaloisRing::new(p, m, d).unwrap();
            for a in r.elements() {
                let digits = r.digits(&a);
                assert_eq!(digits.len(), m as usize);
                assert_eq!(r.from_digits(&digits), a);
            }
        }
    }

    #[test]
    fn unit_iff_leading_digit_nonzero() {
        let r = GaloisRing::new(3, 2, 2).unwrap();
        for a in r.elements() {
            let unit = !r.digits(&a)[0].is_zero();
            assert_eq!(r.is_unit(&a), unit);
            if let Some(b) = r.inv(&a) {
                assert_eq!(r.mul(&a, &b), r.one());
            }
        }
    }

    #[test]
    fn coerce_rational_element() {
        let big = GaloisRing::new(3, 2, 2).unwrap();
        let (small, x) = big.coerce_to_subring(&big.one(), 1).unwrap();
        assert_eq!(x, small.one());
    }

    #[test]
    fn coerce_eighth_root_sum_in_f9() {
        let big = GaloisRing::new(3, 1, 2).unwrap();
        let z = big.root_of_unity(8).unwrap();
        let z3 = big.pow(&z, 3);
        let e = big.add(&z, &z3);
        let (small, x) = big.coerce_to_subring(&e, 1).unwrap();
        // (ζ + ζ^3)^2 = ζ^2 + 2ζ^4 + ζ^6 = -2 since ζ^4 = -1 and ζ^2 + ζ^6 = 0
        assert_eq!(small.mul(&x, &x), small.from_int(-2));
        assert!(x == small.from_int(1) || x == small.from_int(-1));
    }

    #[test]
    fn coerce_rejects_non_fixed() {
        let big = GaloisRing::new(3, 2, 2).unwrap();
        let g = big.generator().clone();
        assert_eq!(
            big.coerce_to_subring(&g, 1).unwrap_err(),
            RingError::NotInSubring { d0: 1 }
        );
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        let big = GaloisRing::new(2, 2, 4).unwrap();
        let emb = SubringEmbedding::new(&big, 2).unwrap();
        let small = emb.small().clone();
        let elems: Vec<GrElem> = small.elements().collect();
        for a in elems.iter().step_by(3) {
            for b in elems.iter().step_by(5) {
                let lhs = emb.embed(&small.mul(a, b));
                let rhs = big.mul(&emb.embed(a), &emb.embed(b));
                assert_eq!(lhs, rhs);
                assert_eq!(emb.embed(&small.add(a, b)), big.add(&emb.embed(a), &emb.embed(b)));
            }
            let img = emb.embed(a);
            assert_eq!(big.frobenius_pow(&img, 2), img);
            assert_eq!(emb.coerce(&img).unwrap(), *a);
        }
    }

    #[test]
    fn root_of_unity_requires_divisibility() {
        let r = GaloisRing::new(2, 2, 1).unwrap();
        assert!(matches!(r.root_of_unity(3), Err(RingError::NoRootOfUnity { .. })));
        let r = GaloisRing::new(2, 2, 2).unwrap();
        let z = r.root_of_unity(3).unwrap();
        assert_eq!(r.pow(&z, 3), r.one());
        assert_ne!(z, r.one());
    }
}
