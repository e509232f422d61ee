//! The three conditions on (ℓ, H, a) and an exhaustive search for tuples
//! satisfying them.
//!
//! (a) (h - 1)·a ≠ 0 in Z/ℓ for every h ≠ 1 in H.
//! (b) exactly one pair (h2, h3) ∈ H² with h3 - h2 = a.
//! (c) the character values Σ_h ζ^{ach} generate the same residue field as
//!     those of a = 1.
//!
//! Residue degrees are decided on exact cyclotomic sums: the degree of the
//! field generated by a set of values is the least d with ζ ↦ ζ^{p^d}
//! fixing every value in Z[ζ_ℓ].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::pow_mod;
use crate::ring::{cyc_equal_in_zeta, cyc_frobenius, cyc_sum, is_prime, multiplicative_order};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypothesisError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = {p} divides ell = {ell}")]
    NotCoprime { p: u64, ell: u64 },
    #[error("the exponent a must be nonzero mod ell")]
    ZeroExponent,
    #[error("u = {u} does not have order {q} mod {ell}")]
    BadAction { ell: u64, q: u64, u: u64 },
    #[error("n must be at least 1")]
    BadPrecision,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ParameterTuple {
    pub p: u64,
    pub n: u32,
    pub ell: u64,
    pub q: u64,
    pub u: u64,
    pub a: u64,
}

impl ParameterTuple {
    pub fn validate(&self) -> Result<(), HypothesisError> {
        if !is_prime(self.p) {
            return Err(HypothesisError::NotPrime(self.p));
        }
        if self.n == 0 {
            return Err(HypothesisError::BadPrecision);
        }
        if self.ell < 2 || num_integer::gcd(self.p, self.ell) != 1 {
            return Err(HypothesisError::NotCoprime { p: self.p, ell: self.ell });
        }
        if self.a.is_multiple_of(self.ell) {
            return Err(HypothesisError::ZeroExponent);
        }
        if self.q < 2 || multiplicative_order(self.u, self.ell) != Some(self.q) {
            return Err(HypothesisError::BadAction { ell: self.ell, q: self.q, u: self.u });
        }
        Ok(())
    }

    /// H = ⟨u⟩ as u^0, …, u^{q-1}.
    pub fn h_set(&self) -> Vec<u64> {
        (0..self.q).map(|s| pow_mod(self.u, s, self.ell)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionA {
    pub pass: bool,
    pub failing_h: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionB {
    pub pass: bool,
    /// Pairs (h2, h3) with h3 - h2 = a.
    pub pairs: Vec<(u64, u64)>,
    /// Pairs (h2, h3) with h2 - h3 = a.
    pub opposite_sign_pairs: Vec<(u64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionC {
    pub pass: bool,
    /// Residue degree for a = 1; this is the degree of k.
    pub d: u32,
    pub d_a: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub cond_a: ConditionA,
    pub cond_b: ConditionB,
    pub cond_c: ConditionC,
    pub k_degree: u32,
    pub passed: bool,
}

pub fn check_condition_a(ell: u64, h: &[u64], a: u64) -> ConditionA {
    let failing_h = h.iter().copied().find(|&x| x % ell != 1 % ell && ((x + ell - 1) % ell * (a % ell)).is_multiple_of(ell));
    ConditionA { pass: failing_h.is_none(), failing_h }
}

pub fn check_condition_b(ell: u64, h: &[u64], a: u64) -> ConditionB {
    let a = a % ell;
    let mut pairs = Vec::new();
    let mut opposite_sign_pairs = Vec::new();
    for &h2 in h {
        for &h3 in h {
            if (h3 + ell - h2) % ell == a {
                pairs.push((h2, h3));
            }
            if (h2 + ell - h3) % ell == a {
                opposite_sign_pairs.push((h2, h3));
            }
        }
    }
    ConditionB { pass: pairs.len() == 1, pairs, opposite_sign_pairs }
}

/// Least d ≥ 1 such that ζ ↦ ζ^{p^d} fixes Σ_h ζ^{ach} for every c.
pub fn residue_degree_of_character(ell: u64, h: &[u64], a: u64, p: u64) -> u32 {
    let values: Vec<_> = (0..ell)
        .map(|c| cyc_sum(ell, h.iter().map(|&x| a % ell * c % ell * x % ell)))
        .collect();
    let bound = multiplicative_order(p, ell).expect("p coprime to ell") as u32;
    (1..=bound)
        .find(|&d| {
            let pd = pow_mod(p, d as u64, ell);
            values.iter().all(|v| {
                let image = cyc_frobenius(v, pd).expect("coprime");
                cyc_equal_in_zeta(&image, v).expect("same modulus")
            })
        })
        .expect("the full Frobenius order fixes everything")
}

pub fn check_condition_c(ell: u64, h: &[u64], a: u64, p: u64) -> ConditionC {
    let d = residue_degree_of_character(ell, h, 1, p);
    let d_a = residue_degree_of_character(ell, h, a, p);
    ConditionC { pass: d == d_a, d, d_a }
}

pub fn check_hypothesis(t: &ParameterTuple) -> HypothesisReport {
    let h = t.h_set();
    let cond_a = check_condition_a(t.ell, &h, t.a);
    let cond_b = check_condition_b(t.ell, &h, t.a);
    let cond_c = check_condition_c(t.ell, &h, t.a, t.p);
    let passed = cond_a.pass && cond_b.pass && cond_c.pass;
    HypothesisReport { k_degree: cond_c.d, cond_a, cond_b, cond_c, passed }
}

/// One passing tuple from [`search`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SearchRow {
    pub tuple: ParameterTuple,
    pub d: u32,
}

/// Every (ℓ, q, u, a) with ℓ ≤ max_ell coprime to p, 2 ≤ q ≤ max_q, u of order q and
/// a ≠ 0 satisfying all three conditions, sorted.
pub fn search(p: u64, n: u32, max_ell: u64, max_q: u64) -> Result<Vec<SearchRow>, HypothesisError> {
    if !is_prime(p) {
        return Err(HypothesisError::NotPrime(p));
    }
    if n == 0 {
        return Err(HypothesisError::BadPrecision);
    }
    let mut rows: Vec<SearchRow> = (2..=max_ell)
        .into_par_iter()
        .filter(|&ell| num_integer::gcd(p, ell) == 1)
        .flat_map_iter(|ell| {
            let mut out = Vec::new();
            for u in 1..ell {
                let Some(q) = multiplicative_order(u, ell) else { continue };
                if q < 2 || q > max_q {
                    continue;
                }
                for a in 1..ell {
                    let tuple = ParameterTuple { p, n, ell, q, u, a };
                    let rep = check_hypothesis(&tuple);
                    if rep.passed {
                        out.push(SearchRow { tuple, d: rep.k_degree });
                    }
                }
            }
            out
        })
        .collect();
    rows.sort();
    Ok(rows)
}
