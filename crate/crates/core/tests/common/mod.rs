//! Fixtures and property checks shared by the property suite and the acceptance target.
#![allow(dead_code)]

use defring_core::cohomology::{is_coboundary, ActionModule, CoboundaryOutcome, TwoCocycle};
use defring_core::groups::{ExtensionGroup, MetacyclicGroup};
use defring_core::hypothesis::{check_condition_b, residue_degree_of_character};
use defring_core::repn::{build_m, descend_rep, flatten_matrix};
use defring_core::ring::{
    cyc_equal_in_zeta, cyc_sum, howell_form, CommRing, CyclotomicSum, GaloisRing, GrElem, Matrix, MatrixRing,
};
use std::sync::OnceLock;

use num_integer::gcd;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CASES: u32 = 128;

/// Γ together with the inflated adjoint module M̃₀ over F_p.
pub fn instance(p: u64, n: u32, ell: u64, q: u64, u: u64, a: u64, d: usize) -> (ExtensionGroup, ActionModule) {
    let g = MetacyclicGroup::new(ell, q, u).unwrap();
    let ring = GaloisRing::new(p, n, d).unwrap();
    let rho_a = descend_rep(&g, a, &ring).unwrap();
    let dt = flatten_matrix(&ring, rho_a.image(g.tau()));
    let ds = flatten_matrix(&ring, rho_a.image(g.sigma()));
    let ext = ExtensionGroup::new(&g, p, n, &dt, &ds).unwrap();
    let rho_bar = descend_rep(&g, 1, &ring.residue_field()).unwrap();
    let module = ActionModule::from_linear(&build_m(&rho_bar), d).unwrap().inflate(&ext);
    (ext, module)
}

/// (p, n, ℓ, q, u, a, d) for every instance the tangent-space comparison runs on.
pub const CONFIGURED: &[(u64, u32, u64, u64, u64, u64, usize)] = &[
    (2, 1, 3, 2, 2, 1, 1),
    (2, 2, 3, 2, 2, 1, 1),
    (3, 1, 8, 2, 3, 2, 1),
    (5, 1, 3, 2, 2, 1, 1),
    (2, 1, 5, 2, 4, 2, 2),
];

pub fn configured_instances() -> &'static [(ExtensionGroup, ActionModule)] {
    static CACHE: OnceLock<Vec<(ExtensionGroup, ActionModule)>> = OnceLock::new();
    CACHE.get_or_init(|| CONFIGURED.iter().map(|&(p, n, ell, q, u, a, d)| instance(p, n, ell, q, u, a, d)).collect())
}

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_elem<R: Rng>(ring: &GaloisRing, rng: &mut R) -> GrElem {
    let c: Vec<u64> = (0..ring.d()).map(|_| rng.gen_range(0..ring.modulus())).collect();
    ring.from_coeffs(&c)
}

/// (p, m, d) small enough for fast arithmetic.
pub fn ring_params() -> impl Strategy<Value = (u64, u32, usize)> {
    (prop::sample::select(vec![2u64, 3, 5, 7]), 1u32..=4, 1usize..=3)
}

pub fn check_teichmuller(p: u64, m: u32, d: usize, seed: u64) -> Result<(), TestCaseError> {
    let ring = GaloisRing::new(p, m, d).unwrap();
    let mut rng = rng_from(seed);
    let (x, y) = (random_elem(&ring, &mut rng), random_elem(&ring, &mut rng));
    let wx = ring.teichmuller(&x);
    prop_assert_eq!(ring.residue(&wx), ring.residue(&x));
    prop_assert_eq!(ring.teichmuller(&wx), wx.clone());
    prop_assert_eq!(ring.pow(&wx, (p as u128).pow(d as u32)), wx.clone());
    let wy = ring.teichmuller(&y);
    prop_assert_eq!(ring.teichmuller(&ring.mul(&x, &y)), ring.mul(&wx, &wy));
    let field = ring.residue_field();
    prop_assert_eq!(ring.reduce_to(&wx, &field), field.teichmuller(&ring.reduce_to(&x, &field)));
    Ok(())
}

pub fn check_frobenius(p: u64, m: u32, d: usize, seed: u64) -> Result<(), TestCaseError> {
    let ring = GaloisRing::new(p, m, d).unwrap();
    let mut rng = rng_from(seed);
    let (x, y) = (random_elem(&ring, &mut rng), random_elem(&ring, &mut rng));
    let f = |a: &GrElem| ring.frobenius(a);
    prop_assert_eq!(f(&ring.add(&x, &y)), ring.add(&f(&x), &f(&y)));
    prop_assert_eq!(f(&ring.mul(&x, &y)), ring.mul(&f(&x), &f(&y)));
    prop_assert_eq!(f(&ring.one()), ring.one());
    prop_assert_eq!(ring.frobenius_pow(&x, d), x.clone());
    let wx = ring.teichmuller(&x);
    prop_assert_eq!(f(&wx), ring.pow(&wx, p as u128));
    prop_assert_eq!(ring.residue(&f(&x)), ring.residue(&ring.pow(&x, p as u128)));
    Ok(())
}

pub fn cyc_strategy() -> impl Strategy<Value = (u64, Vec<i64>, Vec<i64>, Vec<i64>)> {
    (2u64..=16).prop_flat_map(|ell| {
        let v = || prop::collection::vec(-4i64..=4, ell as usize);
        (Just(ell), v(), v(), v())
    })
}

pub fn check_cyc_laws(ell: u64, a: &[i64], b: &[i64], c: &[i64]) -> Result<(), TestCaseError> {
    let (x, y, z) = (CyclotomicSum::from_coeffs(ell, a), CyclotomicSum::from_coeffs(ell, b), CyclotomicSum::from_coeffs(ell, c));
    let eq = |u: &CyclotomicSum, v: &CyclotomicSum| cyc_equal_in_zeta(u, v).unwrap();
    prop_assert!(eq(&x, &x));
    prop_assert_eq!(eq(&x, &y), eq(&y, &x));
    let full = cyc_sum(ell, 0..ell);
    let y2 = x.add(&full.mul(&y));
    prop_assert!(eq(&x, &y2));
    let z2 = y2.add(&full.mul(&z));
    prop_assert!(eq(&y2, &z2) && eq(&x, &z2));
    if eq(&x, &y) && eq(&y, &z) {
        prop_assert!(eq(&x, &z));
    }
    prop_assert_eq!(eq(&x, &y), eq(&x.sub(&y), &CyclotomicSum::zero(ell)));
    Ok(())
}

/// Σ_k ζ^{j + k·ℓ/r} vanishes for every divisor r > 1 of ℓ.
pub fn check_coset_vanishing(ell: u64, j: u64) -> Result<(), TestCaseError> {
    for r in (2..=ell).filter(|r| ell.is_multiple_of(*r)) {
        let s = cyc_sum(ell, (0..r).map(|k| j + k * (ell / r)));
        prop_assert!(cyc_equal_in_zeta(&s, &CyclotomicSum::zero(ell)).unwrap(), "ell={} r={} j={}", ell, r, j);
    }
    let single = cyc_sum(ell, [j]);
    prop_assert!(!cyc_equal_in_zeta(&single, &CyclotomicSum::zero(ell)).unwrap());
    Ok(())
}

fn random_invertible<R: Rng>(ring: &GaloisRing, n: usize, rng: &mut R) -> Matrix<GrElem> {
    let mut u = ring.identity(n);
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let mut e = ring.identity(n);
        match rng.gen_range(0..3) {
            0 => {
                e.set(i, i, ring.zero());
                e.set(j, j, ring.zero());
                e.set(i, j, ring.one());
                e.set(j, i, ring.one());
            }
            1 if i != j => e.set(i, j, random_elem(ring, rng)),
            _ => {
                let unit = loop {
                    let x = random_elem(ring, rng);
                    if ring.is_unit(&x) {
                        break x;
                    }
                };
                e.set(i, i, unit);
            }
        }
        u = ring.mat_mul(&e, &u);
    }
    u
}

pub fn check_howell_canonical(p: u64, m: u32, d: usize, rows: usize, cols: usize, seed: u64) -> Result<(), TestCaseError> {
    let ring = GaloisRing::new(p, m, d).unwrap();
    let mut rng = rng_from(seed);
    let a = Matrix::from_fn(rows, cols, |_, _| {
        let x = random_elem(&ring, &mut rng);
        let v = rng.gen_range(0..=m);
        ring.mul_p_pow(&x, v)
    });
    let u = random_invertible(&ring, rows, &mut rng);
    let ua = ring.mat_mul(&u, &a);
    let (h, hu) = (howell_form(&ring, &a), howell_form(&ring, &ua));
    prop_assert_eq!(&h.rows, &hu.rows);
    for r in a.to_rows() {
        prop_assert!(h.contains(&ring, &r));
    }
    if h.rows.is_empty() {
        prop_assert!(a.data().iter().all(|x| x.is_zero()));
    } else if let Some(t) = &h.transform {
        prop_assert_eq!(ring.mat_mul(&Matrix::from_rows(t.clone()), &a).to_rows(), h.rows.clone());
    }
    Ok(())
}

/// Random 1-cochain c, its coboundary, and a check that the solver recovers a validated witness.
pub fn check_random_coboundary(ext: &ExtensionGroup, module: &ActionModule, seed: u64) -> Result<(), TestCaseError> {
    let group = ext.group();
    let mut rng = rng_from(seed);
    let p = module.p();
    let c: Vec<Vec<u32>> = (0..group.order()).map(|_| (0..module.dim()).map(|_| rng.gen_range(0..p)).collect()).collect();
    let o = TwoCocycle::coboundary(group, module, &c);
    match is_coboundary(group, module, &o).unwrap() {
        CoboundaryOutcome::Solvable(w) => {
            let again = TwoCocycle::coboundary(group, module, &w);
            for g in group.elements() {
                for h in group.elements() {
                    prop_assert_eq!(again.value(g, h), o.value(g, h));
                }
            }
        }
        CoboundaryOutcome::Unsolvable => return Err(TestCaseError::fail("coboundary reported unsolvable")),
    }
    Ok(())
}

/// H = ⟨u⟩ in (Z/ℓ)^×, listed as powers.
pub fn h_of(ell: u64, u: u64) -> Vec<u64> {
    let mut h = vec![1u64];
    let mut x = u % ell;
    while x != 1 {
        h.push(x);
        x = x * u % ell;
    }
    h
}

/// Every (ℓ, u) with 3 ≤ ℓ ≤ max_ell coprime to p and u ≠ 1 a unit.
pub fn action_space(p: u64, max_ell: u64) -> Vec<(u64, u64)> {
    (3..=max_ell)
        .filter(|&ell| gcd(p, ell) == 1)
        .flat_map(|ell| (2..ell).filter(move |&u| gcd(u, ell) == 1).map(move |u| (ell, u)))
        .collect()
}

pub fn check_sign_swap(ell: u64, u: u64, a: u64) -> Result<(), TestCaseError> {
    let h = h_of(ell, u);
    let b = check_condition_b(ell, &h, a);
    let neg = check_condition_b(ell, &h, (ell - a % ell) % ell);
    prop_assert_eq!(b.pairs.len(), b.opposite_sign_pairs.len());
    prop_assert_eq!(b.pairs.len(), neg.pairs.len());
    prop_assert_eq!(&b.opposite_sign_pairs, &neg.pairs);
    Ok(())
}

/// Brute-force count of (h2, h3) ∈ H² with h3 − h2 ≡ a.
pub fn condition_b_oracle(ell: u64, h: &[u64], a: u64) -> usize {
    h.iter().flat_map(|&x| h.iter().map(move |&y| (x, y))).filter(|&(x, y)| (y + ell - x) % ell == a % ell).count()
}

pub fn check_residue_degree_divides(p: u64, ell: u64, u: u64, a: u64) -> Result<(), TestCaseError> {
    let h = h_of(ell, u);
    let d1 = residue_degree_of_character(ell, &h, 1, p);
    let da = residue_degree_of_character(ell, &h, a, p);
    prop_assert_eq!(d1 % da, 0, "p={} ell={} u={} a={}: d_a={} d_1={}", p, ell, u, a, da, d1);
    Ok(())
}
