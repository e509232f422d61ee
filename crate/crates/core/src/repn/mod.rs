//! Representations of the metacyclic group and its extensions.
//!
//! The induced representation Ind_{⟨τ⟩}^G θ^a is first written down over a
//! Galois ring large enough to contain ℓ-th roots of unity. It is then
//! realised over the smaller ring W(k)/p^m on the module W[x]/(f), where f is
//! the product of (x - ζ^{ah}) over h ∈ H: τ acts as multiplication by x and
//! σ as the substitution x ↦ x^u. When the eigenvalues repeat the monomial
//! model is used instead, provided its entries already lie in W(k).

mod hom;
mod witness;

pub use hom::{
    build_m, commutator_witness, flatten_matrix, flatten_vector, hom_dimension_over_big_field,
    hom_module, mult_matrix, psi_injective, restrict_scalars, unflatten_matrix,
    CommutatorWitness, HomModule, LinearModule,
};
pub use witness::{elementary_witness, ElementaryWitness};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{ExtensionGroup, FiniteGroup, MetacyclicGroup};
use crate::ring::{
    cyc_equal_in_zeta, cyc_sum, multiplicative_order, CommRing, CyclotomicSum, GaloisRing, GrElem,
    Matrix, MatrixRing, RingError, SubringEmbedding,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReprError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("representation is not a homomorphism at the pair ({0}, {1})")]
    HomomorphismFailure(u32, u32),
    #[error("the representation with exponent {a} cannot be realised over residue degree {d}")]
    NotDescendable { a: u64, d: usize },
    #[error("descended model disagrees with the induced representation at element {0}")]
    ModelMismatch(u32),
    #[error("hypothesis failure: {0}")]
    HypothesisFailure(String),
    #[error("wrong number of generator images: expected {expected}, got {got}")]
    GeneratorCount { expected: usize, got: usize },
}

/// A matrix representation with the image of every group element stored.
#[derive(Clone, Debug)]
pub struct Representation {
    ring: GaloisRing,
    dim: usize,
    images: Vec<Matrix<GrElem>>,
}

impl Representation {
    /// Extend generator images along the Cayley tree and verify the
    /// homomorphism property on all pairs.
    pub fn from_generators(
        group: &FiniteGroup,
        ring: &GaloisRing,
        gens: &[Matrix<GrElem>],
    ) -> Result<Self, ReprError> {
        if gens.len() != group.generators().len() {
            return Err(ReprError::GeneratorCount { expected: group.generators().len(), got: gens.len() });
        }
        let dim = gens.first().map_or(0, Matrix::rows);
        let mut images: Vec<Option<Matrix<GrElem>>> = vec![None; group.order()];
        images[0] = Some(ring.identity(dim));
        for &g in &group.tree().order[1..] {
            let (h, i) = group.tree().parent[g as usize].expect("non-root tree node");
            let img = ring.mat_mul(images[h as usize].as_ref().expect("BFS order"), &gens[i]);
            images[g as usize] = Some(img);
        }
        let rep = Representation {
            ring: ring.clone(),
            dim,
            images: images.into_iter().map(|x| x.expect("tree spans the group")).collect(),
        };
        if let Some((a, b)) = rep.homomorphism_failure(group) {
            return Err(ReprError::HomomorphismFailure(a, b));
        }
        Ok(rep)
    }

    pub fn ring(&self) -> &GaloisRing {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn image(&self, g: u32) -> &Matrix<GrElem> {
        &self.images[g as usize]
    }

    pub fn images(&self) -> &[Matrix<GrElem>] {
        &self.images
    }

    /// First pair (g, h) with ρ(gh) ≠ ρ(g)ρ(h), searching all pairs.
    pub fn homomorphism_failure(&self, group: &FiniteGroup) -> Option<(u32, u32)> {
        if !self.ring.is_identity(&self.images[0]) {
            return Some((0, 0));
        }
        group.elements().into_par_iter().find_map_first(|a| {
            group.elements().find_map(|b| {
                let lhs = &self.images[group.mul(a, b) as usize];
                let rhs = self.ring.mat_mul(&self.images[a as usize], &self.images[b as usize]);
                (*lhs != rhs).then_some((a, b))
            })
        })
    }

    /// Coefficient-wise reduction to a lower precision.
    pub fn reduce_to(&self, target: &GaloisRing) -> Representation {
        Representation {
            ring: target.clone(),
            dim: self.dim,
            images: self
                .images
                .iter()
                .map(|m| m.map(|x| self.ring.reduce_to(x, target)))
                .collect(),
        }
    }

    /// Inflation along π: Γ → G.
    pub fn inflate(&self, ext: &ExtensionGroup) -> Representation {
        Representation {
            ring: self.ring.clone(),
            dim: self.dim,
            images: ext.group().elements().map(|x| self.images[ext.project(x) as usize].clone()).collect(),
        }
    }

    /// Extension of scalars along a subring embedding.
    pub fn embed(&self, emb: &SubringEmbedding) -> Representation {
        Representation {
            ring: emb.big().clone(),
            dim: self.dim,
            images: self.images.iter().map(|m| m.map(|x| emb.embed(x))).collect(),
        }
    }
}

/// Degree of the smallest field F_{p^D} containing both k = F_{p^d} and the ℓ-th roots of unity.
pub fn big_ring_degree(p: u64, ell: u64, d: usize) -> usize {
    let ord = multiplicative_order(p, ell).expect("p is coprime to ell") as usize;
    num_integer::lcm(ord, d)
}

/// Ind_{⟨τ⟩}^G θ^a over a ring containing a primitive ℓ-th root of unity ζ.
/// Basis w_j = w_{σ^j}: τ w_j = ζ^{a·u^{-j}} w_j and σ w_j = w_{j+1}.
pub fn induced_rep_big(g: &MetacyclicGroup, a: u64, big: &GaloisRing) -> Result<Representation, ReprError> {
    let zeta = big.root_of_unity(g.ell())?;
    let q = g.q() as usize;
    let h = g.h_set();
    let tau = Matrix::from_fn(q, q, |i, j| {
        if i == j {
            let uinv = h[(q - j) % q];
            big.pow(&zeta, (a * uinv % g.ell()) as u128)
        } else {
            big.zero()
        }
    });
    let sigma = shift_matrix(big, q);
    Representation::from_generators(g.group(), big, &[tau, sigma])
}

fn shift_matrix(ring: &GaloisRing, q: usize) -> Matrix<GrElem> {
    Matrix::from_fn(q, q, |i, j| if i == (j + 1) % q { ring.one() } else { ring.zero() })
}

fn eigen_exponents(g: &MetacyclicGroup, a: u64) -> Vec<u64> {
    g.h_set().iter().map(|h| a % g.ell() * h % g.ell()).collect()
}

/// The representation with exponent `a` realised over `target` = GR(p^m, d).
pub fn descend_rep(g: &MetacyclicGroup, a: u64, target: &GaloisRing) -> Result<Representation, ReprError> {
    let p = target.p();
    let ell = g.ell();
    let q = g.q() as usize;
    let big = GaloisRing::new(p, target.m(), big_ring_degree(p, ell, target.d()))?;
    let emb = SubringEmbedding::new(&big, target.d())?;
    let zeta = big.root_of_unity(ell)?;
    let exps = eigen_exponents(g, a);
    let mut sorted = exps.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let not_descendable = |_| ReprError::NotDescendable { a, d: target.d() };
    let (tau, sigma) = if sorted.len() == q {
        // f = Π (x - ζ^e), little-endian
        let mut f = vec![big.one()];
        for &e in &exps {
            let root = big.pow(&zeta, e as u128);
            let mut next = vec![big.zero(); f.len() + 1];
            for (i, c) in f.iter().enumerate() {
                next[i + 1] = big.add(&next[i + 1], c);
                next[i] = big.sub(&next[i], &big.mul(&root, c));
            }
            f = next;
        }
        let f: Vec<GrElem> = f.iter().map(|c| emb.coerce(c)).collect::<Result<_, _>>().map_err(not_descendable)?;
        let tau = Matrix::from_fn(q, q, |i, j| {
            if j + 1 < q {
                if i == j + 1 { target.one() } else { target.zero() }
            } else {
                target.neg(&f[i])
            }
        });
        // x^k mod f for k < ℓ
        let mut powers = vec![{
            let mut v = vec![target.zero(); q];
            v[0] = target.one();
            v
        }];
        for _ in 1..ell {
            let next = target.mat_vec(&tau, powers.last().expect("nonempty"));
            powers.push(next);
        }
        let u = g.u();
        let sigma = Matrix::from_fn(q, q, |i, j| powers[(j as u64 * u % ell) as usize][i].clone());
        (tau, sigma)
    } else {
        let h = g.h_set();
        let diag: Vec<GrElem> = (0..q)
            .map(|j| {
                let e = a * h[(q - j) % q] % ell;
                emb.coerce(&big.pow(&zeta, e as u128))
            })
            .collect::<Result<_, _>>()
            .map_err(not_descendable)?;
        let tau = Matrix::from_fn(q, q, |i, j| if i == j { diag[i].clone() } else { target.zero() });
        (tau, shift_matrix(target, q))
    };
    let rep = Representation::from_generators(g.group(), target, &[tau, sigma])?;
    let reference = induced_rep_big(g, a, &big)?;
    let lifted = rep.embed(&emb);
    for x in g.group().elements() {
        if big.char_poly(lifted.image(x)) != big.char_poly(reference.image(x)) {
            return Err(ReprError::ModelMismatch(x));
        }
    }
    Ok(rep)
}

/// Brauer character of Ind θ^a: Σ_h x^{ach} at τ^c, zero off ⟨τ⟩.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrauerCharacter {
    pub values: Vec<CyclotomicSum>,
}

impl BrauerCharacter {
    pub fn value(&self, g: u32) -> &CyclotomicSum {
        &self.values[g as usize]
    }

    pub fn is_class_function(&self, group: &FiniteGroup) -> bool {
        group.elements().all(|x| {
            group.elements().all(|g| {
                let c = group.mul(group.mul(x, g), group.inv(x));
                cyc_equal_in_zeta(self.value(c), self.value(g)).expect("same modulus")
            })
        })
    }
}

pub fn char_of_induced(g: &MetacyclicGroup, a: u64) -> BrauerCharacter {
    let ell = g.ell();
    let h = g.h_set();
    let values = g
        .group()
        .elements()
        .map(|x| {
            let (c, s) = g.coords(x);
            if s == 0 {
                cyc_sum(ell, h.iter().map(|&hh| a % ell * c % ell * hh % ell))
            } else {
                CyclotomicSum::zero(ell)
            }
        })
        .collect();
    BrauerCharacter { values }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplicity {
    pub s_count: usize,
    pub mult: usize,
    /// The character inner product Σ_c B_a(τ^c)·B_1(τ^c)·B_1(τ^{-c}) equals ℓ·#S in Z[ζ].
    pub inner_product_agrees: bool,
}

/// mult(V(θ^a), M_0) = #S/q with S = {(h1, h2, h3) ∈ H³ : a·h1 + h2 - h3 = 0}.
pub fn multiplicity_by_character(g: &MetacyclicGroup, a: u64) -> Multiplicity {
    let ell = g.ell();
    let h = g.h_set();
    let mut s_count = 0;
    for &h1 in &h {
        for &h2 in &h {
            for &h3 in &h {
                if (a % ell * h1 + h2 + ell - h3).is_multiple_of(ell) {
                    s_count += 1;
                }
            }
        }
    }
    assert_eq!(s_count % h.len(), 0, "H acts freely on S");
    let ba = char_of_induced(g, a);
    let b1 = char_of_induced(g, 1);
    let mut total = CyclotomicSum::zero(ell);
    for c in 0..ell {
        let x = g.element(c, 0);
        let xinv = g.element(ell - c, 0);
        total = total.add(&ba.value(x).mul(b1.value(x)).mul(b1.value(xinv)));
    }
    let expected = CyclotomicSum::constant(ell, (ell as usize * s_count) as i64);
    Multiplicity {
        s_count,
        mult: s_count / h.len(),
        inner_product_agrees: cyc_equal_in_zeta(&total, &expected).expect("same modulus"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g3() -> MetacyclicGroup {
        MetacyclicGroup::new(3, 2, 2).unwrap()
    }

    fn g8() -> MetacyclicGroup {
        MetacyclicGroup::new(8, 2, 3).unwrap()
    }

    #[test]
    fn induced_over_f4() {
        let g = g3();
        let big = GaloisRing::new(2, 1, 2).unwrap();
        let rep = induced_rep_big(&g, 1, &big).unwrap();
        let z = big.root_of_unity(3).unwrap();
        let t = rep.image(g.tau());
        assert_eq!(*t.get(0, 0), z);
        assert_eq!(*t.get(1, 1), big.pow(&z, 2));
        let s = rep.image(g.sigma());
        assert_eq!(*s, Matrix::from_fn(2, 2, |i, j| if i != j { big.one() } else { big.zero() }));
    }

    #[test]
    fn induced_trivial_character_is_a_permutation_rep() {
        let g = g3();
        let big = GaloisRing::new(5, 2, 2).unwrap();
        let rep = induced_rep_big(&g, 0, &big).unwrap();
        assert!(big.is_identity(rep.image(g.tau())));
    }

    #[test]
    fn induced_a2_for_ell8_has_tau_order_4() {
        let g = g8();
        let big = GaloisRing::new(3, 1, 2).unwrap();
        let rep = induced_rep_big(&g, 2, &big).unwrap();
        let t = rep.image(g.tau());
        assert!(big.is_identity(&big.mat_pow(t, 4)));
        assert!(!big.is_identity(&big.mat_pow(t, 2)));
    }

    #[test]
    fn descend_ell3_over_z2() {
        let g = g3();
        let r = GaloisRing::new(2, 3, 1).unwrap();
        let rep = descend_rep(&g, 1, &r).unwrap();
        // companion of x^2 + x + 1
        let t = Matrix::from_rows(vec![vec![r.zero(), r.from_int(-1)], vec![r.one(), r.from_int(-1)]]);
        assert_eq!(*rep.image(g.tau()), t);
        // x ↦ x^2 = -1 - x
        let s = Matrix::from_rows(vec![vec![r.one(), r.from_int(-1)], vec![r.zero(), r.from_int(-1)]]);
        assert_eq!(*rep.image(g.sigma()), s);
    }

    #[test]
    fn descend_ell3_over_z4_has_same_polynomial() {
        let g = g3();
        let r = GaloisRing::new(2, 2, 1).unwrap();
        let rep = descend_rep(&g, 1, &r).unwrap();
        assert_eq!(
            r.char_poly(rep.image(g.tau())),
            vec![r.one(), r.one(), r.one()]
        );
    }

    #[test]
    fn descend_ell8_over_z3_coefficients() {
        let g = g8();
        let r = GaloisRing::new(3, 3, 1).unwrap();
        let rep = descend_rep(&g, 1, &r).unwrap();
        let cp = r.char_poly(rep.image(g.tau()));
        // x^2 - (ζ + ζ^3)x + ζ^4 with ζ^4 = -1 and (ζ + ζ^3)^2 = -2
        assert_eq!(cp[0], r.from_int(-1));
        assert_eq!(r.mul(&cp[1], &cp[1]), r.from_int(-2));
    }

    #[test]
    fn descend_fails_without_the_character_field() {
        // ℓ = 5, H = {1, 4}, p = 2: the character field has residue degree 2
        let g = MetacyclicGroup::new(5, 2, 4).unwrap();
        let r = GaloisRing::new(2, 2, 1).unwrap();
        assert_eq!(descend_rep(&g, 1, &r).unwrap_err(), ReprError::NotDescendable { a: 1, d: 1 });
        let r2 = GaloisRing::new(2, 2, 2).unwrap();
        assert!(descend_rep(&g, 1, &r2).is_ok());
    }

    #[test]
    fn monomial_model_for_repeated_eigenvalues() {
        let g = g8();
        let r = GaloisRing::new(3, 2, 1).unwrap();
        let rep = descend_rep(&g, 4, &r).unwrap();
        assert_eq!(*rep.image(g.tau()), r.mat_scale(&r.from_int(-1), &r.identity(2)));
        let triv = descend_rep(&g, 0, &r).unwrap();
        assert!(r.is_identity(triv.image(g.tau())));
    }

    #[test]
    fn characters() {
        let g = g3();
        let ch = char_of_induced(&g, 1);
        assert_eq!(ch.value(g.tau()).coeffs(), &[0, 1, 1]);
        assert_eq!(ch.value(g.tau()).as_integer(), Some(-1));
        assert_eq!(ch.value(0).as_integer(), Some(2));
        assert!(ch.is_class_function(g.group()));
        let g = g8();
        let ch = char_of_induced(&g, 2);
        assert_eq!(ch.value(g.tau()), &cyc_sum(8, [2, 6]));
        assert_eq!(ch.value(g.tau()).as_integer(), Some(0));
        assert!(ch.is_class_function(g.group()));
    }

    #[test]
    fn multiplicities() {
        let m = multiplicity_by_character(&g8(), 2);
        assert_eq!((m.s_count, m.mult), (2, 1));
        assert!(m.inner_product_agrees);
        let m = multiplicity_by_character(&g3(), 1);
        assert_eq!(m.mult, 1);
        assert!(m.inner_product_agrees);
        let m = multiplicity_by_character(&g3(), 0);
        assert_eq!((m.s_count, m.mult), (4, 2));
        assert!(m.inner_product_agrees);
    }
}
