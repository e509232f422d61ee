//! An explicit pair of non-commuting homomorphism values built from
//! elementary matrices.
//!
//! Over a field containing the ℓ-th roots of unity, with (h2, h3) the unique
//! pair in H² with h3 - h2 = a, the map f: V(θ^a) → End(V) sending w_s to the
//! elementary matrix E_{s3, s2}, where ν(s2) = ν(s)·h2^{-1} and
//! ν(s3) = ν(s)·h3^{-1}, is G-equivariant. For s* with ν(s*) = h2·h3^{-1}
//! the composites f(w_{s*})∘f(w_e) and f(w_e)∘f(w_{s*}) differ on x_{s2(e)}.

use serde::{Deserialize, Serialize};

use super::{big_ring_degree, induced_rep_big, ReprError};
use crate::groups::MetacyclicGroup;
use crate::hypothesis::{check_condition_a, check_condition_b};
use crate::ring::{CommRing, GaloisRing, GrElem, Matrix, MatrixRing};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementaryWitness {
    pub h2: u64,
    pub h3: u64,
    /// s* = σ^j with ν(s*) = h2·h3^{-1}.
    pub s_star_exponent: u64,
    /// Basis index of x_{s2} for s = e.
    pub evaluated_at: usize,
    /// f(w_{s*})(f(w_e)(x_{s2})), as residue coefficients per basis vector.
    pub forward: Vec<Vec<u64>>,
    /// f(w_e)(f(w_{s*})(x_{s2})).
    pub reverse: Vec<Vec<u64>>,
    pub equivariant: bool,
}

impl ElementaryWitness {
    pub fn composites_differ(&self) -> bool {
        self.forward != self.reverse
    }
}

fn elementary(field: &GaloisRing, q: usize, i: usize, j: usize) -> Matrix<GrElem> {
    Matrix::from_fn(q, q, |r, c| if r == i && c == j { field.one() } else { field.zero() })
}

pub fn elementary_witness(g: &MetacyclicGroup, a: u64, p: u64) -> Result<ElementaryWitness, ReprError> {
    let ell = g.ell();
    let q = g.q() as usize;
    let h = g.h_set();
    let cond_a = check_condition_a(ell, &h, a);
    if !cond_a.pass {
        return Err(ReprError::HypothesisFailure(format!("condition (a) fails at h = {:?}", cond_a.failing_h)));
    }
    let cond_b = check_condition_b(ell, &h, a);
    if !cond_b.pass {
        return Err(ReprError::HypothesisFailure(format!(
            "condition (b) needs exactly one pair, found {}",
            cond_b.pairs.len()
        )));
    }
    let (h2, h3) = cond_b.pairs[0];
    let log = |x: u64| h.iter().position(|&y| y == x).expect("element of H") ;
    let (l2, l3) = (log(h2), log(h3));
    let s2 = |j: usize| (j + q - l2) % q;
    let s3 = |j: usize| (j + q - l3) % q;
    let field = GaloisRing::new(p, 1, big_ring_degree(p, ell, 1))?;
    let f: Vec<Matrix<GrElem>> = (0..q).map(|j| elementary(&field, q, s3(j), s2(j))).collect();
    let apply_f = |w: &[GrElem]| -> Matrix<GrElem> {
        w.iter().zip(&f).fold(field.mat_zero(q, q), |acc, (c, e)| field.mat_add(&acc, &field.mat_scale(c, e)))
    };
    let rho_a = induced_rep_big(g, a, &field)?;
    let rho_1 = induced_rep_big(g, 1, &field)?;
    let equivariant = [g.tau(), g.sigma()].iter().all(|&x| {
        let ra = rho_a.image(x);
        let r1 = rho_1.image(x);
        let r1inv = field.mat_inv(r1).expect("invertible");
        (0..q).all(|j| {
            let col: Vec<GrElem> = (0..q).map(|i| ra.get(i, j).clone()).collect();
            apply_f(&col) == field.mat_mul(&field.mat_mul(r1, &f[j]), &r1inv)
        })
    });
    let j_star = (l2 + q - l3) % q;
    let x = s2(0);
    let basis: Vec<GrElem> = (0..q).map(|i| if i == x { field.one() } else { field.zero() }).collect();
    let forward = field.mat_vec(&f[j_star], &field.mat_vec(&f[0], &basis));
    let reverse = field.mat_vec(&f[0], &field.mat_vec(&f[j_star], &basis));
    let coeffs = |v: Vec<GrElem>| v.into_iter().map(|e| e.coeffs().to_vec()).collect();
    Ok(ElementaryWitness {
        h2,
        h3,
        s_star_exponent: j_star as u64,
        evaluated_at: x,
        forward: coeffs(forward),
        reverse: coeffs(reverse),
        equivariant,
    })
}
