use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::test_ring::{TestRing, TrElem};
use super::DeformationError;
use crate::groups::FiniteGroup;
use crate::ring::{CommRing, GrElem, Matrix, MatrixRing};

/// Largest enumeration |m_A|^{q²·#generators} attempted.
pub const BRUTE_FORCE_LIMIT: u128 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefCount {
    pub ring: String,
    /// Homomorphisms Γ → GL_q(A) lifting ρ̄.
    pub lifts: usize,
    /// Strict-equivalence classes among them.
    pub classes: usize,
}

/// Deformations of ρ̄ to A, counted by enumerating generator images.
///
/// `rho_bar[g]` is ρ̄(g) over k for every element g of `group`.
pub fn brute_force_def_count(
    group: &FiniteGroup,
    rho_bar: &[Matrix<GrElem>],
    a: &TestRing,
) -> Result<DefCount, DeformationError> {
    let elements = a.elements(10_000).ok_or(DeformationError::TooLarge(u128::MAX))?;
    let index: HashMap<TrElem, usize> = elements.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let ideal: Vec<TrElem> = elements.iter().filter(|x| a.in_maximal_ideal(x)).cloned().collect();
    let q = rho_bar[0].rows();
    let gens = group.generators();
    let per_matrix = (ideal.len() as u128).pow((q * q) as u32);
    let total = per_matrix.checked_pow(gens.len() as u32).unwrap_or(u128::MAX);
    if total > BRUTE_FORCE_LIMIT {
        return Err(DeformationError::TooLarge(total));
    }
    let offsets: Vec<Matrix<TrElem>> = (0..per_matrix as usize)
        .map(|mut code| {
            Matrix::from_fn(q, q, |_, _| {
                let x = ideal[code % ideal.len()].clone();
                code /= ideal.len();
                x
            })
        })
        .collect();
    let base: Vec<Matrix<TrElem>> = gens.iter().map(|&s| rho_bar[s as usize].map(|x| a.lift_residue(x))).collect();
    let tree = group.tree();
    let id = a.identity(q);
    let extend = |choice: &[Matrix<TrElem>]| -> Option<Vec<Matrix<TrElem>>> {
        let mut img = vec![id.clone(); group.order()];
        for &x in &tree.order[1..] {
            let (h, i) = tree.parent[x as usize].expect("spanning tree");
            img[x as usize] = a.mat_mul(&img[h as usize], &choice[i]);
        }
        let edges_ok = group.elements().all(|g| {
            gens.iter().enumerate().all(|(i, &s)| a.mat_mul(&img[g as usize], &choice[i]) == img[group.mul(g, s) as usize])
        });
        let full_ok = edges_ok
            && group
                .elements()
                .all(|g| group.elements().all(|h| a.mat_mul(&img[g as usize], &img[h as usize]) == img[group.mul(g, h) as usize]));
        full_ok.then_some(img)
    };
    let lifts: Vec<Vec<Matrix<TrElem>>> = (0..total as usize)
        .into_par_iter()
        .filter_map(|mut code| {
            let choice: Vec<Matrix<TrElem>> = base
                .iter()
                .map(|b| {
                    let off = &offsets[code % per_matrix as usize];
                    code /= per_matrix as usize;
                    a.mat_add(b, off)
                })
                .collect();
            extend(&choice).map(|_| choice)
        })
        .collect();
    let conjugators: Vec<(Matrix<TrElem>, Matrix<TrElem>)> = offsets
        .iter()
        .map(|y| {
            let p = a.mat_add(&id, y);
            let pinv = a.mat_inv(&p).expect("1 + m_A is a group");
            (p, pinv)
        })
        .collect();
    let encode = |tuple: &[Matrix<TrElem>]| -> Vec<usize> {
        tuple.iter().flat_map(|m| m.data().iter().map(|x| index[x])).collect()
    };
    let classes: BTreeSet<Vec<usize>> = lifts
        .par_iter()
        .map(|tuple| {
            conjugators
                .iter()
                .map(|(p, pinv)| {
                    let conj: Vec<Matrix<TrElem>> = tuple.iter().map(|m| a.mat_mul(&a.mat_mul(p, m), pinv)).collect();
                    encode(&conj)
                })
                .min()
                .expect("identity conjugator")
        })
        .collect();
    Ok(DefCount { ring: a.label(), lifts: lifts.len(), classes: classes.len() })
}

/// |{x ∈ m_A : p^n·x = 0, x² = 0}|, the number of W-algebra maps W[[t]]/(p^n t, t²) → A.
pub fn hom_count_r_to_a(n: u32, a: &TestRing) -> Result<usize, DeformationError> {
    let elements = a.elements(1_000_000).ok_or(DeformationError::TooLarge(u128::MAX))?;
    let pn = a.from_int((a.p() as i64).pow(n));
    Ok(elements
        .iter()
        .filter(|x| a.in_maximal_ideal(x) && a.is_zero(&a.mul(&pn, x)) && a.is_zero(&a.mul(x, x)))
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::lift::tests::fixture;
    use crate::deformation::test_ring::{build_test_ring, TestRingKind};

    fn s4_rho_bar() -> (crate::groups::ExtensionGroup, Vec<Matrix<GrElem>>) {
        let f = fixture(2, 1, 3, 3, 2, 2, 1, 1);
        let k = f.rho_w.ring().residue_field();
        let rb = f.rho_w.reduce_to(&k).inflate(&f.ext);
        (f.ext, rb.images().to_vec())
    }

    #[test]
    fn s4_counts_match_hom_counts() {
        let (ext, rb) = s4_rho_bar();
        let cases = [
            (build_test_ring(TestRingKind::WittTruncation, 2, 1, 1, 1).unwrap(), 1),
            (build_test_ring(TestRingKind::DualNumbers, 2, 1, 1, 1).unwrap(), 2),
            (build_test_ring(TestRingKind::WittTruncation, 2, 1, 2, 1).unwrap(), 2),
        ];
        for (ring, expected) in cases {
            let count = brute_force_def_count(ext.group(), &rb, &ring).unwrap();
            assert_eq!(count.classes, expected, "{}", ring.label());
            assert_eq!(hom_count_r_to_a(1, &ring).unwrap(), expected);
        }
    }

    #[test]
    fn hom_counts() {
        for p in [2u64, 3, 5] {
            let de = build_test_ring(TestRingKind::DualNumbers, p, 1, 1, 1).unwrap();
            for n in 1..4 {
                assert_eq!(hom_count_r_to_a(n, &de).unwrap(), p as usize);
            }
        }
        let z4 = build_test_ring(TestRingKind::WittTruncation, 2, 1, 2, 1).unwrap();
        assert_eq!(hom_count_r_to_a(1, &z4).unwrap(), 2);
        // R itself at n = 1, m = 3: x = w + a·t with w ∈ 2Z/8; x² = w² + 2wa·t forces w ∈ {0, 4}
        // and 2x = 2w = 0 forces w ∈ {0, 4}; a is free in F_2
        let r = build_test_ring(TestRingKind::RModel, 2, 1, 3, 1).unwrap();
        assert_eq!(hom_count_r_to_a(1, &r).unwrap(), 4);
    }

    #[test]
    fn guard_rejects_large_enumerations() {
        let (ext, rb) = s4_rho_bar();
        let big = build_test_ring(TestRingKind::WittTruncation, 2, 1, 3, 1).unwrap();
        assert!(matches!(brute_force_def_count(ext.group(), &rb, &big), Err(DeformationError::TooLarge(_))));
    }
}
