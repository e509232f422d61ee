use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::test_ring::{TestRing, TestRingKind, TrElem};
use super::DeformationError;
use crate::cohomology::{is_coboundary, ActionModule, CoboundaryOutcome, TwoCocycle};
use crate::groups::{ExtensionGroup, FiniteGroup};
use crate::repn::{unflatten_matrix, Representation};
use crate::ring::{CommRing, GaloisRing, GrElem, Matrix, MatrixRing};

/// A matrix-valued map on the elements of a group, over a [`TestRing`].
#[derive(Clone, Debug)]
pub struct LiftRecord {
    pub ring: TestRing,
    pub dim: usize,
    pub images: Vec<Matrix<TrElem>>,
}

impl LiftRecord {
    /// First pair (g, h) with ρ(g)ρ(h) ≠ ρ(gh), checked on all pairs.
    pub fn homomorphism_failure(&self, group: &FiniteGroup) -> Option<(u32, u32)> {
        let n = group.order() as u32;
        (0..n * n)
            .into_par_iter()
            .find_first(|&k| {
                let (g, h) = (k / n, k % n);
                self.ring.mat_mul(&self.images[g as usize], &self.images[h as usize])
                    != self.images[group.mul(g, h) as usize]
            })
            .map(|k| (k / n, k % n))
    }

    /// Entrywise image in the residue field.
    pub fn residue_images(&self) -> Vec<Matrix<GrElem>> {
        self.images.iter().map(|m| m.map(|x| self.ring.residue(x))).collect()
    }

    /// Entrywise W-parts.
    pub fn w_images(&self) -> Vec<Matrix<GrElem>> {
        self.images.iter().map(|m| m.map(|x| x.w.clone())).collect()
    }
}

/// ν(X) = I + t·X over the R-model, for X over A = W/p^n.
pub fn nu_embed(r: &TestRing, x: &Matrix<GrElem>) -> Matrix<TrElem> {
    let q = x.rows();
    Matrix::from_fn(q, q, |i, j| {
        let tx = r.t_times(x.get(i, j));
        if i == j { r.add(&r.one(), &tx) } else { tx }
    })
}

/// ψ(v) ∈ Mat_q(A) for v ∈ K given as a vector over Z/p^n.
pub fn psi_apply(a: &GaloisRing, q: usize, psi: &Matrix<GrElem>, v: &[GrElem]) -> Matrix<GrElem> {
    let z = a.prime_subring();
    unflatten_matrix(a, q, &z.mat_vec(psi, v))
}

/// ρ_R(v, g) = ν(ψ(v))·ρ_W(g), verified on all pairs of Γ.
pub fn construct_rho_r(
    ext: &ExtensionGroup,
    a: &GaloisRing,
    psi: &Matrix<GrElem>,
    rho_w: &Representation,
    r: &TestRing,
) -> Result<LiftRecord, DeformationError> {
    if *r.kind() != TestRingKind::RModel {
        return Err(DeformationError::BadParameter(format!("ρ_R needs the R-model, got {}", r.label())));
    }
    let q = rho_w.dim();
    let images: Vec<Matrix<TrElem>> = ext
        .group()
        .elements()
        .map(|x| {
            let nu = nu_embed(r, &psi_apply(a, q, psi, &ext.k_part(x)));
            let w = rho_w.image(ext.project(x)).map(|y| r.from_w(y));
            r.mat_mul(&nu, &w)
        })
        .collect();
    let rec = LiftRecord { ring: r.clone(), dim: q, images };
    if let Some((g, h)) = rec.homomorphism_failure(ext.group()) {
        return Err(DeformationError::HomomorphismFailure(g, h));
    }
    let w_ok = ext
        .group()
        .elements()
        .all(|x| rec.images[x as usize].map(|y| y.w.clone()) == *rho_w.image(ext.project(x)));
    let k_ok = ext.group().elements().filter(|&x| ext.is_in_k(x)).all(|x| {
        rec.images[x as usize] == nu_embed(r, &psi_apply(a, q, psi, &ext.k_part(x)))
    });
    if !(w_ok && k_ok) {
        return Err(DeformationError::BadParameter("ρ_R does not reduce to ρ_W or restrict to ν∘ψ".into()));
    }
    Ok(rec)
}

/// The fixed section R → C: identity on the W-part, digit-minimal lift of the t-coefficient, zero t².
pub fn section(c: &TestRing, x: &TrElem) -> TrElem {
    c.elem(x.w.clone(), c.t_ring().lift_coefficients(&x.t), c.residue_field().zero())
}

/// Reduction C → R.
pub fn reduce_to_r(r: &TestRing, x: &TrElem) -> TrElem {
    r.elem(x.w.clone(), x.t.clone(), r.residue_field().zero())
}

/// o(g, h) with ρ̂(g)ρ̂(h)ρ̂(gh)⁻¹ = 1 + z·o(g, h), flattened as (i·q + j)·d + coefficient.
pub fn obstruction_cocycle(
    group: &FiniteGroup,
    c: &TestRing,
    lifted: &[Matrix<TrElem>],
) -> Result<TwoCocycle, DeformationError> {
    let q = lifted[0].rows();
    let d = c.d();
    let n = group.order();
    let inverses: Vec<Matrix<TrElem>> = lifted
        .par_iter()
        .enumerate()
        .map(|(g, m)| c.mat_inv(m).ok_or(DeformationError::NotALift(g as u32)))
        .collect::<Result<_, _>>()?;
    let values: Vec<Result<Vec<u32>, DeformationError>> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (g, h) = ((k / n) as u32, (k % n) as u32);
            let prod = c.mat_mul(&c.mat_mul(&lifted[g as usize], &lifted[h as usize]), &inverses[group.mul(g, h) as usize]);
            let mut out = Vec::with_capacity(q * q * d);
            for i in 0..q {
                for j in 0..q {
                    let mut entry = prod.get(i, j).clone();
                    if i == j {
                        entry = c.sub(&entry, &c.one());
                    }
                    let x = c.kernel_coordinate(&entry).ok_or(DeformationError::KernelViolation(g, h))?;
                    out.extend(x.coeffs().iter().map(|&v| v as u32));
                }
            }
            Ok(out)
        })
        .collect();
    let flat: Vec<u32> = values.into_iter().collect::<Result<Vec<_>, _>>()?.into_iter().flatten().collect();
    Ok(TwoCocycle::from_values(n, q * q * d, flat))
}

#[derive(Clone, Debug)]
pub enum LiftVerdict {
    Obstructed,
    LiftFound(LiftRecord),
}

impl LiftVerdict {
    pub fn is_obstructed(&self) -> bool {
        matches!(self, LiftVerdict::Obstructed)
    }
}

/// Decides whether ρ_R lifts to C, given M̃₀ as a module for the same group.
pub fn test_unliftability(
    group: &FiniteGroup,
    rho_r: &LiftRecord,
    module: &ActionModule,
    c: &TestRing,
) -> Result<LiftVerdict, DeformationError> {
    let q = rho_r.dim;
    let d = c.d();
    let lifted: Vec<Matrix<TrElem>> = rho_r.images.iter().map(|m| m.map(|x| section(c, x))).collect();
    if lifted.iter().zip(&rho_r.images).any(|(l, r)| l.map(|x| reduce_to_r(&rho_r.ring, x)) != *r) {
        return Err(DeformationError::NotALift(0));
    }
    let o = obstruction_cocycle(group, c, &lifted)?;
    o.check_identity(group, module)?;
    match is_coboundary(group, module, &o)? {
        CoboundaryOutcome::Unsolvable => Ok(LiftVerdict::Obstructed),
        CoboundaryOutcome::Solvable(cochain) => {
            let k = c.residue_field();
            let images: Vec<Matrix<TrElem>> = lifted
                .iter()
                .zip(&cochain)
                .map(|(m, cg)| {
                    let correction = Matrix::from_fn(q, q, |i, j| {
                        let coeffs: Vec<u64> = cg[(i * q + j) * d..(i * q + j + 1) * d].iter().map(|&x| x as u64).collect();
                        let zc = c.z_times(&k.from_coeffs(&coeffs)).expect("small extension");
                        let off = c.neg(&zc);
                        if i == j { c.add(&c.one(), &off) } else { off }
                    });
                    c.mat_mul(&correction, m)
                })
                .collect();
            let rec = LiftRecord { ring: c.clone(), dim: q, images };
            if let Some((g, h)) = rec.homomorphism_failure(group) {
                return Err(DeformationError::HomomorphismFailure(g, h));
            }
            Ok(LiftVerdict::LiftFound(rec))
        }
    }
}

/// T = α + p·ξ with α Teichmüller-or-zero entrywise, for a candidate I + t·T (+ t²·β).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaDecomposition {
    /// Residues of α, entrywise.
    pub alpha: Vec<Vec<u64>>,
    pub xi: Vec<Vec<u64>>,
    pub beta: Option<Vec<Vec<u64>>>,
}

pub fn extract_alpha(c: &TestRing, candidate: &Matrix<TrElem>) -> Result<AlphaDecomposition, DeformationError> {
    let q = candidate.rows();
    let w = c.w_ring();
    let t = c.t_ring();
    for i in 0..q {
        for j in 0..q {
            let expected = if i == j { w.one() } else { w.zero() };
            if candidate.get(i, j).w != expected {
                return Err(DeformationError::DecompositionFailure(format!("entry ({i}, {j}) is not ≡ δ_ij mod t")));
            }
        }
    }
    let lower = t.with_precision(t.m().saturating_sub(1).max(1))?;
    let mut alpha = Vec::new();
    let mut xi = Vec::new();
    for x in candidate.data() {
        let a = t.teichmuller(&t.residue(&x.t));
        let rest = t.div_p_pow(&t.sub(&x.t, &a), 1);
        alpha.push(a.coeffs().iter().map(|v| v % c.p()).collect());
        xi.push(t.reduce_to(&rest, &lower).coeffs().to_vec());
    }
    let beta = (*c.kind() == TestRingKind::CaseB)
        .then(|| candidate.data().iter().map(|x| x.e.coeffs().to_vec()).collect());
    Ok(AlphaDecomposition { alpha, xi, beta })
}

/// α ≡ ψ(v) mod p, entrywise.
pub fn alpha_matches_psi(dec: &AlphaDecomposition, a: &GaloisRing, psi_v: &Matrix<GrElem>) -> bool {
    psi_v
        .data()
        .iter()
        .zip(&dec.alpha)
        .all(|(x, al)| a.residue(x).coeffs() == al.as_slice())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::deformation::test_ring::{build_test_ring, enumerate_small_extensions};
    use crate::groups::MetacyclicGroup;
    use crate::repn::{build_m, descend_rep, flatten_matrix, hom_module, restrict_scalars};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) struct Fixture {
        pub ext: ExtensionGroup,
        pub a: GaloisRing,
        pub psi: Matrix<GrElem>,
        pub rho_w: Representation,
        pub module: ActionModule,
    }

    pub(crate) fn fixture(p: u64, n: u32, m: u32, ell: u64, q: u64, u: u64, aexp: u64, d: usize) -> Fixture {
        let g = MetacyclicGroup::new(ell, q, u).unwrap();
        let wm = GaloisRing::new(p, m, d).unwrap();
        let a = wm.with_precision(n).unwrap();
        let rho_w = descend_rep(&g, 1, &wm).unwrap();
        let rho_hat = rho_w.reduce_to(&a);
        let rho_a = descend_rep(&g, aexp, &a).unwrap();
        let ext = ExtensionGroup::new(
            &g,
            p,
            n,
            &flatten_matrix(&a, rho_a.image(g.tau())),
            &flatten_matrix(&a, rho_a.image(g.sigma())),
        )
        .unwrap();
        let h = hom_module(g.group(), &restrict_scalars(&rho_a), &build_m(&rho_hat), d);
        let psi = h.psi.expect("free of rank one");
        let k = wm.residue_field();
        let module = ActionModule::from_linear(&build_m(&rho_w.reduce_to(&k)), d).unwrap().inflate(&ext);
        Fixture { ext, a, psi, rho_w, module }
    }

    #[test]
    fn nu_is_additive_to_multiplicative() {
        let r = build_test_ring(TestRingKind::RModel, 3, 2, 4, 1).unwrap();
        let a = GaloisRing::new(3, 2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rand_mat = |rng: &mut ChaCha8Rng| {
            use rand::Rng;
            Matrix::from_fn(2, 2, |_, _| a.from_int(rng.gen_range(0..9)))
        };
        assert_eq!(nu_embed(&r, &a.mat_zero(2, 2)), r.identity(2));
        for _ in 0..50 {
            let (x, y) = (rand_mat(&mut rng), rand_mat(&mut rng));
            assert_eq!(r.mat_mul(&nu_embed(&r, &x), &nu_embed(&r, &y)), nu_embed(&r, &a.mat_add(&x, &y)));
            assert_eq!(r.mat_inv(&nu_embed(&r, &x)).unwrap(), nu_embed(&r, &a.mat_neg(&x)));
        }
    }

    #[test]
    fn s4_lift_and_obstructions() {
        let f = fixture(2, 1, 3, 3, 2, 2, 1, 1);
        let r = build_test_ring(TestRingKind::RModel, 2, 1, 3, 1).unwrap();
        let rho_r = construct_rho_r(&f.ext, &f.a, &f.psi, &f.rho_w, &r).unwrap();
        assert_eq!(rho_r.images.len(), 24);
        let exts = enumerate_small_extensions(2, 1, 3, 1).unwrap();
        assert_eq!(exts.len(), 3);
        for c in &exts {
            let v = test_unliftability(f.ext.group(), &rho_r, &f.module, c).unwrap();
            assert!(v.is_obstructed(), "{}", c.label());
        }
    }

    #[test]
    fn case_a_zero_cocycle_is_nonzero_for_s4() {
        let f = fixture(2, 1, 3, 3, 2, 2, 1, 1);
        let r = build_test_ring(TestRingKind::RModel, 2, 1, 3, 1).unwrap();
        let rho_r = construct_rho_r(&f.ext, &f.a, &f.psi, &f.rho_w, &r).unwrap();
        let c = build_test_ring(TestRingKind::CaseA { c: vec![0] }, 2, 1, 3, 1).unwrap();
        let lifted: Vec<_> = rho_r.images.iter().map(|m| m.map(|x| section(&c, x))).collect();
        let o = obstruction_cocycle(f.ext.group(), &c, &lifted).unwrap();
        assert!(!o.is_zero());
    }

    #[test]
    fn control_case_lifts() {
        let f = fixture(2, 1, 3, 3, 2, 2, 1, 1);
        let r = build_test_ring(TestRingKind::RModel, 2, 1, 3, 1).unwrap();
        let zero = f.a.prime_subring().mat_zero(f.psi.rows(), f.psi.cols());
        let rho0 = construct_rho_r(&f.ext, &f.a, &zero, &f.rho_w, &r).unwrap();
        let c = build_test_ring(TestRingKind::CaseA { c: vec![0] }, 2, 1, 3, 1).unwrap();
        match test_unliftability(f.ext.group(), &rho0, &f.module, &c).unwrap() {
            LiftVerdict::LiftFound(rec) => {
                for x in f.ext.group().elements().filter(|&x| f.ext.is_in_k(x)) {
                    let dec = extract_alpha(&c, &rec.images[x as usize]).unwrap();
                    assert!(dec.alpha.iter().all(|v| v.iter().all(|&y| y == 0)));
                }
            }
            LiftVerdict::Obstructed => panic!("ψ = 0 must lift"),
        }
    }

    #[test]
    fn alpha_reproduces_psi() {
        let f = fixture(3, 1, 3, 8, 2, 3, 2, 1);
        let r = build_test_ring(TestRingKind::RModel, 3, 1, 3, 1).unwrap();
        let rho_r = construct_rho_r(&f.ext, &f.a, &f.psi, &f.rho_w, &r).unwrap();
        let c = build_test_ring(TestRingKind::CaseA { c: vec![1] }, 3, 1, 3, 1).unwrap();
        for x in f.ext.group().elements().filter(|&x| f.ext.is_in_k(x)) {
            let lifted = rho_r.images[x as usize].map(|y| section(&c, y));
            let dec = extract_alpha(&c, &lifted).unwrap();
            let psi_v = psi_apply(&f.a, 2, &f.psi, &f.ext.k_part(x));
            assert!(alpha_matches_psi(&dec, &f.a, &psi_v));
            if x == 0 {
                assert!(dec.alpha.iter().chain(&dec.xi).all(|v| v.iter().all(|&y| y == 0)));
            }
        }
        let bad = rho_r.images[f.ext.base().tau() as usize].map(|y| section(&c, y));
        assert!(extract_alpha(&c, &bad).is_err());
    }

    #[test]
    fn torsor_shift_changes_cocycle_by_coboundary() {
        let f = fixture(2, 1, 3, 3, 2, 2, 1, 1);
        let r = build_test_ring(TestRingKind::RModel, 2, 1, 3, 1).unwrap();
        let rho_r = construct_rho_r(&f.ext, &f.a, &f.psi, &f.rho_w, &r).unwrap();
        let c = build_test_ring(TestRingKind::CaseB, 2, 1, 3, 1).unwrap();
        let g = f.ext.group();
        let lifted: Vec<_> = rho_r.images.iter().map(|m| m.map(|x| section(&c, x))).collect();
        let o = obstruction_cocycle(g, &c, &lifted).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let cochain: Vec<Vec<u32>> = g
            .elements()
            .map(|_| {
                use rand::Rng;
                (0..4).map(|_| rng.gen_range(0..2)).collect()
            })
            .collect();
        let k = c.residue_field();
        let shifted: Vec<_> = lifted
            .iter()
            .zip(&cochain)
            .map(|(m, cg)| {
                let corr = Matrix::from_fn(2, 2, |i, j| {
                    let zc = c.z_times(&k.from_int(cg[i * 2 + j] as i64)).unwrap();
                    if i == j { c.add(&c.one(), &zc) } else { zc }
                });
                c.mat_mul(&corr, m)
            })
            .collect();
        let o2 = obstruction_cocycle(g, &c, &shifted).unwrap();
        let dc = TwoCocycle::coboundary(g, &f.module, &cochain);
        for x in g.elements() {
            for y in g.elements() {
                let expect: Vec<u32> = (0..4).map(|i| (o.value(x, y)[i] + dc.value(x, y)[i]) % 2).collect();
                assert_eq!(o2.value(x, y), expect.as_slice());
            }
        }
    }
}
