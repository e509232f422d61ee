//! G-modules over Z/p^n obtained by restricting scalars from A = GR(p^n, d),
//! and the module of G-equivariant homomorphisms between two of them.
//!
//! An element a ∈ A is flattened to its coefficient vector in the basis
//! 1, ξ, …, ξ^{d-1}; a matrix over A becomes a block matrix whose (i, j)
//! block is multiplication by a_ij. Mat_q(A) is flattened row-major, entry
//! (i, j) occupying coordinates (i·q + j)·d .. (i·q + j + 1)·d.

use serde::{Deserialize, Serialize};

use super::{induced_rep_big, Representation};
use crate::groups::{FiniteGroup, MetacyclicGroup};
use crate::ring::{
    howell_rows, kernel, smith_valuations, CommRing, GaloisRing, GrElem, Matrix,
    MatrixRing,
};

/// Multiplication by `a` on A ≅ (Z/p^n)^d.
pub fn mult_matrix(ring: &GaloisRing, a: &GrElem) -> Matrix<GrElem> {
    let z = ring.prime_subring();
    let d = ring.d();
    let mut cols = Vec::with_capacity(d);
    let mut basis = ring.one();
    for _ in 0..d {
        cols.push(ring.mul(a, &basis));
        basis = ring.mul(&basis, ring.generator());
    }
    Matrix::from_fn(d, d, |i, j| z.from_int(cols[j].coeffs()[i] as i64))
}

pub fn flatten_matrix(ring: &GaloisRing, m: &Matrix<GrElem>) -> Matrix<GrElem> {
    let d = ring.d();
    let blocks: Vec<Vec<Matrix<GrElem>>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| mult_matrix(ring, m.get(i, j))).collect())
        .collect();
    Matrix::from_fn(m.rows() * d, m.cols() * d, |i, j| blocks[i / d][j / d].get(i % d, j % d).clone())
}

pub fn flatten_vector(ring: &GaloisRing, v: &[GrElem]) -> Vec<GrElem> {
    let z = ring.prime_subring();
    v.iter().flat_map(|x| x.coeffs().iter().map(|&c| z.from_int(c as i64)).collect::<Vec<_>>()).collect()
}

fn unflatten_entry(ring: &GaloisRing, chunk: &[GrElem]) -> GrElem {
    let c: Vec<u64> = chunk.iter().map(|x| x.coeffs()[0]).collect();
    ring.from_coeffs(&c)
}

/// Inverse of row-major flattening of a q×q matrix over A.
pub fn unflatten_matrix(ring: &GaloisRing, q: usize, v: &[GrElem]) -> Matrix<GrElem> {
    let d = ring.d();
    assert_eq!(v.len(), q * q * d);
    Matrix::from_fn(q, q, |i, j| {
        let k = (i * q + j) * d;
        unflatten_entry(ring, &v[k..k + d])
    })
}

/// A G-module over Z/p^n with a compatible A-module structure given by the action of ξ.
#[derive(Clone, Debug)]
pub struct LinearModule {
    /// The coefficient ring Z/p^n.
    pub ring: GaloisRing,
    pub rank: usize,
    /// Action matrix of every group element.
    pub images: Vec<Matrix<GrElem>>,
    /// Multiplication by the generator ξ of A.
    pub xi: Matrix<GrElem>,
}

/// V with scalars restricted from A to Z/p^n.
pub fn restrict_scalars(rep: &Representation) -> LinearModule {
    let a = rep.ring();
    let xi_block = mult_matrix(a, a.generator());
    let d = a.d();
    let rank = rep.dim() * d;
    LinearModule {
        ring: a.prime_subring(),
        rank,
        images: rep.images().iter().map(|m| flatten_matrix(a, m)).collect(),
        xi: block_diagonal(&a.prime_subring(), &xi_block, rep.dim()),
    }
}

fn block_diagonal(z: &GaloisRing, block: &Matrix<GrElem>, copies: usize) -> Matrix<GrElem> {
    let d = block.rows();
    Matrix::from_fn(copies * d, copies * d, |i, j| {
        if i / d == j / d { block.get(i % d, j % d).clone() } else { z.zero() }
    })
}

/// M = Mat_q(A) with g acting by X ↦ ρ(g) X ρ(g)^{-1}, flattened over Z/p^n.
pub fn build_m(rep: &Representation) -> LinearModule {
    let a = rep.ring();
    let q = rep.dim();
    let d = a.d();
    let rank = q * q * d;
    let basis: Vec<Matrix<GrElem>> = (0..rank)
        .map(|k| {
            let entry = k / d;
            let mut coeffs = vec![0u64; d];
            coeffs[k % d] = 1;
            let e = a.from_coeffs(&coeffs);
            Matrix::from_fn(q, q, |i, j| if i * q + j == entry { e.clone() } else { a.zero() })
        })
        .collect();
    let images = rep
        .images()
        .iter()
        .map(|g| {
            let ginv = a.mat_inv(g).expect("representation images are invertible");
            let cols: Vec<Vec<GrElem>> = basis
                .iter()
                .map(|b| flatten_vector(a, a.mat_mul(&a.mat_mul(g, b), &ginv).data()))
                .collect();
            Matrix::from_fn(rank, rank, |i, j| cols[j][i].clone())
        })
        .collect();
    let xi_block = mult_matrix(a, a.generator());
    LinearModule {
        ring: a.prime_subring(),
        rank,
        images,
        xi: block_diagonal(&a.prime_subring(), &xi_block, q * q),
    }
}

/// Hom_{(Z/p^n)G}(source, target) with its A-module structure.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HomModule {
    /// log_p of the number of homomorphisms.
    pub log_size: u64,
    /// Exponents e with the module ≅ ⊕ Z/p^e.
    pub invariant_factors: Vec<u32>,
    /// Howell-form generators, each a target.rank × source.rank matrix flattened row-major.
    #[serde(skip)]
    pub generators: Vec<Vec<GrElem>>,
    /// Closed under the action of A on the target.
    pub a_stable: bool,
    /// Free of rank one over A, generated by `psi`.
    pub free_rank_one: bool,
    /// Index into `generators` of the chosen A-module generator.
    pub psi_index: Option<usize>,
    #[serde(skip)]
    pub psi: Option<Matrix<GrElem>>,
}

/// All Z/p^n-linear maps F: source → target with F·S(g) = T(g)·F for every generator g
/// and for the action of ξ, so that F is A-linear.
pub fn hom_module(group: &FiniteGroup, source: &LinearModule, target: &LinearModule, d: usize) -> HomModule {
    let z = &source.ring;
    let (sr, tr) = (source.rank, target.rank);
    let unknowns = sr * tr;
    let mut rows: Vec<Vec<GrElem>> = Vec::new();
    let pairs = group
        .generators()
        .iter()
        .map(|&g| (&source.images[g as usize], &target.images[g as usize]))
        .chain(std::iter::once((&source.xi, &target.xi)));
    for (s, t) in pairs {
        for i in 0..tr {
            for k in 0..sr {
                let mut row = vec![z.zero(); unknowns];
                for j in 0..tr {
                    row[j * sr + k] = z.add(&row[j * sr + k], t.get(i, j));
                }
                for j in 0..sr {
                    row[i * sr + j] = z.sub(&row[i * sr + j], s.get(j, k));
                }
                rows.push(row);
            }
        }
    }
    let system = Matrix::from_rows(rows);
    let gens = kernel(z, &system);
    let form = howell_rows(z, gens, unknowns, false);
    let generators = form.rows.clone();
    let log_size = form.log_size(z);
    let invariant_factors = if generators.is_empty() {
        Vec::new()
    } else {
        let mut v: Vec<u32> = smith_valuations(z, &Matrix::from_rows(generators.clone()))
            .into_iter()
            .map(|v| z.m() - v)
            .collect();
        v.sort_unstable();
        v
    };
    let apply_xi = |f: &[GrElem]| -> Vec<GrElem> {
        let fm = Matrix::from_vec(tr, sr, f.to_vec());
        z.mat_mul(&target.xi, &fm).data().to_vec()
    };
    let a_stable = generators.iter().all(|f| form.contains(z, &apply_xi(f)));
    let module_log = z.m() as u64 * d as u64;
    let mut psi_index = None;
    if a_stable && log_size == module_log {
        psi_index = generators.iter().position(|f| {
            let mut orbit = vec![f.clone()];
            for _ in 1..d {
                let next = apply_xi(orbit.last().expect("nonempty"));
                orbit.push(next);
            }
            howell_rows(z, orbit, unknowns, false).log_size(z) == module_log
        });
    }
    let psi = psi_index.map(|i| Matrix::from_vec(tr, sr, generators[i].clone()));
    HomModule {
        log_size,
        invariant_factors,
        generators,
        a_stable,
        free_rank_one: psi_index.is_some(),
        psi_index,
        psi,
    }
}

/// dim over F_{p^D} of Hom_G(V(θ^a), End V) for the induced representations over the big field.
pub fn hom_dimension_over_big_field(g: &MetacyclicGroup, a: u64, p: u64, big_degree: usize) -> usize {
    let field = GaloisRing::new(p, 1, big_degree).expect("valid field");
    let source = restrict_scalars(&induced_rep_big(g, a, &field).expect("roots of unity exist"));
    let target = build_m(&induced_rep_big(g, 1, &field).expect("roots of unity exist"));
    let h = hom_module(g.group(), &source, &target, big_degree);
    assert_eq!(h.log_size % big_degree as u64, 0, "F_p-dimension is a multiple of the degree");
    (h.log_size / big_degree as u64) as usize
}

/// Whether ψ has trivial kernel.
pub fn psi_injective(z: &GaloisRing, psi: &Matrix<GrElem>) -> bool {
    kernel(z, psi).is_empty()
}

/// Two elements of K whose ψ-images fail to commute modulo p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorWitness {
    /// Coordinates of the two elements of K (as integers mod p^n).
    pub first: Vec<u64>,
    pub second: Vec<u64>,
    /// Found among basis vectors (rather than the exhaustive search mod p).
    pub from_basis: bool,
    /// Column j of V̂ with [ψ(first), ψ(second)]·e_j ∉ p·V̂.
    pub column: usize,
    /// Residues of the evaluation [ψ(first), ψ(second)]·e_j, flattened.
    pub evaluation: Vec<u64>,
}

/// Search for v, w ∈ K with ψ(v)ψ(w) - ψ(w)ψ(v) ∉ p·Mat_q(A).
pub fn commutator_witness(a: &GaloisRing, q: usize, psi: &Matrix<GrElem>) -> Option<CommutatorWitness> {
    let z = a.prime_subring();
    let rank = psi.cols();
    let image = |v: &[u64]| -> Matrix<GrElem> {
        let vv: Vec<GrElem> = v.iter().map(|&c| z.from_int(c as i64)).collect();
        unflatten_matrix(a, q, &z.mat_vec(psi, &vv))
    };
    let check = |v: &[u64], w: &[u64], from_basis: bool| -> Option<CommutatorWitness> {
        let (x, y) = (image(v), image(w));
        let comm = a.mat_sub(&a.mat_mul(&x, &y), &a.mat_mul(&y, &x));
        let column = (0..q).find(|&j| (0..q).any(|i| a.valuation(comm.get(i, j)) == 0))?;
        let evaluation = (0..q)
            .flat_map(|i| a.residue(comm.get(i, column)).coeffs().to_vec())
            .collect();
        Some(CommutatorWitness { first: v.to_vec(), second: w.to_vec(), from_basis, column, evaluation })
    };
    let basis: Vec<Vec<u64>> = (0..rank)
        .map(|i| (0..rank).map(|j| u64::from(i == j)).collect())
        .collect();
    for i in 0..rank {
        for j in i + 1..rank {
            if let Some(w) = check(&basis[i], &basis[j], true) {
                return Some(w);
            }
        }
    }
    let p = a.p();
    let count = p.checked_pow(rank as u32)?;
    let vec_of = |mut idx: u64| -> Vec<u64> {
        (0..rank)
            .map(|_| {
                let c = idx % p;
                idx /= p;
                c
            })
            .collect()
    };
    for i in 0..count {
        for j in i + 1..count {
            if let Some(w) = check(&vec_of(i), &vec_of(j), false) {
                return Some(w);
            }
        }
    }
    None
}
