//! Enumerated finite groups: the metacyclic group G = (Z/ℓ) ⋊ (Z/q) and
//! extensions Γ = K ⋊ G with K = (Z/p^n)^r.
//!
//! Elements are indices `0..order` into a full Cayley table; index 0 is the
//! identity. Generators are fixed: τ = (1, 0) and σ = (0, 1) for G; the r
//! standard basis vectors of K followed by τ and σ for Γ.

use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{multiplicative_order, CommRing, GaloisRing, GrElem, Matrix, MatrixRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("u = {u} has multiplicative order {order:?} mod {ell}, expected {q}")]
    BadAction { ell: u64, q: u64, u: u64, order: Option<u64> },
    #[error("invalid group parameters: {0}")]
    BadParameters(String),
    #[error("action matrices violate the relation {0}")]
    RelationViolation(String),
    #[error("the given generators do not generate the group")]
    NotGenerating,
    #[error("group of order {0} is too large to enumerate")]
    TooLarge(u128),
}

pub const MAX_ENUMERATED_ORDER: u128 = 5000;

/// Breadth-first spanning tree of the right Cayley graph.
#[derive(Clone, Debug)]
pub struct CayleyTree {
    /// Elements in BFS order, starting with the identity.
    pub order: Vec<u32>,
    /// `parent[g] = Some((h, i))` when g = h · generators[i].
    pub parent: Vec<Option<(u32, usize)>>,
}

impl CayleyTree {
    /// Whether the edge g → g·s_i is a tree edge.
    pub fn is_tree_edge(&self, g: u32, target: u32, i: usize) -> bool {
        self.parent[target as usize] == Some((g, i))
    }
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    generators: Vec<u32>,
    tree: CayleyTree,
}

impl FiniteGroup {
    /// Build from a full multiplication table with identity at index 0.
    pub fn from_table(n: usize, table: Vec<u32>, generators: Vec<u32>) -> Result<Self, GroupError> {
        assert_eq!(table.len(), n * n);
        let mut inverse = vec![u32::MAX; n];
        for g in 0..n {
            if let Some(h) = (0..n).find(|&h| table[g * n + h] == 0) {
                inverse[g] = h as u32;
            }
        }
        if inverse.contains(&u32::MAX) {
            return Err(GroupError::BadParameters("table has non-invertible elements".into()));
        }
        let tree = bfs_tree(n, &table, &generators).ok_or(GroupError::NotGenerating)?;
        Ok(FiniteGroup { n, table, inverse, generators, tree })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn tree(&self) -> &CayleyTree {
        &self.tree
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.n as u32
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        (0..e).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Multiset of element orders.
    pub fn order_statistics(&self) -> BTreeMap<u64, usize> {
        let mut out = BTreeMap::new();
        for g in self.elements() {
            *out.entry(self.element_order(g)).or_insert(0) += 1;
        }
        out
    }

    pub fn center(&self) -> Vec<u32> {
        self.elements()
            .filter(|&z| self.elements().all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|&a| {
            self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a))
        })
    }

    /// Word in the generators (as generator indices) spelling `g` along the tree.
    pub fn word(&self, g: u32) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = g;
        while let Some((h, i)) = self.tree.parent[cur as usize] {
            out.push(i);
            cur = h;
        }
        out.reverse();
        out
    }
}

fn bfs_tree(n: usize, table: &[u32], gens: &[u32]) -> Option<CayleyTree> {
    let mut parent: Vec<Option<(u32, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    seen[0] = true;
    queue.push_back(0u32);
    while let Some(g) = queue.pop_front() {
        order.push(g);
        for (i, &s) in gens.iter().enumerate() {
            let h = table[g as usize * n + s as usize];
            if !seen[h as usize] {
                seen[h as usize] = true;
                parent[h as usize] = Some((g, i));
                queue.push_back(h);
            }
        }
    }
    (order.len() == n).then_some(CayleyTree { order, parent })
}

/// G = (Z/ℓ) ⋊_ν (Z/q) with ν(σ) = u; element (c, s) has index c + ℓ·s.
#[derive(Clone, Debug)]
pub struct MetacyclicGroup {
    ell: u64,
    q: u64,
    u: u64,
    group: FiniteGroup,
}

impl MetacyclicGroup {
    pub fn new(ell: u64, q: u64, u: u64) -> Result<Self, GroupError> {
        if ell < 2 || q < 2 {
            return Err(GroupError::BadParameters(format!("ell={ell}, q={q}")));
        }
        if (ell * q) as u128 > MAX_ENUMERATED_ORDER {
            return Err(GroupError::TooLarge((ell * q) as u128));
        }
        let order = multiplicative_order(u, ell);
        if order != Some(q) {
            return Err(GroupError::BadAction { ell, q, u, order });
        }
        let n = (ell * q) as usize;
        let upow: Vec<u64> = (0..q).scan(1u64, |acc, _| {
            let cur = *acc;
            *acc = *acc * u % ell;
            Some(cur)
        }).collect();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            let (c1, s1) = (a as u64 % ell, a as u64 / ell);
            for b in 0..n {
                let (c2, s2) = (b as u64 % ell, b as u64 / ell);
                let c = (c1 + upow[s1 as usize] * c2) % ell;
                let s = (s1 + s2) % q;
                table[a * n + b] = (c + ell * s) as u32;
            }
        }
        let group = FiniteGroup::from_table(n, table, vec![1, ell as u32])?;
        Ok(MetacyclicGroup { ell, q, u, group })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn u(&self) -> u64 {
        self.u
    }
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn element(&self, c: u64, s: u64) -> u32 {
        ((c % self.ell) + self.ell * (s % self.q)) as u32
    }

    pub fn coords(&self, g: u32) -> (u64, u64) {
        (g as u64 % self.ell, g as u64 / self.ell)
    }

    pub fn tau(&self) -> u32 {
        self.element(1, 0)
    }

    pub fn sigma(&self) -> u32 {
        self.element(0, 1)
    }

    /// H = ⟨u⟩ ⊂ (Z/ℓ)^*, listed as u^0, u^1, …, u^{q-1}.
    pub fn h_set(&self) -> Vec<u64> {
        (0..self.q).map(|s| pow_mod(self.u, s, self.ell)).collect()
    }
}

pub(crate) fn pow_mod(x: u64, e: u64, m: u64) -> u64 {
    (0..e).fold(1 % m, |acc, _| acc * (x % m) % m)
}

/// Γ = K ⋊_δ G with K = (Z/p^n)^r; element (v, g) has index idx(v)·|G| + g.
#[derive(Clone, Debug)]
pub struct ExtensionGroup {
    base: MetacyclicGroup,
    ring: GaloisRing,
    rank: usize,
    k_order: usize,
    delta: Vec<Matrix<GrElem>>,
    group: FiniteGroup,
}

impl ExtensionGroup {
    /// `tau_action` and `sigma_action` are the r×r matrices δ(τ), δ(σ) over Z/p^n.
    pub fn new(
        base: &MetacyclicGroup,
        p: u64,
        n: u32,
        tau_action: &Matrix<GrElem>,
        sigma_action: &Matrix<GrElem>,
    ) -> Result<Self, GroupError> {
        let ring = GaloisRing::new(p, n, 1).map_err(|e| GroupError::BadParameters(e.to_string()))?;
        let r = tau_action.rows();
        if !tau_action.is_square() || sigma_action.rows() != r || !sigma_action.is_square() {
            return Err(GroupError::BadParameters("action matrices must be square of equal size".into()));
        }
        let k_order_u = (ring.modulus() as u128).pow(r as u32);
        let total = k_order_u * base.group.order() as u128;
        if total > MAX_ENUMERATED_ORDER {
            return Err(GroupError::TooLarge(total));
        }
        let id = ring.identity(r);
        if ring.mat_inv(tau_action).is_none() || ring.mat_inv(sigma_action).is_none() {
            return Err(GroupError::RelationViolation("invertibility".into()));
        }
        if ring.mat_pow(tau_action, base.ell) != id {
            return Err(GroupError::RelationViolation("tau^ell = 1".into()));
        }
        if ring.mat_pow(sigma_action, base.q) != id {
            return Err(GroupError::RelationViolation("sigma^q = 1".into()));
        }
        let sinv = ring.mat_inv(sigma_action).expect("checked above");
        let conj = ring.mat_mul(&ring.mat_mul(sigma_action, tau_action), &sinv);
        if conj != ring.mat_pow(tau_action, base.u) {
            return Err(GroupError::RelationViolation("sigma tau sigma^-1 = tau^u".into()));
        }
        let ng = base.group.order();
        let delta: Vec<Matrix<GrElem>> = base
            .group
            .elements()
            .map(|g| {
                let (c, s) = base.coords(g);
                ring.mat_mul(&ring.mat_pow(tau_action, c), &ring.mat_pow(sigma_action, s))
            })
            .collect();
        let k_order = k_order_u as usize;
        let pn = ring.modulus();
        let decode = |mut idx: usize| -> Vec<u64> {
            (0..r)
                .map(|_| {
                    let d = idx as u64 % pn;
                    idx /= pn as usize;
                    d
                })
                .collect()
        };
        let encode = |v: &[u64]| -> usize { v.iter().rev().fold(0usize, |acc, &d| acc * pn as usize + d as usize) };
        let kvecs: Vec<Vec<u64>> = (0..k_order).map(decode).collect();
        let act: Vec<Vec<u32>> = delta
            .iter()
            .map(|mat| {
                kvecs
                    .iter()
                    .map(|v| {
                        let w: Vec<u64> = (0..r)
                            .map(|i| {
                                (0..r).fold(0u64, |acc, j| {
                                    (acc + mat.get(i, j).coeffs()[0] * v[j]) % pn
                                })
                            })
                            .collect();
                        encode(&w) as u32
                    })
                    .collect()
            })
            .collect();
        let nt = k_order * ng;
        let mut table = vec![0u32; nt * nt];
        for a in 0..nt {
            let (va, ga) = (a / ng, a % ng);
            for b in 0..nt {
                let (vb, gb) = (b / ng, b % ng);
                let w = act[ga][vb] as usize;
                let sum: Vec<u64> = kvecs[va].iter().zip(&kvecs[w]).map(|(x, y)| (x + y) % pn).collect();
                table[a * nt + b] = (encode(&sum) * ng + base.group.mul(ga as u32, gb as u32) as usize) as u32;
            }
        }
        let mut gens: Vec<u32> = (0..r)
            .map(|i| {
                let mut e = vec![0u64; r];
                e[i] = 1;
                (encode(&e) * ng) as u32
            })
            .collect();
        gens.push(base.tau());
        gens.push(base.sigma());
        let group = FiniteGroup::from_table(nt, table, gens)?;
        Ok(ExtensionGroup { base: base.clone(), ring, rank: r, k_order, delta, group })
    }

    pub fn base(&self) -> &MetacyclicGroup {
        &self.base
    }
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }
    /// The coefficient ring Z/p^n of K.
    pub fn k_ring(&self) -> &GaloisRing {
        &self.ring
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn k_order(&self) -> usize {
        self.k_order
    }
    pub fn delta(&self, g: u32) -> &Matrix<GrElem> {
        &self.delta[g as usize]
    }

    /// π: Γ → G.
    pub fn project(&self, x: u32) -> u32 {
        x % self.base.group.order() as u32
    }

    /// The K-component of x = (v, g), as a vector over Z/p^n.
    pub fn k_part(&self, x: u32) -> Vec<GrElem> {
        let mut idx = x as usize / self.base.group.order();
        let pn = self.ring.modulus() as usize;
        (0..self.rank)
            .map(|_| {
                let d = idx % pn;
                idx /= pn;
                self.ring.from_int(d as i64)
            })
            .collect()
    }

    pub fn element(&self, v: &[GrElem], g: u32) -> u32 {
        let pn = self.ring.modulus() as usize;
        let idx = v.iter().rev().fold(0usize, |acc, d| acc * pn + d.coeffs()[0] as usize);
        (idx * self.base.group.order()) as u32 + g
    }

    /// The section g ↦ (0, g) of π.
    pub fn lift_base(&self, g: u32) -> u32 {
        g
    }

    pub fn is_in_k(&self, x: u32) -> bool {
        self.project(x) == 0
    }
}

/// Outcome of the structural checks on an enumerated group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupCheckReport {
    pub order: usize,
    pub associativity_exhaustive: bool,
    pub associativity_ok: bool,
    pub inverses_ok: bool,
    pub identity_unique: bool,
    pub order_statistics: BTreeMap<u64, usize>,
    pub center_size: usize,
    pub abelian: bool,
}

impl GroupCheckReport {
    pub fn passed(&self) -> bool {
        self.associativity_ok && self.inverses_ok && self.identity_unique
    }
}

fn assoc(g: &FiniteGroup, a: u32, b: u32, c: u32) -> bool {
    g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c))
}

pub fn group_checks(g: &FiniteGroup) -> GroupCheckReport {
    let n = g.order() as u32;
    let exhaustive = n <= 200;
    let associativity_ok = if exhaustive {
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| assoc(g, a, b, c))))
    } else {
        let gens = g.generators();
        let gen_ok = gens.iter().all(|&a| gens.iter().all(|&b| gens.iter().all(|&c| assoc(g, a, b, c))))
            && (0..n).all(|a| gens.iter().all(|&b| gens.iter().all(|&c| assoc(g, a, b, c))));
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        gen_ok
            && (0..100_000).all(|_| {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                assoc(g, a, b, c)
            })
    };
    let inverses_ok = (0..n).all(|a| g.mul(a, g.inv(a)) == 0 && g.mul(g.inv(a), a) == 0);
    let identity_unique = (0..n).filter(|&e| (0..n).all(|a| g.mul(e, a) == a && g.mul(a, e) == a)).count() == 1;
    GroupCheckReport {
        order: n as usize,
        associativity_exhaustive: exhaustive,
        associativity_ok,
        inverses_ok,
        identity_unique,
        order_statistics: g.order_statistics(),
        center_size: g.center().len(),
        abelian: g.is_abelian(),
    }
}

/// π is a surjective homomorphism whose kernel has p^{nr} elements.
pub fn projection_is_homomorphism(ext: &ExtensionGroup) -> bool {
    let gamma = ext.group();
    let g = ext.base().group();
    let hom = gamma.elements().all(|a| {
        gamma
            .elements()
            .all(|b| ext.project(gamma.mul(a, b)) == g.mul(ext.project(a), ext.project(b)))
    });
    let kernel = gamma.elements().filter(|&x| ext.project(x) == 0).count();
    let surjective = g.elements().all(|h| gamma.elements().any(|x| ext.project(x) == h));
    hom && surjective && kernel == ext.k_order()
}
