//! First cohomology and 2-cocycle obstructions for a finite group acting on an
//! F_p-vector space.
//!
//! Both H¹ and coboundary solvability use the same device. A 1-cochain c with
//! c(g·s) = c(g) + g·c(s) − o(g, s) for every generator s is determined by its
//! values on the generators, so c(g) is propagated along the Cayley spanning
//! tree as an affine function L_g·x + b_g of the unknown generator values x.
//! Each non-tree edge g → g·s then yields D linear equations in x.
//!
//! The generator equations suffice. Let o be a 2-cocycle and e = dc − o, again
//! a 2-cocycle, with e(g, s) = 0 for every g and every generator s. The cocycle
//! identity at (g, h, s) reads g·e(h, s) − e(gh, s) + e(g, hs) − e(g, h) = 0, so
//! e(g, hs) = e(g, h), and induction on word length gives e(g, h) = e(g, 1). The
//! identity at (1, 1, s) gives e(1, 1) = e(1, s) = 0, and at (g, 1, 1) it gives
//! e(g, 1) = g·e(1, 1) = 0. Every returned witness is still checked on all |G|² pairs.

mod fp;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{ExtensionGroup, FiniteGroup};
use crate::repn::LinearModule;
use fp::Echelon;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("the generators do not reach every group element")]
    NotGenerating,
    #[error("K acts nontrivially: element {0} of K has a non-identity image")]
    ModuleNotInflated(u32),
    #[error("the action is not a homomorphism at ({0}, {1})")]
    NotHomomorphism(u32, u32),
    #[error("the 2-cocycle identity fails at ({0}, {1}, {2})")]
    CocycleIdentity(u32, u32, u32),
    #[error("dimension {dim} is not divisible by d = {d}")]
    Indivisible { dim: usize, d: usize },
    #[error("module shape mismatch: {0}")]
    Shape(String),
    #[error("a coboundary witness failed validation at ({0}, {1})")]
    WitnessInvalid(u32, u32),
}

/// A finite group acting on F_p^D by invertible matrices, one per element.
#[derive(Clone, Debug)]
pub struct ActionModule {
    p: u32,
    d: usize,
    dim: usize,
    images: Vec<Vec<u32>>,
}

impl ActionModule {
    /// `images[g]` is the row-major D×D matrix of g; `d` is the degree of k over F_p.
    pub fn new(p: u32, d: usize, dim: usize, images: Vec<Vec<u32>>) -> Result<Self, CohomologyError> {
        if d == 0 || !dim.is_multiple_of(d) {
            return Err(CohomologyError::Indivisible { dim, d });
        }
        if images.iter().any(|m| m.len() != dim * dim || m.iter().any(|&x| x >= p)) {
            return Err(CohomologyError::Shape(format!("expected {dim}×{dim} matrices over F_{p}")));
        }
        Ok(ActionModule { p, d, dim, images })
    }

    /// Converts a module over the prime field F_p.
    pub fn from_linear(m: &LinearModule, d: usize) -> Result<Self, CohomologyError> {
        if m.ring.m() != 1 || m.ring.d() != 1 {
            return Err(CohomologyError::Shape("coefficients must lie in F_p".into()));
        }
        let images = m
            .images
            .iter()
            .map(|mat| mat.data().iter().map(|x| x.coeffs()[0] as u32).collect())
            .collect();
        Self::new(m.ring.p() as u32, d, m.rank, images)
    }

    /// Pulls a G-module back along π: Γ → G.
    pub fn inflate(&self, ext: &ExtensionGroup) -> Self {
        let images = ext.group().elements().map(|x| self.images[ext.project(x) as usize].clone()).collect();
        ActionModule { p: self.p, d: self.d, dim: self.dim, images }
    }

    pub fn trivial(order: usize, p: u32, dim: usize, d: usize) -> Self {
        ActionModule { p, d, dim, images: vec![fp::identity(dim); order] }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn image(&self, g: u32) -> &[u32] {
        &self.images[g as usize]
    }

    pub fn act(&self, g: u32, v: &[u32]) -> Vec<u32> {
        fp::mat_vec(self.p, &self.images[g as usize], v)
    }

    /// Exhaustive for |G| ≤ 1500, else 10⁵ random pairs together with all generator pairs.
    pub fn check_homomorphism(&self, group: &FiniteGroup) -> Result<(), CohomologyError> {
        let n = group.order() as u32;
        let check = |g: u32, h: u32| {
            let lhs = fp::mat_mul(self.p, &self.images[g as usize], &self.images[h as usize], self.dim, self.dim, self.dim);
            lhs == self.images[group.mul(g, h) as usize]
        };
        let pairs: Vec<(u32, u32)> = if n <= 1500 {
            (0..n).flat_map(|g| (0..n).map(move |h| (g, h))).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0xac7);
            let mut v: Vec<(u32, u32)> = (0..100_000).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
            for &g in group.generators() {
                v.extend(group.generators().iter().map(|&h| (g, h)));
            }
            v
        };
        match pairs.par_iter().find_any(|&&(g, h)| !check(g, h)) {
            Some(&(g, h)) => Err(CohomologyError::NotHomomorphism(g, h)),
            None => Ok(()),
        }
    }

    /// Dimension of the fixed subspace M^G.
    pub fn fixed_dim(&self, group: &FiniteGroup) -> usize {
        let mut e = Echelon::new(self.p, self.dim);
        for &s in group.generators() {
            let m = &self.images[s as usize];
            for i in 0..self.dim {
                let row = (0..self.dim)
                    .map(|j| (m[i * self.dim + j] + self.p - (i == j) as u32) % self.p)
                    .collect();
                e.insert(row);
            }
        }
        self.dim - e.rank()
    }
}

/// Z¹ and B¹ for a module, with Z¹ described by generator values.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct OneCocycleSpace {
    pub dim_z1: usize,
    pub dim_b1: usize,
    pub h1_fp: usize,
    pub h1_k: usize,
    /// Each basis cocycle as its concatenated values on the generators.
    pub basis: Vec<Vec<u32>>,
}

/// Values o(g, h) ∈ F_p^D for all pairs.
#[derive(Clone, Debug)]
pub struct TwoCocycle {
    order: usize,
    dim: usize,
    values: Vec<u32>,
}

impl TwoCocycle {
    /// Evaluates `f` on all pairs in parallel.
    pub fn from_fn<F>(order: usize, dim: usize, f: F) -> Self
    where
        F: Fn(u32, u32) -> Vec<u32> + Sync,
    {
        let values: Vec<u32> = (0..order * order)
            .into_par_iter()
            .flat_map_iter(|k| {
                let v = f((k / order) as u32, (k % order) as u32);
                assert_eq!(v.len(), dim);
                v
            })
            .collect();
        TwoCocycle { order, dim, values }
    }

    pub fn from_values(order: usize, dim: usize, values: Vec<u32>) -> Self {
        assert_eq!(values.len(), order * order * dim);
        TwoCocycle { order, dim, values }
    }

    pub fn zero(order: usize, dim: usize) -> Self {
        TwoCocycle { order, dim, values: vec![0; order * order * dim] }
    }

    /// (dc)(g, h) = g·c(h) − c(gh) + c(g).
    pub fn coboundary(group: &FiniteGroup, module: &ActionModule, c: &[Vec<u32>]) -> Self {
        let p = module.p;
        Self::from_fn(group.order(), module.dim, |g, h| {
            let gc = module.act(g, &c[h as usize]);
            let cgh = &c[group.mul(g, h) as usize];
            (0..module.dim).map(|i| (gc[i] + p - cgh[i] + c[g as usize][i]) % p).collect()
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, g: u32, h: u32) -> &[u32] {
        let k = (g as usize * self.order + h as usize) * self.dim;
        &self.values[k..k + self.dim]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    /// g·o(h,k) − o(gh,k) + o(g,hk) − o(g,h) = 0. All triples when |G| ≤ 300; otherwise every
    /// triple whose last entry is a generator together with 10⁵ random triples.
    pub fn check_identity(&self, group: &FiniteGroup, module: &ActionModule) -> Result<(), CohomologyError> {
        let n = group.order() as u32;
        let p = module.p;
        let holds = |g: u32, h: u32, k: u32| {
            let a = module.act(g, self.value(h, k));
            let b = self.value(group.mul(g, h), k);
            let c = self.value(g, group.mul(h, k));
            let d = self.value(g, h);
            (0..self.dim).all(|i| (a[i] + 2 * p - b[i] + c[i] - d[i]).is_multiple_of(p))
        };
        let failure = if n <= 300 {
            (0..n * n).into_par_iter().find_map_any(|gh| {
                let (g, h) = (gh / n, gh % n);
                (0..n).find(|&k| !holds(g, h, k)).map(|k| (g, h, k))
            })
        } else {
            let gens = group.generators();
            let restricted = (0..n * n).into_par_iter().find_map_any(|gh| {
                let (g, h) = (gh / n, gh % n);
                gens.iter().copied().find(|&k| !holds(g, h, k)).map(|k| (g, h, k))
            });
            restricted.or_else(|| {
                let mut rng = ChaCha8Rng::seed_from_u64(0x2c0c);
                let triples: Vec<(u32, u32, u32)> = (0..100_000)
                    .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
                    .collect();
                triples.into_par_iter().find_any(|&(g, h, k)| !holds(g, h, k))
            })
        };
        match failure {
            Some((g, h, k)) => Err(CohomologyError::CocycleIdentity(g, h, k)),
            None => Ok(()),
        }
    }
}

/// c(g) = L_g·x + b_g for every g, plus the consistency equations [A | rhs].
struct Propagation {
    linear: Vec<Vec<u32>>,
    constant: Vec<Vec<u32>>,
    system: Echelon,
    unknowns: usize,
}

fn propagate(group: &FiniteGroup, module: &ActionModule, o: Option<&TwoCocycle>) -> Result<Propagation, CohomologyError> {
    let p = module.p;
    let dim = module.dim;
    let gens = group.generators();
    let unknowns = gens.len() * dim;
    let n = group.order();
    let tree = group.tree();
    if tree.order.len() != n {
        return Err(CohomologyError::NotGenerating);
    }
    let zero = vec![0u32; dim];
    let ov = |g: u32, h: u32| -> &[u32] { o.map_or(&zero[..], |o| o.value(g, h)) };
    let mut linear: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut constant: Vec<Vec<u32>> = vec![Vec::new(); n];
    let e = group.identity();
    linear[e as usize] = vec![0; dim * unknowns];
    constant[e as usize] = ov(e, e).to_vec();
    // L_{gs} = L_g + A(g)·E_s and b_{gs} = b_g − o(g, s)
    let step = |lg: &[u32], bg: &[u32], g: u32, i: usize, s: u32| -> (Vec<u32>, Vec<u32>) {
        let a = module.image(g);
        let mut l = lg.to_vec();
        for r in 0..dim {
            for c in 0..dim {
                let k = r * unknowns + i * dim + c;
                l[k] = (l[k] + a[r * dim + c]) % p;
            }
        }
        let os = ov(g, s);
        let b = (0..dim).map(|r| (bg[r] + p - os[r]) % p).collect();
        (l, b)
    };
    for &x in &tree.order[1..] {
        let (h, i) = tree.parent[x as usize].ok_or(CohomologyError::NotGenerating)?;
        let (l, b) = step(&linear[h as usize], &constant[h as usize], h, i, gens[i]);
        linear[x as usize] = l;
        constant[x as usize] = b;
    }
    let edges: Vec<(u32, usize)> = (0..n as u32)
        .flat_map(|g| (0..gens.len()).map(move |i| (g, i)))
        .filter(|&(g, i)| !tree.is_tree_edge(g, group.mul(g, gens[i]), i))
        .collect();
    let rows: Vec<Vec<Vec<u32>>> = edges
        .par_iter()
        .map(|&(g, i)| {
            let t = group.mul(g, gens[i]) as usize;
            let (l, b) = step(&linear[g as usize], &constant[g as usize], g, i, gens[i]);
            (0..dim)
                .map(|r| {
                    let mut row: Vec<u32> = (0..unknowns)
                        .map(|c| (linear[t][r * unknowns + c] + p - l[r * unknowns + c]) % p)
                        .collect();
                    row.push((b[r] + p - constant[t][r]) % p);
                    row
                })
                .filter(|row| row.iter().any(|&x| x != 0))
                .collect()
        })
        .collect();
    let mut system = Echelon::new(p, unknowns + 1);
    for row in rows.into_iter().flatten() {
        system.insert(row);
        if system.rank() > unknowns {
            break;
        }
    }
    Ok(Propagation { linear, constant, system, unknowns })
}

/// H¹(G, M) by generator propagation.
pub fn h1_dim(group: &FiniteGroup, module: &ActionModule) -> Result<OneCocycleSpace, CohomologyError> {
    let prop = propagate(group, module, None)?;
    let basis = prop.system.nullspace(prop.unknowns);
    let dim_z1 = basis.len();
    let dim_b1 = module.dim - module.fixed_dim(group);
    let h1_fp = dim_z1 - dim_b1;
    if !h1_fp.is_multiple_of(module.d) {
        return Err(CohomologyError::Indivisible { dim: h1_fp, d: module.d });
    }
    Ok(OneCocycleSpace { dim_z1, dim_b1, h1_fp, h1_k: h1_fp / module.d, basis })
}

/// dim_k of G-equivariant maps K/pK → M, for a Γ-module on which K acts trivially.
pub fn h1_via_inflation(ext: &ExtensionGroup, module: &ActionModule) -> Result<usize, CohomologyError> {
    let gamma = ext.group();
    if module.images.len() != gamma.order() {
        return Err(CohomologyError::Shape("module is not indexed by the elements of Γ".into()));
    }
    let id = fp::identity(module.dim);
    if let Some(x) = gamma.elements().find(|&x| ext.is_in_k(x) && module.images[x as usize] != id) {
        return Err(CohomologyError::ModuleNotInflated(x));
    }
    let (p, dim, r) = (module.p, module.dim, ext.rank());
    let unknowns = dim * r;
    let mut e = Echelon::new(p, unknowns);
    for g in [ext.base().tau(), ext.base().sigma()] {
        let delta: Vec<u32> = ext.delta(g).data().iter().map(|x| (x.coeffs()[0] % p as u64) as u32).collect();
        let m = module.image(ext.lift_base(g));
        // (F·δ̄(g) − M(g)·F)[i][j]
        for i in 0..dim {
            for j in 0..r {
                let mut row = vec![0u32; unknowns];
                for t in 0..r {
                    row[i * r + t] = (row[i * r + t] + delta[t * r + j]) % p;
                }
                for t in 0..dim {
                    row[t * r + j] = (row[t * r + j] + p - m[i * dim + t]) % p;
                }
                e.insert(row);
            }
        }
    }
    let dim_fp = unknowns - e.rank();
    if !dim_fp.is_multiple_of(module.d) {
        return Err(CohomologyError::Indivisible { dim: dim_fp, d: module.d });
    }
    Ok(dim_fp / module.d)
}

/// Outcome of asking whether a 2-cocycle is a coboundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoboundaryOutcome {
    /// A 1-cochain c with dc = o, validated on all pairs.
    Solvable(Vec<Vec<u32>>),
    Unsolvable,
}

impl CoboundaryOutcome {
    pub fn is_solvable(&self) -> bool {
        matches!(self, CoboundaryOutcome::Solvable(_))
    }
}

pub fn is_coboundary(
    group: &FiniteGroup,
    module: &ActionModule,
    o: &TwoCocycle,
) -> Result<CoboundaryOutcome, CohomologyError> {
    let prop = propagate(group, module, Some(o))?;
    let Some(x) = prop.system.particular_solution() else {
        return Ok(CoboundaryOutcome::Unsolvable);
    };
    let p = module.p;
    let dim = module.dim;
    let c: Vec<Vec<u32>> = prop
        .linear
        .iter()
        .zip(&prop.constant)
        .map(|(l, b)| {
            let lx = fp::mat_vec(p, l, &x);
            (0..dim).map(|r| (lx[r] + b[r]) % p).collect()
        })
        .collect();
    let n = group.order() as u32;
    let bad = (0..n * n).into_par_iter().find_any(|&k| {
        let (g, h) = (k / n, k % n);
        let gc = module.act(g, &c[h as usize]);
        let cgh = &c[group.mul(g, h) as usize];
        let ov = o.value(g, h);
        (0..dim).any(|i| (gc[i] + p - cgh[i] + c[g as usize][i]) % p != ov[i])
    });
    if let Some(k) = bad {
        return Err(CohomologyError::WitnessInvalid(k / n, k % n));
    }
    Ok(CoboundaryOutcome::Solvable(c))
}
