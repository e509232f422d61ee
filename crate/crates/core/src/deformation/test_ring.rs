use rand::Rng;
use serde::{Deserialize, Serialize};

use super::DeformationError;
use crate::ring::{CommRing, GaloisRing, GrElem};

/// Which finite ring a [`TestRing`] models.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestRingKind {
    /// W/p^m ⊕ (W/p^n)·t with t² = 0.
    RModel,
    /// W/p^m ⊕ (W/p^{n+1})·t with t² = c·p^n·t.
    CaseA { c: Vec<u64> },
    /// W/p^m ⊕ (W/p^n)·t ⊕ k·t² with t³ = p·t² = 0.
    CaseB,
    /// k ⊕ k·ε.
    DualNumbers,
    /// W/p^m.
    WittTruncation,
}

/// w + t·x + t²·e, with the coefficient rings fixed by the kind.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrElem {
    pub w: GrElem,
    pub t: GrElem,
    pub e: GrElem,
}

#[derive(Clone, Debug)]
pub struct TestRing {
    kind: TestRingKind,
    n: u32,
    w: GaloisRing,
    t: GaloisRing,
    k: GaloisRing,
    c: Option<GrElem>,
}

pub fn build_test_ring(kind: TestRingKind, p: u64, n: u32, m: u32, d: usize) -> Result<TestRing, DeformationError> {
    let needed = match kind {
        TestRingKind::RModel => n,
        TestRingKind::CaseA { .. } => n + 2,
        TestRingKind::CaseB => n + 1,
        TestRingKind::DualNumbers | TestRingKind::WittTruncation => 1,
    };
    if n == 0 || m < needed {
        return Err(DeformationError::PrecisionTooLow { m, needed });
    }
    let (m, n) = if kind == TestRingKind::DualNumbers { (1, 1) } else { (m, n) };
    let w = GaloisRing::new(p, m, d)?;
    let k = w.residue_field();
    let t = match kind {
        TestRingKind::CaseA { .. } => w.with_precision(n + 1)?,
        TestRingKind::WittTruncation => k.clone(),
        _ => w.with_precision(n)?,
    };
    let c = match &kind {
        TestRingKind::CaseA { c } => {
            if c.len() != d || c.iter().any(|&x| x >= p) {
                return Err(DeformationError::BadParameter(format!("c = {c:?} is not an element of k")));
            }
            Some(k.from_coeffs(c))
        }
        _ => None,
    };
    Ok(TestRing { kind, n, w, t, k, c })
}

impl TestRing {
    pub fn kind(&self) -> &TestRingKind {
        &self.kind
    }
    pub fn p(&self) -> u64 {
        self.w.p()
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn m(&self) -> u32 {
        self.w.m()
    }
    pub fn d(&self) -> usize {
        self.w.d()
    }
    pub fn w_ring(&self) -> &GaloisRing {
        &self.w
    }
    pub fn t_ring(&self) -> &GaloisRing {
        &self.t
    }
    pub fn residue_field(&self) -> &GaloisRing {
        &self.k
    }

    fn has_t(&self) -> bool {
        self.kind != TestRingKind::WittTruncation
    }

    fn has_e(&self) -> bool {
        self.kind == TestRingKind::CaseB
    }

    pub fn label(&self) -> String {
        match &self.kind {
            TestRingKind::RModel => format!("R(n={}, m={})", self.n, self.m()),
            TestRingKind::CaseA { c } => format!("case_a(c={c:?})"),
            TestRingKind::CaseB => "case_b".to_string(),
            TestRingKind::DualNumbers => "k[eps]".to_string(),
            TestRingKind::WittTruncation => format!("W/p^{}", self.m()),
        }
    }

    pub fn elem(&self, w: GrElem, t: GrElem, e: GrElem) -> TrElem {
        TrElem {
            w: self.w.reduce_to(&w, &self.w),
            t: if self.has_t() { self.t.reduce_to(&t, &self.t) } else { self.t.zero() },
            e: if self.has_e() { self.k.reduce_to(&e, &self.k) } else { self.k.zero() },
        }
    }

    pub fn from_w(&self, w: &GrElem) -> TrElem {
        TrElem { w: w.clone(), t: self.t.zero(), e: self.k.zero() }
    }

    /// The element t·x, with x read in the t-coefficient ring.
    pub fn t_times(&self, x: &GrElem) -> TrElem {
        self.elem(self.w.zero(), x.clone(), self.k.zero())
    }

    pub fn residue(&self, a: &TrElem) -> GrElem {
        self.w.residue(&a.w)
    }

    /// Coefficient-wise lift of a residue-field element.
    pub fn lift_residue(&self, x: &GrElem) -> TrElem {
        self.from_w(&self.w.lift_coefficients(x))
    }

    pub fn in_maximal_ideal(&self, a: &TrElem) -> bool {
        self.residue(a).is_zero()
    }

    /// The generator z of ker(C → R): p^n·t in case (a), t² in case (b).
    pub fn kernel_generator(&self) -> Option<TrElem> {
        match self.kind {
            TestRingKind::CaseA { .. } => Some(self.t_times(&self.t.mul_p_pow(&self.t.one(), self.n))),
            TestRingKind::CaseB => Some(self.elem(self.w.zero(), self.t.zero(), self.k.one())),
            _ => None,
        }
    }

    /// z·x for x ∈ k.
    pub fn z_times(&self, x: &GrElem) -> Option<TrElem> {
        match self.kind {
            TestRingKind::CaseA { .. } => Some(self.t_times(&self.t.mul_p_pow(x, self.n))),
            TestRingKind::CaseB => Some(self.elem(self.w.zero(), self.t.zero(), x.clone())),
            _ => None,
        }
    }

    /// The x ∈ k with a = z·x, or `None` when a is not in the kernel.
    pub fn kernel_coordinate(&self, a: &TrElem) -> Option<GrElem> {
        if !a.w.is_zero() {
            return None;
        }
        match self.kind {
            TestRingKind::CaseA { .. } => {
                (self.t.valuation(&a.t) >= self.n).then(|| self.t.residue(&self.t.div_p_pow(&a.t, self.n)))
            }
            TestRingKind::CaseB => a.t.is_zero().then(|| a.e.clone()),
            _ => None,
        }
    }

    /// Every element, in a fixed order; `None` if there are more than `limit`.
    pub fn elements(&self, limit: usize) -> Option<Vec<TrElem>> {
        let size = |r: &GaloisRing| r.size();
        let total = size(&self.w)
            * if self.has_t() { size(&self.t) } else { 1 }
            * if self.has_e() { size(&self.k) } else { 1 };
        if total > limit as u128 {
            return None;
        }
        let ts: Vec<GrElem> = if self.has_t() { self.t.elements().collect() } else { vec![self.t.zero()] };
        let es: Vec<GrElem> = if self.has_e() { self.k.elements().collect() } else { vec![self.k.zero()] };
        let mut out = Vec::with_capacity(total as usize);
        for w in self.w.elements() {
            for t in &ts {
                for e in &es {
                    out.push(TrElem { w: w.clone(), t: t.clone(), e: e.clone() });
                }
            }
        }
        Some(out)
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> TrElem {
        let mut rand_in = |r: &GaloisRing| {
            let c: Vec<u64> = (0..r.d()).map(|_| rng.gen_range(0..r.modulus())).collect();
            r.from_coeffs(&c)
        };
        let w = rand_in(&self.w);
        let t = rand_in(&self.t);
        let e = rand_in(&self.k);
        self.elem(w, t, e)
    }

    /// Commutativity, associativity and distributivity on random triples.
    pub fn check_axioms<R: Rng>(&self, rng: &mut R, samples: usize) -> bool {
        (0..samples).all(|_| {
            let (a, b, c) = (self.random(rng), self.random(rng), self.random(rng));
            self.mul(&a, &b) == self.mul(&b, &a)
                && self.mul(&self.mul(&a, &b), &c) == self.mul(&a, &self.mul(&b, &c))
                && self.mul(&a, &self.add(&b, &c)) == self.add(&self.mul(&a, &b), &self.mul(&a, &c))
        })
    }
}

impl CommRing for TestRing {
    type Elem = TrElem;

    fn zero(&self) -> TrElem {
        self.from_w(&self.w.zero())
    }
    fn one(&self) -> TrElem {
        self.from_w(&self.w.one())
    }
    fn from_int(&self, n: i64) -> TrElem {
        self.from_w(&self.w.from_int(n))
    }
    fn add(&self, a: &TrElem, b: &TrElem) -> TrElem {
        TrElem { w: self.w.add(&a.w, &b.w), t: self.t.add(&a.t, &b.t), e: self.k.add(&a.e, &b.e) }
    }
    fn neg(&self, a: &TrElem) -> TrElem {
        TrElem { w: self.w.neg(&a.w), t: self.t.neg(&a.t), e: self.k.neg(&a.e) }
    }
    fn mul(&self, a: &TrElem, b: &TrElem) -> TrElem {
        let w = self.w.mul(&a.w, &b.w);
        if !self.has_t() {
            return self.from_w(&w);
        }
        let (wa, wb) = (self.w.reduce_to(&a.w, &self.t), self.w.reduce_to(&b.w, &self.t));
        let mut t = self.t.add(&self.t.mul(&wa, &b.t), &self.t.mul(&wb, &a.t));
        if let Some(c) = &self.c {
            let tt = self.t.mul(&a.t, &b.t);
            t = self.t.add(&t, &self.t.mul_p_pow(&self.t.mul(c, &tt), self.n));
        }
        let e = if self.has_e() {
            let r = |x: &GrElem| self.w.residue(x);
            let rt = |x: &GrElem| self.t.residue(x);
            let s = self.k.add(&self.k.mul(&r(&a.w), &b.e), &self.k.mul(&r(&b.w), &a.e));
            self.k.add(&s, &self.k.mul(&rt(&a.t), &rt(&b.t)))
        } else {
            self.k.zero()
        };
        TrElem { w, t, e }
    }
    fn is_unit(&self, a: &TrElem) -> bool {
        self.w.is_unit(&a.w)
    }
    /// For a unit u = w + x with x nilpotent, u⁻¹ = w⁻¹(1 − y + y²) where y = w⁻¹x and y³ = 0.
    fn inv(&self, a: &TrElem) -> Option<TrElem> {
        let winv = self.from_w(&self.w.inv(&a.w)?);
        let x = TrElem { w: self.w.zero(), t: a.t.clone(), e: a.e.clone() };
        let y = self.mul(&winv, &x);
        let y2 = self.mul(&y, &y);
        let series = self.add(&self.sub(&self.one(), &y), &y2);
        Some(self.mul(&winv, &series))
    }
}

/// The small extensions C → R with one-dimensional kernel over k: case (a) for every
/// c ∈ k, then case (b).
///
/// An ideal I = (p^{n+1}t, pt², t³, a·p^n·t + b·t²) with a or b a unit gives one of two
/// shapes. When b is a unit, t² = −b⁻¹a·p^n·t, and only c = −b⁻¹a mod p matters because
/// p^{n+1}t = 0; rescaling (a, b) by a unit leaves c unchanged. When b is not a unit, a
/// is, and p^n·t ≡ −a⁻¹b·t² ≡ 0 modulo I since b ∈ pW and pt² ∈ I, so t² spans the
/// kernel. Distinct c give distinct relations t² = c·p^n·t, hence |k| + 1 rings.
pub fn enumerate_small_extensions(p: u64, n: u32, m: u32, d: usize) -> Result<Vec<TestRing>, DeformationError> {
    let k = GaloisRing::new(p, 1, d)?;
    let mut out: Vec<TestRing> = k
        .elements()
        .map(|c| build_test_ring(TestRingKind::CaseA { c: c.coeffs().to_vec() }, p, n, m, d))
        .collect::<Result<_, _>>()?;
    out.push(build_test_ring(TestRingKind::CaseB, p, n, m, d)?);
    Ok(out)
}
