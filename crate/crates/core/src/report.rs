//! The end-to-end verification pipeline and its JSON report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::{h1_dim, h1_via_inflation, ActionModule};
use crate::deformation::{
    brute_force_def_count, build_test_ring, construct_rho_r, enumerate_small_extensions, hom_count_r_to_a,
    test_unliftability, DeformationError, TestRingKind,
};
use crate::groups::{group_checks, projection_is_homomorphism, ExtensionGroup, MetacyclicGroup};
use crate::hypothesis::{check_hypothesis, HypothesisError, HypothesisReport, ParameterTuple};
use crate::repn::{
    big_ring_degree, build_m, commutator_witness, descend_rep, flatten_matrix, hom_dimension_over_big_field,
    hom_module, multiplicity_by_character, elementary_witness, restrict_scalars, Representation,
};
use crate::ring::{GaloisRing, GrElem, Matrix};

pub const SCHEMA_VERSION: u32 = 1;

/// Problems with the input itself, as opposed to failed checks.
#[derive(Debug, Error)]
pub enum UsageError {
    #[error(transparent)]
    Parameters(#[from] HypothesisError),
    #[error("precision m = {m} must be at least n + 2 = {needed}")]
    Precision { m: u32, needed: u32 },
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub tuple: ParameterTuple,
    pub precision: Option<u32>,
    pub bruteforce: bool,
    pub skip_h1_bruteforce: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    pub p: u64,
    pub n: u32,
    pub ell: u64,
    pub q: u64,
    pub u: u64,
    pub a: u64,
    pub m: u32,
    pub d: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupOrders {
    pub g: usize,
    pub k: usize,
    pub gamma: usize,
    pub gamma_element_orders: BTreeMap<u64, usize>,
    pub gamma_center: usize,
    pub structure_checks_passed: bool,
    pub projection_is_homomorphism: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Skipped {
    #[serde(rename = "skipped")]
    Skipped,
}

/// A dimension, or the marker "skipped".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MaybeDim {
    Dim(usize),
    Skipped(Skipped),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Summary {
    pub inflation: usize,
    pub bruteforce: MaybeDim,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicitySummary {
    pub mult: usize,
    pub s_count: usize,
    pub inner_product_agrees: bool,
    /// dim Hom_G(V(θ^a), End V) over a field containing the ℓ-th roots of unity.
    pub hom_dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSummary {
    /// Index of the chosen generator ψ among the Howell generators of the Hom module.
    pub psi_index: usize,
    /// ψ as a matrix over Z/p^n, rows × columns.
    pub psi: Vec<Vec<u64>>,
    pub commutator_found: bool,
    pub commutator_from_basis: bool,
    pub first: Vec<u64>,
    pub second: Vec<u64>,
    pub column: usize,
    pub pair: (u64, u64),
    pub pair_composites_differ: bool,
    pub pair_map_equivariant: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftSummary {
    pub verified: bool,
    pub pairs_checked: u64,
    pub ring: String,
    /// The verdicts for every small extension are unchanged at precision m + 1.
    pub stable_at_m_plus_one: bool,
    pub scope: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Obstructed,
    LiftFound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionEntry {
    pub extension: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteForceEntry {
    pub ring: String,
    /// Strict-equivalence classes, or "skipped" when the enumeration guard trips.
    pub classes: MaybeDim,
    pub hom_count: usize,
    pub matches: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overall {
    pub verdict: Outcome,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub parameters: Parameters,
    pub hypothesis: HypothesisReport,
    pub group_orders: Option<GroupOrders>,
    pub h1: Option<H1Summary>,
    pub multiplicity: Option<MultiplicitySummary>,
    pub witness: Option<WitnessSummary>,
    pub lift: Option<LiftSummary>,
    pub obstructions: Vec<ObstructionEntry>,
    pub bruteforce_def: Option<Vec<BruteForceEntry>>,
    pub overall: Overall,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.overall.verdict == Outcome::Pass
    }

    pub fn obstructed_count(&self) -> usize {
        self.obstructions.iter().filter(|o| o.verdict == Verdict::Obstructed).count()
    }
}

fn residues(m: &Matrix<GrElem>) -> Vec<Vec<u64>> {
    m.to_rows().iter().map(|r| r.iter().map(|x| x.coeffs()[0]).collect()).collect()
}

/// Everything that depends on the W-precision m.
struct LiftStage {
    verified: bool,
    pairs: u64,
    ring: String,
    verdicts: Vec<ObstructionEntry>,
}

fn lift_stage(
    g: &MetacyclicGroup,
    ext: &ExtensionGroup,
    rho_a: &Representation,
    t: &ParameterTuple,
    m: u32,
    d: usize,
) -> Result<LiftStage, String> {
    let wm = GaloisRing::new(t.p, m, d).map_err(|e| e.to_string())?;
    let a = wm.with_precision(t.n).map_err(|e| e.to_string())?;
    let k = wm.residue_field();
    let rho_w = descend_rep(g, 1, &wm).map_err(|e| e.to_string())?;
    let hom = hom_module(g.group(), &restrict_scalars(rho_a), &build_m(&rho_w.reduce_to(&a)), d);
    let psi = hom.psi.ok_or("Hom(K, M) is not free of rank one over A")?;
    let module = ActionModule::from_linear(&build_m(&rho_w.reduce_to(&k)), d)
        .map_err(|e| e.to_string())?
        .inflate(ext);
    let r = build_test_ring(TestRingKind::RModel, t.p, t.n, m, d).map_err(|e| e.to_string())?;
    let rho_r = construct_rho_r(ext, &a, &psi, &rho_w, &r).map_err(|e| e.to_string())?;
    let verdicts = enumerate_small_extensions(t.p, t.n, m, d)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|c| {
            let v = test_unliftability(ext.group(), &rho_r, &module, c)?;
            Ok(ObstructionEntry {
                extension: c.label(),
                verdict: if v.is_obstructed() { Verdict::Obstructed } else { Verdict::LiftFound },
            })
        })
        .collect::<Result<Vec<_>, DeformationError>>()
        .map_err(|e| e.to_string())?;
    let n = ext.group().order() as u64;
    Ok(LiftStage { verified: true, pairs: n * n, ring: r.label(), verdicts })
}

/// Runs the full pipeline. Only malformed input is an `Err`; failed checks are recorded in the report.
pub fn verify(opts: &VerifyOptions) -> Result<VerificationReport, UsageError> {
    let t = opts.tuple;
    t.validate()?;
    let m = opts.precision.unwrap_or(t.n + 2);
    if m < t.n + 2 {
        return Err(UsageError::Precision { m, needed: t.n + 2 });
    }
    let hypothesis = check_hypothesis(&t);
    let mut report = VerificationReport {
        schema_version: SCHEMA_VERSION,
        parameters: Parameters { p: t.p, n: t.n, ell: t.ell, q: t.q, u: t.u, a: t.a, m, d: None },
        hypothesis: hypothesis.clone(),
        group_orders: None,
        h1: None,
        multiplicity: None,
        witness: None,
        lift: None,
        obstructions: Vec::new(),
        bruteforce_def: None,
        overall: Overall { verdict: Outcome::Fail, failures: Vec::new() },
    };
    let mut failures = Vec::new();
    if !hypothesis.passed {
        for (name, ok) in [("a", hypothesis.cond_a.pass), ("b", hypothesis.cond_b.pass), ("c", hypothesis.cond_c.pass)] {
            if !ok {
                failures.push(format!("hypothesis condition ({name}) fails"));
            }
        }
        report.overall.failures = failures;
        return Ok(report);
    }
    let d = hypothesis.k_degree as usize;
    report.parameters.d = Some(d as u32);
    if let Err(e) = run_stages(opts, m, d, &mut report, &mut failures) {
        failures.push(e);
    }
    report.overall = Overall {
        verdict: if failures.is_empty() { Outcome::Pass } else { Outcome::Fail },
        failures,
    };
    Ok(report)
}

fn run_stages(
    opts: &VerifyOptions,
    m: u32,
    d: usize,
    report: &mut VerificationReport,
    failures: &mut Vec<String>,
) -> Result<(), String> {
    let t = opts.tuple;
    let g = MetacyclicGroup::new(t.ell, t.q, t.u).map_err(|e| e.to_string())?;
    let a = GaloisRing::new(t.p, t.n, d).map_err(|e| e.to_string())?;
    let k = a.residue_field();
    let rho_a = descend_rep(&g, t.a, &a).map_err(|e| e.to_string())?;
    let ext = ExtensionGroup::new(
        &g,
        t.p,
        t.n,
        &flatten_matrix(&a, rho_a.image(g.tau())),
        &flatten_matrix(&a, rho_a.image(g.sigma())),
    )
    .map_err(|e| e.to_string())?;

    let checks = group_checks(ext.group());
    let proj = projection_is_homomorphism(&ext);
    if !checks.passed() || !proj {
        failures.push("group structure checks failed".into());
    }
    report.group_orders = Some(GroupOrders {
        g: g.group().order(),
        k: ext.k_order(),
        gamma: ext.group().order(),
        gamma_element_orders: checks.order_statistics.clone(),
        gamma_center: checks.center_size,
        structure_checks_passed: checks.passed(),
        projection_is_homomorphism: proj,
    });

    let mult = multiplicity_by_character(&g, t.a);
    let hom_dimension = hom_dimension_over_big_field(&g, t.a, t.p, big_ring_degree(t.p, t.ell, d));
    if mult.mult != 1 || !mult.inner_product_agrees || hom_dimension != mult.mult {
        failures.push(format!("multiplicity {} (Hom dimension {hom_dimension}) is not 1", mult.mult));
    }
    report.multiplicity = Some(MultiplicitySummary {
        mult: mult.mult,
        s_count: mult.s_count,
        inner_product_agrees: mult.inner_product_agrees,
        hom_dimension,
    });

    let wm = GaloisRing::new(t.p, m, d).map_err(|e| e.to_string())?;
    let rho_w = descend_rep(&g, 1, &wm).map_err(|e| e.to_string())?;
    let rho_hat = rho_w.reduce_to(&a);
    let hom = hom_module(g.group(), &restrict_scalars(&rho_a), &build_m(&rho_hat), d);
    let (psi_index, psi) = match (hom.psi_index, hom.psi.as_ref()) {
        (Some(i), Some(psi)) => (i, psi),
        _ => return Err("Hom(K, M) is not free of rank one over A".into()),
    };
    let comm = commutator_witness(&a, t.q as usize, psi);
    let pw = elementary_witness(&g, t.a, t.p).map_err(|e| e.to_string())?;
    if comm.is_none() || !pw.composites_differ() || !pw.equivariant {
        failures.push("no commutator witness".into());
    }
    report.witness = Some(WitnessSummary {
        psi_index,
        psi: residues(psi),
        commutator_found: comm.is_some(),
        commutator_from_basis: comm.as_ref().is_some_and(|c| c.from_basis),
        first: comm.as_ref().map(|c| c.first.clone()).unwrap_or_default(),
        second: comm.as_ref().map(|c| c.second.clone()).unwrap_or_default(),
        column: comm.as_ref().map_or(0, |c| c.column),
        pair: (pw.h2, pw.h3),
        pair_composites_differ: pw.composites_differ(),
        pair_map_equivariant: pw.equivariant,
    });

    let rho_bar = rho_w.reduce_to(&k);
    let module = ActionModule::from_linear(&build_m(&rho_bar), d).map_err(|e| e.to_string())?.inflate(&ext);
    module.check_homomorphism(ext.group()).map_err(|e| e.to_string())?;
    let inflation = h1_via_inflation(&ext, &module).map_err(|e| e.to_string())?;
    let bruteforce = if opts.skip_h1_bruteforce {
        MaybeDim::Skipped(Skipped::Skipped)
    } else {
        MaybeDim::Dim(h1_dim(ext.group(), &module).map_err(|e| e.to_string())?.h1_k)
    };
    if inflation != 1 || matches!(bruteforce, MaybeDim::Dim(x) if x != inflation) {
        failures.push(format!("H^1 dimensions {inflation} / {bruteforce:?} are not both 1"));
    }
    report.h1 = Some(H1Summary { inflation, bruteforce });

    let main = lift_stage(&g, &ext, &rho_a, &t, m, d)?;
    let next = lift_stage(&g, &ext, &rho_a, &t, m + 1, d)?;
    let stable = main.verdicts == next.verdicts;
    if !stable {
        failures.push("verdicts change between m and m + 1".into());
    }
    if main.verdicts.iter().any(|v| v.verdict != Verdict::Obstructed) {
        failures.push("some small extension admits a lift".into());
    }
    report.lift = Some(LiftSummary {
        verified: main.verified && next.verified,
        pairs_checked: main.pairs,
        ring: main.ring,
        stable_at_m_plus_one: stable,
        scope: format!(
            "homomorphism property checked on all pairs at precision {m} and {}; obstructions over C/p^{m} hold over C",
            m + 1
        ),
    });
    report.obstructions = main.verdicts;

    if opts.bruteforce {
        let rho_bar_gamma = rho_bar.inflate(&ext);
        let rings = [
            build_test_ring(TestRingKind::WittTruncation, t.p, t.n, 1, d),
            build_test_ring(TestRingKind::DualNumbers, t.p, t.n, 1, d),
            build_test_ring(TestRingKind::WittTruncation, t.p, t.n, 2, d),
        ];
        let mut entries = Vec::new();
        for ring in rings {
            let ring = ring.map_err(|e| e.to_string())?;
            let hom_count = hom_count_r_to_a(t.n, &ring).map_err(|e| e.to_string())?;
            let (classes, matches) = match brute_force_def_count(ext.group(), rho_bar_gamma.images(), &ring) {
                Ok(c) => (MaybeDim::Dim(c.classes), Some(c.classes == hom_count)),
                Err(DeformationError::TooLarge(_)) => (MaybeDim::Skipped(Skipped::Skipped), None),
                Err(e) => return Err(e.to_string()),
            };
            if matches == Some(false) {
                failures.push(format!("deformation count over {} differs from the Hom count", ring.label()));
            }
            entries.push(BruteForceEntry { ring: ring.label(), classes, hom_count, matches });
        }
        report.bruteforce_def = Some(entries);
    }
    Ok(())
}

/// Header plus one row per report.
pub fn format_table(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>3} {:>2} {:>4} {:>3} {:>3} {:>3} {:>2} {:>2} {:>6} {:>10} {:>7}", "p", "n", "ell", "q", "u", "a", "m", "d", "H1", "obstructed", "verdict");
    for r in reports {
        let p = &r.parameters;
        let h1 = r.h1.as_ref().map_or("-".to_string(), |h| h.inflation.to_string());
        let d = p.d.map_or("-".to_string(), |d| d.to_string());
        let obs = format!("{}/{}", r.obstructed_count(), r.obstructions.len());
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{:>3} {:>2} {:>4} {:>3} {:>3} {:>3} {:>2} {:>2} {:>6} {:>10} {:>7}",
            p.p, p.n, p.ell, p.q, p.u, p.a, p.m, d, h1, obs, verdict
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(p: u64, n: u32, ell: u64, q: u64, u: u64, a: u64) -> VerifyOptions {
        VerifyOptions { tuple: ParameterTuple { p, n, ell, q, u, a }, precision: None, bruteforce: false, skip_h1_bruteforce: false }
    }

    #[test]
    fn s4_report_passes() {
        let mut o = opts(2, 1, 3, 2, 2, 1);
        o.bruteforce = true;
        let r = verify(&o).unwrap();
        assert!(r.passed(), "{:?}", r.overall.failures);
        assert_eq!(r.group_orders.as_ref().unwrap().gamma, 24);
        assert_eq!(r.obstructed_count(), 3);
        let bf = r.bruteforce_def.as_ref().unwrap();
        assert_eq!(bf[1].classes, MaybeDim::Dim(2));
    }

    #[test]
    fn failing_condition_a_reports_fail() {
        let r = verify(&opts(3, 1, 8, 2, 3, 4)).unwrap();
        assert!(!r.passed());
        assert!(r.overall.failures[0].contains("(a)"));
        assert!(r.group_orders.is_none());
    }

    #[test]
    fn usage_errors() {
        assert!(matches!(verify(&opts(4, 1, 3, 2, 2, 1)), Err(UsageError::Parameters(_))));
        let mut o = opts(2, 1, 3, 2, 2, 1);
        o.precision = Some(2);
        assert!(matches!(verify(&o), Err(UsageError::Precision { .. })));
    }

    #[test]
    fn table_has_header_and_rows() {
        assert_eq!(format_table(&[]).lines().count(), 1);
        let r = verify(&opts(3, 1, 8, 2, 3, 4)).unwrap();
        let t = format_table(&[r]);
        assert_eq!(t.lines().count(), 2);
        assert!(t.contains("FAIL"));
    }
}
