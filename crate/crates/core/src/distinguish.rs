//! Ring-distinguishing invariants: module profiles, basis-independent
//! pairing profiles, the non-realizability certificate for the
//! sphere/point bubble family, and coefficient-sensitivity reports.
//! The tool only separates rings or reports that the computed
//! invariants agree; it never claims an isomorphism.

use crate::algebra::{pairing_profile, ufg_closure_check, ClosureOutcome, GradedAlgebra};
use crate::error::EngineError;
use crate::module::GradedModule;
use crate::ring::CoefficientRing;
use crate::state::{BaseKind, LogEntry, Provenance, ReebState, Side};
use serde::Serialize;
use std::collections::BTreeMap;

/// Invariant factors of every nonzero degree pairing, computed on free
/// parts modulo torsion.
pub fn product_profile(alg: &GradedAlgebra) -> BTreeMap<(usize, usize), Vec<i64>> {
    let mut out = BTreeMap::new();
    let top = alg.top_degree();
    for i in 1..=top {
        for j in i..=top {
            if i + j > top {
                continue;
            }
            let factors = pairing_profile(alg, i, j);
            if !factors.is_empty() {
                out.insert((i, j), factors);
            }
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum Verdict {
    Distinguished { invariant: String },
    InvariantsAgree,
}

/// The comparable surface of a state (or of a report reconstructed from
/// disk): exact modules plus the certified ring data.
pub struct RingData {
    pub n: usize,
    pub ring: CoefficientRing,
    pub homology: GradedModule,
    pub cohomology: GradedModule,
    pub algebra: GradedAlgebra,
    pub ring_certified: bool,
}

impl RingData {
    pub fn of_state(state: &ReebState) -> RingData {
        RingData {
            n: state.n,
            ring: state.ring,
            homology: state.homology_module(),
            cohomology: state.cohomology_module(),
            algebra: state.cohomology.clone(),
            ring_certified: state.ring_certified,
        }
    }
}

/// Whether the bounded closure check is conclusive for this ring: all
/// unit free generators below the top degree are unit multiples of
/// basis generators, which holds when every such degree has free rank
/// at most one and torsion classes never multiply nontrivially.
fn closure_conclusive(data: &RingData) -> bool {
    let m = &data.cohomology;
    for d in 1..data.n {
        if m.rank(d) > 1 {
            return false;
        }
    }
    for g in data.algebra.positive_gens() {
        if data.algebra.summands(g.0)[g.1] == 0 {
            continue;
        }
        for h in data.algebra.positive_gens() {
            if !data.algebra.gen_product(g, h).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Compares per-degree invariant factors, pairing profiles and (when
/// conclusive on both sides) the closure status. Any mismatch is a
/// genuine invariant separation.
pub fn distinguish(a: &RingData, b: &RingData) -> Result<Verdict, EngineError> {
    if a.n != b.n {
        return Err(EngineError::DimensionMismatch(a.n, b.n));
    }
    if a.ring != b.ring {
        return Err(EngineError::RingMismatch(
            a.ring.to_string(),
            b.ring.to_string(),
        ));
    }
    if !a.homology.is_isomorphic(&b.homology)? {
        return Ok(Verdict::Distinguished {
            invariant: "homology invariant factors".into(),
        });
    }
    if !a.cohomology.is_isomorphic(&b.cohomology)? {
        return Ok(Verdict::Distinguished {
            invariant: "cohomology invariant factors".into(),
        });
    }
    if a.ring_certified && b.ring_certified {
        let pa = product_profile(&a.algebra);
        let pb = product_profile(&b.algebra);
        if pa != pb {
            let key = pa
                .keys()
                .chain(pb.keys())
                .find(|k| pa.get(k) != pb.get(k))
                .copied()
                .unwrap_or((0, 0));
            return Ok(Verdict::Distinguished {
                invariant: format!("product_profile ({},{})", key.0, key.1),
            });
        }
        if closure_conclusive(a) && closure_conclusive(b) {
            let ca = ufg_closure_check(&a.algebra, a.n, 1);
            let cb = ufg_closure_check(&b.algebra, b.n, 1);
            let pass = |c: &ClosureOutcome| matches!(c, ClosureOutcome::Pass);
            if pass(&ca) != pass(&cb) {
                return Ok(Verdict::Distinguished {
                    invariant: "ufg_closure status".into(),
                });
            }
        }
    }
    Ok(Verdict::InvariantsAgree)
}

pub fn distinguish_states(a: &ReebState, b: &ReebState) -> Result<Verdict, EngineError> {
    distinguish(&RingData::of_state(a), &RingData::of_state(b))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum Certificate {
    Certified {
        witness_degrees: (usize, usize),
        witness_factor: String,
    },
    NotApplicable {
        reason: String,
    },
}

/// Certificate that no finite iteration of sphere/point bubbles from the
/// recorded base pipeline reproduces this ring: all hypotheses of the
/// closure-preservation argument are machine-checked on the log, and the
/// target must exhibit an explicit closure witness.
pub fn thm3_certificate(state: &ReebState) -> Result<Certificate, EngineError> {
    let fail = |reason: &str| {
        Ok(Certificate::NotApplicable {
            reason: reason.to_string(),
        })
    };
    if !state.ring.identity_has_infinite_order() {
        return fail("the identity of the coefficient ring has finite order");
    }
    if !state.ring_certified {
        return fail("the ring structure is uncertified");
    }
    // Pipeline shape: one special generic base, optional connected sums
    // with trivial (disc) states, sphere/point bubbles, and exactly one
    // sphere-product bubble with k > 0 at the end.
    let mut base_summands: Option<Vec<String>> = None;
    let mut thm2: Option<(usize, usize, i64)> = None;
    for entry in &state.log {
        match entry {
            LogEntry::Base { kind, summands, .. } => {
                if base_summands.is_some() {
                    return fail("pipeline has more than one base");
                }
                if !matches!(kind, BaseKind::SpecialGeneric | BaseKind::Disc) {
                    return fail("base is not a standard special generic map");
                }
                base_summands = Some(summands.clone());
            }
            LogEntry::ConnSum { .. } => {
                // the connected-sum partner must be a canonical
                // projection; a nontrivial partner would have contributed
                // left-side generators
                let nontrivial_left = state.co_provenance.iter().flatten().any(|p| {
                    matches!(p, Provenance::ConnSum { side: Side::Left, inner }
                        if !matches!(**inner, Provenance::Base { summand: 0 }))
                });
                if nontrivial_left {
                    return fail("connected-sum partner is not a canonical projection");
                }
            }
            LogEntry::Bubble {
                spheres_or_points_only,
                dims,
                ring_extended,
                ..
            } => {
                if thm2.is_some() {
                    return fail("a bubble follows the final sphere-product bubble");
                }
                if !spheres_or_points_only {
                    return fail("an intermediate bubble is not a sphere or point bouquet");
                }
                if !ring_extended {
                    return fail("an intermediate bubble has uncertified products");
                }
                for &d in dims {
                    if d > 0 && !base_degree_vanishes(state, &base_summands, d)? {
                        return fail("the base ring is nonzero in a bubbled complementary degree");
                    }
                }
            }
            LogEntry::Thm2 { k, kp, r0, .. } => {
                if thm2.is_some() {
                    return fail("pipeline has more than one sphere-product bubble");
                }
                thm2 = Some((*k, *kp, *r0));
            }
            LogEntry::Thm41 { .. } | LogEntry::Thm42 { .. } | LogEntry::RestrictTop { .. } => {
                return fail("pipeline contains a step outside the certificate family");
            }
        }
    }
    if base_summands.is_none() {
        return fail("pipeline has no base");
    }
    let Some((k, _kp, r0)) = thm2 else {
        return fail("pipeline has no final sphere-product bubble");
    };
    if k == 0 {
        return fail("k > 0 fails");
    }
    if r0.abs() <= 1 {
        return fail("|r0| > 1 fails");
    }
    // Closure of the base ring, conclusively.
    let base = rebuild_base(state, base_summands.as_deref().unwrap())?;
    let base_data = RingData::of_state(&base);
    if !closure_conclusive(&base_data) {
        return fail("base closure check is not conclusive at this rank");
    }
    if !matches!(
        ufg_closure_check(&base.cohomology, state.n, 2),
        ClosureOutcome::Pass
    ) {
        return fail("base ring violates closure itself");
    }
    // The target must exhibit the witness.
    match ufg_closure_check(&state.cohomology, state.n, 2) {
        ClosureOutcome::Witness {
            left,
            right,
            product,
        } => {
            let factor = product
                .coords
                .iter()
                .find(|c| **c != 0)
                .copied()
                .unwrap_or(0);
            Ok(Certificate::Certified {
                witness_degrees: (left.degree, right.degree),
                witness_factor: factor.abs().to_string(),
            })
        }
        ClosureOutcome::Pass => fail("the target ring exhibits no closure witness"),
    }
}

fn base_degree_vanishes(
    state: &ReebState,
    base_summands: &Option<Vec<String>>,
    d: usize,
) -> Result<bool, EngineError> {
    let Some(summands) = base_summands else {
        return Ok(false);
    };
    let base = rebuild_base(state, summands)?;
    Ok(base.cohomology_module().factors(state.n - d).is_empty())
}

fn rebuild_base(state: &ReebState, summands: &[String]) -> Result<ReebState, EngineError> {
    let exprs: Vec<crate::manifold::ManifoldExpr> = summands
        .iter()
        .map(|s| {
            crate::script::parse_manifold(s).map_err(|e| EngineError::BadManifold(e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    ReebState::special_generic_base(&exprs, state.n, state.ring)
}

#[derive(Clone, Debug, Serialize)]
pub struct SensitivityEntry {
    pub ring: String,
    pub verdict: Option<Verdict>,
    pub error: Option<String>,
    /// Which side was evaluated over Z and reduced by universal
    /// coefficients instead of directly over the ring.
    pub uct_fallback: (bool, bool),
    pub uct_modules_agree: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SensitivityReport {
    pub entries: Vec<SensitivityEntry>,
}

enum RingEval {
    Direct(ReebState),
    /// Module-level data obtained by reducing the integral evaluation.
    Reduced(GradedModule),
}

fn eval_over_ring(
    script: &crate::script::Script,
    ring: CoefficientRing,
) -> Result<RingEval, EngineError> {
    match crate::script::evaluate_with_ring(script, Some(ring)) {
        Ok(e) => Ok(RingEval::Direct(e.state)),
        Err(direct_err) => {
            if ring == CoefficientRing::Integers {
                return Err(direct_err.source);
            }
            let over_z = crate::script::evaluate_with_ring(script, Some(CoefficientRing::Integers))
                .map_err(|_| direct_err.source.clone())?;
            let reduced = over_z.state.homology_module().change_coefficients(ring)?;
            Ok(RingEval::Reduced(reduced))
        }
    }
}

fn ring_data_of(eval: &RingEval, ring: CoefficientRing) -> Result<RingData, EngineError> {
    match eval {
        RingEval::Direct(state) => Ok(RingData::of_state(state)),
        RingEval::Reduced(h) => {
            let n = h.top_degree();
            let co = h.uct_dual().padded_to(n);
            let mut summands = vec![Vec::new(); n + 1];
            let mut labels = vec![Vec::new(); n + 1];
            for d in 0..=n {
                for (i, &q) in co.factors(d).iter().enumerate() {
                    summands[d].push(q);
                    labels[d].push(if d == 0 {
                        "1".into()
                    } else {
                        format!("g{d}.{i}")
                    });
                }
            }
            let algebra = GradedAlgebra::from_parts(ring, n, summands, labels, Default::default())?;
            Ok(RingData {
                n,
                ring,
                homology: h.clone(),
                cohomology: co,
                algebra,
                ring_certified: false,
            })
        }
    }
}

/// Evaluates both scripts over each listed ring (falling back to the
/// integral evaluation reduced by universal coefficients when a script
/// cannot run over that ring), distinguishes the results, and
/// cross-checks direct mod-n evaluations against their own reductions.
pub fn coefficient_sensitivity(
    script_a: &crate::script::Script,
    script_b: &crate::script::Script,
    rings: &[CoefficientRing],
) -> SensitivityReport {
    let mut entries = Vec::new();
    for &ring in rings {
        match (
            eval_over_ring(script_a, ring),
            eval_over_ring(script_b, ring),
        ) {
            (Ok(ea), Ok(eb)) => {
                let fallback = (
                    matches!(ea, RingEval::Reduced(_)),
                    matches!(eb, RingEval::Reduced(_)),
                );
                let pad = |mut x: RingData, n: usize| {
                    x.homology = x.homology.padded_to(n);
                    x.cohomology = x.cohomology.padded_to(n);
                    x.n = n;
                    x
                };
                let (da, db) = match (ring_data_of(&ea, ring), ring_data_of(&eb, ring)) {
                    (Ok(da), Ok(db)) => {
                        let n = da.n.max(db.n);
                        (pad(da, n), pad(db, n))
                    }
                    (ra, rb) => {
                        let err = ra.err().or(rb.err()).map(|e| e.to_string());
                        entries.push(SensitivityEntry {
                            ring: ring.to_string(),
                            verdict: None,
                            error: err,
                            uct_fallback: fallback,
                            uct_modules_agree: None,
                        });
                        continue;
                    }
                };
                let verdict = distinguish(&da, &db).ok();
                // cross-check whichever sides admit an integral run
                let checks: Vec<bool> = [
                    uct_cross_check(script_a, &ea, ring),
                    uct_cross_check(script_b, &eb, ring),
                ]
                .into_iter()
                .flatten()
                .collect();
                let uct = if checks.is_empty() {
                    None
                } else {
                    Some(checks.iter().all(|&b| b))
                };
                entries.push(SensitivityEntry {
                    ring: ring.to_string(),
                    verdict,
                    error: None,
                    uct_fallback: fallback,
                    uct_modules_agree: uct,
                });
            }
            (ra, rb) => {
                let err = ra.err().or(rb.err()).map(|e| e.to_string());
                entries.push(SensitivityEntry {
                    ring: ring.to_string(),
                    verdict: None,
                    error: err,
                    uct_fallback: (false, false),
                    uct_modules_agree: None,
                });
            }
        }
    }
    SensitivityReport { entries }
}

fn uct_cross_check(
    script: &crate::script::Script,
    direct: &RingEval,
    ring: CoefficientRing,
) -> Option<bool> {
    if ring == CoefficientRing::Integers {
        return None;
    }
    let RingEval::Direct(state) = direct else {
        return None;
    };
    let over_z = crate::script::evaluate_with_ring(script, Some(CoefficientRing::Integers)).ok()?;
    let reduced = over_z
        .state
        .homology_module()
        .change_coefficients(ring)
        .ok()?;
    let direct_h = state.homology_module().padded_to(reduced.top_degree());
    let reduced = reduced.padded_to(direct_h.top_degree());
    reduced.is_isomorphic(&direct_h).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bubbling::{bubble_homology, thm2_bubble, GeneratingData};
    use crate::manifold::ManifoldExpr;

    fn z() -> CoefficientRing {
        CoefficientRing::Integers
    }

    fn s(d: usize) -> ManifoldExpr {
        ManifoldExpr::Sphere(d)
    }

    fn six_pipeline(r0: i64) -> ReebState {
        let base = ReebState::special_generic_base(&[s(2)], 6, z()).unwrap();
        thm2_bubble(&base, 1, 2, r0).unwrap()
    }

    #[test]
    fn reflexive_agreement() {
        let x = six_pipeline(2);
        assert_eq!(
            distinguish_states(&x, &x).unwrap(),
            Verdict::InvariantsAgree
        );
    }

    #[test]
    fn profile_separates_trivial_products() {
        let target = six_pipeline(2);
        // same modules with all-trivial products: bubble with the
        // bouquet S1 v S2 v S3 without class data
        let base = ReebState::special_generic_base(&[s(2)], 6, z()).unwrap();
        let rival =
            bubble_homology(&base, &GeneratingData::bouquet(vec![s(1), s(2), s(3)])).unwrap();
        assert!(target
            .homology_module()
            .is_isomorphic(&rival.homology_module())
            .unwrap());
        let v = distinguish_states(&target, &rival).unwrap();
        assert_eq!(
            v,
            Verdict::Distinguished {
                invariant: "product_profile (2,3)".into()
            }
        );
        // symmetric
        let v = distinguish_states(&rival, &target).unwrap();
        assert!(matches!(v, Verdict::Distinguished { .. }));
    }

    #[test]
    fn mod_four_pair_differs_only_in_products() {
        let z4 = CoefficientRing::integers_mod(4).unwrap();
        let base = ReebState::special_generic_base(&[s(2)], 6, z4).unwrap();
        let with_products = crate::bubbling::thm42_bubble(&base, 2, 2, 1).unwrap();
        let trivial = thm2_bubble(&base, 1, 2, 0).unwrap();
        assert!(with_products
            .homology_module()
            .is_isomorphic(&trivial.homology_module())
            .unwrap());
        let v = distinguish_states(&with_products, &trivial).unwrap();
        assert!(
            matches!(&v, Verdict::Distinguished { invariant } if invariant.starts_with("product_profile")),
            "{v:?}"
        );
    }

    #[test]
    fn sensitivity_reports() {
        let target =
            crate::script::parse("coeff Zmod:4\nbase sg n=6 [S2]\nstep thm42 kp=2 p=2 rp=1\n")
                .unwrap();
        let trivial =
            crate::script::parse("coeff Zmod:4\nbase sg n=6 [S2]\nstep thm2 k=1 kp=2 r0=0\n")
                .unwrap();
        let z4 = CoefficientRing::integers_mod(4).unwrap();
        let report = coefficient_sensitivity(&target, &trivial, &[z4]);
        assert!(matches!(
            report.entries[0].verdict,
            Some(Verdict::Distinguished { .. })
        ));
        assert_eq!(report.entries[0].uct_modules_agree, Some(true));

        // identical scripts agree over every ring
        let report = coefficient_sensitivity(&target, &target, &[z4, CoefficientRing::Rationals]);
        for e in &report.entries {
            if e.error.is_none() {
                assert_eq!(e.verdict, Some(Verdict::InvariantsAgree), "{:?}", e.ring);
            }
        }

        // a Z-only script falls back to the reduced integral evaluation
        let t41 =
            crate::script::parse("coeff Z\nbase sg n=6 [S2]\nstep thm41 kp=2 r0=2\n").unwrap();
        let report = coefficient_sensitivity(&t41, &target, &[z4]);
        let entry = &report.entries[0];
        assert_eq!(entry.uct_fallback, (true, false));
        assert_eq!(entry.error, None);
        // module level only, and the module tables agree
        assert_eq!(entry.verdict, Some(Verdict::InvariantsAgree));
    }

    #[test]
    fn certificate_on_the_standard_instance() {
        let c = thm3_certificate(&six_pipeline(2)).unwrap();
        match c {
            Certificate::Certified {
                witness_degrees,
                witness_factor,
            } => {
                assert_eq!(witness_degrees, (2, 3));
                assert_eq!(witness_factor, "2");
            }
            Certificate::NotApplicable { reason } => panic!("unexpected: {reason}"),
        }
    }

    #[test]
    fn certificate_rejects_unit_r0() {
        let c = thm3_certificate(&six_pipeline(1)).unwrap();
        assert!(matches!(c, Certificate::NotApplicable { reason } if reason.contains("|r0|")));
    }

    #[test]
    fn certificate_rejects_finite_order_identity() {
        let z5 = CoefficientRing::integers_mod(5).unwrap();
        let base = ReebState::special_generic_base(&[s(2)], 6, z5).unwrap();
        let st = thm2_bubble(&base, 1, 2, 2).unwrap();
        let c = thm3_certificate(&st).unwrap();
        assert!(
            matches!(c, Certificate::NotApplicable { reason } if reason.contains("finite order"))
        );
    }
}
