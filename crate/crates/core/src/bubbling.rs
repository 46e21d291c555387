//! The transformation rules on Reeb-space states: bouquet bubbles with
//! their homology bookkeeping, ring-level bubbles with explicit product
//! rules, connected sums of states, the parameterized sphere-product and
//! twisted-bundle bubbles, top-degree restriction and the degree-window
//! consumers.

use crate::algebra::{canonical_entry, GenId, GradedAlgebra};
use crate::error::EngineError;
use crate::manifold::{ClassKind, ManifoldExpr};
use crate::module::{is_ufg, GradedModule, ModuleElement};
use crate::ring::CoefficientRing;
use crate::state::{HSummand, LogEntry, Provenance, ReebState, Side};
use std::collections::{BTreeMap, BTreeSet};

/// Class data for one bouquet ingredient: which catalog class plays
/// c_S and the embedding coefficients against the marked basis in
/// degree dim S - k. Missing data means a trivial placement in a small
/// disc (all coefficients zero).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassChoice {
    pub class_index: usize,
    pub coefficients: Vec<i64>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ingredient {
    pub manifold: ManifoldExpr,
    pub class: Option<ClassChoice>,
}

impl Ingredient {
    pub fn plain(manifold: ManifoldExpr) -> Self {
        Ingredient {
            manifold,
            class: None,
        }
    }
}

/// A bouquet of generating manifolds for one bubble step.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratingData {
    pub ingredients: Vec<Ingredient>,
    /// Placement flag recorded in the log; restriction later requires it.
    pub disjoint: bool,
}

impl GeneratingData {
    pub fn bouquet(manifolds: Vec<ManifoldExpr>) -> Self {
        GeneratingData {
            ingredients: manifolds.into_iter().map(Ingredient::plain).collect(),
            disjoint: true,
        }
    }
}

/// Module-level bubble: always applies when the ingredients are valid,
/// and degrades to a module-only state (ring uncertified) when the
/// ring-level hypotheses cannot be checked.
pub fn bubble_homology(state: &ReebState, data: &GeneratingData) -> Result<ReebState, EngineError> {
    bubble(state, data, false)
}

/// Ring-level bubble: errors with the specific failed hypothesis instead
/// of degrading.
pub fn ms_bubble_ring(state: &ReebState, data: &GeneratingData) -> Result<ReebState, EngineError> {
    bubble(state, data, true)
}

struct ResolvedClass {
    /// degree of c_S
    k: usize,
    /// cohomology position of the dual of c_S inside the ingredient ring
    cs_gen: GenId,
    /// pairing partner: the generator with c_S^* . partner = +-top, or
    /// None when the partner is the top class itself (k = 0)
    pd_partner: Option<GenId>,
    coefficients: Vec<i64>,
}

fn bubble(
    state: &ReebState,
    data: &GeneratingData,
    strict: bool,
) -> Result<ReebState, EngineError> {
    let n = state.n;
    let ring = state.ring;
    let step = state.next_step_index();
    if data.ingredients.is_empty() {
        return Err(EngineError::precondition("empty generating bouquet"));
    }
    for ing in &data.ingredients {
        ing.manifold.validate()?;
        if ing.manifold.dimension() >= n {
            return Err(EngineError::precondition(format!(
                "ingredient {} has dimension >= n",
                ing.manifold
            )));
        }
    }

    // Ring-level qualification per the connected-sum/bubble hypotheses.
    let mut ring_ok = true;
    let fail = |msg: String, ring_ok: &mut bool| -> Result<(), EngineError> {
        if strict {
            Err(EngineError::Precondition(msg))
        } else {
            *ring_ok = false;
            Ok(())
        }
    };
    if !state.ring_certified {
        fail("state ring structure is uncertified".into(), &mut ring_ok)?;
    }
    if state.base_kind().is_none() {
        fail("state has no base record".into(), &mut ring_ok)?;
    }
    if n < 3 {
        fail("ring-level bubbles need n >= 3".into(), &mut ring_ok)?;
    }
    if let Some(d) = state.prestage_polyhedron_dim {
        if d + 1 >= n {
            fail(
                "pre-stage generating polyhedra must have dimension below n-1".into(),
                &mut ring_ok,
            )?;
        }
    }
    for ing in &data.ingredients {
        if 2 * ing.manifold.dimension() > n {
            fail(
                format!("ingredient {} violates 2 dim S <= n", ing.manifold),
                &mut ring_ok,
            )?;
        }
    }

    // Resolve class choices while qualification holds.
    let mut resolved: Vec<Option<ResolvedClass>> = Vec::new();
    for ing in &data.ingredients {
        let catalog = ing.manifold.build(ring)?;
        let dim = ing.manifold.dimension();
        match &ing.class {
            None => resolved.push(None),
            Some(choice) => {
                let Some(class) = catalog.classes.get(choice.class_index) else {
                    return Err(EngineError::precondition(format!(
                        "ingredient {} has no represented class #{}",
                        ing.manifold, choice.class_index
                    )));
                };
                let k = class.degree;
                let h = ing.manifold.homology(ring)?;
                let hk = single_degree(ring, &h, k);
                let mut coords = vec![0i64; h.factors(k).len()];
                coords[class.position.1] = 1;
                let cls_elem = ModuleElement::new(k, coords);
                if !is_ufg(&cls_elem, &hk)? {
                    fail(
                        format!(
                            "chosen class of {} (degree {k}) is not a unit free generator",
                            ing.manifold
                        ),
                        &mut ring_ok,
                    )?;
                    resolved.push(None);
                    continue;
                }
                if matches!(class.kind, ClassKind::FiberSphere) {
                    // torsion classes never qualify; kept for clarity
                    fail("fiber classes carry torsion".into(), &mut ring_ok)?;
                    resolved.push(None);
                    continue;
                }
                let markers = state.markers_in_degree(dim - k);
                if choice.coefficients.len() > markers.len() {
                    return Err(EngineError::precondition(format!(
                        "{} embedding coefficients given, marked rank is {}",
                        choice.coefficients.len(),
                        markers.len()
                    )));
                }
                let mut coefficients = choice.coefficients.clone();
                coefficients.resize(markers.len(), 0);
                let pd_partner = if k == 0 {
                    None
                } else {
                    Some(pairing_partner(&catalog.algebra, class.position, dim)?)
                };
                resolved.push(Some(ResolvedClass {
                    k,
                    cs_gen: class.position,
                    pd_partner,
                    coefficients,
                }));
            }
        }
    }
    if !ring_ok {
        resolved = data.ingredients.iter().map(|_| None).collect();
    }

    // Homology bookkeeping: each ingredient contributes its modules
    // below the top, shifted by n - dim S; one shared free top class.
    let mut homology = state.homology.clone();
    let mut added_co: Vec<(usize, i64, String)> = Vec::new();
    let mut co_positions: Vec<BTreeMap<GenId, usize>> = Vec::new();
    for (j, ing) in data.ingredients.iter().enumerate() {
        let dim = ing.manifold.dimension();
        let shift = n - dim;
        let h = ing.manifold.homology(ring)?;
        let co = ing.manifold.cohomology_ring(ring)?;
        let mut pos_map = BTreeMap::new();
        for c in 0..dim {
            for (i, &q) in h.factors(c).iter().enumerate() {
                homology[c + shift].push(HSummand {
                    factor: q,
                    provenance: Provenance::Bubbled {
                        step,
                        ingredient: j,
                        source: format!("h{c}.{i}"),
                    },
                    q_marked: false,
                });
            }
            for (i, _) in co.summands(c).iter().enumerate() {
                pos_map.insert((c, i), added_co.len());
                added_co.push((
                    c + shift,
                    co.summands(c)[i],
                    format!("bub{step}.{j}.c{c}.{i}"),
                ));
            }
        }
        co_positions.push(pos_map);
    }
    let top_slot = added_co.len();
    added_co.push((n, 0, format!("bub{step}.top")));
    homology[n].push(HSummand {
        factor: 0,
        provenance: Provenance::Bubbled {
            step,
            ingredient: 0,
            source: "top".into(),
        },
        q_marked: false,
    });

    // Extend the cohomology ring; compute appended positions first.
    let (_, positions) = state.cohomology.extended(&added_co, BTreeMap::new())?;
    let mut new_products: BTreeMap<(GenId, GenId), ModuleElement> = BTreeMap::new();
    let add_entry = |alg_summands: &dyn Fn(usize) -> usize,
                     a: GenId,
                     b: GenId,
                     target: GenId,
                     coeff: i64,
                     acc: &mut BTreeMap<(GenId, GenId), ModuleElement>| {
        if coeff == 0 {
            return;
        }
        let d = a.0 + b.0;
        let mut value = ModuleElement::new(d, vec![0; alg_summands(d)]);
        value.coords[target.1] += coeff;
        let (key, v) = canonical_entry(a, b, value);
        match acc.get_mut(&key) {
            Some(existing) => {
                for (x, y) in existing.coords.iter_mut().zip(&v.coords) {
                    *x += y;
                }
            }
            None => {
                acc.insert(key, v);
            }
        }
    };

    if ring_ok {
        for (j, ing) in data.ingredients.iter().enumerate() {
            let Some(res) = &resolved[j] else { continue };
            let dim = ing.manifold.dimension();
            let markers = state.markers_in_degree(dim - res.k);
            let unit_pos = positions[co_positions[j][&(0, 0)]];
            let cs_pos = positions[co_positions[j][&res.cs_gen]];
            let pd_pos = match res.pd_partner {
                None => positions[top_slot],
                Some(g) => positions[co_positions[j][&g]],
            };
            let top_pos = positions[top_slot];
            let count = |d: usize| -> usize {
                state.cohomology.summands(d).len()
                    + added_co.iter().filter(|(deg, _, _)| *deg == d).count()
            };
            for (jp, &marker) in markers.iter().enumerate() {
                let a = res.coefficients[jp];
                if a == 0 {
                    continue;
                }
                // markers live on free base summands, so the cohomology
                // position coincides with the homology position
                let e_pos = marker;
                add_entry(&count, e_pos, unit_pos, pd_pos, a, &mut new_products);
                if cs_pos != unit_pos {
                    add_entry(&count, e_pos, cs_pos, top_pos, a, &mut new_products);
                }
            }
        }
    }

    let (cohomology, _) = state.cohomology.extended(&added_co, new_products)?;
    let mut co_provenance = state.co_provenance.clone();
    for (slot, (degree, _, _)) in added_co.iter().enumerate() {
        let prov = if slot == top_slot {
            Provenance::Bubbled {
                step,
                ingredient: 0,
                source: "top".into(),
            }
        } else {
            let (j, src) = co_slot_owner(&co_positions, slot);
            Provenance::Bubbled {
                step,
                ingredient: j,
                source: src,
            }
        };
        let _ = degree;
        co_provenance[positions[slot].0].push(prov);
    }

    let out = ReebState {
        n,
        ring,
        homology,
        cohomology,
        co_provenance,
        ring_certified: state.ring_certified && ring_ok,
        prestage_polyhedron_dim: state.prestage_polyhedron_dim,
        log: {
            let mut log = state.log.clone();
            log.push(LogEntry::Bubble {
                step,
                ingredients: data
                    .ingredients
                    .iter()
                    .map(|i| i.manifold.to_string())
                    .collect(),
                dims: data
                    .ingredients
                    .iter()
                    .map(|i| i.manifold.dimension())
                    .collect(),
                spheres_or_points_only: data.ingredients.iter().all(|i| {
                    matches!(
                        i.manifold.normalized(),
                        ManifoldExpr::Sphere(_) | ManifoldExpr::Point
                    )
                }),
                disjoint: data.disjoint,
                ring_extended: ring_ok,
            });
            log
        },
    };
    out.validate()?;
    if ring == CoefficientRing::Integers && data.ingredients.len() == 1 {
        // One bubble changes the Euler characteristic by
        // (-1)^(n - dim S) * chi(S).
        let s = &data.ingredients[0].manifold;
        let chi_s = s.homology(ring)?.euler_characteristic();
        let sign = if (n - s.dimension()).is_multiple_of(2) {
            1
        } else {
            -1
        };
        let before = state.homology_module().euler_characteristic();
        let after = out.homology_module().euler_characteristic();
        assert_eq!(after - before, sign * chi_s, "bubble Euler bookkeeping");
    }
    Ok(out)
}

fn co_slot_owner(co_positions: &[BTreeMap<GenId, usize>], slot: usize) -> (usize, String) {
    for (j, map) in co_positions.iter().enumerate() {
        for (gen, &s) in map {
            if s == slot {
                return (j, format!("c{}.{}", gen.0, gen.1));
            }
        }
    }
    (0, "top".into())
}

fn single_degree(ring: CoefficientRing, m: &GradedModule, degree: usize) -> GradedModule {
    let mut raw = vec![Vec::new(); degree + 1];
    raw[degree] = m.factors(degree).to_vec();
    GradedModule::new(ring, degree, raw).expect("valid factors")
}

/// The unique free generator pairing with `cs` into the top class of a
/// closed-manifold catalog ring.
fn pairing_partner(alg: &GradedAlgebra, cs: GenId, dim: usize) -> Result<GenId, EngineError> {
    let want = dim - cs.0;
    for i in 0..alg.summands(want).len() {
        if alg.summands(want)[i] != 0 {
            continue;
        }
        let p = alg.gen_product(cs, (want, i));
        if p.coords.len() == 1 && p.coords[0].abs() == 1 {
            return Ok((want, i));
        }
    }
    Err(EngineError::precondition(
        "chosen class has no unimodular pairing partner",
    ))
}

/// Connected sum of two states over the same target dimension and ring:
/// positive degrees direct-summed with componentwise products, markers
/// kept from the special-generic-pipeline side (the right one).
pub fn connected_sum_states(f: &ReebState, f1: &ReebState) -> Result<ReebState, EngineError> {
    if f.n != f1.n {
        return Err(EngineError::DimensionMismatch(f.n, f1.n));
    }
    if f.ring != f1.ring {
        return Err(EngineError::RingMismatch(
            f.ring.to_string(),
            f1.ring.to_string(),
        ));
    }
    let n = f.n;
    let ring = f.ring;
    let step = f1.next_step_index();

    let mut homology: Vec<Vec<HSummand>> = vec![Vec::new(); n + 1];
    homology[0].push(HSummand {
        factor: 0,
        provenance: Provenance::Base { summand: 0 },
        q_marked: false,
    });
    let mut summands = vec![Vec::new(); n + 1];
    let mut labels = vec![Vec::new(); n + 1];
    let mut co_provenance: Vec<Vec<Provenance>> = vec![Vec::new(); n + 1];
    summands[0].push(0);
    labels[0].push("1".into());
    co_provenance[0].push(Provenance::Base { summand: 0 });

    let mut left_map: BTreeMap<GenId, GenId> = BTreeMap::new();
    let mut right_map: BTreeMap<GenId, GenId> = BTreeMap::new();
    left_map.insert((0, 0), (0, 0));
    right_map.insert((0, 0), (0, 0));
    for d in 1..=n {
        for (side, src, map) in [
            (Side::Left, f, &mut left_map),
            (Side::Right, f1, &mut right_map),
        ] {
            for s in &src.homology[d] {
                homology[d].push(HSummand {
                    factor: s.factor,
                    provenance: Provenance::ConnSum {
                        side,
                        inner: Box::new(s.provenance.clone()),
                    },
                    q_marked: s.q_marked && side == Side::Right,
                });
            }
            for i in 0..src.cohomology.summands(d).len() {
                map.insert((d, i), (d, summands[d].len()));
                summands[d].push(src.cohomology.summands(d)[i]);
                let tag = match side {
                    Side::Left => "l",
                    Side::Right => "r",
                };
                labels[d].push(format!("{tag}.{}", src.cohomology.label((d, i))));
                co_provenance[d].push(Provenance::ConnSum {
                    side,
                    inner: Box::new(src.co_provenance[d][i].clone()),
                });
            }
        }
    }
    let mut products: BTreeMap<(GenId, GenId), ModuleElement> = BTreeMap::new();
    for (src, map) in [(f, &left_map), (f1, &right_map)] {
        for g1 in src.cohomology.positive_gens() {
            for g2 in src.cohomology.positive_gens() {
                if g2 < g1 {
                    continue;
                }
                let v = src.cohomology.gen_product(g1, g2);
                if v.coords.is_empty() || v.is_zero() {
                    continue;
                }
                let d = v.degree;
                let mut coords = vec![0i64; summands[d].len()];
                for (i, &c) in v.coords.iter().enumerate() {
                    if c != 0 {
                        coords[map[&(d, i)].1] = c;
                    }
                }
                let (key, value) =
                    canonical_entry(map[&g1], map[&g2], ModuleElement::new(d, coords));
                products.insert(key, value);
            }
        }
    }
    let cohomology = GradedAlgebra::from_parts(ring, n, summands, labels, products)?;

    let prestage = f1
        .log
        .iter()
        .filter_map(|e| match e {
            LogEntry::Bubble { dims, .. } => dims.iter().copied().max(),
            LogEntry::Thm2 { k, kp, .. } => Some(k + kp),
            LogEntry::Thm41 { kp, .. } => Some(2 * kp - 1),
            LogEntry::Thm42 { kp, .. } => Some(2 * kp - 1),
            _ => None,
        })
        .chain(f1.prestage_polyhedron_dim)
        .max()
        .unwrap_or(0);

    let mut log = f1.log.clone();
    log.push(LogEntry::ConnSum { step });
    let out = ReebState {
        n,
        ring,
        homology,
        cohomology,
        co_provenance,
        ring_certified: f.ring_certified && f1.ring_certified,
        prestage_polyhedron_dim: Some(prestage),
        log,
    };
    out.validate()?;
    Ok(out)
}

/// Parameterized sphere-product bubble: adds a free class in each of the
/// degrees n-k-k', n-k', n-k, n with the two stated products against the
/// chosen degree-k' marked dual.
pub fn thm2_bubble(
    state: &ReebState,
    k: usize,
    kp: usize,
    r0: i64,
) -> Result<ReebState, EngineError> {
    if k == 0 {
        return Err(EngineError::precondition(
            "the sphere-product bubble needs k >= 1",
        ));
    }
    check_parameterized(state, k, kp)?;
    let n = state.n;
    let step = state.next_step_index();
    let c0 = eligible_c0(state, kp)?;
    let added = vec![
        (n - k - kp, 0, format!("t2s{step}.unit")),
        (n - kp, 0, format!("t2s{step}.cs")),
        (n - k, 0, format!("t2s{step}.pd")),
        (n, 0, format!("t2s{step}.top")),
    ];
    let mut products = BTreeMap::new();
    push_scaled(
        state,
        &added,
        &mut products,
        c0,
        0, // unit slot
        2, // pd slot
        r0,
    );
    push_scaled(state, &added, &mut products, c0, 1, 3, r0);
    apply_parameterized(
        state,
        added,
        products,
        &[(n - k - kp, 0), (n - kp, 0), (n - k, 0), (n, 0)],
        LogEntry::Thm2 { step, k, kp, r0 },
    )
}

/// Twisted-bundle bubble over Z: the Euler number is twice r0, or r0
/// itself in the Hopf-type dimensions, and it shows up as torsion of
/// that order.
pub fn thm41_twisted_bubble(
    state: &ReebState,
    kp: usize,
    r0: i64,
    refined: bool,
    rprime: i64,
) -> Result<ReebState, EngineError> {
    if state.ring != CoefficientRing::Integers {
        return Err(EngineError::RingMismatch(
            state.ring.to_string(),
            "Z".into(),
        ));
    }
    if !kp.is_multiple_of(2) || kp == 0 {
        return Err(EngineError::precondition("k' must be even and positive"));
    }
    if refined && !matches!(kp, 2 | 4 | 8) {
        return Err(EngineError::precondition(
            "the refined torsion order needs k' in {2, 4, 8}",
        ));
    }
    let k = kp - 1;
    check_parameterized(state, k, kp)?;
    let n = state.n;
    let step = state.next_step_index();
    let c0 = eligible_c0(state, kp)?;
    let euler = if refined { r0.abs() } else { 2 * r0.abs() };

    let mut added = vec![(n - k - kp, 0i64, format!("t41s{step}.unit"))];
    let mut h_added: Vec<(usize, i64)> = vec![(n - k - kp, 0)];
    if r0 != 0 {
        // torsion of order |euler| in cohomology degree n-k, homology
        // degree n-k'
        if euler > 1 {
            added.push((n - k, euler, format!("t41s{step}.tors")));
            h_added.push((n - kp, euler));
        }
    } else {
        added.push((n - kp, 0, format!("t41s{step}.cs")));
        added.push((n - k, 0, format!("t41s{step}.pd")));
        h_added.push((n - kp, 0));
        h_added.push((n - k, 0));
    }
    let top_label = format!("t41s{step}.top");
    added.push((n, 0, top_label));
    h_added.push((n, 0));

    let mut products = BTreeMap::new();
    if r0 == 0 && rprime != 0 {
        let cs_slot = 1;
        let pd_slot = 2;
        push_scaled(state, &added, &mut products, c0, 0, pd_slot, rprime);
        push_scaled(
            state,
            &added,
            &mut products,
            c0,
            cs_slot,
            added.len() - 1,
            rprime,
        );
    }
    apply_parameterized(
        state,
        added,
        products,
        &h_added,
        LogEntry::Thm41 {
            step,
            kp,
            r0,
            refined,
        },
    )
}

/// The mod-2p counterpart: all four degrees gain the free rank-1 module
/// over Z/2p (or Z/p in the refined dimensions), with the two products
/// scaled by r_p.
pub fn thm42_bubble(
    state: &ReebState,
    kp: usize,
    p: i64,
    rp: i64,
) -> Result<ReebState, EngineError> {
    if p < 1 {
        return Err(EngineError::precondition("p must be at least 1"));
    }
    if !kp.is_multiple_of(2) || kp == 0 {
        return Err(EngineError::precondition("k' must be even and positive"));
    }
    let modulus = state.ring.modulus().ok_or_else(|| {
        EngineError::RingMismatch(state.ring.to_string(), format!("Zmod:{}", 2 * p))
    })?;
    let standard = modulus == 2 * p;
    let refined = modulus == p && matches!(kp, 2 | 4 | 8) && p > 1;
    if !standard && !refined {
        return Err(EngineError::RingMismatch(
            state.ring.to_string(),
            format!("Zmod:{} (or Zmod:{p} refined)", 2 * p),
        ));
    }
    let k = kp - 1;
    check_parameterized(state, k, kp)?;
    let n = state.n;
    let step = state.next_step_index();
    let c0 = eligible_c0(state, kp)?;
    let added = vec![
        (n - k - kp, 0, format!("t42s{step}.unit")),
        (n - kp, 0, format!("t42s{step}.cs")),
        (n - k, 0, format!("t42s{step}.pd")),
        (n, 0, format!("t42s{step}.top")),
    ];
    let mut products = BTreeMap::new();
    push_scaled(state, &added, &mut products, c0, 0, 2, rp);
    push_scaled(state, &added, &mut products, c0, 1, 3, rp);
    apply_parameterized(
        state,
        added,
        products,
        &[(n - k - kp, 0), (n - kp, 0), (n - k, 0), (n, 0)],
        LogEntry::Thm42 { step, kp, p, rp },
    )
}

fn check_parameterized(state: &ReebState, k: usize, kp: usize) -> Result<(), EngineError> {
    if !state.ring_certified {
        return Err(EngineError::precondition(
            "state ring structure is uncertified",
        ));
    }
    let n = state.n;
    if kp == 0 || 2 * kp > n {
        return Err(EngineError::precondition("2k' <= n violated"));
    }
    if 2 * (k + kp) > n {
        return Err(EngineError::precondition("k + k' <= n/2 violated"));
    }
    if let Some(d) = state.prestage_polyhedron_dim {
        if d + 1 >= n {
            return Err(EngineError::precondition(
                "pre-stage generating polyhedra must have dimension below n-1",
            ));
        }
    }
    Ok(())
}

/// First marked generator of the requested cohomology degree.
fn eligible_c0(state: &ReebState, kp: usize) -> Result<GenId, EngineError> {
    state
        .markers_in_degree(kp)
        .first()
        .copied()
        .ok_or(EngineError::NoEligibleC0(kp))
}

/// Records c0 * added[from] = r * added[to] into the pending table.
fn push_scaled(
    state: &ReebState,
    added: &[(usize, i64, String)],
    products: &mut BTreeMap<(GenId, GenId), ModuleElement>,
    c0: GenId,
    from: usize,
    to: usize,
    r: i64,
) {
    if r == 0 {
        return;
    }
    let base = &state.cohomology;
    let from_pos = appended_position(base, added, from);
    let to_pos = appended_position(base, added, to);
    let d = c0.0 + from_pos.0;
    debug_assert_eq!(d, to_pos.0);
    let width = base.summands(d).len() + added.iter().filter(|(deg, _, _)| *deg == d).count();
    let mut value = ModuleElement::new(d, vec![0; width]);
    value.coords[to_pos.1] = r;
    let (key, v) = canonical_entry(c0, from_pos, value);
    products.insert(key, v);
}

fn appended_position(base: &GradedAlgebra, added: &[(usize, i64, String)], slot: usize) -> GenId {
    let degree = added[slot].0;
    let before = added[..slot]
        .iter()
        .filter(|(d, _, _)| *d == degree)
        .count();
    (degree, base.summands(degree).len() + before)
}

fn apply_parameterized(
    state: &ReebState,
    added: Vec<(usize, i64, String)>,
    products: BTreeMap<(GenId, GenId), ModuleElement>,
    h_added: &[(usize, i64)],
    entry: LogEntry,
) -> Result<ReebState, EngineError> {
    let step = state.next_step_index();
    let (cohomology, positions) = state.cohomology.extended(&added, products)?;
    let mut homology = state.homology.clone();
    for (i, &(degree, factor)) in h_added.iter().enumerate() {
        homology[degree].push(HSummand {
            factor: state.ring.normalize_factor(factor).max(0),
            provenance: Provenance::Bubbled {
                step,
                ingredient: 0,
                source: format!("g{i}"),
            },
            q_marked: false,
        });
    }
    // drop summands normalized away (factor 1 means the zero module)
    for list in &mut homology {
        list.retain(|s| s.factor != 1);
    }
    let mut co_provenance = state.co_provenance.clone();
    for (slot, pos) in positions.iter().enumerate() {
        co_provenance[pos.0].push(Provenance::Bubbled {
            step,
            ingredient: 0,
            source: added[slot].2.clone(),
        });
    }
    let mut log = state.log.clone();
    log.push(entry);
    let out = ReebState {
        n: state.n,
        ring: state.ring,
        homology,
        cohomology,
        co_provenance,
        ring_certified: state.ring_certified,
        prestage_polyhedron_dim: state.prestage_polyhedron_dim,
        log,
    };
    out.validate()?;
    Ok(out)
}

/// Replaces the bubbled part of the top-degree module by a smaller free
/// submodule, composing the products with the projection that kills the
/// removed generators. The log must certify disjoint placements.
pub fn thm5_restrict_top(state: &ReebState, target_rank: usize) -> Result<ReebState, EngineError> {
    for e in &state.log {
        if let LogEntry::Bubble { disjoint, .. } = e {
            if !disjoint {
                return Err(EngineError::precondition(
                    "log does not certify disjoint generating polyhedra",
                ));
            }
        }
    }
    let n = state.n;
    let bubbled: Vec<usize> = state.homology[n]
        .iter()
        .enumerate()
        .filter(|(_, s)| s.provenance.is_bubbled())
        .map(|(i, _)| i)
        .collect();
    if target_rank == 0 || target_rank > bubbled.len() {
        return Err(EngineError::precondition(format!(
            "target rank must lie in 1..={}",
            bubbled.len()
        )));
    }
    let removed_h: BTreeSet<usize> = bubbled[target_rank..].iter().copied().collect();
    if removed_h.is_empty() {
        let mut out = state.clone();
        out.log.push(LogEntry::RestrictTop {
            step: state.next_step_index(),
            rank: target_rank,
        });
        return Ok(out);
    }
    // The cohomology presentation of degree n lists the same free
    // summands in the same order as homology.
    let removed_co: BTreeSet<GenId> = state.co_provenance[n]
        .iter()
        .enumerate()
        .filter(|(i, _)| removed_h.contains(i))
        .map(|(i, _)| (n, i))
        .collect();
    let cohomology = state.cohomology.project_out(&removed_co)?;
    let mut homology = state.homology.clone();
    homology[n] = state.homology[n]
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed_h.contains(i))
        .map(|(_, s)| s.clone())
        .collect();
    let mut co_provenance = state.co_provenance.clone();
    co_provenance[n] = state.co_provenance[n]
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed_h.contains(i))
        .map(|(_, p)| p.clone())
        .collect();
    let mut log = state.log.clone();
    log.push(LogEntry::RestrictTop {
        step: state.next_step_index(),
        rank: target_rank,
    });
    let out = ReebState {
        n,
        ring: state.ring,
        homology,
        cohomology,
        co_provenance,
        ring_certified: state.ring_certified,
        prestage_polyhedron_dim: state.prestage_polyhedron_dim,
        log,
    };
    out.validate()?;
    Ok(out)
}

/// Degree-window algebra of a source manifold of dimension m mapped by
/// the pipeline's fold map: products past m-n-1 (m-n for special
/// generic pipelines) vanish and higher degrees are discarded.
pub fn manifold_window(
    state: &ReebState,
    m: usize,
    special_generic: bool,
) -> Result<GradedAlgebra, EngineError> {
    if m <= state.n {
        return Err(EngineError::precondition("m must exceed n"));
    }
    let window = m - state.n - 1 + usize::from(special_generic);
    state.cohomology.truncate_window(window.min(state.n))
}

/// For m = 2n the middle homology of the source manifold has twice the
/// rank of the state's top module, provided H_{n-1} is free.
pub fn rank_doubling_prediction(state: &ReebState, m: usize) -> Result<usize, EngineError> {
    if m != 2 * state.n {
        return Err(EngineError::precondition("rank doubling needs m = 2n"));
    }
    let h = state.homology_module();
    if !h.torsion_factors(state.n - 1).is_empty() {
        return Err(EngineError::precondition(
            "H_{n-1} must be free for the rank-doubling prediction",
        ));
    }
    Ok(2 * h.rank(state.n))
}
