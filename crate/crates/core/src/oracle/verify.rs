//! Oracle check for the bubble homology formula on disc bases: the new
//! Reeb space is the bubbled space (a connected sum of trivial sphere
//! bundles over the ingredients) with the section wedge collapsed, which
//! a cone attachment realizes simplicially.

use crate::bubbling::{bubble_homology, GeneratingData};
use crate::error::EngineError;
use crate::manifold::ManifoldExpr;
use crate::module::GradedModule;
use crate::oracle::complex::{
    bfs_path, cone_complex, connected_sum_complex, glue_complex, product_complex, sphere_complex,
    SimplicialComplex,
};
use crate::ring::CoefficientRing;
use crate::state::ReebState;
use std::collections::BTreeSet;

pub const DEFAULT_BUDGET: usize = 200_000;

#[derive(Clone, Debug)]
pub struct Prop3Check {
    pub matches: bool,
    pub engine: GradedModule,
    pub oracle: GradedModule,
    pub faces_used: usize,
}

/// Simplicial model of one catalog expression, for spheres and their
/// products; other shapes have no product-complex model here.
fn simplicial_model(m: &ManifoldExpr) -> Result<SimplicialComplex, EngineError> {
    match m.normalized() {
        ManifoldExpr::Sphere(d) => Ok(sphere_complex(d)),
        ManifoldExpr::Product(a, b) => {
            let ca = simplicial_model(&a)?;
            let cb = simplicial_model(&b)?;
            Ok(product_complex(&ca, &cb))
        }
        other => Err(EngineError::BadManifold(format!(
            "no simplicial model for {other}"
        ))),
    }
}

/// Builds the bubbled space of one ingredient as a trivial bundle and
/// returns the complex together with its section's vertex set.
fn bundle_with_section(
    ingredient: &ManifoldExpr,
    n: usize,
) -> Result<(SimplicialComplex, BTreeSet<usize>), EngineError> {
    let dim = ingredient.dimension();
    if dim == 0 {
        // the bubbled space of a point is a sphere; the section is a point
        let c = sphere_complex(n);
        Ok((c, BTreeSet::from([0usize])))
    } else {
        let base = simplicial_model(ingredient)?;
        let fiber = sphere_complex(n - dim);
        let total = product_complex(&base, &fiber);
        // section = base x {vertex 0 of the fiber}
        let nb = fiber.vertex_count();
        let section: BTreeSet<usize> = (0..base.vertex_count()).map(|a| a * nb).collect();
        Ok((total, section))
    }
}

/// Compares the closed-form bubble homology on a disc base against the
/// simplicial model, in every degree up to n.
pub fn verify_prop3(
    n: usize,
    ingredients: &[ManifoldExpr],
    ring: CoefficientRing,
    budget: usize,
) -> Result<Prop3Check, EngineError> {
    if n == 0 || n > 4 {
        return Err(EngineError::precondition(
            "the simplicial oracle is restricted to 1 <= n <= 4",
        ));
    }
    if ingredients.is_empty() {
        return Err(EngineError::precondition("empty generating bouquet"));
    }
    for ing in ingredients {
        if ing.dimension() >= n {
            return Err(EngineError::precondition(format!(
                "ingredient {ing} has dimension >= n"
            )));
        }
    }

    // Closed form.
    let base = ReebState::canonical_projection_base(n, ring)?;
    let data = GeneratingData::bouquet(ingredients.to_vec());
    let engine = bubble_homology(&base, &data)?.homology_module();

    // Oracle model: connected sum of the bundle totals, then a cone over
    // the sections joined by first-contact paths.
    let (mut complex, first_section) = bundle_with_section(&ingredients[0], n)?;
    let mut sections: Vec<BTreeSet<usize>> = vec![first_section];
    for ing in &ingredients[1..] {
        let (next, next_section) = bundle_with_section(ing, n)?;
        let avoid_left: BTreeSet<usize> = sections.iter().flatten().copied().collect();
        let glued = connected_sum_complex(&complex, &next, &avoid_left, &next_section)?;
        sections = sections
            .iter()
            .map(|s| s.iter().map(|&v| glued.left_map[v]).collect())
            .collect();
        sections.push(next_section.iter().map(|&v| glued.right_map[v]).collect());
        complex = glued.complex;
    }

    // Collapse locus: all sections plus a tree of connecting paths.
    let mut locus: BTreeSet<usize> = sections[0].clone();
    for sec in &sections[1..] {
        let path = bfs_path(&complex, sec, &locus)
            .ok_or_else(|| EngineError::BadGlue("bubbled space is not connected".into()))?;
        locus.extend(path);
        locus.extend(sec.iter().copied());
    }
    let locus_simplices = complex.induced(&locus);
    let locus_vertices: Vec<usize> = locus.iter().copied().collect();
    let to_local = |v: usize| locus_vertices.binary_search(&v).expect("locus vertex");
    let locus_complex = SimplicialComplex::new(
        locus_vertices.len(),
        locus_simplices
            .iter()
            .map(|s| s.iter().map(|&v| to_local(v)).collect())
            .collect(),
    )?;
    // The locus must have the homology of the section wedge, otherwise
    // stray simplices would change the collapse type.
    let expected_locus = expected_wedge_homology(ingredients, ring, &locus_complex)?;
    if !expected_locus {
        return Err(EngineError::BadGlue(
            "collapse locus is not a wedge of the sections".into(),
        ));
    }

    let cone = cone_complex(&locus_complex);
    let matching: Vec<(usize, usize)> = locus_vertices
        .iter()
        .enumerate()
        .map(|(local, &global)| (global, local))
        .collect();
    let glued = glue_complex(&complex, &cone, &matching)?;
    let used = glued.complex.face_count();
    if used > budget {
        return Err(EngineError::BudgetExceeded { used, budget });
    }
    let oracle = glued
        .complex
        .chain_complex()
        .homology_module(ring)?
        .padded_to(n);
    let engine = engine.padded_to(oracle.top_degree().max(n));
    let oracle = oracle.padded_to(engine.top_degree());
    let matches = engine.is_isomorphic(&oracle)?;
    Ok(Prop3Check {
        matches,
        engine,
        oracle,
        faces_used: used,
    })
}

#[allow(clippy::needless_range_loop)]
fn expected_wedge_homology(
    ingredients: &[ManifoldExpr],
    ring: CoefficientRing,
    locus: &SimplicialComplex,
) -> Result<bool, EngineError> {
    let actual = locus.chain_complex().homology_module(ring)?;
    let top = actual.top_degree();
    let mut raw = vec![Vec::new(); top + 1];
    raw[0].push(0);
    for ing in ingredients {
        let h = ing.homology(ring)?;
        for d in 1..=h.top_degree() {
            if d <= top {
                raw[d].extend_from_slice(h.factors(d));
            } else if !h.factors(d).is_empty() {
                return Ok(false);
            }
        }
    }
    let expected = GradedModule::new(ring, top, raw)?;
    expected.is_isomorphic(&actual)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> CoefficientRing {
        CoefficientRing::Integers
    }

    #[test]
    fn point_bubble_in_dimension_three() {
        let r = verify_prop3(3, &[ManifoldExpr::Point], z(), DEFAULT_BUDGET).unwrap();
        assert!(r.matches, "engine {} vs oracle {}", r.engine, r.oracle);
    }

    #[test]
    fn circle_bubble_in_dimension_three() {
        let r = verify_prop3(3, &[ManifoldExpr::Sphere(1)], z(), DEFAULT_BUDGET).unwrap();
        assert!(r.matches, "engine {} vs oracle {}", r.engine, r.oracle);
    }

    #[test]
    fn budget_is_enforced() {
        let r = verify_prop3(3, &[ManifoldExpr::Sphere(1)], z(), 10);
        assert!(matches!(r, Err(EngineError::BudgetExceeded { .. })));
    }
}
