//! Property tests for the algebraic core: Smith normal form
//! postconditions, normal-form arithmetic, unit-free-generator laws and
//! the closure check's monotonicity.

use proptest::prelude::*;
use rbs_core::algebra::{kunneth_product, ufg_closure_check, ClosureOutcome};
use rbs_core::manifold::ManifoldExpr;
use rbs_core::module::{is_ufg, GradedModule, ModuleElement};
use rbs_core::snf::{smith_normal_form, IntMat};
use rbs_core::CoefficientRing;

fn z() -> CoefficientRing {
    CoefficientRing::Integers
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r)
    })
}

fn factor_lists() -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(
        proptest::collection::vec(prop_oneof![Just(0i64), 2i64..=6], 0..=3),
        1..=4,
    )
}

fn module(raw: Vec<Vec<i64>>) -> GradedModule {
    let top = raw.len() - 1;
    GradedModule::new(z(), top, raw).unwrap()
}

proptest! {
    // The Smith routine checks its own transforms; assert the chain and
    // the diagonal shape here over random inputs.
    #[test]
    fn snf_diagonal_chain(rows in small_matrix()) {
        let m = IntMat::from_rows(rows);
        let s = smith_normal_form(&m);
        for w in s.diag.windows(2) {
            prop_assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
        }
        for d in &s.diag {
            prop_assert!(*d >= 0);
        }
    }

    #[test]
    fn direct_sum_commutes_and_associates(a in factor_lists(), b in factor_lists(), c in factor_lists()) {
        let top = a.len().max(b.len()).max(c.len()) - 1;
        let pad = |mut raw: Vec<Vec<i64>>| {
            raw.resize(top + 1, Vec::new());
            module(raw)
        };
        let (a, b, c) = (pad(a), pad(b), pad(c));
        let ab = a.direct_sum(&b).unwrap();
        let ba = b.direct_sum(&a).unwrap();
        prop_assert!(ab.is_isomorphic(&ba).unwrap());
        let ab_c = ab.direct_sum(&c).unwrap();
        let a_bc = a.direct_sum(&b.direct_sum(&c).unwrap()).unwrap();
        prop_assert!(ab_c.is_isomorphic(&a_bc).unwrap());
    }

    #[test]
    fn isomorphism_is_reflexive_and_stable(a in factor_lists()) {
        let m = module(a);
        prop_assert!(m.is_isomorphic(&m).unwrap());
        prop_assert_eq!(m.change_coefficients(z()).unwrap(), m.clone());
        let dual = m.uct_dual();
        // free ranks survive dualization degreewise
        for d in 0..=m.top_degree() {
            prop_assert_eq!(m.rank(d), dual.rank(d));
        }
    }

    // Scaling a unit free generator by a non-unit destroys the property;
    // torsion elements are never unit free generators.
    #[test]
    fn ufg_scaling_law(
        factors in proptest::collection::vec(prop_oneof![Just(0i64), 2i64..=5], 1..=4),
        coords in proptest::collection::vec(-4i64..=4, 4),
        r in 2i64..=5,
    ) {
        let m = GradedModule::new(z(), 0, vec![factors]).unwrap();
        let k = m.factors(0).len();
        let x = ModuleElement::new(0, coords[..k].to_vec());
        if is_ufg(&x, &m).unwrap() {
            let scaled = ModuleElement::new(0, x.coords.iter().map(|c| c * r).collect());
            prop_assert!(!is_ufg(&scaled, &m).unwrap());
        }
        // purely torsion elements
        let torsion_only: Vec<i64> = m
            .factors(0)
            .iter()
            .zip(&x.coords)
            .map(|(&q, &c)| if q == 0 { 0 } else { c })
            .collect();
        let t = ModuleElement::new(0, torsion_only);
        if !t.is_zero() {
            prop_assert!(!is_ufg(&t, &m).unwrap());
        }
    }

    #[test]
    fn truncation_is_idempotent(d in 1usize..=3, cut in 0usize..=3) {
        let expr = ManifoldExpr::product(ManifoldExpr::Sphere(d), ManifoldExpr::Sphere(1));
        let ring = expr.cohomology_ring(z()).unwrap();
        let cut = cut.min(ring.top_degree());
        let once = ring.truncate_window(cut).unwrap();
        prop_assert_eq!(once.truncate_window(cut).unwrap(), once.clone());
    }

    // Kunneth with the point ring is the identity and the product module
    // is symmetric.
    #[test]
    fn kunneth_unit_and_symmetry(a in 1usize..=3, b in 1usize..=3) {
        let ra = ManifoldExpr::Sphere(a).cohomology_ring(z()).unwrap();
        let rb = ManifoldExpr::Sphere(b).cohomology_ring(z()).unwrap();
        let (ab, _) = kunneth_product(&ra, &rb).unwrap();
        let (ba, _) = kunneth_product(&rb, &ra).unwrap();
        prop_assert!(ab.module().is_isomorphic(&ba.module()).unwrap());
        let point = rbs_core::algebra::GradedAlgebra::point_ring(z());
        let (unit, _) = kunneth_product(&ra, &point).unwrap();
        prop_assert!(unit.module().is_isomorphic(&ra.module()).unwrap());
    }

    // Pass at a bound implies Pass at every smaller bound.
    #[test]
    fn closure_monotone(bound in 1i64..=3) {
        let expr = ManifoldExpr::product(ManifoldExpr::Sphere(2), ManifoldExpr::Sphere(1));
        let ring = expr.cohomology_ring(z()).unwrap();
        let n = 7;
        if matches!(ufg_closure_check(&ring, n, 3), ClosureOutcome::Pass) {
            prop_assert!(matches!(
                ufg_closure_check(&ring, n, bound),
                ClosureOutcome::Pass
            ));
        }
    }
}
