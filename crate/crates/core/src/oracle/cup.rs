//! Cup products on ordered simplicial cochains via the front/back-face
//! formula, assembled into a graded algebra in normal form.

use crate::algebra::{GenId, GradedAlgebra};
use crate::error::EngineError;
use crate::module::ModuleElement;
use crate::oracle::complex::SimplicialComplex;
use crate::ring::CoefficientRing;
use std::collections::BTreeMap;

/// Cohomology ring of an ordered complex: generators from the Smith
/// normal form of the cochain complex, products evaluated on
/// representative cocycles with the front/back-face rule.
pub fn cup_product_ring(
    complex: &SimplicialComplex,
    ring: CoefficientRing,
) -> Result<GradedAlgebra, EngineError> {
    let by_dim = complex.simplices_by_dim();
    let index: Vec<BTreeMap<&Vec<usize>, usize>> = by_dim
        .iter()
        .map(|list| list.iter().enumerate().map(|(i, s)| (s, i)).collect())
        .collect();
    let chain = complex.chain_complex();
    let top = chain.top();
    let cohomology = chain.cohomology(ring)?;

    let mut summands = vec![Vec::new(); top + 1];
    let mut labels = vec![Vec::new(); top + 1];
    for d in 0..=top {
        for (i, &f) in cohomology[d].factors.iter().enumerate() {
            summands[d].push(f);
            labels[d].push(if d == 0 {
                "1".into()
            } else {
                format!("c{d}.{i}")
            });
        }
    }
    if summands[0] != vec![0] {
        return Err(EngineError::Precondition(
            "cup products need a connected complex".into(),
        ));
    }

    let mut products: BTreeMap<(GenId, GenId), ModuleElement> = BTreeMap::new();
    for d1 in 1..=top {
        for d2 in d1..=top {
            let d = d1 + d2;
            if d > top {
                continue;
            }
            for i1 in 0..summands[d1].len() {
                for i2 in 0..summands[d2].len() {
                    if d1 == d2 && i2 < i1 {
                        continue;
                    }
                    let x = cohomology[d1].gens.column(i1);
                    let y = cohomology[d2].gens.column(i2);
                    let cup = cup_cochain(&by_dim, &index, d1, d2, &x, &y);
                    let class = cohomology[d].class_of(&cup)?;
                    let value = ModuleElement::new(d, class);
                    if !value.is_zero() {
                        products.insert(((d1, i1), (d2, i2)), value);
                    }
                }
            }
        }
    }
    GradedAlgebra::from_parts(ring, top, summands, labels, products)
}

/// (x cup y)(v_0..v_{p+q}) = x(v_0..v_p) * y(v_p..v_{p+q}).
fn cup_cochain(
    by_dim: &[Vec<Vec<usize>>],
    index: &[BTreeMap<&Vec<usize>, usize>],
    p: usize,
    q: usize,
    x: &[i64],
    y: &[i64],
) -> Vec<i64> {
    let d = p + q;
    let mut out = vec![0i64; by_dim[d].len()];
    for (j, s) in by_dim[d].iter().enumerate() {
        let front: Vec<usize> = s[..=p].to_vec();
        let back: Vec<usize> = s[p..].to_vec();
        let xi = x[index[p][&front]];
        let yi = y[index[q][&back]];
        out[j] = xi * yi;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pairing_profile;
    use crate::oracle::complex::{product_complex, sphere_complex};

    fn z() -> CoefficientRing {
        CoefficientRing::Integers
    }

    #[test]
    fn torus_ring_from_cochains() {
        let s1 = sphere_complex(1);
        let t = product_complex(&s1, &s1);
        let alg = cup_product_ring(&t, z()).unwrap();
        let m = alg.module();
        assert_eq!(m.rank(1), 2);
        assert_eq!(m.rank(2), 1);
        // x*y = +-top, x^2 = y^2 = 0
        let xy = alg.gen_product((1, 0), (1, 1));
        assert_eq!(xy.coords[0].abs(), 1);
        assert!(alg.gen_product((1, 0), (1, 0)).is_zero());
        assert!(alg.gen_product((1, 1), (1, 1)).is_zero());
        assert_eq!(pairing_profile(&alg, 1, 1), vec![1, 1]);
    }

    #[test]
    fn sphere_rings_are_trivial() {
        for d in 1..=3 {
            let alg = cup_product_ring(&sphere_complex(d), z()).unwrap();
            for g in alg.positive_gens() {
                for h in alg.positive_gens() {
                    assert!(alg.gen_product(g, h).is_zero());
                }
            }
        }
    }

    #[test]
    fn torus_ring_mod_two() {
        let s1 = sphere_complex(1);
        let t = product_complex(&s1, &s1);
        let z2 = CoefficientRing::integers_mod(2).unwrap();
        let alg = cup_product_ring(&t, z2).unwrap();
        let m = alg.module();
        assert_eq!(m.rank(1), 2);
        let xy = alg.gen_product((1, 0), (1, 1));
        assert_eq!(xy.coords[0], 1);
        assert!(alg.gen_product((1, 0), (1, 0)).is_zero());
    }

    #[test]
    fn relabeling_preserves_the_ring_normal_form() {
        let s1 = sphere_complex(1);
        let t = product_complex(&s1, &s1);
        let n = t.vertex_count();
        let perm: Vec<usize> = (0..n).map(|v| (v * 4 + 2) % n).collect();
        let r = t.relabeled(&perm).unwrap();
        let a = cup_product_ring(&t, z()).unwrap();
        let b = cup_product_ring(&r, z()).unwrap();
        assert!(a.module().is_isomorphic(&b.module()).unwrap());
        assert_eq!(pairing_profile(&a, 1, 1), pairing_profile(&b, 1, 1));
    }

    #[test]
    fn graded_commutativity_of_classes() {
        // The cochain-level product is not commutative, but the classes
        // must satisfy the sign rule; from_parts validates associativity
        // and the derived transpose, so a successful build plus a direct
        // check of one reversed pair suffices.
        let s1 = sphere_complex(1);
        let s2 = sphere_complex(2);
        let p = product_complex(&s2, &s1);
        let alg = cup_product_ring(&p, z()).unwrap();
        let uv = alg.gen_product((2, 0), (1, 0));
        let vu = alg.gen_product((1, 0), (2, 0));
        assert_eq!(uv, vu); // even*odd: no sign
        assert_eq!(uv.coords[0].abs(), 1);
    }
}
