//! Symbolic closed manifolds: spheres, products, connected sums and
//! twisted sphere bundles over spheres, with exact homology, cohomology
//! rings and the represented-class metadata bubbling preconditions need.

use crate::algebra::{connected_sum, kunneth_product, GenId, GradedAlgebra};
use crate::error::EngineError;
use crate::module::GradedModule;
use crate::ring::CoefficientRing;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ManifoldExpr {
    Point,
    Sphere(usize),
    Product(Box<ManifoldExpr>, Box<ManifoldExpr>),
    ConnSum(Box<ManifoldExpr>, Box<ManifoldExpr>),
    SphereBundle {
        base: usize,
        fiber: usize,
        euler: i64,
    },
}

impl ManifoldExpr {
    pub fn product(a: ManifoldExpr, b: ManifoldExpr) -> ManifoldExpr {
        ManifoldExpr::Product(Box::new(a), Box::new(b))
    }

    pub fn conn_sum(a: ManifoldExpr, b: ManifoldExpr) -> ManifoldExpr {
        ManifoldExpr::ConnSum(Box::new(a), Box::new(b))
    }

    pub fn dimension(&self) -> usize {
        match self {
            ManifoldExpr::Point => 0,
            ManifoldExpr::Sphere(d) => *d,
            ManifoldExpr::Product(a, b) => a.dimension() + b.dimension(),
            ManifoldExpr::ConnSum(a, _) => a.dimension(),
            ManifoldExpr::SphereBundle { base, fiber, .. } => base + fiber,
        }
    }

    pub fn is_cps(&self) -> bool {
        match self {
            ManifoldExpr::Point => false,
            ManifoldExpr::Sphere(d) => *d >= 1,
            ManifoldExpr::Product(a, b) => a.is_cps() && b.is_cps(),
            ManifoldExpr::ConnSum(a, b) => a.is_cps() && b.is_cps(),
            ManifoldExpr::SphereBundle { .. } => false,
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        match self {
            ManifoldExpr::Point => Ok(()),
            ManifoldExpr::Sphere(d) => {
                if *d == 0 {
                    Err(EngineError::BadManifold(
                        "sphere dimension must be >= 1".into(),
                    ))
                } else {
                    Ok(())
                }
            }
            ManifoldExpr::Product(a, b) => {
                a.validate()?;
                b.validate()
            }
            ManifoldExpr::ConnSum(a, b) => {
                a.validate()?;
                b.validate()?;
                if a.dimension() != b.dimension() || a.dimension() == 0 {
                    return Err(EngineError::BadManifold(
                        "connected sum operands must have equal dimension >= 1".into(),
                    ));
                }
                Ok(())
            }
            ManifoldExpr::SphereBundle { base, fiber, euler } => {
                if *base == 0 || *fiber == 0 {
                    return Err(EngineError::BadManifold(
                        "bundle base and fiber dimensions must be >= 1".into(),
                    ));
                }
                if *euler != 0 && *fiber != base - 1 {
                    return Err(EngineError::BadManifold(
                        "nonzero Euler number requires fiber dimension base - 1".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Structural normalization: 1-dimensional connected sums are
    /// circles, and an Euler-0 bundle is the product of spheres.
    pub fn normalized(&self) -> ManifoldExpr {
        match self {
            ManifoldExpr::Point | ManifoldExpr::Sphere(_) => self.clone(),
            ManifoldExpr::Product(a, b) => ManifoldExpr::product(a.normalized(), b.normalized()),
            ManifoldExpr::ConnSum(a, b) => {
                if a.dimension() == 1 {
                    ManifoldExpr::Sphere(1)
                } else {
                    ManifoldExpr::conn_sum(a.normalized(), b.normalized())
                }
            }
            ManifoldExpr::SphereBundle { base, fiber, euler } => {
                if *euler == 0 {
                    ManifoldExpr::product(ManifoldExpr::Sphere(*base), ManifoldExpr::Sphere(*fiber))
                } else {
                    self.clone()
                }
            }
        }
    }

    /// Embeddability into codimension one, recorded for the CPS family.
    pub fn embeds_in_codimension_one(&self) -> bool {
        self.is_cps()
    }

    /// Whether the catalog certifies an orientation reversing
    /// self-diffeomorphism; true for the CPS family.
    pub fn admits_orientation_reversal(&self) -> bool {
        self.is_cps()
    }

    pub fn homology(&self, ring: CoefficientRing) -> Result<GradedModule, EngineError> {
        self.validate()?;
        match self.normalized() {
            ManifoldExpr::Point => GradedModule::new(ring, 0, vec![vec![0]]),
            ManifoldExpr::Sphere(d) => {
                let mut raw = vec![Vec::new(); d + 1];
                raw[0].push(0);
                raw[d].push(0);
                GradedModule::new(ring, d, raw)
            }
            ManifoldExpr::Product(a, b) => {
                let ha = a.homology(ring)?;
                let hb = b.homology(ring)?;
                kunneth_module(&ha, &hb)
            }
            ManifoldExpr::ConnSum(a, b) => {
                let n = a.dimension();
                let ha = a.homology(ring)?;
                let hb = b.homology(ring)?;
                let mut raw = vec![Vec::new(); n + 1];
                raw[0].push(0);
                raw[n].push(0);
                for (d, slot) in raw.iter_mut().enumerate().take(n).skip(1) {
                    slot.extend_from_slice(ha.factors(d));
                    slot.extend_from_slice(hb.factors(d));
                }
                GradedModule::new(ring, n, raw)
            }
            ManifoldExpr::SphereBundle { base, euler, .. } => {
                // Cellular model with one boundary map, multiplication by
                // the Euler number: cells in degrees 0, k'-1, k', 2k'-1.
                let top = 2 * base - 1;
                let mut raw = vec![Vec::new(); top + 1];
                raw[0].push(0);
                raw[base - 1].push(euler.abs());
                raw[top].push(0);
                let over_z = GradedModule::new(CoefficientRing::Integers, top, raw)?;
                if ring == CoefficientRing::Integers {
                    Ok(over_z)
                } else {
                    over_z.change_coefficients(ring)
                }
            }
        }
    }

    pub fn cohomology_ring(&self, ring: CoefficientRing) -> Result<GradedAlgebra, EngineError> {
        Ok(self.build(ring)?.algebra)
    }

    /// Classes the catalog certifies as represented by a closed
    /// submanifold with trivial normal bundle.
    pub fn represented_classes(
        &self,
        ring: CoefficientRing,
    ) -> Result<Vec<RepresentedClass>, EngineError> {
        Ok(self.build(ring)?.classes)
    }

    pub fn build(&self, ring: CoefficientRing) -> Result<Catalog, EngineError> {
        self.validate()?;
        match self.normalized() {
            ManifoldExpr::Point => Ok(Catalog {
                algebra: GradedAlgebra::point_ring(ring),
                classes: vec![RepresentedClass {
                    degree: 0,
                    position: (0, 0),
                    kind: ClassKind::PointClass,
                    description: "point".into(),
                }],
            }),
            ManifoldExpr::Sphere(d) => {
                let mut summands = vec![Vec::new(); d + 1];
                let mut labels = vec![Vec::new(); d + 1];
                summands[0].push(0);
                labels[0].push("1".into());
                summands[d].push(0);
                labels[d].push("s".into());
                let algebra =
                    GradedAlgebra::from_parts(ring, d, summands, labels, Default::default())?;
                Ok(Catalog {
                    algebra,
                    classes: vec![
                        RepresentedClass {
                            degree: 0,
                            position: (0, 0),
                            kind: ClassKind::PointClass,
                            description: "point".into(),
                        },
                        RepresentedClass {
                            degree: d,
                            position: (d, 0),
                            kind: ClassKind::SphereFactor(d),
                            description: format!("S{d}"),
                        },
                    ],
                })
            }
            ManifoldExpr::Product(a, b) => {
                let ca = a.build(ring)?;
                let cb = b.build(ring)?;
                let (algebra, index) = kunneth_product(&ca.algebra, &cb.algebra)?;
                let mut classes = vec![RepresentedClass {
                    degree: 0,
                    position: (0, 0),
                    kind: ClassKind::PointClass,
                    description: "point".into(),
                }];
                for c in &ca.classes {
                    if let ClassKind::SphereFactor(d) = c.kind {
                        classes.push(RepresentedClass {
                            degree: c.degree,
                            position: index.get(c.position, (0, 0)),
                            kind: ClassKind::SphereFactor(d),
                            description: format!("factor {}", c.description),
                        });
                    }
                }
                for c in &cb.classes {
                    if let ClassKind::SphereFactor(d) = c.kind {
                        classes.push(RepresentedClass {
                            degree: c.degree,
                            position: index.get((0, 0), c.position),
                            kind: ClassKind::SphereFactor(d),
                            description: format!("factor {}", c.description),
                        });
                    }
                }
                Ok(Catalog { algebra, classes })
            }
            ManifoldExpr::ConnSum(a, b) => {
                let n = a.dimension();
                let ca = a.build(ring)?;
                let cb = b.build(ring)?;
                let (algebra, _) = connected_sum(&ca.algebra, &cb.algebra, n)?;
                Ok(Catalog {
                    algebra,
                    classes: vec![
                        RepresentedClass {
                            degree: 0,
                            position: (0, 0),
                            kind: ClassKind::PointClass,
                            description: "point".into(),
                        },
                        RepresentedClass {
                            degree: n,
                            position: (n, 0),
                            kind: ClassKind::FundamentalTop,
                            description: "fundamental class".into(),
                        },
                    ],
                })
            }
            ManifoldExpr::SphereBundle { base, fiber, euler } => {
                // Any product of two positive-degree classes lands past
                // the top degree, so the ring has trivial products.
                let h = self.homology(ring)?;
                let co = h.uct_dual();
                let top = 2 * base - 1;
                let mut summands = vec![Vec::new(); top + 1];
                let mut labels = vec![Vec::new(); top + 1];
                for d in 0..=top {
                    for (i, &q) in co.factors(d).iter().enumerate() {
                        summands[d].push(q);
                        labels[d].push(if d == 0 {
                            "1".into()
                        } else {
                            format!("b{d}.{i}")
                        });
                    }
                }
                let algebra =
                    GradedAlgebra::from_parts(ring, top, summands, labels, Default::default())?;
                // The fiber sphere has a product neighborhood, so its
                // class is certified; for nonzero Euler number it
                // generates the torsion summand in that degree.
                let mut classes = vec![RepresentedClass {
                    degree: 0,
                    position: (0, 0),
                    kind: ClassKind::PointClass,
                    description: "point".into(),
                }];
                if !h.factors(fiber).is_empty() {
                    classes.push(RepresentedClass {
                        degree: fiber,
                        position: (fiber, 0),
                        kind: ClassKind::FiberSphere,
                        description: format!("fiber S{fiber} (euler {euler})"),
                    });
                }
                Ok(Catalog { algebra, classes })
            }
        }
    }
}

/// Kunneth module of two graded modules; torsion on either side needs a
/// field.
pub fn kunneth_module(a: &GradedModule, b: &GradedModule) -> Result<GradedModule, EngineError> {
    let ring = a.ring();
    if !ring.is_field() {
        let torsion = (0..=a.top_degree()).any(|d| !a.torsion_factors(d).is_empty())
            || (0..=b.top_degree()).any(|d| !b.torsion_factors(d).is_empty());
        if torsion {
            return Err(EngineError::TorsionKunneth);
        }
    }
    let top = a.top_degree() + b.top_degree();
    let mut raw = vec![Vec::new(); top + 1];
    for i in 0..=a.top_degree() {
        for j in 0..=b.top_degree() {
            let count = a.rank(i) * b.rank(j);
            raw[i + j].extend(std::iter::repeat_n(0, count));
        }
    }
    GradedModule::new(ring, top, raw)
}

/// Catalog data for one expression: the cohomology ring plus the classes
/// certified for bubbling.
pub struct Catalog {
    pub algebra: GradedAlgebra,
    pub classes: Vec<RepresentedClass>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClassKind {
    PointClass,
    SphereFactor(usize),
    FundamentalTop,
    FiberSphere,
}

/// A homology class certified as represented by a closed submanifold
/// with trivial normal bundle; `position` indexes the homology
/// presentation (equal to the cohomology position for free catalogs).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RepresentedClass {
    pub degree: usize,
    pub position: GenId,
    pub kind: ClassKind,
    pub description: String,
}

impl fmt::Display for ManifoldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManifoldExpr::Point => write!(f, "point"),
            ManifoldExpr::Sphere(d) => write!(f, "S{d}"),
            ManifoldExpr::Product(a, b) => write!(f, "product({a},{b})"),
            ManifoldExpr::ConnSum(a, b) => write!(f, "connsum({a},{b})"),
            ManifoldExpr::SphereBundle { base, fiber, euler } => {
                write!(f, "bundle({base},{fiber},{euler})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> CoefficientRing {
        CoefficientRing::Integers
    }

    fn s(d: usize) -> ManifoldExpr {
        ManifoldExpr::Sphere(d)
    }

    #[test]
    fn dimension_and_cps() {
        let p = ManifoldExpr::product(s(2), s(1));
        assert_eq!(p.dimension(), 3);
        assert!(p.is_cps());
        let b = ManifoldExpr::SphereBundle {
            base: 2,
            fiber: 1,
            euler: 3,
        };
        assert!(!b.is_cps());
        assert_eq!(b.dimension(), 3);
        let cs = ManifoldExpr::conn_sum(
            ManifoldExpr::product(s(1), s(1)),
            ManifoldExpr::product(s(1), s(1)),
        );
        assert_eq!(cs.dimension(), 2);
        assert!(cs.is_cps());
    }

    #[test]
    fn sphere_homology() {
        let h = s(2).homology(z()).unwrap();
        assert_eq!(h.rank(0), 1);
        assert_eq!(h.rank(1), 0);
        assert_eq!(h.rank(2), 1);
    }

    #[test]
    fn product_homology_ranks() {
        let h = ManifoldExpr::product(s(2), s(1)).homology(z()).unwrap();
        assert_eq!(
            (0..=3).map(|d| h.rank(d)).collect::<Vec<_>>(),
            vec![1, 1, 1, 1]
        );
    }

    #[test]
    fn bundle_homology_is_lens_like() {
        let b = ManifoldExpr::SphereBundle {
            base: 2,
            fiber: 1,
            euler: 4,
        };
        let h = b.homology(z()).unwrap();
        assert_eq!(h.factors(0), &[0]);
        assert_eq!(h.factors(1), &[4]);
        assert_eq!(h.factors(2), &[] as &[i64]);
        assert_eq!(h.factors(3), &[0]);
        // cohomology shifts the torsion up one degree
        let ring = b.cohomology_ring(z()).unwrap();
        let m = ring.module();
        assert_eq!(m.factors(1), &[] as &[i64]);
        assert_eq!(m.factors(2), &[4]);
    }

    #[test]
    fn euler_zero_bundle_is_a_product() {
        let b = ManifoldExpr::SphereBundle {
            base: 2,
            fiber: 2,
            euler: 0,
        };
        let h = b.homology(z()).unwrap();
        let p = ManifoldExpr::product(s(2), s(2)).homology(z()).unwrap();
        assert!(h.is_isomorphic(&p).unwrap());
    }

    #[test]
    fn torsion_kunneth_propagates() {
        let bundle = ManifoldExpr::SphereBundle {
            base: 2,
            fiber: 1,
            euler: 2,
        };
        let p = ManifoldExpr::product(bundle, s(1));
        assert!(matches!(
            p.homology(z()),
            Err(crate::error::EngineError::TorsionKunneth)
        ));
        // fields are fine
        assert!(p.homology(CoefficientRing::Rationals).is_ok());
    }

    #[test]
    fn bad_bundle_rejected() {
        let b = ManifoldExpr::SphereBundle {
            base: 2,
            fiber: 2,
            euler: 3,
        };
        assert!(b.validate().is_err());
    }

    #[test]
    fn represented_classes_product() {
        let p = ManifoldExpr::product(s(2), s(1));
        let classes = p.represented_classes(z()).unwrap();
        let degrees: Vec<usize> = classes.iter().map(|c| c.degree).collect();
        assert_eq!(degrees, vec![0, 2, 1]);
        let c3 = s(3).represented_classes(z()).unwrap();
        assert_eq!(c3.iter().map(|c| c.degree).collect::<Vec<_>>(), vec![0, 3]);
        let cs = ManifoldExpr::conn_sum(
            ManifoldExpr::product(s(1), s(1)),
            ManifoldExpr::product(s(1), s(1)),
        );
        let cls = cs.represented_classes(z()).unwrap();
        assert_eq!(cls.iter().map(|c| c.degree).collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn connsum_dimension_one_normalizes() {
        let c = ManifoldExpr::conn_sum(s(1), s(1));
        assert_eq!(c.normalized(), s(1));
        let h = c.homology(z()).unwrap();
        assert!(h.is_isomorphic(&s(1).homology(z()).unwrap()).unwrap());
    }

    #[test]
    fn euler_recursions() {
        let t2 = ManifoldExpr::product(s(1), s(1));
        let g2 = ManifoldExpr::conn_sum(t2.clone(), t2.clone());
        let chi_t = t2.homology(z()).unwrap().euler_characteristic();
        let chi_g2 = g2.homology(z()).unwrap().euler_characteristic();
        assert_eq!(chi_t, 0);
        assert_eq!(chi_g2, chi_t + chi_t - 2);
        let s2s2 = ManifoldExpr::product(s(2), s(2));
        assert_eq!(s2s2.homology(z()).unwrap().euler_characteristic(), 4);
    }

    #[test]
    fn rank_symmetry_over_field() {
        let q = CoefficientRing::Rationals;
        let exprs = vec![
            ManifoldExpr::product(s(2), s(1)),
            ManifoldExpr::conn_sum(
                ManifoldExpr::product(s(2), s(2)),
                ManifoldExpr::product(s(2), s(2)),
            ),
            ManifoldExpr::SphereBundle {
                base: 2,
                fiber: 1,
                euler: 2,
            },
        ];
        for e in exprs {
            let n = e.dimension();
            let h = e.homology(q).unwrap();
            for d in 0..=n {
                assert_eq!(h.rank(d), h.rank(n - d), "{e} fails symmetry at {d}");
            }
        }
    }

    #[test]
    fn metadata() {
        assert!(ManifoldExpr::product(s(2), s(1)).embeds_in_codimension_one());
        assert!(ManifoldExpr::product(s(2), s(1)).admits_orientation_reversal());
        let b = ManifoldExpr::SphereBundle {
            base: 2,
            fiber: 1,
            euler: 2,
        };
        assert!(!b.embeds_in_codimension_one());
    }

    #[test]
    fn display_shows_structure() {
        let e = ManifoldExpr::conn_sum(
            ManifoldExpr::product(s(1), s(1)),
            ManifoldExpr::product(s(1), s(1)),
        );
        assert_eq!(e.to_string(), "connsum(product(S1,S1),product(S1,S1))");
    }
}
