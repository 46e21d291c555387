//! The evolving Reeb-space record: exact homology and cohomology
//! presentations with generator provenance, near-boundary markers and a
//! construction log that later operations consult for their hypotheses.

use crate::algebra::{wedge, GenId, GradedAlgebra};
use crate::error::EngineError;
use crate::manifold::{ClassKind, ManifoldExpr};
use crate::module::GradedModule;
use crate::ring::CoefficientRing;
use serde::Serialize;

/// Where a generator came from.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum Provenance {
    Base {
        summand: usize,
    },
    Bubbled {
        step: usize,
        ingredient: usize,
        source: String,
    },
    ConnSum {
        side: Side,
        inner: Box<Provenance>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Side {
    Left,
    Right,
}

impl Provenance {
    pub fn is_bubbled(&self) -> bool {
        match self {
            Provenance::Bubbled { .. } => true,
            Provenance::ConnSum { inner, .. } => inner.is_bubbled(),
            Provenance::Base { .. } => false,
        }
    }

    /// Flat tag for reports.
    pub fn tag(&self) -> String {
        match self {
            Provenance::Base { summand } => format!("base:{summand}"),
            Provenance::Bubbled {
                step,
                ingredient,
                source,
            } => format!("bubbled:{step}:{ingredient}:{source}"),
            Provenance::ConnSum { side, inner } => {
                let s = match side {
                    Side::Left => "left",
                    Side::Right => "right",
                };
                format!("connsum-{s}/{}", inner.tag())
            }
        }
    }
}

/// One summand of the homology presentation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HSummand {
    pub factor: i64,
    pub provenance: Provenance,
    pub q_marked: bool,
}

/// Structured construction log consulted by later steps.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum LogEntry {
    Base {
        kind: BaseKind,
        n: usize,
        summands: Vec<String>,
    },
    Bubble {
        step: usize,
        ingredients: Vec<String>,
        dims: Vec<usize>,
        spheres_or_points_only: bool,
        disjoint: bool,
        ring_extended: bool,
    },
    ConnSum {
        step: usize,
    },
    Thm2 {
        step: usize,
        k: usize,
        kp: usize,
        r0: i64,
    },
    Thm41 {
        step: usize,
        kp: usize,
        r0: i64,
        refined: bool,
    },
    Thm42 {
        step: usize,
        kp: usize,
        p: i64,
        rp: i64,
    },
    RestrictTop {
        step: usize,
        rank: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum BaseKind {
    SpecialGeneric,
    Disc,
    ConcentricSpheres,
}

/// The full Reeb-space record. States are immutable; operations return
/// new states.
#[derive(Clone, PartialEq, Debug)]
pub struct ReebState {
    pub n: usize,
    pub ring: CoefficientRing,
    /// Homology presentation per degree 0..=n (append-only per degree).
    pub homology: Vec<Vec<HSummand>>,
    /// Cohomology ring, presentation aligned with its own generators.
    pub cohomology: GradedAlgebra,
    pub co_provenance: Vec<Vec<Provenance>>,
    /// False once an operation could not certify the product structure;
    /// the module data stays exact either way.
    pub ring_certified: bool,
    /// Largest generating-polyhedron dimension of the pre-connected-sum
    /// stage, for the hypotheses of later ring-level bubbles.
    pub prestage_polyhedron_dim: Option<usize>,
    pub log: Vec<LogEntry>,
}

impl ReebState {
    pub fn homology_module(&self) -> GradedModule {
        let raw = self
            .homology
            .iter()
            .map(|list| list.iter().map(|s| s.factor).collect())
            .collect();
        GradedModule::new(self.ring, self.n, raw).expect("presentation factors are valid")
    }

    pub fn cohomology_module(&self) -> GradedModule {
        self.cohomology.module()
    }

    /// Betti numbers (free ranks of homology) per degree.
    pub fn betti(&self) -> Vec<usize> {
        let m = self.homology_module();
        (0..=self.n).map(|d| m.rank(d)).collect()
    }

    /// Positions of marked generators of one homology degree.
    pub fn markers_in_degree(&self, degree: usize) -> Vec<GenId> {
        self.homology[degree]
            .iter()
            .enumerate()
            .filter(|(_, s)| s.q_marked)
            .map(|(i, _)| (degree, i))
            .collect()
    }

    /// Consistency of the two presentations plus the state axioms.
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.homology.len() != self.n + 1 {
            return Err(EngineError::Precondition(
                "homology presentation must cover degrees 0..=n".into(),
            ));
        }
        let h0: Vec<i64> = self.homology[0].iter().map(|s| s.factor).collect();
        if h0 != vec![0] {
            return Err(EngineError::Precondition(
                "connectedness requires H_0 = R".into(),
            ));
        }
        if self.cohomology.top_degree() != self.n {
            return Err(EngineError::TopDegreeMismatch(
                self.cohomology.top_degree(),
                self.n,
            ));
        }
        let expected = self.homology_module().uct_dual().padded_to(self.n);
        let actual = self.cohomology_module();
        if !expected.is_isomorphic(&actual)? {
            return Err(EngineError::Precondition(format!(
                "cohomology {actual} is not the universal-coefficient dual of homology {expected}"
            )));
        }
        for d in 0..=self.n {
            if self.co_provenance[d].len() != self.cohomology.summands(d).len() {
                return Err(EngineError::Precondition(
                    "every cohomology generator needs exactly one provenance tag".into(),
                ));
            }
            for s in &self.homology[d] {
                if s.q_marked && s.factor != 0 {
                    return Err(EngineError::Precondition(
                        "markers may only reference unit free generators".into(),
                    ));
                }
            }
        }
        self.cohomology.validate()
    }

    /// Reeb space of a standard special generic map whose image is a
    /// boundary connected sum of (CPS manifold) x (disc) pieces: the ring
    /// is the wedge of the summand rings, sphere classes and factor
    /// sphere classes of the summands are marked, and H_n vanishes.
    pub fn special_generic_base(
        summands: &[ManifoldExpr],
        n: usize,
        ring: CoefficientRing,
    ) -> Result<ReebState, EngineError> {
        let mut parts = Vec::with_capacity(summands.len());
        let mut marks: Vec<Vec<(GenId, bool)>> = Vec::with_capacity(summands.len());
        for m in summands {
            if !m.is_cps() {
                return Err(EngineError::Precondition(format!(
                    "base summand {m} is not CPS"
                )));
            }
            if m.dimension() >= n {
                return Err(EngineError::Precondition(format!(
                    "base summand {m} must have dimension below {n}"
                )));
            }
            let catalog = m.build(ring)?;
            let marked: Vec<(GenId, bool)> = catalog
                .classes
                .iter()
                .filter(|c| matches!(c.kind, ClassKind::SphereFactor(_)) && c.degree > 0)
                .map(|c| (c.position, true))
                .collect();
            parts.push(catalog.algebra);
            marks.push(marked);
        }
        let (algebra, maps) = wedge(&parts, n, ring)?;
        let mut homology: Vec<Vec<HSummand>> = vec![Vec::new(); n + 1];
        let mut co_provenance: Vec<Vec<Provenance>> = vec![Vec::new(); n + 1];
        homology[0].push(HSummand {
            factor: 0,
            provenance: Provenance::Base { summand: 0 },
            q_marked: false,
        });
        co_provenance[0].push(Provenance::Base { summand: 0 });
        for d in 1..=n {
            for (k, map) in maps.iter().enumerate() {
                for (&old, &new) in map.iter() {
                    if old.0 != d {
                        continue;
                    }
                    debug_assert_eq!(new.0, d);
                    let marked = marks[k].iter().any(|&(pos, _)| pos == old);
                    let slot = homology[d].len();
                    homology[d].push(HSummand {
                        factor: algebra.summands(d)[slot],
                        provenance: Provenance::Base { summand: k },
                        q_marked: marked,
                    });
                    co_provenance[d].push(Provenance::Base { summand: k });
                }
            }
        }
        let state = ReebState {
            n,
            ring,
            homology,
            cohomology: algebra,
            co_provenance,
            ring_certified: true,
            prestage_polyhedron_dim: None,
            log: vec![LogEntry::Base {
                kind: if summands.is_empty() {
                    BaseKind::Disc
                } else {
                    BaseKind::SpecialGeneric
                },
                n,
                summands: summands.iter().map(ManifoldExpr::to_string).collect(),
            }],
        };
        state.validate()?;
        Ok(state)
    }

    /// Reeb space of the concentric-spheres construction: a bouquet of l
    /// spheres of dimension n.
    pub fn concentric_spheres_base(
        l: usize,
        n: usize,
        ring: CoefficientRing,
    ) -> Result<ReebState, EngineError> {
        let mut summands = vec![Vec::new(); n + 1];
        let mut labels = vec![Vec::new(); n + 1];
        summands[0].push(0);
        labels[0].push("1".into());
        let mut homology: Vec<Vec<HSummand>> = vec![Vec::new(); n + 1];
        let mut co_provenance: Vec<Vec<Provenance>> = vec![Vec::new(); n + 1];
        homology[0].push(HSummand {
            factor: 0,
            provenance: Provenance::Base { summand: 0 },
            q_marked: false,
        });
        co_provenance[0].push(Provenance::Base { summand: 0 });
        for i in 0..l {
            summands[n].push(0);
            labels[n].push(format!("s{i}"));
            homology[n].push(HSummand {
                factor: 0,
                provenance: Provenance::Bubbled {
                    step: 0,
                    ingredient: i,
                    source: "point".into(),
                },
                q_marked: false,
            });
            co_provenance[n].push(Provenance::Bubbled {
                step: 0,
                ingredient: i,
                source: "point".into(),
            });
        }
        let cohomology = GradedAlgebra::from_parts(ring, n, summands, labels, Default::default())?;
        let state = ReebState {
            n,
            ring,
            homology,
            cohomology,
            co_provenance,
            ring_certified: true,
            prestage_polyhedron_dim: Some(0),
            log: vec![LogEntry::Base {
                kind: BaseKind::ConcentricSpheres,
                n,
                summands: (0..l).map(|_| "point".to_string()).collect(),
            }],
        };
        state.validate()?;
        Ok(state)
    }

    /// Reeb space of a canonical projection of a unit sphere: a disc.
    pub fn canonical_projection_base(
        n: usize,
        ring: CoefficientRing,
    ) -> Result<ReebState, EngineError> {
        ReebState::special_generic_base(&[], n, ring)
    }

    pub fn base_kind(&self) -> Option<BaseKind> {
        self.log.iter().find_map(|e| match e {
            LogEntry::Base { kind, .. } => Some(*kind),
            _ => None,
        })
    }

    pub fn next_step_index(&self) -> usize {
        self.log.len()
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
    fn sphere_base_example() {
        let st = ReebState::special_generic_base(&[s(2)], 6, z()).unwrap();
        assert_eq!(st.betti(), vec![1, 0, 1, 0, 0, 0, 0]);
        assert_eq!(st.markers_in_degree(2).len(), 1);
    }

    #[test]
    fn circle_copies_base() {
        let st = ReebState::special_generic_base(&[s(1), s(1), s(1)], 2, z()).unwrap();
        assert_eq!(st.betti(), vec![1, 3, 0]);
        assert_eq!(st.markers_in_degree(1).len(), 3);
    }

    #[test]
    fn empty_base_is_a_disc() {
        let st = ReebState::special_generic_base(&[], 6, z()).unwrap();
        assert_eq!(st.betti(), vec![1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(st.base_kind(), Some(BaseKind::Disc));
    }

    #[test]
    fn product_summand_marks_factor_spheres_only() {
        let st =
            ReebState::special_generic_base(&[ManifoldExpr::product(s(1), s(1))], 4, z()).unwrap();
        assert_eq!(st.markers_in_degree(1).len(), 2);
        // the top class of the torus summand is not a factor sphere
        assert_eq!(st.markers_in_degree(2).len(), 0);
    }

    #[test]
    fn connsum_summand_has_no_markers() {
        let t = ManifoldExpr::product(s(1), s(1));
        let cs = ManifoldExpr::conn_sum(t.clone(), t);
        let st = ReebState::special_generic_base(&[cs], 4, z()).unwrap();
        assert_eq!(st.markers_in_degree(1).len(), 0);
        assert_eq!(st.markers_in_degree(2).len(), 0);
    }

    #[test]
    fn concentric_spheres() {
        let st = ReebState::concentric_spheres_base(3, 4, z()).unwrap();
        assert_eq!(st.betti(), vec![1, 0, 0, 0, 3]);
        let st0 = ReebState::concentric_spheres_base(0, 4, z()).unwrap();
        assert_eq!(st0.betti(), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn base_rejects_bad_summands() {
        assert!(ReebState::special_generic_base(&[s(6)], 6, z()).is_err());
        assert!(ReebState::special_generic_base(
            &[ManifoldExpr::SphereBundle {
                base: 2,
                fiber: 1,
                euler: 2
            }],
            6,
            z()
        )
        .is_err());
    }
}
