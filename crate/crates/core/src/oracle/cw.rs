//! Small CW chain complexes: explicit cell counts and boundary matrices,
//! used for the sphere-bundle models that have no simplicial counterpart
//! here.

use crate::error::EngineError;
use crate::module::GradedModule;
use crate::oracle::homology::ChainComplex;
use crate::ring::CoefficientRing;
use crate::snf::IntMat;

#[derive(Clone, Debug)]
pub struct CwChainComplex {
    chain: ChainComplex,
}

impl CwChainComplex {
    /// `boundaries[d]` maps degree d+1 to degree d; the composite of
    /// consecutive boundary matrices must vanish.
    pub fn new(cells: Vec<usize>, boundaries: Vec<IntMat>) -> Result<Self, EngineError> {
        if boundaries.len() + 1 != cells.len() {
            return Err(EngineError::Precondition(
                "expected one boundary matrix between consecutive degrees".into(),
            ));
        }
        let mut full = Vec::with_capacity(cells.len());
        full.push(IntMat::zeros(0, cells[0]));
        full.extend(boundaries);
        Ok(CwChainComplex {
            chain: ChainComplex::new(cells, full)?,
        })
    }

    /// Total space of an oriented linear sphere bundle over a sphere
    /// with the given Euler number: one cell in each of the degrees
    /// 0, k'-1, k', 2k'-1 and a single boundary map, multiplication by
    /// the Euler number.
    pub fn sphere_bundle(base_dim: usize, euler: i64) -> Result<Self, EngineError> {
        if base_dim < 2 {
            return Err(EngineError::BadManifold(
                "bundle model needs base dimension >= 2".into(),
            ));
        }
        let top = 2 * base_dim - 1;
        let mut cells = vec![0usize; top + 1];
        cells[0] = 1;
        cells[base_dim - 1] = 1;
        cells[base_dim] = 1;
        cells[top] = 1;
        let mut boundaries = Vec::with_capacity(top);
        for d in 1..=top {
            let m = if d == base_dim {
                IntMat::from_rows(vec![vec![euler]])
            } else {
                IntMat::zeros(cells[d - 1], cells[d])
            };
            boundaries.push(m);
        }
        CwChainComplex::new(cells, boundaries)
    }

    pub fn homology(&self, ring: CoefficientRing) -> Result<GradedModule, EngineError> {
        self.chain.homology_module(ring)
    }

    pub fn cohomology(&self, ring: CoefficientRing) -> Result<GradedModule, EngineError> {
        let co = self.chain.cohomology(ring)?;
        GradedModule::new(
            ring,
            self.chain.top(),
            co.iter().map(|s| s.factors.clone()).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lens_type_bundle() {
        let cw = CwChainComplex::sphere_bundle(2, 4).unwrap();
        let h = cw.homology(CoefficientRing::Integers).unwrap();
        assert_eq!(h.factors(0), &[0]);
        assert_eq!(h.factors(1), &[4]);
        assert_eq!(h.factors(2), &[] as &[i64]);
        assert_eq!(h.factors(3), &[0]);
    }

    #[test]
    fn euler_zero_bundle_is_product_like() {
        let cw = CwChainComplex::sphere_bundle(3, 0).unwrap();
        let h = cw.homology(CoefficientRing::Integers).unwrap();
        for d in [0, 2, 3, 5] {
            assert_eq!(h.rank(d), 1, "degree {d}");
        }
    }

    #[test]
    fn rejects_nonzero_composite() {
        let r = CwChainComplex::new(
            vec![1, 1, 1],
            vec![
                IntMat::from_rows(vec![vec![1]]),
                IntMat::from_rows(vec![vec![1]]),
            ],
        );
        assert!(r.is_err());
    }
}
