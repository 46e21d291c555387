//! Subquotient presentations computed by Smith normal form: the shared
//! machinery for simplicial, CW and cochain homology over Z, Z/n and Q.

use crate::error::EngineError;
use crate::module::GradedModule;
use crate::ring::{gcd, CoefficientRing};
use crate::snf::{kernel_basis, smith_normal_form, solve, solve_matrix, IntMat};

/// A chain complex of free modules with integer boundary matrices.
/// `boundary[d]` maps degree d to degree d-1; `boundary[0]` is the map
/// to the zero module.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    pub boundary: Vec<IntMat>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, mut boundary: Vec<IntMat>) -> Result<Self, EngineError> {
        if boundary.len() != dims.len() {
            return Err(EngineError::Precondition(
                "one boundary matrix per degree expected".into(),
            ));
        }
        if !dims.is_empty() && boundary[0].nrows() != 0 {
            return Err(EngineError::Precondition(
                "degree-0 boundary must map to the zero module".into(),
            ));
        }
        for d in 0..dims.len() {
            if boundary[d].ncols() != dims[d] {
                return Err(EngineError::Precondition(format!(
                    "boundary {d} has {} columns, expected {}",
                    boundary[d].ncols(),
                    dims[d]
                )));
            }
            if d > 0 && boundary[d].nrows() != dims[d - 1] {
                return Err(EngineError::Precondition(format!(
                    "boundary {d} has wrong row count"
                )));
            }
        }
        // d . d = 0
        for d in 1..dims.len() {
            let dd = boundary[d - 1].matmul(&boundary[d]);
            if !dd.is_zero() {
                return Err(EngineError::Precondition(format!(
                    "boundary composition at degree {d} is nonzero"
                )));
            }
        }
        // normalize: ensure boundary[0] has the right column count
        if !dims.is_empty() {
            boundary[0] = IntMat::zeros(0, dims[0]);
        }
        Ok(ChainComplex { dims, boundary })
    }

    pub fn top(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    /// Boundary out of degree d+1, or an empty matrix at the top.
    fn boundary_into(&self, d: usize) -> IntMat {
        if d < self.top() {
            self.boundary[d + 1].clone()
        } else {
            IntMat::zeros(self.dims[d], 0)
        }
    }

    /// The dual complex of the same dimensions; boundaries transpose.
    pub fn dual(&self) -> ChainComplex {
        // Cochains graded by the same degrees: coboundary C^d -> C^{d+1}
        // is the transpose of boundary_{d+1}. Reindex as a chain complex
        // on reversed degrees so the same homology machinery applies.
        let top = self.top();
        let dims: Vec<usize> = (0..=top).map(|d| self.dims[top - d]).collect();
        let mut boundary = Vec::with_capacity(top + 1);
        for d in 0..=top {
            if d == 0 {
                boundary.push(IntMat::zeros(0, dims[0]));
            } else {
                // map: reversed degree d (= original top-d) to d-1
                // (= original top-d+1): the transposed boundary.
                boundary.push(self.boundary[top - d + 1].transpose());
            }
        }
        ChainComplex { dims, boundary }
    }

    pub fn homology(&self, ring: CoefficientRing) -> Result<Vec<Subquotient>, EngineError> {
        (0..=self.top())
            .map(|d| subquotient_homology(ring, &self.boundary[d], &self.boundary_into(d)))
            .collect()
    }

    pub fn homology_module(&self, ring: CoefficientRing) -> Result<GradedModule, EngineError> {
        let sq = self.homology(ring)?;
        GradedModule::new(
            ring,
            self.top(),
            sq.iter().map(|s| s.factors.clone()).collect(),
        )
    }

    /// Cohomology as graded in the original degrees.
    pub fn cohomology(&self, ring: CoefficientRing) -> Result<Vec<Subquotient>, EngineError> {
        let top = self.top();
        let dual = self.dual();
        let rev = dual.homology(ring)?;
        Ok((0..=top).map(|d| rev[top - d].clone()).collect())
    }
}

/// Presentation of ker(out) / im(into) over the given ring, with the
/// data needed to express a cycle's class in the chosen generators.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ring: CoefficientRing,
    /// Normalized invariant factors, one per surviving generator.
    pub factors: Vec<i64>,
    /// Ambient representative vectors, one column per surviving generator.
    pub gens: IntMat,
    sub_basis: IntMat,
    u: IntMat,
    raw: Vec<i64>,
    kept: Vec<usize>,
}

fn subquotient_homology(
    ring: CoefficientRing,
    out: &IntMat,
    into: &IntMat,
) -> Result<Subquotient, EngineError> {
    let sub = match ring.modulus() {
        None => kernel_basis(out),
        Some(n) => kernel_mod(out, n),
    };
    let rels = match ring.modulus() {
        None => into.clone(),
        Some(n) => into.hstack(&IntMat::identity(into.nrows()).scaled(n)),
    };
    subquotient(ring, sub, &rels)
}

/// Quotient of the lattice spanned by `sub_basis` by the lattice spanned
/// by the columns of `rels` (which must lie in the subspace).
pub fn subquotient(
    ring: CoefficientRing,
    sub_basis: IntMat,
    rels: &IntMat,
) -> Result<Subquotient, EngineError> {
    let z = sub_basis.ncols();
    let x = solve_matrix(&sub_basis, rels).ok_or_else(|| {
        EngineError::Precondition("relations do not lie in the cycle lattice".into())
    })?;
    let s = smith_normal_form(&x);
    let mut raw: Vec<i64> = s.diag.clone();
    raw.resize(z, 0);
    let g = sub_basis.matmul(&s.left_inv);
    let mut kept = Vec::new();
    let mut factors = Vec::new();
    for (i, &d) in raw.iter().enumerate() {
        let f = ring.normalize_factor(d);
        if d == 0 || f > 1 {
            kept.push(i);
            factors.push(if d == 0 { 0 } else { f });
        } else if f == 0 {
            // d nonzero but a unit multiple of the ring modulus: a free
            // summand over Z/n
            kept.push(i);
            factors.push(0);
        }
    }
    let gens = IntMat::from_columns(g.nrows(), kept.iter().map(|&i| g.column(i)).collect());
    Ok(Subquotient {
        ring,
        factors,
        gens,
        sub_basis,
        u: s.left,
        raw,
        kept,
    })
}

impl Subquotient {
    /// Class coordinates of an ambient cycle, one per surviving
    /// generator, reduced by the invariant factors.
    pub fn class_of(&self, cycle: &[i64]) -> Result<Vec<i64>, EngineError> {
        let w = solve(&self.sub_basis, cycle)
            .ok_or_else(|| EngineError::Precondition("vector is not a cycle".into()))?;
        let y = self.u.mul_vec(&w);
        Ok(self
            .kept
            .iter()
            .zip(&self.factors)
            .map(|(&i, &f)| {
                let v = y[i];
                match self.ring {
                    CoefficientRing::Rationals => v,
                    _ => self
                        .ring
                        .reduce(v, if f == 0 { self.effective_free(i) } else { f }),
                }
            })
            .collect())
    }

    // A "free" generator over Z/n still reduces mod n; over Z it does not.
    fn effective_free(&self, _i: usize) -> i64 {
        match self.ring {
            CoefficientRing::IntegersMod(n) => n,
            _ => 0,
        }
    }

    pub fn raw_diag(&self) -> &[i64] {
        &self.raw
    }
}

/// Integer basis of { x : m x = 0 mod n }.
fn kernel_mod(m: &IntMat, n: i64) -> IntMat {
    if m.nrows() == 0 {
        return IntMat::identity(m.ncols());
    }
    let s = smith_normal_form(m);
    let cols = m.ncols();
    let mut scale = vec![1i64; cols];
    for (i, &d) in s.diag.iter().enumerate() {
        if d != 0 {
            scale[i] = n / gcd(d, n);
        }
    }
    let cols_v: Vec<Vec<i64>> = (0..cols)
        .map(|j| {
            let mut c = s.right.column(j);
            for x in &mut c {
                *x *= scale[j];
            }
            c
        })
        .collect();
    IntMat::from_columns(cols, cols_v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> CoefficientRing {
        CoefficientRing::Integers
    }

    /// Circle as a CW complex: one 0-cell, one 1-cell, zero boundary.
    #[test]
    fn circle_cw() {
        let c =
            ChainComplex::new(vec![1, 1], vec![IntMat::zeros(0, 1), IntMat::zeros(1, 1)]).unwrap();
        let h = c.homology_module(z()).unwrap();
        assert_eq!(h.rank(0), 1);
        assert_eq!(h.rank(1), 1);
    }

    /// Lens-type chain complex: cells in degrees 0..3, boundary from
    /// degree 2 multiplication by 4.
    #[test]
    fn lens_type_torsion() {
        let c = ChainComplex::new(
            vec![1, 1, 1, 1],
            vec![
                IntMat::zeros(0, 1),
                IntMat::zeros(1, 1),
                IntMat::from_rows(vec![vec![4]]),
                IntMat::zeros(1, 1),
            ],
        )
        .unwrap();
        let h = c.homology_module(z()).unwrap();
        assert_eq!(h.factors(0), &[0]);
        assert_eq!(h.factors(1), &[4]);
        assert_eq!(h.factors(2), &[] as &[i64]);
        assert_eq!(h.factors(3), &[0]);

        // Over Z/4 both middle degrees become free rank 1.
        let z4 = CoefficientRing::integers_mod(4).unwrap();
        let h4 = c.homology_module(z4).unwrap();
        for d in 0..=3 {
            assert_eq!(h4.factors(d), &[0], "degree {d}");
        }

        // Cohomology over Z shifts the torsion up one degree.
        let co = c.cohomology(z()).unwrap();
        assert_eq!(co[1].factors, Vec::<i64>::new());
        assert_eq!(co[2].factors, vec![4]);
    }

    #[test]
    fn class_of_reduces() {
        let c = ChainComplex::new(
            vec![1, 1],
            vec![IntMat::zeros(0, 1), IntMat::from_rows(vec![vec![3]])],
        )
        .unwrap();
        // H_0 = Z/3
        let h = c.homology(z()).unwrap();
        assert_eq!(h[0].factors, vec![3]);
        let cls = h[0].class_of(&[5]).unwrap();
        assert_eq!(cls, vec![h[0].class_of(&[2]).unwrap()[0]]);
    }

    #[test]
    fn rejects_bad_composition() {
        let r = ChainComplex::new(
            vec![1, 1, 1],
            vec![
                IntMat::zeros(0, 1),
                IntMat::from_rows(vec![vec![1]]),
                IntMat::from_rows(vec![vec![1]]),
            ],
        );
        assert!(r.is_err());
    }
}
