//! Independent brute-force verification layer: ordered simplicial
//! complexes, small CW chain complexes, Smith-normal-form homology and
//! Alexander-Whitney cup products.

pub mod complex;
pub mod cup;
pub mod cw;
pub mod homology;
pub mod verify;

pub use complex::{
    cone_complex, connected_sum_complex, disc_complex, glue_complex, point_complex,
    product_complex, sphere_complex, wedge_complex, SimplicialComplex,
};
pub use cup::cup_product_ring;
pub use cw::CwChainComplex;
pub use homology::ChainComplex;
pub use verify::{verify_prop3, Prop3Check, DEFAULT_BUDGET};

use crate::error::EngineError;
use crate::module::GradedModule;
use crate::ring::CoefficientRing;

/// Homology of a simplicial complex in invariant-factor form.
pub fn homology_of(
    complex: &SimplicialComplex,
    ring: CoefficientRing,
) -> Result<GradedModule, EngineError> {
    complex.chain_complex().homology_module(ring)
}

/// Reads the oracle simplex budget from the environment, falling back to
/// the default cap.
pub fn budget_from_env() -> usize {
    std::env::var("RBS_ORACLE_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}
