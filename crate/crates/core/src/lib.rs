//! Exact computation of homology modules and cohomology rings of Reeb
//! spaces produced by bubbling operations on fold maps.
//!
//! The crate has three layers:
//!
//! * exact module theory over `Z`, `Z/n` and `Q` (Smith normal form,
//!   invariant factors, unit free generators, duals, coefficient change);
//! * graded commutative algebras with structure-constant product tables,
//!   the catalog of symbolic closed manifolds, and the bubbling calculus
//!   that transforms Reeb-space states;
//! * an independent simplicial/CW oracle that recomputes the same
//!   invariants from explicit complexes, plus a line-oriented script
//!   language driving the whole pipeline.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod algebra;
pub mod bubbling;
pub mod distinguish;
pub mod error;
pub mod manifold;
pub mod module;
pub mod oracle;
pub mod ring;
pub mod script;
pub mod snf;
pub mod state;

pub use error::EngineError;
pub use ring::CoefficientRing;
