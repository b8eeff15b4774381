//! Exact zeta functions of splice diagrams of plane curve singularities.
//!
//! A [`Diagram`] is a decorated tree with arrowheads. From it the crate
//! computes multiplicities, realizable refinements, motivic / topological /
//! twisted zeta functions, splice decompositions and monodromy data, all in
//! exact arithmetic.

pub mod algebra;
pub mod diagram;
pub mod error;
pub mod io;
pub mod monodromy;
pub mod refine;
pub mod splice;
pub mod zeta;

pub use algebra::{BigRat, CycloProduct, Poly2, RatFuncS};
pub use diagram::{Diagram, SpliceData, Target, Valency, Violation};
pub use error::{Error, Result};
pub use zeta::ZetaExpr;
