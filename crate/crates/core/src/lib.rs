//! Step-2 Carnot groups: exact polynomial calculus, gauge-ball quadrature, monotonicity
//! functionals and Monte Carlo heat semigroup estimates.

pub mod corpus;
pub mod error;
pub mod functionals;
pub mod gauge;
pub mod group;
pub mod heat;
mod linalg;
pub mod scan;
pub mod polycalc;

pub use error::{Error, Result};
pub use group::{GroupSpec, Point};
pub use polycalc::{Poly, Side};
pub use scan::{ScanReport, Verdict};
