//! Exact sub-Riemannian calculus on polynomials with rational coefficients.

mod calculus;
mod field;
mod harmonic;
mod parse;
mod poly;
mod region;
mod rho;

pub use calculus::{
    bochner_left_terms, bochner_residual_right, caloric_constant, caloric_residual,
    carre_du_champ, difference_residual, gradient, heisenberg_bochner_residual,
    horizontal_laplacian, is_harmonic, LeftBochner, Side,
};
pub use field::{
    dilation_field, left_field, left_fields, right_field, right_fields, theta_field,
    vertical_field, VectorField,
};
pub use harmonic::{harmonic_basis, homogeneous_monomials, in_span};
pub use parse::{parse_poly, parse_with_layout, var_name};
pub use poly::{CompiledPoly, Layout, Monomial, Poly};
pub use region::QuadraticForm;
pub use rho::{GaugeRing, Reduced, RhoExpr};
