//! Contour integrals: the integral Bailey operator `M(t)`, the elliptic beta
//! integral, the star-triangle relation, contour deformation with residues
//! and the finite-difference reduction of `M(t)`.
//!
//! All integrals are taken over circles centred at the origin with the
//! adaptive trapezoid rule, which converges exponentially for integrands
//! analytic in an annulus around the circle. Deforming a contour always
//! means changing the radius; poles crossed on the way are accounted for by
//! explicit residues.
//!
//! The normalisation is `κ = (p;p)∞ (q;q)∞ / (4πi)` and the operator is
//!
//! ```text
//! [M(t)α](w) = κ ∮_𝕋 Γ(t w^{±1} z^{±1}) / Γ(t², z^{±2}) · α(z) dz/z .
//! ```

mod checks;
mod operator;
mod quadrature;
mod test_function;

pub use checks::{
    BETA_INTEGRAL_TOL, DEFORMATION_TOL, FD_EPSILONS, FINITE_DIFFERENCE_TOL,
    INVERSION_EXPERIMENT_TOL, RAHMAN_TOL, REDUCTION_TOL, STAR_TRIANGLE_TOL,
    contour_deformation_check, elliptic_beta_integral, finite_difference_m,
    finite_difference_oracle, m_inversion_experiment, rahman_limit_check,
    residue_matrix_reduction_check, star_triangle_residual,
};
pub use operator::{apply_m, apply_m_continued, d_factor, OperatorParams};
pub use quadrature::{
    circle_integral, circle_integral_centered, circle_integral_vec, Quadrature, QuadratureGrid,
    QuadratureSettings,
};
pub use test_function::SymmetricTestFunction;
