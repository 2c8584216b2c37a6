//! Elliptic special functions.
//!
//! Everything here is a truncated infinite product. The truncation order is
//! chosen by a [`TruncationPolicy`] from an explicit tail bound, so a value
//! computed at tolerance `tol` differs from the exact product by a relative
//! amount below `tol` (up to floating-point rounding).
//!
//! ```
//! use elliptic_bailey::special::{elliptic_gamma, theta};
//! use elliptic_bailey::{NomePair, C64};
//!
//! let nome = NomePair::real(0.15, 0.2).unwrap();
//! let z = C64::new(0.5, 0.1);
//! // Γ(qz) = θ(z; p) Γ(z)
//! let lhs = elliptic_gamma(nome.q() * z, &nome).unwrap();
//! let rhs = theta(z, nome.p(), nome.policy()).unwrap() * elliptic_gamma(z, &nome).unwrap();
//! assert!((lhs - rhs).norm() < 1e-14 * lhs.norm());
//! ```

mod checks;
mod gamma;
mod nome;
mod policy;
mod products;
mod scaled;

pub use checks::{residue_constant_by_mean, verify_special_functions, SPECIAL_FUNCTIONS_TOL};
pub use gamma::{
    elliptic_gamma, gamma_product, gamma_quadratic_check, gamma_residue_constant,
    lattice_distance,
};
pub use nome::NomePair;
pub use policy::{TruncationMode, TruncationPolicy};
pub use products::{elliptic_pochhammer, qpochhammer_inf, theta};
pub(crate) use products::{scaled_pochhammer, theta_pochhammer_checked};
pub(crate) use scaled::Scaled;

use crate::{Error, Result, C64};

pub(crate) fn check_base(name: &'static str, value: C64) -> Result<()> {
    let modulus = value.norm();
    if !(modulus < 1.0) {
        return Err(Error::NomeDomain {
            name,
            value,
            modulus,
        });
    }
    Ok(())
}
