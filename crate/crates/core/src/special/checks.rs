use super::{elliptic_gamma, gamma_quadratic_check, gamma_residue_constant, theta, NomePair};
use crate::report::{relative_residual, CheckSettings, RESIDUAL_FLOOR};
use crate::{Result, VerificationReport, C64};

pub const SPECIAL_FUNCTIONS_TOL: f64 = 1e-11;

/// Nodes of the mean-value evaluation of `(1 − z) Γ(z)` at `z = 1`.
const RESIDUE_NODES: usize = 64;

/// `lim_{z→1} (1 − z) Γ(z)` as the mean of the analytic function
/// `(1 − z) Γ(z)` over a circle around `1`, well inside the distance to the
/// next poles `1/p`, `1/q`.
pub fn residue_constant_by_mean(nome: &NomePair) -> Result<C64> {
    let largest = nome.p().norm().max(nome.q().norm());
    let radius = if largest == 0.0 {
        0.25
    } else {
        (0.25 * (1.0 / largest - 1.0)).min(0.25)
    };
    let one = C64::new(1.0, 0.0);
    let mut sum = C64::new(0.0, 0.0);
    for j in 0..RESIDUE_NODES {
        let step = C64::from_polar(radius, 2.0 * std::f64::consts::PI * j as f64 / RESIDUE_NODES as f64);
        let z = one + step;
        sum += -step * elliptic_gamma(z, nome)?;
    }
    Ok(sum / RESIDUE_NODES as f64)
}

/// The functional equations of `Γ` and `θ` at one sample point `z`:
///
/// * `base_symmetry`: `Γ(z; p, q) = Γ(z; q, p)`
/// * `inversion`: `Γ(z) Γ(pq/z) = 1`
/// * `shift_q`, `shift_p`: `Γ(qz) = θ(z; p) Γ(z)`, `Γ(pz) = θ(z; q) Γ(z)`
/// * `quadratic`: the quadratic transformation
/// * `residue_constant`: `1/((p;p)∞(q;q)∞)` against the mean-value
///   evaluation of `(1 − z)Γ(z)` at `z = 1`
/// * `theta_reflection`, `theta_quasi_period`: `θ(z) = θ(p/z)`,
///   `θ(pz) = −z⁻¹ θ(z)`
/// * `inverse_gamma_pair`: `1/Γ(z^{±2}) = θ(z²; q) θ(z^{−2}; p)`
///
/// The report's residual is the largest of these; the worst one supplies
/// `lhs` and `rhs`.
pub fn verify_special_functions(z: C64, nome: &NomePair) -> Result<VerificationReport> {
    let (p, q, policy) = (nome.p(), nome.q(), nome.policy());
    let one = C64::new(1.0, 0.0);
    let g = elliptic_gamma(z, nome)?;
    let z2 = z * z;
    let checks: [(&'static str, C64, C64); 8] = [
        ("base_symmetry", g, elliptic_gamma(z, &nome.swapped())?),
        ("inversion", g * elliptic_gamma(p * q / z, nome)?, one),
        ("shift_q", elliptic_gamma(q * z, nome)?, theta(z, p, policy)? * g),
        ("shift_p", elliptic_gamma(p * z, nome)?, theta(z, q, policy)? * g),
        ("residue_constant", gamma_residue_constant(nome), residue_constant_by_mean(nome)?),
        ("theta_reflection", theta(z, p, policy)?, theta(p / z, p, policy)?),
        ("theta_quasi_period", theta(p * z, p, policy)?, -theta(z, p, policy)? / z),
        (
            "inverse_gamma_pair",
            one / (elliptic_gamma(z2, nome)? * elliptic_gamma(one / z2, nome)?),
            theta(z2, q, policy)? * theta(one / z2, p, policy)?,
        ),
    ];
    let quadratic = gamma_quadratic_check(z, nome)?;

    let mut worst = ("quadratic", quadratic, g, g);
    let mut details = Vec::new();
    for (name, l, r) in &checks {
        let res = relative_residual(*l, *r, RESIDUAL_FLOOR);
        details.push((*name, res));
        if res > worst.1 || res.is_nan() {
            worst = (name, res, *l, *r);
        }
    }
    details.push(("quadratic", quadratic));
    let mut report = VerificationReport::new("special_functions", worst.2, worst.3, worst.1, SPECIAL_FUNCTIONS_TOL)
        .input("z", z)
        .input("p", p)
        .input("q", q);
    for (name, res) in details {
        report = report.detail(name, res);
    }
    Ok(report.settings(CheckSettings::from_nome(nome)))
}
