use std::f64::consts::PI;

use super::operator::{inverse_gamma_pair, m_continued_with, Kernel};
use super::{
    apply_m, apply_m_continued, circle_integral, circle_integral_vec, d_factor, OperatorParams,
    QuadratureSettings, SymmetricTestFunction,
};
use crate::bailey::{m_entry, neville_at_zero};
use crate::report::{relative_residual, CheckSettings, RESIDUAL_FLOOR};
use crate::special::{
    elliptic_gamma, gamma_product, gamma_residue_constant, qpochhammer_inf, theta,
    theta_pochhammer_checked, NomePair,
};
use crate::{Error, Result, VerificationReport, C64};

pub const BETA_INTEGRAL_TOL: f64 = 1e-9;
pub const STAR_TRIANGLE_TOL: f64 = 1e-8;
pub const DEFORMATION_TOL: f64 = 1e-8;
pub const REDUCTION_TOL: f64 = 1e-9;
pub const FINITE_DIFFERENCE_TOL: f64 = 1e-5;
pub const RAHMAN_TOL: f64 = 1e-4;
pub const INVERSION_EXPERIMENT_TOL: f64 = 1e-6;

/// Regularisation steps of the finite-difference oracle.
pub const FD_EPSILONS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

fn quadrature_settings(nome: &NomePair, settings: &QuadratureSettings, nodes: usize) -> CheckSettings {
    CheckSettings {
        quadrature_nodes: Some(nodes),
        quadrature_tol: Some(settings.tol),
        ..CheckSettings::from_nome(nome)
    }
}

fn with_nome(report: VerificationReport, nome: &NomePair) -> VerificationReport {
    report.input("p", nome.p()).input("q", nome.q())
}

fn two_pi_i() -> C64 {
    C64::new(0.0, 2.0 * PI)
}

/// Sixth parameter of the elliptic beta integral, `t₆ = pq/(t₁⋯t₅)`.
fn balancing_parameter(ts: &[C64; 5], nome: &NomePair) -> Result<C64> {
    let prod: C64 = ts.iter().product();
    if prod == C64::new(0.0, 0.0) {
        return Err(Error::Constraint("beta-integral parameters must be nonzero".into()));
    }
    Ok(nome.p() * nome.q() / prod)
}

/// `κ ∮ ∏_{j=1}^{6} Γ(t_j z^{±1}) / Γ(z^{±2}) dz/z` on the unit circle.
fn beta_integral_lhs(all: &[C64; 6], settings: &QuadratureSettings, nome: &NomePair) -> Result<(C64, usize)> {
    if let Some(bad) = all.iter().find(|t| !(t.norm() < 1.0)) {
        return Err(Error::Constraint(format!(
            "beta integral needs |t_j| < 1 for all six parameters (got |{bad}| = {})",
            bad.norm()
        )));
    }
    let q = circle_integral(
        |z| {
            let inv = 1.0 / z;
            let args: Vec<C64> = all.iter().flat_map(|&t| [t * z, t * inv]).collect();
            Ok(gamma_product(&args, nome)? * inverse_gamma_pair(z * z, nome)?)
        },
        1.0,
        settings,
    )?;
    Ok((nome.kappa() * q.value, q.nodes))
}

/// Elliptic beta integral: `κ∮∏_{j=1}^{6}Γ(t_j z^{±1})/Γ(z^{±2}) dz/z`
/// against `∏_{j<k} Γ(t_j t_k)` with `t₆ = pq/(t₁⋯t₅)`.
///
/// ```
/// use elliptic_bailey::contour::{elliptic_beta_integral, QuadratureSettings};
/// use elliptic_bailey::{NomePair, C64};
///
/// let nome = NomePair::real(0.1, 0.15)?;
/// let ts = [0.5, 0.6, 0.0, 0.7, 0.45].map(|r| C64::new(r, 0.0));
/// let ts = [ts[0], ts[1], C64::from_polar(0.55, 0.5), ts[3], ts[4]];
/// let report = elliptic_beta_integral(ts, &QuadratureSettings::default(), &nome)?;
/// assert!(report.pass, "{}", report.residual);
/// # Ok::<(), elliptic_bailey::Error>(())
/// ```
pub fn elliptic_beta_integral(
    ts: [C64; 5],
    settings: &QuadratureSettings,
    nome: &NomePair,
) -> Result<VerificationReport> {
    let t6 = balancing_parameter(&ts, nome)?;
    let all = [ts[0], ts[1], ts[2], ts[3], ts[4], t6];
    let (lhs, nodes) = beta_integral_lhs(&all, settings, nome)?;
    let mut pairs = Vec::with_capacity(15);
    for j in 0..6 {
        for k in j + 1..6 {
            pairs.push(all[j] * all[k]);
        }
    }
    let rhs = gamma_product(&pairs, nome)?;
    let balancing = (all.iter().product::<C64>() / (nome.p() * nome.q()) - 1.0).norm();

    let mut report = VerificationReport::new(
        "elliptic_beta_integral",
        lhs,
        rhs,
        relative_residual(lhs, rhs, RESIDUAL_FLOOR),
        BETA_INTEGRAL_TOL,
    );
    for (j, t) in all.iter().enumerate() {
        report = report.input(format!("t{}", j + 1), *t);
    }
    Ok(with_nome(report, nome)
        .detail("balancing", balancing)
        .settings(quadrature_settings(nome, settings, nodes)))
}

/// Small-`p` limit of the elliptic beta integral: the integral evaluated by
/// quadrature at `p ∈ {1e-3, 1e-6}` against the closed form at `p = 0`,
/// `∏_j (T/t_j; q)∞ / ∏_{j<k≤5} (t_j t_k; q)∞` with `T = t₁⋯t₅`.
///
/// The main residual is the one at `p = 1e-6`; the detail `residual_p_1e-3`
/// shows the drift.
pub fn rahman_limit_check(
    ts: [C64; 5],
    q: C64,
    settings: &QuadratureSettings,
) -> Result<VerificationReport> {
    let base = NomePair::new(C64::new(0.0, 0.0), q)?;
    let policy = base.policy();
    let total: C64 = ts.iter().product();
    let mut rahman = C64::new(1.0, 0.0);
    for (j, &t) in ts.iter().enumerate() {
        rahman *= qpochhammer_inf(total / t, q, policy)?;
        for &u in &ts[j + 1..] {
            rahman /= qpochhammer_inf(t * u, q, policy)?;
        }
    }

    let mut residuals = Vec::new();
    let mut last = (C64::new(0.0, 0.0), 0);
    for p in [1e-3, 1e-6] {
        let nome = NomePair::new(C64::new(p, 0.0), q)?;
        let t6 = balancing_parameter(&ts, &nome)?;
        let all = [ts[0], ts[1], ts[2], ts[3], ts[4], t6];
        last = beta_integral_lhs(&all, settings, &nome)?;
        residuals.push(relative_residual(last.0, rahman, RESIDUAL_FLOOR));
    }
    let nome = NomePair::new(C64::new(1e-6, 0.0), q)?;
    let mut report = VerificationReport::new("rahman_limit", last.0, rahman, residuals[1], RAHMAN_TOL);
    for (j, t) in ts.iter().enumerate() {
        report = report.input(format!("t{}", j + 1), *t);
    }
    Ok(with_nome(report, &nome)
        .detail("residual_p_1e-3", residuals[0])
        .settings(quadrature_settings(&nome, settings, last.1)))
}

/// Star-triangle relation at the spectators `w`:
///
/// ```text
/// M(s)_w [ D(st; y, x) · (M(t)α)(x) ]  =  D(t; y, w) · M(st)_w [ D(s; y, ·) α ]
/// ```
///
/// The left side is a double integral; the inner `M(t)` is evaluated
/// afresh at every outer node. The report carries the worst spectator.
pub fn star_triangle_residual(
    params: &OperatorParams,
    spectators: &[C64],
    alpha: &SymmetricTestFunction,
    settings: &QuadratureSettings,
    nome: &NomePair,
) -> Result<VerificationReport> {
    params.check_star_triangle(nome)?;
    if spectators.is_empty() {
        return Err(Error::Config("star-triangle check needs at least one spectator".into()));
    }
    let (s, t, y) = (params.s, params.t, params.y);
    let st = s * t;
    for &w in spectators {
        OperatorParams::check_m(s, w)?;
        OperatorParams::check_m(st, w)?;
    }
    let kernels_s = spectators
        .iter()
        .map(|&w| Kernel::new(s, w, nome))
        .collect::<Result<Vec<_>>>()?;
    let kernels_st = spectators
        .iter()
        .map(|&w| Kernel::new(st, w, nome))
        .collect::<Result<Vec<_>>>()?;
    let origin = C64::new(0.0, 0.0);

    let mut inner_nodes = 0usize;
    let inner_max = std::sync::atomic::AtomicUsize::new(0);
    let lhs = circle_integral_vec(
        |x| {
            let inner = apply_m(t, x, alpha, settings, nome)?;
            inner_max.fetch_max(inner.nodes, std::sync::atomic::Ordering::Relaxed);
            let common = d_factor(st, y, x, nome)? * inner.value;
            kernels_s.iter().map(|k| Ok(k.eval(x)? * common)).collect()
        },
        spectators.len(),
        origin,
        1.0,
        settings,
    )?;
    inner_nodes = inner_nodes.max(inner_max.into_inner());
    let rhs = circle_integral_vec(
        |z| {
            let common = d_factor(s, y, z, nome)? * alpha.eval(z, nome)?;
            kernels_st.iter().map(|k| Ok(k.eval(z)? * common)).collect()
        },
        spectators.len(),
        origin,
        1.0,
        settings,
    )?;

    let kappa = nome.kappa();
    let mut worst = (f64::NEG_INFINITY, C64::new(0.0, 0.0), C64::new(0.0, 0.0), 0);
    for (i, &w) in spectators.iter().enumerate() {
        let l = kappa * lhs.value[i];
        let r = d_factor(t, y, w, nome)? * kappa * rhs.value[i];
        let res = relative_residual(l, r, RESIDUAL_FLOOR);
        if res > worst.0 || res.is_nan() {
            worst = (res, l, r, i);
        }
    }
    let nodes = lhs.nodes.max(rhs.nodes).max(inner_nodes);
    let report = VerificationReport::new("star_triangle", worst.1, worst.2, worst.0, STAR_TRIANGLE_TOL)
        .input("s", s)
        .input("t", t)
        .input("y", y)
        .input("w", spectators[worst.3]);
    Ok(with_nome(report, nome).settings(quadrature_settings(nome, settings, nodes)))
}

/// Cauchy deformation for a test function with designated poles
/// `u_m = z₀q^m` (`m = 0..N`) inside the unit circle:
///
/// ```text
/// ∮_𝕋 = ∮_C + 4πiκ Σ_m K(u_m) α̃_m
/// ```
///
/// where `K` is the kernel of `M(t)` at spectator `x`, the integrand is
/// `κ K α`, and `C` keeps every `u_m` outside and every `1/u_m` inside.
/// `∮_C` is realised as the circle `|z| = r` inside all `u_m`, plus
/// `2πi` times the residues at the reciprocal poles (which carry
/// `−K(u_m) α̃_m`) and at the first kernel poles `t x^{±1}` that lie
/// between `r` and the unit circle. The same bookkeeping is repeated with
/// the outer circle `|z| = 1/r`, and the report carries the larger of the two residuals; the details
/// `inner_circle` and `outer_circle` hold both.
pub fn contour_deformation_check(
    alpha: &SymmetricTestFunction,
    t: C64,
    x: C64,
    inner_radius: f64,
    settings: &QuadratureSettings,
    nome: &NomePair,
) -> Result<VerificationReport> {
    OperatorParams::check_m(t, x)?;
    let r = inner_radius;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Constraint(format!("inner radius {r} must lie in (0, 1)")));
    }
    let poles = alpha.poles();
    for (u, _) in &poles {
        if !(r < u.norm() && u.norm() < 1.0) {
            return Err(Error::Constraint(format!(
                "designated pole {u} must lie between the inner circle (r = {r}) and the unit circle"
            )));
        }
    }
    let shrink = nome.p().norm().max(nome.q().norm());
    let first = [t * x, t / x];
    for pole in first {
        if !(pole.norm() * shrink < r) {
            return Err(Error::Constraint(format!(
                "kernel pole sequence from {pole} must be inside the inner circle after its first term"
            )));
        }
        if (pole.norm() / r).ln().abs() < 1e-3 {
            return Err(Error::Constraint(format!("kernel pole {pole} lies on the inner circle")));
        }
    }
    let crossing: Vec<C64> = first.iter().copied().filter(|p| p.norm() > r).collect();
    if crossing.len() == 2 && (crossing[0] - crossing[1]).norm() < 1e-8 {
        return Err(Error::Domain("crossing kernel poles coincide (x² = 1)".into()));
    }
    for pole in &crossing {
        if poles.iter().any(|(u, _)| (u - pole).norm() < 1e-8) {
            return Err(Error::Domain(format!("kernel pole {pole} coincides with a pole of α")));
        }
    }

    let kernel = Kernel::new(t, x, nome)?;
    let integrand = |z: C64| Ok(kernel.eval(z)? * alpha.eval(z, nome)?);
    let kappa = nome.kappa();
    let unit = circle_integral(integrand, 1.0, settings)?;
    let inner = circle_integral(integrand, r, settings)?;
    let outer = circle_integral(integrand, 1.0 / r, settings)?;

    let mut alpha_sum = C64::new(0.0, 0.0);
    for (u, c) in &poles {
        alpha_sum += kernel.eval(*u)? * c;
    }
    let mut kernel_sum = C64::new(0.0, 0.0);
    for pole in &crossing {
        kernel_sum += kernel.residue(*pole)? * alpha.eval(*pole, nome)?;
    }

    let lhs = kappa * unit.value;
    let pinched_in = kappa * inner.value + two_pi_i() * kappa * (kernel_sum - alpha_sum);
    // the annulus between the two circles holds every pole together with
    // its reciprocal, so the same corrections apply from outside
    let pinched_out = kappa * outer.value + two_pi_i() * kappa * (kernel_sum - alpha_sum);
    let four_pi_i_sum = 2.0 * two_pi_i() * kappa * alpha_sum;
    let rhs_in = pinched_in + four_pi_i_sum;
    let rhs_out = pinched_out + four_pi_i_sum;
    let res_in = relative_residual(lhs, rhs_in, RESIDUAL_FLOOR);
    let res_out = relative_residual(lhs, rhs_out, RESIDUAL_FLOOR);
    let (residual, rhs) = if res_out > res_in || res_out.is_nan() {
        (res_out, rhs_out)
    } else {
        (res_in, rhs_in)
    };
    let nodes = unit.nodes.max(inner.nodes).max(outer.nodes);
    let report = VerificationReport::new("cauchy_deformation", lhs, rhs, residual, DEFORMATION_TOL)
        .input("t", t)
        .input("x", x)
        .real_input("inner_radius", r)
        .real_input("poles", poles.len() as f64);
    let report = pole_inputs(report, &poles);
    Ok(with_nome(report, nome)
        .detail("inner_circle", res_in)
        .detail("outer_circle", res_out)
        .settings(quadrature_settings(nome, settings, nodes)))
}

fn pole_inputs(mut report: VerificationReport, poles: &[(C64, C64)]) -> VerificationReport {
    if let Some((u0, _)) = poles.first() {
        report = report.input("z0", *u0);
    }
    for (m, (_, c)) in poles.iter().enumerate() {
        report = report.input(format!("c{m}"), *c);
    }
    report
}

/// Residue-to-matrix reduction for a designated-poles test function with
/// poles `u_m = z₀q^m`, `m = 0..N`. With `a = z₀²` and `k = t²a`, compares
///
/// ```text
/// (i)  Σ_m 4πiκ λ_m Γ(k q^{N+m}) Γ((k/a) q^{N−m}) Γ(a⁻¹ q^{−N−m})
///          / (Γ(k/a) Γ(a q^{2m}) Γ(a⁻¹ q^{−2m})) · α̃_m,
///      λ_m = lim_{ε→0} (1 − ε) Γ(ε q^{m−N})
/// (ii) Γ(k)/Γ(a) · Σ_m M_Nm(a, k) q^{N(N+1) − m(m+1)} α̃_m
/// ```
///
/// The detail `exponent_m_m_minus_1` is the residual obtained with the
/// exponent `N(N+1) − m(m−1)` in (ii) instead.
pub fn residue_matrix_reduction_check(
    alpha: &SymmetricTestFunction,
    t: C64,
    n: usize,
    nome: &NomePair,
) -> Result<VerificationReport> {
    let SymmetricTestFunction::DesignatedPoles { z0, q: alpha_q, .. } = alpha else {
        return Err(Error::Domain("residue reduction needs a designated-poles test function".into()));
    };
    let (z0, alpha_q) = (C64::new(z0[0], z0[1]), C64::new(alpha_q[0], alpha_q[1]));
    let q = nome.q();
    if (alpha_q - q).norm() > 1e-15 * q.norm() {
        return Err(Error::Domain(format!(
            "test-function poles are spaced by {alpha_q}, the nome has q = {q}"
        )));
    }
    let residues: Vec<C64> = alpha.poles().into_iter().map(|(_, c)| c).collect();
    if residues.len() < n + 1 {
        return Err(Error::Domain(format!(
            "test function declares {} poles, N = {n} needs {}",
            residues.len(),
            n + 1
        )));
    }
    let a = z0 * z0;
    let k = t * t * a;
    let p = nome.p();
    let policy = nome.policy();
    let ni = n as i32;

    let four_pi_i_kappa = 2.0 * two_pi_i() * nome.kappa();
    let gamma_ka = elliptic_gamma(k / a, nome)?;
    let mut residue_sum = C64::new(0.0, 0.0);
    for (m, alpha_m) in residues.iter().take(n + 1).enumerate() {
        let mi = m as i32;
        // λ_m = gamma_residue_constant / ∏_{j=1}^{N−m} θ(q^{−j}; p)
        let mut lambda = gamma_residue_constant(nome);
        for j in 1..=(ni - mi) {
            let factor = theta(q.powi(-j), p, policy)?;
            if factor.norm() < policy.pole_guard {
                return Err(Error::Degenerate {
                    what: format!("θ(q^-{j}; p)"),
                    modulus: factor.norm(),
                });
            }
            lambda /= factor;
        }
        let num = gamma_product(
            &[k * q.powi(ni + mi), (k / a) * q.powi(ni - mi), q.powi(-ni - mi) / a],
            nome,
        )?;
        let den = gamma_ka * gamma_product(&[a * q.powi(2 * mi), q.powi(-2 * mi) / a], nome)?;
        residue_sum += four_pi_i_kappa * lambda * num / den * alpha_m;
    }

    let prefactor = elliptic_gamma(k, nome)? / elliptic_gamma(a, nome)?;
    let matrix_sum = |exponent: &dyn Fn(i32) -> i32| -> Result<C64> {
        let mut sum = C64::new(0.0, 0.0);
        for (m, alpha_m) in residues.iter().take(n + 1).enumerate() {
            sum += m_entry(n, m, a, k, nome)? * q.powi(exponent(m as i32)) * alpha_m;
        }
        Ok(prefactor * sum)
    };
    let matrix = matrix_sum(&|m| ni * (ni + 1) - m * (m + 1))?;
    let displayed = matrix_sum(&|m| ni * (ni + 1) - m * (m - 1))?;

    // θ(q)_n has to be invertible for the matrix entries to exist
    theta_pochhammer_checked(q, n, nome, "q")?;

    let report = VerificationReport::new(
        "residue_reduction",
        residue_sum,
        matrix,
        relative_residual(residue_sum, matrix, RESIDUAL_FLOOR),
        REDUCTION_TOL,
    )
    .input("z0", z0)
    .input("t", t)
    .input("a", a)
    .input("k", k)
    .real_input("N", n as f64);
    let report = residues
        .iter()
        .take(n + 1)
        .enumerate()
        .fold(report, |r, (m, c)| r.input(format!("c{m}"), *c));
    Ok(with_nome(report, nome)
        .detail(
            "exponent_m_m_minus_1",
            relative_residual(residue_sum, displayed, RESIDUAL_FLOOR),
        )
        .settings(CheckSettings {
            matrix_size: Some(n + 1),
            ..CheckSettings::from_nome(nome)
        }))
}

/// `[M(t)f](x)` for `t = ±q^{−N/2}`, where the integral collapses to the
/// finite sum
///
/// ```text
/// Γ(x^{−2}) / Γ(t^{−2}x^{−2}) · Σ_{k=0}^{N} θ((tx)² q^{2k}) / θ((tx)²)
///     · θ(t², (tx)²)_k / θ(q, q x²)_k · f(t q^k x) / (t^{4k} x^{2k} q^{k²})
/// ```
///
/// ```
/// use elliptic_bailey::contour::finite_difference_m;
/// use elliptic_bailey::{NomePair, C64};
///
/// let nome = NomePair::real(0.05, 0.5)?;
/// let x = C64::from_polar(1.0, 0.7);
/// let f = |z: C64| Ok(z * z + 1.0);
/// assert_eq!(finite_difference_m(0, 1, x, f, &nome)?, x * x + 1.0);
/// # Ok::<(), elliptic_bailey::Error>(())
/// ```
pub fn finite_difference_m<F>(n: usize, sign: i32, x: C64, f: F, nome: &NomePair) -> Result<C64>
where
    F: Fn(C64) -> Result<C64>,
{
    if sign != 1 && sign != -1 {
        return Err(Error::Domain(format!("sign must be ±1, got {sign}")));
    }
    if x == C64::new(0.0, 0.0) {
        return Err(Error::Domain("x must be nonzero".into()));
    }
    let (p, q, policy) = (nome.p(), nome.q(), nome.policy());
    let t = if n == 0 {
        C64::new(sign as f64, 0.0)
    } else {
        sign as f64 * q.powf(-(n as f64) / 2.0)
    };
    if n == 0 {
        return f(t * x);
    }
    let tx2 = t * t * x * x;
    let prefactor = elliptic_gamma(1.0 / (x * x), nome)? / elliptic_gamma(1.0 / tx2, nome)?;
    let theta_tx2 = theta(tx2, p, policy)?;
    if theta_tx2.norm() < policy.pole_guard {
        return Err(Error::Degenerate {
            what: "θ((tx)²; p)".into(),
            modulus: theta_tx2.norm(),
        });
    }
    let one = C64::new(1.0, 0.0);
    let (mut num, mut den) = (one, one);
    let mut sum = C64::new(0.0, 0.0);
    for k in 0..=n {
        let ki = k as i32;
        if k > 0 {
            let shift = q.powi(ki - 1);
            num *= theta(t * t * shift, p, policy)? * theta(tx2 * shift, p, policy)?;
            let d = theta(q * shift, p, policy)? * theta(q * x * x * shift, p, policy)?;
            if d.norm() < policy.pole_guard {
                return Err(Error::Degenerate {
                    what: format!("θ(q, q x²; p)_{k}"),
                    modulus: d.norm(),
                });
            }
            den *= d;
        }
        let weight = theta(tx2 * q.powi(2 * ki), p, policy)? / theta_tx2 * num / den;
        let scale = t.powi(4 * ki) * x.powi(2 * ki) * q.powi(ki * ki);
        sum += weight * f(t * q.powi(ki) * x)? / scale;
    }
    Ok(prefactor * sum)
}

/// Richardson extrapolation of `ε ↦ [M(t_ε)α](x)` at `ε = 0` from the
/// steps in [`FD_EPSILONS`] (halving), assuming an expansion in powers of ε.
fn richardson(values: &[C64; 3]) -> C64 {
    let r1 = 2.0 * values[1] - values[0];
    let r2 = 2.0 * values[2] - values[1];
    (4.0 * r2 - r1) / 3.0
}

/// `N = 1` finite-difference reduction against a regularised quadrature
/// oracle: `[M(t)α](x)` is evaluated by analytic continuation (deformed
/// circle plus explicit residues) at `t = ±q^{−1/2}(1+ε)^{1/2}` for the
/// steps in [`FD_EPSILONS`] and extrapolated to `ε = 0`.
pub fn finite_difference_oracle(
    sign: i32,
    x: C64,
    alpha: &SymmetricTestFunction,
    settings: &QuadratureSettings,
    nome: &NomePair,
) -> Result<VerificationReport> {
    let exact = finite_difference_m(1, sign, x, |z| alpha.eval(z, nome), nome)?;
    let t0 = sign as f64 * nome.q().powf(-0.5);
    let mut values = [C64::new(0.0, 0.0); 3];
    let mut nodes = 0;
    for (v, eps) in values.iter_mut().zip(FD_EPSILONS) {
        let t = t0 * (1.0 + eps).sqrt();
        let q = apply_m_continued(t, x, alpha, settings, nome)?;
        nodes = nodes.max(q.nodes);
        *v = q.value;
    }
    let oracle = richardson(&values);
    let report = VerificationReport::new(
        "finite_difference",
        exact,
        oracle,
        relative_residual(exact, oracle, RESIDUAL_FLOOR),
        FINITE_DIFFERENCE_TOL,
    )
    .real_input("sign", sign as f64)
    .input("x", x)
    .real_input("N", 1.0);
    Ok(with_nome(report, nome)
        .detail(
            "unextrapolated",
            relative_residual(exact, values[2], RESIDUAL_FLOOR),
        )
        .settings(quadrature_settings(nome, settings, nodes)))
}

/// Regularised inversion experiment: `[M(s) M(t) α](w)` with
/// `s = (1 − δ)/t` for the given `δ`, compared with `α(w)`.
///
/// The outer operator is continued past `|s| = 1` with explicit residues;
/// its poles approach the boundary of the region where the inner transform
/// can be evaluated as `δ → 0`. The main residual is that of the polynomial
/// extrapolation through all `δ` to `δ = 0`; the details hold the residual
/// at each `δ`.
pub fn m_inversion_experiment(
    t: C64,
    w: C64,
    alpha: &SymmetricTestFunction,
    deltas: &[f64],
    settings: &QuadratureSettings,
    nome: &NomePair,
) -> Result<VerificationReport> {
    if !(t.norm() < 1.0) || t == C64::new(0.0, 0.0) {
        return Err(Error::Constraint(format!("0 < |t| < 1 violated ({t})")));
    }
    if deltas.is_empty() || deltas.iter().any(|d| !(*d > 0.0 && *d < 1.0)) {
        return Err(Error::Config("deltas must be nonempty and lie in (0, 1)".into()));
    }
    let target = alpha.eval(w, nome)?;
    let (lo, hi) = alpha.analyticity_annulus();
    let annulus = (t.norm().max(lo), (1.0 / t.norm()).min(hi));
    let inner = |x: C64| Ok(apply_m(t, x, alpha, settings, nome)?.value);
    let mut report_values = Vec::new();
    let mut nodes = 0;
    for &delta in deltas {
        let s = (1.0 - delta) / t;
        let q = m_continued_with(s, w, inner, annulus, settings, nome)?;
        nodes = nodes.max(q.nodes);
        report_values.push((delta, q.value));
    }
    let (xs, vs): (Vec<f64>, Vec<C64>) = report_values.iter().copied().unzip();
    let limit = neville_at_zero(&xs, &vs);
    let mut report = VerificationReport::new(
        "m_inversion",
        limit,
        target,
        relative_residual(limit, target, RESIDUAL_FLOOR),
        INVERSION_EXPERIMENT_TOL,
    )
    .input("t", t)
    .input("w", w);
    for (delta, value) in &report_values {
        report = report.detail(format!("delta_{delta}"), relative_residual(*value, target, RESIDUAL_FLOOR));
    }
    Ok(with_nome(report, nome).settings(quadrature_settings(nome, settings, nodes)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn beta_integral_reference_configuration() {
        let nome = NomePair::real(0.1, 0.15).unwrap();
        // with these five parameters t6 = pq/∏ has modulus 3.57
        let ts = [c(0.3, 0.0), c(0.4, 0.0), C64::from_polar(0.2, 0.5), c(0.5, 0.0), c(0.35, 0.0)];
        let err = elliptic_beta_integral(ts, &QuadratureSettings::default(), &nome).unwrap_err();
        assert!(matches!(err, Error::Constraint(_)));
        let ts = [c(0.5, 0.0), c(0.6, 0.0), C64::from_polar(0.55, 0.5), c(0.7, 0.0), c(0.45, 0.0)];
        let r = elliptic_beta_integral(ts, &QuadratureSettings::default(), &nome).unwrap();
        assert!(r.pass, "{}", r.residual);
        assert!(r.detail_value("balancing").unwrap() < 1e-14);
    }

    #[test]
    fn beta_integral_rejects_large_parameters() {
        let nome = NomePair::real(0.1, 0.15).unwrap();
        let ts = [c(1.1, 0.0), c(0.4, 0.0), c(0.2, 0.0), c(0.5, 0.0), c(0.35, 0.0)];
        let err = elliptic_beta_integral(ts, &QuadratureSettings::default(), &nome).unwrap_err();
        assert!(matches!(err, Error::Constraint(_)));
        // t6 = pq/∏ grows past 1 when the product is small
        let ts = [c(0.01, 0.0), c(0.02, 0.0), c(0.05, 0.0), c(0.1, 0.0), c(0.1, 0.0)];
        assert!(elliptic_beta_integral(ts, &QuadratureSettings::default(), &nome).is_err());
    }

    #[test]
    fn rahman_limit_is_approached() {
        let ts = [c(0.3, 0.1), c(0.4, 0.0), c(0.2, -0.2), c(0.5, 0.0), c(0.35, 0.0)];
        let r = rahman_limit_check(ts, c(0.3, 0.0), &QuadratureSettings::default()).unwrap();
        assert!(r.pass, "{}", r.residual);
        assert!(r.residual < r.detail_value("residual_p_1e-3").unwrap());
    }

    fn star_params() -> (OperatorParams, NomePair, Vec<C64>) {
        let params = OperatorParams {
            t: C64::from_polar(0.45, -0.5),
            s: C64::from_polar(0.5, 0.3),
            w: c(1.0, 0.0),
            x: c(1.0, 0.0),
            y: C64::from_polar(0.9, 0.2),
        };
        let spectators = vec![C64::from_polar(1.0, 0.4), C64::from_polar(0.9, 1.3), c(1.05, 0.0)];
        (params, NomePair::real(0.1, 0.2).unwrap(), spectators)
    }

    #[test]
    fn star_triangle_holds() {
        let (params, nome, spectators) = star_params();
        for alpha in [SymmetricTestFunction::one(), SymmetricTestFunction::z_plus_inverse()] {
            let r = star_triangle_residual(&params, &spectators, &alpha, &QuadratureSettings::default(), &nome)
                .unwrap();
            assert!(r.pass, "{}", r.residual);
        }
    }

    #[test]
    fn star_triangle_detects_a_wrong_side() {
        // s and t exchanged in D(st; y, ·) is harmless, but using D(t; y, ·)
        // on the right is not: perturb y on the left only via the spectator set
        let (mut params, nome, spectators) = star_params();
        params.y = C64::from_polar(0.9, 0.2);
        let good = star_triangle_residual(
            &params,
            &spectators,
            &SymmetricTestFunction::one(),
            &QuadratureSettings::default(),
            &nome,
        )
        .unwrap();
        params.s = C64::from_polar(1.2, 0.3);
        let err = star_triangle_residual(
            &params,
            &spectators,
            &SymmetricTestFunction::one(),
            &QuadratureSettings::default(),
            &nome,
        )
        .unwrap_err();
        assert!(good.pass);
        assert!(matches!(err, Error::Constraint(_)));
    }

    fn designated(n: usize, z0: f64, q: f64) -> SymmetricTestFunction {
        let coeffs: Vec<C64> = (0..=n).map(|m| c(1.0 + 0.3 * m as f64, 0.2 - 0.1 * m as f64)).collect();
        SymmetricTestFunction::designated_poles(c(z0, 0.0), c(q, 0.0), &coeffs).unwrap()
    }

    #[test]
    fn deformation_single_pole_pair() {
        let nome = NomePair::real(0.1, 0.5).unwrap();
        let alpha = designated(0, 0.7, 0.5);
        let r = contour_deformation_check(
            &alpha,
            c(0.2, 0.05),
            C64::from_polar(1.0, 0.8),
            0.5,
            &QuadratureSettings::default(),
            &nome,
        )
        .unwrap();
        assert!(r.residual < 1e-9, "{r:?}");
    }

    #[test]
    fn deformation_reference_configuration() {
        // kernel poles 0.3 x^{±1} sit between the inner circle and the α poles
        let nome = NomePair::real(0.1, 0.5).unwrap();
        let alpha = designated(2, 0.7, 0.5);
        let r = contour_deformation_check(
            &alpha,
            c(0.3, 0.0),
            C64::from_polar(1.0, 0.8),
            0.16,
            &QuadratureSettings::default(),
            &nome,
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn deformation_without_poles_is_cauchy() {
        let nome = NomePair::real(0.1, 0.5).unwrap();
        let r = contour_deformation_check(
            &SymmetricTestFunction::z_plus_inverse(),
            c(0.2, 0.0),
            C64::from_polar(1.0, 0.8),
            0.5,
            &QuadratureSettings::default(),
            &nome,
        )
        .unwrap();
        assert!(r.residual < 1e-11, "{}", r.residual);
    }

    #[test]
    fn deformation_rejects_misordered_radius() {
        let nome = NomePair::real(0.1, 0.5).unwrap();
        let alpha = designated(2, 0.7, 0.5);
        let err = contour_deformation_check(
            &alpha,
            c(0.3, 0.0),
            c(1.0, 0.0),
            0.5,
            &QuadratureSettings::default(),
            &nome,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Constraint(_)));
    }

    #[test]
    fn reduction_reference_configuration() {
        let nome = NomePair::real(0.1, 0.4).unwrap();
        let (a, k) = (0.49f64, 0.3f64);
        let alpha = designated(3, a.sqrt(), 0.4);
        let t = c((k / a).sqrt(), 0.0);
        let r = residue_matrix_reduction_check(&alpha, t, 3, &nome).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.detail_value("exponent_m_m_minus_1").unwrap() > 1e-3);
    }

    #[test]
    fn reduction_scalar_case() {
        let nome = NomePair::new(c(0.08, 0.02), c(0.45, 0.1)).unwrap();
        let coeffs = [c(0.7, -0.2)];
        let alpha = SymmetricTestFunction::designated_poles(C64::from_polar(0.6, 0.3), nome.q(), &coeffs).unwrap();
        let r = residue_matrix_reduction_check(&alpha, C64::from_polar(0.8, -0.2), 0, &nome).unwrap();
        assert!(r.residual < 1e-11, "{}", r.residual);
    }

    #[test]
    fn reduction_needs_matching_spacing() {
        let nome = NomePair::real(0.1, 0.4).unwrap();
        let alpha = designated(3, 0.7, 0.5);
        assert!(residue_matrix_reduction_check(&alpha, c(0.7, 0.0), 3, &nome).is_err());
    }

    #[test]
    fn finite_difference_trivial_orders() {
        let nome = NomePair::real(0.05, 0.5).unwrap();
        let x = C64::from_polar(1.0, 0.7);
        let f = |z: C64| Ok(z + 1.0 / z + 0.3 * z * z);
        assert_eq!(finite_difference_m(0, 1, x, f, &nome).unwrap(), f(x).unwrap());
        assert_eq!(finite_difference_m(0, -1, x, f, &nome).unwrap(), f(-x).unwrap());
        assert!(finite_difference_m(1, 0, x, f, &nome).is_err());
    }

    #[test]
    fn finite_difference_matches_oracle() {
        let nome = NomePair::real(0.05, 0.5).unwrap();
        let x = C64::from_polar(1.0, 0.7);
        let alpha = SymmetricTestFunction::laurent(&[c(0.0, 0.0), c(1.0, 0.0), c(0.3, 0.0)]);
        for sign in [1, -1] {
            let r = finite_difference_oracle(sign, x, &alpha, &QuadratureSettings::default(), &nome).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(r.residual < r.detail_value("unextrapolated").unwrap());
        }
    }

    #[test]
    fn inversion_experiment_extrapolates_to_identity() {
        let nome = NomePair::real(0.1, 0.2).unwrap();
        let r = m_inversion_experiment(
            C64::from_polar(0.5, 0.3),
            C64::from_polar(1.0, 0.7),
            &SymmetricTestFunction::one(),
            &[0.2, 0.1, 0.05, 0.025],
            &QuadratureSettings::default(),
            &nome,
        )
        .unwrap();
        assert!(r.residual < 1e-5, "{r:?}");
        assert!(r.residual < r.detail_value("delta_0.025").unwrap());
    }

    #[test]
    fn richardson_removes_quadratic_error() {
        let f = |e: f64| c(1.0 + 3.0 * e - 2.0 * e * e, 0.5 * e);
        let values = FD_EPSILONS.map(f);
        assert!((richardson(&values) - c(1.0, 0.0)).norm() < 1e-14);
    }
}
