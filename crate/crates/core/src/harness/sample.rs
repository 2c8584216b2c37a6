use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::config::{BcMode, CampaignConfig, ComplexArg, Domain, Identity, TestFunctionChoice};
use crate::bailey::{verify_coxeter, verify_inversions, verify_matrix_bailey, DiscreteParams};
use crate::contour::{
    contour_deformation_check, elliptic_beta_integral, finite_difference_m, finite_difference_oracle,
    residue_matrix_reduction_check, star_triangle_residual, OperatorParams, SymmetricTestFunction,
    FINITE_DIFFERENCE_TOL,
};
use crate::report::{relative_residual, RESIDUAL_FLOOR};
use crate::special::{lattice_distance, verify_special_functions, NomePair};
use crate::{Error, Result, VerificationReport, C64};

/// Smallest admissible [`lattice_distance`] of a sampled gamma argument.
pub const LATTICE_MARGIN: f64 = 1e-2;

/// Smallest admissible logarithmic gap between a pole and a contour.
pub const CONTOUR_MARGIN: f64 = 0.05;

/// Largest admissible modulus of poles that must stay inside the unit
/// circle in the star-triangle relation.
const STAR_TRIANGLE_POLE_BOUND: f64 = 0.85;

/// Ratio of the inner deformation radius to the innermost designated pole.
const INNER_RADIUS_RATIO: f64 = 0.9;

struct Sampler<'a> {
    rng: &'a mut ChaCha8Rng,
    domain: Domain,
    config: &'a CampaignConfig,
}

impl Sampler<'_> {
    fn uniform(&mut self, range: [f64; 2]) -> f64 {
        if range[0] == range[1] {
            range[0]
        } else {
            self.rng.random_range(range[0]..=range[1])
        }
    }

    fn polar(&mut self, modulus: [f64; 2], phase: f64) -> C64 {
        let r = self.uniform(modulus);
        let arg = self.uniform([-phase, phase]);
        C64::from_polar(r, arg)
    }

    /// `fixed` if given, otherwise a fresh polar sample. The sample is drawn
    /// in both cases so that fixing one parameter leaves the others' draws
    /// unchanged.
    fn param(&mut self, fixed: Option<ComplexArg>, modulus: [f64; 2], phase: f64) -> C64 {
        let sample = self.polar(modulus, phase);
        fixed.map_or(sample, |f| f.0)
    }

    fn nome(&mut self) -> Result<NomePair> {
        let (d, fixed) = (self.domain, &self.config.fixed);
        let (pf, qf) = (fixed.p, fixed.q);
        let p = self.param(pf, d.p, d.nome_phase);
        let q = self.param(qf, d.q, d.nome_phase);
        NomePair::new(p, q)
    }

    fn n(&mut self) -> usize {
        let (lo, hi) = self.config.n_range();
        if lo == hi {
            lo
        } else {
            self.rng.random_range(lo..=hi)
        }
    }

    fn sign(&mut self) -> i32 {
        if self.rng.random_bool(0.5) {
            1
        } else {
            -1
        }
    }

    fn coefficients(&mut self, count: usize) -> Vec<C64> {
        (0..count).map(|_| self.polar([0.5, 1.5], PI)).collect()
    }
}

fn require_off_lattice(args: &[C64], nome: &NomePair) -> Result<()> {
    for &u in args {
        let d = lattice_distance(u, nome);
        if d < LATTICE_MARGIN {
            return Err(Error::Constraint(format!(
                "argument {u} is within {d:e} of the gamma pole/zero lattice"
            )));
        }
    }
    Ok(())
}

fn require(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Constraint(what()))
    }
}

/// Statically checks the fixed parameters of a campaign; a failure here
/// means no draw can ever be admissible.
pub(crate) fn validate_fixed(config: &CampaignConfig) -> std::result::Result<(), String> {
    let f = &config.fixed;
    let inside = |name: &str, v: Option<ComplexArg>| -> std::result::Result<(), String> {
        match v {
            Some(ComplexArg(z)) if !(z.norm() < 1.0) || z == C64::new(0.0, 0.0) => Err(format!(
                "fixed {name} = {z} violates 0 < |{name}| < 1 (|{name}| = {})",
                z.norm()
            )),
            _ => Ok(()),
        }
    };
    let nonzero = |name: &str, v: Option<ComplexArg>| -> std::result::Result<(), String> {
        match v {
            Some(ComplexArg(z)) if z == C64::new(0.0, 0.0) || !(z.re.is_finite() && z.im.is_finite()) => {
                Err(format!("fixed {name} = {z} must be finite and nonzero"))
            }
            _ => Ok(()),
        }
    };
    for (name, v) in [("p", f.p), ("q", f.q)] {
        if let Some(ComplexArg(z)) = v {
            if !(z.norm() < 1.0) {
                return Err(format!("fixed {name} = {z} is outside the unit disc"));
            }
        }
    }
    match config.identity {
        Identity::SpecialFunctions => nonzero("z", f.z),
        Identity::BetaIntegral => Ok(()),
        Identity::MatrixBailey | Identity::Inversions | Identity::Coxeter => {
            for (name, v) in [("a", f.a), ("k", f.k), ("t_tilde", f.t_tilde), ("y", f.y)] {
                nonzero(name, v)?;
            }
            Ok(())
        }
        Identity::StarTriangle => {
            inside("t", f.t)?;
            inside("s", f.s)?;
            nonzero("y", f.y)
        }
        Identity::CauchyDeformation => {
            inside("t", f.t)?;
            inside("z0", f.z0)?;
            nonzero("x", f.x)
        }
        Identity::ResidueReduction => {
            inside("z0", f.z0)?;
            nonzero("t", f.t)
        }
        Identity::FiniteDifference => nonzero("x", f.x),
    }
}

/// Draws one parameter set for the campaign's identity and runs the check.
/// Inadmissible draws come back as inadmissible errors.
pub(crate) fn attempt(config: &CampaignConfig, rng: &mut ChaCha8Rng) -> Result<VerificationReport> {
    let mut s = Sampler {
        rng,
        domain: config.domain(),
        config,
    };
    let d = s.domain;
    let fixed = config.fixed.clone();
    let settings = &config.quadrature;
    match config.identity {
        Identity::SpecialFunctions => {
            let nome = s.nome()?;
            let z = s.param(fixed.z, d.modulus, d.phase);
            let (p, q) = (nome.p(), nome.q());
            let mut args = vec![z, p * q / z, q * z, p * z, z * z, 1.0 / (z * z)];
            for shift in [C64::new(1.0, 0.0), q.sqrt(), p.sqrt(), nome.sqrt_pq()] {
                args.push(shift * z);
                args.push(-shift * z);
            }
            require_off_lattice(&args, &nome)?;
            verify_special_functions(z, &nome)
        }
        Identity::BetaIntegral => {
            let nome = s.nome()?;
            let ts: [C64; 5] = std::array::from_fn(|_| s.polar(d.modulus, d.phase));
            let t6 = nome.p() * nome.q() / ts.iter().product::<C64>();
            require(t6.norm() <= d.modulus[1], || format!("|t6| = {} exceeds the modulus range", t6.norm()))?;
            let all = [ts[0], ts[1], ts[2], ts[3], ts[4], t6];
            let mut pairs = Vec::new();
            for j in 0..6 {
                for k in j + 1..6 {
                    pairs.push(all[j] * all[k]);
                }
            }
            require_off_lattice(&pairs, &nome)?;
            elliptic_beta_integral(ts, settings, &nome)
        }
        Identity::MatrixBailey | Identity::Inversions | Identity::Coxeter => {
            let nome = s.nome()?;
            let n = s.n();
            let a = s.param(fixed.a, d.modulus, d.phase);
            let k = s.param(fixed.k, d.modulus, d.phase);
            let t_tilde = s.param(fixed.t_tilde, d.modulus, d.phase);
            let y = s.param(fixed.y, d.y_modulus, PI);
            let params = match config.bc_mode {
                BcMode::FromY => DiscreteParams::from_y(a, k, t_tilde, y, n, &nome)?,
                BcMode::Free => {
                    let b = y;
                    let c = nome.q() * a * t_tilde / (k * b);
                    DiscreteParams::with_bc(a, k, t_tilde, b, c, n, &nome)?
                }
            };
            match config.identity {
                Identity::MatrixBailey => verify_matrix_bailey(&params),
                Identity::Inversions => verify_inversions(&params),
                _ => verify_coxeter(&params),
            }
        }
        Identity::StarTriangle => {
            let nome = s.nome()?;
            let t = s.param(fixed.t, d.modulus, d.phase);
            let s_op = s.param(fixed.s, d.modulus, d.phase);
            let y = s.param(fixed.y, d.y_modulus, PI);
            let spectators: Vec<C64> = (0..config.spectators).map(|_| s.polar([0.9, 1.1], PI)).collect();
            let params = OperatorParams {
                t,
                s: s_op,
                w: spectators[0],
                x: C64::new(1.0, 0.0),
                y,
            };
            params.check_star_triangle(&nome)?;
            let base = nome.sqrt_pq() / (s_op * t);
            let mut bounded = vec![base * y, base / y];
            for &w in &spectators {
                bounded.extend([s_op * w, s_op / w, s_op * t * w, s_op * t / w]);
            }
            for v in bounded {
                require(v.norm() <= STAR_TRIANGLE_POLE_BOUND, || {
                    format!("pole at modulus {} too close to the unit circle", v.norm())
                })?;
            }
            let alpha = match config.test_function {
                TestFunctionChoice::One => SymmetricTestFunction::one(),
                TestFunctionChoice::ZPlusInverse => SymmetricTestFunction::z_plus_inverse(),
            };
            star_triangle_residual(&params, &spectators, &alpha, settings, &nome)
        }
        Identity::CauchyDeformation => {
            let nome = s.nome()?;
            let n = s.n();
            let z0 = s.param(fixed.z0, d.y_modulus, d.phase);
            let t = s.param(fixed.t, d.modulus, d.phase);
            let x = s.param(fixed.x, [1.0, 1.0], PI);
            let coeffs = s.coefficients(n + 1);
            let alpha = SymmetricTestFunction::designated_poles(z0, nome.q(), &coeffs)?;
            let innermost = alpha.poles().iter().map(|(u, _)| u.norm()).fold(f64::INFINITY, f64::min);
            let radius = INNER_RADIUS_RATIO * innermost;
            let shrink = nome.p().norm().max(nome.q().norm());
            require((x * x - 1.0).norm() > CONTOUR_MARGIN, || "x² too close to 1".into())?;
            for pole in [t * x, t / x] {
                require((pole.norm() * shrink / radius).ln() < -CONTOUR_MARGIN, || {
                    format!("kernel pole sequence from {pole} reaches the inner circle")
                })?;
                require((pole.norm() / radius).ln().abs() > CONTOUR_MARGIN, || {
                    format!("kernel pole {pole} too close to the inner circle")
                })?;
            }
            contour_deformation_check(&alpha, t, x, radius, settings, &nome)
        }
        Identity::ResidueReduction => {
            let nome = s.nome()?;
            let n = s.n();
            let z0 = s.param(fixed.z0, d.y_modulus, d.phase);
            let t = s.param(fixed.t, d.modulus, d.phase);
            let coeffs = s.coefficients(n + 1);
            let alpha = SymmetricTestFunction::designated_poles(z0, nome.q(), &coeffs)?;
            let (a, q) = (z0 * z0, nome.q());
            let k = t * t * a;
            let ni = n as i32;
            let mut args = vec![a, k, k / a];
            for m in 0..=ni {
                args.extend([
                    k * q.powi(ni + m),
                    (k / a) * q.powi(ni - m),
                    q.powi(-ni - m) / a,
                    a * q.powi(2 * m),
                    q.powi(-2 * m) / a,
                ]);
            }
            require_off_lattice(&args, &nome)?;
            residue_matrix_reduction_check(&alpha, t, n, &nome)
        }
        Identity::FiniteDifference => {
            let nome = s.nome()?;
            let sign = s.sign();
            let x = s.param(fixed.x, [1.0, 1.0], d.phase);
            let coeffs: Vec<C64> = (0..3).map(|_| s.polar(d.modulus, PI)).collect();
            require((x * x - 1.0).norm() > 0.1, || "x² too close to 1".into())?;
            let alpha = SymmetricTestFunction::laurent(&coeffs);
            if s.n() == 0 {
                let lhs = finite_difference_m(0, sign, x, |z| alpha.eval(z, &nome), &nome)?;
                let rhs = alpha.eval(sign as f64 * x, &nome)?;
                let residual = relative_residual(lhs, rhs, RESIDUAL_FLOOR);
                return Ok(VerificationReport::new("finite_difference", lhs, rhs, residual, FINITE_DIFFERENCE_TOL)
                    .real_input("sign", sign as f64)
                    .input("x", x)
                    .real_input("N", 0.0)
                    .input("p", nome.p())
                    .input("q", nome.q()));
            }
            finite_difference_oracle(sign, x, &alpha, settings, &nome)
        }
    }
}
