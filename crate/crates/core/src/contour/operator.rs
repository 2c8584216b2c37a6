use serde::{Deserialize, Serialize};

use super::{circle_integral, Quadrature, QuadratureSettings, SymmetricTestFunction};
use crate::special::{elliptic_gamma, gamma_product, gamma_residue_constant, theta, NomePair};
use crate::{Error, Result, C64};

/// Operator and spectator parameters of the integral transforms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorParams {
    #[serde(with = "crate::report::hex::complex")]
    pub t: C64,
    #[serde(with = "crate::report::hex::complex")]
    pub s: C64,
    #[serde(with = "crate::report::hex::complex")]
    pub w: C64,
    #[serde(with = "crate::report::hex::complex")]
    pub x: C64,
    #[serde(with = "crate::report::hex::complex")]
    pub y: C64,
}

impl OperatorParams {
    /// `|t w^{±1}| < 1`: the kernel of `M(t)` at spectator `w` has no poles on
    /// the unit circle and the pole sequences are separated by it.
    pub fn check_m(t: C64, w: C64) -> Result<()> {
        if w == C64::new(0.0, 0.0) {
            return Err(Error::Constraint("spectator w must be nonzero".into()));
        }
        for (name, v) in [("t w", t * w), ("t / w", t / w)] {
            if !(v.norm() < 1.0) {
                return Err(Error::Constraint(format!("|{name}| = {} must be below 1", v.norm())));
            }
        }
        Ok(())
    }

    /// `|t|, |s| < 1` and `|√(pq) s^{−1} t^{−1} y^{±1}| < 1`.
    pub fn check_star_triangle(&self, nome: &NomePair) -> Result<()> {
        for (name, v) in [("t", self.t), ("s", self.s)] {
            if !(v.norm() < 1.0) || v == C64::new(0.0, 0.0) {
                return Err(Error::Constraint(format!("0 < |{name}| < 1 violated ({v})")));
            }
        }
        if self.y == C64::new(0.0, 0.0) {
            return Err(Error::Constraint("y must be nonzero".into()));
        }
        let base = nome.sqrt_pq() / (self.s * self.t);
        for v in [base * self.y, base / self.y] {
            if !(v.norm() < 1.0) {
                return Err(Error::Constraint(format!(
                    "|√(pq) s⁻¹ t⁻¹ y^±1| = {} must be below 1",
                    v.norm()
                )));
            }
        }
        Ok(())
    }
}

/// `1/Γ(z², z^{−2}) = θ(z²; q) θ(z^{−2}; p)`.
pub(crate) fn inverse_gamma_pair(z2: C64, nome: &NomePair) -> Result<C64> {
    let policy = nome.policy();
    Ok(theta(z2, nome.q(), policy)? * theta(1.0 / z2, nome.p(), policy)?)
}

/// The kernel `Γ(t w^{±1} z^{±1}) / Γ(t², z^{±2})` of `M(t)` at spectator
/// `w`, with `1/Γ(t²)` computed once.
pub(crate) struct Kernel<'a> {
    t: C64,
    w: C64,
    inv_gamma_t2: C64,
    nome: &'a NomePair,
}

impl<'a> Kernel<'a> {
    pub(crate) fn new(t: C64, w: C64, nome: &'a NomePair) -> Result<Self> {
        Ok(Kernel {
            t,
            w,
            inv_gamma_t2: 1.0 / elliptic_gamma(t * t, nome)?,
            nome,
        })
    }

    pub(crate) fn eval(&self, z: C64) -> Result<C64> {
        let (t, w) = (self.t, self.w);
        let g = gamma_product(&[t * w * z, t * w / z, t * z / w, t / (w * z)], self.nome)?;
        Ok(g * self.inv_gamma_t2 * inverse_gamma_pair(z * z, self.nome)?)
    }

    /// Residue of `kernel(z)/z` at the first pole `z = P` of the inside
    /// sequence, `P ∈ {t w, t/w}`.
    pub(crate) fn residue(&self, pole: C64) -> Result<C64> {
        let (t, w, z) = (self.t, self.w, pole);
        let others = if pole == t * w {
            [t * w * z, t * z / w, t / (w * z)]
        } else {
            [t * w * z, t * w / z, t * z / w]
        };
        let g = gamma_product(&others, self.nome)?;
        Ok(g * self.inv_gamma_t2
            * inverse_gamma_pair(z * z, self.nome)?
            * gamma_residue_constant(self.nome))
    }
}

fn check_alpha_on_unit_circle(alpha: &SymmetricTestFunction) -> Result<()> {
    let (lo, hi) = alpha.analyticity_annulus();
    if !(lo < 1.0 && 1.0 < hi) {
        return Err(Error::Constraint(
            "test function is not analytic on the unit circle".into(),
        ));
    }
    Ok(())
}

/// `[M(t)α](w) = κ ∮_𝕋 Γ(t w^{±1} z^{±1}) / Γ(t², z^{±2}) α(z) dz/z` on the
/// unit circle.
///
/// ```
/// use elliptic_bailey::contour::{apply_m, QuadratureSettings, SymmetricTestFunction};
/// use elliptic_bailey::{NomePair, C64};
///
/// let nome = NomePair::real(0.1, 0.2)?;
/// let (t, w) = (C64::new(0.6, 0.1), C64::from_polar(1.0, 0.3));
/// let alpha = SymmetricTestFunction::gamma_product(
///     [C64::new(0.6, 0.1), C64::new(0.7, 0.0), C64::new(0.5, -0.3)], t, &nome)?;
/// let s = QuadratureSettings::default();
/// let beta = apply_m(t, w, &alpha, &s, &nome)?.value;
/// let closed = alpha.gamma_product_image(t, w, &nome)?.unwrap();
/// assert!((beta - closed).norm() < 1e-11 * closed.norm());
/// # Ok::<(), elliptic_bailey::Error>(())
/// ```
pub fn apply_m(
    t: C64,
    w: C64,
    alpha: &SymmetricTestFunction,
    settings: &QuadratureSettings,
    nome: &NomePair,
) -> Result<Quadrature<C64>> {
    OperatorParams::check_m(t, w)?;
    check_alpha_on_unit_circle(alpha)?;
    let kernel = Kernel::new(t, w, nome)?;
    let q = circle_integral(|z| Ok(kernel.eval(z)? * alpha.eval(z, nome)?), 1.0, settings)?;
    Ok(Quadrature {
        value: nome.kappa() * q.value,
        nodes: q.nodes,
    })
}

/// `[M(t)α](w)` continued analytically in `t` and `w` past `|t w^{±1}| = 1`.
///
/// The kernel's inside pole sequences start at `P ∈ {tw, t/w}` and shrink by
/// powers of `p` and `q`; the outside sequences are their reciprocals. The
/// integral is taken on a circle `|z| = R` chosen to keep every pole well
/// away from it, and each first pole on the wrong side is corrected by its
/// residue: `+2πiκ Res_P` when `|P| > R` and, since the reciprocal carries
/// the opposite residue, another `+2πiκ Res_P` when `|1/P| < R`. On the
/// unit circle this is the familiar `4πiκ Res_P` per crossing pole. Only the
/// first poles may be on the wrong side, and `α` must be analytic between
/// the unit circle and `|z| = R`.
pub fn apply_m_continued(
    t: C64,
    w: C64,
    alpha: &SymmetricTestFunction,
    settings: &QuadratureSettings,
    nome: &NomePair,
) -> Result<Quadrature<C64>> {
    check_alpha_on_unit_circle(alpha)?;
    m_continued_with(t, w, |z| alpha.eval(z, nome), alpha.analyticity_annulus(), settings, nome)
}

/// [`apply_m_continued`] for an arbitrary symmetric function `f` analytic on
/// the annulus `annulus`.
pub(crate) fn m_continued_with<F>(
    t: C64,
    w: C64,
    f: F,
    annulus: (f64, f64),
    settings: &QuadratureSettings,
    nome: &NomePair,
) -> Result<Quadrature<C64>>
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    if w == C64::new(0.0, 0.0) || t == C64::new(0.0, 0.0) {
        return Err(Error::Constraint("t and w must be nonzero".into()));
    }
    let kernel = Kernel::new(t, w, nome)?;
    let poles = [t * w, t / w];
    let radius = continuation_radius(&poles, nome, annulus)?;

    let mut corrections = Vec::new();
    for pole in poles {
        let r = pole.norm();
        let count = usize::from(r > radius) + usize::from(1.0 / r < radius);
        if count > 0 {
            let (lo, hi) = annulus;
            if !(lo < r && r < hi) {
                return Err(Error::Constraint(format!("test function is not analytic at {pole}")));
            }
            corrections.push((pole, count as f64));
        }
    }
    if corrections.len() == 2 && (poles[0] - poles[1]).norm() < 1e-8 * poles[0].norm() {
        return Err(Error::Domain("crossing kernel poles coincide (w² = 1)".into()));
    }
    let q = circle_integral(|z| Ok(kernel.eval(z)? * f(z)?), radius, settings)?;
    let two_pi_i_kappa = nome.kappa() * C64::new(0.0, 2.0 * std::f64::consts::PI);
    let mut value = nome.kappa() * q.value;
    for (pole, count) in corrections {
        value += two_pi_i_kappa * count * kernel.residue(pole)? * f(pole)?;
    }
    Ok(Quadrature {
        value,
        nodes: q.nodes,
    })
}

/// Radius of the integration circle for [`apply_m_continued`]: the unit
/// circle unless a first pole is close to it, otherwise the candidate radius
/// `e^{k/20}` (|k| ≤ 12) with the largest logarithmic clearance from all
/// first poles, their reciprocals, the next poles of each sequence and the
/// edges of `α`'s annulus.
fn continuation_radius(poles: &[C64; 2], nome: &NomePair, annulus: (f64, f64)) -> Result<f64> {
    let shrink = nome.p().norm().max(nome.q().norm());
    let (lo, hi) = annulus;
    let clearance = |radius: f64| -> f64 {
        let lr = radius.ln();
        let mut c = f64::INFINITY;
        for pole in poles {
            let lp = pole.norm().ln();
            c = c.min((lp - lr).abs()).min((lp + lr).abs());
            // the rest of the inside sequence must be inside, the rest of the
            // outside sequence outside
            c = c.min(lr - (lp + shrink.ln())).min(-(lp + shrink.ln()) - lr);
        }
        let lr_in = lr.min(0.0);
        let lr_out = lr.max(0.0);
        c.min(lr_in - lo.ln()).min(hi.ln() - lr_out)
    };
    let mut best = (1.0, clearance(1.0));
    if best.1 < 0.2 {
        for k in (1..=12).flat_map(|k| [k, -k]) {
            let radius = (k as f64 / 20.0).exp();
            let c = clearance(radius);
            if c > best.1 {
                best = (radius, c);
            }
        }
    }
    if !(best.1 > 0.0) {
        return Err(Error::Constraint(
            "no circle separates the kernel pole sequences for this continuation".into(),
        ));
    }
    Ok(best.0)
}

/// `D(s; y, w) = Γ(√(pq) s^{−1} y^{±1} w^{±1})`.
pub fn d_factor(s: C64, y: C64, w: C64, nome: &NomePair) -> Result<C64> {
    let base = nome.sqrt_pq() / s;
    gamma_product(&[base * y * w, base * y / w, base * w / y, base / (y * w)], nome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::circle_integral_centered;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn d_factor_inversion() {
        let nome = NomePair::new(c(0.1, 0.02), c(0.2, -0.05)).unwrap();
        for (s, y, w) in [
            (c(0.5, 0.0), c(0.8, 0.0), C64::from_polar(0.9, 0.2)),
            (c(0.3, 0.4), C64::from_polar(1.1, -0.7), C64::from_polar(1.0, 2.0)),
        ] {
            let prod = d_factor(s, y, w, &nome).unwrap() * d_factor(1.0 / s, y, w, &nome).unwrap();
            assert!((prod - 1.0).norm() < 1e-12, "{prod}");
        }
    }

    #[test]
    fn d_factor_value() {
        let nome = NomePair::real(0.1, 0.2).unwrap();
        let (s, y, w) = (c(0.5, 0.0), c(0.8, 0.0), C64::from_polar(0.9, 0.2));
        let b = nome.sqrt_pq() / s;
        let direct: C64 = [b * y * w, b * y / w, b * w / y, b / (y * w)]
            .iter()
            .map(|&z| elliptic_gamma(z, &nome).unwrap())
            .product();
        let v = d_factor(s, y, w, &nome).unwrap();
        assert!((v - direct).norm() < 1e-15 * direct.norm());
    }

    #[test]
    fn d_factor_pole() {
        let nome = NomePair::real(0.1, 0.2).unwrap();
        let y = c(0.7, 0.2);
        let err = d_factor(nome.sqrt_pq(), y, y, &nome).unwrap_err();
        assert!(matches!(err, Error::PoleProximity { .. }));
    }

    #[test]
    fn apply_m_is_symmetric_in_w() {
        let nome = NomePair::real(0.1, 0.3).unwrap();
        let s = QuadratureSettings::default();
        let alpha = SymmetricTestFunction::z_plus_inverse();
        let (t, w) = (c(0.4, 0.2), C64::from_polar(1.2, 0.7));
        let a = apply_m(t, w, &alpha, &s, &nome).unwrap().value;
        let b = apply_m(t, 1.0 / w, &alpha, &s, &nome).unwrap().value;
        assert!((a - b).norm() < 1e-11 * a.norm());
    }

    #[test]
    fn apply_m_rejects_large_t() {
        let nome = NomePair::real(0.1, 0.3).unwrap();
        let s = QuadratureSettings::default();
        let err = apply_m(c(1.2, 0.0), c(1.0, 0.0), &SymmetricTestFunction::one(), &s, &nome).unwrap_err();
        assert!(matches!(err, Error::Constraint(_)));
    }

    #[test]
    fn continuation_agrees_below_the_boundary() {
        let nome = NomePair::real(0.1, 0.3).unwrap();
        let s = QuadratureSettings::default();
        let alpha = SymmetricTestFunction::z_plus_inverse();
        let (t, w) = (c(0.5, 0.1), C64::from_polar(1.0, 0.4));
        let a = apply_m(t, w, &alpha, &s, &nome).unwrap().value;
        let b = apply_m_continued(t, w, &alpha, &s, &nome).unwrap().value;
        assert_eq!(a, b);
    }

    #[test]
    fn continuation_is_analytic_across_the_boundary() {
        // Cauchy's formula in t on a circle that straddles |t w| = 1.
        let nome = NomePair::real(0.05, 0.3).unwrap();
        let s = QuadratureSettings::default();
        let alpha = SymmetricTestFunction::z_plus_inverse();
        let w = C64::from_polar(1.0, 0.9);
        let t0 = c(1.0, 0.05);
        let f = |t: C64| Ok(apply_m_continued(t, w, &alpha, &s, &nome)?.value);
        let settings = QuadratureSettings {
            min_nodes: 32,
            ..Default::default()
        };
        let cauchy = circle_integral_centered(f, t0, 0.1, &settings).unwrap().value / c(0.0, 2.0 * PI);
        let direct = f(t0).unwrap();
        assert!((cauchy - direct).norm() < 1e-9 * direct.norm(), "{cauchy} vs {direct}");
    }
}
