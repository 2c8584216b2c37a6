use serde::{Deserialize, Serialize};

use crate::special::{gamma_product, NomePair};
use crate::{Error, Result, C64};

/// A test function with `α(z) = α(1/z)`.
///
/// * `Constant(c)`: `α ≡ c`.
/// * `Laurent(c)`: `α(z) = c₀ + Σ_{k≥1} c_k (z^k + z^{−k})`; `[0, 1]` is `z + 1/z`.
/// * `DesignatedPoles { z0, q, coeffs }`: with `u_m = z₀ q^m`,
///   `α(z) = Σ_m c_m [z/(z − u_m) + 1/(1 − u_m z)]`. The residue of
///   `α(z)/z` at `u_m` is exactly `c_m` (and `−c_m` at `1/u_m`).
/// * `GammaProduct(u)`: `α(z) = ∏_{j=1}^{4} Γ(u_j z^{±1})`; when paired with
///   the kernel of `M(t)` and `u₁u₂u₃u₄ = pq/t²`, the integral has the
///   closed form [`SymmetricTestFunction::gamma_product_image`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SymmetricTestFunction {
    Constant {
        value: [f64; 2],
    },
    Laurent {
        coeffs: Vec<[f64; 2]>,
    },
    DesignatedPoles {
        z0: [f64; 2],
        q: [f64; 2],
        coeffs: Vec<[f64; 2]>,
    },
    GammaProduct {
        u: [[f64; 2]; 4],
    },
}

fn to_c(v: &[f64; 2]) -> C64 {
    C64::new(v[0], v[1])
}

fn from_c(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

impl SymmetricTestFunction {
    pub fn one() -> Self {
        SymmetricTestFunction::Constant { value: [1.0, 0.0] }
    }

    /// `z + 1/z`.
    pub fn z_plus_inverse() -> Self {
        SymmetricTestFunction::Laurent {
            coeffs: vec![[0.0, 0.0], [1.0, 0.0]],
        }
    }

    pub fn laurent(coeffs: &[C64]) -> Self {
        SymmetricTestFunction::Laurent {
            coeffs: coeffs.iter().map(|&c| from_c(c)).collect(),
        }
    }

    pub fn designated_poles(z0: C64, q: C64, coeffs: &[C64]) -> Result<Self> {
        if z0 == C64::new(0.0, 0.0) || !(z0.norm() < 1.0) || !(q.norm() < 1.0) {
            return Err(Error::Domain(format!(
                "designated poles need 0 < |z0| < 1 and |q| < 1 (z0 = {z0}, q = {q})"
            )));
        }
        Ok(SymmetricTestFunction::DesignatedPoles {
            z0: from_c(z0),
            q: from_c(q),
            coeffs: coeffs.iter().map(|&c| from_c(c)).collect(),
        })
    }

    /// `∏ Γ(u_j z^{±1})` with `u₁u₂u₃ u₄ = pq/t²`: `u₄` is fixed from the first
    /// three.
    pub fn gamma_product(u: [C64; 3], t: C64, nome: &NomePair) -> Result<Self> {
        let u4 = nome.p() * nome.q() / (t * t * u[0] * u[1] * u[2]);
        let all = [u[0], u[1], u[2], u4];
        if let Some(bad) = all.iter().find(|x| !(x.norm() < 1.0)) {
            return Err(Error::Constraint(format!(
                "gamma-product test function needs |u_j| < 1 (got {bad})"
            )));
        }
        Ok(SymmetricTestFunction::GammaProduct {
            u: all.map(from_c),
        })
    }

    pub fn eval(&self, z: C64, nome: &NomePair) -> Result<C64> {
        match self {
            SymmetricTestFunction::Constant { value } => Ok(to_c(value)),
            SymmetricTestFunction::Laurent { coeffs } => {
                let inv = 1.0 / z;
                let (mut zp, mut ip) = (C64::new(1.0, 0.0), C64::new(1.0, 0.0));
                let mut sum = coeffs.first().map(to_c).unwrap_or_default();
                for c in coeffs.iter().skip(1) {
                    zp *= z;
                    ip *= inv;
                    sum += to_c(c) * (zp + ip);
                }
                Ok(sum)
            }
            SymmetricTestFunction::DesignatedPoles { z0, q, coeffs } => {
                let (mut u, q) = (to_c(z0), to_c(q));
                let mut sum = C64::new(0.0, 0.0);
                for c in coeffs {
                    sum += to_c(c) * (z / (z - u) + 1.0 / (1.0 - u * z));
                    u *= q;
                }
                Ok(sum)
            }
            SymmetricTestFunction::GammaProduct { u } => {
                let inv = 1.0 / z;
                let args: Vec<C64> = u.iter().flat_map(|v| [to_c(v) * z, to_c(v) * inv]).collect();
                gamma_product(&args, nome)
            }
        }
    }

    /// Poles of `α(z)/z` strictly inside the unit circle with their residues.
    /// Only the designated-poles family has any (the reciprocal poles lie
    /// outside and carry the negated residues).
    pub fn poles(&self) -> Vec<(C64, C64)> {
        match self {
            SymmetricTestFunction::DesignatedPoles { z0, q, coeffs } => {
                let (mut u, q) = (to_c(z0), to_c(q));
                coeffs
                    .iter()
                    .map(|c| {
                        let out = (u, to_c(c));
                        u *= q;
                        out
                    })
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    /// `(r_in, r_out)`: α is analytic on `r_in < |z| < r_out`.
    pub fn analyticity_annulus(&self) -> (f64, f64) {
        let inner = match self {
            SymmetricTestFunction::Constant { .. } | SymmetricTestFunction::Laurent { .. } => 0.0,
            SymmetricTestFunction::DesignatedPoles { .. } => {
                self.poles().iter().map(|(u, _)| u.norm()).fold(0.0, f64::max)
            }
            SymmetricTestFunction::GammaProduct { u } => u.iter().map(|v| to_c(v).norm()).fold(0.0, f64::max),
        };
        if inner == 0.0 {
            (0.0, f64::INFINITY)
        } else {
            (inner, 1.0 / inner)
        }
    }

    /// Closed form of `κ∮ Γ(tw^{±1}z^{±1}) α(z) / Γ(t², z^{±2}) dz/z` for the
    /// gamma-product family: `∏_{j<k} Γ(u_j u_k) · ∏_j Γ(t w u_j) Γ(t u_j/w)`.
    pub fn gamma_product_image(&self, t: C64, w: C64, nome: &NomePair) -> Result<Option<C64>> {
        let SymmetricTestFunction::GammaProduct { u } = self else {
            return Ok(None);
        };
        let u: Vec<C64> = u.iter().map(to_c).collect();
        let mut args = Vec::with_capacity(14);
        for j in 0..4 {
            for k in j + 1..4 {
                args.push(u[j] * u[k]);
            }
            args.push(t * w * u[j]);
            args.push(t * u[j] / w);
        }
        gamma_product(&args, nome).map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::{circle_integral_centered, QuadratureSettings};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn library(nome: &NomePair) -> Vec<SymmetricTestFunction> {
        vec![
            SymmetricTestFunction::one(),
            SymmetricTestFunction::z_plus_inverse(),
            SymmetricTestFunction::laurent(&[c(0.5, 0.1), c(0.0, 1.0), c(-0.3, 0.2)]),
            SymmetricTestFunction::designated_poles(c(0.7, 0.1), nome.q(), &[c(1.0, 0.0), c(0.5, -0.2), c(0.1, 0.3)]).unwrap(),
            SymmetricTestFunction::gamma_product([c(0.6, 0.1), c(0.7, 0.0), c(0.5, -0.3)], c(0.6, 0.1), nome).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn symmetric_under_inversion(r in 0.6f64..1.6, phi in -std::f64::consts::PI..std::f64::consts::PI) {
            let nome = NomePair::real(0.1, 0.5).unwrap();
            let z = C64::from_polar(r, phi);
            for f in library(&nome) {
                let (lo, hi) = f.analyticity_annulus();
                prop_assume!(lo * 1.05 < r && r < hi / 1.05);
                let a = f.eval(z, &nome).unwrap();
                let b = f.eval(1.0 / z, &nome).unwrap();
                prop_assert!((a - b).norm() <= 1e-13 * a.norm().max(1.0), "{f:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn declared_residues_match_small_circles() {
        let nome = NomePair::real(0.1, 0.5).unwrap();
        let f = SymmetricTestFunction::designated_poles(c(0.7, 0.1), nome.q(), &[c(1.0, 0.0), c(0.5, -0.2), c(0.1, 0.3)]).unwrap();
        let s = QuadratureSettings::default();
        for (u, res) in f.poles() {
            // (1/2πi)∮ α(z)/z dz around u, as ∮ g(z) dz/(z−u) with g = α(z)(z−u)/z
            let g = |z: C64| Ok(f.eval(z, &nome)? * (z - u) / z);
            let r = 0.05 * u.norm();
            let v = circle_integral_centered(g, u, r, &s).unwrap().value / c(0.0, 2.0 * std::f64::consts::PI);
            assert!((v - res).norm() < 1e-9 * res.norm(), "{v} vs {res}");
            let g = |z: C64| Ok(f.eval(z, &nome)? * (z - 1.0 / u) / z);
            let v = circle_integral_centered(g, 1.0 / u, 0.05, &s).unwrap().value / c(0.0, 2.0 * std::f64::consts::PI);
            assert!((v + res).norm() < 1e-9 * res.norm());
        }
    }

    #[test]
    fn gamma_product_balancing() {
        let nome = NomePair::real(0.1, 0.2).unwrap();
        let t = c(0.6, 0.1);
        let f = SymmetricTestFunction::gamma_product([c(0.6, 0.1), c(0.7, 0.0), c(0.5, -0.3)], t, &nome).unwrap();
        let SymmetricTestFunction::GammaProduct { u } = &f else { unreachable!() };
        let prod: C64 = u.iter().map(to_c).product::<C64>() * t * t;
        assert!((prod - c(0.02, 0.0)).norm() < 1e-16);
        assert!(SymmetricTestFunction::gamma_product([c(0.01, 0.0), c(0.01, 0.0), c(0.01, 0.0)], t, &nome).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let nome = NomePair::real(0.1, 0.5).unwrap();
        for f in library(&nome) {
            let json = serde_json::to_string(&f).unwrap();
            let back: SymmetricTestFunction = serde_json::from_str(&json).unwrap();
            assert_eq!(back, f);
        }
    }
}
