use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::contour::QuadratureSettings;
use crate::{Error, Result, C64};

/// The identity a campaign checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    SpecialFunctions,
    BetaIntegral,
    MatrixBailey,
    Inversions,
    Coxeter,
    StarTriangle,
    CauchyDeformation,
    ResidueReduction,
    FiniteDifference,
}

impl Identity {
    pub const ALL: [Identity; 9] = [
        Identity::SpecialFunctions,
        Identity::BetaIntegral,
        Identity::MatrixBailey,
        Identity::Inversions,
        Identity::Coxeter,
        Identity::StarTriangle,
        Identity::CauchyDeformation,
        Identity::ResidueReduction,
        Identity::FiniteDifference,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::SpecialFunctions => "special_functions",
            Identity::BetaIntegral => "beta_integral",
            Identity::MatrixBailey => "matrix_bailey",
            Identity::Inversions => "inversions",
            Identity::Coxeter => "coxeter",
            Identity::StarTriangle => "star_triangle",
            Identity::CauchyDeformation => "cauchy_deformation",
            Identity::ResidueReduction => "residue_reduction",
            Identity::FiniteDifference => "finite_difference",
        }
    }

    /// Matrix size parameter range used when the config gives none.
    fn default_n(self) -> (usize, usize) {
        match self {
            Identity::MatrixBailey | Identity::Inversions | Identity::Coxeter => (0, 8),
            Identity::CauchyDeformation => (0, 3),
            Identity::ResidueReduction => (0, 4),
            Identity::FiniteDifference => (1, 1),
            _ => (0, 0),
        }
    }

    fn uses_n(self) -> bool {
        self.default_n() != (0, 0)
    }

    /// Default sampling domain.
    fn default_domain(self) -> Domain {
        let matrix = Domain {
            p: [0.01, 0.05],
            q: [0.4, 0.7],
            nome_phase: 0.0,
            modulus: [0.3, 0.8],
            phase: PI / 8.0,
            y_modulus: [0.5, 1.5],
        };
        match self {
            Identity::SpecialFunctions => Domain {
                p: [0.05, 0.6],
                q: [0.05, 0.6],
                nome_phase: PI,
                modulus: [0.3, 1.5],
                phase: PI,
                y_modulus: [1.0, 1.0],
            },
            Identity::BetaIntegral => Domain {
                p: [0.05, 0.3],
                q: [0.05, 0.3],
                nome_phase: PI,
                modulus: [0.3, 0.8],
                phase: PI,
                y_modulus: [1.0, 1.0],
            },
            Identity::MatrixBailey | Identity::Inversions | Identity::Coxeter => matrix,
            Identity::StarTriangle => Domain {
                p: [0.05, 0.3],
                q: [0.05, 0.3],
                nome_phase: 0.0,
                modulus: [0.3, 0.7],
                phase: PI,
                y_modulus: [0.7, 1.3],
            },
            Identity::CauchyDeformation => Domain {
                p: [0.005, 0.02],
                q: [0.75, 0.85],
                nome_phase: 0.0,
                modulus: [0.05, 0.2],
                phase: PI,
                y_modulus: [0.9, 0.97],
            },
            Identity::ResidueReduction => Domain {
                p: [0.01, 0.1],
                q: [0.3, 0.7],
                nome_phase: 0.0,
                modulus: [0.5, 0.95],
                phase: PI / 6.0,
                y_modulus: [0.5, 0.9],
            },
            Identity::FiniteDifference => Domain {
                p: [0.01, 0.1],
                q: [0.3, 0.7],
                nome_phase: 0.0,
                modulus: [0.0, 1.0],
                phase: PI,
                y_modulus: [1.0, 1.0],
            },
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_");
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == norm)
            .ok_or_else(|| Error::Config(format!("unknown identity {s:?}")))
    }
}

/// A complex number written as `a+bi`, `a-bi`, `bi` or `a` (no spaces).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexArg(pub C64);

impl FromStr for ComplexArg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse complex number {s:?} (expected a+bi)"));
        if s.is_empty() || s.chars().any(char::is_whitespace) {
            return Err(bad());
        }
        let Some(body) = s.strip_suffix('i') else {
            return s.parse::<f64>().map(|re| ComplexArg(C64::new(re, 0.0))).map_err(|_| bad());
        };
        // the sign separating the parts is the last + or − not following an
        // exponent marker
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&j| matches!(bytes[j], b'+' | b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(j) => (&body[..j], &body[j..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            other => other,
        };
        let re: f64 = re.parse().map_err(|_| bad())?;
        let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
        Ok(ComplexArg(C64::new(re, im)))
    }
}

impl fmt::Display for ComplexArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.0;
        if z.im.is_sign_negative() {
            write!(f, "{:?}-{:?}i", z.re, -z.im)
        } else {
            write!(f, "{:?}+{:?}i", z.re, z.im)
        }
    }
}

impl Serialize for ComplexArg {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ComplexArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(x) => Ok(ComplexArg(C64::new(x, 0.0))),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Parameters held fixed instead of sampled. Which ones apply depends on the
/// identity; unused ones are ignored.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<ComplexArg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<ComplexArg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<ComplexArg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<ComplexArg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_tilde: Option<ComplexArg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<ComplexArg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<ComplexArg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<ComplexArg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<ComplexArg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<ComplexArg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z0: Option<ComplexArg>,
}

/// Sampling ranges. Moduli are drawn uniformly from the closed ranges and
/// phases uniformly from `[−phase, phase]`.
///
/// `modulus` applies to the main parameters of each identity: `z` for the
/// special functions, `t₁…t₅` for the beta integral, `a, k, t̃` for the
/// matrix identities, `s, t` for the star-triangle relation, `t` for the
/// Cauchy deformation and the residue reduction. `y_modulus` applies to `y`
/// (matrix identities, star-triangle) and to `z₀` (Cauchy deformation,
/// residue reduction).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    pub p: [f64; 2],
    pub q: [f64; 2],
    /// Largest `|arg p|`, `|arg q|`; 0 keeps the nome real.
    pub nome_phase: f64,
    pub modulus: [f64; 2],
    pub phase: f64,
    pub y_modulus: [f64; 2],
}

/// Partial [`Domain`] as written in a config file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nome_phase: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_modulus: Option<[f64; 2]>,
}

/// How `(b, c)` are chosen for the matrix identities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcMode {
    /// From a sampled `y` through `derive_bc`.
    #[default]
    FromY,
    /// `b` sampled freely, `c = q a t̃ / (k b)`.
    Free,
}

/// Test function for the star-triangle campaign.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunctionChoice {
    #[default]
    One,
    ZPlusInverse,
}

/// A verification campaign: which identity, how many seeded draws, and where
/// the parameters come from.
///
/// ```
/// use elliptic_bailey::harness::{CampaignConfig, Identity};
///
/// let config: CampaignConfig = toml::from_str(r#"
///     identity = "matrix_bailey"
///     draws = 5
///     seed = 7
///     n_min = 2
///     n_max = 2
/// "#).unwrap();
/// assert_eq!(config.identity, Identity::MatrixBailey);
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub identity: Identity,
    #[serde(default = "default_draws")]
    pub draws: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_min: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    /// Replaces the identity's default tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub bc_mode: BcMode,
    #[serde(default)]
    pub test_function: TestFunctionChoice,
    #[serde(default = "default_spectators")]
    pub spectators: usize,
    /// Record wall time in every report (breaks byte-identical reruns).
    #[serde(default)]
    pub timing: bool,
    #[serde(default)]
    pub domain: DomainOverrides,
    #[serde(default)]
    pub fixed: FixedParams,
    #[serde(default)]
    pub quadrature: QuadratureSettings,
}

fn default_draws() -> usize {
    20
}

fn default_spectators() -> usize {
    3
}

pub(crate) const MAX_N: usize = 64;

impl CampaignConfig {
    pub fn new(identity: Identity) -> Self {
        CampaignConfig {
            identity,
            draws: default_draws(),
            seed: 0,
            n_min: None,
            n_max: None,
            tolerance: None,
            bc_mode: BcMode::default(),
            test_function: TestFunctionChoice::default(),
            spectators: default_spectators(),
            timing: false,
            domain: DomainOverrides::default(),
            fixed: FixedParams::default(),
            quadrature: QuadratureSettings::default(),
        }
    }

    pub fn draws(mut self, draws: usize) -> Self {
        self.draws = draws;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Fix the matrix size parameter.
    pub fn n(mut self, n: usize) -> Self {
        self.n_min = Some(n);
        self.n_max = Some(n);
        self
    }

    /// The N range after applying defaults.
    pub fn n_range(&self) -> (usize, usize) {
        let (lo, hi) = self.identity.default_n();
        let lo = self.n_min.unwrap_or(lo);
        (lo, self.n_max.unwrap_or(hi.max(lo)))
    }

    /// The sampling domain after applying defaults.
    pub fn domain(&self) -> Domain {
        let mut d = self.identity.default_domain();
        let o = &self.domain;
        d.p = o.p.unwrap_or(d.p);
        d.q = o.q.unwrap_or(d.q);
        d.nome_phase = o.nome_phase.unwrap_or(d.nome_phase);
        d.modulus = o.modulus.unwrap_or(d.modulus);
        d.phase = o.phase.unwrap_or(d.phase);
        d.y_modulus = o.y_modulus.unwrap_or(d.y_modulus);
        d
    }

    pub fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        let d = self.domain();
        let range = |name: &str, r: [f64; 2], lo: f64, hi: f64| -> Result<()> {
            if !(lo <= r[0] && r[0] <= r[1] && r[1] <= hi) {
                return Err(Error::Config(format!(
                    "{name} range [{}, {}] must be ordered and within [{lo}, {hi}]",
                    r[0], r[1]
                )));
            }
            Ok(())
        };
        range("p", d.p, 0.0, 1.0 - f64::EPSILON)?;
        range("q", d.q, 0.0, 1.0 - f64::EPSILON)?;
        range("modulus", d.modulus, 0.0, f64::MAX)?;
        range("y_modulus", d.y_modulus, 0.0, f64::MAX)?;
        for (name, v) in [("nome_phase", d.nome_phase), ("phase", d.phase)] {
            if !(0.0..=PI).contains(&v) {
                return Err(Error::Config(format!("{name} = {v} must lie in [0, π]")));
            }
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0) {
                return Err(Error::Config(format!("tolerance {t} must be positive")));
            }
        }
        let (lo, hi) = self.n_range();
        if lo > hi || hi > MAX_N {
            return Err(Error::Config(format!("N range [{lo}, {hi}] must be ordered and at most {MAX_N}")));
        }
        if !self.identity.uses_n() && (self.n_min.is_some() || self.n_max.is_some()) && hi > 0 {
            return Err(Error::Config(format!("{} takes no N", self.identity)));
        }
        if self.identity == Identity::FiniteDifference && hi > 1 {
            return Err(Error::Config("the finite-difference campaign runs at N = 0 or 1".into()));
        }
        if self.identity == Identity::StarTriangle && self.spectators == 0 {
            return Err(Error::Config("star-triangle campaigns need at least one spectator".into()));
        }
        Ok(())
    }
}
