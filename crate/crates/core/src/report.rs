//! Verification reports and the residual conventions shared by every check.
//!
//! Reports serialise every floating-point number as a hexadecimal float
//! string (`"0x1.921fb54442d18p1"`), so a report read back from JSON is
//! bit-identical to the one written.

use serde::{Deserialize, Serialize};

use crate::{Error, C64};

/// Floor used in relative residuals so that `0/0` reads as agreement.
pub const RESIDUAL_FLOOR: f64 = 1e-300;

/// `|lhs − rhs| / max(|lhs|, |rhs|, floor)`.
pub fn relative_residual(lhs: C64, rhs: C64, floor: f64) -> f64 {
    let scale = lhs.norm().max(rhs.norm()).max(floor);
    (lhs - rhs).norm() / scale
}

/// Largest [`relative_residual`] over paired entries, with the index of the
/// worst pair. Returns `(0, 0)` for empty input.
pub fn max_residual<I>(pairs: I, floor: f64) -> (f64, usize)
where
    I: IntoIterator<Item = (C64, C64)>,
{
    let mut worst = (0.0, 0);
    for (i, (l, r)) in pairs.into_iter().enumerate() {
        let res = relative_residual(l, r, floor);
        if res > worst.0 || res.is_nan() {
            worst = (res, i);
            if res.is_nan() {
                break;
            }
        }
    }
    worst
}

/// A named complex input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    #[serde(with = "hex::complex")]
    pub value: C64,
}

/// A secondary residual reported alongside the main one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedResidual {
    pub name: String,
    #[serde(with = "hex::real")]
    pub value: f64,
}

/// Numerical settings a check ran with.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckSettings {
    #[serde(with = "hex::real")]
    pub truncation_tol: f64,
    #[serde(with = "hex::real")]
    pub pole_guard: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_size: Option<usize>,
    /// Largest node count any quadrature in the check needed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature_nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "hex::opt_real")]
    pub quadrature_tol: Option<f64>,
}

/// Outcome of one identity check.
///
/// `pass` is always `residual < tolerance`; a NaN residual (for example from
/// a check that errored) never passes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub inputs: Vec<NamedValue>,
    /// Left-hand side at the worst entry / spectator point.
    #[serde(with = "hex::complex")]
    pub lhs: C64,
    #[serde(with = "hex::complex")]
    pub rhs: C64,
    #[serde(with = "hex::real")]
    pub residual: f64,
    #[serde(with = "hex::real")]
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<NamedResidual>,
    pub settings: CheckSettings,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub draw: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_kind: Option<ErrorKind>,
    /// Seconds; only serialised when timing output is requested, so that
    /// reruns produce identical bytes.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "hex::opt_real")]
    pub wall_time: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Parameters,
    NonConvergence,
    Other,
}

impl From<&Error> for ErrorKind {
    fn from(e: &Error) -> Self {
        match e {
            Error::NonConvergence { .. } => ErrorKind::NonConvergence,
            e if e.is_inadmissible() => ErrorKind::Parameters,
            _ => ErrorKind::Other,
        }
    }
}

impl VerificationReport {
    pub fn new(identity: impl Into<String>, lhs: C64, rhs: C64, residual: f64, tolerance: f64) -> Self {
        VerificationReport {
            identity: identity.into(),
            inputs: Vec::new(),
            lhs,
            rhs,
            residual,
            tolerance,
            pass: residual < tolerance,
            details: Vec::new(),
            settings: CheckSettings::default(),
            draw: None,
            seed: None,
            error: None,
            error_kind: None,
            wall_time: None,
        }
    }

    /// Report for a check that could not be completed.
    pub fn errored(identity: impl Into<String>, error: &Error, tolerance: f64) -> Self {
        let nan = C64::new(f64::NAN, f64::NAN);
        let mut report = Self::new(identity, nan, nan, f64::NAN, tolerance);
        report.error = Some(error.to_string());
        report.error_kind = Some(error.into());
        report
    }

    pub fn input(mut self, name: impl Into<String>, value: C64) -> Self {
        self.inputs.push(NamedValue {
            name: name.into(),
            value,
        });
        self
    }

    pub fn real_input(self, name: impl Into<String>, value: f64) -> Self {
        self.input(name, C64::new(value, 0.0))
    }

    pub fn detail(mut self, name: impl Into<String>, value: f64) -> Self {
        self.details.push(NamedResidual {
            name: name.into(),
            value,
        });
        self
    }

    pub fn settings(mut self, settings: CheckSettings) -> Self {
        self.settings = settings;
        self
    }

    pub fn set_tolerance(&mut self, tolerance: f64) {
        self.tolerance = tolerance;
        self.pass = self.error.is_none() && self.residual < tolerance;
    }

    pub fn detail_value(&self, name: &str) -> Option<f64> {
        self.details.iter().find(|d| d.name == name).map(|d| d.value)
    }

    pub fn input_value(&self, name: &str) -> Option<C64> {
        self.inputs.iter().find(|d| d.name == name).map(|d| d.value)
    }
}

impl CheckSettings {
    pub fn from_nome(nome: &crate::NomePair) -> Self {
        CheckSettings {
            truncation_tol: nome.policy().target_rel_tol,
            pole_guard: nome.policy().pole_guard,
            ..Default::default()
        }
    }
}

/// Serde adapters writing `f64` as hexadecimal float strings.
pub mod hex {
    use hexfloat2::HexFloat64;

    pub fn encode(x: f64) -> String {
        if x.is_nan() {
            "nan".to_string()
        } else if x.is_infinite() {
            if x > 0.0 { "inf" } else { "-inf" }.to_string()
        } else {
            HexFloat64::from(x).to_string()
        }
    }

    pub fn decode(s: &str) -> Result<f64, String> {
        match s {
            "nan" => Ok(f64::NAN),
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            _ => s
                .parse::<HexFloat64>()
                .map(f64::from)
                .map_err(|e| format!("invalid hex float {s:?}: {e:?}")),
        }
    }

    pub mod real {
        use serde::{de::Error, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&super::encode(*x))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
            let s = String::deserialize(d)?;
            super::decode(&s).map_err(D::Error::custom)
        }
    }

    pub mod opt_real {
        use serde::{de::Error, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(v) => s.serialize_some(&super::encode(*v)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
            let s = Option::<String>::deserialize(d)?;
            s.map(|s| super::decode(&s).map_err(D::Error::custom)).transpose()
        }
    }

    /// Complex numbers as `[re, im]`.
    pub mod complex {
        use serde::{de::Error, Deserialize, Deserializer, Serializer};

        use crate::C64;

        pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
            use serde::ser::SerializeTuple;
            let mut t = s.serialize_tuple(2)?;
            t.serialize_element(&super::encode(z.re))?;
            t.serialize_element(&super::encode(z.im))?;
            t.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
            let [re, im] = <[String; 2]>::deserialize(d)?;
            Ok(C64::new(
                super::decode(&re).map_err(D::Error::custom)?,
                super::decode(&im).map_err(D::Error::custom)?,
            ))
        }
    }
}
