use serde::{Deserialize, Serialize};

use super::{build_d, build_m, BaileyMatrix, DiscreteParams};
use crate::report::RESIDUAL_FLOOR;
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceRole {
    Alpha,
    Beta,
}

/// One half of a discrete Bailey pair, `values[0..=N]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BaileySequence {
    pub values: Vec<C64>,
    pub role: SequenceRole,
}

impl BaileySequence {
    pub fn alpha(values: Vec<C64>) -> Self {
        BaileySequence {
            values,
            role: SequenceRole::Alpha,
        }
    }

    pub fn beta(values: Vec<C64>) -> Self {
        BaileySequence {
            values,
            role: SequenceRole::Beta,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Normwise residual of `β = M α`:
/// `max|β − Mα| / max(max|β|, max|Mα|)`.
pub fn pair_residual(m: &BaileyMatrix, alpha: &BaileySequence, beta: &BaileySequence) -> f64 {
    let image = m.apply(&alpha.values);
    let diff = image
        .iter()
        .zip(&beta.values)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    let scale = image
        .iter()
        .chain(&beta.values)
        .map(|x| x.norm())
        .fold(RESIDUAL_FLOOR, f64::max);
    diff / scale
}

/// One step of the discrete Bailey lemma.
///
/// Given a pair at `(a, t̃)`, i.e. `β = M(a,t̃) α` within `tolerance`,
/// returns the pair at `(a, k)`:
///
/// ```text
/// α' = D(a;b,c) α
/// β' = D(k; qt̃/c, qt̃/b) M(t̃,k) D(t̃;b,c) β
/// ```
pub fn bailey_transform(
    alpha: &BaileySequence,
    beta: &BaileySequence,
    params: &DiscreteParams,
    tolerance: f64,
) -> Result<(BaileySequence, BaileySequence)> {
    let n = params.n();
    if alpha.len() != n + 1 || beta.len() != n + 1 {
        return Err(Error::Domain(format!(
            "Bailey sequences must have length {} (got {} and {})",
            n + 1,
            alpha.len(),
            beta.len()
        )));
    }
    let nome = params.nome();
    let q = nome.q();
    let (a, k, tt, b, c) = (params.a(), params.k(), params.t_tilde(), params.b(), params.c());

    let input = build_m(n, a, tt, nome)?;
    let residual = pair_residual(&input, alpha, beta);
    if !(residual <= tolerance) {
        return Err(Error::PairViolation {
            residual,
            tolerance,
        });
    }

    let alpha_new = build_d(n, a, b, c, nome)?.apply(&alpha.values);
    let inner = build_d(n, tt, b, c, nome)?.apply(&beta.values);
    let middle = build_m(n, tt, k, nome)?.apply(&inner);
    let beta_new = build_d(n, k, q * tt / c, q * tt / b, nome)?.apply(&middle);
    Ok((BaileySequence::alpha(alpha_new), BaileySequence::beta(beta_new)))
}
