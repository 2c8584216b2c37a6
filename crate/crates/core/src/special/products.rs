use super::{check_base, NomePair, Scaled, TruncationPolicy};
use crate::{Error, Result, C64};

/// `(z; b)∞ = ∏_{j≥0} (1 − z bʲ)`.
pub fn qpochhammer_inf(z: C64, base: C64, policy: &TruncationPolicy) -> Result<C64> {
    check_base("base", base)?;
    let order = policy.product_order(base.norm(), z.norm());
    Ok(finite_qpochhammer(z, base, order))
}

#[inline]
fn finite_qpochhammer(z: C64, base: C64, order: usize) -> C64 {
    let one = C64::new(1.0, 0.0);
    let mut acc = one;
    let mut w = z;
    for _ in 0..order {
        acc *= one - w;
        w *= base;
    }
    acc
}

/// Short theta function `θ(z; p) = (z; p)∞ (p/z; p)∞`.
pub fn theta(z: C64, p: C64, policy: &TruncationPolicy) -> Result<C64> {
    check_base("p", p)?;
    if z == C64::new(0.0, 0.0) {
        return Err(Error::Domain("theta function evaluated at z = 0".into()));
    }
    let rp = p.norm();
    let w = p / z;
    let left = finite_qpochhammer(z, p, policy.product_order(rp, z.norm()));
    let right = finite_qpochhammer(w, p, policy.product_order(rp, w.norm()));
    Ok(left * right)
}

/// Elliptic Pochhammer symbol `θ(z; p; q)_n`.
///
/// `∏_{j=0}^{n−1} θ(z qʲ; p)` for `n > 0`, `1` for `n = 0` and
/// `∏_{j=1}^{−n} 1/θ(z q^{−j}; p)` for `n < 0`.
pub fn elliptic_pochhammer(z: C64, n: i64, nome: &NomePair) -> Result<C64> {
    let (p, q, policy) = (nome.p(), nome.q(), nome.policy());
    let mut acc = C64::new(1.0, 0.0);
    if n >= 0 {
        let mut w = z;
        for _ in 0..n {
            acc *= theta(w, p, policy)?;
            w *= q;
        }
    } else {
        if q == C64::new(0.0, 0.0) {
            return Err(Error::Domain(
                "negative elliptic Pochhammer index needs q ≠ 0".into(),
            ));
        }
        let mut w = z;
        for j in 1..=(-n) {
            w /= q;
            let factor = theta(w, p, policy)?;
            if factor.norm() < policy.pole_guard {
                return Err(Error::Degenerate {
                    what: format!("θ(z q^-{j}; p)"),
                    modulus: factor.norm(),
                });
            }
            acc /= factor;
        }
    }
    Ok(acc)
}

/// `θ(z)_n` for `n ≥ 0` as a [`Scaled`] product. With `checked` set, fails
/// if any factor is below the pole guard (for denominators).
pub(crate) fn scaled_pochhammer(
    z: C64,
    n: usize,
    nome: &NomePair,
    checked: Option<&str>,
) -> Result<Scaled> {
    let (p, q, policy) = (nome.p(), nome.q(), nome.policy());
    let mut acc = Scaled::ONE;
    let mut w = z;
    for j in 0..n {
        let factor = theta(w, p, policy)?;
        if let Some(what) = checked {
            if factor.norm() < policy.pole_guard {
                return Err(Error::Degenerate {
                    what: format!("factor {j} of θ({what})_{n}"),
                    modulus: factor.norm(),
                });
            }
        }
        acc = acc * factor;
        w *= q;
    }
    Ok(acc)
}

/// `θ(z)_n` for `n ≥ 0`, failing if any factor is below the guard. Used for
/// quantities that end up in a denominator.
pub(crate) fn theta_pochhammer_checked(
    z: C64,
    n: usize,
    nome: &NomePair,
    what: &str,
) -> Result<C64> {
    let (p, q, policy) = (nome.p(), nome.q(), nome.policy());
    let mut acc = C64::new(1.0, 0.0);
    let mut w = z;
    for j in 0..n {
        let factor = theta(w, p, policy)?;
        if factor.norm() < policy.pole_guard {
            return Err(Error::Degenerate {
                what: format!("factor {j} of θ({what})_{n}"),
                modulus: factor.norm(),
            });
        }
        acc *= factor;
        w *= q;
    }
    Ok(acc)
}
