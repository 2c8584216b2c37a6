use ndarray::Array2;

use crate::special::{scaled_pochhammer, theta, NomePair, Scaled};
use crate::{Error, Result, C64};

/// Single entry `M_Nm(a,k)`, evaluated straight from the definition.
///
/// Entries above the diagonal (`m > N`) are exactly zero.
pub fn m_entry(n: usize, m: usize, a: C64, k: C64, nome: &NomePair) -> Result<C64> {
    if m > n {
        return Ok(C64::new(0.0, 0.0));
    }
    let (p, q, policy) = (nome.p(), nome.q(), nome.policy());
    let ctx = |e: Error| e.at(format_args!("M[{n},{m}]"));
    let num = scaled_pochhammer(k, n + m, nome, None)? * scaled_pochhammer(k / a, n - m, nome, None)?;
    let den = (scaled_pochhammer(q * a, n + m, nome, Some("qa")).map_err(ctx)?)
        * scaled_pochhammer(q, n - m, nome, Some("q")).map_err(ctx)?;
    let theta_a = theta(a, p, policy)?;
    if theta_a.norm() < policy.pole_guard {
        return Err(ctx(Error::Degenerate {
            what: "θ(a; p)".into(),
            modulus: theta_a.norm(),
        }));
    }
    let shift = theta(a * q.powi(2 * m as i32), p, policy)? / theta_a;
    finite(
        (num / den * shift * scaled_power(a, n - m)).to_c64(),
        || format!("M[{n},{m}](a={a}, k={k})"),
    )
}

/// `D_m(a;b,c)`.
pub fn d_entry(m: usize, a: C64, b: C64, c: C64, nome: &NomePair) -> Result<C64> {
    let q = nome.q();
    let ctx = |e: Error| e.at(format_args!("D[{m}]"));
    let num = scaled_pochhammer(b, m, nome, None)? * scaled_pochhammer(c, m, nome, None)?;
    let den = scaled_pochhammer(a * q / b, m, nome, Some("aq/b")).map_err(ctx)?
        * scaled_pochhammer(a * q / c, m, nome, Some("aq/c")).map_err(ctx)?;
    finite(
        (num / den * scaled_power(a * q / (b * c), m)).to_c64(),
        || format!("D[{m}](a={a}; b={b}, c={c})"),
    )
}

fn scaled_power(z: C64, n: usize) -> Scaled {
    (0..n).fold(Scaled::ONE, |acc, _| acc * z)
}

fn finite(z: C64, what: impl FnOnce() -> String) -> Result<C64> {
    if z.is_finite() {
        Ok(z)
    } else {
        Err(Error::Overflow { what: what() })
    }
}

/// Dense `(N+1)×(N+1)` realisation of `M(a,k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BaileyMatrix {
    /// First argument of `M(a,k)`.
    pub a: C64,
    /// Second argument of `M(a,k)`.
    pub k: C64,
    pub entries: Array2<C64>,
}

impl BaileyMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.entries
            .rows()
            .into_iter()
            .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
            .collect()
    }
}

/// Diagonal operator `D(a;b,c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalOp {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub diag: Vec<C64>,
}

impl DiagonalOp {
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.diag.iter().zip(v).map(|(d, x)| d * x).collect()
    }

    /// `D · X` (row scaling).
    pub fn left_mul(&self, x: &Array2<C64>) -> Array2<C64> {
        let mut out = x.clone();
        for (mut row, d) in out.rows_mut().into_iter().zip(&self.diag) {
            row.mapv_inplace(|v| d * v);
        }
        out
    }

    /// `X · D` (column scaling).
    pub fn right_mul(&self, x: &Array2<C64>) -> Array2<C64> {
        let mut out = x.clone();
        for (mut col, d) in out.columns_mut().into_iter().zip(&self.diag) {
            col.mapv_inplace(|v| v * d);
        }
        out
    }

    pub fn to_dense(&self) -> Array2<C64> {
        Array2::from_diag(&ndarray::Array1::from(self.diag.clone()))
    }
}

/// Prefix table `[θ(z)_0, θ(z)_1, …, θ(z)_len]`.
fn pochhammer_prefixes(
    z: C64,
    len: usize,
    nome: &NomePair,
    checked: Option<&str>,
) -> Result<Vec<Scaled>> {
    let (p, q, policy) = (nome.p(), nome.q(), nome.policy());
    let mut out = Vec::with_capacity(len + 1);
    let mut acc = Scaled::ONE;
    let mut w = z;
    out.push(acc);
    for j in 0..len {
        let factor = theta(w, p, policy)?;
        if let Some(what) = checked {
            if factor.norm() < policy.pole_guard {
                return Err(Error::Degenerate {
                    what: format!("factor {j} of θ({what})"),
                    modulus: factor.norm(),
                });
            }
        }
        acc = acc * factor;
        out.push(acc);
        w *= q;
    }
    Ok(out)
}

/// Build `M(a,k)` of size `(N+1)×(N+1)`.
///
/// Uses prefix tables of the four elliptic Pochhammer symbols rather than
/// calling [`m_entry`] per entry; the two routes are checked against each
/// other in the tests.
pub fn build_m(n: usize, a: C64, k: C64, nome: &NomePair) -> Result<BaileyMatrix> {
    let (p, q, policy) = (nome.p(), nome.q(), nome.policy());
    let ctx = |e: Error| e.at(format_args!("M(a={a}, k={k}) with N={n}"));
    let k_up = pochhammer_prefixes(k, 2 * n, nome, None)?;
    let ka_down = pochhammer_prefixes(k / a, n, nome, None)?;
    let qa_up = pochhammer_prefixes(q * a, 2 * n, nome, Some("qa")).map_err(ctx)?;
    let q_down = pochhammer_prefixes(q, n, nome, Some("q")).map_err(ctx)?;
    let theta_a = theta(a, p, policy)?;
    if theta_a.norm() < policy.pole_guard {
        return Err(ctx(Error::Degenerate {
            what: "θ(a; p)".into(),
            modulus: theta_a.norm(),
        }));
    }
    let shifts: Vec<C64> = (0..=n)
        .map(|m| Ok(theta(a * q.powi(2 * m as i32), p, policy)? / theta_a))
        .collect::<Result<_>>()?;
    let powers: Vec<Scaled> = (0..=n).map(|j| scaled_power(a, j)).collect();

    let mut entries = Array2::zeros((n + 1, n + 1));
    for row in 0..=n {
        for m in 0..=row {
            let poch = k_up[row + m] * ka_down[row - m] / (qa_up[row + m] * q_down[row - m]);
            let entry = (poch * powers[row - m] * shifts[m]).to_c64();
            entries[[row, m]] = finite(entry, || format!("M[{row},{m}](a={a}, k={k})"))?;
        }
    }
    Ok(BaileyMatrix { a, k, entries })
}

/// Build `D(a;b,c)` with `N+1` diagonal entries.
pub fn build_d(n: usize, a: C64, b: C64, c: C64, nome: &NomePair) -> Result<DiagonalOp> {
    let q = nome.q();
    let ctx = |e: Error| e.at(format_args!("D(a={a}; b={b}, c={c}) with N={n}"));
    let b_up = pochhammer_prefixes(b, n, nome, None)?;
    let c_up = pochhammer_prefixes(c, n, nome, None)?;
    let qb = pochhammer_prefixes(a * q / b, n, nome, Some("aq/b")).map_err(ctx)?;
    let qc = pochhammer_prefixes(a * q / c, n, nome, Some("aq/c")).map_err(ctx)?;
    let ratio = a * q / (b * c);
    let diag = (0..=n)
        .map(|m| {
            let entry = (b_up[m] * c_up[m] / (qb[m] * qc[m]) * scaled_power(ratio, m)).to_c64();
            finite(entry, || format!("D[{m}](a={a}; b={b}, c={c})"))
        })
        .collect::<Result<_>>()?;
    Ok(DiagonalOp { a, b, c, diag })
}
