use ndarray::Array2;

use super::{build_d, build_m, DiscreteParams, ParamTriple};
use crate::report::{max_residual, CheckSettings, RESIDUAL_FLOOR};
use crate::special::NomePair;
use crate::{Result, VerificationReport, C64};

/// Floor for residuals against the identity matrix, whose off-diagonal
/// entries are exactly zero.
pub const INVERSION_FLOOR: f64 = 1.0;

const KEY_IDENTITY_TOL: f64 = 1e-9;
const BRESSOUD_TOL: f64 = 1e-9;
const BRESSOUD_NOMES: [f64; 3] = [1e-4, 1e-6, 1e-8];

/// Both sides of the key identity as dense matrices:
///
/// ```text
/// lhs = M(a,k) · (D(a;b,c) · M(t̃,a))
/// rhs = D(k; qt̃/c, qt̃/b) · (M(t̃,k) · D(t̃;b,c))
/// ```
pub fn key_identity_sides(params: &DiscreteParams) -> Result<(Array2<C64>, Array2<C64>)> {
    let (n, nome) = (params.n(), params.nome());
    let q = nome.q();
    let (a, k, tt, b, c) = (params.a(), params.k(), params.t_tilde(), params.b(), params.c());
    let lhs = build_m(n, a, k, nome)?
        .entries
        .dot(&build_d(n, a, b, c, nome)?.left_mul(&build_m(n, tt, a, nome)?.entries));
    let rhs = build_d(n, k, q * tt / c, q * tt / b, nome)?
        .left_mul(&build_d(n, tt, b, c, nome)?.right_mul(&build_m(n, tt, k, nome)?.entries));
    Ok((lhs, rhs))
}

fn compare(lhs: &Array2<C64>, rhs: &Array2<C64>, floor: f64) -> (f64, C64, C64) {
    let (res, idx) = max_residual(lhs.iter().copied().zip(rhs.iter().copied()), floor);
    let l = lhs.iter().nth(idx).copied().unwrap_or_default();
    let r = rhs.iter().nth(idx).copied().unwrap_or_default();
    (res, l, r)
}

fn identity_residual(x: &Array2<C64>) -> (f64, C64, C64) {
    compare(x, &Array2::eye(x.nrows()), INVERSION_FLOOR)
}

fn with_inputs(mut report: VerificationReport, params: &DiscreteParams) -> VerificationReport {
    for (name, v) in params.named_inputs() {
        report = report.input(name, v);
    }
    let mut settings = CheckSettings::from_nome(params.nome());
    settings.matrix_size = Some(params.n() + 1);
    report.settings(settings)
}

/// Condition number of the sums forming `M(a,k) D(a;b,c) M(t̃,a)`:
/// the largest `Σ_l |M_Nl D_l M_lm| / |Σ_l M_Nl D_l M_lm|` over the lower
/// triangle. Rounding errors in the entries are amplified by this factor.
fn key_identity_conditioning(params: &DiscreteParams, lhs: &Array2<C64>) -> Result<f64> {
    let (n, nome) = (params.n(), params.nome());
    let (a, k, tt) = (params.a(), params.k(), params.t_tilde());
    let abs = |m: Array2<C64>| m.mapv(|z| z.norm());
    let left = abs(build_m(n, a, k, nome)?.entries);
    let diag = build_d(n, a, params.b(), params.c(), nome)?.diag;
    let mut right = abs(build_m(n, tt, a, nome)?.entries);
    for (mut row, d) in right.rows_mut().into_iter().zip(&diag) {
        row *= d.norm();
    }
    let sums = left.dot(&right);
    let mut worst: f64 = 1.0;
    for ((row, col), s) in sums.indexed_iter() {
        if col <= row {
            worst = worst.max(s / lhs[[row, col]].norm());
        }
    }
    Ok(worst)
}

/// Entrywise relative residual of the key identity.
///
/// The detail `conditioning` is the amplification factor of the
/// matrix-product sums (see the module docs on conditioning); residuals near
/// `conditioning × 1e-15` are at the limit of double precision.
pub fn verify_matrix_bailey(params: &DiscreteParams) -> Result<VerificationReport> {
    let (lhs, rhs) = key_identity_sides(params)?;
    let (res, l, r) = compare(&lhs, &rhs, RESIDUAL_FLOOR);
    let report = VerificationReport::new("matrix_bailey", l, r, res, KEY_IDENTITY_TOL)
        .detail("product_rule", params.product_rule_residual())
        .detail("conditioning", key_identity_conditioning(params, &lhs)?);
    Ok(with_inputs(report, params))
}

/// `S₁² = 1`, `S₂² = 1` and `S₁S₂S₁ = S₂S₁S₂` under the twisted product.
///
/// The main residual is the largest of the three; each also appears as a
/// detail, together with the bitwise distance between the cubic relation and
/// [`key_identity_sides`] (`cubic_vs_key`, expected to be exactly zero).
pub fn verify_coxeter(params: &DiscreteParams) -> Result<VerificationReport> {
    let (n, nome) = (params.n(), params.nome());
    let q = nome.q();
    let t = params.triple();

    let s1_sq = t.s1().gen1(n, nome)?.entries.dot(&t.gen1(n, nome)?.entries);
    let s2_sq = t.s2(q).gen2(n, nome)?.left_mul(&t.gen2(n, nome)?.to_dense());
    let (r1, _, _) = identity_residual(&s1_sq);
    let (r2, _, _) = identity_residual(&s2_sq);

    let (lhs, rhs) = cubic_sides(&t, n, nome)?;
    let (r3, l, r) = compare(&lhs, &rhs, RESIDUAL_FLOOR);

    let (key_l, key_r) = key_identity_sides(params)?;
    let bitwise = lhs
        .iter()
        .zip(&key_l)
        .chain(rhs.iter().zip(&key_r))
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);

    let report = VerificationReport::new("coxeter", l, r, r1.max(r2).max(r3), KEY_IDENTITY_TOL)
        .detail("s1_squared", r1)
        .detail("s2_squared", r2)
        .detail("cubic", r3)
        .detail("cubic_vs_key", bitwise);
    Ok(with_inputs(report, params))
}

/// `S₁(s₂s₁t)·(S₂(s₁t)·S₁(t))` and `S₂(s₁s₂t)·(S₁(s₂t)·S₂(t))`.
fn cubic_sides(t: &ParamTriple, n: usize, nome: &NomePair) -> Result<(Array2<C64>, Array2<C64>)> {
    let q = nome.q();
    let lhs = t
        .s1()
        .s2(q)
        .gen1(n, nome)?
        .entries
        .dot(&t.s1().gen2(n, nome)?.left_mul(&t.gen1(n, nome)?.entries));
    let rhs = t
        .s2(q)
        .s1()
        .gen2(n, nome)?
        .left_mul(&t.gen2(n, nome)?.right_mul(&t.s2(q).gen1(n, nome)?.entries));
    Ok((lhs, rhs))
}

/// `M(a,k) M(k,a) = 1`, `M(k,a) M(a,k) = 1` and
/// `D(t̃; qt̃/c, qt̃/b) D(t̃; b, c) = 1`, residuals measured with
/// [`INVERSION_FLOOR`]. The detail `conditioning` is the largest entry of
/// `|M(a,k)|·|M(k,a)|` and `|M(k,a)|·|M(a,k)|`, which grows quickly with
/// `|k/a|` and `|a/k|`.
pub fn verify_inversions(params: &DiscreteParams) -> Result<VerificationReport> {
    let (n, nome) = (params.n(), params.nome());
    let q = nome.q();
    let (a, k, tt, b, c) = (params.a(), params.k(), params.t_tilde(), params.b(), params.c());
    let mak = build_m(n, a, k, nome)?.entries;
    let mka = build_m(n, k, a, nome)?.entries;
    let (r1, l1, rr1) = identity_residual(&mak.dot(&mka));
    let (r2, l2, rr2) = identity_residual(&mka.dot(&mak));
    let abs = |x: &Array2<C64>| x.mapv(|v| C64::new(v.norm(), 0.0));
    let conditioning = [abs(&mak).dot(&abs(&mka)), abs(&mka).dot(&abs(&mak))]
        .iter()
        .flat_map(|x| x.iter().map(|v| v.re).collect::<Vec<_>>())
        .fold(1.0, f64::max);
    let d = build_d(n, tt, q * tt / c, q * tt / b, nome)?.left_mul(&build_d(n, tt, b, c, nome)?.to_dense());
    let (r3, l3, rr3) = identity_residual(&d);
    let (res, l, r) = [(r1, l1, rr1), (r2, l2, rr2), (r3, l3, rr3)]
        .into_iter()
        .fold((0.0, C64::default(), C64::default()), |acc, x| if x.0 > acc.0 || x.0.is_nan() { x } else { acc });
    let report = VerificationReport::new("inversions", l, r, res, KEY_IDENTITY_TOL)
        .detail("m_ak_m_ka", r1)
        .detail("m_ka_m_ak", r2)
        .detail("d_inverse", r3)
        .detail("conditioning", conditioning);
    Ok(with_inputs(report, params))
}

fn qpoch_finite(z: C64, q: C64, n: usize) -> C64 {
    (0..n).map(|j| 1.0 - z * q.powi(j as i32)).product()
}

/// `M_Nm(a,k)` at `p = 0`, from finite q-Pochhammer symbols.
fn bressoud_entry(n: usize, m: usize, a: C64, k: C64, q: C64) -> C64 {
    if m > n {
        return C64::default();
    }
    qpoch_finite(k, q, n + m) * qpoch_finite(k / a, q, n - m)
        / (qpoch_finite(q * a, q, n + m) * qpoch_finite(q, q, n - m))
        * (1.0 - a * q.powi(2 * m as i32))
        / (1.0 - a)
        * a.powi((n - m) as i32)
}

/// Value at 0 of the polynomial through `(x_i, v_i)`.
pub(crate) fn neville_at_zero(xs: &[f64], vs: &[C64]) -> C64 {
    xs.iter()
        .enumerate()
        .map(|(i, &xi)| {
            let w: f64 = xs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &xj)| -xj / (xi - xj))
                .product();
            vs[i] * w
        })
        .sum()
}

/// As `p → 0` with `q` fixed, `M(a,k)` tends to the matrix built from
/// ordinary q-Pochhammer symbols.
///
/// The matrix is evaluated at `p ∈ {1e-4, 1e-6, 1e-8}` and extrapolated to
/// `p = 0`; the main residual compares the extrapolation with the `p = 0`
/// matrix, and the detail `smallest_p` compares the `p = 1e-8` matrix
/// directly.
pub fn bressoud_limit_check(n: usize, a: C64, k: C64, q: C64) -> Result<VerificationReport> {
    let mats = BRESSOUD_NOMES
        .iter()
        .map(|&p| build_m(n, a, k, &NomePair::new(C64::new(p, 0.0), q)?).map(|m| m.entries))
        .collect::<Result<Vec<_>>>()?;
    let limit = Array2::from_shape_fn((n + 1, n + 1), |(row, m)| bressoud_entry(row, m, a, k, q));
    let extrapolated = Array2::from_shape_fn((n + 1, n + 1), |idx| {
        let vs: Vec<C64> = mats.iter().map(|m| m[idx]).collect();
        neville_at_zero(&BRESSOUD_NOMES, &vs)
    });
    let (res, l, r) = compare(&extrapolated, &limit, RESIDUAL_FLOOR);
    let (direct, _, _) = compare(&mats[2], &limit, RESIDUAL_FLOOR);
    let mut settings = CheckSettings::from_nome(&NomePair::new(C64::new(BRESSOUD_NOMES[2], 0.0), q)?);
    settings.matrix_size = Some(n + 1);
    Ok(VerificationReport::new("bressoud_limit", l, r, res, BRESSOUD_TOL)
        .input("a", a)
        .input("k", k)
        .input("q", q)
        .detail("smallest_p", direct)
        .settings(settings))
}
