use super::{NomePair, TruncationMode};
use crate::{Error, Result, C64};

/// Elliptic gamma function
/// `Γ(z; p, q) = ∏_{j,k≥0} (1 − z⁻¹ p^{j+1} q^{k+1}) / (1 − z pʲ qᵏ)`.
///
/// The double product is taken row by row in `j` (powers of `p`), each row
/// running over powers of `q`, with the index set cut off as described in
/// [`TruncationPolicy`](super::TruncationPolicy). Each row is accumulated as
/// a separate numerator and denominator so there is one division per row.
pub fn elliptic_gamma(z: C64, nome: &NomePair) -> Result<C64> {
    let (p, q, policy) = (nome.p(), nome.q(), nome.policy());
    let one = C64::new(1.0, 0.0);
    if z == C64::new(0.0, 0.0) {
        return Err(Error::Domain("elliptic gamma evaluated at z = 0".into()));
    }
    let zero_step = p * q / z;
    let scale = z.norm().max(zero_step.norm());
    let guard = policy.pole_guard * z.norm();
    let guard_sqr = guard * guard;
    let (rp, rq) = (p.norm(), q.norm());

    let (rows, cutoff) = match policy.mode {
        TruncationMode::Adaptive => policy.double_product_cutoff(rp, rq, scale),
        TruncationMode::FixedTerms => (policy.max_terms, 0.0),
    };

    let mut acc = one;
    let mut pole_row = z;
    let mut zero_row = zero_step;
    let mut row_modulus = scale;
    for j in 0..rows {
        let cols = match policy.mode {
            TruncationMode::Adaptive => row_length(row_modulus, rq, cutoff, policy.max_terms),
            TruncationMode::FixedTerms => policy.max_terms - j,
        };
        let mut num = one;
        let mut den = one;
        let mut w_pole = pole_row;
        let mut w_zero = zero_row;
        for _ in 0..cols {
            let d = one - w_pole;
            if d.norm_sqr() < guard_sqr {
                return Err(Error::PoleProximity {
                    z,
                    distance: d.norm(),
                });
            }
            den *= d;
            num *= one - w_zero;
            w_pole *= q;
            w_zero *= q;
        }
        acc *= num / den;
        pole_row *= p;
        zero_row *= p;
        row_modulus *= rp;
    }
    Ok(acc)
}

fn row_length(row_modulus: f64, rq: f64, cutoff: f64, max_terms: usize) -> usize {
    if rq == 0.0 {
        return 1;
    }
    let mut m = row_modulus;
    let mut k = 0;
    while k < max_terms && (k == 0 || m >= cutoff) {
        m *= rq;
        k += 1;
    }
    k
}

/// `∏ Γ(args[i]; p, q)`.
pub fn gamma_product(args: &[C64], nome: &NomePair) -> Result<C64> {
    args.iter()
        .try_fold(C64::new(1.0, 0.0), |acc, &z| Ok(acc * elliptic_gamma(z, nome)?))
}

/// `lim_{z→1} (1 − z) Γ(z; p, q) = 1 / ((p;p)∞ (q;q)∞)`.
pub fn gamma_residue_constant(nome: &NomePair) -> C64 {
    C64::new(1.0, 0.0) / (nome.p_poch() * nome.q_poch())
}

/// Relative residual of the quadratic transformation
/// `Γ(z²) = Γ(±z, ±q^{1/2}z, ±p^{1/2}z, ±(pq)^{1/2}z)`.
pub fn gamma_quadratic_check(z: C64, nome: &NomePair) -> Result<f64> {
    let lhs = elliptic_gamma(z * z, nome)?;
    let shifts = [
        C64::new(1.0, 0.0),
        nome.q().sqrt(),
        nome.p().sqrt(),
        nome.sqrt_pq(),
    ];
    let mut rhs = C64::new(1.0, 0.0);
    for s in shifts {
        rhs *= elliptic_gamma(s * z, nome)? * elliptic_gamma(-s * z, nome)?;
    }
    Ok((lhs - rhs).norm() / lhs.norm())
}

/// Smallest of `|1 − u pʲ qᵏ|` (distance to the pole `p^{−j}q^{−k}`) and
/// `|1 − u⁻¹ p^{j+1} q^{k+1}|` (distance to the zero) over `j, k < 12`.
/// Samplers use this to keep arguments away from both lattices.
pub fn lattice_distance(u: C64, nome: &NomePair) -> f64 {
    let one = C64::new(1.0, 0.0);
    let (p, q) = (nome.p(), nome.q());
    let mut best = f64::INFINITY;
    let mut pj = one;
    for _ in 0..12 {
        let mut pq = pj;
        for _ in 0..12 {
            best = best
                .min((one - u * pq).norm())
                .min((one - pq * p * q / u).norm());
            pq *= q;
        }
        pj *= p;
    }
    best
}
