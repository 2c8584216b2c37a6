use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationMode {
    /// Always use `max_terms` factors per product dimension.
    FixedTerms,
    /// Choose the order from the tail bound and `target_rel_tol`.
    Adaptive,
}

/// How infinite products are cut off.
///
/// For a single product `∏_{j≥0} (1 − z bʲ)` truncated after `J` factors,
/// the neglected tail satisfies `|log ∏_{j≥J}(1 − z bʲ)| ≤ C·|b|^J` with
/// `C = 2|z| / (1 − |b|)`, valid once `|z||b|^J ≤ 1/2`. Adaptive mode picks
/// the smallest such `J` with `C·|b|^J < target_rel_tol`. The same bound is
/// used row by row for the double product of the elliptic gamma function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub target_rel_tol: f64,
    pub max_terms: usize,
    pub mode: TruncationMode,
    /// A gamma denominator factor `1 − z pʲ qᵏ` with modulus below
    /// `pole_guard·|z|`, or a theta factor below `pole_guard` that has to be
    /// inverted, is reported as an error instead of being divided by.
    pub pole_guard: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            target_rel_tol: 1e-16,
            max_terms: 4096,
            mode: TruncationMode::Adaptive,
            pole_guard: 1e-13,
        }
    }
}

impl TruncationPolicy {
    pub fn adaptive(target_rel_tol: f64) -> Self {
        TruncationPolicy {
            target_rel_tol,
            ..Default::default()
        }
    }

    pub fn fixed(terms: usize) -> Self {
        TruncationPolicy {
            max_terms: terms,
            mode: TruncationMode::FixedTerms,
            ..Default::default()
        }
    }

    /// Number of factors of `∏_{j≥0}(1 − z bʲ)` to keep, for `|b| = base`
    /// and `|z| = scale`.
    pub fn product_order(&self, base: f64, scale: f64) -> usize {
        if self.mode == TruncationMode::FixedTerms {
            return self.max_terms;
        }
        if base == 0.0 || scale == 0.0 {
            return 1;
        }
        let mut term = scale;
        let mut order = 0;
        while order < self.max_terms {
            if term <= 0.5 && 2.0 * term / (1.0 - base) < self.target_rel_tol {
                break;
            }
            term *= base;
            order += 1;
        }
        order.max(1)
    }

    /// Upper bound on the relative size of the tail neglected after `order`
    /// factors; infinite when the bound does not apply yet.
    pub fn tail_bound(base: f64, scale: f64, order: usize) -> f64 {
        let term = scale * base.powi(order as i32);
        if term > 0.5 {
            f64::INFINITY
        } else {
            2.0 * term / (1.0 - base)
        }
    }

    /// Per-factor cutoff for the double product over `pʲqᵏ`.
    ///
    /// Rows `j` with `scale·|p|ʲ < δ` are dropped, and inside a kept row
    /// factors with `scale·|p|ʲ|q|ᵏ < δ` are dropped. With `R` kept rows the
    /// neglected part is bounded by
    /// `2δ·(R/(1 − |q|) + 1/((1 − |p|)(1 − |q|)))`; `δ` is chosen so that this
    /// stays below the target. Returns the number of rows and `δ`.
    pub fn double_product_cutoff(&self, rp: f64, rq: f64, scale: f64) -> (usize, f64) {
        let rows_for = |delta: f64| -> usize {
            if rp == 0.0 || scale < delta {
                1
            } else {
                let rows = ((delta / scale).ln() / rp.ln()).ceil();
                (rows.max(1.0) as usize).min(self.max_terms)
            }
        };
        let excluded = 1.0 / ((1.0 - rp) * (1.0 - rq));
        let mut delta = self.target_rel_tol.min(0.5);
        let mut rows = rows_for(delta);
        for _ in 0..8 {
            let next = (self.target_rel_tol / (2.0 * (rows as f64 / (1.0 - rq) + excluded))).min(0.5);
            let next_rows = rows_for(next);
            delta = next;
            if next_rows == rows {
                break;
            }
            rows = next_rows;
        }
        (rows_for(delta), delta)
    }
}
