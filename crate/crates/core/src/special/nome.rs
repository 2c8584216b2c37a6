use std::f64::consts::PI;

use super::{check_base, qpochhammer_inf, TruncationPolicy};
use crate::{Result, C64};

/// The two bases `(p, q)` together with the constants derived from them.
#[derive(Clone, Debug, PartialEq)]
pub struct NomePair {
    p: C64,
    q: C64,
    policy: TruncationPolicy,
    p_poch: C64,
    q_poch: C64,
}

impl NomePair {
    pub fn new(p: C64, q: C64) -> Result<Self> {
        Self::with_policy(p, q, TruncationPolicy::default())
    }

    pub fn real(p: f64, q: f64) -> Result<Self> {
        Self::new(C64::new(p, 0.0), C64::new(q, 0.0))
    }

    pub fn with_policy(p: C64, q: C64, policy: TruncationPolicy) -> Result<Self> {
        check_base("p", p)?;
        check_base("q", q)?;
        Ok(NomePair {
            p,
            q,
            policy,
            p_poch: qpochhammer_inf(p, p, &policy)?,
            q_poch: qpochhammer_inf(q, q, &policy)?,
        })
    }

    #[inline]
    pub fn p(&self) -> C64 {
        self.p
    }

    #[inline]
    pub fn q(&self) -> C64 {
        self.q
    }

    #[inline]
    pub fn policy(&self) -> &TruncationPolicy {
        &self.policy
    }

    /// `(p;p)∞`
    pub fn p_poch(&self) -> C64 {
        self.p_poch
    }

    /// `(q;q)∞`
    pub fn q_poch(&self) -> C64 {
        self.q_poch
    }

    /// `κ = (p;p)∞ (q;q)∞ / (4πi)`
    pub fn kappa(&self) -> C64 {
        self.p_poch * self.q_poch / C64::new(0.0, 4.0 * PI)
    }

    /// The same nome with the roles of `p` and `q` exchanged.
    pub fn swapped(&self) -> Self {
        NomePair {
            p: self.q,
            q: self.p,
            policy: self.policy,
            p_poch: self.q_poch,
            q_poch: self.p_poch,
        }
    }

    pub fn with_truncation(&self, policy: TruncationPolicy) -> Result<Self> {
        Self::with_policy(self.p, self.q, policy)
    }

    /// Principal square root of `pq`.
    pub fn sqrt_pq(&self) -> C64 {
        (self.p * self.q).sqrt()
    }
}
