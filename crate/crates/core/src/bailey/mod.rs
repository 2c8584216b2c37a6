//! Discrete Bailey matrices and the matrix Bailey lemma.
//!
//! `M(a,k)` is the lower-triangular matrix with entries
//!
//! ```text
//! M_Nm(a,k) = θ(k)_{N+m} θ(k/a)_{N−m} / (θ(qa)_{N+m} θ(q)_{N−m})
//!             · θ(a q^{2m}; p) / θ(a; p) · a^{N−m}
//! ```
//!
//! and `D(a;b,c)` the diagonal matrix
//! `D_m = θ(b)_m θ(c)_m / (θ(aq/b)_m θ(aq/c)_m) · (aq/(bc))^m`.
//! Sequences `(α, β)` with `β = M(a,k) α` are Bailey pairs. For
//! `k b c = q a t̃` the key identity
//!
//! ```text
//! M(a,k) D(a;b,c) M(t̃,a) = D(k; qt̃/b, qt̃/c) M(t̃,k) D(t̃;b,c)
//! ```
//!
//! turns a pair at `(a, t̃)` into a pair at `(a, k)`. Reading `M` and `D` as
//! generators acting on the ordered triple `(t̃, a, k)`, the same identity is
//! the cubic Coxeter relation `S₁S₂S₁ = S₂S₁S₂` (see [`ParamTriple`]).
//!
//! # Conditioning
//!
//! Entry `(N, m)` of the left-hand side is a terminating sum whose terms can
//! be many orders of magnitude larger than the result, in particular for
//! parameters with widely spread phases, small `q` or large `p`. Every
//! matrix-Bailey report carries the amplification factor as the detail
//! `conditioning`; an entrywise residual of about `conditioning × 1e-15` is
//! what double precision can deliver. Long theta products are accumulated
//! with a separate binary exponent, so entries stay finite even when the
//! individual Pochhammer symbols do not fit in an `f64`.

mod lemma;
mod matrix;
mod params;
mod verify;

pub use lemma::{bailey_transform, pair_residual, BaileySequence, SequenceRole};
pub use matrix::{build_d, build_m, d_entry, m_entry, BaileyMatrix, DiagonalOp};
pub use params::{derive_bc, DiscreteParams, ParamTriple, PRODUCT_RULE_TOL};
pub(crate) use verify::neville_at_zero;
pub use verify::{
    bressoud_limit_check, key_identity_sides, verify_coxeter, verify_inversions,
    verify_matrix_bailey, INVERSION_FLOOR,
};
