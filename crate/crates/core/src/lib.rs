//! Elliptic gamma and theta functions, the elliptic Bailey matrices, and the
//! integral operators they come from, together with numerical checks of the
//! identities tying them together.
//!
//! The crate is organised bottom-up:
//!
//! * [`special`] evaluates q-Pochhammer products, the short theta function,
//!   the elliptic gamma function and elliptic Pochhammer symbols with an
//!   explicit truncation policy.
//! * [`bailey`] builds the triangular Bailey matrix `M(a,k)` and the
//!   diagonal operator `D(a;b,c)`, runs the discrete Bailey lemma, and checks
//!   the key matrix identity and its Coxeter-relation form.
//! * [`contour`] evaluates the elliptic Fourier transform and related
//!   contour integrals with the trapezoid rule on circles, including the
//!   elliptic beta integral, the star-triangle relation and the residue
//!   reduction from integrals to matrices.
//! * [`harness`] runs seeded, reproducible verification campaigns and
//!   produces [`VerificationReport`]s.

pub mod bailey;
pub mod contour;
mod error;
pub mod harness;
pub mod report;
pub mod special;

pub use error::{Error, Result};
pub use report::VerificationReport;
pub use special::{NomePair, TruncationMode, TruncationPolicy};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex<f64>;
