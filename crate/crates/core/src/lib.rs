//! Thurston's asymmetric metric and the length-spectrum metric between
//! marked hyperbolic structures on punctured surfaces.
//!
//! Distances are estimated two ways from the same marked pair of Fuchsian
//! groups: from multipliers of hyperbolic elements, and from translation
//! vectors of parabolic elements once a common cusp has been normalized to
//! `z ↦ z + 1`. Both are lower bounds taken over a finite set of words and
//! converge as the word-length cutoff grows.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;

pub mod boundary;
pub mod marked_group;
pub mod moebius;
pub mod report;
pub mod spectra;
pub mod tol;

pub use error::Error;
pub use marked_group::{MarkedGroup, MarkedIsomorphism, Word};
pub use moebius::{cross_ratio, ExtendedReal, IsometryClass, IsometryKind, MoebiusMap};
pub use tol::Tolerances;
