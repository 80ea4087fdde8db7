//! A laboratory for random Gale diagrams.
//!
//! The crate samples Gale diagrams of random polytopes, counts faces of the
//! induced polytopes purely combinatorially, evaluates exact expected face
//! numbers and neighborliness thresholds, and cross-validates everything
//! against independent brute-force oracles.
//!
//! All combinatorial decisions run over exact rational arithmetic: sampled
//! floating-point coordinates are rationalized bit-exactly, and every
//! geometric predicate is an exact linear-programming feasibility question
//! with a verified certificate. Floating point only enters statistics
//! (means, standard errors) and the asymptotic threshold curves.
//!
//! Module map:
//! - [`exactcomb`]: arbitrary-precision binomials, Wendel probabilities,
//!   exact expected face numbers and the Boole lower bound.
//! - [`asymptotics`]: the entropy function, the exponent governing the
//!   phase transition, and the strong/weak threshold curves.
//! - [`geomcore`]: exact predicates on rational vector configurations
//!   (general position, origin-in-convex-hull with certificates).
//! - [`galecore`]: Gale transforms in both directions, face counting via
//!   the Gale criterion, neighborliness predicates.
//! - [`simulate`]: seeded, reproducible Monte Carlo over random diagrams
//!   and random cones.
//! - [`oracle`]: deliberately naive brute-force checks (sign-pattern
//!   enumeration, supporting-hyperplane face enumeration).

pub mod asymptotics;
pub(crate) mod combi;
pub mod error;
pub mod exactcomb;
pub mod galecore;
pub mod geomcore;
pub(crate) mod linalg;
pub mod lp;
pub mod oracle;
pub mod ratio;
pub mod simulate;

pub use error::{Error, Result};
