//! Covariant, linear, permutation-invariant two-particle quantum maps.
//!
//! A single input state of an `N`-level system, written as a generalized Bloch
//! vector over the traceless generators `A_ij`, is mapped to a two-particle
//! state by a three-parameter family `(alpha, beta, C)`. Two members of the
//! family are distinguished: the optimal universal cloner and the optimal
//! universal entangler, whose output is the normalized projector onto the
//! antisymmetric subspace.
//!
//! Module map:
//! - [`bloch`]: generator basis, Bloch encoding, Haar unitaries, rotation law
//! - [`covmap`]: the map family, canonical-input coefficients, positivity
//!   constraints and the physical-region scanner
//! - [`processes`]: Bell families and the two distinguished processes
//! - [`analysis`]: entropy, partial trace/transpose, two-party expansion,
//!   separation from the maximally mixed state, grid-search oracles
//! - [`verify`]: seeded property suites used by the `verify` subcommand
//! - [`cli`]: the command-line front-end

pub mod analysis;
pub mod bloch;
pub mod cli;
pub mod covmap;
pub mod error;
pub mod linalg;
pub mod processes;
pub mod state;
pub mod verify;

pub use bloch::{BlochRotation, BlochVector, GeneratorBasis};
pub use covmap::{CanonicalCoefficients, MapParams};
pub use error::{Error, Result};
pub use state::DensityMatrix;
