//! Domino shuffling on the square lattice with doubly periodic edge weights.
//!
//! The crate bundles four layers that the growth experiments combine:
//!
//! * [`lattice`] — dimer configurations, regions and the quarter-integer
//!   height function;
//! * [`weights`] — periodic weightings, their deterministic evolution under
//!   the shuffle, and gauge bookkeeping;
//! * [`shuffle`] — the stochastic shuffling map itself: exact Aztec diamond
//!   sampling and local window evolution under a global monotone coupling;
//! * [`kasteleyn`], [`thermo`], [`growth`] — the transfer-matrix side:
//!   characteristic polynomials, Ronkin function and surface tension, phase
//!   classification, Gibbs edge probabilities, and the two growth-speed
//!   estimators they feed.

pub mod error;
pub mod growth;
pub mod io;
pub mod kasteleyn;
pub mod lattice;
pub mod patterns;
pub mod poly;
pub mod shuffle;
pub mod thermo;
pub mod util;
pub mod weights;

pub use error::{Error, Result};

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod guide_introduction {}
#[doc = include_str!("../../../book/src/heights.md")]
pub mod guide_heights {}
#[doc = include_str!("../../../book/src/shuffling.md")]
pub mod guide_shuffling {}
#[doc = include_str!("../../../book/src/weights.md")]
pub mod guide_weights {}
#[doc = include_str!("../../../book/src/kasteleyn.md")]
pub mod guide_kasteleyn {}
#[doc = include_str!("../../../book/src/thermodynamics.md")]
pub mod guide_thermodynamics {}
#[doc = include_str!("../../../book/src/growth.md")]
pub mod guide_growth {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod guide_cli {}
