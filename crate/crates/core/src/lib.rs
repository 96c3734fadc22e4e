//! Exact degrees-of-freedom regions of the two-user MIMO broadcast channel
//! with private and common messages under hybrid CSIT.
//!
//! The crate is organised around five layers:
//!
//! * [`scenario`] and [`polytope`]: antenna configurations, CSIT models,
//!   message sets and an exact-rational halfspace polytope engine.
//! * [`catalog`]: the closed-form regions for private messages (BC-PM),
//!   the degraded message set (BC-DM) and private plus common messages
//!   (BC-CM), the devolution outer bound and the corner-to-scheme map.
//! * [`linalg`]: exact rational matrices, fraction-free rank, nullspaces
//!   and seeded generic channel sampling.
//! * [`schemes`]: explicit multi-slot linear precoders, the rank-based
//!   decodability test and time-sharing decomposition of region points.
//! * [`lemmas`]: Monte-Carlo checks of the rank lemmas behind the converse
//!   proofs, including the block-diagonal canonicalization of a precoder.
//!
//! [`cli`] wires everything into the `bcdof` binary.
//!
//! ```
//! use bcdof::catalog::bc_cm_region;
//! use bcdof::scenario::{AntennaConfig, CsitModel};
//!
//! let cfg = AntennaConfig::new(3, 2, 1).unwrap();
//! let (region, _label) = bc_cm_region(cfg, "DD".parse::<CsitModel>().unwrap());
//! assert_eq!(region.vertices().unwrap().len(), 6);
//! ```

pub mod catalog;
pub mod cli;
pub mod lemmas;
pub mod linalg;
pub mod polytope;
pub mod rational;
pub mod scenario;
pub mod schemes;

pub use rational::Rational;
