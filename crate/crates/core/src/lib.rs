// SPDX-License-Identifier: Apache-2.0

//! Threshold functions inside clones of Boolean functions.
//!
//! The crate decides thresholdness exactly (with certificates either way),
//! checks preservation of the relational constraints `B_ℓ` both by raw column
//! enumeration and by the multiset-sum characterization, tests membership in
//! every clone of Post's lattice, applies the separating constructions
//! `G_S`, `G_Mc`, `G_SM`, `G_U∞`, `G_McU∞`, `G_McW∞` with witness transport,
//! and builds the Taylor–Zwicker magic-square functions `f_k`.

pub mod asummability;
pub mod boolfn;
pub mod clones;
pub mod constraints;
pub mod constructions;
pub mod error;
pub mod exec;
pub mod report;
pub mod suite;
pub mod threshold;
pub mod tz;

pub use boolfn::{BoolFn, MinorMap, Point};
pub use error::{Error, Result};
pub use exec::Exec;
