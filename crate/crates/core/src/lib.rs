//! Condorcet-consistent ratings and rank aggregation from ordinal data.

// `!(x > 0.0)` also rejects NaN, which is the point of those checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod data;
pub mod error;
pub mod fenchel_young;
pub mod fixtures;
pub mod harness;
pub mod metrics;
pub mod posterior;
pub mod profile;
pub mod sco;
pub mod sigmoidal;

pub use error::{Error, Result};
pub use profile::{PreferenceProfile, Ranking, Vote};
