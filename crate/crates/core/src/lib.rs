//! Exact-computation workbench for uniform families with bounded unions.
//!
//! A family `F` of k-subsets of `[n]` has property `U(s, q)` when any `s` of
//! its members span at most `q` elements. `m(n, k, s, q)` is the largest size
//! of such a family. The crate provides the k-set and family primitives, the
//! shifting machinery, exact property oracles, closed-form constructions and
//! bounds, and an exhaustive search that computes `m(n, k, s, q)` at small
//! scale.

pub mod binom;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod family;
pub mod kset;
pub mod profile;
pub mod properties;
pub mod search;
pub mod shift;

pub use catalog::{BoundKind, BoundRecord, Ledger, ParamQuad, Provenance};
pub use error::{Error, Result};
pub use family::Family;
pub use kset::{make_set, precedes, KSet};
pub use profile::UnionProfile;
