//! Exact vertex-isoperimetry toolkit for hypercubes `Q_n` and Hamming balls
//! `B_n(R)`.
//!
//! Families of subsets of `[n]` come in two flavours: [`ExplicitFamily`]
//! (bit-vector members, `n <= 24`) and [`ProfileFamily`] (families symmetric
//! under a bipartition `Y / Y^c`, counted exactly at any `n`). On top of them
//! the crate computes shadows and vertex boundaries, evaluates the
//! isoperimetric bounds exactly, builds the half-space constructions, runs
//! brute-force and sampled searches, and checks the quadratic machinery and
//! polynomial identities behind the local expansion inequality.
//!
//! Every verdict is decided in exact integer or rational arithmetic. Values
//! involving a square root are carried as [`Surd`]s and compared in squared
//! form.

pub mod analysis;
pub mod boundary;
pub mod bounds;
pub mod constructions;
mod error;
pub mod exactmath;
pub mod families;
pub mod search;

pub use error::{Error, Result};
pub use exactmath::{Natural, Rational, Surd};
pub use families::{ExplicitFamily, Family, PaddedProfileFamily, ProfileFamily, VertexSet};
