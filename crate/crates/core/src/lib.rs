//! Permutation groups, conjugacy classes, character tables and
//! Yetter-Drinfeld braidings over finite groups.

mod error;
pub use error::*;

pub mod backtrack;
pub mod chain;
pub mod chartab;
pub mod classify;
pub mod conj;
pub mod cyclotomic;
pub mod group;
pub mod perm;
pub mod quasireal;
pub mod ydmod;
