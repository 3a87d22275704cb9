//! Analysis of n-ary quasigroups of order 4: autotopy groups, semilinearity,
//! decomposition trees and extremal constructions.

pub mod autotopy;
pub mod construct;
pub mod decompose;
pub mod error;
pub mod perm;
pub mod quasigroup;
pub mod semilinear;

pub use autotopy::{
    analyze_autotopies, are_isotopic, atp_join, autotopy_group, is_autotopy, AutotopyGroup,
    SearchOptions,
};
pub use error::{Error, Result};
pub use perm::{Isotopy, Perm, Symbol};
pub use quasigroup::{compose_at, Code, Quasigroup};
