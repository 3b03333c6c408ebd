//! Exact computation of nonabelian first cohomology of finite groups and
//! homotopy fixed points of finite groupoids under weak group actions,
//! with brute-force verification of the fixed-point comparison theorems
//! they satisfy.
//!
//! Everything here is finite and enumerable: groups are Cayley tables,
//! groupoids are explicit hom-sets, and every theorem-shaped statement is
//! checked by exhausting its quantifiers. Resource guards turn infeasible
//! instances into typed errors.

pub mod action;
pub mod cohomology;
pub mod corpus;
pub mod error;
pub mod group;
pub mod groupoid;
pub mod hfp;
pub mod shapiro;
pub mod shimura;
pub mod weak;

pub use error::{Error, Limits, Result};
