//! Exact anticoncentration bounds for products of random two-point group
//! elements.
//!
//! The crate tabulates laws of products `X_1 * ... * X_n` on finite groups
//! with exact rational arithmetic, evaluates the signed-walk and binary-walk
//! upper bounds, verifies them by exhaustive search on small groups, and
//! estimates the same quantities by seeded simulation where tables are out
//! of reach.

pub mod bounds;
pub mod catalog;
pub mod decompose;
pub mod dist;
pub mod error;
pub mod group;
pub mod montecarlo;
pub mod rational;
pub mod rng;
pub mod search;

pub use error::{Error, Result};
pub use rational::Rational;
