//! Exact computer algebra for finite flat group schemes of order p^2 whose
//! generic fiber is a group of roots of unity.
//!
//! The crate provides:
//!
//! * exact arithmetic in truncated discrete valuation rings, mixed or equal
//!   characteristic, and in their finite quotients ([`dvr`]);
//! * p-typical Witt vector arithmetic with Frobenius, Verschiebung and the
//!   p = 2 twisted Verschiebung ([`witt`]);
//! * the Artin-Hasse exponential and its two-parameter deformation
//!   ([`artin_hasse`]);
//! * Hopf-algebra presentations of the deformed multiplicative group, its
//!   order-p kernels and the two-parameter order-p^2 families, with full
//!   axiom verification ([`group_scheme`]);
//! * the classification layer: the pair group Phi, canonical forms,
//!   isomorphism and Hom computations, exhaustive enumeration ([`classify`]);
//! * reduction of the families modulo pi and identification of the special
//!   fiber ([`special_fiber`]);
//! * the semilinear-algebra classification over k[[u]] with the cell-count
//!   cross-check ([`breuil_kisin`]).

pub mod artin_hasse;
pub mod breuil_kisin;
pub mod classify;
pub mod dvr;
pub mod error;
pub mod fq;
pub mod group_scheme;
pub mod json;
pub mod mpoly;
pub mod ring;
pub mod special_fiber;
pub mod witt;

pub use error::{Error, Result};
