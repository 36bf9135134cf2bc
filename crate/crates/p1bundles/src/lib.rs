//! Exact computations with P¹-bundles over Hirzebruch surfaces and over P²:
//! canonical forms, transition-matrix splitting and jumping fibres, moduli
//! actions, Schwarzenberger identities, elementary links and classification.

pub mod bundles;
pub mod classify;
pub mod error;
pub mod exactalg;
pub mod json;
pub mod links;
pub mod moduli;
pub mod schwarzenberger;
pub mod transitions;

pub use error::{Error, Result};
