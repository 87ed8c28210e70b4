//! Calibrated geometry and algebraic topology of oriented Grassmannians.
//!
//! Numeric side: sparse exterior algebra over R^n (n <= 8), orthonormal
//! frames on the oriented Grassmannian, Riemannian ascent for comass and
//! critical-point classification of calibration forms, free-dimension
//! certification, Gauss-map degrees of surfaces in R^4.
//!
//! Exact side: finitely generated abelian groups via Smith normal form over
//! BigInt, chain-complex homology, universal coefficients, Serre spectral
//! sequence scenarios with unknown slots solved by exhaustive differential
//! search, truncated-polynomial cohomology rings, and a registry of known
//! results the whole battery is checked against.

pub mod exterior;
pub mod grassmann;
pub mod optimize;
pub mod calibrations;
pub mod fgab;
pub mod spectral;
pub mod ring;
pub mod slfree;
pub mod registry;
pub mod verify;

/// Default RNG seed for every randomized routine when none is supplied.
/// Override per call or with CALGRASS_SEED in the CLI.
pub const DEFAULT_SEED: u64 = 0x00CA_11B8_A7ED_57A7;

#[derive(thiserror::Error, Debug)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse: {0}")]
    Parse(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("numeric check failed: {0}")]
    Numeric(String),
    #[error("exact check failed: {0}")]
    Exact(String),
}

pub type Result<T> = std::result::Result<T, Error>;
