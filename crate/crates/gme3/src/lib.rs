//! Geometric measure of entanglement for three-qubit pure states.
//!
//! For a pure state |psi> the geometric measure is `E_g = 1 - Lambda^2`,
//! where `Lambda` is the largest overlap between |psi> and any product
//! state |q1>|q2>|q3>. This crate computes `Lambda^2`, `E_g` and the
//! nearest product states by three independent routes:
//!
//! * closed forms for the W-type, symmetric and W/W-tilde superposition
//!   families ([`families`]),
//! * a solver for the stationarity equations of the overlap on the pair
//!   of Bloch spheres that survive after the third qubit is eliminated
//!   ([`stationarity`]),
//! * a brute-force grid-plus-refinement maximizer that assumes nothing
//!   about the state ([`oracle`]).
//!
//! [`nearest::measure`] ties the routes together behind a policy switch and
//! recovers the nearest separable states, including the one-parameter
//! family that appears for acute W-type states.
//!
//! # Examples
//!
//! The `examples/` directory is the front door; each file exercises one
//! capability end to end:
//!
//! ```text
//! cargo run --example named_states          # measure W, GHZ, W-tilde
//! cargo run --example wtype_triangles       # circumradius law on the triangle simplex
//! cargo run --example symmetric_states      # (1+|r|)/2 rule and the GHZ nearest pair
//! cargo run --example ww_sweep              # W/W-tilde superpositions vs. the oracle
//! cargo run --example stationary_vs_oracle  # generic states, both numeric routes
//! cargo run --example nearest_family        # degenerate nearest-state families
//! cargo run --example state_from_json       # state file round trip
//! ```
//!
//! A thin binary (`gme3`) exposes the same machinery as `compute`, `sweep`
//! and `check` subcommands; see the README.
//!
//! # Quick start
//!
//! ```
//! use gme3::nearest::{measure, MeasureOptions};
//! use gme3::state::PureState3;
//!
//! let w = PureState3::w();
//! let out = measure(&w, &MeasureOptions::default()).unwrap();
//! assert!((out.lambda_sq - 4.0 / 9.0).abs() < 1e-10);
//! assert!((out.e_g - 5.0 / 9.0).abs() < 1e-10);
//! ```

pub mod cli;
pub mod families;
pub mod linalg;
pub mod nearest;
pub mod oracle;
pub mod state;
pub mod stationarity;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Amplitude vector with zero norm; no state can be formed.
    #[error("null state: amplitude vector has zero norm")]
    NullState,
    /// A state failed the unit-norm requirement.
    #[error("state norm deviates from 1 by {0:.3e}")]
    NotNormalized(f64),
    /// A Bloch vector failed the unit-norm requirement.
    #[error("Bloch vector norm deviates from 1 by {0:.3e}")]
    NotUnitBloch(f64),
    /// Contraction of the state with two single-qubit factors vanished,
    /// so no third factor can be recovered.
    #[error("orthogonal pair: contraction norm {0:.3e} is below 1e-14")]
    OrthogonalPair(f64),
    /// The stationarity solver found no root from any start.
    #[error("no stationary point found")]
    NoStationaryPoint,
    /// The acute-branch angle equations have no solution for these
    /// parameters.
    #[error("acute branch: |cos alpha| = {0} exceeds 1")]
    AcuteBranch(f64),
    /// A policy that requires an analytic family was given a state
    /// outside every family.
    #[error("state does not belong to an analytic family")]
    NotFamily,
    /// A family constructor or CLI argument was out of its domain.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    /// Malformed textual input (state file or family literal).
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Numerical tolerances used across the crate.
///
/// Everything user-visible is pinned here so the test suite and the
/// documentation can point at a single place.
pub mod tol {
    /// Stored states are unit vectors up to this slack.
    pub const STATE_NORM: f64 = 1e-12;
    /// Bloch vectors entering the overlap form must be unit up to this.
    pub const BLOCH_NORM: f64 = 1e-10;
    /// Pair reductions of a valid density matrix are real; larger
    /// imaginary residues indicate an internal error.
    pub const IMAG_RESIDUE: f64 = 1e-12;
    /// Stationary points must satisfy the stationarity equations and the
    /// unit-norm constraints to this residual.
    pub const STATIONARY_RESIDUAL: f64 = 1e-10;
    /// Relative determinant threshold below which the closed-form
    /// solution of the stationarity equations is treated as degenerate.
    pub const DEGENERATE_DET: f64 = 1e-9;
    /// Two stationary points whose Bloch vectors agree component-wise
    /// within this are the same point.
    pub const BLOCH_DEDUP: f64 = 1e-7;
    /// Smallest contraction norm from which a third factor is recovered.
    pub const CONTRACTION_MIN: f64 = 1e-14;
    /// Overlap improvements per oracle sweep below this stop refinement.
    pub const ORACLE_TOL: f64 = 1e-12;
    /// The oracle's alternating updates may never lose more than this
    /// per sweep; larger drops are an internal error.
    pub const MONOTONE_SLACK: f64 = 1e-13;
    /// Independent methods are expected to agree on `Lambda^2` to this;
    /// larger gaps are flagged and the oracle value wins.
    pub const METHOD_AGREEMENT: f64 = 1e-6;
    /// Every reported nearest product state reproduces `lambda_sq` to
    /// this tolerance.
    pub const NEAREST_REPRODUCE: f64 = 1e-9;
    /// Amplitude tolerance for detecting membership in an analytic
    /// family (off-pattern magnitudes and phase residues).
    pub const FAMILY_DETECT: f64 = 1e-12;
}
