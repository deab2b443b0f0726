//! Double-slit diffraction simulation and forensic analysis.
//!
//! The crate predicts the far-field pattern of a described apparatus,
//! synthesises traces on a virtual line camera, extracts the fringe
//! visibility statistic `R = P_K / P_1` from a trace's power spectrum,
//! converts `R` to visibility under two envelope models, and audits an
//! apparatus description against the features of an observed pattern.
//!
//! Runnable walkthroughs live in `examples/`; `cargo run --example <name>`.

pub mod audit;
pub mod cli;
pub mod config;
pub mod error;
pub mod fringe_metrics;
pub mod geometry;
pub mod io;
pub mod peaks;
pub mod spectral;
pub mod svg;
pub mod synthesis;

pub use error::{Error, Result};
pub use geometry::{ApparatusConfig, FringePrediction};
pub use spectral::PowerSpectrum;
pub use synthesis::{SynthesisParams, Trace};
