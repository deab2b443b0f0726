//! Feature extraction, envelope fitting and the apparatus audit.

pub mod features;
pub mod fit;
pub mod report;

pub use features::{extract_features, recenter_trace, reported_pattern, ObservedFeatures};
pub use fit::{fit_envelope_a, EnvelopeFit};
pub use report::{audit, AuditReport, Check, Verdict};
