//! Fidelity and success probability of continuous-variable error correction
//! by teleportation through amplifier-distilled entanglement, and of the
//! concatenated repeater built from it.
//!
//! * [`amplifier`]: number-basis action of scissors and optimal amplifiers.
//! * [`ec_link`]: exact per-link fidelity and success probability.
//! * [`repeater`]: composition of identical links, fibre loss.
//! * [`optimizer`]: entanglement-strength optimisation under gain tuning.
//! * [`oracle`]: Fock-space simulation and quadrature cross-check.
//! * [`report`]: figure and table data sets, CSV output, verification.

pub mod amplifier;
pub mod ec_link;
pub mod error;
pub mod optimizer;
pub mod oracle;
pub mod radial;
pub mod repeater;
pub mod report;

pub use amplifier::{AmplifierKind, AmplifierModel};
pub use ec_link::{closed_form_n1, gain_tuned, link_metrics, EcParams, LinkMetrics};
pub use error::{Error, Result};
pub use radial::RadialPolyGaussian;
pub use repeater::{compose, ChainMetrics, FiberModel, RepeaterChain};
