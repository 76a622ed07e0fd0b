//! Constrained classical-field models of single-photon optics.
//!
//! A photon is represented by a classical wave of unit intensity, accompanied
//! by unobserved background fields on every input and output. The models here
//! pick those hidden fields so that a whole experiment is solved at once, then
//! read off outcome probabilities and post-selected field averages. A standard
//! single-photon quantum calculation ([`oracle`]) serves as the reference.
//!
//! * [`field`], [`network`], [`geometry`]: amplitudes, networks and their propagation.
//! * [`oracle`]: path states, Born probabilities and weak values.
//! * [`simple`]: the pairing model and the entangled-pair account.
//! * [`improved`]: the all-equal background model, its quadrature and Monte Carlo.
//! * [`averages`]: required correlations, arm averages, weak-value comparison.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`.

pub mod averages;
pub mod error;
pub mod field;
pub mod geometry;
pub mod improved;
pub mod network;
pub mod oracle;
pub mod probability;
pub mod quadrature;
pub mod scalar;
pub mod simple;

pub use error::{Error, Result};
pub use probability::{Outcome, Probabilities};
pub use scalar::Scalar;

pub type Amplitude = field::ComplexAmplitude<f64>;
pub type Splitter = field::BeamsplitterSpec<f64>;
pub type Network = network::OpticalNetwork<f64>;
pub type Config<'n> = field::FieldConfiguration<'n, f64>;
pub type State = oracle::PathState<f64>;
pub type Diagram = simple::SimpleDiagram<f64>;
pub type Run = improved::RunRecord<f64>;
pub type Report = averages::AverageReport<f64>;
pub type Correlation = averages::CorrelationC<f64>;
pub type Distribution = probability::Probabilities<f64>;
pub type Joint = simple::JointTable<f64>;
