use thiserror::Error;

/// Errors raised by the field, oracle and model routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric parameter lies outside its allowed domain.
    #[error("parameter `{name}` = {value} is outside its domain: {constraint}")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// The network is malformed (ports, cycles, cuts).
    #[error("network structure error: {0}")]
    Structure(String),

    /// Inputs to a propagation are incomplete.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// A label did not name anything in the network.
    #[error("no {kind} labelled `{label}`")]
    Lookup { kind: &'static str, label: String },

    /// A splitter with T = 0 or T = 1 admits only one outcome.
    #[error("degenerate splitter (T = {transmission}): only one outcome is possible")]
    DegenerateSplitter { transmission: f64 },

    /// The required correlation for this outcome diverges; the outcome has zero probability.
    #[error("required correlation diverges for outcome {outcome} at T = {transmission}")]
    Divergence { outcome: &'static str, transmission: f64 },

    /// The post-selected state is orthogonal to the pre-selected one.
    #[error("post-selection impossible: |<post|pre>| = {overlap:e}")]
    PostSelectionImpossible { overlap: f64 },

    /// The hidden-field condition for this outcome has no positive solution at this phase.
    #[error("outcome {outcome} has no solution at theta = {theta} (sin theta = {sin_theta:e})")]
    NoSolution {
        outcome: &'static str,
        theta: f64,
        sin_theta: f64,
    },

    /// The background intensity is too small to keep every arm non-negative.
    #[error("background I_Z = {background} is below the non-negativity floor {floor}")]
    InsufficientBackground { background: f64, floor: f64 },

    /// A sampler was asked for zero records.
    #[error("requested an empty sample")]
    EmptyRequest,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
