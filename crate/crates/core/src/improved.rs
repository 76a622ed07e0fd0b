//! The all-equal model: every hidden intensity on a splitter equals one value `I_Z`.
//!
//! With `I1 = I2 = IA = IB = I_Z` the only free parameters are `I_Z` and the
//! relative input phase `theta`. A detection at `A` forces
//!
//! ```text
//! 1 / sqrt(I_Z^2 + I_Z) = -sin(theta) sqrt(4T/R)        (needs sin(theta) < 0)
//! ```
//!
//! and a detection at `B` forces `1 / sqrt(I_Z^2 + I_Z) = sin(theta) sqrt(4R/T)`
//! (needs `sin(theta) > 0`). With the background prior `1 / sqrt(I_Z^2 + I_Z)`
//! and a flat phase prior, the weight of each on-shell phase is the prior
//! evaluated at its `I_Z`, and the outcome ratio comes out as `T / R`.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::averages::required_correlation_interferometer;
use crate::error::{Error, Result};
use crate::field::{propagate, BeamsplitterSpec, FieldConfiguration};
use crate::geometry::{self, DARK, PHOTON};
use crate::network::OpticalNetwork;
use crate::probability::{Outcome, Probabilities};
use crate::quadrature::{integrate, Quadrature, QuadratureOptions};
use crate::scalar::Scalar;

/// Background prior `P0(I_Z) ~ 1 / sqrt(I_Z^2 + I_Z)`, left unnormalised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImprovedPrior<T> {
    cutoff: T,
}

impl<T: Scalar> ImprovedPrior<T> {
    /// `cutoff` only matters when forming a normalised density; ratios ignore it.
    pub fn new(cutoff: T) -> Result<Self> {
        if cutoff.is_nan() || cutoff < T::zero() {
            return Err(Error::ParameterDomain {
                name: "cutoff",
                value: cutoff.to_f64().unwrap_or(f64::NAN),
                constraint: "cutoff >= 0",
            });
        }
        Ok(Self { cutoff })
    }

    /// Zero at or below the cutoff.
    pub fn density(&self, background: T) -> T {
        if background > self.cutoff {
            T::one() / (background * background + background).sqrt()
        } else {
            T::zero()
        }
    }
}

impl<T: Scalar> Default for ImprovedPrior<T> {
    fn default() -> Self {
        Self { cutoff: T::zero() }
    }
}

/// One run of a single-splitter experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunRecord<T> {
    /// Phase of the dark-port input relative to the photon input, in `[0, 2pi)`.
    pub theta: T,
    /// Common value of all four hidden intensities.
    pub background: T,
    pub outcome: Outcome,
    /// Prior weight of the on-shell background.
    pub weight: T,
}

impl<T: Scalar> RunRecord<T> {
    /// Propagates `sqrt(1 + I_Z)` on the photon port and `sqrt(I_Z) e^{i theta}` on
    /// the dark port through `network` (a single splitter).
    pub fn configuration<'n>(&self, network: &'n OpticalNetwork<T>) -> Result<FieldConfiguration<'n, T>> {
        let photon = Complex::new((T::one() + self.background).sqrt(), T::zero());
        let dark = Complex::from_polar(self.background.sqrt(), self.theta);
        propagate(network, &[(PHOTON, photon), (DARK, dark)])
    }
}

fn check_splitter<T: Scalar>(spec: &BeamsplitterSpec<T>) -> Result<()> {
    if spec.is_degenerate() {
        Err(Error::DegenerateSplitter {
            transmission: spec.transmission().to_f64().unwrap_or(f64::NAN),
        })
    } else {
        Ok(())
    }
}

/// Right-hand side `k` of the on-shell condition `1 / sqrt(I_Z^2 + I_Z) = k`.
pub fn on_shell_coefficient<T: Scalar>(theta: T, spec: &BeamsplitterSpec<T>, outcome: Outcome) -> Result<T> {
    check_splitter(spec)?;
    let (t, r) = (spec.transmission(), spec.reflection());
    let four = T::lit(4.0);
    let k = match outcome {
        Outcome::A => -theta.sin() * (four * t / r).sqrt(),
        Outcome::B => theta.sin() * (four * r / t).sqrt(),
    };
    if k > T::zero() {
        Ok(k)
    } else {
        Err(Error::NoSolution {
            outcome: outcome.label(),
            theta: theta.to_f64().unwrap_or(f64::NAN),
            sin_theta: theta.sin().to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// The unique positive `I_Z` solving the outcome's on-shell condition at phase `theta`.
pub fn iz_for_outcome<T: Scalar>(theta: T, spec: &BeamsplitterSpec<T>, outcome: Outcome) -> Result<T> {
    let k = on_shell_coefficient(theta, spec, outcome)?;
    // I^2 + I = 1/k^2  =>  I = (sqrt(1 + 4/k^2) - 1) / 2, written without cancellation
    let x = T::lit(4.0) / (k * k);
    Ok(x / (T::lit(2.0) * (T::one() + (T::one() + x).sqrt())))
}

/// Phase interval on which `outcome` has solutions.
pub fn theta_range<T: Scalar>(outcome: Outcome) -> (T, T) {
    match outcome {
        Outcome::A => (T::PI(), T::lit(2.0) * T::PI()),
        Outcome::B => (T::zero(), T::PI()),
    }
}

/// Exact values of the two phase integrals, `(4 sqrt(T/R), 4 sqrt(R/T))`.
pub fn theta_integrals_closed_form<T: Scalar>(spec: &BeamsplitterSpec<T>) -> Result<(T, T)> {
    check_splitter(spec)?;
    let (t, r) = (spec.transmission(), spec.reflection());
    let four = T::lit(4.0);
    Ok((four * (t / r).sqrt(), four * (r / t).sqrt()))
}

/// Numerical phase integral of the prior evaluated on-shell, for one outcome.
pub fn theta_integral<T: Scalar>(
    spec: &BeamsplitterSpec<T>,
    prior: &ImprovedPrior<T>,
    outcome: Outcome,
    opts: QuadratureOptions<T>,
) -> Result<Quadrature<T>> {
    check_splitter(spec)?;
    let (lo, hi) = theta_range::<T>(outcome);
    Ok(integrate(
        |theta| {
            iz_for_outcome(theta, spec, outcome)
                .map(|iz| prior.density(iz))
                .unwrap_or_else(|_| T::zero())
        },
        lo,
        hi,
        opts,
    ))
}

fn two_outcome_labels() -> [&'static str; 2] {
    [Outcome::A.label(), Outcome::B.label()]
}

fn degenerate_result<T: Scalar>(spec: &BeamsplitterSpec<T>) -> Probabilities<T> {
    let winner = if spec.transmission() == T::one() {
        Outcome::A
    } else {
        Outcome::B
    };
    Probabilities::certain(&two_outcome_labels(), winner.label())
}

/// Outcome probabilities from the closed-form phase integrals.
pub fn outcome_probabilities_improved<T: Scalar>(spec: &BeamsplitterSpec<T>) -> Probabilities<T> {
    match theta_integrals_closed_form(spec) {
        Ok((a, b)) => Probabilities::from_weights(vec![
            (Outcome::A.label().to_owned(), a),
            (Outcome::B.label().to_owned(), b),
        ]),
        Err(_) => degenerate_result(spec),
    }
}

/// Outcome probabilities from adaptive quadrature of the phase integrals.
pub fn outcome_probabilities_quadrature<T: Scalar>(
    spec: &BeamsplitterSpec<T>,
    prior: &ImprovedPrior<T>,
    opts: QuadratureOptions<T>,
) -> Probabilities<T> {
    if spec.is_degenerate() {
        return degenerate_result(spec);
    }
    let weight = |o| {
        theta_integral(spec, prior, o, opts)
            .map(|q| q.value)
            .unwrap_or_else(|_| T::zero())
    };
    Probabilities::from_weights(vec![
        (Outcome::A.label().to_owned(), weight(Outcome::A)),
        (Outcome::B.label().to_owned(), weight(Outcome::B)),
    ])
}

/// Record `index` of the stream identified by `seed`. Each index draws from its
/// own ChaCha stream, so records are independent of how the batch is split.
pub fn record_at<T: Scalar>(
    spec: &BeamsplitterSpec<T>,
    prior: &ImprovedPrior<T>,
    seed: u64,
    index: u64,
) -> Result<RunRecord<T>> {
    check_splitter(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let two_pi = T::lit(2.0) * T::PI();
    loop {
        let u: f64 = rng.gen();
        let theta = T::lit(u) * two_pi;
        if theta >= two_pi || theta.sin() == T::zero() {
            continue;
        }
        let outcome = if theta.sin() < T::zero() {
            Outcome::A
        } else {
            Outcome::B
        };
        let background = iz_for_outcome(theta, spec, outcome)?;
        return Ok(RunRecord {
            theta,
            background,
            outcome,
            weight: prior.density(background),
        });
    }
}

/// `n` seeded runs with uniform phase and prior importance weights.
pub fn sample_runs<T: Scalar>(spec: &BeamsplitterSpec<T>, n: usize, seed: u64) -> Result<Vec<RunRecord<T>>> {
    if n == 0 {
        return Err(Error::EmptyRequest);
    }
    let prior = ImprovedPrior::default();
    (0..n as u64).map(|i| record_at(spec, &prior, seed, i)).collect()
}

/// Same records as [`sample_runs`], generated on the rayon pool.
pub fn sample_runs_parallel<T: Scalar>(spec: &BeamsplitterSpec<T>, n: usize, seed: u64) -> Result<Vec<RunRecord<T>>> {
    if n == 0 {
        return Err(Error::EmptyRequest);
    }
    let prior = ImprovedPrior::default();
    (0..n as u64)
        .into_par_iter()
        .map(|i| record_at(spec, &prior, seed, i))
        .collect()
}

/// Weighted outcome frequency of a batch of runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedEstimate<T> {
    pub samples: usize,
    pub p_a: T,
    /// Delta-method standard error of the self-normalised estimate.
    pub standard_error: T,
}

impl<T: Scalar> WeightedEstimate<T> {
    pub fn p_b(&self) -> T {
        T::one() - self.p_a
    }

    pub fn probabilities(&self) -> Probabilities<T> {
        Probabilities::new(vec![
            (Outcome::A.label().to_owned(), self.p_a),
            (Outcome::B.label().to_owned(), self.p_b()),
        ])
    }
}

pub fn estimate<T: Scalar>(records: &[RunRecord<T>]) -> WeightedEstimate<T> {
    let total = records.iter().fold(T::zero(), |acc, r| acc + r.weight);
    let on_a = records
        .iter()
        .filter(|r| r.outcome == Outcome::A)
        .fold(T::zero(), |acc, r| acc + r.weight);
    let p_a = if total > T::zero() { on_a / total } else { T::zero() };
    let spread = records.iter().fold(T::zero(), |acc, r| {
        let y = if r.outcome == Outcome::A { T::one() } else { T::zero() };
        let d = r.weight * (y - p_a);
        acc + d * d
    });
    WeightedEstimate {
        samples: records.len(),
        p_a,
        standard_error: if total > T::zero() {
            spread.sqrt() / total
        } else {
            T::zero()
        },
    }
}

/// Splitters in a chain (see [`geometry::cascade`]). Equal hidden intensities
/// decouple the stages, so each stage is solved on its own and the branch
/// probabilities multiply along the path to each detector.
pub fn cascade_probabilities<T: Scalar>(specs: &[BeamsplitterSpec<T>]) -> Result<Probabilities<T>> {
    if specs.is_empty() {
        return Err(Error::Configuration("a cascade needs at least one splitter".into()));
    }
    let mut reach = T::one();
    let mut entries = Vec::with_capacity(specs.len() + 1);
    for (i, spec) in specs.iter().enumerate() {
        let stage = outcome_probabilities_improved(spec);
        entries.push((geometry::cascade_detector(i + 1), reach * stage.outcome(Outcome::A)));
        reach = reach * stage.outcome(Outcome::B);
    }
    entries.push((geometry::cascade_detector(specs.len() + 1), reach));
    Ok(Probabilities::new(entries))
}

/// Equal-arm interferometer with a 50/50 recombiner: outcome weights `1 / |C|`
/// from the correlation each outcome requires.
pub fn interferometer_probabilities_improved<T: Scalar>(first: &BeamsplitterSpec<T>) -> Result<Probabilities<T>> {
    let c_a = required_correlation_interferometer(first, Outcome::A)?.value.abs();
    let c_b = match required_correlation_interferometer(first, Outcome::B) {
        Ok(c) => c.value.abs(),
        Err(Error::Divergence { .. }) => {
            return Ok(Probabilities::certain(&two_outcome_labels(), Outcome::A.label()));
        }
        Err(e) => return Err(e),
    };
    if c_a == T::zero() {
        return Ok(Probabilities::certain(&two_outcome_labels(), Outcome::A.label()));
    }
    // 1/|C_A| : 1/|C_B|  ==  |C_B| : |C_A|
    Ok(Probabilities::from_weights(vec![
        (Outcome::A.label().to_owned(), c_b),
        (Outcome::B.label().to_owned(), c_a),
    ]))
}
