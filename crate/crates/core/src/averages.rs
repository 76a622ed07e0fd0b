//! Post-selected ensemble averages, independent of any particular model.
//!
//! The only assumption is that every hidden intensity averages to the same
//! background `I_Z`. Keeping the detected outcome intact then fixes the input
//! correlation `C = <sqrt((1 + I1) I2) sin(theta)>`, and `C` fixes the
//! average intensity on each interferometer arm.

use crate::error::{Error, Result};
use crate::field::BeamsplitterSpec;
use crate::geometry;
use crate::oracle;
use crate::probability::{Outcome, Probabilities};
use crate::scalar::Scalar;

/// Required value of the input correlation for one outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationC<T> {
    pub value: T,
}

fn divergence<T: Scalar>(spec: &BeamsplitterSpec<T>, outcome: Outcome) -> Error {
    Error::Divergence {
        outcome: outcome.label(),
        transmission: spec.transmission().to_f64().unwrap_or(f64::NAN),
    }
}

/// Single splitter: `C_A = -sqrt(R / 4T)`, `C_B = sqrt(T / 4R)`.
pub fn required_correlation_beamsplitter<T: Scalar>(
    spec: &BeamsplitterSpec<T>,
    outcome: Outcome,
) -> Result<CorrelationC<T>> {
    if spec.is_degenerate() {
        return Err(divergence(spec, outcome));
    }
    let (t, r) = (spec.transmission(), spec.reflection());
    let four = T::lit(4.0);
    let value = match outcome {
        Outcome::A => -(r / (four * t)).sqrt(),
        Outcome::B => (t / (four * r)).sqrt(),
    };
    Ok(CorrelationC { value })
}

/// Equal-arm interferometer with a 50/50 recombiner.
///
/// `C_A = (0.5 - sqrt(RT)) / (T - R)` and `C_B = -(0.5 + sqrt(RT)) / (T - R)`.
/// With `s = sqrt(T)`, `r = sqrt(R)` these reduce to `(s - r) / 2(s + r)` and
/// `-(s + r) / 2(s - r)`; the reduced forms are what is evaluated, so `C_A`
/// stays finite at `T = R` where only `C_B` diverges.
pub fn required_correlation_interferometer<T: Scalar>(
    spec: &BeamsplitterSpec<T>,
    outcome: Outcome,
) -> Result<CorrelationC<T>> {
    let s = spec.transmission().sqrt();
    let r = spec.reflection().sqrt();
    let two = T::lit(2.0);
    let value = match outcome {
        Outcome::A => (s - r) / (two * (s + r)),
        Outcome::B => {
            if (s - r).abs() < T::zero_threshold() {
                return Err(divergence(spec, outcome));
            }
            -(s + r) / (two * (s - r))
        }
    };
    Ok(CorrelationC { value })
}

/// Arm averages `(<I_X>, <I_Y>)` implied by a correlation `c`:
/// `I_Z + T - 2 sqrt(RT) C` and `I_Z + R + 2 sqrt(RT) C`. No sign checks.
pub fn arm_intensities_from_correlation<T: Scalar>(spec: &BeamsplitterSpec<T>, c: T, background: T) -> (T, T) {
    let (t, r) = (spec.transmission(), spec.reflection());
    let cross = T::lit(2.0) * (r * t).sqrt() * c;
    (background + t - cross, background + r + cross)
}

/// Smallest `I_Z` keeping both arm averages non-negative for `outcome`.
/// Zero for `A`; `sqrt(R) / (sqrt(T) - sqrt(R))` for `B` when `T > R`.
pub fn background_floor<T: Scalar>(spec: &BeamsplitterSpec<T>, outcome: Outcome) -> Result<T> {
    let c = required_correlation_interferometer(spec, outcome)?;
    let (x, y) = arm_intensities_from_correlation(spec, c.value, T::zero());
    Ok(T::zero().max(-x).max(-y))
}

/// Post-selected `(<I_X>, <I_Y>)` on the interferometer arms given the detected outcome.
pub fn average_intermediate_intensities<T: Scalar>(
    spec: &BeamsplitterSpec<T>,
    outcome: Outcome,
    background: T,
) -> Result<(T, T)> {
    if background.is_nan() || background < T::zero() {
        return Err(Error::ParameterDomain {
            name: "I_Z",
            value: background.to_f64().unwrap_or(f64::NAN),
            constraint: "I_Z >= 0",
        });
    }
    let floor = background_floor(spec, outcome)?;
    let slack = T::zero_threshold() * T::one().max(floor);
    if background < floor - slack {
        return Err(Error::InsufficientBackground {
            background: background.to_f64().unwrap_or(f64::NAN),
            floor: floor.to_f64().unwrap_or(f64::NAN),
        });
    }
    let c = required_correlation_interferometer(spec, outcome)?;
    Ok(arm_intensities_from_correlation(spec, c.value, background))
}

/// Classical arm averages next to the quantum weak values for one outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageReport<T> {
    pub outcome: Outcome,
    pub background: T,
    pub c_required: CorrelationC<T>,
    pub avg_x: T,
    pub avg_y: T,
    pub weak_x: T,
    pub weak_y: T,
    /// `|(<I_X> - I_Z) - weak_X|`.
    pub residual_x: T,
    pub residual_y: T,
}

impl<T: Scalar> AverageReport<T> {
    pub fn max_residual(&self) -> T {
        self.residual_x.max(self.residual_y)
    }
}

/// Compares the classical arm averages (minus the background) with the weak
/// values from the quantum reference on the same interferometer.
pub fn verify_weak_value_correspondence<T: Scalar>(
    spec: &BeamsplitterSpec<T>,
    outcome: Outcome,
    background: T,
) -> Result<AverageReport<T>> {
    let network = geometry::interferometer(*spec)?;
    let (weak_x, weak_y) = oracle::interferometer_weak_values(&network, outcome.label())?;
    let c_required = required_correlation_interferometer(spec, outcome)?;
    let (avg_x, avg_y) = average_intermediate_intensities(spec, outcome, background)?;
    Ok(AverageReport {
        outcome,
        background,
        c_required,
        avg_x,
        avg_y,
        weak_x,
        weak_y,
        residual_x: ((avg_x - background) - weak_x).abs(),
        residual_y: ((avg_y - background) - weak_y).abs(),
    })
}

/// Outcome probabilities proportional to `1 / |C|` for the single splitter.
pub fn inverse_correlation_probabilities_beamsplitter<T: Scalar>(
    spec: &BeamsplitterSpec<T>,
) -> Result<Probabilities<T>> {
    let w = |o| required_correlation_beamsplitter(spec, o).map(|c| T::one() / c.value.abs());
    Ok(Probabilities::from_weights(vec![
        (Outcome::A.label().to_owned(), w(Outcome::A)?),
        (Outcome::B.label().to_owned(), w(Outcome::B)?),
    ]))
}
