use std::fmt;

use crate::geometry::{DETECTOR_A, DETECTOR_B};
use crate::scalar::Scalar;

/// Which of the two detectors of a splitter or interferometer fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    A,
    B,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::A, Outcome::B];

    pub fn label(self) -> &'static str {
        match self {
            Outcome::A => DETECTOR_A,
            Outcome::B => DETECTOR_B,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Outcome::A => Outcome::B,
            Outcome::B => Outcome::A,
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        match label {
            DETECTOR_A => Some(Outcome::A),
            DETECTOR_B => Some(Outcome::B),
            _ => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Detector label to probability, in detector order.
#[derive(Debug, Clone, PartialEq)]
pub struct Probabilities<T> {
    entries: Vec<(String, T)>,
}

impl<T: Scalar> Probabilities<T> {
    pub fn new(entries: Vec<(String, T)>) -> Self {
        Self { entries }
    }

    /// Normalises non-negative weights. All-zero weights give all-zero probabilities.
    pub fn from_weights(weights: Vec<(String, T)>) -> Self {
        let total = weights.iter().fold(T::zero(), |acc, (_, w)| acc + *w);
        if total == T::zero() {
            return Self::new(weights);
        }
        Self::new(weights.into_iter().map(|(l, w)| (l, w / total)).collect())
    }

    /// All mass on `label`, zero on the rest.
    pub fn certain(labels: &[&str], label: &str) -> Self {
        Self::new(
            labels
                .iter()
                .map(|l| {
                    let p = if *l == label { T::one() } else { T::zero() };
                    ((*l).to_owned(), p)
                })
                .collect(),
        )
    }

    pub fn get(&self, label: &str) -> Option<T> {
        self.entries.iter().find(|(l, _)| l == label).map(|(_, p)| *p)
    }

    pub fn outcome(&self, outcome: Outcome) -> T {
        self.get(outcome.label()).unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, T)> {
        self.entries.iter().map(|(l, p)| (l.as_str(), *p))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> T {
        self.entries.iter().fold(T::zero(), |acc, (_, p)| acc + *p)
    }

    /// Largest absolute difference over shared labels; `None` if the label sets differ.
    pub fn max_abs_diff(&self, other: &Self) -> Option<T> {
        if self.len() != other.len() {
            return None;
        }
        self.entries
            .iter()
            .try_fold(T::zero(), |acc, (l, p)| other.get(l).map(|q| acc.max((*p - q).abs())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_normalise() {
        let p = Probabilities::from_weights(vec![("A".into(), 9.0f64), ("B".into(), 1.0)]);
        assert!((p.outcome(Outcome::A) - 0.9).abs() < 1e-15);
        assert!((p.total() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diff_requires_matching_labels() {
        let p = Probabilities::<f64>::certain(&["A", "B"], "A");
        let q = Probabilities::<f64>::certain(&["A", "C"], "A");
        assert_eq!(p.max_abs_diff(&q), None);
        assert_eq!(p.max_abs_diff(&p), Some(0.0));
    }

    #[test]
    fn outcome_labels_round_trip() {
        for o in Outcome::BOTH {
            assert_eq!(Outcome::from_label(o.label()), Some(o));
            assert_eq!(o.other().other(), o);
        }
    }
}
