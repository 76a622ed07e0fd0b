//! The pairing model: hidden inputs equal hidden outputs as a pair.
//!
//! Each unobserved intensity carries the prior weight `Q / sqrt(I)` above a
//! cutoff `eps`. The dark port is overwhelmingly likely to be empty, so the
//! photon's companion field `I1` alone must make the chosen detector receive
//! exactly one photon while the other output carries `I1` back out.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::field::{propagate, BeamsplitterSpec, FieldConfiguration};
use crate::geometry::{self, DARK, PHOTON};
use crate::network::OpticalNetwork;
use crate::probability::{Outcome, Probabilities};
use crate::scalar::Scalar;

/// Prior `Q / sqrt(I)` on a hidden intensity, defined for `I > epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorSimple<T> {
    epsilon: T,
    scale: T,
}

impl<T: Scalar> PriorSimple<T> {
    pub fn new(epsilon: T) -> Result<Self> {
        if epsilon.is_nan() || epsilon <= T::zero() {
            return Err(Error::ParameterDomain {
                name: "epsilon",
                value: epsilon.to_f64().unwrap_or(f64::NAN),
                constraint: "epsilon > 0",
            });
        }
        Ok(Self {
            epsilon,
            scale: T::one(),
        })
    }

    /// Sets the normalisation constant `Q`; no probability depends on it.
    pub fn with_scale(mut self, scale: T) -> Self {
        self.scale = scale;
        self
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    /// `Q / sqrt(I)`, or `None` at or below the cutoff.
    pub fn density(&self, intensity: T) -> Option<T> {
        (intensity > self.epsilon).then(|| self.scale / intensity.sqrt())
    }

    /// Density with anything at or below the cutoff read as sitting at the cutoff.
    fn weight_of(&self, intensity: T) -> T {
        self.scale / intensity.max(self.epsilon).sqrt()
    }

    /// Weight of a diagram from either its hidden inputs or its hidden outputs.
    pub fn pair_weight(&self, a: T, b: T) -> T {
        self.weight_of(a) * self.weight_of(b)
    }
}

impl<T: Scalar> Default for PriorSimple<T> {
    fn default() -> Self {
        Self::new(T::lit(1e-9)).expect("positive default cutoff")
    }
}

/// One complete solution: which detector fired and the four hidden intensities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleDiagram<T> {
    pub outcome: Outcome,
    /// Companion of the photon on the input side.
    pub i1: T,
    /// Dark-port input.
    pub i2: T,
    /// Unobserved excess on output `A`.
    pub ia: T,
    /// Unobserved excess on output `B`.
    pub ib: T,
    /// Unnormalised probability.
    pub weight: T,
}

impl<T: Scalar> SimpleDiagram<T> {
    /// `{I1, I2} = {IA, IB}` as multisets (exact equality after rounding).
    pub fn satisfies_pairing(&self, tol: T) -> bool {
        let same = |a: T, b: T| (a - b).abs() <= tol * T::one().max(a.abs());
        (same(self.i1, self.ia) && same(self.i2, self.ib)) || (same(self.i1, self.ib) && same(self.i2, self.ia))
    }

    /// Propagates the diagram's inputs (zero relative phase) through a single splitter.
    pub fn propagate<'n>(&self, network: &'n OpticalNetwork<T>) -> Result<FieldConfiguration<'n, T>> {
        let amp = |i: T| Complex::new(i.sqrt(), T::zero());
        propagate(network, &[(PHOTON, amp(T::one() + self.i1)), (DARK, amp(self.i2))])
    }

    /// The configuration the diagram asserts: inputs `1 + I1`, `I2`; outputs with
    /// one photon plus excess on the fired detector and the bare excess on the other.
    pub fn configuration<'n>(&self, network: &'n OpticalNetwork<T>) -> Result<FieldConfiguration<'n, T>> {
        let mut cfg = FieldConfiguration::zeros(network);
        let (fired_a, fired_b) = match self.outcome {
            Outcome::A => (T::one(), T::zero()),
            Outcome::B => (T::zero(), T::one()),
        };
        cfg.set_intensity(geometry::PHOTON_EDGE, T::one() + self.i1)?;
        cfg.set_intensity(geometry::DARK_EDGE, self.i2)?;
        cfg.set_intensity(geometry::DETECTOR_A, fired_a + self.ia)?;
        cfg.set_intensity(geometry::DETECTOR_B, fired_b + self.ib)?;
        Ok(cfg)
    }
}

/// The two diagrams of a single splitter: `A` needs `I1 = IB = R/T`, `B` needs `I1 = IA = T/R`.
pub fn solve_diagrams_beamsplitter<T: Scalar>(
    spec: &BeamsplitterSpec<T>,
    prior: &PriorSimple<T>,
) -> Result<Vec<SimpleDiagram<T>>> {
    if spec.is_degenerate() {
        return Err(Error::DegenerateSplitter {
            transmission: spec.transmission().to_f64().unwrap_or(f64::NAN),
        });
    }
    let (t, r) = (spec.transmission(), spec.reflection());
    let zero = T::zero();
    let diagram = |outcome, i1: T, ia: T, ib: T| SimpleDiagram {
        outcome,
        i1,
        i2: zero,
        ia,
        ib,
        weight: prior.pair_weight(i1, zero),
    };
    Ok(vec![
        diagram(Outcome::A, r / t, zero, r / t),
        diagram(Outcome::B, t / r, t / r, zero),
    ])
}

pub fn outcome_probabilities_simple<T: Scalar>(spec: &BeamsplitterSpec<T>, prior: &PriorSimple<T>) -> Probabilities<T> {
    let labels = [Outcome::A.label(), Outcome::B.label()];
    match solve_diagrams_beamsplitter(spec, prior) {
        Ok(diagrams) => Probabilities::from_weights(
            diagrams
                .into_iter()
                .map(|d| (d.outcome.label().to_owned(), d.weight))
                .collect(),
        ),
        Err(_) if spec.transmission() == T::one() => Probabilities::certain(&labels, Outcome::A.label()),
        Err(_) => Probabilities::certain(&labels, Outcome::B.label()),
    }
}

/// The most direct extension of the pairing model to a chain of splitters,
/// kept as a regression for the model's known failure.
///
/// All dark ports stay empty and the photon's companion `I1` is fixed by
/// requiring the chosen detector to receive exactly one photon: with `f` the
/// classical fraction reaching that detector, `1 + I1 = 1 / f`. The diagram
/// weight is the prior on `I1`. The pairing constraint cannot be met here
/// (two unfired detectors carry light but only one hidden input is non-zero),
/// so it is dropped. For one splitter this reproduces the correct `T : R`;
/// for two or more it does not.
pub fn cascade_probabilities_simple<T: Scalar>(
    specs: &[BeamsplitterSpec<T>],
    prior: &PriorSimple<T>,
) -> Result<Probabilities<T>> {
    if specs.is_empty() {
        return Err(Error::Configuration("a cascade needs at least one splitter".into()));
    }
    let fractions = classical_fractions(specs);
    let labels: Vec<String> = (1..=fractions.len()).map(geometry::cascade_detector).collect();
    if let Some(i) = fractions.iter().position(|&f| f == T::one()) {
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        return Ok(Probabilities::certain(&refs, &labels[i]));
    }
    Ok(Probabilities::from_weights(
        labels
            .into_iter()
            .zip(fractions)
            .map(|(l, f)| {
                let w = if f > T::zero() {
                    prior.pair_weight(T::one() / f - T::one(), T::zero())
                } else {
                    T::zero()
                };
                (l, w)
            })
            .collect(),
    ))
}

/// Share of a classical input reaching each cascade detector.
fn classical_fractions<T: Scalar>(specs: &[BeamsplitterSpec<T>]) -> Vec<T> {
    let mut carried = T::one();
    let mut out = Vec::with_capacity(specs.len() + 1);
    for s in specs {
        out.push(carried * s.transmission());
        carried = carried * s.reflection();
    }
    out.push(carried);
    out
}

/// Polarisation of the down-converted pair, locked to one measurement axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HiddenPolarization<T> {
    pub lambda: T,
    pub weight: T,
}

/// Two photons with identical unknown polarisation analysed at angles `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntangledScenario<T> {
    pub a: T,
    pub b: T,
}

/// Joint outcome table; `+` means the photon passed its polariser axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointTable<T> {
    pub pp: T,
    pub pm: T,
    pub mp: T,
    pub mm: T,
}

impl<T: Scalar> JointTable<T> {
    pub fn total(&self) -> T {
        self.pp + self.pm + self.mp + self.mm
    }

    /// Correlation `E = P(++) + P(--) - P(+-) - P(-+)`.
    pub fn correlation(&self) -> T {
        self.pp + self.mm - self.pm - self.mp
    }

    pub fn marginal_first_plus(&self) -> T {
        self.pp + self.pm
    }

    pub fn marginal_second_plus(&self) -> T {
        self.pp + self.mp
    }
}

impl<T: Scalar> EntangledScenario<T> {
    pub fn new(a: T, b: T) -> Self {
        Self { a, b }
    }

    /// `lambda` in `{a, a + pi/2, b, b + pi/2}`, each with weight 1/4.
    pub fn branches(&self) -> [HiddenPolarization<T>; 4] {
        let q = T::lit(0.25);
        let quarter_turn = T::FRAC_PI_2();
        [self.a, self.a + quarter_turn, self.b, self.b + quarter_turn]
            .map(|lambda| HiddenPolarization { lambda, weight: q })
    }

    /// Sums the branches: the photon whose analyser matches `lambda` (mod pi/2)
    /// has a fixed result; the other passes with Malus probability `cos^2(lambda - setting)`.
    pub fn joint_probabilities(&self) -> JointTable<T> {
        let mut table = JointTable {
            pp: T::zero(),
            pm: T::zero(),
            mp: T::zero(),
            mm: T::zero(),
        };
        let malus = |lambda: T, setting: T| {
            let c = (lambda - setting).cos();
            c * c
        };
        for (i, branch) in self.branches().into_iter().enumerate() {
            let (first_plus, second_plus) = if i < 2 {
                // matched to the first analyser
                let first = if i == 0 { T::one() } else { T::zero() };
                (first, malus(branch.lambda, self.b))
            } else {
                let second = if i == 2 { T::one() } else { T::zero() };
                (malus(branch.lambda, self.a), second)
            };
            let w = branch.weight;
            table.pp = table.pp + w * first_plus * second_plus;
            table.pm = table.pm + w * first_plus * (T::one() - second_plus);
            table.mp = table.mp + w * (T::one() - first_plus) * second_plus;
            table.mm = table.mm + w * (T::one() - first_plus) * (T::one() - second_plus);
        }
        table
    }
}

pub fn entangled_joint_probabilities<T: Scalar>(a: T, b: T) -> JointTable<T> {
    EntangledScenario::new(a, b).joint_probabilities()
}

/// `S = E(a,b) - E(a,b') + E(a',b) + E(a',b')` for `angles = [a, a', b, b']`.
pub fn chsh_statistic<T: Scalar>(angles: [T; 4]) -> T {
    let [a, a2, b, b2] = angles;
    let e = |x, y| entangled_joint_probabilities(x, y).correlation();
    e(a, b) - e(a, b2) + e(a2, b) + e(a2, b2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{check_energy_conservation, intensity};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn spec(t: f64) -> BeamsplitterSpec<f64> {
        BeamsplitterSpec::new(t).unwrap()
    }

    #[test]
    fn diagrams_at_seventy_percent() {
        let d = solve_diagrams_beamsplitter(&spec(0.7), &PriorSimple::default()).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].outcome, Outcome::A);
        assert_abs_diff_eq!(d[0].i1, 3.0 / 7.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d[0].ib, 3.0 / 7.0, epsilon = 1e-15);
        assert_eq!(d[0].i2, 0.0);
        assert_eq!(d[0].ia, 0.0);
        assert_abs_diff_eq!(d[1].i1, 7.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d[1].ia, 7.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn balanced_diagrams_are_equal() {
        let d = solve_diagrams_beamsplitter(&spec(0.5), &PriorSimple::default()).unwrap();
        assert_eq!(d[0].i1, 1.0);
        assert_eq!(d[1].i1, 1.0);
        assert_eq!(d[0].weight, d[1].weight);
    }

    #[test]
    fn ninety_percent_weight_ratio() {
        let d = solve_diagrams_beamsplitter(&spec(0.9), &PriorSimple::default()).unwrap();
        assert_abs_diff_eq!(d[0].i1, 1.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d[1].i1, 9.0, epsilon = 1e-13);
        assert_abs_diff_eq!(d[0].weight / d[1].weight, 9.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_splitter() {
        let err = solve_diagrams_beamsplitter(&spec(1.0), &PriorSimple::default()).unwrap_err();
        assert!(matches!(err, Error::DegenerateSplitter { .. }));
        let p = outcome_probabilities_simple(&spec(1.0), &PriorSimple::default());
        assert_eq!(p.outcome(Outcome::A), 1.0);
        let p = outcome_probabilities_simple(&spec(0.0), &PriorSimple::default());
        assert_eq!(p.outcome(Outcome::B), 1.0);
    }

    #[test]
    fn probabilities_match_ratio() {
        for (t, pa) in [(0.7, 0.7), (0.5, 0.5), (0.9, 0.9)] {
            let p = outcome_probabilities_simple(&spec(t), &PriorSimple::default());
            assert_abs_diff_eq!(p.outcome(Outcome::A), pa, epsilon = 1e-12);
            assert_abs_diff_eq!(p.total(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn probabilities_ignore_cutoff_and_scale() {
        let base = outcome_probabilities_simple(&spec(0.27), &PriorSimple::default());
        for eps in [1e-6, 1e-9, 1e-12] {
            let prior = PriorSimple::new(eps).unwrap().with_scale(3.7);
            let p = outcome_probabilities_simple(&spec(0.27), &prior);
            assert_abs_diff_eq!(p.max_abs_diff(&base).unwrap(), 0.0, epsilon = 1e-15);
        }
        assert!(PriorSimple::new(0.0).is_err());
    }

    #[test]
    fn density_domain() {
        let prior = PriorSimple::new(1e-3).unwrap();
        assert_eq!(prior.density(1e-4), None);
        assert_eq!(prior.density(4.0), Some(0.5));
    }

    #[test]
    fn diagrams_are_physical_solutions() {
        for t in [0.1, 0.35, 0.5, 0.7, 0.95] {
            let net = geometry::single_splitter(spec(t)).unwrap();
            let prior = PriorSimple::default();
            for d in solve_diagrams_beamsplitter(&spec(t), &prior).unwrap() {
                assert!(d.satisfies_pairing(1e-12));
                assert_abs_diff_eq!(d.weight, prior.pair_weight(d.ia, d.ib), epsilon = 1e-9 * d.weight);
                let claimed = d.configuration(&net).unwrap();
                assert!(check_energy_conservation(&claimed) < 1e-12);
                // the claimed outputs are what the splitter actually produces
                let real = d.propagate(&net).unwrap();
                for edge in ["A", "B"] {
                    assert_abs_diff_eq!(
                        intensity(real.amplitude(edge).unwrap()),
                        claimed.intensity(edge).unwrap(),
                        epsilon = 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn cascade_extension_fails_for_two_splitters() {
        let p = cascade_probabilities_simple(&[spec(0.5), spec(0.5)], &PriorSimple::default()).unwrap();
        // weights sqrt(f / (1 - f)) for f = (1/2, 1/4, 1/4)
        let w = [1.0, (1.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt()];
        let total: f64 = w.iter().sum();
        for (i, wi) in w.iter().enumerate() {
            assert_abs_diff_eq!(p.get(&format!("D{}", i + 1)).unwrap(), wi / total, epsilon = 1e-12);
        }
        assert!((p.get("D1").unwrap() - 0.5).abs() > 0.01);
    }

    #[test]
    fn cascade_extension_agrees_for_one_splitter() {
        let p = cascade_probabilities_simple(&[spec(0.8)], &PriorSimple::default()).unwrap();
        assert_abs_diff_eq!(p.get("D1").unwrap(), 0.8, epsilon = 1e-12);
        assert!(cascade_probabilities_simple::<f64>(&[], &PriorSimple::default()).is_err());
    }

    #[test]
    fn joint_table_examples() {
        let t = entangled_joint_probabilities(0.3, 0.3);
        assert_abs_diff_eq!(t.pp, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(t.mm, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(t.pm, 0.0, epsilon = 1e-12);

        let t = entangled_joint_probabilities(PI / 6.0, 0.0);
        assert_abs_diff_eq!(t.pp, 0.375, epsilon = 1e-12);
        assert_abs_diff_eq!(t.mm, 0.375, epsilon = 1e-12);
        assert_abs_diff_eq!(t.pm, 0.125, epsilon = 1e-12);
        assert_abs_diff_eq!(t.mp, 0.125, epsilon = 1e-12);

        let t = entangled_joint_probabilities(PI / 4.0, 0.0);
        for p in [t.pp, t.pm, t.mp, t.mm] {
            assert_abs_diff_eq!(p, 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn hidden_polarization_matches_an_axis() {
        let s = EntangledScenario::new(0.2, 1.1);
        for br in s.branches() {
            let near = |x: f64| {
                let turns = (br.lambda - x) / (PI / 2.0);
                (turns - turns.round()).abs() < 1e-12
            };
            assert!(near(s.a) || near(s.b));
        }
        let total: f64 = s.branches().iter().map(|b| b.weight).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn chsh_examples() {
        let s = chsh_statistic([0.0, PI / 4.0, PI / 8.0, 3.0 * PI / 8.0]);
        assert_abs_diff_eq!(s, 2.0 * 2f64.sqrt(), epsilon = 1e-9);
        assert_abs_diff_eq!(chsh_statistic([0.0; 4]), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            chsh_statistic([0.0, PI / 2.0, PI / 4.0, 3.0 * PI / 4.0]),
            0.0,
            epsilon = 1e-12
        );
    }
}
