//! Standard single-photon quantum mechanics over path labels.
//!
//! This is the reference the classical models are checked against. It shares
//! only the beamsplitter matrix with [`crate::field`]; amplitudes are obtained
//! by summing over histories (every path from the photon source to an edge,
//! multiplied through the element coefficients) rather than by pushing a
//! field configuration forward.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::network::{EdgeId, Element, OpticalNetwork, SourceKind};
use crate::probability::Probabilities;
use crate::scalar::Scalar;
use crate::simple::JointTable;

/// Amplitudes over a set of labelled paths.
#[derive(Debug, Clone, PartialEq)]
pub struct PathState<T> {
    labels: Vec<String>,
    amplitudes: Vec<Complex<T>>,
    normalized: bool,
}

impl<T: Scalar> PathState<T> {
    pub fn new(components: Vec<(String, Complex<T>)>) -> Self {
        let (labels, amplitudes): (Vec<_>, Vec<_>) = components.into_iter().unzip();
        let norm_sqr = amplitudes.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr());
        Self {
            labels,
            amplitudes,
            normalized: (norm_sqr - T::one()).abs() < T::zero_threshold(),
        }
    }

    /// `|label>`.
    pub fn basis(label: &str) -> Self {
        Self::new(vec![(label.to_owned(), Complex::new(T::one(), T::zero()))])
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn amplitude(&self, label: &str) -> Option<Complex<T>> {
        self.labels.iter().position(|l| l == label).map(|i| self.amplitudes[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Complex<T>)> {
        self.labels
            .iter()
            .map(String::as_str)
            .zip(self.amplitudes.iter().copied())
    }

    /// `<self|other>`, matching components by label.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (l, a)| {
            match other.amplitude(l) {
                Some(b) => acc + a.conj() * b,
                None => acc,
            }
        })
    }

    pub fn conj(&self) -> Self {
        Self {
            labels: self.labels.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a.conj()).collect(),
            normalized: self.normalized,
        }
    }
}

/// `Q = |path><path|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projector {
    pub path: String,
}

impl Projector {
    pub fn new(path: impl Into<String>) -> Self {
        Self { path: path.into() }
    }

    pub fn apply<T: Scalar>(&self, state: &PathState<T>) -> PathState<T> {
        PathState::new(
            state
                .iter()
                .map(|(l, a)| {
                    let keep = if l == self.path {
                        a
                    } else {
                        Complex::new(T::zero(), T::zero())
                    };
                    (l.to_owned(), keep)
                })
                .collect(),
        )
    }
}

/// Checks that `cut` crosses every source-to-detector path exactly once.
pub fn validate_cut<T: Scalar>(network: &OpticalNetwork<T>, cut: &[&str]) -> Result<Vec<EdgeId>> {
    let ids = network.edge_ids(cut)?;
    let mut in_cut = vec![false; network.edges().len()];
    for &e in &ids {
        if std::mem::replace(&mut in_cut[e], true) {
            return Err(Error::Structure(format!(
                "edge `{}` appears twice in the cut",
                network.edge(e).label
            )));
        }
    }
    // (min, max) number of cut edges on any path from a source, per edge.
    let mut crossings = vec![(0usize, 0usize); network.edges().len()];
    for &node in network.topological_order() {
        let element = &network.node(node).element;
        let reach = (0..element.input_ports())
            .map(|p| crossings[network.input_edge(node, p)])
            .fold(None, |acc: Option<(usize, usize)>, (lo, hi)| {
                Some(acc.map_or((lo, hi), |(a, b)| (a.min(lo), b.max(hi))))
            })
            .unwrap_or((0, 0));
        if let Element::Detector = element {
            if reach != (1, 1) {
                return Err(Error::Structure(format!(
                    "cut must cross every path into detector `{}` exactly once (crosses between {} and {} times)",
                    network.node(node).label,
                    reach.0,
                    reach.1
                )));
            }
        }
        for p in 0..element.output_ports() {
            let e = network.output_edge(node, p);
            let add = usize::from(in_cut[e]);
            crossings[e] = (reach.0 + add, reach.1 + add);
        }
    }
    Ok(ids)
}

/// Sum over all histories from the photon source ending on `edge`.
fn forward_amplitude<T: Scalar>(network: &OpticalNetwork<T>, edge: EdgeId) -> Complex<T> {
    let from = network.edge(edge).from;
    match &network.node(from.node).element {
        Element::Source(SourceKind::Photon) => Complex::new(T::one(), T::zero()),
        Element::Source(SourceKind::Vacuum) | Element::Detector => Complex::new(T::zero(), T::zero()),
        Element::PhaseShifter(phi) => {
            Complex::from_polar(T::one(), *phi) * forward_amplitude(network, network.input_edge(from.node, 0))
        }
        Element::Beamsplitter(spec) => {
            let m = spec.matrix();
            (0..2).fold(Complex::new(T::zero(), T::zero()), |acc, q| {
                acc + m[from.port][q] * forward_amplitude(network, network.input_edge(from.node, q))
            })
        }
    }
}

/// Sum over all histories from `edge` to `detector`, with each coefficient
/// conjugated (the adjoint evolution: reflections pick up `-pi/2`).
fn backward_amplitude<T: Scalar>(network: &OpticalNetwork<T>, edge: EdgeId, detector: usize) -> Complex<T> {
    let to = network.edge(edge).to;
    match &network.node(to.node).element {
        Element::Detector if to.node == detector => Complex::new(T::one(), T::zero()),
        Element::Detector | Element::Source(_) => Complex::new(T::zero(), T::zero()),
        Element::PhaseShifter(phi) => {
            Complex::from_polar(T::one(), -*phi)
                * backward_amplitude(network, network.output_edge(to.node, 0), detector)
        }
        Element::Beamsplitter(spec) => {
            let m = spec.matrix();
            (0..2).fold(Complex::new(T::zero(), T::zero()), |acc, p| {
                acc + m[p][to.port].conj() * backward_amplitude(network, network.output_edge(to.node, p), detector)
            })
        }
    }
}

/// Photon state `|Psi>` evolved forward to the edges in `cut`.
pub fn forward_state<T: Scalar>(network: &OpticalNetwork<T>, cut: &[&str]) -> Result<PathState<T>> {
    network.photon_source()?;
    let ids = validate_cut(network, cut)?;
    Ok(PathState::new(
        ids.into_iter()
            .map(|e| (network.edge(e).label.clone(), forward_amplitude(network, e)))
            .collect(),
    ))
}

/// Detection state `|Phi>` at `detector`, evolved backward to the edges in `cut`.
pub fn backward_state<T: Scalar>(network: &OpticalNetwork<T>, detector: &str, cut: &[&str]) -> Result<PathState<T>> {
    let det = network.detector_by_label(detector)?;
    let ids = validate_cut(network, cut)?;
    Ok(PathState::new(
        ids.into_iter()
            .map(|e| (network.edge(e).label.clone(), backward_amplitude(network, e, det)))
            .collect(),
    ))
}

/// Born-rule detection probabilities for the single photon.
pub fn born_probabilities<T: Scalar>(network: &OpticalNetwork<T>) -> Result<Probabilities<T>> {
    network.photon_source()?;
    Ok(Probabilities::new(
        network
            .detectors()
            .map(|d| {
                let amp = forward_amplitude(network, network.input_edge(d, 0));
                (network.node(d).label.clone(), amp.norm_sqr())
            })
            .collect(),
    ))
}

/// `Re(<post|Q|pre> / <post|pre>)`.
pub fn weak_value<T: Scalar>(pre: &PathState<T>, post: &PathState<T>, q: &Projector) -> Result<T> {
    let overlap = post.inner(pre);
    if overlap.norm() < T::zero_threshold() {
        return Err(Error::PostSelectionImpossible {
            overlap: overlap.norm().to_f64().unwrap_or(0.0),
        });
    }
    let numerator = post.inner(&q.apply(pre));
    Ok((numerator / overlap).re)
}

/// Weak values of the arm projectors on `X` and `Y` for detection at `detector`.
pub fn interferometer_weak_values<T: Scalar>(network: &OpticalNetwork<T>, detector: &str) -> Result<(T, T)> {
    use crate::geometry::{ARM_X, ARM_Y};
    let cut = [ARM_X, ARM_Y];
    let pre = forward_state(network, &cut)?;
    let post = backward_state(network, detector, &cut)?;
    Ok((
        weak_value(&pre, &post, &Projector::new(ARM_X))?,
        weak_value(&pre, &post, &Projector::new(ARM_Y))?,
    ))
}

/// Quantum joint table for the pair `(|HH> + |VV>) / sqrt(2)` analysed at `a` and `b`:
/// `P(++) = P(--) = cos^2(a - b) / 2`, `P(+-) = P(-+) = sin^2(a - b) / 2`.
pub fn polarization_pair_table<T: Scalar>(a: T, b: T) -> JointTable<T> {
    let half = T::lit(0.5);
    let (s, c) = (a - b).sin_cos();
    JointTable {
        pp: half * c * c,
        pm: half * s * s,
        mp: half * s * s,
        mm: half * c * c,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::BeamsplitterSpec;
    use crate::geometry::{self, ARM_X, ARM_Y};
    use approx::assert_abs_diff_eq;

    fn spec(t: f64) -> BeamsplitterSpec<f64> {
        BeamsplitterSpec::new(t).unwrap()
    }

    fn assert_amp(state: &PathState<f64>, label: &str, re: f64, im: f64) {
        let a = state.amplitude(label).unwrap();
        assert_abs_diff_eq!(a.re, re, epsilon = 1e-12);
        assert_abs_diff_eq!(a.im, im, epsilon = 1e-12);
    }

    #[test]
    fn arm_state() {
        let net = geometry::interferometer(spec(0.7)).unwrap();
        let psi = forward_state(&net, &[ARM_X, ARM_Y]).unwrap();
        assert!(psi.is_normalized());
        assert_amp(&psi, ARM_X, 0.7f64.sqrt(), 0.0);
        assert_amp(&psi, ARM_Y, 0.0, 0.3f64.sqrt());
    }

    #[test]
    fn state_right_after_source() {
        let net = geometry::single_splitter(spec(0.3)).unwrap();
        let psi = forward_state(&net, &[geometry::PHOTON_EDGE, geometry::DARK_EDGE]).unwrap();
        assert_amp(&psi, geometry::PHOTON_EDGE, 1.0, 0.0);
        assert_amp(&psi, geometry::DARK_EDGE, 0.0, 0.0);
    }

    #[test]
    fn cascade_detector_state() {
        let net = geometry::cascade(&[spec(0.5), spec(0.5)]).unwrap();
        let psi = forward_state(&net, &["D1", "D2", "D3"]).unwrap();
        let probs: Vec<f64> = psi.iter().map(|(_, a)| a.norm_sqr()).collect();
        for (p, want) in probs.iter().zip([0.5, 0.25, 0.25]) {
            assert_abs_diff_eq!(*p, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn detection_states() {
        let net = geometry::interferometer(spec(0.7)).unwrap();
        let h = 0.5f64.sqrt();
        let phi_a = backward_state(&net, "A", &[ARM_X, ARM_Y]).unwrap();
        assert_amp(&phi_a, ARM_X, 0.0, -h);
        assert_amp(&phi_a, ARM_Y, h, 0.0);
        let phi_b = backward_state(&net, "B", &[ARM_X, ARM_Y]).unwrap();
        assert_amp(&phi_b, ARM_X, h, 0.0);
        assert_amp(&phi_b, ARM_Y, 0.0, -h);
        assert!(backward_state(&net, "C", &[ARM_X, ARM_Y]).is_err());
    }

    #[test]
    fn detection_state_at_detector_edge() {
        let net = geometry::interferometer(spec(0.7)).unwrap();
        let phi = backward_state(&net, "A", &["A", "B"]).unwrap();
        assert_amp(&phi, "A", 1.0, 0.0);
        assert_amp(&phi, "B", 0.0, 0.0);
    }

    #[test]
    fn invalid_cuts() {
        let net = geometry::interferometer(spec(0.7)).unwrap();
        // misses arm Y
        assert!(matches!(forward_state(&net, &[ARM_X]), Err(Error::Structure(_))));
        // crosses X twice along in1 -> X -> A
        assert!(forward_state(&net, &["in1", "in2", ARM_X, ARM_Y]).is_err());
        assert!(forward_state(&net, &[ARM_X, ARM_X, ARM_Y]).is_err());
        assert!(forward_state(&net, &["nope"]).is_err());
    }

    #[test]
    fn born_examples() {
        let p = born_probabilities(&geometry::single_splitter(spec(0.7)).unwrap()).unwrap();
        assert_abs_diff_eq!(p.get("A").unwrap(), 0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(p.get("B").unwrap(), 0.3, epsilon = 1e-12);

        let p = born_probabilities(&geometry::interferometer(spec(0.5)).unwrap()).unwrap();
        assert_abs_diff_eq!(p.get("A").unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.get("B").unwrap(), 0.0, epsilon = 1e-12);

        let p = born_probabilities(&geometry::interferometer(spec(0.7)).unwrap()).unwrap();
        let s = 0.21f64.sqrt();
        assert_abs_diff_eq!(p.get("A").unwrap(), 0.5 + s, epsilon = 1e-12);
        assert_abs_diff_eq!(p.get("B").unwrap(), 0.5 - s, epsilon = 1e-12);
        assert_abs_diff_eq!(p.total(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn weak_value_examples() {
        let net = geometry::interferometer(spec(0.7)).unwrap();
        let (t, r) = (0.7f64.sqrt(), 0.3f64.sqrt());
        let (wx, _) = interferometer_weak_values(&net, "A").unwrap();
        assert_abs_diff_eq!(wx, t / (t + r), epsilon = 1e-12);
        assert_abs_diff_eq!(wx, 0.604_356_08, epsilon = 1e-7);
        let (_, wy) = interferometer_weak_values(&net, "B").unwrap();
        assert_abs_diff_eq!(wy, -r / (t - r), epsilon = 1e-12);
        assert!(wy < 0.0);

        let x = PathState::<f64>::basis("X");
        assert_eq!(weak_value(&x, &x, &Projector::new("X")).unwrap(), 1.0);
    }

    #[test]
    fn balanced_interferometer_forbids_b() {
        let net = geometry::interferometer(spec(0.5)).unwrap();
        let err = interferometer_weak_values(&net, "B").unwrap_err();
        assert!(matches!(err, Error::PostSelectionImpossible { .. }));
    }

    #[test]
    fn projector_is_idempotent() {
        let net = geometry::interferometer(spec(0.3)).unwrap();
        let psi = forward_state(&net, &[ARM_X, ARM_Y]).unwrap();
        let q = Projector::new(ARM_Y);
        assert_eq!(q.apply(&q.apply(&psi)), q.apply(&psi));
    }

    #[test]
    fn backward_is_forward_of_reversed_network() {
        let net = geometry::interferometer_general(spec(0.35), spec(0.8), Some(0.4)).unwrap();
        for det in ["A", "B"] {
            let phi = backward_state(&net, det, &[ARM_X, ARM_Y]).unwrap();
            let rev = net.reversed(det).unwrap();
            let dual = forward_state(&rev, &[ARM_X, ARM_Y]).unwrap().conj();
            for (l, a) in phi.iter() {
                let b = dual.amplitude(l).unwrap();
                assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }
}
