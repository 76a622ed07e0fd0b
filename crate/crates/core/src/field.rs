//! Classical mode amplitudes and their exact propagation.
//!
//! Intensities are normalised so that `|a|^2 = 1` is one classical photon
//! analog. A beamsplitter with transmission `T` acts on its two inputs as
//!
//! ```text
//! out1 = sqrt(T) in1 + i sqrt(R) in2
//! out2 = i sqrt(R) in1 + sqrt(T) in2        R = 1 - T
//! ```
//!
//! so every reflection picks up `+pi/2` in the forward time direction. The
//! quantum reference uses the same matrix through [`BeamsplitterSpec::matrix`].

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::network::{EdgeId, Element, OpticalNetwork};
use crate::scalar::Scalar;

pub type ComplexAmplitude<T> = Complex<T>;

/// Intensity `re^2 + im^2` of one mode.
#[inline]
pub fn intensity<T: Scalar>(a: ComplexAmplitude<T>) -> T {
    a.norm_sqr()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamsplitterSpec<T> {
    transmission: T,
}

impl<T: Scalar> BeamsplitterSpec<T> {
    pub fn new(transmission: T) -> Result<Self> {
        if transmission >= T::zero() && transmission <= T::one() {
            Ok(Self { transmission })
        } else {
            Err(Error::ParameterDomain {
                name: "T",
                value: transmission.to_f64().unwrap_or(f64::NAN),
                constraint: "0 <= T <= 1",
            })
        }
    }

    pub fn balanced() -> Self {
        Self {
            transmission: T::lit(0.5),
        }
    }

    pub fn transmission(&self) -> T {
        self.transmission
    }

    pub fn reflection(&self) -> T {
        T::one() - self.transmission
    }

    /// `T = 0` or `T = 1`: only one output can ever receive the input.
    pub fn is_degenerate(&self) -> bool {
        self.transmission == T::zero() || self.transmission == T::one()
    }

    /// Row `p` gives output port `p` in terms of the two inputs.
    pub fn matrix(&self) -> [[Complex<T>; 2]; 2] {
        let t = Complex::new(self.transmission.sqrt(), T::zero());
        let r = Complex::new(T::zero(), self.reflection().sqrt());
        [[t, r], [r, t]]
    }
}

pub fn beamsplitter_transfer<T: Scalar>(
    in1: ComplexAmplitude<T>,
    in2: ComplexAmplitude<T>,
    spec: &BeamsplitterSpec<T>,
) -> (ComplexAmplitude<T>, ComplexAmplitude<T>) {
    let m = spec.matrix();
    (m[0][0] * in1 + m[0][1] * in2, m[1][0] * in1 + m[1][1] * in2)
}

/// Amplitudes on every edge of one network.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldConfiguration<'n, T> {
    network: &'n OpticalNetwork<T>,
    amplitudes: Vec<ComplexAmplitude<T>>,
}

impl<'n, T: Scalar> FieldConfiguration<'n, T> {
    /// All edges dark.
    pub fn zeros(network: &'n OpticalNetwork<T>) -> Self {
        Self {
            network,
            amplitudes: vec![Complex::new(T::zero(), T::zero()); network.edges().len()],
        }
    }

    pub fn network(&self) -> &'n OpticalNetwork<T> {
        self.network
    }

    pub fn set(&mut self, edge_label: &str, amplitude: ComplexAmplitude<T>) -> Result<()> {
        let id = self.network.edge_by_label(edge_label)?;
        self.amplitudes[id] = amplitude;
        Ok(())
    }

    /// Sets an edge from an intensity with zero phase.
    pub fn set_intensity(&mut self, edge_label: &str, intensity: T) -> Result<()> {
        self.set(edge_label, Complex::new(intensity.sqrt(), T::zero()))
    }

    pub fn amplitude(&self, edge_label: &str) -> Result<ComplexAmplitude<T>> {
        Ok(self.amplitudes[self.network.edge_by_label(edge_label)?])
    }

    pub fn intensity(&self, edge_label: &str) -> Result<T> {
        self.amplitude(edge_label).map(intensity)
    }

    pub fn amplitude_at(&self, edge: EdgeId) -> ComplexAmplitude<T> {
        self.amplitudes[edge]
    }

    pub fn amplitudes(&self) -> &[ComplexAmplitude<T>] {
        &self.amplitudes
    }

    /// Total intensity entering through the sources.
    pub fn input_intensity(&self) -> T {
        self.network
            .source_edges()
            .into_iter()
            .fold(T::zero(), |acc, e| acc + intensity(self.amplitudes[e]))
    }

    /// Total intensity arriving at the detectors.
    pub fn output_intensity(&self) -> T {
        self.network
            .detector_edges()
            .into_iter()
            .fold(T::zero(), |acc, e| acc + intensity(self.amplitudes[e]))
    }
}

/// Pushes source amplitudes through the network in topological order.
///
/// `inputs` must name every source exactly; vacuum ports need an explicit
/// (possibly zero) amplitude.
pub fn propagate<'n, T: Scalar>(
    network: &'n OpticalNetwork<T>,
    inputs: &[(&str, ComplexAmplitude<T>)],
) -> Result<FieldConfiguration<'n, T>> {
    let mut source_amp = vec![None; network.nodes().len()];
    for (label, amp) in inputs {
        let node = network.node_by_label(label)?;
        if !matches!(network.node(node).element, Element::Source(_)) {
            return Err(Error::Configuration(format!("`{label}` is not a source")));
        }
        source_amp[node] = Some(*amp);
    }

    let mut config = FieldConfiguration::zeros(network);
    for &node in network.topological_order() {
        match &network.node(node).element {
            Element::Source(_) => {
                let amp = source_amp[node].ok_or_else(|| {
                    Error::Configuration(format!(
                        "source `{}` has no assigned amplitude",
                        network.node(node).label
                    ))
                })?;
                config.amplitudes[network.output_edge(node, 0)] = amp;
            }
            Element::Beamsplitter(spec) => {
                let a = config.amplitudes[network.input_edge(node, 0)];
                let b = config.amplitudes[network.input_edge(node, 1)];
                let (o1, o2) = beamsplitter_transfer(a, b, spec);
                config.amplitudes[network.output_edge(node, 0)] = o1;
                config.amplitudes[network.output_edge(node, 1)] = o2;
            }
            Element::PhaseShifter(phi) => {
                let a = config.amplitudes[network.input_edge(node, 0)];
                config.amplitudes[network.output_edge(node, 0)] = a * Complex::from_polar(T::one(), *phi);
            }
            Element::Detector => {}
        }
    }
    Ok(config)
}

/// Propagates unit amplitude from the photon source with every vacuum port dark.
pub fn propagate_photon<T: Scalar>(network: &OpticalNetwork<T>) -> Result<FieldConfiguration<'_, T>> {
    let photon = network.photon_source()?;
    let zero = Complex::new(T::zero(), T::zero());
    let inputs: Vec<(&str, ComplexAmplitude<T>)> = network
        .sources()
        .map(|s| {
            let amp = if s == photon {
                Complex::new(T::one(), T::zero())
            } else {
                zero
            };
            (network.node(s).label.as_str(), amp)
        })
        .collect();
    propagate(network, &inputs)
}

/// `|sum of source intensities - sum of detector intensities|`.
pub fn check_energy_conservation<T: Scalar>(config: &FieldConfiguration<'_, T>) -> T {
    (config.input_intensity() - config.output_intensity()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn rejects_out_of_range_transmission() {
        assert!(BeamsplitterSpec::new(1.3).is_err());
        assert!(BeamsplitterSpec::new(-0.1).is_err());
        assert!(BeamsplitterSpec::new(f64::NAN).is_err());
        assert!(BeamsplitterSpec::new(0.0).unwrap().is_degenerate());
    }

    #[test]
    fn symmetric_split() {
        let s = BeamsplitterSpec::new(0.5).unwrap();
        let (a, b) = beamsplitter_transfer(c(1.0, 0.0), c(0.0, 0.0), &s);
        assert_abs_diff_eq!(intensity(a), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(intensity(b), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn quadrature_inputs_fully_interfere() {
        let s = BeamsplitterSpec::new(0.5).unwrap();
        let (a, b) = beamsplitter_transfer(c(1.0, 0.0), c(0.0, 1.0), &s);
        // out1 = sqrt(.5) + i sqrt(.5) * i = 0 ; out2 = i sqrt(.5) + i sqrt(.5)
        assert_abs_diff_eq!(a.norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.im, 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(intensity(b), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn boosted_photon_fires_a() {
        let s = BeamsplitterSpec::new(0.7).unwrap();
        let (a, b) = beamsplitter_transfer(c((1.0 + 3.0 / 7.0f64).sqrt(), 0.0), c(0.0, 0.0), &s);
        assert_abs_diff_eq!(intensity(a), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(intensity(b), 3.0 / 7.0, epsilon = 1e-12);
    }

    #[test]
    fn identity_network() {
        let mut b = crate::network::NetworkBuilder::<f64>::new();
        let s = b.photon("s");
        let d = b.detector("D");
        b.connect("e", (s, 0), (d, 0));
        let net = b.build().unwrap();
        let cfg = propagate(&net, &[("s", c(1.0, 0.0))]).unwrap();
        assert_eq!(cfg.amplitude("e").unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn single_splitter_fractions() {
        let net = geometry::single_splitter(BeamsplitterSpec::new(0.7).unwrap()).unwrap();
        let cfg = propagate_photon(&net).unwrap();
        assert_abs_diff_eq!(cfg.intensity("A").unwrap(), 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(cfg.intensity("B").unwrap(), 0.3, epsilon = 1e-15);
    }

    #[test]
    fn interferometer_fractions() {
        let net = geometry::interferometer(BeamsplitterSpec::new(0.7).unwrap()).unwrap();
        let cfg = propagate_photon(&net).unwrap();
        let s = 0.21f64.sqrt();
        assert_abs_diff_eq!(cfg.intensity("A").unwrap(), 0.5 + s, epsilon = 1e-12);
        assert_abs_diff_eq!(cfg.intensity("B").unwrap(), 0.5 - s, epsilon = 1e-12);
        assert_abs_diff_eq!(cfg.intensity("A").unwrap(), 0.958_257_569_495_584, epsilon = 1e-12);
    }

    #[test]
    fn missing_source_is_reported() {
        let net = geometry::single_splitter(BeamsplitterSpec::new(0.7).unwrap()).unwrap();
        let err = propagate(&net, &[("photon", c(1.0, 0.0))]).unwrap_err();
        assert!(matches!(err, Error::Configuration(ref m) if m.contains("dark")));
        assert!(propagate(&net, &[("bs", c(1.0, 0.0))]).is_err());
        assert!(propagate(&net, &[("nothing", c(1.0, 0.0))]).is_err());
    }

    #[test]
    fn hand_built_solution_conserves_energy() {
        for t in [0.1, 0.5, 0.7, 0.93] {
            let spec = BeamsplitterSpec::new(t).unwrap();
            let net = geometry::single_splitter(spec).unwrap();
            let r = spec.reflection();
            // detector A fires: 1 + I1 in, I_A = 0, I_B = I1 = R/T out
            let mut cfg = FieldConfiguration::zeros(&net);
            cfg.set_intensity("in1", 1.0 + r / t).unwrap();
            cfg.set_intensity("in2", 0.0).unwrap();
            cfg.set_intensity("A", 1.0).unwrap();
            cfg.set_intensity("B", r / t).unwrap();
            assert!(check_energy_conservation(&cfg) < 1e-12);
        }
        let net = geometry::single_splitter(BeamsplitterSpec::new(0.4).unwrap()).unwrap();
        assert_eq!(check_energy_conservation(&FieldConfiguration::zeros(&net)), 0.0);
    }

    #[test]
    fn phase_shifter_rotates() {
        let mut b = crate::network::NetworkBuilder::<f64>::new();
        let s = b.photon("s");
        let p = b.phase_shifter("p", std::f64::consts::FRAC_PI_2);
        let d = b.detector("D");
        b.connect("e1", (s, 0), (p, 0));
        b.connect("e2", (p, 0), (d, 0));
        let net = b.build().unwrap();
        let cfg = propagate(&net, &[("s", c(1.0, 0.0))]).unwrap();
        let out = cfg.amplitude("e2").unwrap();
        assert_abs_diff_eq!(out.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out.im, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn works_in_single_precision() {
        let s = BeamsplitterSpec::<f32>::new(0.7).unwrap();
        let (a, b) = beamsplitter_transfer(Complex::new(1.0f32, 0.0), Complex::new(0.0, 0.0), &s);
        assert!((intensity(a) - 0.7).abs() < 1e-6);
        assert!((intensity(b) - 0.3).abs() < 1e-6);
    }
}
