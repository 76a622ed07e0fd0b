//! Ready-made networks for the standard experiments.
//!
//! Labels are fixed so models, the quantum reference and reports agree on
//! them: the photon enters on edge `in1`, the dark port on `in2`, the
//! interferometer arms are `X` (transmitted) and `Y` (reflected), and the two
//! detectors of a single splitter or interferometer are `A` and `B`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::BeamsplitterSpec;
use crate::network::{NetworkBuilder, OpticalNetwork};
use crate::scalar::Scalar;

pub const PHOTON: &str = "photon";
pub const DARK: &str = "dark";
pub const PHOTON_EDGE: &str = "in1";
pub const DARK_EDGE: &str = "in2";
pub const DETECTOR_A: &str = "A";
pub const DETECTOR_B: &str = "B";
pub const ARM_X: &str = "X";
pub const ARM_Y: &str = "Y";

/// One splitter, two detectors. `A` sits on the transmitted port of the photon input.
pub fn single_splitter<T: Scalar>(spec: BeamsplitterSpec<T>) -> Result<OpticalNetwork<T>> {
    let mut b = NetworkBuilder::new();
    let photon = b.photon(PHOTON);
    let dark = b.vacuum(DARK);
    let bs = b.beamsplitter("bs", spec);
    let a = b.detector(DETECTOR_A);
    let d = b.detector(DETECTOR_B);
    b.connect(PHOTON_EDGE, (photon, 0), (bs, 0));
    b.connect(DARK_EDGE, (dark, 0), (bs, 1));
    b.connect(DETECTOR_A, (bs, 0), (a, 0));
    b.connect(DETECTOR_B, (bs, 1), (d, 0));
    b.build()
}

/// Detector label for stage `i` (1-based) of a cascade.
pub fn cascade_detector(i: usize) -> String {
    format!("D{i}")
}

/// A chain of splitters: splitter `i` transmits to detector `D{i}` and
/// reflects into splitter `i + 1`; the last reflection lands on `D{k+1}`.
/// Each splitter's second input is its own vacuum source `dark{i}` on edge `z{i}`.
pub fn cascade<T: Scalar>(specs: &[BeamsplitterSpec<T>]) -> Result<OpticalNetwork<T>> {
    if specs.is_empty() {
        return Err(Error::Configuration("a cascade needs at least one splitter".into()));
    }
    let mut b = NetworkBuilder::new();
    let photon = b.photon(PHOTON);
    let mut feed = (photon, 0, PHOTON_EDGE.to_owned());
    for (i, spec) in specs.iter().enumerate() {
        let stage = i + 1;
        let bs = b.beamsplitter(format!("bs{stage}"), *spec);
        let dark = b.vacuum(format!("dark{stage}"));
        let det = b.detector(cascade_detector(stage));
        b.connect(feed.2, (feed.0, feed.1), (bs, 0));
        b.connect(format!("z{stage}"), (dark, 0), (bs, 1));
        b.connect(cascade_detector(stage), (bs, 0), (det, 0));
        feed = (bs, 1, format!("r{stage}"));
    }
    let last = b.detector(cascade_detector(specs.len() + 1));
    b.connect(cascade_detector(specs.len() + 1), (feed.0, feed.1), (last, 0));
    b.build()
}

/// Equal-arm Mach-Zehnder interferometer with a 50/50 recombining splitter.
pub fn interferometer<T: Scalar>(first: BeamsplitterSpec<T>) -> Result<OpticalNetwork<T>> {
    interferometer_general(first, BeamsplitterSpec::balanced(), None)
}

/// Interferometer with an extra phase `phase` on arm `X` (after the `X` edge,
/// which stays the intermediate observation point) and an arbitrary final splitter.
///
/// Detector `A` is on the final splitter's second output, so a balanced first
/// splitter with no extra phase sends the photon to `A` with certainty.
pub fn interferometer_general<T: Scalar>(
    first: BeamsplitterSpec<T>,
    last: BeamsplitterSpec<T>,
    phase: Option<T>,
) -> Result<OpticalNetwork<T>> {
    let mut b = NetworkBuilder::new();
    let photon = b.photon(PHOTON);
    let dark = b.vacuum(DARK);
    let bs1 = b.beamsplitter("bs1", first);
    let bs2 = b.beamsplitter("bs2", last);
    let a = b.detector(DETECTOR_A);
    let d = b.detector(DETECTOR_B);
    b.connect(PHOTON_EDGE, (photon, 0), (bs1, 0));
    b.connect(DARK_EDGE, (dark, 0), (bs1, 1));
    match phase {
        Some(phi) => {
            let ps = b.phase_shifter("arm_phase", phi);
            b.connect(ARM_X, (bs1, 0), (ps, 0));
            b.connect("X_shifted", (ps, 0), (bs2, 0));
        }
        None => {
            b.connect(ARM_X, (bs1, 0), (bs2, 0));
        }
    }
    b.connect(ARM_Y, (bs1, 1), (bs2, 1));
    b.connect(DETECTOR_B, (bs2, 0), (d, 0));
    b.connect(DETECTOR_A, (bs2, 1), (a, 0));
    b.build()
}

/// Random `modes`-wide mesh of `layers` elements, for property checks.
///
/// Mode `j` starts at a source (one random mode holds the photon, the rest
/// are vacuum `vac{j}`) and ends at detector `D{j}`. Each layer is either a
/// splitter of random `T` across a random pair of modes or, one time in four,
/// a random phase on a single mode.
pub fn random_mesh<T: Scalar, R: Rng + ?Sized>(rng: &mut R, modes: usize, layers: usize) -> Result<OpticalNetwork<T>> {
    if modes < 2 {
        return Err(Error::Configuration("a mesh needs at least two modes".into()));
    }
    let mut b = NetworkBuilder::new();
    let photon_mode = rng.gen_range(0..modes);
    let mut heads: Vec<(usize, usize)> = (0..modes)
        .map(|j| {
            let id = if j == photon_mode {
                b.photon(PHOTON)
            } else {
                b.vacuum(format!("vac{j}"))
            };
            (id, 0)
        })
        .collect();
    let mut edge = 0usize;
    let mut next_edge = || {
        edge += 1;
        format!("e{edge}")
    };
    for layer in 0..layers {
        if rng.gen_bool(0.25) {
            let j = rng.gen_range(0..modes);
            let ps = b.phase_shifter(format!("ps{layer}"), T::lit(rng.gen_range(0.0..std::f64::consts::TAU)));
            b.connect(next_edge(), heads[j], (ps, 0));
            heads[j] = (ps, 0);
        } else {
            let i = rng.gen_range(0..modes);
            let j = (i + rng.gen_range(1..modes)) % modes;
            let spec = BeamsplitterSpec::new(T::lit(rng.gen::<f64>()))?;
            let bs = b.beamsplitter(format!("bs{layer}"), spec);
            b.connect(next_edge(), heads[i], (bs, 0));
            b.connect(next_edge(), heads[j], (bs, 1));
            heads[i] = (bs, 0);
            heads[j] = (bs, 1);
        }
    }
    for (j, head) in heads.into_iter().enumerate() {
        let d = b.detector(format!("D{j}"));
        b.connect(format!("D{j}"), head, (d, 0));
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cascade_labels() {
        let specs = [BeamsplitterSpec::new(0.5).unwrap(), BeamsplitterSpec::new(0.5).unwrap()];
        let net = cascade(&specs).unwrap();
        let labels: Vec<_> = net.detectors().map(|n| net.node(n).label.clone()).collect();
        assert_eq!(labels, ["D1", "D2", "D3"]);
        assert!(cascade::<f64>(&[]).is_err());
    }

    #[test]
    fn interferometer_has_arms() {
        let net = interferometer(BeamsplitterSpec::new(0.7).unwrap()).unwrap();
        assert!(net.edge_by_label(ARM_X).is_ok());
        assert!(net.edge_by_label(ARM_Y).is_ok());
        assert_eq!(net.detectors().count(), 2);
    }
}
