//! Globally adaptive Gauss-Kronrod (7/15) integration on a finite interval.

// QUADPACK nodes and weights, kept at their published precision
#![allow(clippy::excessive_precision)]

use crate::scalar::Scalar;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_intervals: usize,
}

impl<T: Scalar> Default for QuadratureOptions<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::lit(1e-13),
            rel_tol: T::lit(1e-13),
            max_intervals: 500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub error_estimate: T,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    lo: T,
    hi: T,
    value: T,
    error: T,
}

fn gk15<T: Scalar, F: Fn(T) -> T>(f: &F, lo: T, hi: T) -> Segment<T> {
    let two = T::lit(2.0);
    let center = (lo + hi) / two;
    let half = (hi - lo) / two;
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * T::lit(WG[j / 2]);
        }
    }
    Segment {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[lo, hi]`, bisecting the worst segment until the
/// summed error estimate meets `max(abs_tol, rel_tol * |value|)`.
pub fn integrate<T: Scalar, F: Fn(T) -> T>(f: F, lo: T, hi: T, opts: QuadratureOptions<T>) -> Quadrature<T> {
    let mut segments = vec![gk15(&f, lo, hi)];
    let mut evaluations = 15;
    loop {
        let value = segments.iter().fold(T::zero(), |a, s| a + s.value);
        let error = segments.iter().fold(T::zero(), |a, s| a + s.error);
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= target || segments.len() >= opts.max_intervals {
            return Quadrature {
                value,
                error_estimate: error,
                evaluations,
                converged: error <= target,
            };
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.partial_cmp(&b.1.error).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let seg = segments.swap_remove(worst);
        let mid = (seg.lo + seg.hi) / T::lit(2.0);
        segments.push(gk15(&f, seg.lo, mid));
        segments.push(gk15(&f, mid, seg.hi));
        evaluations += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sine_half_period() {
        let q = integrate(f64::sin, 0.0, PI, QuadratureOptions::default());
        assert!(q.converged);
        assert!((q.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn polynomial_is_exact() {
        // 15-point Kronrod integrates degree 22 exactly
        let q = integrate(
            |x: f64| x.powi(9) - 3.0 * x * x,
            -1.0,
            2.0,
            QuadratureOptions::default(),
        );
        let exact = (2f64.powi(10) - 1.0) / 10.0 - (8.0 + 1.0);
        assert!((q.value - exact).abs() < 1e-12);
        assert_eq!(q.evaluations, 15);
    }

    #[test]
    fn adapts_to_peaks() {
        let q = integrate(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, QuadratureOptions::default());
        let exact = 2.0 * (1.0 / 1e-2) * (1.0f64 / 1e-2).atan();
        assert!(q.converged);
        assert!((q.value - exact).abs() / exact < 1e-12);
        assert!(q.evaluations > 15);
    }
}
