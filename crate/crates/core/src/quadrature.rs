//! Globally adaptive Gauss–Kronrod (7/15) integration, with a rational map
//! for half-lines.

#![allow(clippy::excessive_precision)]

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
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

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_intervals: 2000,
        }
    }
}

#[derive(Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

impl Quadrature {
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> QuadResult {
        let (value, error) = kronrod15(&f, a, b);
        let mut segments = vec![Segment { a, b, value, error }];
        loop {
            let total: f64 = segments.iter().map(|s| s.value).sum();
            let error: f64 = segments.iter().map(|s| s.error).sum();
            let target = self.abs_tol.max(self.rel_tol * total.abs());
            if error <= target || segments.len() >= self.max_intervals {
                return QuadResult {
                    value: total,
                    abs_error: error,
                    intervals: segments.len(),
                    converged: error <= target,
                };
            }
            let (worst, _) = segments
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
                .expect("at least one segment");
            let seg = segments.swap_remove(worst);
            let mid = 0.5 * (seg.a + seg.b);
            if mid <= seg.a || mid >= seg.b {
                // interval exhausted at machine resolution
                segments.push(Segment { error: 0.0, ..seg });
                continue;
            }
            for (lo, hi) in [(seg.a, mid), (mid, seg.b)] {
                let (value, error) = kronrod15(&f, lo, hi);
                segments.push(Segment {
                    a: lo,
                    b: hi,
                    value,
                    error,
                });
            }
        }
    }

    /// Integrates over `[a, inf)` through `x = a + scale * t / (1 - t)`, where
    /// `scale` should be of the order of the integrand's decay length.
    pub fn integrate_to_infinity<F: Fn(f64) -> f64>(&self, f: F, a: f64, scale: f64) -> QuadResult {
        let mapped = |t: f64| {
            let s = 1.0 - t;
            let x = a + scale * t / s;
            let jac = scale / (s * s);
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v * jac
            }
        };
        self.integrate(mapped, 0.0, 1.0)
    }
}
