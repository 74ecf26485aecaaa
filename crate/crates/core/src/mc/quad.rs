use crate::error::{Error, Result};

// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
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

const MAX_DEPTH: u32 = 50;

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

// Bisection halves the local tolerance down to this fraction of the
// requested one; endpoint singularities like `sqrt(x)` otherwise exhaust
// the depth limit.
const TOL_FLOOR: f64 = 1e-9;

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, floor: f64, depth: u32) -> Result<f64> {
    let (value, err) = gk15(f, a, b);
    if err <= tol.max(floor).max(1e-15 * value.abs()) {
        return Ok(value);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Quadrature { a, b, estimate: err });
    }
    let m = 0.5 * (a + b);
    Ok(adapt(f, a, m, 0.5 * tol, floor, depth + 1)? + adapt(f, m, b, 0.5 * tol, floor, depth + 1)?)
}

/// Adaptive Gauss-Kronrod integral of `f` over `[a, b]` to absolute
/// tolerance `tol`.
pub fn quad1d<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return quad1d(f, b, a, tol).map(|v| -v);
    }
    let value = adapt(&f, a, b, tol, tol * TOL_FLOOR, 0)?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Quadrature { a, b, estimate: f64::INFINITY })
    }
}

/// Integral over `[a, b]` split at interior breakpoints (kinks of `f`).
pub fn quad1d_split<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breaks: &[f64], tol: f64) -> Result<f64> {
    let mut knots = vec![a];
    knots.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    knots.push(b);
    let parts = (knots.len() - 1) as f64;
    knots
        .windows(2)
        .map(|w| quad1d(&f, w[0], w[1], tol / parts))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        let v = quad1d(|x| x.powi(4), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 0.2).abs() < 1e-10);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        assert_eq!(quad1d(|x| x, 1.0, 1.0, 1e-12).unwrap(), 0.0);
        let v = quad1d(|x| x, 1.0, 0.0, 1e-12).unwrap();
        assert!((v + 0.5).abs() < 1e-14);
    }

    #[test]
    fn kinked_integrand_with_breakpoint() {
        let v = quad1d_split(|x: f64| x.abs().powf(4.0) / (2.0 - x).powf(4.0), -1.0, 1.0, &[0.0], 1e-13).unwrap();
        // closed form: substitute u = 2 - x
        let closed = |u: f64| {
            // antiderivative of (2-u)^4 / u^4 for u > 0
            u - 8.0 * u.ln() - 24.0 / u + 16.0 / u.powi(2) - 16.0 / (3.0 * u.powi(3))
        };
        let pos = -(closed(1.0) - closed(2.0));
        let neg = quad1d(|x: f64| x.powi(4) / (2.0 - x).powi(4), -1.0, 0.0, 1e-14).unwrap();
        assert!((v - (pos + neg)).abs() < 1e-11, "{v} vs {}", pos + neg);
    }

    #[test]
    fn steep_integrand() {
        let v = quad1d(|x: f64| x.powi(-4), 0.05, 1.0, 1e-9).unwrap();
        let exact = (0.05f64.powi(-3) - 1.0) / 3.0;
        assert!((v - exact).abs() < 1e-8 * exact);
    }

    #[test]
    fn endpoint_root_singularity() {
        let v = quad1d(|x: f64| x.powf(0.25), 0.0, 1.0, 1e-10).unwrap();
        assert!((v - 0.8).abs() < 1e-9);
    }

    #[test]
    fn non_finite_integrand_reported() {
        assert!(quad1d(|x: f64| 1.0 / x, -1.0, 1.0, 1e-10).is_err());
    }
}
