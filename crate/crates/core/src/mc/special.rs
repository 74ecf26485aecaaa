/// Gaussian tail probability `Q(x) = P[Z > x]`, `Z ~ N(0, 1)`.
pub fn qfunc(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::quad1d;

    // Reference values from 40-digit arbitrary precision erfc.
    const REFERENCE: [(f64, f64); 9] = [
        (-3.0, 0.998_650_101_968_369_905_47),
        (-1.0, 0.841_344_746_068_542_948_59),
        (0.5, 0.308_537_538_725_986_896_36),
        (1.0, 0.158_655_253_931_457_051_41),
        (1.959964, 0.024_999_999_096_442_401_994),
        (2.5, 0.006_209_665_325_776_135_167),
        (4.0, 3.167_124_183_311_992_125_4e-5),
        (6.0, 9.865_876_450_376_981_407e-10),
        (8.0, 6.220_960_574_271_784_123_5e-16),
    ];

    #[test]
    fn matches_high_precision_reference() {
        for (x, q) in REFERENCE {
            let rel = (qfunc(x) - q).abs() / q;
            assert!(rel < 1e-10, "Q({x}) rel err {rel:e}");
        }
    }

    #[test]
    fn half_at_zero_and_symmetric() {
        assert_eq!(qfunc(0.0), 0.5);
        for i in 0..=80 {
            let x = -8.0 + 0.2 * i as f64;
            assert!((qfunc(x) + qfunc(-x) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn quantile_by_bisection_against_integrated_density() {
        // Independent route: Q as the integral of the Gaussian density.
        let density = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let tail = |x: f64| quad1d(density, x, 40.0, 1e-14).unwrap();
        let (mut lo, mut hi) = (0.0, 5.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if tail(mid) > 0.025 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - 1.959964).abs() < 1e-6, "quantile {lo}");
        assert!((qfunc(1.959964) - 0.025).abs() < 1e-6);
        assert!((qfunc(2.3) - tail(2.3)).abs() < 1e-12);
    }
}
