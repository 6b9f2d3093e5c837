mod support;

use support::{bessel_j_integral, exact_biv_bessel};

#[test]
fn exact_series_matches_closed_forms() {
    // J_{0,0}(x, -y) = I_0(2 sqrt(xy)); I_0(2) = 2.2795853023360673
    assert!((exact_biv_bessel(0, 1.0, -1.0) - 2.279_585_302_336_067_3).abs() < 1e-15);
    // J_{0,0}(1, 1) = J_0(2) = 0.22389077914123567
    assert!((exact_biv_bessel(0, 1.0, 1.0) - 0.223_890_779_141_235_67).abs() < 1e-16);
    assert_eq!(exact_biv_bessel(3, 2.0, 0.0), 8.0 / 6.0);
    assert_eq!(exact_biv_bessel(0, 0.0, 5.0), 1.0);
}

#[test]
fn exact_series_matches_integral_representation() {
    for (a, x, y) in [(0u32, 4.0, 4.0), (1, 9.0, 1.0), (3, 2.5, 10.0), (5, 7.0, 7.0)] {
        let z = 2.0 * (x * y as f64).sqrt();
        let expected = (x / y as f64).powf(a as f64 / 2.0) * bessel_j_integral(a, z);
        assert!((exact_biv_bessel(a, x, y) - expected).abs() < 1e-12, "a={a} x={x} y={y}");
    }
}
