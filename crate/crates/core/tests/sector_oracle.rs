use std::f64::consts::{PI, TAU};

use swarmfire::firemodel::{polar_angle, sector_parameter};
use swarmfire::scenario::pine_fires;
use swarmfire::{Fire, Point};

// Polar area element r(θ)²/2 of an ellipse centered at the origin.
fn half_r2(a: f64, b: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    0.5 * (a * b) * (a * b) / ((b * c).powi(2) + (a * s).powi(2))
}

// Composite Simpson rule, independent of the closed-form sector area.
fn quadrature(a: f64, b: f64, lo: f64, hi: f64) -> f64 {
    let n = 20_000;
    let h = (hi - lo) / n as f64;
    let mut sum = half_r2(a, b, lo) + half_r2(a, b, hi);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * half_r2(a, b, lo + i as f64 * h);
    }
    sum * h / 3.0
}

#[test]
fn quadrature_matches_full_ellipse() {
    assert!((quadrature(300.0, 250.0, 0.0, TAU) / (PI * 300.0 * 250.0) - 1.0).abs() < 1e-10);
}

#[test]
fn pine_geometries_split_into_equal_areas() {
    for f in pine_fires() {
        let fire = Fire::new(
            0,
            Point::new(f.center[0], f.center[1]),
            f.a,
            f.b,
            0.0,
        );
        let target = PI * f.a * f.b;
        for n in 1..=8 {
            let bounds = fire.partition_sectors(n).unwrap();
            assert_eq!(bounds.len(), n + 1);
            assert_eq!(bounds[0], 0.0);
            assert_eq!(bounds[n], TAU);
            for w in bounds.windows(2) {
                let oracle = quadrature(f.a, f.b, w[0], w[1]);
                let closed = fire.sector_area(w[0], w[1]).unwrap();
                let expected = target / n as f64;
                assert!(
                    (oracle / expected - 1.0).abs() < 1e-6,
                    "a={} b={} n={n}: {oracle} vs {expected}",
                    f.a,
                    f.b
                );
                assert!((closed / oracle - 1.0).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn very_eccentric_fire() {
    let fire = Fire::new(0, Point::zero(), 1000.0, 10.0, 0.0);
    let bounds = fire.partition_sectors(5).unwrap();
    for w in bounds.windows(2) {
        let q = quadrature(1000.0, 10.0, w[0], w[1]);
        assert!((q / (PI * 1000.0 * 10.0 / 5.0) - 1.0).abs() < 1e-6);
    }
}

#[test]
fn parameter_and_polar_angle_are_inverse() {
    for i in 0..=200 {
        let g = TAU * i as f64 / 200.0;
        let phi = sector_parameter(300.0, 120.0, g);
        assert!((polar_angle(300.0, 120.0, phi) - g).abs() < 1e-12);
    }
}
