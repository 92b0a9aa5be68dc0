use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use rand::Rng;
use rand_distr::Distribution;
use swarmfire::rng::RngStream;
use swarmfire::search::{
    sample_heading, sample_step_length, search_cone_halfwidth, LevySampler, StepParams, SwarmMode,
};
use swarmfire::ScenarioConfig;

const DRAWS: usize = 1_000_000;

// Least-squares slope of log S(x) against log x, with S the empirical
// survival function evaluated on a log-spaced grid.
fn survival_slope(samples: &mut [f64], x_lo: f64, x_hi: f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let pts: Vec<(f64, f64)> = (0..=20)
        .map(|i| {
            let x = x_lo * (x_hi / x_lo).powf(i as f64 / 20.0);
            let above = samples.len() - samples.partition_point(|&s| s <= x);
            (x.ln(), (above as f64 / n).ln())
        })
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn levy_tail_exponent() {
    for alpha in [1.2, 1.5, 2.0] {
        let sampler = LevySampler::new(alpha, 1e9);
        let mut rng = RngStream::new(11, 0, 0);
        let mut s: Vec<f64> = (0..DRAWS).map(|_| sampler.sample(&mut rng)).collect();
        let slope = survival_slope(&mut s, 1.0, 100.0);
        assert!((slope + alpha).abs() < 0.1, "alpha={alpha} slope={slope}");
    }
}

#[test]
fn levy_draws_respect_truncation() {
    let params = StepParams::from_config(&ScenarioConfig::default());
    let max = ScenarioConfig::default().area().diagonal() / 500.0;
    assert!((params.levy.max - max).abs() < 1e-12);
    let mut rng = RngStream::new(3, 0, 0);
    for _ in 0..200_000 {
        let l = sample_step_length(SwarmMode::Explore, &mut rng, &params);
        assert!((1.0..=max).contains(&l));
    }
}

#[test]
fn half_normal_mean() {
    let params = StepParams::from_config(&ScenarioConfig::default());
    let mut rng = RngStream::new(5, 0, 0);
    let mean = (0..DRAWS)
        .map(|_| sample_step_length(SwarmMode::Exploit, &mut rng, &params))
        .sum::<f64>()
        / DRAWS as f64;
    let expected = (2.0 / PI).sqrt();
    assert!((mean / expected - 1.0).abs() < 0.01, "mean {mean}");
}

#[test]
fn headings_stay_in_cone() {
    let mut rng = RngStream::new(9, 0, 0);
    for &(center, k_phi) in &[(0.3, FRAC_PI_3), (3.0, FRAC_PI_2), (-2.9, 1.0)] {
        let phi0 = search_cone_halfwidth(310.0, k_phi, 0.05);
        for _ in 0..100_000 {
            let h = sample_heading(center, phi0, &mut rng);
            let off = swarmfire::geometry::wrap_angle(h - center);
            assert!(off.abs() <= phi0 + 1e-12);
        }
    }
}

#[test]
fn headings_uniform_in_cone() {
    // χ² goodness of fit over 20 equal bins.
    let mut rng = RngStream::new(13, 0, 0);
    let (center, phi0) = (1.0, 0.8);
    let mut bins = [0usize; 20];
    let n = 200_000;
    for _ in 0..n {
        let h = sample_heading(center, phi0, &mut rng);
        let k = (((h - center + phi0) / (2.0 * phi0)) * 20.0).floor() as usize;
        bins[k.min(19)] += 1;
    }
    let e = n as f64 / 20.0;
    let chi2: f64 = bins.iter().map(|&o| (o as f64 - e).powi(2) / e).sum();
    // 99.9th percentile of χ² with 19 degrees of freedom.
    assert!(chi2 < 43.82, "chi2 {chi2}");
}

#[test]
fn streams_are_reproducible() {
    let mut a = RngStream::for_agent(42, 7, 3);
    let mut b = RngStream::for_agent(42, 7, 3);
    let xs: Vec<u64> = (0..16).map(|_| a.random()).collect();
    let ys: Vec<u64> = (0..16).map(|_| b.random()).collect();
    assert_eq!(xs, ys);
}
