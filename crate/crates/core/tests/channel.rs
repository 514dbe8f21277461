use fdnoma::channel::{distribution_sum, rician_ccdf, rician_cdf, rician_pdf, sample_gain};
use fdnoma::quadrature::Quadrature;
use fdnoma::{RicianParams, SeriesControl};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params(k: f64, lambda: f64) -> RicianParams {
    RicianParams::new(k, lambda).unwrap()
}

#[test]
fn pdf_integrates_to_one() {
    let q = Quadrature::default();
    for k in [0.0, 1.0, 5.0] {
        for lambda in [0.5, 1.0, 8.0] {
            let p = params(k, lambda);
            let r = q.integrate_to_infinity(|x| rician_pdf(x, p), 0.0, lambda);
            assert!((r.value - 1.0).abs() < 1e-6, "K={k} lambda={lambda}: {}", r.value);
        }
    }
}

#[test]
fn cdf_matches_integrated_pdf() {
    let q = Quadrature::default();
    let p = params(1.0, 8.0);
    for x in [0.5, 2.0, 8.0, 30.0] {
        let direct = q.integrate(|t| rician_pdf(t, p), 0.0, x).value;
        let cdf = rician_cdf(x, p, SeriesControl::default()).unwrap();
        assert!((direct - cdf).abs() < 1e-8, "x={x}: {direct} vs {cdf}");
    }
}

#[test]
fn exponential_law_at_k_zero() {
    let s = SeriesControl::default();
    for lambda in [0.5, 1.0, 8.0] {
        let p = params(0.0, lambda);
        for x in [0.0, 0.3, 1.0, 7.5, 40.0] {
            let sf = (-x / lambda).exp();
            assert!((rician_pdf(x, p) - sf / lambda).abs() < 1e-14);
            assert!((rician_ccdf(x, p, s).unwrap() - sf).abs() < 1e-14);
        }
    }
}

/// Quantile by bisection on the series CDF.
fn quantile(p: RicianParams, u: f64) -> f64 {
    let s = SeriesControl::default();
    let (mut lo, mut hi) = (0.0, p.mean_gain());
    while rician_cdf(hi, p, s).unwrap() < u {
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if rician_cdf(mid, p, s).unwrap() < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn draws(p: RicianParams, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sample_gain(p, &mut rng)).collect()
}

#[test]
fn sample_mean_within_three_se() {
    for (k, lambda) in [(0.0, 8.0), (1.0, 8.0), (5.0, 0.5)] {
        let xs = draws(params(k, lambda), 200_000, 11);
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(
            (mean - lambda).abs() < 3.0 * (var / n).sqrt(),
            "K={k}: {mean} vs {lambda}"
        );
    }
}

#[test]
fn samples_pass_kolmogorov_smirnov() {
    let s = SeriesControl::default();
    for (k, lambda) in [(0.0, 1.0), (1.0, 8.0), (10.0, 1.0)] {
        let p = params(k, lambda);
        let mut xs = draws(p, 20_000, 5);
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = rician_cdf(x, p, s).unwrap();
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max);
        // 1% critical value
        assert!(d < 1.63 / n.sqrt(), "K={k}: D = {d}");
    }
}

#[test]
fn histogram_passes_chi_square() {
    const BINS: usize = 20;
    for (k, lambda) in [(0.0, 1.0), (1.0, 8.0), (5.0, 0.5)] {
        let p = params(k, lambda);
        let edges: Vec<f64> = (1..BINS).map(|i| quantile(p, i as f64 / BINS as f64)).collect();
        let xs = draws(p, 100_000, 23);
        let mut counts = [0usize; BINS];
        for x in &xs {
            counts[edges.partition_point(|e| e <= x)] += 1;
        }
        let expected = xs.len() as f64 / BINS as f64;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 19 degrees of freedom, 1% significance
        assert!(chi2 < 36.19, "K={k}: chi2 = {chi2}");
    }
}

#[test]
fn large_k_concentrates_on_the_mean() {
    let wide = draws(params(0.0, 1.0), 50_000, 3);
    let narrow = draws(params(50.0, 1.0), 50_000, 3);
    let var = |xs: &[f64]| {
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64
    };
    // variance is lambda^2 (2K+1)/(K+1)^2
    assert!((var(&narrow) - 101.0 / 2601.0).abs() < 0.005);
    assert!(var(&narrow) < var(&wide) / 10.0);
}

proptest! {
    #[test]
    fn cdf_and_ccdf_are_complementary(k in 0.0..20.0f64, lambda in 0.1..20.0f64, x in 0.0..100.0f64) {
        let d = distribution_sum(x, params(k, lambda), SeriesControl::default());
        prop_assert!(d.converged);
        prop_assert!((d.cdf + d.ccdf - 1.0).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&d.cdf));
    }

    #[test]
    fn cdf_is_nondecreasing(k in 0.0..20.0f64, lambda in 0.1..20.0f64, x in 0.0..50.0f64, dx in 0.0..5.0f64) {
        let p = params(k, lambda);
        let s = SeriesControl::default();
        // term counts differ between x and x + dx, so allow the truncation error
        prop_assert!(rician_cdf(x + dx, p, s).unwrap() >= rician_cdf(x, p, s).unwrap() - 10.0 * s.rel_tol());
        prop_assert!(rician_pdf(x, p) >= 0.0);
    }

    #[test]
    fn refining_the_truncation_barely_moves_the_cdf(k in 0.0..30.0f64, lambda in 0.1..10.0f64, x in 0.01..50.0f64) {
        let p = params(k, lambda);
        let s = SeriesControl::default();
        let base = rician_cdf(x, p, s).unwrap();
        let fine = rician_cdf(x, p, SeriesControl::new(2 * s.max_terms(), s.rel_tol()).unwrap()).unwrap();
        prop_assert!((base - fine).abs() <= 10.0 * s.rel_tol() * fine.max(1e-300) + 1e-300);
    }
}

#[test]
fn cdf_limits() {
    let p = params(3.0, 2.0);
    let s = SeriesControl::default();
    assert_eq!(rician_cdf(0.0, p, s).unwrap(), 0.0);
    assert!(rician_cdf(500.0, p, s).unwrap() > 1.0 - 10.0 * s.rel_tol());
}
