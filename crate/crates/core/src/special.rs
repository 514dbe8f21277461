//! Scalar special functions used by the fading statistics and the series
//! evaluators. Everything here works on integer orders only, which is all the
//! Rician power law needs.

use std::f64::consts::PI;
use std::sync::OnceLock;

const FACTORIAL_TABLE_LEN: usize = 171;

fn ln_factorial_table() -> &'static [f64; FACTORIAL_TABLE_LEN] {
    static TABLE: OnceLock<[f64; FACTORIAL_TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0.0; FACTORIAL_TABLE_LEN];
        let mut fact = 1.0f64;
        for (n, slot) in table.iter_mut().enumerate().skip(1) {
            fact *= n as f64;
            *slot = fact.ln();
        }
        table
    })
}

/// `ln(n!)`, exact to rounding for `n <= 170`, Stirling series beyond.
pub fn ln_factorial(n: usize) -> f64 {
    if n < FACTORIAL_TABLE_LEN {
        return ln_factorial_table()[n];
    }
    let x = (n + 1) as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    (x - 0.5) * x.ln() - x
        + 0.5 * (2.0 * PI).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// `exponent * ln(base)` with the convention `0^0 = 1`, so a zero base with a
/// zero exponent contributes nothing and with a positive exponent gives `-inf`.
pub fn ln_pow(base: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        0.0
    } else {
        exponent * base.ln()
    }
}

/// Poisson probability mass `e^{-mean} mean^k / k!`.
pub fn poisson_pmf(mean: f64, k: usize) -> f64 {
    if mean == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (k as f64 * mean.ln() - mean - ln_factorial(k)).exp()
}

/// Exponentially scaled modified Bessel function `e^{-z} I0(z)` for `z >= 0`.
pub fn bessel_i0_scaled(z: f64) -> f64 {
    debug_assert!(z >= 0.0);
    if z <= 30.0 {
        // power series sum_k (z/2)^{2k} / (k!)^2
        let q = 0.25 * z * z;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        while term > 1e-17 * sum {
            term *= q / (k * k);
            sum += term;
            k += 1.0;
        }
        sum * (-z).exp()
    } else {
        // large-argument expansion; terms shrink until k ~ 2z, far beyond what
        // is needed at z > 30
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            let next = term * (2.0f64 * k - 1.0).powi(2) / (8.0 * k * z);
            if next < 1e-17 * sum || next > term {
                break;
            }
            sum += next;
            term = next;
            k += 1.0;
        }
        sum / (2.0 * PI * z).sqrt()
    }
}

/// Regularized incomplete gamma functions `(P(n, y), Q(n, y))` for an integer
/// shape `n >= 1`.
///
/// Below `y = n + 1` the lower function is summed from its power series and the
/// upper one taken as the complement; above it the upper function is the finite
/// Poisson sum, accumulated downward from its largest term. Either way the
/// smaller of the two never comes from a cancellation.
pub fn regularized_gamma_int(n: usize, y: f64) -> (f64, f64) {
    debug_assert!(n >= 1);
    if y <= 0.0 {
        return (0.0, 1.0);
    }
    let shape = n as f64;
    if y < shape + 1.0 {
        let lead = (shape * y.ln() - y - ln_factorial(n)).exp();
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        while term > 1e-17 * sum {
            term *= y / (shape + k);
            sum += term;
            k += 1.0;
        }
        let lower = (lead * sum).min(1.0);
        (lower, 1.0 - lower)
    } else {
        // Q(n, y) = sum_{j<n} e^{-y} y^j / j!, largest at j = n - 1 since y > n
        let top = n - 1;
        let mut term = (top as f64 * y.ln() - y - ln_factorial(top)).exp();
        let mut sum = term;
        for j in (1..=top).rev() {
            term *= j as f64 / y;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        let upper = sum.min(1.0);
        (1.0 - upper, upper)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_factorial_matches_direct_products() {
        assert_eq!(ln_factorial(0), 0.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-15);
        // continuity across the table/Stirling boundary
        let direct: f64 = (1..=200).map(|k| (k as f64).ln()).sum();
        assert!((ln_factorial(200) - direct).abs() / direct < 1e-14);
        let direct: f64 = (1..=171).map(|k| (k as f64).ln()).sum();
        assert!((ln_factorial(171) - direct).abs() / direct < 1e-14);
    }

    #[test]
    fn bessel_reference_values() {
        // I0(1) = 1.2660658777520082, I0(10) = 2815.716628466254
        assert!((bessel_i0_scaled(0.0) - 1.0).abs() < 1e-16);
        assert!((bessel_i0_scaled(1.0) * 1f64.exp() - 1.266_065_877_752_008_2).abs() < 1e-14);
        let i10 = bessel_i0_scaled(10.0) * 10f64.exp();
        assert!((i10 - 2_815.716_628_466_254).abs() / i10 < 1e-13);
    }

    #[test]
    fn bessel_branches_agree_at_switch() {
        let below = bessel_i0_scaled(30.0);
        let above = bessel_i0_scaled(30.0 + 1e-12);
        assert!((below - above).abs() / below < 1e-12);
    }

    #[test]
    fn incomplete_gamma_shape_one_is_exponential() {
        for &y in &[0.1, 0.5, 1.0, 2.5, 10.0, 50.0] {
            let (p, q) = regularized_gamma_int(1, y);
            assert!((q - (-y).exp()).abs() < 1e-15 * (1.0 + (-y).exp()));
            assert!((p + q - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn incomplete_gamma_matches_poisson_sum() {
        // Q(n, y) = sum_{j<n} pmf(y, j)
        for n in 1..30 {
            for &y in &[0.3, 4.0, 12.0, 29.0, 40.0] {
                let direct: f64 = (0..n).map(|j| poisson_pmf(y, j)).sum();
                let (_, q) = regularized_gamma_int(n, y);
                assert!((q - direct).abs() < 1e-13, "n={n} y={y}: {q} vs {direct}");
            }
        }
    }

    #[test]
    fn poisson_pmf_zero_mean() {
        assert_eq!(poisson_pmf(0.0, 0), 1.0);
        assert_eq!(poisson_pmf(0.0, 3), 0.0);
    }
}
