//! Binomial rate estimates with exact two-sided confidence intervals.

use statrs::function::beta::inv_beta_reg;

/// Significance level of every reported interval (two-sided 95%).
pub const ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub count: u64,
    pub total: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl RateEstimate {
    pub fn new(count: u64, total: u64) -> Self {
        assert!(count <= total, "count {count} exceeds total {total}");
        let (ci_low, ci_high) = clopper_pearson(count, total, ALPHA);
        let rate = if total == 0 {
            0.0
        } else {
            count as f64 / total as f64
        };
        Self {
            count,
            total,
            rate,
            ci_low,
            ci_high,
        }
    }
}

/// Clopper–Pearson interval for `x` successes in `n` trials at level
/// `1 - alpha`. With no trials the interval is `[0, 1]`.
pub fn clopper_pearson(x: u64, n: u64, alpha: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (xf, nf) = (x as f64, n as f64);
    let low = if x == 0 {
        0.0
    } else {
        inv_beta_reg(xf, nf - xf + 1.0, alpha / 2.0)
    };
    let high = if x == n {
        1.0
    } else {
        inv_beta_reg(xf + 1.0, nf - xf, 1.0 - alpha / 2.0)
    };
    (low, high)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::beta::beta_reg;

    // Independent oracle: bisect the binomial tails directly.
    fn bisect(mut f: impl FnMut(f64) -> bool) -> f64 {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn oracle(x: u64, n: u64) -> (f64, f64) {
        let (xf, nf) = (x as f64, n as f64);
        // P(X >= x | p) = I_p(x, n - x + 1), increasing in p
        let low = if x == 0 {
            0.0
        } else {
            bisect(|p| beta_reg(xf, nf - xf + 1.0, p) >= ALPHA / 2.0)
        };
        // P(X <= x | p) = I_{1-p}(n - x, x + 1), decreasing in p
        let high = if x == n {
            1.0
        } else {
            bisect(|p| beta_reg(nf - xf, xf + 1.0, 1.0 - p) <= ALPHA / 2.0)
        };
        (low, high)
    }

    #[test]
    fn zero_successes_has_closed_form_upper() {
        for n in [1u64, 10, 1000, 100_000] {
            let (lo, hi) = clopper_pearson(0, n, ALPHA);
            assert_eq!(lo, 0.0);
            let want = 1.0 - (ALPHA / 2.0).powf(1.0 / n as f64);
            assert!(
                (hi - want).abs() < 1e-9 * want.max(1e-12),
                "n={n}: {hi} vs {want}"
            );
        }
        assert_eq!(clopper_pearson(7, 7, ALPHA).1, 1.0);
    }

    #[test]
    fn tabulated_interval() {
        let (lo, hi) = clopper_pearson(3, 10, ALPHA);
        assert!((lo - 0.0667).abs() < 1e-4, "{lo}");
        assert!((hi - 0.6525).abs() < 1e-4, "{hi}");
    }

    #[test]
    fn matches_bisection_oracle() {
        for &(x, n) in &[
            (1u64, 2u64),
            (3, 10),
            (50, 100),
            (98, 100_000),
            (3900, 1_000_000),
            (999, 1000),
        ] {
            let (lo, hi) = clopper_pearson(x, n, ALPHA);
            let (olo, ohi) = oracle(x, n);
            // both sides approximate the incomplete beta function; deep in
            // the tails they agree to about eight digits
            assert!(
                (lo - olo).abs() <= 1e-7 * olo.max(1e-6),
                "({x},{n}) low {lo} vs {olo}"
            );
            assert!(
                (hi - ohi).abs() <= 1e-7 * ohi.max(1e-6),
                "({x},{n}) high {hi} vs {ohi}"
            );
        }
    }

    #[test]
    fn interval_brackets_estimate() {
        for n in [1u64, 5, 37] {
            for x in 0..=n {
                let r = RateEstimate::new(x, n);
                assert!(r.ci_low <= r.rate && r.rate <= r.ci_high);
                assert!((0.0..=1.0).contains(&r.ci_low) && (0.0..=1.0).contains(&r.ci_high));
            }
        }
        let empty = RateEstimate::new(0, 0);
        assert_eq!((empty.ci_low, empty.ci_high), (0.0, 1.0));
    }
}
