/// `x·log x` with the convention `0·log 0 = 0` (natural log).
///
/// Non-positive arguments return 0; callers only pass non-negative values.
#[inline]
pub fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// `x·log y`, returning 0 whenever `x = 0` so that a vanishing coefficient
/// suppresses `log 0` before it can turn into NaN.
#[inline]
pub fn xlogy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// `log x` for positive `x`, and 0 otherwise. Used where the logarithm is
/// always multiplied by a factor that vanishes together with `x`.
#[inline]
pub fn log_or_zero(x: f64) -> f64 {
    if x > 0.0 {
        x.ln()
    } else {
        0.0
    }
}

/// Compensated (Kahan–Babuška) summation.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_log_zero_is_zero() {
        assert_eq!(xlogx(0.0), 0.0);
        assert_eq!(xlogy(0.0, 0.0), 0.0);
        assert_eq!(log_or_zero(0.0), 0.0);
    }

    #[test]
    fn xlogx_matches_definition() {
        assert!((xlogx(2.0) - 2.0 * 2f64.ln()).abs() < 1e-15);
        assert!((xlogy(3.0, 0.5) - 3.0 * 0.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn kahan_recovers_cancelled_terms() {
        let s = kahan_sum([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(s, 2.0);
    }
}
