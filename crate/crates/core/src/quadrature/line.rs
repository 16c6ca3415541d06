//! One-dimensional integrals for the closed-form right-hand sides.

use quadrature::double_exponential;

use crate::error::{Error, Result};

/// Tanh-sinh integral of `f` over `[a, b]`, split at every break point that
/// falls strictly inside the interval. Endpoint singularities are fine as long
/// as they are integrable.
pub fn integrate_interval<F>(f: F, a: f64, b: f64, breaks: &[f64], abs_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::Domain(format!("bad interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut cuts = vec![a];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|x| *x > a && *x < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    cuts.extend(inner);
    cuts.push(b);

    let pieces = cuts.len() - 1;
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let out = double_exponential::integrate(&f, w[0], w[1], abs_tol / pieces as f64);
        if !out.integral.is_finite() || out.error_estimate > 1e3 * abs_tol.max(1e-300) {
            return Err(Error::NoConvergence(format!(
                "on [{}, {}]: estimate {} with error {:e}",
                w[0], w[1], out.integral, out.error_estimate
            )));
        }
        total += out.integral;
    }
    Ok(total)
}

/// Integral over `[a, inf)` through `s = a + y / (1 - y)`.
pub fn integrate_half_line<F>(f: F, a: f64, breaks: &[f64], abs_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let to_y = |s: f64| (s - a) / (1.0 + s - a);
    let ybreaks: Vec<f64> = breaks.iter().filter(|s| **s > a && s.is_finite()).map(|s| to_y(*s)).collect();
    integrate_interval(
        |y| {
            if y >= 1.0 {
                return 0.0;
            }
            let one_minus = 1.0 - y;
            f(a + y / one_minus) / (one_minus * one_minus)
        },
        0.0,
        1.0,
        &ybreaks,
        abs_tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_endpoint_singularity() {
        let v = integrate_interval(|x| x * x, 0.0, 3.0, &[], 1e-13).unwrap();
        assert!((v - 9.0).abs() < 1e-12);
        // int_0^1 x ln x dx = -1/4
        let v = integrate_interval(|x| if x > 0.0 { x * x.ln() } else { 0.0 }, 0.0, 1.0, &[], 1e-13)
            .unwrap();
        assert!((v + 0.25).abs() < 1e-12);
    }

    #[test]
    fn kink_is_split() {
        let v = integrate_interval(|x| (x - 0.3f64).max(0.0), 0.0, 1.0, &[0.3], 1e-13).unwrap();
        assert!((v - 0.245).abs() < 1e-13);
    }

    #[test]
    fn half_line_exponential() {
        let v = integrate_half_line(|s| (-2.0 * s).exp(), 0.0, &[], 1e-13).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        let v = integrate_half_line(|s| (1.0 + s).powf(-3.0), 1.0, &[], 1e-13).unwrap();
        assert!((v - 0.125).abs() < 1e-12);
    }

    #[test]
    fn empty_and_reversed_intervals() {
        assert_eq!(integrate_interval(|_| 1.0, 2.0, 2.0, &[], 1e-12).unwrap(), 0.0);
        assert!(integrate_interval(|_| 1.0, 2.0, 1.0, &[], 1e-12).is_err());
    }
}
