//! Dormand-Prince 5(4) for scalar equations, forward or backward in time.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// Fifth-order weights minus embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct Dopri5Options {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on `|h|`.
    pub max_step: f64,
}

/// Integrates `y' = f(t, y)` from `(t_start, y0)` to `t_end`; returns `y(t_end)`.
pub fn dopri5<F>(f: F, t_start: f64, y0: f64, t_end: f64, opts: Dopri5Options) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    let span = t_end - t_start;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let max_step = opts.max_step.min(span.abs());
    let mut t = t_start;
    let mut y = y0;
    let mut h = (0.01 * span.abs()).min(max_step);
    let mut k1 = f(t, y);
    loop {
        let remaining = (t_end - t) * dir;
        if remaining <= 0.0 {
            break;
        }
        if h >= remaining {
            h = remaining;
        }
        if h <= 1e-14 * (1.0 + t.abs()) && h < remaining {
            return Err(Error::StepUnderflow { t, h });
        }
        let hs = h * dir;
        let k2 = f(t + C2 * hs, y + hs * A21 * k1);
        let k3 = f(t + C3 * hs, y + hs * (A31 * k1 + A32 * k2));
        let k4 = f(t + C4 * hs, y + hs * (A41 * k1 + A42 * k2 + A43 * k3));
        let k5 = f(t + C5 * hs, y + hs * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
        let k6 = f(t + hs, y + hs * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
        let y_new = y + hs * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        let k7 = f(t + hs, y_new);
        let err = hs * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        let scale = opts.atol + opts.rtol * y.abs().max(y_new.abs());
        let ratio = (err / scale).abs();
        if !ratio.is_finite() || !y_new.is_finite() {
            h *= 0.25;
            if h <= 1e-14 * (1.0 + t.abs()) {
                return Err(Error::StepUnderflow { t, h });
            }
            continue;
        }
        if ratio <= 1.0 {
            t = if (t_end - (t + hs)) * dir <= 0.0 { t_end } else { t + hs };
            y = y_new;
            k1 = k7;
        }
        let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
        h = (h * factor).min(max_step);
        if ratio > 1.0 && h <= 1e-14 * (1.0 + t.abs()) {
            return Err(Error::StepUnderflow { t, h });
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(max_step: f64) -> Dopri5Options {
        Dopri5Options { rtol: 1e-11, atol: 1e-14, max_step }
    }

    #[test]
    fn exponential_growth_forward_and_backward() {
        let y = dopri5(|_, y| y, 0.0, 1.0, 2.0, opts(0.04)).unwrap();
        assert!((y - 2f64.exp()).abs() / 2f64.exp() < 1e-10);
        let y = dopri5(|_, y| y, 2.0, 2f64.exp(), 0.0, opts(0.04)).unwrap();
        assert!((y - 1.0).abs() < 1e-10);
    }

    #[test]
    fn time_dependent_rhs() {
        // y' = cos t, y(0) = 0 -> sin t
        let y = dopri5(|t, _| t.cos(), 0.0, 0.0, -3.0, opts(0.06)).unwrap();
        assert!((y - (-3f64).sin()).abs() < 1e-10);
    }

    #[test]
    fn zero_span_returns_initial_value() {
        assert_eq!(dopri5(|_, y| y, 1.0, 3.5, 1.0, opts(0.1)).unwrap(), 3.5);
    }

    #[test]
    fn blow_up_reports_underflow() {
        // y' = y^2 from y(0) = 1 blows up at t = 1.
        let err = dopri5(|_, y| y * y, 0.0, 1.0, 2.0, opts(0.04)).unwrap_err();
        assert!(matches!(err, Error::StepUnderflow { .. }));
    }
}
