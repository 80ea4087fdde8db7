//! The entropy function, the phase-transition exponent, and the strong and
//! weak neighborliness thresholds.
//!
//! Natural logarithms throughout; only zero crossings of the exponent
//! matter and those are base-invariant. `0 * ln 0` is evaluated as 0, the
//! convention forced by continuity and by `H(0) = H(1) = 0`.

use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Which threshold curve a query refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdKind {
    /// Unique zero of the exponent; defined for `delta` in `(1/2, 1)`.
    Strong,
    /// Closed form `max(0, 2 - 1/delta)`; defined for `delta` in `(0, 1)`.
    Weak,
}

/// A `(delta, rho)` pair: limits of `d/N` and `k/d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticParams {
    delta: f64,
    rho: f64,
}

impl AsymptoticParams {
    pub fn new(delta: f64, rho: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Domain(format!("delta {delta} outside (0, 1)")));
        }
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::Domain(format!("rho {rho} outside [0, 1]")));
        }
        Ok(AsymptoticParams { delta, rho })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

/// Shannon entropy in nats: `H(x) = -x ln x - (1-x) ln(1-x)` on `[0, 1]`.
pub fn entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("entropy argument {x} outside [0, 1]")));
    }
    Ok(xlnx(x) + xlnx(1.0 - x))
}

fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// The exponent `G(delta, rho) = H(delta) + delta H(rho) - (1 - delta rho) ln 2`.
/// Its sign decides the strong phase transition.
pub fn g_exponent(p: &AsymptoticParams) -> f64 {
    let h_delta = entropy(p.delta).expect("delta validated on construction");
    let h_rho = entropy(p.rho).expect("rho validated on construction");
    h_delta + p.delta * h_rho - (1.0 - p.delta * p.rho) * std::f64::consts::LN_2
}

/// Strong threshold: the unique root of `G(delta, .)` in `(0, 1)`, found by
/// bracketed bisection. For `delta > 1/2` the bracket is guaranteed by
/// `G(delta, 0) = H(delta) - ln 2 < 0 < G(delta, 1)`.
pub fn rho_strong(delta: f64, tol: f64) -> Result<f64> {
    if !(delta > 0.5 && delta < 1.0) {
        return Err(Error::Domain(format!(
            "strong threshold needs delta in (1/2, 1), got {delta}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let g = |rho: f64| g_exponent(&AsymptoticParams { delta, rho });
    const EPS: f64 = 1e-15;
    let (mut lo, mut hi) = (EPS, 1.0 - EPS);
    let (glo, ghi) = (g(lo), g(hi));
    if !(glo < 0.0 && ghi > 0.0) {
        return Err(Error::Convergence(format!(
            "no sign change on bracket for delta={delta} (G({lo:e})={glo:e}, G({hi})={ghi:e})"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm.abs() < tol {
            return Ok(mid);
        }
        if gm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * mid {
            if gm.abs() < tol {
                return Ok(mid);
            }
            break;
        }
    }
    let mid = 0.5 * (lo + hi);
    if g(mid).abs() < tol {
        Ok(mid)
    } else {
        Err(Error::Convergence(format!(
            "bisection stalled at rho={mid} with residual {:e} (tol {tol:e})",
            g(mid)
        )))
    }
}

/// Weak threshold `max(0, 2 - 1/delta)` for `delta` in `(0, 1)`.
pub fn rho_weak(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!(
            "weak threshold needs delta in (0, 1), got {delta}"
        )));
    }
    Ok((2.0 - 1.0 / delta).max(0.0))
}

/// Exact-rational weak threshold, so that e.g. `delta = 3/4` yields
/// exactly `2/3` rather than a float approximation.
pub fn rho_weak_exact(delta: &BigRational) -> Result<BigRational> {
    if !(delta > &BigRational::zero() && delta < &BigRational::one()) {
        return Err(Error::Domain(format!(
            "weak threshold needs delta in (0, 1), got {delta}"
        )));
    }
    let v = BigRational::from_integer(2.into()) - delta.recip();
    Ok(if v.is_negative() { BigRational::zero() } else { v })
}

/// Tabulate a threshold curve over a grid of `delta` values, in grid order.
/// A point outside the curve's domain fails the whole call, naming the
/// offending `delta`.
pub fn threshold_curve(
    kind: ThresholdKind,
    grid: &[f64],
    tol: f64,
) -> Result<Vec<(f64, f64)>> {
    grid.iter()
        .map(|&delta| {
            let rho = match kind {
                ThresholdKind::Strong => rho_strong(delta, tol)
                    .map_err(|e| Error::Domain(format!("at delta={delta}: {e}")))?,
                ThresholdKind::Weak => rho_weak(delta)
                    .map_err(|e| Error::Domain(format!("at delta={delta}: {e}")))?,
            };
            Ok((delta, rho))
        })
        .collect()
}
