//! Laguerre polynomials and the exponentially weighted Laguerre function.
//!
//! Every Fock-type Wigner function needs `exp(-x/2) * L_n(x)` with `x = 4|b|^2`.
//! The raw polynomial overflows `f64` long before `n = 250` at the radii the
//! quadrature visits, so the recurrence is run directly on the weighted
//! sequence, whose terms never exceed 1 in magnitude.

use crate::error::{Error, Result};

/// Largest order accepted by the unweighted [`laguerre`].
pub const MAX_UNWEIGHTED_ORDER: usize = 30;

/// `exp(-x/2) * L_n(x)` for `x >= 0`.
///
/// Uses `w_{k+1} = ((2k + 1 - x) w_k - k w_{k-1}) / (k + 1)` seeded with
/// `w_0 = exp(-x/2)` and `w_1 = (1 - x) exp(-x/2)`.
pub fn weighted_laguerre(n: usize, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "weighted Laguerre argument must be finite and >= 0, got {x}"
        )));
    }
    Ok(weighted_laguerre_unchecked(n, x))
}

/// Same as [`weighted_laguerre`] without the domain check. Hot path for grid
/// evaluation, where the argument is a squared modulus.
#[inline]
pub(crate) fn weighted_laguerre_unchecked(n: usize, x: f64) -> f64 {
    let w0 = (-0.5 * x).exp();
    if n == 0 {
        return w0;
    }
    // Past the oscillatory region the weighted function is far below the
    // smallest normal double; e^{-x/2} has already flushed to zero.
    if w0 == 0.0 {
        return 0.0;
    }
    let mut prev = w0;
    let mut cur = (1.0 - x) * w0;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Unweighted `L_n(x)` by the standard three-term recurrence, for `n <= 30`.
pub fn laguerre(n: usize, x: f64) -> Result<f64> {
    if n > MAX_UNWEIGHTED_ORDER {
        return Err(Error::Order {
            n,
            max: MAX_UNWEIGHTED_ORDER,
        });
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}
