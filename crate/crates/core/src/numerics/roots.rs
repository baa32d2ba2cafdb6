use crate::{Error, Result};

/// Default bisection tolerance in the pitch parameter.
pub const DEFAULT_BISECTION_TOL: f64 = 1e-4;

/// Root of `g` on `[lo, hi]` by bisection, to within `tol`.
pub fn find_sign_change<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) || !(hi > lo) {
        return Err(Error::InvalidInput(format!("need lo < hi and tol > 0 (lo = {lo}, hi = {hi}, tol = {tol})")));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut ga, gb) = (g(a), g(b));
    if ga == 0.0 {
        return Ok(a);
    }
    if gb == 0.0 {
        return Ok(b);
    }
    if ga.signum() == gb.signum() || ga.is_nan() || gb.is_nan() {
        return Err(Error::NoSignChange {
            lo,
            hi,
            g_lo: ga,
            g_hi: gb,
        });
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            return Ok(m);
        }
        if gm.signum() == ga.signum() {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}
