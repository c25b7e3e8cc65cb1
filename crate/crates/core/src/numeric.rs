//! Small numerical helpers shared across modules.

/// Pairwise (cascade) summation. The reduction tree depends only on the
/// length of the input, so results are reproducible run to run.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        let mut s = 0.0;
        for v in values {
            s += v;
        }
        return s;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Finds a root of `f` in `[lo, hi]` given a sign change, by bisection
/// accelerated with secant steps. Returns `None` when the bracket is invalid.
pub fn bracketed_root<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return None;
    }
    let mut fhi = fhi;
    for it in 0..200 {
        let width = hi - lo;
        if width.abs() <= tol {
            break;
        }
        let secant = lo - flo * width / (fhi - flo);
        let mid = 0.5 * (lo + hi);
        let x = if it % 3 != 2 && secant > lo && secant < hi {
            secant
        } else {
            mid
        };
        let fx = f(x);
        if fx == 0.0 {
            return Some(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    Some(if flo.abs() < fhi.abs() { lo } else { hi })
}
