//! Bracketed scalar root finding: bisection safeguarding secant steps.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum RootError {
    #[error("no sign change on [{lo}, {hi}] (f = {f_lo:e}, {f_hi:e})")]
    NoBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("function returned NaN at x = {x}")]
    NotANumber { x: f64 },

    #[error("no convergence after {iterations} iterations (last x = {last_x}, residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        last_x: f64,
        residual: f64,
    },
}

impl RootError {
    /// Residual at the last iterate, where one exists.
    pub fn residual(&self) -> f64 {
        match *self {
            RootError::NoBracket { f_lo, f_hi, .. } => f_lo.abs().min(f_hi.abs()),
            RootError::NotANumber { .. } => f64::NAN,
            RootError::NoConvergence { residual, .. } => residual,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    /// `|f(x)|` at the returned point.
    pub residual: f64,
    pub iterations: usize,
}

const MAX_ITER: usize = 200;

/// Finds a root of `f` in `[lo, hi]`, which must bracket a sign change.
///
/// Each step tries a secant (false-position) point; when that fails to halve
/// the bracket the next step bisects instead. Stops when the bracket width
/// falls below `xtol` (absolute, plus a few ulps of the endpoints) or `f`
/// vanishes exactly.
pub fn find_root(f: impl Fn(f64) -> f64, lo: f64, hi: f64, xtol: f64) -> Result<Root, RootError> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if fa.is_nan() {
        return Err(RootError::NotANumber { x: a });
    }
    if fb.is_nan() {
        return Err(RootError::NotANumber { x: b });
    }
    if fa == 0.0 {
        return Ok(Root { x: a, residual: 0.0, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, residual: 0.0, iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NoBracket { lo: a, hi: b, f_lo: fa, f_hi: fb });
    }

    let mut bisect_next = false;
    for iter in 1..=MAX_ITER {
        let width = b - a;
        let tol = xtol + 4.0 * f64::EPSILON * a.abs().max(b.abs());
        if width <= tol {
            return Ok(best_of(a, fa, b, fb, iter));
        }
        let mut x = 0.5 * (a + b);
        if !bisect_next {
            let s = b - fb * (b - a) / (fb - fa);
            if s.is_finite() && s > a && s < b {
                x = s;
            }
        }
        let fx = f(x);
        if fx.is_nan() {
            return Err(RootError::NotANumber { x });
        }
        if fx == 0.0 {
            return Ok(Root { x, residual: 0.0, iterations: iter });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        bisect_next = !bisect_next && (b - a) > 0.5 * width;
    }
    let best = best_of(a, fa, b, fb, MAX_ITER);
    Err(RootError::NoConvergence {
        iterations: MAX_ITER,
        last_x: best.x,
        residual: best.residual,
    })
}

fn best_of(a: f64, fa: f64, b: f64, fb: f64, iterations: usize) -> Root {
    if fa.abs() <= fb.abs() {
        Root { x: a, residual: fa.abs(), iterations }
    } else {
        Root { x: b, residual: fb.abs(), iterations }
    }
}

/// Samples `f` on `n` equal subintervals of `[lo, hi]` and returns every
/// subinterval whose endpoints differ in sign.
pub fn scan_brackets(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let n = n.max(1);
    let step = (hi - lo) / n as f64;
    let mut out = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(x0);
    for i in 1..=n {
        let x1 = if i == n { hi } else { lo + step * i as f64 };
        let f1 = f(x1);
        if f0.is_finite() && f1.is_finite() && (f0 == 0.0 || f0.signum() != f1.signum()) {
            out.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    out
}
