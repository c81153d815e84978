//! Bracketing and Brent's method for scalar roots.
//!
//! Every scalar problem in this crate is posed in the offset `x = lambda - 1`
//! for a function that is positive as `x -> 0+` and eventually negative, so
//! the bracket search is specialized to that shape.

use crate::error::{Error, Result};

/// Largest offset `x = lambda - 1` the bracket search will try.
pub const MAX_OFFSET: f64 = 1e9;

const START_OFFSET: f64 = 1e-3;
const MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

/// Finds `[lo, hi]` with `f(lo) > 0 >= f(hi)`, for `f` continuous on
/// `[0, MAX_OFFSET]` with `f(0) = f0 > 0`.
///
/// Starting from `x = 1e-3` the upper end doubles until `f` turns
/// non-positive; if it already is, the lower end is halved instead so the
/// bracket spans at most a factor of two.
pub fn bracket_sign_change(f: impl Fn(f64) -> f64, f0: f64) -> Result<Bracket> {
    if !(f0 > 0.0) {
        return Err(Error::NumericFailure(format!(
            "f(0) = {f0} is not positive"
        )));
    }
    let mut x = START_OFFSET;
    let mut fx = f(x);
    if fx > 0.0 {
        loop {
            let next = 2.0 * x;
            if next > MAX_OFFSET {
                return Err(Error::NumericFailure(format!(
                    "no sign change below lambda - 1 = {MAX_OFFSET:e}"
                )));
            }
            let f_next = f(next);
            if !f_next.is_finite() {
                return Err(Error::NumericFailure(format!("f({next}) = {f_next}")));
            }
            if f_next <= 0.0 {
                return Ok(Bracket {
                    lo: x,
                    hi: next,
                    f_lo: fx,
                    f_hi: f_next,
                });
            }
            x = next;
            fx = f_next;
        }
    }
    if !fx.is_finite() {
        return Err(Error::NumericFailure(format!("f({x}) = {fx}")));
    }
    loop {
        let prev = 0.5 * x;
        if prev == 0.0 {
            return Ok(Bracket {
                lo: 0.0,
                hi: x,
                f_lo: f0,
                f_hi: fx,
            });
        }
        let f_prev = f(prev);
        if f_prev > 0.0 {
            return Ok(Bracket {
                lo: prev,
                hi: x,
                f_lo: f_prev,
                f_hi: fx,
            });
        }
        x = prev;
        fx = f_prev;
    }
}

/// Brent's method on a sign-changing bracket. Stops when the bracket is
/// narrower than `rtol * |x| + 4 eps |x|`, or on an exact zero.
pub fn brent(f: impl Fn(f64) -> f64, bracket: Bracket, rtol: f64) -> Result<f64> {
    let Bracket {
        lo: mut a,
        hi: mut b,
        f_lo: mut fa,
        f_hi: mut fb,
    } = bracket;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NumericFailure(format!(
            "bracket [{a}, {b}] has no sign change ({fa}, {fb})"
        )));
    }
    let mut c = b;
    let mut fc = fb;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * rtol * b.abs() + f64::MIN_POSITIVE;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, or secant when a == c
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::NumericFailure(format!("f({b}) = {fb}")));
        }
    }
    Err(Error::NumericFailure(format!(
        "Brent iteration did not converge near {b}"
    )))
}

/// Offset `x > 0` at which a function positive near zero changes sign.
pub fn positive_root(f: impl Fn(f64) -> f64, f0: f64, rtol: f64) -> Result<f64> {
    let bracket = bracket_sign_change(&f, f0)?;
    brent(&f, bracket, rtol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_roots_across_scales() {
        for &root in &[1e-14, 1e-9, 1e-3, 0.7, 3.0, 1e4, 5e8] {
            let f = |x: f64| root - x;
            let x = positive_root(f, root, 1e-14).unwrap();
            assert!((x - root).abs() <= 1e-13 * root, "{root} -> {x}");
        }
    }

    #[test]
    fn nonlinear_root() {
        let f = |x: f64| 2.0 - (1.0 + x).powi(3);
        let x = positive_root(f, 1.0, 1e-15).unwrap();
        assert!((x - (2f64.cbrt() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn reports_missing_sign_change() {
        assert!(positive_root(|_| 1.0, 1.0, 1e-12).is_err());
        assert!(positive_root(|x| -x, 0.0, 1e-12).is_err());
    }

    #[test]
    fn bracket_is_tight() {
        let b = bracket_sign_change(|x| 1e-7 - x, 1e-7).unwrap();
        assert!(b.lo < 1e-7 && b.hi >= 1e-7 && b.hi <= 2.0 * b.lo);
    }
}
