//! Bracketed scalar root finding.
//!
//! Brent's method (bisection / secant / inverse quadratic interpolation),
//! following the classic Numerical Recipes formulation. The solver functions
//! are smooth between known singularities, so a bracketed hybrid is both
//! robust and fast.

use crate::error::{Error, Result};

/// Relative error budget on the root abscissa. The iteration actually runs
/// to machine precision, well inside this bound; stopping exactly at 1e-12
/// would leave residuals above [`FTOL`] at poorly conditioned zeros.
pub const XTOL_REL: f64 = 1e-12;
/// Residual bound the isolated roots are expected to satisfy (up to the
/// conditioning floor `|f'| * ulp(root)`); checked by callers, not used as
/// a stop criterion.
pub const FTOL: f64 = 1e-10;

const MAX_ITER: usize = 200;

/// Find the root of `f` inside `[lo, hi]`, where `f(lo)` and `f(hi)` have
/// opposite signs. Converges to machine precision on the abscissa.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64) -> Result<f64> {
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::BracketFailure { lo, hi });
    }

    let mut c = a;
    let mut fc = fa;
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
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 1e-300;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Secant or inverse quadratic interpolation.
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::BracketFailure { lo, hi });
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_simple_roots() {
        let r = brent(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);

        let r = brent(|x| x.sin() - 0.5 * x, 1.0, 3.0).unwrap();
        assert!((r - 1.895_494_267_033_981).abs() < 1e-10);
    }

    #[test]
    fn handles_endpoint_roots() {
        assert_eq!(brent(|x| x, 0.0, 1.0).unwrap(), 0.0);
        assert_eq!(brent(|x| x - 1.0, 0.0, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn rejects_unbracketed_input() {
        let err = brent(|x| x * x + 1.0, -1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::BracketFailure { .. }));
    }

    #[test]
    fn steep_rational_root() {
        // Pole-adjacent shape like the solver's slope function.
        let f = |x: f64| 1.0 / (x - 1.0) + 5.0;
        let r = brent(f, 0.0, 0.99).unwrap();
        assert!((r - 0.8).abs() < 1e-12);
        assert!(f(r).abs() < 1e-8);
    }
}
