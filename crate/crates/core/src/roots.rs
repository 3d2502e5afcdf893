//! Derivative-free root finding: geometric bracketing then bisection.
//!
//! Bisection runs until the bracket cannot be split in floating point, so the
//! root is located to the last ulp even where the function is very flat.

use crate::error::{Error, Result};

/// Residual a located root must meet.
pub const ROOT_TOLERANCE: f64 = 1e-10;

/// Search direction from the starting point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Up,
    Down,
}

/// Geometric bracketing parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracketing {
    pub factor: f64,
    pub max_steps: usize,
    /// First trial point when stepping up from zero.
    pub first_step: f64,
    /// Whether zero is inside the domain (tried last when stepping down).
    pub zero_allowed: bool,
}

impl Default for Bracketing {
    fn default() -> Self {
        Bracketing {
            factor: 1.5,
            max_steps: 80,
            first_step: 0.1,
            zero_allowed: false,
        }
    }
}

/// A sign change of `f` between `lo` and `hi` (`lo < hi`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

/// Steps away from `start` by the configured factor until `f` changes sign.
///
/// `f(start)` must be non-zero. Errors from `f` are passed through so callers
/// can stop the search at the edge of the admissible domain.
pub fn bracket_geometric<F>(mut f: F, start: f64, side: Side, cfg: &Bracketing) -> Result<Bracket>
where
    F: FnMut(f64) -> Result<f64>,
{
    let f0 = f(start)?;
    if f0 == 0.0 {
        return Ok(Bracket { lo: start, hi: start, f_lo: 0.0, f_hi: 0.0 });
    }
    let (mut prev, mut f_prev) = (start, f0);
    for step in 0..=cfg.max_steps {
        let x = match side {
            Side::Up if prev == 0.0 => cfg.first_step,
            Side::Up => prev * cfg.factor,
            Side::Down if step == cfg.max_steps => {
                if !cfg.zero_allowed {
                    break;
                }
                0.0
            }
            Side::Down => prev / cfg.factor,
        };
        if !x.is_finite() {
            break;
        }
        let fx = f(x)?;
        if fx == 0.0 || fx.signum() != f0.signum() {
            return Ok(match side {
                Side::Up => Bracket { lo: prev, hi: x, f_lo: f_prev, f_hi: fx },
                Side::Down => Bracket { lo: x, hi: prev, f_lo: fx, f_hi: f_prev },
            });
        }
        prev = x;
        f_prev = fx;
    }
    Err(Error::Range {
        from: start,
        reason: "no sign change within the search range",
    })
}

/// Bisects a bracket down to adjacent floating-point numbers and returns the
/// endpoint with the smaller residual, which must be below
/// [`ROOT_TOLERANCE`].
pub fn bisect<F>(mut f: F, bracket: Bracket) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let Bracket { mut lo, mut hi, mut f_lo, mut f_hi } = bracket;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    debug_assert!(f_lo.signum() != f_hi.signum());
    loop {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    let (x, r) = if f_lo.abs() <= f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    if r.abs() < ROOT_TOLERANCE {
        Ok(x)
    } else {
        Err(Error::RootResidual { at: x, residual: r })
    }
}
