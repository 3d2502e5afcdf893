//! Symmetric tridiagonal eigensolver.
//!
//! Eigenvalues come from Sturm-sequence bisection, which returns the k-th
//! smallest eigenvalue to a few ulps without touching the others. Eigenvectors
//! come from inverse iteration with a partially pivoted tridiagonal LU.
//! Both are O(n) per step, which matters because the cycle layer calls them
//! at every root-finder and quadrature node.

use alloc::vec;
use alloc::vec::Vec;

/// Borrowed symmetric tridiagonal matrix: `diag.len() == n`,
/// `off.len() == n - 1` (`off[i]` couples rows `i` and `i + 1`).
#[derive(Debug, Clone, Copy)]
pub struct SymTridiagonal<'a> {
    diag: &'a [f64],
    off: &'a [f64],
}

impl<'a> SymTridiagonal<'a> {
    pub fn new(diag: &'a [f64], off: &'a [f64]) -> Self {
        assert!(!diag.is_empty(), "empty matrix");
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length mismatch");
        SymTridiagonal { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            let r = left + right;
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    /// Number of eigenvalues strictly below `x` (Sturm count of the LDLᵀ
    /// factorization of `T - xI`).
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE * self.norm_bound().max(1.0);
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.dim() {
            let e = self.off[i - 1];
            q = (self.diag[i] - x) - e * e / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based).
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.dim(), "eigenvalue index out of range");
        if self.off.iter().all(|&b| b == 0.0) {
            let mut d = self.diag.to_vec();
            d.sort_by(f64::total_cmp);
            return d[k];
        }
        let (mut lo, mut hi) = self.gershgorin();
        let pad = 2.0 * f64::EPSILON * self.norm_bound() + f64::MIN_POSITIVE;
        lo -= pad;
        hi += pad;
        // Invariant: count_below(lo) <= k < count_below(hi).
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let width_tol = 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + f64::MIN_POSITIVE;
            if hi - lo <= width_tol {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `count` smallest eigenvalues, ascending.
    pub fn lowest(&self, count: usize) -> Vec<f64> {
        (0..count.min(self.dim())).map(|k| self.eigenvalue(k)).collect()
    }

    /// Unit eigenvector for the (accurately computed) eigenvalue `lambda`.
    ///
    /// The sign is fixed so the largest-magnitude component is positive, which
    /// keeps the output deterministic.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.dim();
        if n == 1 {
            return vec![1.0];
        }
        let lu = ShiftedLu::factor(self, lambda);
        // Deterministic start vector with no special structure.
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * libm::sin(1.7 * i as f64 + 0.3))
            .collect();
        normalize(&mut x);
        for _ in 0..4 {
            lu.solve(&mut x);
            normalize(&mut x);
        }
        let (imax, _) = x
            .iter()
            .enumerate()
            .fold((0, 0.0_f64), |acc, (i, v)| if v.abs() > acc.1 { (i, v.abs()) } else { acc });
        if x[imax] < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        x
    }
}

fn normalize(x: &mut [f64]) {
    let scale = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        // Overflowed or collapsed: restart from a canonical vector.
        x.iter_mut().for_each(|v| *v = 1.0);
        return normalize(x);
    }
    x.iter_mut().for_each(|v| *v /= scale);
    let norm = libm::sqrt(x.iter().map(|v| v * v).sum::<f64>());
    x.iter_mut().for_each(|v| *v /= norm);
}

/// LU factorization with partial pivoting of `T - λI`, stored as in LAPACK
/// `dgttrf`: multipliers `dl`, diagonal of U `d`, first and second
/// superdiagonals `du`, `du2`, and row interchanges `swapped`.
struct ShiftedLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &SymTridiagonal<'_>, lambda: f64) -> Self {
        let n = t.dim();
        let mut dl = t.off.to_vec();
        let mut d: Vec<f64> = t.diag.iter().map(|v| v - lambda).collect();
        let mut du = t.off.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        // A (near-)zero pivot is expected: λ is an eigenvalue. Perturb it so
        // the solve amplifies the eigen-direction instead of dividing by zero.
        let tiny = f64::EPSILON * t.norm_bound();
        for v in d.iter_mut() {
            if v.abs() < tiny {
                *v = if *v < 0.0 { -tiny } else { tiny };
            }
        }
        ShiftedLu { dl, d, du, du2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}
