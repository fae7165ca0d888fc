//! One-dimensional search helpers shared by the minimizers.

use crate::num::Real;

/// Golden-section search for a minimum of `f` on `[a, b]`; returns
/// `(x_min, f_min)` once the bracket is narrower than `tol`.
pub(crate) fn golden_section<T: Real>(mut f: impl FnMut(T) -> T, mut a: T, mut b: T, tol: T) -> (T, T) {
    let resp = T::lit(2.0 - 1.618_033_988_749_895);
    let mut x1 = a + resp * (b - a);
    let mut x2 = b - resp * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let floor = T::lit(4.0) * T::epsilon();
    for _ in 0..200 {
        if (b - a).abs() <= tol.max(floor * (a.abs() + b.abs())) {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + resp * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - resp * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Scans `n` equispaced points of `[a, b]`, then refines the best one by
/// golden section within its neighbouring cells.
pub(crate) fn scan_then_golden<T: Real>(f: impl Fn(T) -> T, a: T, b: T, n: usize, tol: T) -> (T, T) {
    let n = n.max(3);
    let step = (b - a) / T::from_usize_lossy(n - 1);
    let at = |j: usize| if j == n - 1 { b } else { a + T::from_usize_lossy(j) * step };
    let (mut best_j, mut best_f) = (0, T::infinity());
    for j in 0..n {
        let v = f(at(j));
        if v < best_f {
            best_f = v;
            best_j = j;
        }
    }
    let lo = at(best_j.saturating_sub(1));
    let hi = at((best_j + 1).min(n - 1));
    let (x, v) = golden_section(&f, lo, hi, tol);
    if v <= best_f {
        (x, v)
    } else {
        (at(best_j), best_f)
    }
}
