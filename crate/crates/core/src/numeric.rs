//! Summation and small regression kernels shared across the crate.
//!
//! Every reduction in this crate runs through [`fsum`], an exactly rounded
//! floating-point sum (Shewchuk's algorithm, the same one behind Python's
//! `math.fsum`). Exact rounding buys two properties the index definitions
//! rely on: results are independent of the order values are visited in
//! (permutation invariance is then literal, not approximate), and sums over
//! a pooled replication `X ∥ X` are exactly double the sums over `X`.

/// Exactly rounded sum of a sequence of finite `f64` values.
///
/// The result is the true real-valued sum rounded once to the nearest
/// double, regardless of input order.
pub fn fsum<I>(values: I) -> f64
where
    I: IntoIterator<Item = f64>,
{
    let mut partials: Vec<f64> = Vec::with_capacity(16);
    for mut x in values {
        debug_assert!(x.is_finite(), "fsum input must be finite");
        let mut kept = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[kept] = lo;
                kept += 1;
            }
            x = hi;
        }
        partials.truncate(kept);
        partials.push(x);
    }

    // Accumulate the non-overlapping partials from the largest down; stop at
    // the first inexact step and patch the half-ulp case against the sign of
    // the remaining tail.
    let mut i = partials.len();
    if i == 0 {
        return 0.0;
    }
    i -= 1;
    let mut hi = partials[i];
    let mut lo = 0.0;
    while i > 0 {
        let x = hi;
        i -= 1;
        let y = partials[i];
        hi = x + y;
        let yr = hi - x;
        lo = y - yr;
        if lo != 0.0 {
            break;
        }
    }
    if i > 0 && ((lo < 0.0 && partials[i - 1] < 0.0) || (lo > 0.0 && partials[i - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        if y == x - hi {
            hi = x;
        }
    }
    hi
}

/// Mean of a slice through [`fsum`].
pub fn fmean(values: &[f64]) -> f64 {
    fsum(values.iter().copied()) / values.len() as f64
}

/// R-7 linear-interpolation quantile on pre-sorted data (the R/NumPy default).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    debug_assert!((0.0..=1.0).contains(&p));
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let j = h.floor() as usize;
    let g = h - h.floor();
    if j + 1 >= n {
        sorted[n - 1]
    } else {
        (1.0 - g) * sorted[j] + g * sorted[j + 1]
    }
}

/// Ordinary least squares fit `y = slope·x + intercept`.
///
/// Returns `(slope, intercept, r_squared)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "a line fit needs at least two points");
    let mx = fmean(xs);
    let my = fmean(ys);
    let sxx = fsum(xs.iter().map(|&x| (x - mx) * (x - mx)));
    let sxy = fsum(xs.iter().zip(ys).map(|(&x, &y)| (x - mx) * (y - my)));
    let syy = fsum(ys.iter().map(|&y| (y - my) * (y - my)));
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, intercept, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fsum_matches_naive_on_easy_input() {
        let v = [1.0, 2.0, 3.5, -0.5];
        assert_eq!(fsum(v), 6.0);
    }

    #[test]
    fn fsum_recovers_cancelled_term() {
        assert_eq!(fsum([1e16, 1.0, -1e16]), 1.0);
    }

    #[test]
    fn fsum_is_order_independent() {
        let v = [1e-8, 0.1, 1e100, 0.3, -1e100, 7.25, -0.2];
        let mut w = v;
        w.reverse();
        assert_eq!(fsum(v), fsum(w));
        let shuffled = [0.3, -1e100, 1e-8, 7.25, 0.1, -0.2, 1e100];
        assert_eq!(fsum(v), fsum(shuffled));
    }

    #[test]
    fn fsum_doubles_exactly_on_concatenation() {
        let v = [0.1, 0.7, 1e-12, 3.0, 123.456];
        let doubled: Vec<f64> = v.iter().chain(v.iter()).copied().collect();
        assert_eq!(fsum(doubled), 2.0 * fsum(v));
    }

    #[test]
    fn fsum_empty_is_zero() {
        assert_eq!(fsum([]), 0.0);
    }

    #[test]
    fn quantiles_hit_min_median_max() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile_sorted(&v, 0.0), 1.0);
        assert_eq!(quantile_sorted(&v, 0.5), 3.0);
        assert_eq!(quantile_sorted(&v, 1.0), 5.0);
        let w = [1.0, 2.0, 3.0, 4.0];
        assert!((quantile_sorted(&w, 0.25) - 1.75).abs() < 1e-15);
    }

    #[test]
    fn line_fit_recovers_exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| -0.5 * x + 2.0).collect();
        let (slope, intercept, r2) = linear_fit(&xs, &ys);
        assert!((slope + 0.5).abs() < 1e-12);
        assert!((intercept - 2.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }
}
