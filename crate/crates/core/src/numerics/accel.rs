//! Sequence acceleration for oscillatory tails.

use num_complex::Complex64 as C64;

/// Wynn's ε-algorithm applied to a sequence of partial sums.
///
/// Returns the extrapolated limit and an error estimate: the distance between
/// the two most recent even-column extrapolants. For sequences whose terms
/// alternate (half-period integrals of an oscillatory integrand) the
/// ε-table converges far faster than the raw partial sums.
pub fn wynn_epsilon(partial_sums: &[C64]) -> (C64, f64) {
    let n = partial_sums.len();
    if n == 0 {
        return (C64::new(0.0, 0.0), f64::INFINITY);
    }
    if n < 3 {
        let last = partial_sums[n - 1];
        let err = if n == 2 { (last - partial_sums[0]).norm() } else { f64::INFINITY };
        return (last, err);
    }
    // prev2 = ε_{k−1}, prev = ε_k column over the index j.
    let mut prev2: Vec<C64> = vec![C64::new(0.0, 0.0); n + 1];
    let mut prev: Vec<C64> = partial_sums.to_vec();
    let mut best = partial_sums[n - 1];
    let mut best_prev = partial_sums[n - 2];
    let mut k = 0usize;
    while prev.len() >= 2 {
        let mut next = Vec::with_capacity(prev.len() - 1);
        let mut broke = false;
        for j in 0..prev.len() - 1 {
            let d = prev[j + 1] - prev[j];
            if d.norm() <= 1e-300 || !d.re.is_finite() || !d.im.is_finite() {
                broke = true;
                break;
            }
            next.push(prev2[j + 1] + d.inv());
        }
        if broke || next.is_empty() {
            break;
        }
        k += 1;
        if k % 2 == 0 {
            let m = next.len();
            best_prev = if m >= 2 { next[m - 2] } else { best };
            best = next[m - 1];
        }
        prev2 = prev;
        prev = next;
    }
    (best, (best - best_prev).norm())
}
