//! Elastic and shift-invariant dissimilarities between equal-length series.

use super::DistanceError;

fn check(a: &[f64], b: &[f64]) -> Result<(), DistanceError> {
    if a.is_empty() || b.is_empty() {
        return Err(DistanceError::Empty);
    }
    if a.len() != b.len() {
        return Err(DistanceError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

/// Sakoe-Chiba half-width in cells for a series of length `m`. A zero
/// fraction pins the path to the diagonal; any positive fraction allows at
/// least one cell either side.
pub fn dtw_window(m: usize, window_frac: f64) -> usize {
    if window_frac <= 0.0 {
        0
    } else {
        ((window_frac * m as f64).ceil() as usize).max(1)
    }
}

/// Band-constrained DTW with squared pointwise cost and no final root.
pub fn dtw(a: &[f64], b: &[f64], window_frac: f64) -> Result<f64, DistanceError> {
    check(a, b)?;
    Ok(dtw_unchecked(a, b, window_frac))
}

pub(crate) fn dtw_unchecked(a: &[f64], b: &[f64], window_frac: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = a.len();
    let w = dtw_window(m, window_frac);
    let mut prev = vec![f64::INFINITY; m + 1];
    let mut curr = vec![f64::INFINITY; m + 1];
    prev[0] = 0.0;
    for i in 1..=m {
        curr.fill(f64::INFINITY);
        let lo = i.saturating_sub(w).max(1);
        let hi = (i + w).min(m);
        for j in lo..=hi {
            let diff = a[i - 1] - b[j - 1];
            let best = prev[j - 1].min(prev[j]).min(curr[j - 1]);
            curr[j] = diff * diff + best;
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[m]
}

fn msm_split_merge(new: f64, a: f64, b: f64, c: f64) -> f64 {
    if (a <= new && new <= b) || (b <= new && new <= a) {
        c
    } else {
        c + (new - a).abs().min((new - b).abs())
    }
}

/// Move-Split-Merge distance with split/merge cost `c`.
pub fn msm(a: &[f64], b: &[f64], c: f64) -> Result<f64, DistanceError> {
    check(a, b)?;
    Ok(msm_unchecked(a, b, c))
}

pub(crate) fn msm_unchecked(x: &[f64], y: &[f64], c: f64) -> f64 {
    if x == y {
        return 0.0;
    }
    let (m, n) = (x.len(), y.len());
    let mut cost = vec![0.0; m * n];
    let at = |i: usize, j: usize| i * n + j;
    cost[0] = (x[0] - y[0]).abs();
    for i in 1..m {
        cost[at(i, 0)] = cost[at(i - 1, 0)] + msm_split_merge(x[i], x[i - 1], y[0], c);
    }
    for j in 1..n {
        cost[at(0, j)] = cost[at(0, j - 1)] + msm_split_merge(y[j], x[0], y[j - 1], c);
    }
    for i in 1..m {
        for j in 1..n {
            let mv = cost[at(i - 1, j - 1)] + (x[i] - y[j]).abs();
            let split = cost[at(i - 1, j)] + msm_split_merge(x[i], x[i - 1], y[j], c);
            let merge = cost[at(i, j - 1)] + msm_split_merge(y[j], x[i], y[j - 1], c);
            cost[at(i, j)] = mv.min(split).min(merge);
        }
    }
    cost[m * n - 1]
}

/// Time Warp Edit Distance with unit time stamps `1..m`, stiffness `nu`
/// and deletion penalty `lambda`. Both series are padded with a leading
/// zero sample at time 0.
pub fn twed(a: &[f64], b: &[f64], nu: f64, lambda: f64) -> Result<f64, DistanceError> {
    check(a, b)?;
    if nu < 0.0 || lambda < 0.0 {
        return Err(DistanceError::InvalidParameter(format!(
            "twed nu={nu}, lambda={lambda}"
        )));
    }
    Ok(twed_unchecked(a, b, nu, lambda))
}

pub(crate) fn twed_unchecked(a: &[f64], b: &[f64], nu: f64, lambda: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (m, n) = (a.len(), b.len());
    let va = |i: usize| if i == 0 { 0.0 } else { a[i - 1] };
    let vb = |j: usize| if j == 0 { 0.0 } else { b[j - 1] };
    let w = n + 1;
    let mut dp = vec![f64::INFINITY; (m + 1) * w];
    dp[0] = 0.0;
    for i in 1..=m {
        for j in 1..=n {
            let (ti, tj) = (i as f64, j as f64);
            let del_a = dp[(i - 1) * w + j] + (va(i) - va(i - 1)).abs() + nu + lambda;
            let del_b = dp[i * w + j - 1] + (vb(j) - vb(j - 1)).abs() + nu + lambda;
            let matched = dp[(i - 1) * w + j - 1]
                + (va(i) - vb(j)).abs()
                + (va(i - 1) - vb(j - 1)).abs()
                + nu * ((ti - tj).abs() + ((ti - 1.0) - (tj - 1.0)).abs());
            dp[i * w + j] = del_a.min(del_b).min(matched);
        }
    }
    dp[m * w + n]
}

/// Shape-based distance: one minus the maximum coefficient-normalised
/// cross-correlation over all shifts, enumerated directly.
pub fn sbd(a: &[f64], b: &[f64]) -> Result<f64, DistanceError> {
    check(a, b)?;
    let na = a.iter().map(|v| v * v).sum::<f64>();
    let nb = b.iter().map(|v| v * v).sum::<f64>();
    if na == 0.0 || nb == 0.0 {
        return Err(DistanceError::ZeroNorm);
    }
    Ok(sbd_unchecked(a, b, (na * nb).sqrt()))
}

pub(crate) fn sbd_unchecked(a: &[f64], b: &[f64], norm: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = a.len() as isize;
    let mut best = f64::NEG_INFINITY;
    for shift in -(m - 1)..m {
        let mut cc = 0.0;
        for i in 0..m {
            let j = i + shift;
            if (0..m).contains(&j) {
                cc += a[j as usize] * b[i as usize];
            }
        }
        best = best.max(cc);
    }
    (1.0 - best / norm).clamp(0.0, 2.0)
}
