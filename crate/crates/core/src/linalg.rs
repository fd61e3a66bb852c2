//! Small dense linear algebra helpers shared by the numerical modules.

use nalgebra::DMatrix;

/// Result of a numerical rank computation.
#[derive(Clone, Debug, PartialEq)]
pub struct RankInfo {
    /// Numerical rank.
    pub rank: usize,
    /// Singular values in decreasing order (length `min(rows, cols)`).
    pub singular_values: Vec<f64>,
    /// Absolute threshold below which a singular value counts as zero.
    pub threshold: f64,
    /// True when some singular value lies within a factor of 10 of the threshold.
    pub borderline: bool,
}

/// Singular values of `m` sorted in decreasing order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Numerical rank with threshold `rel_tol * max(sigma_max, 1)`.
pub fn rank(m: &DMatrix<f64>, rel_tol: f64) -> RankInfo {
    let sv = singular_values(m);
    let smax = sv.first().copied().unwrap_or(0.0);
    let threshold = rel_tol * smax.max(1.0);
    rank_with_threshold(sv, threshold)
}

/// Numerical rank with threshold `rel_tol * sigma_max` (no floor at 1).
pub fn rank_relative(m: &DMatrix<f64>, rel_tol: f64) -> RankInfo {
    let sv = singular_values(m);
    let smax = sv.first().copied().unwrap_or(0.0);
    rank_with_threshold(sv, rel_tol * smax)
}

fn rank_with_threshold(sv: Vec<f64>, threshold: f64) -> RankInfo {
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    let borderline = sv
        .iter()
        .any(|&s| s > threshold / 10.0 && s < threshold * 10.0 && threshold > 0.0);
    RankInfo { rank, singular_values: sv, threshold, borderline }
}

/// Orthonormal basis (as columns) of the numerical null space of `m`.
///
/// A vector counts as null when its singular value is at most `threshold`.
pub fn null_space(m: &DMatrix<f64>, threshold: f64) -> DMatrix<f64> {
    let c = m.ncols();
    if c == 0 {
        return DMatrix::zeros(0, 0);
    }
    // Pad with zero rows so the SVD returns a full right factor.
    let r = m.nrows().max(c);
    let mut padded = DMatrix::zeros(r, c);
    padded.view_mut((0, 0), (m.nrows(), c)).copy_from(m);
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let cols: Vec<_> = (0..c)
        .filter(|&k| svd.singular_values[k] <= threshold)
        .map(|k| vt.row(k).transpose())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(c, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Orthonormalize the columns of `m` (modified Gram-Schmidt, dropping
/// columns whose residual norm falls below `tol`).
pub fn orthonormalize(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let mut out: Vec<nalgebra::DVector<f64>> = Vec::new();
    for j in 0..m.ncols() {
        let mut v = m.column(j).into_owned();
        for _ in 0..2 {
            for q in &out {
                let d = q.dot(&v);
                v -= q * d;
            }
        }
        let n = v.norm();
        if n > tol {
            out.push(v / n);
        }
    }
    if out.is_empty() {
        DMatrix::zeros(m.nrows(), 0)
    } else {
        DMatrix::from_columns(&out)
    }
}

/// Stack matrices vertically. All inputs must share a column count.
pub fn vstack(blocks: &[DMatrix<f64>], ncols: usize) -> DMatrix<f64> {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = DMatrix::zeros(rows, ncols);
    let mut r0 = 0;
    for b in blocks {
        assert_eq!(b.ncols(), ncols, "column mismatch in vstack");
        out.view_mut((r0, 0), (b.nrows(), ncols)).copy_from(b);
        r0 += b.nrows();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_zero_row_matrix() {
        let m = DMatrix::<f64>::zeros(0, 4);
        assert_eq!(rank(&m, 1e-8).rank, 0);
        assert_eq!(null_space(&m, 1e-8).ncols(), 4);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let n = null_space(&m, 1e-10);
        assert_eq!(n.ncols(), 2);
        assert!((&m * &n).norm() < 1e-12);
    }

    #[test]
    fn orthonormalize_drops_dependent() {
        let m = DMatrix::from_column_slice(2, 3, &[1.0, 0.0, 2.0, 0.0, 1.0, 1.0]);
        assert_eq!(orthonormalize(&m, 1e-10).ncols(), 2);
    }
}
