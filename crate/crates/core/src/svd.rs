//! Singular values of small dense matrices by one-sided Jacobi rotations.

const MAX_SWEEPS: usize = 80;

/// Singular values of the `rows x cols` matrix given row-wise, sorted in
/// descending order. Only `min(rows, cols)` values are meaningful when
/// `rows > cols`; the remainder are (numerically) zero.
pub fn singular_values(rows: &[Vec<f64>]) -> Vec<f64> {
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let k = a.len();
    if k == 0 {
        return Vec::new();
    }
    // Orthogonalize rows pairwise; afterwards the row norms are the
    // singular values.
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..k {
            for j in (i + 1)..k {
                let (alpha, beta, gamma) = a[i]
                    .iter()
                    .zip(&a[j])
                    .fold((0.0, 0.0, 0.0), |(al, be, ga), (x, y)| (al + x * x, be + y * y, ga + x * y));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (lo, hi) = a.split_at_mut(j);
                for (x, y) in lo[i].iter_mut().zip(hi[0].iter_mut()) {
                    let (xi, yj) = (*x, *y);
                    *x = c * xi - s * yj;
                    *y = s * xi + c * yj;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = a.iter().map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(singular: &[f64], rel_tol: f64) -> usize {
    let max = singular.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    singular.iter().filter(|&&s| s > rel_tol * max).count()
}
