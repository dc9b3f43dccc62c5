use nalgebra::DMatrix;
use num_complex::Complex64;

/// Singular values of a dense complex matrix, largest first.
pub fn singular_values(rows: &[Vec<Complex64>]) -> Vec<f64> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return Vec::new();
    }
    let m = DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]);
    let mut values: Vec<f64> = m.singular_values().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Number of singular values above `tol` times the largest one.
pub fn numeric_rank(rows: &[Vec<Complex64>], tol: f64) -> usize {
    let values = singular_values(rows);
    match values.first() {
        Some(&largest) if largest > 0.0 => values.iter().filter(|&&s| s > tol * largest).count(),
        _ => 0,
    }
}
