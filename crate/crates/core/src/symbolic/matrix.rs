use super::poly::PolySymbol;
use crate::error::{Error, Result};

/// Dense row-major matrix of polynomial symbols over a common set of
/// spatial variables.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    n: usize,
    entries: Vec<PolySymbol>,
}

impl PolyMatrix {
    pub fn from_rows(rows: Vec<Vec<PolySymbol>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if nrows == 0 || ncols == 0 {
            return Err(Error::input("matrix must have at least one row and column"));
        }
        let n = rows[0][0].num_spatial_vars();
        let mut entries = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::input(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            for entry in row {
                if entry.num_spatial_vars() != n {
                    return Err(Error::input(
                        "matrix entries use different numbers of spatial variables",
                    ));
                }
                entries.push(entry);
            }
        }
        Ok(PolyMatrix {
            rows: nrows,
            cols: ncols,
            n,
            entries,
        })
    }

    pub fn scalar_identity(side: usize, value: &PolySymbol) -> Self {
        let n = value.num_spatial_vars();
        let entries = (0..side * side)
            .map(|idx| {
                if idx / side == idx % side {
                    value.clone()
                } else {
                    PolySymbol::zero(n)
                }
            })
            .collect();
        PolyMatrix {
            rows: side,
            cols: side,
            n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_spatial_vars(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &PolySymbol {
        &self.entries[i * self.cols + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[PolySymbol] {
        &self.entries
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != rhs.rows || self.n != rhs.n {
            return Err(Error::input(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = PolySymbol::zero(self.n);
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * rhs.get(k, j));
                }
                entries.push(acc);
            }
        }
        Ok(PolyMatrix {
            rows: self.rows,
            cols: rhs.cols,
            n: self.n,
            entries,
        })
    }

    fn minor_without(&self, row: usize, col: usize) -> PolyMatrix {
        let mut entries = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != row) {
            for j in (0..self.cols).filter(|&j| j != col) {
                entries.push(self.get(i, j).clone());
            }
        }
        PolyMatrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            n: self.n,
            entries,
        }
    }
}

/// Determinant by Laplace expansion along rows, memoized over column
/// subsets. Only ring operations are used, so no polynomial division is
/// ever needed.
pub fn det_poly_matrix(m: &PolyMatrix) -> Result<PolySymbol> {
    if !m.is_square() {
        return Err(Error::input(format!(
            "determinant of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let side = m.rows;
    if side > 20 {
        return Err(Error::input("determinant side larger than 20 is not supported"));
    }
    let mut memo: Vec<Option<PolySymbol>> = vec![None; 1 << side];
    memo[0] = Some(PolySymbol::one(m.n));
    Ok(det_cols(m, (1usize << side) - 1, &mut memo))
}

// Determinant of rows (side - |mask|)..side restricted to the columns in
// `mask`.
fn det_cols(m: &PolyMatrix, mask: usize, memo: &mut [Option<PolySymbol>]) -> PolySymbol {
    if let Some(v) = &memo[mask] {
        return v.clone();
    }
    let row = m.rows - mask.count_ones() as usize;
    let mut acc = PolySymbol::zero(m.n);
    let mut position = 0;
    for col in 0..m.cols {
        if mask & (1 << col) == 0 {
            continue;
        }
        let entry = m.get(row, col);
        if !entry.is_zero() {
            let sub = det_cols(m, mask & !(1 << col), memo);
            let term = entry * &sub;
            acc = if position % 2 == 0 {
                &acc + &term
            } else {
                &acc - &term
            };
        }
        position += 1;
    }
    memo[mask] = Some(acc.clone());
    acc
}

/// Transposed cofactor matrix, so that `m * adj(m) = det(m) * I`.
pub fn adjugate_poly_matrix(m: &PolyMatrix) -> Result<PolyMatrix> {
    if !m.is_square() {
        return Err(Error::input(format!(
            "adjugate of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let side = m.rows;
    if side == 1 {
        return PolyMatrix::from_rows(vec![vec![PolySymbol::one(m.n)]]);
    }
    // Entry (j, i) of the adjugate is the (i, j) cofactor.
    let rows = (0..side)
        .map(|j| {
            (0..side)
                .map(|i| {
                    let minor = det_poly_matrix(&m.minor_without(i, j))?;
                    Ok(if (i + j) % 2 == 0 { minor } else { -&minor })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PolyMatrix::from_rows(rows)
}
