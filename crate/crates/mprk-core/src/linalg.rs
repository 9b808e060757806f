//! Small dense linear algebra: LU factorization with partial pivoting.
//!
//! Every linear system in this crate has N ≤ 64 unknowns, so a plain
//! row-major `Vec<f64>` matrix and an in-place textbook LU are sufficient.
//! The MPRK stage matrices would admit pivot-free elimination (their
//! transposes are M-matrices), but pivoting costs nothing at these sizes
//! and also covers the `PlainRest` split where right-hand sides may be
//! negative.

use crate::error::StepError;

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMat {
    n: usize,
    data: Vec<f64>,
}

impl DenseMat {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Matrix-vector product `M x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            out[i] = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

impl std::ops::Index<(usize, usize)> for DenseMat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Pivot magnitudes below this are treated as singular.
const PIVOT_FLOOR: f64 = 1e-300;

/// Solve `M x = rhs` by LU with partial pivoting. `M` is consumed as scratch.
pub fn solve_in_place(mut m: DenseMat, rhs: &[f64]) -> Result<Vec<f64>, StepError> {
    let n = m.n;
    assert_eq!(rhs.len(), n);
    let mut x = rhs.to_vec();

    for col in 0..n {
        // Pivot search on the current column.
        let mut piv = col;
        let mut piv_abs = m[(col, col)].abs();
        for r in col + 1..n {
            let a = m[(r, col)].abs();
            if a > piv_abs {
                piv = r;
                piv_abs = a;
            }
        }
        if !(piv_abs > PIVOT_FLOOR) {
            return Err(StepError::SingularSystem { pivot: piv_abs });
        }
        if piv != col {
            for j in 0..n {
                let tmp = m[(col, j)];
                m[(col, j)] = m[(piv, j)];
                m[(piv, j)] = tmp;
            }
            x.swap(col, piv);
        }
        let d = m[(col, col)];
        for r in col + 1..n {
            let factor = m[(r, col)] / d;
            if factor != 0.0 {
                for j in col + 1..n {
                    m[(r, j)] -= factor * m[(col, j)];
                }
                x[r] -= factor * x[col];
            }
            m[(r, col)] = 0.0;
        }
    }

    // Back substitution.
    for i in (0..n).rev() {
        let mut acc = x[i];
        for j in i + 1..n {
            acc -= m[(i, j)] * x[j];
        }
        x[i] = acc / m[(i, i)];
    }

    for (i, v) in x.iter().enumerate() {
        if !v.is_finite() {
            return Err(StepError::NonPositiveState { index: i });
        }
    }
    Ok(x)
}

/// Solve `M x = rhs`, keeping `M` intact.
pub fn solve(m: &DenseMat, rhs: &[f64]) -> Result<Vec<f64>, StepError> {
    solve_in_place(m.clone(), rhs)
}
