//! Gaussian elimination over any [`Scalar`].

use super::scalar::Scalar;

/// Reduced row echelon form of a dense matrix.
#[derive(Debug, Clone)]
pub struct Echelon<T> {
    pub rows: Vec<Vec<T>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
    /// Smallest accepted pivot over the largest entry; 1 for exact fields.
    pub pivot_ratio: f64,
}

impl<T: Scalar> Echelon<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let mut is_pivot = vec![false; self.cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![T::zero(); self.cols];
                v[free] = T::one();
                for (r, &pc) in self.pivots.iter().enumerate() {
                    v[pc] = -self.rows[r][free].clone();
                }
                v
            })
            .collect()
    }
}

/// Row-reduces `rows` (each of length `cols`). Exact fields take the first
/// nonzero pivot; floats use partial pivoting with a relative threshold.
pub fn row_reduce<T: Scalar>(mut rows: Vec<Vec<T>>, cols: usize) -> Echelon<T> {
    let scale = rows
        .iter()
        .flat_map(|r| r.iter().map(|x| x.magnitude()))
        .fold(0.0f64, f64::max);
    let mut pivots = Vec::new();
    let mut pivot_ratio = 1.0f64;
    let mut top = 0;
    for c in 0..cols {
        if top == rows.len() {
            break;
        }
        let candidate = if T::EXACT {
            (top..rows.len()).find(|&r| !rows[r][c].negligible(scale))
        } else {
            (top..rows.len())
                .filter(|&r| !rows[r][c].negligible(scale))
                .max_by(|&a, &b| rows[a][c].magnitude().total_cmp(&rows[b][c].magnitude()))
        };
        let Some(p) = candidate else {
            if !T::EXACT {
                for row in rows.iter_mut().skip(top) {
                    row[c] = T::zero();
                }
            }
            continue;
        };
        rows.swap(top, p);
        if !T::EXACT && scale > 0.0 {
            pivot_ratio = pivot_ratio.min(rows[top][c].magnitude() / scale);
        }
        let inv = T::one() / rows[top][c].clone();
        for x in rows[top].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..rows.len() {
            if r == top || rows[r][c].is_zero() {
                continue;
            }
            let f = rows[r][c].clone();
            for k in 0..cols {
                let delta = f.clone() * rows[top][k].clone();
                rows[r][k] = rows[r][k].clone() - delta;
            }
        }
        pivots.push(c);
        top += 1;
    }
    Echelon {
        rows,
        pivots,
        cols,
        pivot_ratio,
    }
}

pub fn rank<T: Scalar>(rows: Vec<Vec<T>>, cols: usize) -> usize {
    row_reduce(rows, cols).rank()
}
