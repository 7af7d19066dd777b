//! Dense linear algebra over `F_p`.

use crate::field::{Coef, PrimeField};

/// A dense row-major matrix over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Coef>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> DenseMatrix {
        DenseMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Coef>>, cols: usize) -> DenseMatrix {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend(r);
        }
        DenseMatrix { rows: n, cols, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Coef {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Coef) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Coef] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self, k: &PrimeField) -> Vec<usize> {
        let p = k.characteristic() as u64;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else { continue };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = k.inv(self.get(r, c));
            for j in c..self.cols {
                let v = self.get(r, j);
                self.set(r, j, k.mul(v, inv));
            }
            let (before, rest) = self.data.split_at_mut(r * self.cols);
            let (pivot_row, after) = rest.split_at_mut(self.cols);
            let eliminate = |row: &mut [Coef]| {
                let f = row[c] as u64;
                if f == 0 {
                    return;
                }
                for j in c..row.len() {
                    if pivot_row[j] != 0 {
                        row[j] = ((row[j] as u64 + (p - f) * pivot_row[j] as u64) % p) as Coef;
                    }
                }
            };
            for row in before.chunks_mut(self.cols) {
                eliminate(row);
            }
            for row in after.chunks_mut(self.cols) {
                eliminate(row);
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, k: &PrimeField) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // eliminate along the shorter side
        let mut m = if self.rows > self.cols { self.transpose() } else { self.clone() };
        m.rref(k).len()
    }

    /// Basis of `{ x : A x = 0 }`.
    pub fn kernel(&self, k: &PrimeField) -> Vec<Vec<Coef>> {
        let mut m = self.clone();
        let pivots = m.rref(k);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(m.get(r, free));
            }
            out.push(v);
        }
        out
    }

    pub fn mul_vec(&self, k: &PrimeField, x: &[Coef]) -> Vec<Coef> {
        let p = k.characteristic() as u64;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for (a, b) in self.row(i).iter().zip(x) {
                    acc = (acc + *a as u64 * *b as u64) % p;
                }
                acc as Coef
            })
            .collect()
    }
}

/// Row space basis (reduced) of the given vectors.
pub fn row_space(k: &PrimeField, rows: Vec<Vec<Coef>>, cols: usize) -> Vec<Vec<Coef>> {
    let mut m = DenseMatrix::from_rows(rows, cols);
    let r = m.rref(k).len();
    (0..r).map(|i| m.row(i).to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn kernel_vectors_are_annihilated(
            entries in proptest::collection::vec(0u32..7, 12),
        ) {
            let k = PrimeField::new(7).unwrap();
            let m = DenseMatrix { rows: 3, cols: 4, data: entries };
            let ker = m.kernel(&k);
            prop_assert_eq!(ker.len() + m.rank(&k), 4);
            for v in ker {
                prop_assert!(m.mul_vec(&k, &v).iter().all(|&x| x == 0));
            }
            prop_assert_eq!(m.rank(&k), m.transpose().rank(&k));
        }
    }
}
