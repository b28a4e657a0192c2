//! Sparse matrices over an exact scalar type.
//!
//! Entries live in a coordinate map ordered by `(row, col)`, so iteration is
//! row-major and deterministic. Zero is never stored.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseMatrix<T: Scalar> {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), T>,
}

impl<T: Scalar> SparseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries.insert((i, i), T::one());
        }
        m
    }

    /// Builds a matrix from row-major dense data. Panics on ragged input.
    pub fn from_dense(rows: usize, cols: usize, data: &[Vec<T>]) -> Self {
        assert_eq!(data.len(), rows, "row count mismatch");
        let mut m = Self::zeros(rows, cols);
        for (i, row) in data.iter().enumerate() {
            assert_eq!(row.len(), cols, "column count mismatch in row {i}");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    /// Convenience constructor from small integer literals.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let data: Vec<Vec<T>> = rows.iter().map(|r| r.iter().map(|&v| T::from_int(v)).collect()).collect();
        Self::from_dense(nrows, ncols, &data)
    }

    pub fn from_entries(rows: usize, cols: usize, entries: impl IntoIterator<Item = ((usize, usize), T)>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for ((i, j), v) in entries {
            let cur = m.get(i, j);
            m.set(i, j, cur + v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(T::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds for {}x{}", self.rows, self.cols);
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    /// Nonzero entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.cols]; self.rows];
        for (i, j, v) in self.iter() {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(i, j), v)| ((j, i), v.clone())).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|(&k, v)| (k, -v.clone())).collect() }
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_entries(self.rows, self.cols, self.entries.iter().map(|(&k, v)| (k, v.clone() * c.clone())))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        let mut out = self.clone();
        for (&(i, j), v) in &other.entries {
            let cur = out.get(i, j);
            out.set(i, j, cur + v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch in mul");
        let mut rhs_rows: Vec<Vec<(usize, &T)>> = vec![Vec::new(); other.rows];
        for (&(k, j), v) in &other.entries {
            rhs_rows[k].push((j, v));
        }
        let mut acc: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            for &(j, b) in &rhs_rows[k] {
                let e = acc.entry((i, j)).or_insert_with(T::zero);
                *e = e.clone() + a.clone() * b.clone();
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Self { rows: self.rows, cols: other.cols, entries: acc }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![T::zero(); self.rows];
        for (i, j, a) in self.iter() {
            out[i] = out[i].clone() + a.clone() * v[j].clone();
        }
        out
    }

    /// Entries reduced into `[0, p)`; zero residues are dropped.
    pub fn reduce_mod(&self, p: u64) -> Self {
        let entries = self
            .entries
            .iter()
            .filter_map(|(&k, v)| {
                let r = v.residue(p);
                (r != 0).then(|| (k, T::from_residue(r)))
            })
            .collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let row_pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let col_pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let entries = self
            .entries
            .iter()
            .filter_map(|(&(i, j), v)| Some(((*row_pos.get(&i)?, *col_pos.get(&j)?), v.clone())))
            .collect();
        Self { rows: rows.len(), cols: cols.len(), entries }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`, adding to what is there.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of bounds");
        for (i, j, v) in block.iter() {
            let cur = self.get(r0 + i, c0 + j);
            self.set(r0 + i, c0 + j, cur + v.clone());
        }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        out.add_block(0, 0, self);
        out.add_block(0, self.cols, other);
        out
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut out = Self::zeros(self.rows + other.rows, self.cols);
        out.add_block(0, 0, self);
        out.add_block(self.rows, 0, other);
        out
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        let mut out = vec![T::zero(); self.rows];
        for (i, jj, v) in self.iter() {
            if jj == j {
                out[i] = v.clone();
            }
        }
        out
    }

    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }
}

impl<T: Scalar> fmt::Debug for SparseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} [", self.rows, self.cols)?;
        for (n, row) in self.to_dense().iter().enumerate() {
            if n > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = SparseMatrix<i64>;

    #[test]
    fn zero_entries_are_not_stored() {
        let mut m = M::zeros(2, 2);
        m.set(0, 1, 3);
        m.set(0, 1, 0);
        assert_eq!(m.nnz(), 0);
        let a = M::from_i64_rows(&[&[1, 2], &[3, 4]]);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn product_and_transpose() {
        let a = M::from_i64_rows(&[&[1, 2, 0], &[0, 1, -1]]);
        let b = M::from_i64_rows(&[&[1, 0], &[0, 1], &[2, 3]]);
        let ab = a.mul(&b);
        assert_eq!(ab, M::from_i64_rows(&[&[1, 2], &[-2, -2]]));
        assert_eq!(a.mul(&b).transpose(), b.transpose().mul(&a.transpose()));
    }

    #[test]
    fn reduction_mod_two_drops_even_entries() {
        let a = M::from_i64_rows(&[&[2, -1], &[4, 3]]);
        assert_eq!(a.reduce_mod(2), M::from_i64_rows(&[&[0, 1], &[0, 1]]));
    }

    #[test]
    fn selection_and_stacking() {
        let a = M::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(a.select(&[0, 2], &[1]), M::from_i64_rows(&[&[2], &[8]]));
        let h = a.select(&[0], &[0]).hstack(&a.select(&[0], &[2]));
        assert_eq!(h, M::from_i64_rows(&[&[1, 3]]));
        let v = a.select(&[0], &[0, 1]).vstack(&a.select(&[2], &[0, 1]));
        assert_eq!(v, M::from_i64_rows(&[&[1, 2], &[7, 8]]));
    }
}
