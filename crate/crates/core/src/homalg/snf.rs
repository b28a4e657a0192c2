//! Smith normal form over the integers.
//!
//! The reduction runs on a dense working copy. Unimodular transforms are
//! tracked on request so that kernels, images and connecting maps can be read
//! off the same decomposition.

use super::matrix::SparseMatrix;
use crate::scalar::Scalar;

/// `left * m * right = diag(diagonal, 0, ...)` with `left`, `right` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm<T: Scalar> {
    /// Positive invariant factors `d_1 | d_2 | ... | d_r`.
    pub diagonal: Vec<T>,
    pub rank: usize,
    pub left: Option<SparseMatrix<T>>,
    pub right: Option<SparseMatrix<T>>,
}

/// Invariant factors and rank only.
pub fn smith_normal_form<T: Scalar>(m: &SparseMatrix<T>) -> SmithForm<T> {
    reduce(m, false)
}

/// Invariant factors together with the unimodular transforms.
pub fn smith_normal_form_with_transforms<T: Scalar>(m: &SparseMatrix<T>) -> SmithForm<T> {
    reduce(m, true)
}

struct Work<T: Scalar> {
    a: Vec<Vec<T>>,
    u: Option<Vec<Vec<T>>>,
    v: Option<Vec<Vec<T>>>,
}

impl<T: Scalar> Work<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row_dst += c * row_src
    fn add_row(&mut self, dst: usize, src: usize, c: &T) {
        let src_row = self.a[src].clone();
        for (x, s) in self.a[dst].iter_mut().zip(src_row) {
            *x = x.clone() + c.clone() * s;
        }
        if let Some(u) = &mut self.u {
            let src_row = u[src].clone();
            for (x, s) in u[dst].iter_mut().zip(src_row) {
                *x = x.clone() + c.clone() * s;
            }
        }
    }

    /// col_dst += c * col_src
    fn add_col(&mut self, dst: usize, src: usize, c: &T) {
        for row in &mut self.a {
            let s = row[src].clone();
            row[dst] = row[dst].clone() + c.clone() * s;
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                let s = row[src].clone();
                row[dst] = row[dst].clone() + c.clone() * s;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -x.clone();
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -x.clone();
            }
        }
    }

    fn min_nonzero_from(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in k..self.a.len() {
            for j in k..self.a[i].len() {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[bi][bj].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }
}

fn identity<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

fn reduce<T: Scalar>(m: &SparseMatrix<T>, transforms: bool) -> SmithForm<T> {
    let (rows, cols) = m.shape();
    let mut w = Work { a: m.to_dense(), u: transforms.then(|| identity(rows)), v: transforms.then(|| identity(cols)) };
    let mut diagonal = Vec::new();

    for k in 0..rows.min(cols) {
        let Some((pi, pj)) = w.min_nonzero_from(k) else { break };
        w.swap_rows(k, pi);
        w.swap_cols(k, pj);
        loop {
            let mut dirty = false;
            for i in k + 1..rows {
                if !w.a[i][k].is_zero() {
                    let q = w.a[i][k].div_floor(&w.a[k][k]);
                    w.add_row(i, k, &-q);
                    dirty |= !w.a[i][k].is_zero();
                }
            }
            for j in k + 1..cols {
                if !w.a[k][j].is_zero() {
                    let q = w.a[k][j].div_floor(&w.a[k][k]);
                    w.add_col(j, k, &-q);
                    dirty |= !w.a[k][j].is_zero();
                }
            }
            if dirty {
                // a remainder is now smaller than the pivot
                let (pi, pj) = w.min_nonzero_from(k).expect("nonzero remainder exists");
                w.swap_rows(k, pi);
                w.swap_cols(k, pj);
                continue;
            }
            let pivot = w.a[k][k].clone();
            let offender = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&pivot)));
            match offender {
                Some(i) => w.add_row(k, i, &T::one()),
                None => break,
            }
        }
        if w.a[k][k].is_negative() {
            w.negate_row(k);
        }
        diagonal.push(w.a[k][k].clone());
    }

    let to_sparse = |d: Vec<Vec<T>>, n: usize| SparseMatrix::from_dense(n, n, &d);
    SmithForm {
        rank: diagonal.len(),
        diagonal,
        left: w.u.map(|u| to_sparse(u, rows)),
        right: w.v.map(|v| to_sparse(v, cols)),
    }
}

/// Kernel of an integer matrix as a lattice basis, one column per generator.
pub fn integer_kernel<T: Scalar>(m: &SparseMatrix<T>) -> SparseMatrix<T> {
    let snf = smith_normal_form_with_transforms(m);
    let right = snf.right.expect("transforms requested");
    let cols: Vec<usize> = (snf.rank..m.cols()).collect();
    let all_rows: Vec<usize> = (0..m.cols()).collect();
    right.select(&all_rows, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::Signed;

    fn check_decomposition(m: &SparseMatrix<BigInt>) {
        let snf = smith_normal_form_with_transforms(m);
        let (u, v) = (snf.left.clone().unwrap(), snf.right.clone().unwrap());
        let d = u.mul(m).mul(&v);
        for (i, j, x) in d.iter() {
            assert_eq!(i, j, "off-diagonal entry survived");
            assert_eq!(x, &snf.diagonal[i]);
        }
        assert_eq!(d.nnz(), snf.rank);
        for w in snf.diagonal.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn one_by_one() {
        let m = SparseMatrix::<BigInt>::from_i64_rows(&[&[2]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal, vec![BigInt::from(2)]);
        assert_eq!(snf.rank, 1);
    }

    #[test]
    fn zero_matrix() {
        let snf = smith_normal_form(&SparseMatrix::<BigInt>::zeros(2, 3));
        assert!(snf.diagonal.is_empty());
        assert_eq!(snf.rank, 0);
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2 and |det| = 8, so the factors are 2 and 4
        let m = SparseMatrix::<BigInt>::from_i64_rows(&[&[2, 4], &[6, 8]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal, vec![BigInt::from(2), BigInt::from(4)]);
        check_decomposition(&m);
    }

    #[test]
    fn transforms_reproduce_diagonal() {
        for rows in [
            vec![vec![0, 3, 5], vec![2, 0, 4], vec![6, 9, 1]],
            vec![vec![4, 6], vec![6, 9], vec![2, 3]],
            vec![vec![0, 0, 0, 7]],
            vec![vec![-3, 0], vec![0, -5]],
        ] {
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            check_decomposition(&SparseMatrix::from_i64_rows(&refs));
        }
    }

    #[test]
    fn kernel_basis_spans_kernel() {
        let m = SparseMatrix::<BigInt>::from_i64_rows(&[&[1, 1, 0], &[0, 2, 2]]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        let col = k.column(0);
        // primitive generator of the lattice (1,-1,1) up to sign
        assert_eq!(col.iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![BigInt::from(1); 3]);
    }
}
