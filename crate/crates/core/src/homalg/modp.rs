//! Dense linear algebra over the prime field `F_p`.
//!
//! Vectors are plain `Vec<u64>` with entries in `[0, p)`; matrices are lists of
//! rows. The routines here back homology over `F_p`, induced ranks and the
//! pagewise spectral-sequence computation.

use super::matrix::SparseMatrix;
use crate::scalar::Scalar;

pub type Vector = Vec<u64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(is_prime(p), "{p} is not prime");
        Self { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.p as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.p - b % self.p)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero");
        self.pow(a, self.p - 2)
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Dense rows of an integer matrix reduced mod p.
    pub fn dense<T: Scalar>(&self, m: &SparseMatrix<T>) -> Vec<Vector> {
        let mut out = vec![vec![0u64; m.cols()]; m.rows()];
        for (i, j, v) in m.iter() {
            out[i][j] = v.residue(self.p);
        }
        out
    }

    /// Row-reduces in place, returning pivot columns. Rows end in reduced echelon form.
    pub fn rref(&self, rows: &mut Vec<Vector>) -> Vec<usize> {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
            rows.swap(r, pr);
            let inv = self.inv(rows[r][c]);
            for x in rows[r].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for i in 0..rows.len() {
                if i != r && rows[i][c] != 0 {
                    let f = rows[i][c];
                    let pivot = rows[r].clone();
                    for (x, &y) in rows[i].iter_mut().zip(&pivot).take(ncols) {
                        *x = self.sub(*x, self.mul(f, y));
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        pivots
    }

    pub fn rank_of_rows(&self, rows: &[Vector]) -> usize {
        let mut work = rows.to_vec();
        self.rref(&mut work).len()
    }

    pub fn rank<T: Scalar>(&self, m: &SparseMatrix<T>) -> usize {
        if m.is_zero() {
            return 0;
        }
        self.rank_of_rows(&self.dense(m))
    }

    /// Basis of `{x : A x = 0}` where `a` has `ncols` columns.
    pub fn kernel(&self, a: &[Vector], ncols: usize) -> Vec<Vector> {
        let mut work = a.to_vec();
        let pivots = self.rref(&mut work);
        let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; ncols];
                v[f] = 1;
                for (row, &pc) in work.iter().zip(&pivots) {
                    v[pc] = self.neg(row[f]);
                }
                v
            })
            .collect()
    }

    pub fn apply(&self, a: &[Vector], x: &[u64]) -> Vector {
        a.iter().map(|row| row.iter().zip(x).fold(0u64, |acc, (&r, &v)| self.add(acc, self.mul(r, v)))).collect()
    }

    /// Echelon basis of the span of `vectors` in an ambient space of dimension `n`.
    pub fn span(&self, vectors: &[Vector], n: usize) -> Vec<Vector> {
        if vectors.is_empty() {
            return Vec::new();
        }
        let mut work = vectors.to_vec();
        debug_assert!(work.iter().all(|v| v.len() == n));
        self.rref(&mut work);
        work
    }

    /// Vectors from `candidates` that extend a basis of span(`base`), chosen greedily in order.
    pub fn extend(&self, base: &[Vector], candidates: &[Vector]) -> Vec<Vector> {
        let mut current: Vec<Vector> = base.to_vec();
        let mut rank = self.rank_of_rows(&current);
        let mut chosen = Vec::new();
        for c in candidates {
            current.push(c.clone());
            let r = self.rank_of_rows(&current);
            if r > rank {
                rank = r;
                chosen.push(c.clone());
            } else {
                current.pop();
            }
        }
        chosen
    }

    /// Coefficients `c` with `sum c_k basis_k = target`, if any.
    pub fn solve(&self, basis: &[Vector], target: &[u64]) -> Option<Vector> {
        let n = target.len();
        let k = basis.len();
        // augmented system: n equations, k unknowns
        let mut rows: Vec<Vector> = (0..n)
            .map(|i| {
                let mut row: Vector = basis.iter().map(|b| b[i]).collect();
                row.push(target[i]);
                row
            })
            .collect();
        if rows.is_empty() {
            return Some(vec![0; k]);
        }
        let pivots = self.rref(&mut rows);
        if pivots.contains(&k) {
            return None;
        }
        let mut x = vec![0u64; k];
        for (row, &pc) in rows.iter().zip(&pivots) {
            x[pc] = row[k];
        }
        Some(x)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_depends_on_characteristic() {
        let m = SparseMatrix::<i64>::from_i64_rows(&[&[2, 0], &[0, 3]]);
        assert_eq!(PrimeField::new(2).rank(&m), 1);
        assert_eq!(PrimeField::new(3).rank(&m), 1);
        assert_eq!(PrimeField::new(5).rank(&m), 2);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = PrimeField::new(3);
        let a = vec![vec![1, 2, 0, 1], vec![0, 1, 1, 2]];
        let k = f.kernel(&a, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(f.apply(&a, v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn solve_and_extend() {
        let f = PrimeField::new(5);
        let basis = vec![vec![1, 0, 1], vec![0, 1, 1]];
        assert_eq!(f.solve(&basis, &[2, 3, 0]), Some(vec![2, 3]));
        assert_eq!(f.solve(&basis, &[0, 0, 1]), None);
        let ext = f.extend(&basis, &[vec![1, 1, 2], vec![0, 0, 1]]);
        assert_eq!(ext, vec![vec![0, 0, 1]]);
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(7) && is_prime(101));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(0));
    }
}
