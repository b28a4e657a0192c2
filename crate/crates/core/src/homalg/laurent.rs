//! Integer Laurent polynomials and the `(1+t)`-partial order.

use std::collections::BTreeMap;
use std::fmt;

use super::complex::HomologySummary;
use crate::scalar::Scalar;
use crate::LaurentPoly;

/// Finitely supported `sum c_d t^d` with `d` possibly negative. Zero coefficients are not stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent<T: Scalar> {
    coefficients: BTreeMap<i64, T>,
}

impl<T: Scalar> Laurent<T> {
    pub fn zero() -> Self {
        Self { coefficients: BTreeMap::new() }
    }

    pub fn monomial(degree: i64, c: T) -> Self {
        let mut p = Self::zero();
        p.set(degree, c);
        p
    }

    /// `coeffs[k]` is the coefficient of `t^(lowest + k)`.
    pub fn from_coefficients(lowest: i64, coeffs: &[i64]) -> Self {
        let mut p = Self::zero();
        for (k, &c) in coeffs.iter().enumerate() {
            p.set(lowest + k as i64, T::from_int(c));
        }
        p
    }

    pub fn coefficient(&self, degree: i64) -> T {
        self.coefficients.get(&degree).cloned().unwrap_or_else(T::zero)
    }

    pub fn set(&mut self, degree: i64, c: T) {
        if c.is_zero() {
            self.coefficients.remove(&degree);
        } else {
            self.coefficients.insert(degree, c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn low_degree(&self) -> Option<i64> {
        self.coefficients.keys().next().copied()
    }

    pub fn high_degree(&self) -> Option<i64> {
        self.coefficients.keys().next_back().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &T)> {
        self.coefficients.iter().map(|(&d, c)| (d, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&d, c) in &other.coefficients {
            out.set(d, out.coefficient(d) + c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&d, c) in &other.coefficients {
            out.set(d, out.coefficient(d) - c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&a, x) in &self.coefficients {
            for (&b, y) in &other.coefficients {
                out.set(a + b, out.coefficient(a + b) + x.clone() * y.clone());
            }
        }
        out
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { coefficients: self.coefficients.iter().map(|(&d, c)| (d + k, c.clone())).collect() }
    }

    pub fn evaluate_at_minus_one(&self) -> T {
        self.coefficients.iter().fold(
            T::zero(),
            |acc, (&d, c)| {
                if d.rem_euclid(2) == 0 {
                    acc + c.clone()
                } else {
                    acc - c.clone()
                }
            },
        )
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.coefficients.values().all(|c| !c.is_negative())
    }

    /// Coefficientwise `self <= other`.
    pub fn coefficientwise_le(&self, other: &Self) -> bool {
        other.sub(self).has_nonnegative_coefficients()
    }

    /// Terms of degree at most `cutoff`.
    pub fn truncated(&self, cutoff: i64) -> Self {
        Self { coefficients: self.coefficients.range(..=cutoff).map(|(&d, c)| (d, c.clone())).collect() }
    }
}

impl<T: Scalar> fmt::Display for Laurent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (&d, c)) in self.coefficients.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let show_coeff = !mag.is_one() || d == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match d {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{d}")?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Debug for Laurent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

/// Outcome of comparing two polynomials in the `(1+t)`-order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preceq<T: Scalar> {
    /// `q - p = (1+t) witness` with a nonnegative witness.
    Holds { witness: Laurent<T> },
    /// The recursion produced a negative coefficient at this degree.
    Fails { degree: i64 },
}

impl<T: Scalar> Preceq<T> {
    pub fn holds(&self) -> bool {
        matches!(self, Self::Holds { .. })
    }
}

/// Decides `p ⪯ q`, i.e. `q = p + (1+t) A` for some `A` with nonnegative coefficients.
///
/// `A` is forced degree by degree from the bottom of `r = q - p`:
/// `A_d = r_d - A_{d-1}`. It must vanish above the top of `r`, otherwise the
/// alternating tail turns negative one degree later.
pub fn preceq<T: Scalar>(p: &Laurent<T>, q: &Laurent<T>) -> Preceq<T> {
    let r = q.sub(p);
    let (Some(lo), Some(hi)) = (r.low_degree(), r.high_degree()) else {
        return Preceq::Holds { witness: Laurent::zero() };
    };
    let mut witness = Laurent::zero();
    let mut prev = T::zero();
    for d in lo..=hi + 1 {
        let a = r.coefficient(d) - prev;
        if a.is_negative() {
            return Preceq::Fails { degree: d };
        }
        witness.set(d, a.clone());
        prev = a;
    }
    debug_assert!(prev.is_zero());
    Preceq::Holds { witness }
}

/// Poincaré polynomial `sum rk(H_n) t^n` of a homology summary.
pub fn dim_t(h: &HomologySummary) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for (&n, &r) in &h.free_rank {
        p.set(n, (r as i64).into());
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::complex::CoefficientRing;

    type P = Laurent<i64>;

    #[test]
    fn display() {
        assert_eq!(P::from_coefficients(0, &[1, 2, 1]).to_string(), "1 + 2t + t^2");
        assert_eq!(P::from_coefficients(-2, &[1, 0, -3]).to_string(), "t^-2 - 3");
        assert_eq!(P::zero().to_string(), "0");
    }

    #[test]
    fn reflexive_case() {
        let p = P::from_coefficients(0, &[1, 2, 1]);
        assert_eq!(preceq(&p, &p), Preceq::Holds { witness: P::zero() });
    }

    #[test]
    fn sphere_witness_is_t() {
        let p = P::from_coefficients(0, &[1, 0, 1]);
        let q = P::from_coefficients(0, &[1, 1, 2]);
        assert_eq!(preceq(&p, &q), Preceq::Holds { witness: P::monomial(1, 1) });
    }

    #[test]
    fn missing_odd_class_fails_at_degree_three() {
        // A_2 = 1 forces A_3 = -1
        let p = P::from_coefficients(0, &[1]);
        let q = P::from_coefficients(0, &[1, 0, 1]);
        assert_eq!(preceq(&p, &q), Preceq::Fails { degree: 3 });
    }

    #[test]
    fn negative_difference_fails_immediately() {
        let p = P::from_coefficients(0, &[2]);
        let q = P::from_coefficients(0, &[1, 1]);
        assert_eq!(preceq(&p, &q), Preceq::Fails { degree: 0 });
    }

    #[test]
    fn poincare_polynomial_of_torus() {
        let h = HomologySummary::from_ranks(CoefficientRing::Integers, &[(0, 1), (1, 2), (2, 1)]);
        assert_eq!(dim_t(&h), LaurentPoly::from_coefficients(0, &[1, 2, 1]));
        assert!(dim_t(&HomologySummary::empty(CoefficientRing::Integers)).is_zero());
    }

    #[test]
    fn witness_reconstructs_difference() {
        let p = P::from_coefficients(-1, &[1, 0, 1]);
        let q = P::from_coefficients(-1, &[2, 1, 3, 2]);
        match preceq(&p, &q) {
            Preceq::Holds { witness } => {
                let one_plus_t = P::from_coefficients(0, &[1, 1]);
                assert_eq!(p.add(&one_plus_t.mul(&witness)), q);
                assert!(witness.has_nonnegative_coefficients());
            }
            other => panic!("expected success, got {other:?}"),
        }
    }
}
