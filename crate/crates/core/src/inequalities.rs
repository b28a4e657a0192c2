//! Morse–Bott inequalities for realized flow categories.
//!
//! The left side is the Poincaré polynomial of the realization, the right side
//! the sum over objects of `t^r dim_t H(X)`. The strong form compares them in
//! the `(1+t)`-order, the weak form coefficientwise.

use std::fmt;

use crate::error::{Error, Result};
use crate::fixtures::{borel_product, BorelSpec};
use crate::flowcat::{realize, FlowCategoryData};
use crate::homalg::{dim_t, homology, preceq, Preceq};
use crate::LaurentPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InequalityMode {
    /// Coefficientwise `lhs <= rhs`.
    RankBound,
    /// `lhs ⪯ rhs` in the `(1+t)`-order.
    PartialOrder,
    /// Coefficientwise up to a cutoff degree, for truncated Borel models.
    Equivariant { cutoff: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityReport {
    pub mode: InequalityMode,
    pub lhs: LaurentPoly,
    pub rhs: LaurentPoly,
    pub holds: bool,
    /// `A` with `rhs - lhs = (1+t) A`, in partial-order mode when the inequality holds.
    pub witness: Option<LaurentPoly>,
    /// Lowest degree where the comparison breaks.
    pub failure_degree: Option<i64>,
}

impl InequalityReport {
    /// Both sides agree.
    pub fn is_equality(&self) -> bool {
        self.lhs == self.rhs
    }

    /// Degrees where the bound is strict.
    pub fn strict_degrees(&self) -> Vec<i64> {
        self.rhs.sub(&self.lhs).terms().filter(|(_, c)| c.sign() == num_bigint::Sign::Plus).map(|(d, _)| d).collect()
    }
}

impl fmt::Display for InequalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.mode {
            InequalityMode::RankBound => "rank bound".to_string(),
            InequalityMode::PartialOrder => "(1+t)-order".to_string(),
            InequalityMode::Equivariant { cutoff } => format!("equivariant, degrees <= {cutoff}"),
        };
        writeln!(f, "mode: {mode}")?;
        writeln!(f, "lhs: {}", self.lhs)?;
        writeln!(f, "rhs: {}", self.rhs)?;
        writeln!(f, "holds: {}", if self.holds { "yes" } else { "no" })?;
        if let Some(w) = &self.witness {
            writeln!(f, "witness: {w}")?;
        }
        if let Some(d) = self.failure_degree {
            writeln!(f, "fails at degree: {d}")?;
        }
        Ok(())
    }
}

/// `(dim_t H(Tot), Σ_X t^r dim_t H(X))`.
fn sides(f: &FlowCategoryData) -> Result<(LaurentPoly, LaurentPoly)> {
    let lhs = dim_t(&homology(&realize(f)?.totalize()?)?);
    let mut rhs = LaurentPoly::zero();
    for o in &f.objects {
        rhs = rhs.add(&dim_t(&homology(&o.chain)?).shift(o.framing_rank));
    }
    Ok((lhs, rhs))
}

fn first_excess(lhs: &LaurentPoly, rhs: &LaurentPoly) -> Option<i64> {
    rhs.sub(lhs).terms().find(|(_, c)| c.sign() == num_bigint::Sign::Minus).map(|(d, _)| d)
}

/// The strong inequality `dim_t H(Tot) ⪯ Σ t^r dim_t H(X)`.
pub fn mb_inequality(f: &FlowCategoryData) -> Result<InequalityReport> {
    let (lhs, rhs) = sides(f)?;
    let report = match preceq(&lhs, &rhs) {
        Preceq::Holds { witness } => InequalityReport {
            mode: InequalityMode::PartialOrder,
            holds: true,
            witness: Some(witness),
            failure_degree: None,
            lhs,
            rhs,
        },
        Preceq::Fails { degree } => InequalityReport {
            mode: InequalityMode::PartialOrder,
            holds: false,
            witness: None,
            failure_degree: Some(degree),
            lhs,
            rhs,
        },
    };
    if report.holds && !report.lhs.coefficientwise_le(&report.rhs) {
        return Err(Error::InvariantViolation("(1+t)-order holds but the rank bound does not".into()));
    }
    Ok(report)
}

/// The weak inequality, degree by degree.
pub fn rank_bound(f: &FlowCategoryData) -> Result<InequalityReport> {
    let (lhs, rhs) = sides(f)?;
    let failure_degree = first_excess(&lhs, &rhs);
    Ok(InequalityReport {
        mode: InequalityMode::RankBound,
        holds: failure_degree.is_none(),
        witness: None,
        failure_degree,
        lhs,
        rhs,
    })
}

/// Ranks of the Borel model against `Σ_k Σ_X t^{2k + r_X} dim_t H(X)`, both truncated at `cutoff`.
///
/// The truncated model only sees equivariant homology below degree `2N`, so
/// the cutoff may not exceed `2N - 1`.
pub fn equivariant_inequality(spec: &BorelSpec, cutoff: i64) -> Result<InequalityReport> {
    let max = 2 * spec.levels as i64 - 1;
    if cutoff > max {
        return Err(Error::CutoffBeyondStabilityRange { cutoff, max });
    }
    let (lhs, rhs) = sides(&borel_product(spec)?)?;
    let (lhs, rhs) = (lhs.truncated(cutoff), rhs.truncated(cutoff));
    let failure_degree = first_excess(&lhs, &rhs);
    Ok(InequalityReport {
        mode: InequalityMode::Equivariant { cutoff },
        holds: failure_degree.is_none(),
        witness: None,
        failure_degree,
        lhs,
        rhs,
    })
}
