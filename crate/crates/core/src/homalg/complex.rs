//! Bounded chain complexes, chain maps and homology over `Z` or `F_p`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::modp::{is_prime, PrimeField};
use super::snf::{integer_kernel, smith_normal_form};
use crate::error::{Error, Result};
use crate::{Int, IntegerMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoefficientRing {
    Integers,
    PrimeField(u64),
}

impl CoefficientRing {
    pub fn prime_field(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Self::PrimeField(p))
        } else {
            Err(Error::UnsupportedRing(format!("{p} is not prime")))
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, Self::PrimeField(_))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Self::Integers => 0,
            Self::PrimeField(p) => *p,
        }
    }

    pub(crate) fn field(&self) -> Option<PrimeField> {
        match self {
            Self::Integers => None,
            Self::PrimeField(p) => Some(PrimeField::new(*p)),
        }
    }

    /// Rank over the ring; over `Z` this is the rank over `Q`.
    pub fn rank(&self, m: &IntegerMatrix) -> usize {
        match self.field() {
            None => smith_normal_form(m).rank,
            Some(f) => f.rank(m),
        }
    }

    pub fn is_zero(&self, m: &IntegerMatrix) -> bool {
        match self {
            Self::Integers => m.is_zero(),
            Self::PrimeField(p) => m.reduce_mod(*p).is_zero(),
        }
    }

    /// Kernel basis as columns. Over `F_p` entries are residues in `[0, p)`.
    pub fn kernel(&self, m: &IntegerMatrix) -> IntegerMatrix {
        match self.field() {
            None => integer_kernel(m),
            Some(f) => {
                let basis = f.kernel(&f.dense(m), m.cols());
                let cols: Vec<Vec<Int>> = basis.into_iter().map(|v| v.into_iter().map(Int::from).collect()).collect();
                IntegerMatrix::from_columns(m.cols(), &cols)
            }
        }
    }

    /// Canonical representative of a matrix over the ring.
    pub fn normalize(&self, m: &IntegerMatrix) -> IntegerMatrix {
        match self {
            Self::Integers => m.clone(),
            Self::PrimeField(p) => m.reduce_mod(*p),
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Integers => write!(f, "Z"),
            Self::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl std::str::FromStr for CoefficientRing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Z" {
            return Ok(Self::Integers);
        }
        let digits = s
            .strip_prefix("Fp:")
            .or_else(|| s.strip_prefix('F'))
            .ok_or_else(|| Error::UnsupportedRing(format!("unknown ring `{s}`")))?;
        let p: u64 = digits.parse().map_err(|_| Error::UnsupportedRing(format!("unknown ring `{s}`")))?;
        Self::prime_field(p)
    }
}

/// A bounded chain complex of finitely generated free modules.
///
/// `differentials[k]` is the boundary map out of degree `min_degree + k + 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedChainComplex {
    ring: CoefficientRing,
    min_degree: i64,
    ranks: Vec<usize>,
    differentials: Vec<IntegerMatrix>,
}

impl GradedChainComplex {
    /// Checks shapes and that consecutive differentials compose to zero.
    pub fn new(
        ring: CoefficientRing,
        min_degree: i64,
        ranks: Vec<usize>,
        differentials: Vec<IntegerMatrix>,
    ) -> Result<Self> {
        let c = Self::new_unchecked(ring, min_degree, ranks, differentials)?;
        c.check_square_zero()?;
        Ok(c)
    }

    /// Shape checks only; `d∘d` is not verified.
    pub(crate) fn new_unchecked(
        ring: CoefficientRing,
        min_degree: i64,
        ranks: Vec<usize>,
        mut differentials: Vec<IntegerMatrix>,
    ) -> Result<Self> {
        let expected = ranks.len().saturating_sub(1);
        if differentials.len() > expected {
            return Err(Error::ShapeMismatch(format!(
                "{} differentials for {} nonempty degrees",
                differentials.len(),
                ranks.len()
            )));
        }
        while differentials.len() < expected {
            let k = differentials.len();
            differentials.push(IntegerMatrix::zeros(ranks[k], ranks[k + 1]));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.shape() != (ranks[k], ranks[k + 1]) {
                return Err(Error::ShapeMismatch(format!(
                    "differential out of degree {} is {}x{}, expected {}x{}",
                    min_degree + k as i64 + 1,
                    d.rows(),
                    d.cols(),
                    ranks[k],
                    ranks[k + 1]
                )));
            }
        }
        let differentials = differentials.iter().map(|d| ring.normalize(d)).collect();
        Ok(Self { ring, min_degree, ranks, differentials }.trimmed())
    }

    /// Builds from sparse degree maps; missing differentials are zero.
    pub fn from_degree_maps(
        ring: CoefficientRing,
        ranks: &BTreeMap<i64, usize>,
        differentials: &BTreeMap<i64, IntegerMatrix>,
    ) -> Result<Self> {
        let nonzero: Vec<i64> = ranks.iter().filter(|(_, &r)| r > 0).map(|(&n, _)| n).collect();
        let (Some(&lo), Some(&hi)) = (nonzero.first(), nonzero.last()) else {
            return Ok(Self::zero(ring));
        };
        let rank_vec: Vec<usize> = (lo..=hi).map(|n| ranks.get(&n).copied().unwrap_or(0)).collect();
        let mut diffs = Vec::new();
        for n in lo + 1..=hi {
            let shape = (rank_vec[(n - 1 - lo) as usize], rank_vec[(n - lo) as usize]);
            match differentials.get(&n) {
                Some(d) => diffs.push(d.clone()),
                None => diffs.push(IntegerMatrix::zeros(shape.0, shape.1)),
            }
        }
        for (n, d) in differentials {
            if (*n <= lo || *n > hi) && !d.is_zero() {
                return Err(Error::ShapeMismatch(format!("nonzero differential out of empty degree {n}")));
            }
        }
        Self::new(ring, lo, rank_vec, diffs)
    }

    pub fn zero(ring: CoefficientRing) -> Self {
        Self { ring, min_degree: 0, ranks: Vec::new(), differentials: Vec::new() }
    }

    /// Complex with the given ranks and all differentials zero.
    pub fn with_zero_differentials(ring: CoefficientRing, min_degree: i64, ranks: Vec<usize>) -> Self {
        Self::new_unchecked(ring, min_degree, ranks, Vec::new()).expect("zero differentials always fit")
    }

    fn trimmed(mut self) -> Self {
        while self.ranks.last() == Some(&0) {
            self.ranks.pop();
            self.differentials.pop();
        }
        while self.ranks.first() == Some(&0) {
            self.ranks.remove(0);
            if !self.differentials.is_empty() {
                self.differentials.remove(0);
            }
            self.min_degree += 1;
        }
        if self.ranks.is_empty() {
            self.min_degree = 0;
            self.differentials.clear();
        }
        self
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Lowest nonzero degree, `None` for the zero complex.
    pub fn min_degree(&self) -> Option<i64> {
        (!self.is_empty()).then_some(self.min_degree)
    }

    pub fn max_degree(&self) -> Option<i64> {
        (!self.is_empty()).then(|| self.min_degree + self.ranks.len() as i64 - 1)
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        match (self.min_degree(), self.max_degree()) {
            (Some(lo), Some(hi)) => lo..=hi,
            #[allow(clippy::reversed_empty_ranges)]
            _ => 1..=0,
        }
    }

    pub fn rank(&self, n: i64) -> usize {
        if self.is_empty() || n < self.min_degree {
            return 0;
        }
        self.ranks.get((n - self.min_degree) as usize).copied().unwrap_or(0)
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// Boundary map `C_n -> C_{n-1}`, zero (with the right shape) outside the support.
    pub fn differential(&self, n: i64) -> IntegerMatrix {
        let k = n - self.min_degree - 1;
        if !self.is_empty() && k >= 0 && (k as usize) < self.differentials.len() {
            self.differentials[k as usize].clone()
        } else {
            IntegerMatrix::zeros(self.rank(n - 1), self.rank(n))
        }
    }

    /// First degree where `d_{n-1} d_n` is nonzero, with a column witnessing it.
    pub fn square_zero_failure(&self) -> Option<(i64, usize)> {
        for n in self.degrees() {
            let sq = self.ring.normalize(&self.differential(n - 1).mul(&self.differential(n)));
            if let Some((_, col, _)) = sq.iter().min_by_key(|(i, j, _)| (*j, *i)) {
                return Some((n, col));
            }
        }
        None
    }

    fn check_square_zero(&self) -> Result<()> {
        match self.square_zero_failure() {
            None => Ok(()),
            Some((n, col)) => {
                Err(Error::InvariantViolation(format!("d∘d is nonzero on generator {col} of degree {n}")))
            }
        }
    }

    /// Degrees moved up by `k`; the differential is unchanged.
    pub fn shifted(&self, k: i64) -> Self {
        let mut out = self.clone();
        if !out.is_empty() {
            out.min_degree += k;
        }
        out
    }

    pub fn with_negated_differential(&self) -> Self {
        let mut out = self.clone();
        out.differentials = out.differentials.iter().map(|d| self.ring.normalize(&d.neg())).collect();
        out
    }

    /// Same data interpreted over another ring.
    pub fn with_ring(&self, ring: CoefficientRing) -> Result<Self> {
        Self::new(ring, self.min_degree, self.ranks.clone(), self.differentials.clone())
    }

    /// The cochain complex reindexed by `n -> top - n`, with transposed differentials.
    pub fn dual_reindexed(&self, top: i64) -> Self {
        if self.is_empty() {
            return self.clone();
        }
        let hi = self.max_degree().unwrap();
        let ranks: Vec<usize> = self.ranks.iter().rev().copied().collect();
        let differentials: Vec<IntegerMatrix> = self.differentials.iter().rev().map(|d| d.transpose()).collect();
        Self { ring: self.ring, min_degree: top - hi, ranks, differentials }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|n| if n.rem_euclid(2) == 0 { self.rank(n) as i64 } else { -(self.rank(n) as i64) }).sum()
    }

    /// Direct sum; generators of `self` come first in every degree.
    pub fn direct_sum(&self, other: &Self) -> Self {
        assert_eq!(self.ring, other.ring, "ring mismatch in direct sum");
        let mut ranks = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        let lo = self.degrees().start().min(other.degrees().start()).to_owned();
        let hi = self.degrees().end().max(other.degrees().end()).to_owned();
        for n in lo..=hi {
            ranks.insert(n, self.rank(n) + other.rank(n));
        }
        for n in lo..=hi {
            let mut d = IntegerMatrix::zeros(self.rank(n - 1) + other.rank(n - 1), self.rank(n) + other.rank(n));
            d.add_block(0, 0, &self.differential(n));
            d.add_block(self.rank(n - 1), self.rank(n), &other.differential(n));
            diffs.insert(n, d);
        }
        Self::from_degree_maps(self.ring, &ranks, &diffs).expect("direct sum of complexes is a complex")
    }
}

impl fmt::Debug for GradedChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedChainComplex")
            .field("ring", &self.ring)
            .field("min_degree", &self.min_degree)
            .field("ranks", &self.ranks)
            .field("differentials", &self.differentials)
            .finish()
    }
}

/// Free ranks and torsion coefficients of homology, degree by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologySummary {
    pub ring: CoefficientRing,
    /// Nonzero free ranks (dimensions over a field).
    pub free_rank: BTreeMap<i64, usize>,
    /// Invariant factors greater than one, in divisibility order. Empty over fields.
    pub torsion: BTreeMap<i64, Vec<BigInt>>,
}

impl HomologySummary {
    pub fn empty(ring: CoefficientRing) -> Self {
        Self { ring, free_rank: BTreeMap::new(), torsion: BTreeMap::new() }
    }

    pub fn from_ranks(ring: CoefficientRing, ranks: &[(i64, usize)]) -> Self {
        let mut h = Self::empty(ring);
        for &(n, r) in ranks {
            if r > 0 {
                h.free_rank.insert(n, r);
            }
        }
        h
    }

    pub fn rank(&self, n: i64) -> usize {
        self.free_rank.get(&n).copied().unwrap_or(0)
    }

    pub fn torsion_at(&self, n: i64) -> &[BigInt] {
        self.torsion.get(&n).map_or(&[], |v| v.as_slice())
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank.is_empty() && self.torsion.is_empty()
    }

    /// All degrees carrying free or torsion classes.
    pub fn support(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.free_rank.keys().chain(self.torsion.keys()).copied().collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.free_rank.iter().map(|(&n, &r)| if n.rem_euclid(2) == 0 { r as i64 } else { -(r as i64) }).sum()
    }

    /// Same groups with every degree moved up by `k`.
    pub fn shifted(&self, k: i64) -> Self {
        Self {
            ring: self.ring,
            free_rank: self.free_rank.iter().map(|(&n, &r)| (n + k, r)).collect(),
            torsion: self.torsion.iter().map(|(&n, t)| (n + k, t.clone())).collect(),
        }
    }
}

impl fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ring {}", self.ring)?;
        writeln!(f, "{:>6}  {:>5}  torsion", "degree", "rank")?;
        for n in self.support() {
            let tors: Vec<String> = self.torsion_at(n).iter().map(|t| format!("Z/{t}")).collect();
            let tors = if tors.is_empty() { "-".to_string() } else { tors.join(" + ") };
            writeln!(f, "{:>6}  {:>5}  {}", n, self.rank(n), tors)?;
        }
        Ok(())
    }
}

/// Homology over the complex's ring.
///
/// Over `Z` the free rank in degree `n` is `rank C_n - rank d_n - rank d_{n+1}` and the
/// torsion is read from the invariant factors of `d_{n+1}`; over `F_p` ranks come from
/// Gaussian elimination.
pub fn homology(c: &GradedChainComplex) -> Result<HomologySummary> {
    c.check_square_zero()?;
    let ring = c.ring();
    let mut out = HomologySummary::empty(ring);
    let mut boundary_rank: BTreeMap<i64, usize> = BTreeMap::new();
    let mut invariants: BTreeMap<i64, Vec<BigInt>> = BTreeMap::new();
    let lo = *c.degrees().start();
    let hi = *c.degrees().end();
    for n in lo..=hi + 1 {
        let d = c.differential(n);
        match ring {
            CoefficientRing::Integers => {
                let snf = smith_normal_form(&d);
                boundary_rank.insert(n, snf.rank);
                invariants.insert(n, snf.diagonal.into_iter().filter(|x| !x.is_one()).collect());
            }
            CoefficientRing::PrimeField(_) => {
                boundary_rank.insert(n, ring.rank(&d));
            }
        }
    }
    for n in lo..=hi {
        let into = boundary_rank[&(n + 1)];
        let outof = boundary_rank[&n];
        let free = c.rank(n) as i64 - into as i64 - outof as i64;
        if free < 0 || outof > c.rank(n).min(c.rank(n - 1)) {
            return Err(Error::InvariantViolation(format!(
                "rank-nullity audit failed in degree {n}: rank {} with boundary ranks {outof} out, {into} in",
                c.rank(n)
            )));
        }
        if free > 0 {
            out.free_rank.insert(n, free as usize);
        }
        if let Some(t) = invariants.get(&(n + 1)) {
            if t.len() > into {
                return Err(Error::InvariantViolation(format!("torsion count exceeds boundary rank in degree {n}")));
            }
            if !t.is_empty() {
                debug_assert!(t.iter().all(|x| x.is_positive()));
                out.torsion.insert(n, t.clone());
            }
        }
    }
    Ok(out)
}

/// Rank of the map induced on degree-`n` homology by `f_n: A_n -> B_n`.
///
/// Over `Z` this is the rank after tensoring with `Q`.
pub fn induced_rank(
    ring: CoefficientRing,
    f_n: &IntegerMatrix,
    source_d_n: &IntegerMatrix,
    target_d_next: &IntegerMatrix,
) -> usize {
    let cycles = ring.kernel(source_d_n);
    let images = f_n.mul(&cycles);
    let stacked = images.hstack(target_d_next);
    ring.rank(&stacked) - ring.rank(target_d_next)
}

/// A degree-preserving chain map between complexes over the same ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: GradedChainComplex,
    target: GradedChainComplex,
    components: BTreeMap<i64, IntegerMatrix>,
}

impl ChainMap {
    /// Validates shapes and `d f = f d`.
    pub fn new(
        source: GradedChainComplex,
        target: GradedChainComplex,
        components: BTreeMap<i64, IntegerMatrix>,
    ) -> Result<Self> {
        let m = Self::new_unchecked(source, target, components)?;
        if let Some((n, col)) = m.chain_condition_failure() {
            return Err(Error::ChainMapViolation(format!("d f != f d on source generator {col} of degree {n}")));
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        source: GradedChainComplex,
        target: GradedChainComplex,
        mut components: BTreeMap<i64, IntegerMatrix>,
    ) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::ShapeMismatch("chain map between complexes over different rings".into()));
        }
        let ring = source.ring();
        for (&n, f) in &components {
            if f.shape() != (target.rank(n), source.rank(n)) {
                return Err(Error::ShapeMismatch(format!(
                    "component in degree {n} is {}x{}, expected {}x{}",
                    f.rows(),
                    f.cols(),
                    target.rank(n),
                    source.rank(n)
                )));
            }
        }
        components.retain(|_, f| !ring.is_zero(f));
        for f in components.values_mut() {
            *f = ring.normalize(f);
        }
        Ok(Self { source, target, components })
    }

    pub fn identity(c: &GradedChainComplex) -> Self {
        let components = c.degrees().map(|n| (n, IntegerMatrix::identity(c.rank(n)))).collect();
        Self::new_unchecked(c.clone(), c.clone(), components).expect("identity is well shaped")
    }

    pub fn zero(source: &GradedChainComplex, target: &GradedChainComplex) -> Self {
        Self::new_unchecked(source.clone(), target.clone(), BTreeMap::new()).expect("zero map is well shaped")
    }

    pub fn source(&self) -> &GradedChainComplex {
        &self.source
    }

    pub fn target(&self) -> &GradedChainComplex {
        &self.target
    }

    pub fn component(&self, n: i64) -> IntegerMatrix {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| IntegerMatrix::zeros(self.target.rank(n), self.source.rank(n)))
    }

    pub fn ring(&self) -> CoefficientRing {
        self.source.ring()
    }

    fn degree_span(&self) -> std::ops::RangeInclusive<i64> {
        let lo = self.source.degrees().start().to_owned().min(*self.target.degrees().start());
        let hi = self.source.degrees().end().to_owned().max(*self.target.degrees().end());
        lo..=hi + 1
    }

    /// First `(degree, source column)` where `d f - f d` is nonzero.
    pub fn chain_condition_failure(&self) -> Option<(i64, usize)> {
        let ring = self.ring();
        for n in self.source.degrees() {
            let lhs = self.target.differential(n).mul(&self.component(n));
            let rhs = self.component(n - 1).mul(&self.source.differential(n));
            let diff = ring.normalize(&lhs.sub(&rhs));
            if let Some((_, col, _)) = diff.iter().min_by_key(|(i, j, _)| (*j, *i)) {
                return Some((n, col));
            }
        }
        None
    }

    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap> {
        if first.target != self.source {
            return Err(Error::ShapeMismatch("composition of non-composable chain maps".into()));
        }
        let mut components = BTreeMap::new();
        for n in first.source.degrees() {
            components.insert(n, self.component(n).mul(&first.component(n)));
        }
        Self::new_unchecked(first.source.clone(), self.target.clone(), components)
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ShapeMismatch("difference of maps with different endpoints".into()));
        }
        let mut components = BTreeMap::new();
        for n in self.source.degrees() {
            components.insert(n, self.component(n).sub(&other.component(n)));
        }
        Self::new_unchecked(self.source.clone(), self.target.clone(), components)
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Mapping cone: `Cone_n = B_n ⊕ A_{n-1}` with differential `[[d_B, f], [0, -d_A]]`.
    pub fn cone(&self) -> GradedChainComplex {
        let (a, b) = (&self.source, &self.target);
        let mut ranks = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for n in self.degree_span() {
            ranks.insert(n, b.rank(n) + a.rank(n - 1));
            let mut d = IntegerMatrix::zeros(b.rank(n - 1) + a.rank(n - 2), b.rank(n) + a.rank(n - 1));
            d.add_block(0, 0, &b.differential(n));
            d.add_block(0, b.rank(n), &self.component(n - 1));
            d.add_block(b.rank(n - 1), b.rank(n), &a.differential(n - 1).neg());
            diffs.insert(n, d);
        }
        GradedChainComplex::from_degree_maps(self.ring(), &ranks, &diffs).expect("cone of a chain map is a complex")
    }

    /// Ranks of the induced maps on homology (over `Q` when the ring is `Z`).
    pub fn induced_ranks(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for n in self.source.degrees() {
            let r = induced_rank(
                self.ring(),
                &self.component(n),
                &self.source.differential(n),
                &self.target.differential(n + 1),
            );
            if r > 0 {
                out.insert(n, r);
            }
        }
        out
    }

    pub fn is_quasi_isomorphism(&self) -> Result<bool> {
        Ok(homology(&self.cone())?.is_zero())
    }

    /// Every component is square and invertible over the ring.
    pub fn is_isomorphism(&self) -> bool {
        let ring = self.ring();
        self.degree_span().all(|n| {
            let f = self.component(n);
            if f.rows() != f.cols() {
                return false;
            }
            match ring {
                CoefficientRing::Integers => {
                    let snf = smith_normal_form(&f);
                    snf.rank == f.rows() && snf.diagonal.iter().all(|d| d.is_one())
                }
                CoefficientRing::PrimeField(_) => ring.rank(&f) == f.rows(),
            }
        })
    }
}

/// `d H + H d` where `H` raises degree by one, given as `n -> (B_{n+1} x A_n)` blocks.
pub fn homotopy_boundary(
    source: &GradedChainComplex,
    target: &GradedChainComplex,
    h: &BTreeMap<i64, IntegerMatrix>,
) -> BTreeMap<i64, IntegerMatrix> {
    let get = |n: i64| h.get(&n).cloned().unwrap_or_else(|| IntegerMatrix::zeros(target.rank(n + 1), source.rank(n)));
    source
        .degrees()
        .map(|n| {
            let a = target.differential(n + 1).mul(&get(n));
            let b = get(n - 1).mul(&source.differential(n));
            (n, a.add(&b))
        })
        .collect()
}
