//! Flow categories as chain-level data, and their realization as twisted complexes.
//!
//! Each object carries an index `μ`, a framing rank `r` and a cellular chain
//! complex `C(X)`. A correspondence `X -> Y` requires `μ(X) > μ(Y)` and is a
//! family of blocks `C(X)_m -> C(Y)_{m + r_X - r_Y - 1}`. Realization places
//! `C(X)` in the piece of index `μ(X)`, shifted by `r - μ`, so a generator of
//! `C(X)_m` lands in total degree `m + r`.

mod bimodule;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::homalg::{les_audit, CoefficientRing, GradedChainComplex, LesAudit};
use crate::twisted::{BlockFamily, Diagnostic, Generator, TwistedComplex};
use crate::IntegerMatrix;

pub use bimodule::{
    bimodule_to_map, cone_category, relative_map, BimoduleBlock, BimoduleData, RelativeMap, RelativeModuleData,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowObject {
    pub name: String,
    pub index: i64,
    pub framing_rank: i64,
    pub chain: GradedChainComplex,
    /// Whether the Thom twist by the framing is orientable over `Z`.
    pub orientable: bool,
}

impl FlowObject {
    pub fn new(name: impl Into<String>, index: i64, framing_rank: i64, chain: GradedChainComplex) -> Self {
        Self { name: name.into(), index, framing_rank, chain, orientable: true }
    }

    pub fn non_orientable(mut self) -> Self {
        self.orientable = false;
        self
    }

    /// Top cell dimension of the object's chain model, zero if empty.
    pub fn dimension(&self) -> i64 {
        self.chain.max_degree().unwrap_or(0)
    }

    fn piece_shift(&self) -> i64 {
        self.framing_rank - self.index
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceMap {
    pub from: String,
    pub to: String,
    /// Blocks keyed by the degree `m` of `C(from)`.
    pub blocks: BlockFamily,
}

impl CorrespondenceMap {
    pub fn new(from: impl Into<String>, to: impl Into<String>, blocks: BlockFamily) -> Self {
        Self { from: from.into(), to: to.into(), blocks }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowCategoryData {
    pub ring: CoefficientRing,
    pub objects: Vec<FlowObject>,
    pub correspondences: Vec<CorrespondenceMap>,
}

/// A problem found by [`validate_category`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlowDiagnostic {
    DuplicateName(String),
    UnknownObject(String),
    RingMismatch(String),
    NegativeDegrees(String),
    IndexNotDecreasing {
        from: String,
        to: String,
    },
    ShapeMismatch {
        from: String,
        to: String,
        degree: i64,
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// `D∘D` is nonzero on generator `local` of `C(object)_degree`.
    SquareNonzero {
        object: String,
        degree: i64,
        local: usize,
    },
}

impl fmt::Display for FlowDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DuplicateName(n) => write!(f, "object name {n} is used twice"),
            Self::UnknownObject(n) => write!(f, "correspondence refers to unknown object {n}"),
            Self::RingMismatch(n) => write!(f, "chain of {n} is over a different ring than the category"),
            Self::NegativeDegrees(n) => write!(f, "chain of {n} has cells in negative degree"),
            Self::IndexNotDecreasing { from, to } => {
                write!(f, "correspondence {from}->{to} does not decrease the index")
            }
            Self::ShapeMismatch { from, to, degree, expected, found } => write!(
                f,
                "correspondence {from}->{to} in degree {degree} is {}x{}, expected {}x{}",
                found.0, found.1, expected.0, expected.1
            ),
            Self::SquareNonzero { object, degree, local } => {
                write!(f, "D∘D is nonzero on generator {local} of {object} in degree {degree}")
            }
        }
    }
}

impl FlowCategoryData {
    pub fn new(ring: CoefficientRing) -> Self {
        Self { ring, objects: Vec::new(), correspondences: Vec::new() }
    }

    pub fn with_object(mut self, object: FlowObject) -> Self {
        self.objects.push(object);
        self
    }

    pub fn with_correspondence(mut self, c: CorrespondenceMap) -> Self {
        self.correspondences.push(c);
        self
    }

    /// Same data read over another ring; blocks are reduced on realization.
    pub fn with_ring(&self, ring: CoefficientRing) -> Result<Self> {
        let objects = self
            .objects
            .iter()
            .map(|o| Ok(FlowObject { chain: o.chain.with_ring(ring)?, ..o.clone() }))
            .collect::<Result<_>>()?;
        Ok(Self { ring, objects, correspondences: self.correspondences.clone() })
    }

    pub fn object(&self, name: &str) -> Option<&FlowObject> {
        self.objects.iter().find(|o| o.name == name)
    }

    fn require(&self, name: &str) -> Result<&FlowObject> {
        self.object(name).ok_or_else(|| Error::Validation(format!("unknown object {name}")))
    }

    /// Objects of index `i` in listing order.
    fn objects_at(&self, i: i64) -> impl Iterator<Item = &FlowObject> + '_ {
        self.objects.iter().filter(move |o| o.index == i)
    }

    /// Offset of `name` among the generators of piece `μ(name)` in piece degree `m`.
    fn offset_in_piece(&self, name: &str, m: i64) -> usize {
        let obj = self.object(name).expect("known object");
        self.objects_at(obj.index).take_while(|o| o.name != name).map(|o| o.chain.rank(m - o.piece_shift())).sum()
    }

    /// The object generator behind a generator of the realization, as `(object, degree, local)`.
    pub fn locate(&self, g: &Generator) -> Option<(&FlowObject, i64, usize)> {
        let mut local = g.local;
        for o in self.objects_at(g.piece) {
            let m = g.internal_degree - o.piece_shift();
            let r = o.chain.rank(m);
            if local < r {
                return Some((o, m, local));
            }
            local -= r;
        }
        None
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.objects
            .iter()
            .map(|o| if o.framing_rank.rem_euclid(2) == 0 { 1 } else { -1 } * o.chain.euler_characteristic())
            .sum()
    }

    fn structural_issues(&self) -> Vec<FlowDiagnostic> {
        let mut issues = Vec::new();
        let mut seen = BTreeSet::new();
        for o in &self.objects {
            if !seen.insert(o.name.as_str()) {
                issues.push(FlowDiagnostic::DuplicateName(o.name.clone()));
            }
            if o.chain.ring() != self.ring {
                issues.push(FlowDiagnostic::RingMismatch(o.name.clone()));
            }
            if o.chain.min_degree().is_some_and(|d| d < 0) {
                issues.push(FlowDiagnostic::NegativeDegrees(o.name.clone()));
            }
        }
        for c in &self.correspondences {
            let (Some(x), Some(y)) = (self.object(&c.from), self.object(&c.to)) else {
                let missing = if self.object(&c.from).is_none() { &c.from } else { &c.to };
                issues.push(FlowDiagnostic::UnknownObject(missing.clone()));
                continue;
            };
            if x.index <= y.index {
                issues.push(FlowDiagnostic::IndexNotDecreasing { from: c.from.clone(), to: c.to.clone() });
                continue;
            }
            for (&m, b) in &c.blocks {
                let expected = (y.chain.rank(m + x.framing_rank - y.framing_rank - 1), x.chain.rank(m));
                if b.shape() != expected {
                    issues.push(FlowDiagnostic::ShapeMismatch {
                        from: c.from.clone(),
                        to: c.to.clone(),
                        degree: m,
                        expected,
                        found: b.shape(),
                    });
                }
            }
        }
        issues
    }

    /// Twisted complex without the orientation check; assumes structural validity.
    fn assemble(&self) -> TwistedComplex {
        let indices: BTreeSet<i64> = self.objects.iter().map(|o| o.index).collect();
        let pieces: BTreeMap<i64, GradedChainComplex> = indices
            .iter()
            .map(|&i| {
                let piece = self.objects_at(i).fold(GradedChainComplex::zero(self.ring), |acc, o| {
                    acc.direct_sum(&o.chain.shifted(o.piece_shift()))
                });
                (i, piece)
            })
            .collect();
        let mut structure: BTreeMap<(i64, i64), BlockFamily> = BTreeMap::new();
        for c in &self.correspondences {
            let (x, y) = (self.object(&c.from).unwrap(), self.object(&c.to).unwrap());
            let (i, j) = (x.index, y.index);
            for (&m, b) in &c.blocks {
                if b.is_zero() {
                    continue;
                }
                // piece degree of the source generator, and of its image
                let pm = m + x.piece_shift();
                let pt = pm + i - j - 1;
                let fam = structure.entry((i, j)).or_default();
                let block =
                    fam.entry(pm).or_insert_with(|| IntegerMatrix::zeros(pieces[&j].rank(pt), pieces[&i].rank(pm)));
                block.add_block(self.offset_in_piece(&c.to, pt), self.offset_in_piece(&c.from, pm), b);
            }
        }
        TwistedComplex::new(self.ring, pieces, structure).expect("pieces share the ring and indices decrease")
    }

    fn orientation_check(&self) -> Result<()> {
        if self.ring.characteristic() == 2 {
            return Ok(());
        }
        match self.objects.iter().find(|o| !o.orientable && o.piece_shift() != 0) {
            Some(o) => Err(Error::OrientationRequired(format!(
                "object {} is not orientable and is shifted by {} over {}",
                o.name,
                o.piece_shift(),
                self.ring
            ))),
            None => Ok(()),
        }
    }

    fn subcategory(&self, keep: &BTreeSet<&str>) -> FlowCategoryData {
        FlowCategoryData {
            ring: self.ring,
            objects: self.objects.iter().filter(|o| keep.contains(o.name.as_str())).cloned().collect(),
            correspondences: self
                .correspondences
                .iter()
                .filter(|c| keep.contains(c.from.as_str()) && keep.contains(c.to.as_str()))
                .cloned()
                .collect(),
        }
    }
}

/// Index order, names, degree shapes and `D∘D = 0`. Problems are collected, never raised.
pub fn validate_category(f: &FlowCategoryData) -> Vec<FlowDiagnostic> {
    let issues = f.structural_issues();
    if !issues.is_empty() {
        return issues;
    }
    let t = f.assemble();
    t.validate()
        .issues
        .into_iter()
        .map(|d| match d {
            Diagnostic::SquareNonzero { generator, .. } => {
                let (o, degree, local) = f.locate(&generator).expect("generator belongs to an object");
                FlowDiagnostic::SquareNonzero { object: o.name.clone(), degree, local }
            }
            Diagnostic::ShapeMismatch { .. } => unreachable!("block shapes were checked per correspondence"),
        })
        .collect()
}

/// The twisted complex of a valid category.
pub fn realize(f: &FlowCategoryData) -> Result<TwistedComplex> {
    if let Some(issue) = validate_category(f).first() {
        return Err(Error::Validation(issue.to_string()));
    }
    f.orientation_check()?;
    Ok(f.assemble())
}

#[derive(Clone, Debug)]
pub struct CategorySplit {
    pub sub: FlowCategoryData,
    pub quotient: FlowCategoryData,
    pub audit: LesAudit,
}

/// Full subcategory on `subset` and the quotient on its complement.
///
/// Every correspondence out of the subset must land in it. The realizations
/// of both halves are checked against the sub- and quotient complexes of the
/// realization of `f`.
pub fn include_and_quotient(f: &FlowCategoryData, subset: &[&str]) -> Result<CategorySplit> {
    for name in subset {
        f.require(name)?;
    }
    let keep: BTreeSet<&str> = subset.iter().copied().collect();
    if let Some(c) = f.correspondences.iter().find(|c| keep.contains(c.from.as_str()) && !keep.contains(c.to.as_str()))
    {
        return Err(Error::NotDownwardClosed { from: c.from.clone(), to: c.to.clone() });
    }
    let rest: BTreeSet<&str> = f.objects.iter().map(|o| o.name.as_str()).filter(|n| !keep.contains(n)).collect();
    let sub = f.subcategory(&keep);
    let quotient = f.subcategory(&rest);

    let (tot, layout) = realize(f)?.totalize_with_layout()?;
    let positions: BTreeMap<i64, Vec<usize>> = layout
        .degrees()
        .map(|n| {
            let keep_pos = (0..tot.rank(n))
                .filter(|&pos| {
                    let g = layout.locate(n, pos).expect("position is a generator");
                    keep.contains(f.locate(&g).expect("generator belongs to an object").0.name.as_str())
                })
                .collect();
            (n, keep_pos)
        })
        .collect();
    let audit = les_audit(&tot, &positions)?;
    if audit.sub != realize(&sub)?.totalize()? || audit.quotient != realize(&quotient)?.totalize()? {
        return Err(Error::InvariantViolation("realization does not commute with the split".into()));
    }
    Ok(CategorySplit { sub, quotient, audit })
}

/// Adds `a` to every index. Framing ranks stay put, since the framing of an
/// object is carried along with it, so the realization has the same homology.
pub fn shift_category(f: &FlowCategoryData, a: i64) -> FlowCategoryData {
    let mut out = f.clone();
    for o in &mut out.objects {
        o.index += a;
    }
    out
}

/// Reverses all correspondences. Each object chain is dualized and reindexed
/// by its top dimension, `μ' = ambient_dim - μ` and `r' = -r - dim X`, so that
/// the realization computes cohomology: `H_n(dual) ≅ H^{-n}(Tot f)`.
pub fn dualize(f: &FlowCategoryData, ambient_dim: i64) -> Result<FlowCategoryData> {
    if let Some(issue) = validate_category(f).first() {
        return Err(Error::Validation(issue.to_string()));
    }
    if f.ring.characteristic() != 2 {
        if let Some(o) = f.objects.iter().find(|o| !o.orientable) {
            return Err(Error::OrientationRequired(format!("object {} is not orientable over {}", o.name, f.ring)));
        }
    }
    let objects = f
        .objects
        .iter()
        .map(|o| {
            let dim = o.dimension();
            FlowObject {
                name: o.name.clone(),
                index: ambient_dim - o.index,
                framing_rank: -o.framing_rank - dim,
                chain: o.chain.dual_reindexed(dim),
                orientable: o.orientable,
            }
        })
        .collect();
    let correspondences = f
        .correspondences
        .iter()
        .map(|c| {
            let (x, y) = (f.object(&c.from).unwrap(), f.object(&c.to).unwrap());
            // C(X)_m -> C(Y)_k with k = m + r_X - r_Y - 1 becomes C'(Y)_{dim Y - k} -> C'(X)_{dim X - m}
            let blocks = c
                .blocks
                .iter()
                .map(|(&m, b)| {
                    let k = m + x.framing_rank - y.framing_rank - 1;
                    (y.dimension() - k, b.transpose())
                })
                .collect();
            CorrespondenceMap { from: c.to.clone(), to: c.from.clone(), blocks }
        })
        .collect();
    Ok(FlowCategoryData { ring: f.ring, objects, correspondences })
}
