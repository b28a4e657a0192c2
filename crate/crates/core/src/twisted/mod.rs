//! One-sided twisted complexes and their totalizations.
//!
//! A twisted complex is a finite family of chain complexes `D_i` indexed by
//! integers, together with maps `δ_ij : (D_i)_m -> (D_j)_{m+i-j-1}` for
//! `i > j`. In the totalization `Tot_n = ⊕_i (D_i)_{n-i}` each `δ_ij` has
//! degree `-1`, and the total differential `D = Σ ∂_i + Σ δ_ij` must square
//! to zero. No signs are inserted anywhere: whatever signs the data needs
//! are already part of the stored maps.

mod morphism;
mod spectral;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::homalg::{les_audit, ChainMap, CoefficientRing, GradedChainComplex, LesAudit};
use crate::IntegerMatrix;

pub use morphism::{HomotopySquareWitness, SquareVerdict, TwistedMorphism};
pub use spectral::{integral_subquotients, spectral_sequence, Page, SpectralSequenceResult};

/// Matrices of one structure map, keyed by the internal degree of the source piece.
pub type BlockFamily = BTreeMap<i64, IntegerMatrix>;

/// A basis element of the totalization, located in its piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub piece: i64,
    pub internal_degree: i64,
    pub local: usize,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "piece {} degree {} generator {}", self.piece, self.internal_degree, self.local)
    }
}

/// Positions of piece blocks inside each total degree. Pieces appear in increasing index order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TotLayout {
    blocks: BTreeMap<i64, Vec<(i64, usize, usize)>>,
}

impl TotLayout {
    /// Offset of piece `i` inside total degree `n`.
    pub fn offset(&self, n: i64, i: i64) -> Option<usize> {
        self.blocks.get(&n)?.iter().find(|(p, _, _)| *p == i).map(|&(_, o, _)| o)
    }

    pub fn rank(&self, n: i64) -> usize {
        self.blocks.get(&n).map_or(0, |b| b.iter().map(|&(_, _, len)| len).sum())
    }

    pub fn locate(&self, n: i64, pos: usize) -> Option<Generator> {
        self.blocks.get(&n)?.iter().find_map(|&(i, o, len)| {
            (pos >= o && pos < o + len).then_some(Generator { piece: i, internal_degree: n - i, local: pos - o })
        })
    }

    /// Positions in degree `n` of generators whose piece index satisfies `keep`.
    pub fn positions_where(&self, n: i64, keep: impl Fn(i64) -> bool) -> Vec<usize> {
        self.blocks
            .get(&n)
            .map(|b| b.iter().filter(|(i, _, _)| keep(*i)).flat_map(|&(_, o, len)| o..o + len).collect())
            .unwrap_or_default()
    }

    /// Piece index of every generator in degree `n`, in basis order.
    pub fn piece_of_each(&self, n: i64) -> Vec<i64> {
        self.blocks
            .get(&n)
            .map(|b| b.iter().flat_map(|&(i, _, len)| std::iter::repeat_n(i, len)).collect())
            .unwrap_or_default()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.blocks.keys().copied()
    }
}

/// A problem found by [`TwistedComplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    /// A structure map block has the wrong shape for its source and target degrees.
    ShapeMismatch { from: i64, to: i64, source_degree: i64, expected: (usize, usize), found: (usize, usize) },
    /// `D∘D` is nonzero; the first offending column of the totalization.
    SquareNonzero { total_degree: i64, generator: Generator },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ShapeMismatch { from, to, source_degree, expected, found } => write!(
                f,
                "structure map {from}->{to} in source degree {source_degree} is {}x{}, expected {}x{}",
                found.0, found.1, expected.0, expected.1
            ),
            Self::SquareNonzero { total_degree, generator } => {
                write!(f, "D∘D is nonzero on {generator} (total degree {total_degree})")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub issues: Vec<Diagnostic>,
}

impl Diagnostics {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn first(&self) -> Option<&Diagnostic> {
        self.issues.first()
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for issue in &self.issues {
            writeln!(f, "{issue}")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwistedComplex {
    ring: CoefficientRing,
    pieces: BTreeMap<i64, GradedChainComplex>,
    structure: BTreeMap<(i64, i64), BlockFamily>,
}

impl TwistedComplex {
    /// Stores the data as given. Only index order and rings are checked here;
    /// shapes and `D∘D = 0` are reported by [`validate`](Self::validate).
    pub fn new(
        ring: CoefficientRing,
        pieces: BTreeMap<i64, GradedChainComplex>,
        structure: BTreeMap<(i64, i64), BlockFamily>,
    ) -> Result<Self> {
        if let Some((i, _)) = pieces.iter().find(|(_, c)| c.ring() != ring) {
            return Err(Error::ShapeMismatch(format!(
                "piece {i} is over {} but the complex is over {ring}",
                pieces[i].ring()
            )));
        }
        if let Some(&(i, j)) = structure.keys().find(|(i, j)| i <= j) {
            return Err(Error::ShapeMismatch(format!("structure map {i}->{j} does not decrease the index")));
        }
        Ok(Self::from_parts(ring, pieces, structure))
    }

    pub fn empty(ring: CoefficientRing) -> Self {
        Self { ring, pieces: BTreeMap::new(), structure: BTreeMap::new() }
    }

    /// Twisted complex supported at a single index.
    pub fn single(index: i64, piece: GradedChainComplex) -> Self {
        Self::from_parts(piece.ring(), BTreeMap::from([(index, piece)]), BTreeMap::new())
    }

    pub fn ring(&self) -> CoefficientRing {
        self.ring
    }

    /// Indices carrying a nonzero piece.
    pub fn indices(&self) -> Vec<i64> {
        self.pieces.iter().filter(|(_, c)| !c.is_empty()).map(|(&i, _)| i).collect()
    }

    pub fn piece(&self, i: i64) -> GradedChainComplex {
        self.pieces.get(&i).cloned().unwrap_or_else(|| GradedChainComplex::zero(self.ring))
    }

    pub fn pieces(&self) -> &BTreeMap<i64, GradedChainComplex> {
        &self.pieces
    }

    pub fn structure_maps(&self) -> &BTreeMap<(i64, i64), BlockFamily> {
        &self.structure
    }

    /// Block of `δ_ij` out of source internal degree `m`, zero if absent.
    pub fn structure_block(&self, i: i64, j: i64, m: i64) -> IntegerMatrix {
        let target_degree = m + i - j - 1;
        self.structure
            .get(&(i, j))
            .and_then(|f| f.get(&m))
            .cloned()
            .unwrap_or_else(|| IntegerMatrix::zeros(self.piece(j).rank(target_degree), self.piece(i).rank(m)))
    }

    pub fn layout(&self) -> TotLayout {
        let mut blocks: BTreeMap<i64, Vec<(i64, usize, usize)>> = BTreeMap::new();
        for (&i, c) in &self.pieces {
            for m in c.degrees() {
                let r = c.rank(m);
                if r > 0 {
                    blocks.entry(m + i).or_default().push((i, 0, r));
                }
            }
        }
        for v in blocks.values_mut() {
            v.sort_by_key(|b| b.0);
            let mut off = 0;
            for b in v.iter_mut() {
                b.1 = off;
                off += b.2;
            }
        }
        TotLayout { blocks }
    }

    fn shape_issues(&self) -> Vec<Diagnostic> {
        let mut issues = Vec::new();
        for (&(i, j), fam) in &self.structure {
            for (&m, block) in fam {
                let expected = (self.piece(j).rank(m + i - j - 1), self.piece(i).rank(m));
                if block.shape() != expected {
                    issues.push(Diagnostic::ShapeMismatch {
                        from: i,
                        to: j,
                        source_degree: m,
                        expected,
                        found: block.shape(),
                    });
                }
            }
        }
        issues
    }

    /// Total differential out of degree `n`. Assumes shapes are valid.
    fn total_differential(&self, layout: &TotLayout, n: i64) -> IntegerMatrix {
        let mut d = IntegerMatrix::zeros(layout.rank(n - 1), layout.rank(n));
        for (&i, c) in &self.pieces {
            let m = n - i;
            if c.rank(m) == 0 {
                continue;
            }
            let col = layout.offset(n, i).expect("piece present in its degree");
            if let Some(row) = layout.offset(n - 1, i) {
                d.add_block(row, col, &c.differential(m));
            }
        }
        for (&(i, j), fam) in &self.structure {
            if let Some(block) = fam.get(&(n - i)) {
                if block.is_zero() {
                    continue;
                }
                let col = layout.offset(n, i).expect("nonzero block has a source");
                let row = layout.offset(n - 1, j).expect("nonzero block has a target");
                d.add_block(row, col, block);
            }
        }
        self.ring.normalize(&d)
    }

    /// Shape check plus the Maurer–Cartan condition `D∘D = 0`. Never fails; problems are collected.
    pub fn validate(&self) -> Diagnostics {
        let issues = self.shape_issues();
        if !issues.is_empty() {
            return Diagnostics { issues };
        }
        let layout = self.layout();
        let degrees: Vec<i64> = layout.degrees().collect();
        for &n in &degrees {
            let sq =
                self.ring.normalize(&self.total_differential(&layout, n - 1).mul(&self.total_differential(&layout, n)));
            if let Some((_, col, _)) = sq.iter().min_by_key(|(r, c, _)| (*c, *r)) {
                let generator = layout.locate(n, col).expect("column is a generator");
                return Diagnostics { issues: vec![Diagnostic::SquareNonzero { total_degree: n, generator }] };
            }
        }
        Diagnostics::default()
    }

    /// The totalization `Tot_n = ⊕ (D_i)_{n-i}` with differential `Σ∂_i + Σδ_ij`.
    pub fn totalize(&self) -> Result<GradedChainComplex> {
        self.totalize_with_layout().map(|(c, _)| c)
    }

    pub fn totalize_with_layout(&self) -> Result<(GradedChainComplex, TotLayout)> {
        let diag = self.validate();
        if let Some(issue) = diag.first() {
            return Err(Error::InvariantViolation(issue.to_string()));
        }
        let layout = self.layout();
        let ranks: BTreeMap<i64, usize> = layout.degrees().map(|n| (n, layout.rank(n))).collect();
        let diffs: BTreeMap<i64, IntegerMatrix> =
            layout.degrees().map(|n| (n, self.total_differential(&layout, n))).collect();
        let tot = GradedChainComplex::from_degree_maps(self.ring, &ranks, &diffs)?;
        Ok((tot, layout))
    }

    /// Moves every index by `a` while shifting pieces down by `a`, so the
    /// totalization is unchanged. Returns the identification of totalizations.
    pub fn shift(&self, a: i64) -> Result<(TwistedComplex, ChainMap)> {
        let pieces = self.pieces.iter().map(|(&i, c)| (i + a, c.shifted(-a))).collect();
        let structure = self
            .structure
            .iter()
            .map(|(&(i, j), fam)| ((i + a, j + a), fam.iter().map(|(&m, b)| (m - a, b.clone())).collect()))
            .collect();
        let shifted = TwistedComplex::from_parts(self.ring, pieces, structure);
        let (before, after) = (self.totalize()?, shifted.totalize()?);
        let components = before.degrees().map(|n| (n, IntegerMatrix::identity(before.rank(n)))).collect();
        let witness = ChainMap::new(before, after, components)?;
        Ok((shifted, witness))
    }

    /// Moves every index up by one without touching the pieces; the totalization is suspended.
    pub fn suspend(&self) -> TwistedComplex {
        TwistedComplex {
            ring: self.ring,
            pieces: self.pieces.iter().map(|(&i, c)| (i + 1, c.clone())).collect(),
            structure: self.structure.iter().map(|(&(i, j), f)| ((i + 1, j + 1), f.clone())).collect(),
        }
    }

    /// Every differential and structure map negated.
    pub fn negated(&self) -> TwistedComplex {
        TwistedComplex {
            ring: self.ring,
            pieces: self.pieces.iter().map(|(&i, c)| (i, c.with_negated_differential())).collect(),
            structure: self
                .structure
                .iter()
                .map(|(&k, f)| (k, f.iter().map(|(&m, b)| (m, self.ring.normalize(&b.neg()))).collect()))
                .collect(),
        }
    }

    /// Pieces whose index satisfies `keep`, with all structure maps among them.
    pub fn restrict(&self, keep: impl Fn(i64) -> bool) -> TwistedComplex {
        TwistedComplex {
            ring: self.ring,
            pieces: self.pieces.iter().filter(|(&i, _)| keep(i)).map(|(&i, c)| (i, c.clone())).collect(),
            structure: self
                .structure
                .iter()
                .filter(|(&(i, j), _)| keep(i) && keep(j))
                .map(|(&k, f)| (k, f.clone()))
                .collect(),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.pieces
            .iter()
            .map(|(&i, c)| if i.rem_euclid(2) == 0 { c.euler_characteristic() } else { -c.euler_characteristic() })
            .sum()
    }

    /// Splits at `p`: the sub-object has indices `<= p`, the quotient the rest.
    pub fn quotient_sequence(&self, p: i64) -> Result<QuotientSequence> {
        let sub = self.restrict(|i| i <= p);
        let quotient = self.restrict(|i| i > p);
        let (tot, layout) = self.totalize_with_layout()?;
        let positions: BTreeMap<i64, Vec<usize>> =
            layout.degrees().map(|n| (n, layout.positions_where(n, |i| i <= p))).collect();
        let audit = les_audit(&tot, &positions)?;
        let consistent = audit.sub == sub.totalize()? && audit.quotient == quotient.totalize()?;
        if !consistent {
            return Err(Error::InvariantViolation(format!(
                "truncations at {p} do not match the coordinate sub- and quotient complexes"
            )));
        }
        Ok(QuotientSequence { split: p, sub, quotient, audit })
    }

    /// Drops empty pieces and zero blocks so that equal data compares equal.
    pub(crate) fn from_parts(
        ring: CoefficientRing,
        mut pieces: BTreeMap<i64, GradedChainComplex>,
        mut structure: BTreeMap<(i64, i64), BlockFamily>,
    ) -> Self {
        pieces.retain(|_, c| !c.is_empty());
        for fam in structure.values_mut() {
            fam.retain(|_, m| !ring.is_zero(m));
            for m in fam.values_mut() {
                *m = ring.normalize(m);
            }
        }
        structure.retain(|_, fam| !fam.is_empty());
        Self { ring, pieces, structure }
    }
}

#[derive(Clone, Debug)]
pub struct QuotientSequence {
    pub split: i64,
    pub sub: TwistedComplex,
    pub quotient: TwistedComplex,
    pub audit: LesAudit,
}
