//! Morphisms of twisted complexes, their cones, and homotopy squares.

use std::collections::BTreeMap;

use super::{BlockFamily, Generator, TotLayout, TwistedComplex};
use crate::error::{Error, Result};
use crate::homalg::complex::homotopy_boundary;
use crate::homalg::{les_audit, ChainMap, GradedChainComplex, LesAudit};
use crate::IntegerMatrix;

/// A filtered map of twisted complexes. The block `(i, j)` with `i >= j` sends
/// `(D_i)_m` to `(D'_j)_{m+i-j}`, so every block preserves total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedMorphism {
    source: TwistedComplex,
    target: TwistedComplex,
    blocks: BTreeMap<(i64, i64), BlockFamily>,
    assembled: ChainMap,
}

fn check_block_shapes(
    source: &TwistedComplex,
    target: &TwistedComplex,
    blocks: &BTreeMap<(i64, i64), BlockFamily>,
    degree_raise: i64,
    what: &str,
) -> Result<()> {
    for (&(i, j), fam) in blocks {
        for (&m, b) in fam {
            let expected = (target.piece(j).rank(m + i - j + degree_raise), source.piece(i).rank(m));
            if b.shape() != expected {
                return Err(Error::ShapeMismatch(format!(
                    "{what} block {i}->{j} in source degree {m} is {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    expected.0,
                    expected.1
                )));
            }
        }
    }
    Ok(())
}

/// Places blocks `(i, j)` into matrices `Tot_n(source) -> Tot_{n+raise}(target)`.
fn assemble(
    source: &TotLayout,
    target: &TotLayout,
    blocks: &BTreeMap<(i64, i64), BlockFamily>,
    degrees: impl Iterator<Item = i64>,
    raise: i64,
) -> BTreeMap<i64, IntegerMatrix> {
    let mut out = BTreeMap::new();
    for n in degrees {
        let mut f = IntegerMatrix::zeros(target.rank(n + raise), source.rank(n));
        for (&(i, j), fam) in blocks {
            if let Some(b) = fam.get(&(n - i)) {
                if b.is_zero() {
                    continue;
                }
                let col = source.offset(n, i).expect("nonzero block has a source");
                let row = target.offset(n + raise, j).expect("nonzero block has a target");
                f.add_block(row, col, b);
            }
        }
        out.insert(n, f);
    }
    out
}

impl TwistedMorphism {
    /// Checks block shapes and that the assembled map commutes with the total differentials.
    pub fn new(
        source: TwistedComplex,
        target: TwistedComplex,
        blocks: BTreeMap<(i64, i64), BlockFamily>,
    ) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::ShapeMismatch("morphism between twisted complexes over different rings".into()));
        }
        if let Some(&(i, j)) = blocks.keys().find(|(i, j)| i < j) {
            return Err(Error::ShapeMismatch(format!("morphism block {i}->{j} increases the index")));
        }
        let (assembled, failure) = Self::assemble_checked(&source, &target, &blocks)?;
        if let Some((n, g)) = failure {
            return Err(Error::ChainMapViolation(format!("D f != f D on {g} (total degree {n})")));
        }
        let ring = source.ring();
        let mut blocks = blocks;
        for fam in blocks.values_mut() {
            fam.retain(|_, b| !ring.is_zero(b));
            for b in fam.values_mut() {
                *b = ring.normalize(b);
            }
        }
        blocks.retain(|_, fam| !fam.is_empty());
        Ok(Self { source, target, blocks, assembled })
    }

    /// The assembled map and the first generator where the chain condition fails, if any.
    pub fn first_chain_failure(
        source: &TwistedComplex,
        target: &TwistedComplex,
        blocks: &BTreeMap<(i64, i64), BlockFamily>,
    ) -> Result<Option<(i64, Generator)>> {
        Self::assemble_checked(source, target, blocks).map(|(_, f)| f)
    }

    fn assemble_checked(
        source: &TwistedComplex,
        target: &TwistedComplex,
        blocks: &BTreeMap<(i64, i64), BlockFamily>,
    ) -> Result<(ChainMap, Option<(i64, Generator)>)> {
        check_block_shapes(source, target, blocks, 0, "morphism")?;
        let (tot_s, lay_s) = source.totalize_with_layout()?;
        let (tot_t, lay_t) = target.totalize_with_layout()?;
        let components = assemble(&lay_s, &lay_t, blocks, lay_s.degrees().collect::<Vec<_>>().into_iter(), 0);
        let assembled = ChainMap::new_unchecked(tot_s, tot_t, components)?;
        let failure = assembled
            .chain_condition_failure()
            .map(|(n, col)| (n, lay_s.locate(n, col).expect("column is a generator")));
        Ok((assembled, failure))
    }

    pub fn identity(t: &TwistedComplex) -> Result<Self> {
        let blocks = t
            .pieces()
            .iter()
            .filter(|(_, c)| !c.is_empty())
            .map(|(&i, c)| ((i, i), c.degrees().map(|m| (m, IntegerMatrix::identity(c.rank(m)))).collect()))
            .collect();
        Self::new(t.clone(), t.clone(), blocks)
    }

    pub fn zero(source: &TwistedComplex, target: &TwistedComplex) -> Result<Self> {
        Self::new(source.clone(), target.clone(), BTreeMap::new())
    }

    pub fn source(&self) -> &TwistedComplex {
        &self.source
    }

    pub fn target(&self) -> &TwistedComplex {
        &self.target
    }

    pub fn blocks(&self) -> &BTreeMap<(i64, i64), BlockFamily> {
        &self.blocks
    }

    pub fn block(&self, i: i64, j: i64, m: i64) -> IntegerMatrix {
        self.blocks
            .get(&(i, j))
            .and_then(|f| f.get(&m))
            .cloned()
            .unwrap_or_else(|| IntegerMatrix::zeros(self.target.piece(j).rank(m + i - j), self.source.piece(i).rank(m)))
    }

    /// The map on totalizations.
    pub fn to_chain_map(&self) -> &ChainMap {
        &self.assembled
    }

    /// `self ∘ first`, block by block.
    pub fn compose(&self, first: &TwistedMorphism) -> Result<TwistedMorphism> {
        if first.target != self.source {
            return Err(Error::ShapeMismatch("composition of non-composable twisted morphisms".into()));
        }
        let mut blocks: BTreeMap<(i64, i64), BlockFamily> = BTreeMap::new();
        for (&(i, k), f1) in &first.blocks {
            for (&(k2, j), _) in self.blocks.range((k, i64::MIN)..=(k, i64::MAX)) {
                debug_assert_eq!(k, k2);
                for (&m, b1) in f1 {
                    let b2 = self.block(k, j, m + i - k);
                    let fam = blocks.entry((i, j)).or_default();
                    let prod = b2.mul(b1);
                    let cur = fam.remove(&m).unwrap_or_else(|| IntegerMatrix::zeros(prod.rows(), prod.cols()));
                    fam.insert(m, cur.add(&prod));
                }
            }
        }
        Self::new(first.source.clone(), self.target.clone(), blocks)
    }

    /// `self - other` for morphisms with the same endpoints.
    pub fn sub(&self, other: &TwistedMorphism) -> Result<TwistedMorphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ShapeMismatch("difference of morphisms with different endpoints".into()));
        }
        let mut blocks = self.blocks.clone();
        for (&k, fam) in &other.blocks {
            let dst = blocks.entry(k).or_default();
            for (&m, b) in fam {
                let cur = dst.remove(&m).unwrap_or_else(|| IntegerMatrix::zeros(b.rows(), b.cols()));
                dst.insert(m, cur.sub(b));
            }
        }
        Self::new(self.source.clone(), self.target.clone(), blocks)
    }

    /// Cone as a twisted complex. The source moves up one index with its
    /// differentials and structure maps negated; piece `k` is `D'_k ⊕ D_{k-1}`
    /// with the target generators first, and `f_{k-1,l}` becomes part of `δ_{k,l}`.
    pub fn cone(&self) -> TwistedComplex {
        let ring = self.source.ring();
        let neg = self.source.negated();
        let mut indices: Vec<i64> = self.target.pieces().keys().copied().collect();
        indices.extend(self.source.pieces().keys().map(|i| i + 1));
        indices.sort_unstable();
        indices.dedup();

        let pieces: BTreeMap<i64, GradedChainComplex> =
            indices.iter().map(|&k| (k, self.target.piece(k).direct_sum(&neg.piece(k - 1)))).collect();

        let mut structure: BTreeMap<(i64, i64), BlockFamily> = BTreeMap::new();
        for &k in &indices {
            for &l in indices.iter().filter(|&&l| l < k) {
                let src = &pieces[&k];
                let mut fam = BlockFamily::new();
                for m in src.degrees() {
                    let tm = m + k - l - 1;
                    let (t_rows, s_rows) = (self.target.piece(l).rank(tm), self.source.piece(l - 1).rank(tm));
                    let (t_cols, s_cols) = (self.target.piece(k).rank(m), self.source.piece(k - 1).rank(m));
                    let mut b = IntegerMatrix::zeros(t_rows + s_rows, t_cols + s_cols);
                    b.add_block(0, 0, &self.target.structure_block(k, l, m));
                    b.add_block(0, t_cols, &self.block(k - 1, l, m));
                    b.add_block(t_rows, t_cols, &neg.structure_block(k - 1, l - 1, m));
                    if !ring.is_zero(&b) {
                        fam.insert(m, b);
                    }
                }
                if !fam.is_empty() {
                    structure.insert((k, l), fam);
                }
            }
        }
        TwistedComplex::from_parts(ring, pieces, structure)
    }

    /// Basis permutation from `Tot(cone())` to the mapping cone of the assembled map.
    pub fn cone_witness(&self) -> Result<ChainMap> {
        let cone = self.cone();
        let (tot_c, lay_c) = cone.totalize_with_layout()?;
        let lay_t = self.target.layout();
        let lay_s = self.source.layout();
        let mapping_cone = self.assembled.cone();
        let mut components = BTreeMap::new();
        for n in lay_c.degrees() {
            let mut p = IntegerMatrix::zeros(mapping_cone.rank(n), tot_c.rank(n));
            let shift = lay_t.rank(n);
            for pos in 0..tot_c.rank(n) {
                let g = lay_c.locate(n, pos).expect("position is a generator");
                let t_rank = self.target.piece(g.piece).rank(g.internal_degree);
                let row = if g.local < t_rank {
                    lay_t.offset(n, g.piece).expect("target piece present") + g.local
                } else {
                    shift + lay_s.offset(n - 1, g.piece - 1).expect("source piece present") + g.local - t_rank
                };
                p.set(row, pos, 1.into());
            }
            components.insert(n, p);
        }
        ChainMap::new(tot_c, mapping_cone, components)
    }
}

impl TwistedMorphism {
    /// Long exact sequence of `Tot(target) -> Tot(cone) -> Σ Tot(source)`.
    ///
    /// Target generators span a subcomplex of the cone. The quotient is the
    /// suspended source with negated differential, which matches `Σ Tot(source)`
    /// through the sign change `(-1)^n` in degree `n`.
    pub fn cone_sequence(&self) -> Result<LesAudit> {
        let cone = self.cone();
        let (tot, layout) = cone.totalize_with_layout()?;
        let positions: BTreeMap<i64, Vec<usize>> = layout
            .degrees()
            .map(|n| {
                let keep = layout
                    .positions_where(n, |_| true)
                    .into_iter()
                    .filter(|&pos| {
                        let g = layout.locate(n, pos).expect("position is a generator");
                        g.local < self.target.piece(g.piece).rank(g.internal_degree)
                    })
                    .collect();
                (n, keep)
            })
            .collect();
        let audit = les_audit(&tot, &positions)?;
        if audit.sub != self.target.totalize()? || audit.quotient != self.source.negated().suspend().totalize()? {
            return Err(Error::InvariantViolation("cone does not restrict to its target and source".into()));
        }
        Ok(audit)
    }
}

/// Outcome of [`HomotopySquareWitness::verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SquareVerdict {
    Holds,
    /// First generator of the corner `T1` where `DH + HD` and the difference disagree.
    Fails {
        total_degree: i64,
        generator: Generator,
    },
}

impl SquareVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, Self::Holds)
    }
}

/// A square `T1 -> T2 -> T4`, `T1 -> T3 -> T4` with a proposed homotopy between the two composites.
///
/// The homotopy block `(i, j)` sends `(T1_i)_m` to `(T4_j)_{m+i-j+1}`, raising total degree by one.
#[derive(Clone, Debug)]
pub struct HomotopySquareWitness {
    pub c12: TwistedMorphism,
    pub c13: TwistedMorphism,
    pub c24: TwistedMorphism,
    pub c34: TwistedMorphism,
    pub homotopy: BTreeMap<(i64, i64), BlockFamily>,
}

impl HomotopySquareWitness {
    /// Checks `D H + H D = c24∘c12 - c34∘c13` exactly on totalizations.
    pub fn verify(&self) -> Result<SquareVerdict> {
        let t1 = self.c12.source();
        if self.c13.source() != t1
            || self.c24.source() != self.c12.target()
            || self.c34.source() != self.c13.target()
            || self.c24.target() != self.c34.target()
        {
            return Err(Error::ShapeMismatch("corners of the square do not match".into()));
        }
        let t4 = self.c24.target();
        check_block_shapes(t1, t4, &self.homotopy, 1, "homotopy")?;
        let upper = self.c24.to_chain_map().compose(self.c12.to_chain_map())?;
        let lower = self.c34.to_chain_map().compose(self.c13.to_chain_map())?;
        let diff = upper.sub(&lower)?;

        let (tot1, lay1) = t1.totalize_with_layout()?;
        let (tot4, lay4) = t4.totalize_with_layout()?;
        let h = assemble(&lay1, &lay4, &self.homotopy, tot1.degrees(), 1);
        let dh = homotopy_boundary(&tot1, &tot4, &h);
        let ring = t1.ring();
        for n in tot1.degrees() {
            let gap = ring.normalize(&dh[&n].sub(&diff.component(n)));
            if let Some((_, col, _)) = gap.iter().min_by_key(|(r, c, _)| (*c, *r)) {
                let generator = lay1.locate(n, col).expect("column is a generator");
                return Ok(SquareVerdict::Fails { total_degree: n, generator });
            }
        }
        Ok(SquareVerdict::Holds)
    }
}
