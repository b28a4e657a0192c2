//! Monotone bimodules and relative modules.

use std::collections::BTreeMap;

use super::{realize, CorrespondenceMap, FlowCategoryData, FlowObject};
use crate::error::{Error, Result};
use crate::homalg::{ChainMap, GradedChainComplex};
use crate::twisted::{BlockFamily, TwistedMorphism};
use crate::IntegerMatrix;

/// Blocks `C(X)_m -> C(Y)_{m + r_X - r_Y}` from a source object to a target object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleBlock {
    pub from: String,
    pub to: String,
    pub blocks: BlockFamily,
}

impl BimoduleBlock {
    pub fn new(from: impl Into<String>, to: impl Into<String>, blocks: BlockFamily) -> Self {
        Self { from: from.into(), to: to.into(), blocks }
    }
}

/// A monotone bimodule: every block satisfies `μ_source(X) >= μ_target(Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleData {
    pub source: FlowCategoryData,
    pub target: FlowCategoryData,
    pub blocks: Vec<BimoduleBlock>,
}

impl BimoduleData {
    /// Identity blocks between a category and itself.
    pub fn diagonal(f: &FlowCategoryData) -> Self {
        let blocks = f
            .objects
            .iter()
            .map(|o| {
                let fam = o.chain.degrees().map(|m| (m, IntegerMatrix::identity(o.chain.rank(m)))).collect();
                BimoduleBlock::new(o.name.clone(), o.name.clone(), fam)
            })
            .collect();
        Self { source: f.clone(), target: f.clone(), blocks }
    }

    pub fn zero(source: &FlowCategoryData, target: &FlowCategoryData) -> Self {
        Self { source: source.clone(), target: target.clone(), blocks: Vec::new() }
    }

    fn endpoints(&self, b: &BimoduleBlock) -> Result<(&FlowObject, &FlowObject)> {
        let x = self.source.require(&b.from)?;
        let y = self.target.require(&b.to)?;
        if x.index < y.index {
            return Err(Error::Validation(format!(
                "bimodule block {}->{} raises the index; only monotone bimodules are supported",
                b.from, b.to
            )));
        }
        for (&m, blk) in &b.blocks {
            let expected = (y.chain.rank(m + x.framing_rank - y.framing_rank), x.chain.rank(m));
            if blk.shape() != expected {
                return Err(Error::ShapeMismatch(format!(
                    "bimodule block {}->{} in degree {m} is {}x{}, expected {}x{}",
                    b.from,
                    b.to,
                    blk.rows(),
                    blk.cols(),
                    expected.0,
                    expected.1
                )));
            }
        }
        Ok((x, y))
    }
}

const TARGET_PREFIX: &str = "target.";
const SOURCE_PREFIX: &str = "source.";

/// The cone category: target objects as they are, then source objects with
/// index and framing raised by one, negated chains and correspondences, and
/// the bimodule blocks as correspondences from source to target.
pub fn cone_category(b: &BimoduleData) -> Result<FlowCategoryData> {
    if b.source.ring != b.target.ring {
        return Err(Error::ShapeMismatch("bimodule between categories over different rings".into()));
    }
    let mut out = FlowCategoryData::new(b.target.ring);
    for o in &b.target.objects {
        out.objects.push(FlowObject { name: format!("{TARGET_PREFIX}{}", o.name), ..o.clone() });
    }
    for o in &b.source.objects {
        out.objects.push(FlowObject {
            name: format!("{SOURCE_PREFIX}{}", o.name),
            index: o.index + 1,
            framing_rank: o.framing_rank + 1,
            chain: o.chain.with_negated_differential(),
            orientable: o.orientable,
        });
    }
    for c in &b.target.correspondences {
        out.correspondences.push(CorrespondenceMap::new(
            format!("{TARGET_PREFIX}{}", c.from),
            format!("{TARGET_PREFIX}{}", c.to),
            c.blocks.clone(),
        ));
    }
    for c in &b.source.correspondences {
        out.correspondences.push(CorrespondenceMap::new(
            format!("{SOURCE_PREFIX}{}", c.from),
            format!("{SOURCE_PREFIX}{}", c.to),
            c.blocks.iter().map(|(&m, blk)| (m, blk.neg())).collect(),
        ));
    }
    for blk in &b.blocks {
        b.endpoints(blk)?;
        out.correspondences.push(CorrespondenceMap::new(
            format!("{SOURCE_PREFIX}{}", blk.from),
            format!("{TARGET_PREFIX}{}", blk.to),
            blk.blocks.clone(),
        ));
    }
    Ok(out)
}

/// The morphism of realizations induced by a monotone bimodule.
///
/// Also realizes the cone category and checks that it equals the cone of the
/// morphism as a twisted complex.
pub fn bimodule_to_map(b: &BimoduleData) -> Result<TwistedMorphism> {
    let source = realize(&b.source)?;
    let target = realize(&b.target)?;
    let mut blocks: BTreeMap<(i64, i64), BlockFamily> = BTreeMap::new();
    for blk in &b.blocks {
        let (x, y) = b.endpoints(blk)?;
        let (i, j) = (x.index, y.index);
        for (&m, mat) in &blk.blocks {
            if mat.is_zero() {
                continue;
            }
            let pm = m + x.piece_shift();
            let pt = pm + i - j;
            let fam = blocks.entry((i, j)).or_default();
            let block = fam
                .entry(pm)
                .or_insert_with(|| IntegerMatrix::zeros(target.piece(j).rank(pt), source.piece(i).rank(pm)));
            block.add_block(b.target.offset_in_piece(&blk.to, pt), b.source.offset_in_piece(&blk.from, pm), mat);
        }
    }
    if let Some((n, g)) = TwistedMorphism::first_chain_failure(&source, &target, &blocks)? {
        let (o, degree, local) = b.source.locate(&g).expect("generator belongs to an object");
        return Err(Error::ChainMapViolation(format!(
            "bimodule map fails the chain condition on generator {local} of {} in degree {degree} (total degree {n})",
            o.name
        )));
    }
    let morphism = TwistedMorphism::new(source, target, blocks)?;
    let cone = realize(&cone_category(b)?)?;
    if cone != morphism.cone() {
        return Err(Error::InvariantViolation("cone category does not realize the cone of the bimodule map".into()));
    }
    Ok(morphism)
}

/// A module over a category with a map to a space `P`: per object, blocks
/// `C(X)_m -> C(P)_{m + r_X - twist_rank}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeModuleData {
    pub base: FlowCategoryData,
    pub target_space_chain: GradedChainComplex,
    pub twist_rank: i64,
    pub blocks: BTreeMap<String, BlockFamily>,
}

#[derive(Clone, Debug)]
pub struct RelativeMap {
    /// `Tot(realize(base)) -> C(P)` shifted up by the twist rank.
    pub map: ChainMap,
    pub quasi_isomorphism: bool,
}

pub fn relative_map(rm: &RelativeModuleData) -> Result<RelativeMap> {
    let base = &rm.base;
    let (tot, layout) = realize(base)?.totalize_with_layout()?;
    let target = rm.target_space_chain.shifted(rm.twist_rank);
    if target.ring() != base.ring {
        return Err(Error::ShapeMismatch("target space chain is over a different ring".into()));
    }
    let mut components: BTreeMap<i64, IntegerMatrix> = BTreeMap::new();
    for (name, fam) in &rm.blocks {
        let x = base.require(name)?;
        for (&m, mat) in fam {
            let n = m + x.framing_rank;
            let expected = (target.rank(n), x.chain.rank(m));
            if mat.shape() != expected {
                return Err(Error::ShapeMismatch(format!(
                    "relative block of {name} in degree {m} is {}x{}, expected {}x{}",
                    mat.rows(),
                    mat.cols(),
                    expected.0,
                    expected.1
                )));
            }
            if mat.is_zero() {
                continue;
            }
            let col = layout.offset(n, x.index).expect("object generators are in the realization")
                + base.offset_in_piece(name, m + x.piece_shift());
            components
                .entry(n)
                .or_insert_with(|| IntegerMatrix::zeros(target.rank(n), tot.rank(n)))
                .add_block(0, col, mat);
        }
    }
    let map = ChainMap::new_unchecked(tot, target, components)?;
    if let Some((n, col)) = map.chain_condition_failure() {
        let g = layout.locate(n, col).expect("column is a generator");
        let (o, degree, local) = base.locate(&g).expect("generator belongs to an object");
        return Err(Error::ChainMapViolation(format!(
            "relative map fails the chain condition on generator {local} of {} in degree {degree}",
            o.name
        )));
    }
    let quasi_isomorphism = map.is_quasi_isomorphism()?;
    Ok(RelativeMap { map, quasi_isomorphism })
}
