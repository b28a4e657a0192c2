//! Truncated Borel models for circle actions.
//!
//! With `EG` approximated by `S^{2N+1}`, the homotopy quotient is filtered by
//! the cells of `CP^N`. Level `k` contributes a copy of every fiber object with
//! index and framing raised by `2k`; fiber correspondences are copied within
//! a level, and level links join level `k+1` to level `k` in degree one.

use std::collections::BTreeMap;

use super::{circle, single_block, Z};
use crate::error::{Error, Result};
use crate::flowcat::{validate_category, CorrespondenceMap, FlowCategoryData, FlowObject};
use crate::twisted::BlockFamily;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorelSpec {
    /// Truncation level `N`.
    pub levels: usize,
    pub fiber: FlowCategoryData,
    /// Per fiber object, the link from its copy at level `k+1` to its copy at level `k`:
    /// blocks `C(X)_m -> C(X)_{m+1}`.
    pub level_links: BTreeMap<String, BlockFamily>,
}

impl BorelSpec {
    /// Spec with [`default_level_links`].
    pub fn new(levels: usize, fiber: FlowCategoryData) -> Self {
        let level_links = default_level_links(&fiber);
        Self { levels, fiber, level_links }
    }
}

/// Multiplication by the generator: on a circle object, the 0-cell of level
/// `k+1` goes to the 1-cell of level `k`. Other objects get no link.
pub fn default_level_links(fiber: &FlowCategoryData) -> BTreeMap<String, BlockFamily> {
    fiber
        .objects
        .iter()
        .filter(|o| o.chain == circle(fiber.ring))
        .map(|o| (o.name.clone(), single_block(0, 1)))
        .collect()
}

fn level_name(name: &str, k: usize) -> String {
    format!("{name}@{k}")
}

pub fn borel_product(spec: &BorelSpec) -> Result<FlowCategoryData> {
    let fiber = &spec.fiber;
    let mut out = FlowCategoryData::new(fiber.ring);
    for k in 0..=spec.levels {
        let lift = 2 * k as i64;
        for o in &fiber.objects {
            out.objects.push(FlowObject {
                name: level_name(&o.name, k),
                index: o.index + lift,
                framing_rank: o.framing_rank + lift,
                ..o.clone()
            });
        }
        for c in &fiber.correspondences {
            out.correspondences.push(CorrespondenceMap::new(
                level_name(&c.from, k),
                level_name(&c.to, k),
                c.blocks.clone(),
            ));
        }
    }
    for (name, blocks) in &spec.level_links {
        if fiber.object(name).is_none() {
            return Err(Error::InvariantViolation(format!("level link for unknown fiber object {name}")));
        }
        for k in 0..spec.levels {
            out.correspondences.push(CorrespondenceMap::new(
                level_name(name, k + 1),
                level_name(name, k),
                blocks.clone(),
            ));
        }
    }
    if let Some(issue) = validate_category(&out).first() {
        return Err(Error::InvariantViolation(format!("Borel model is not a valid category: {issue}")));
    }
    Ok(out)
}

/// Circles at index `2k` for `k = 0..=N` joined by level links: the free circle
/// action on `S^{2N+1}` over `CP^N`.
pub fn cp_circle_model(levels: usize) -> FlowCategoryData {
    let fiber = FlowCategoryData::new(Z).with_object(FlowObject::new("e", 0, 0, circle(Z)));
    borel_product(&BorelSpec::new(levels, fiber)).expect("links square to zero")
}

/// Rotation of `S²` about its axis: the fixed poles `s` (index 0) and `n` (index 2).
pub fn s2_rotation_fiber() -> FlowCategoryData {
    FlowCategoryData::new(Z).with_object(FlowObject::new("s", 0, 0, super::point(Z))).with_object(FlowObject::new(
        "n",
        2,
        2,
        super::point(Z),
    ))
}
