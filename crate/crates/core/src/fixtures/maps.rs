//! Continuation bimodules, a homotopy square and relative modules between the sphere fixtures.

use std::collections::BTreeMap;

use super::{one_by_one, s2_two_point, single_block, sphere_z2, Z};
use crate::error::Result;
use crate::flowcat::{bimodule_to_map, BimoduleBlock, BimoduleData, FlowCategoryData, FlowObject, RelativeModuleData};
use crate::homalg::GradedChainComplex;
use crate::twisted::{HomotopySquareWitness, TwistedMorphism};
use crate::IntegerMatrix;

/// From the two-point sphere to the `z²` model: `a ↦ c_0`, `b ↦ p + q`.
pub fn continuation_to_sphere_z2() -> BimoduleData {
    BimoduleData {
        source: s2_two_point(),
        target: sphere_z2(),
        blocks: vec![
            BimoduleBlock::new("a", "c", single_block(0, 1)),
            BimoduleBlock::new("b", "p", single_block(0, 1)),
            BimoduleBlock::new("b", "q", single_block(0, 1)),
        ],
    }
}

/// From the `z²` model to the two-point sphere, collapsing the equator to `a`
/// and sending the chosen pole to `b`.
fn collapse(pole: &str) -> BimoduleData {
    BimoduleData {
        source: sphere_z2(),
        target: s2_two_point(),
        blocks: vec![
            BimoduleBlock::new("c", "a", single_block(0, 1)),
            BimoduleBlock::new(pole, "b", single_block(0, 1)),
        ],
    }
}

/// `c_0 ↦ a`, `p ↦ b`, `q ↦ 0`.
pub fn continuation_from_sphere_z2() -> BimoduleData {
    collapse("p")
}

/// Two ways around a square from the `z²` sphere to the two-point sphere.
///
/// The upper path collapses onto `p`, the lower onto `q`, and both finish with
/// the identity. Their difference sends `p ↦ b` and `q ↦ -b`, which is the
/// boundary of the homotopy taking the equator's 1-cell to `b`. With `sign = -1`
/// the homotopy has the wrong sign and the square does not commute up to it.
pub fn continuation_square(sign: i64) -> Result<HomotopySquareWitness> {
    let c12 = bimodule_to_map(&collapse("p"))?;
    let c13 = bimodule_to_map(&collapse("q"))?;
    let id = TwistedMorphism::identity(c12.target())?;
    // equator sits in piece 0, its 1-cell in piece degree 1; b sits in piece 2, degree 0
    let homotopy = BTreeMap::from([((0, 2), BTreeMap::from([(1, one_by_one(sign))]))]);
    Ok(HomotopySquareWitness { c12, c13, c24: id.clone(), c34: id, homotopy })
}

/// The richer cell structure on `S²`: two vertices, two edges between them and two discs.
pub fn s2_two_disc_cells() -> GradedChainComplex {
    GradedChainComplex::new(
        Z,
        0,
        vec![2, 2, 2],
        vec![IntegerMatrix::from_i64_rows(&[&[-1, -1], &[1, 1]]), IntegerMatrix::from_i64_rows(&[&[1, -1], &[-1, 1]])],
    )
    .expect("boundary of boundary vanishes")
}

/// The minimum goes to a vertex and the maximum to the fundamental cycle of the two discs.
pub fn standard_s2_module() -> RelativeModuleData {
    RelativeModuleData {
        base: s2_two_point(),
        target_space_chain: s2_two_disc_cells(),
        twist_rank: 0,
        blocks: BTreeMap::from([
            ("a".to_string(), BTreeMap::from([(0, IntegerMatrix::from_i64_rows(&[&[1], &[0]]))])),
            ("b".to_string(), BTreeMap::from([(0, IntegerMatrix::from_i64_rows(&[&[1], &[1]]))])),
        ]),
    }
}

/// A single object `X` with framing rank `r`, mapping to `P = X` by the identity with twist `r`.
pub fn tautological_module(chain: GradedChainComplex, framing_rank: i64) -> RelativeModuleData {
    let blocks = chain.degrees().map(|m| (m, IntegerMatrix::identity(chain.rank(m)))).collect();
    let base = FlowCategoryData::new(chain.ring()).with_object(FlowObject::new("x", 0, framing_rank, chain.clone()));
    RelativeModuleData {
        base,
        target_space_chain: chain,
        twist_rank: framing_rank,
        blocks: BTreeMap::from([("x".to_string(), blocks)]),
    }
}
