//! Flow categories of standard manifolds, and the maps between them used in tests and the CLI.
//!
//! Every nontrivial correspondence block here was fixed by hand from `D∘D = 0`
//! together with the known homology of the underlying space.

mod borel;
mod maps;
mod schubert;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::flowcat::{validate_category, CorrespondenceMap, FlowCategoryData, FlowObject};
use crate::homalg::{CoefficientRing, GradedChainComplex, HomologySummary};
use crate::twisted::BlockFamily;
use crate::{Int, IntegerMatrix};

pub use borel::{borel_product, cp_circle_model, default_level_links, s2_rotation_fiber, BorelSpec};
pub use maps::{
    continuation_from_sphere_z2, continuation_square, continuation_to_sphere_z2, s2_two_disc_cells, standard_s2_module,
    tautological_module,
};
pub use schubert::schubert_indices;

const Z: CoefficientRing = CoefficientRing::Integers;

pub(crate) fn one_by_one(v: i64) -> IntegerMatrix {
    IntegerMatrix::from_i64_rows(&[&[v]])
}

pub(crate) fn point(ring: CoefficientRing) -> GradedChainComplex {
    GradedChainComplex::with_zero_differentials(ring, 0, vec![1])
}

pub(crate) fn circle(ring: CoefficientRing) -> GradedChainComplex {
    GradedChainComplex::with_zero_differentials(ring, 0, vec![1, 1])
}

pub(crate) fn single_block(degree: i64, v: i64) -> BlockFamily {
    BTreeMap::from([(degree, one_by_one(v))])
}

/// A Morse function: critical points with indices and signed trajectory counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MorseSpec {
    pub points: Vec<(String, i64)>,
    /// Counts from a point to a point of index one less.
    pub counts: BTreeMap<(String, String), i64>,
}

impl MorseSpec {
    pub fn new(points: &[(&str, i64)]) -> Self {
        Self { points: points.iter().map(|&(n, i)| (n.to_string(), i)).collect(), counts: BTreeMap::new() }
    }

    pub fn count(mut self, from: &str, to: &str, n: i64) -> Self {
        self.counts.insert((from.to_string(), to.to_string()), n);
        self
    }
}

/// Point objects with `r = μ`; each count becomes a 1x1 block in degree 0.
pub fn morse_category(spec: &MorseSpec, ring: CoefficientRing) -> Result<FlowCategoryData> {
    let index: BTreeMap<&str, i64> = spec.points.iter().map(|(n, i)| (n.as_str(), *i)).collect();
    let mut f = FlowCategoryData::new(ring);
    for (name, i) in &spec.points {
        f.objects.push(FlowObject::new(name.clone(), *i, *i, point(ring)));
    }
    for ((from, to), &n) in &spec.counts {
        let (Some(&a), Some(&b)) = (index.get(from.as_str()), index.get(to.as_str())) else {
            return Err(Error::Validation(format!("count {from}->{to} names an unknown point")));
        };
        if a != b + 1 {
            return Err(Error::Validation(format!("count {from}->{to} joins indices {a} and {b}")));
        }
        f.correspondences.push(CorrespondenceMap::new(from.clone(), to.clone(), single_block(0, n)));
    }
    if let Some(issue) = validate_category(&f).first() {
        return Err(Error::DifferentialSquaredNonzero(issue.to_string()));
    }
    Ok(f)
}

/// Height function on the round sphere: a minimum and a maximum.
pub fn s2_two_point() -> FlowCategoryData {
    morse_category(&MorseSpec::new(&[("a", 0), ("b", 2)]), Z).expect("no counts to check")
}

/// `z²` on the sphere: the equator circle `c` at index 0 and the poles `p`, `q` at index 2.
///
/// The poles are joined to the equator by the two hemispheres; their boundary
/// is the 1-cell of `c` with opposite orientations.
pub fn sphere_z2() -> FlowCategoryData {
    FlowCategoryData::new(Z)
        .with_object(FlowObject::new("c", 0, 0, circle(Z)))
        .with_object(FlowObject::new("p", 2, 2, point(Z)))
        .with_object(FlowObject::new("q", 2, 2, point(Z)))
        .with_correspondence(CorrespondenceMap::new("p", "c", single_block(0, 1)))
        .with_correspondence(CorrespondenceMap::new("q", "c", single_block(0, -1)))
}

/// Height on a flat torus tilted along one factor: two critical circles.
/// The only correspondence lands in degree 0 of the bottom circle and is zero.
pub fn torus_flat() -> FlowCategoryData {
    let zero = BTreeMap::from([(0, IntegerMatrix::zeros(1, 1))]);
    FlowCategoryData::new(Z)
        .with_object(FlowObject::new("bottom", 0, 0, circle(Z)))
        .with_object(FlowObject::new("top", 1, 1, circle(Z)))
        .with_correspondence(CorrespondenceMap::new("top", "bottom", zero))
}

/// The standard Morse function on the torus with four critical points.
pub fn torus_morse() -> FlowCategoryData {
    let spec = MorseSpec::new(&[("min", 0), ("s1", 1), ("s2", 1), ("max", 2)])
        .count("s1", "min", 0)
        .count("s2", "min", 0)
        .count("max", "s1", 0)
        .count("max", "s2", 0);
    morse_category(&spec, Z).expect("zero counts")
}

/// The projective plane: one cell in each dimension, the 2-cell attached with degree 2.
pub fn rp2(ring: CoefficientRing) -> FlowCategoryData {
    let spec = MorseSpec::new(&[("e0", 0), ("e1", 1), ("e2", 2)]).count("e2", "e1", 2).count("e1", "e0", 0);
    morse_category(&spec, ring).expect("counts compose to zero")
}

/// `CP^n` indexed by position: `n + 1` points with `μ = k` and framing rank `2k`.
pub fn cpn_act(n: usize) -> FlowCategoryData {
    let mut f = FlowCategoryData::new(Z);
    for k in 0..=n as i64 {
        f.objects.push(FlowObject::new(format!("x{k}"), k, 2 * k, point(Z)));
    }
    f
}

/// A three-object category with a length-two composite: `x -> y -> a` and
/// `x -> b`, where `a`, `b` are the cells of an interval-like object with `∂b = -a`.
/// With `perturb` the long correspondence is doubled and `D∘D` fails on `x`.
pub fn three_level(perturb: bool) -> FlowCategoryData {
    let interval = GradedChainComplex::new(Z, 0, vec![1, 1], vec![one_by_one(-1)]).expect("single differential");
    FlowCategoryData::new(Z)
        .with_object(FlowObject::new("x", 2, 2, point(Z)))
        .with_object(FlowObject::new("y", 1, 1, point(Z)))
        .with_object(FlowObject::new("ab", 0, 0, interval))
        .with_correspondence(CorrespondenceMap::new("x", "y", single_block(0, 1)))
        .with_correspondence(CorrespondenceMap::new("y", "ab", single_block(0, 1)))
        .with_correspondence(CorrespondenceMap::new("x", "ab", single_block(0, if perturb { 2 } else { 1 })))
}

/// A named fixture with the homology of the space it models.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub category: FlowCategoryData,
    /// `None` for fixtures that are deliberately invalid.
    pub expected: Option<HomologySummary>,
}

fn ranks(ring: CoefficientRing, r: &[(i64, usize)]) -> HomologySummary {
    HomologySummary::from_ranks(ring, r)
}

/// Every fixture shipped with the CLI, in a fixed order.
pub fn catalog() -> Vec<Fixture> {
    let mut rp2_h = ranks(Z, &[(0, 1)]);
    rp2_h.torsion.insert(1, vec![Int::from(2)]);
    let borel = borel_product(&BorelSpec::new(3, s2_rotation_fiber())).expect("valid Borel model");
    vec![
        Fixture {
            name: "s2_two_point",
            description: "height function on S^2: a minimum and a maximum",
            category: s2_two_point(),
            expected: Some(ranks(Z, &[(0, 1), (2, 1)])),
        },
        Fixture {
            name: "sphere_z2",
            description: "z^2 on S^2: equator circle and two poles",
            category: sphere_z2(),
            expected: Some(ranks(Z, &[(0, 1), (2, 1)])),
        },
        Fixture {
            name: "torus_flat",
            description: "two critical circles on T^2",
            category: torus_flat(),
            expected: Some(ranks(Z, &[(0, 1), (1, 2), (2, 1)])),
        },
        Fixture {
            name: "torus_morse",
            description: "standard Morse function on T^2 with four critical points",
            category: torus_morse(),
            expected: Some(ranks(Z, &[(0, 1), (1, 2), (2, 1)])),
        },
        Fixture {
            name: "rp2",
            description: "RP^2 with one critical point of each index",
            category: rp2(Z),
            expected: Some(rp2_h),
        },
        Fixture {
            name: "rp2_f2",
            description: "RP^2 over F_2",
            category: rp2(CoefficientRing::PrimeField(2)),
            expected: Some(ranks(CoefficientRing::PrimeField(2), &[(0, 1), (1, 1), (2, 1)])),
        },
        Fixture {
            name: "cp3_act",
            description: "CP^3 with position indexing and framing ranks 0, 2, 4, 6",
            category: cpn_act(3),
            expected: Some(ranks(Z, &[(0, 1), (2, 1), (4, 1), (6, 1)])),
        },
        Fixture {
            name: "cp_circle_2",
            description: "circle model of S^5 over CP^2",
            category: cp_circle_model(2),
            expected: Some(ranks(Z, &[(0, 1), (5, 1)])),
        },
        Fixture {
            name: "borel_s2_rotation_3",
            description: "Borel model of the rotation of S^2, truncated at level 3",
            category: borel,
            expected: Some(ranks(Z, &[(0, 1), (2, 2), (4, 2), (6, 2), (8, 1)])),
        },
        Fixture {
            name: "three_level",
            description: "acyclic category with a length-two composite",
            category: three_level(false),
            expected: Some(HomologySummary::empty(Z)),
        },
        Fixture {
            name: "broken_mc",
            description: "three_level with the long correspondence doubled; D^2 != 0",
            category: three_level(true),
            expected: None,
        },
    ]
}

pub fn fixture(name: &str) -> Option<Fixture> {
    catalog().into_iter().find(|f| f.name == name)
}
