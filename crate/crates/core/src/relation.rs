//! The chain relation `∼` at a fixed resolution and over resolution schedules.
//!
//! At a single resolution two chain-recurrent vertices are related exactly
//! when they share a class of the cyclic decomposition. The true relation is
//! a limit over all resolutions; [`relate_schedule`] only ever reports the
//! per-resolution facts it has computed.

use crate::chaingraph::{ChainGraph, ClassIndex, CyclicDecomposition};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::systems::{discretize, Point, SystemSpec};

/// Outcome of [`related_at`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairRelation {
    pub related: bool,
    pub u_class: Option<ClassIndex>,
    pub v_class: Option<ClassIndex>,
}

impl PairRelation {
    /// Set when one of the vertices is not chain recurrent.
    pub fn not_recurrent(&self) -> bool {
        self.u_class.is_none() || self.v_class.is_none()
    }
}

pub fn related_at(dec: &CyclicDecomposition, u: usize, v: usize) -> PairRelation {
    let (u_class, v_class) = (dec.class_of(u), dec.class_of(v));
    let related = matches!((u_class, v_class), (Some(a), Some(b)) if a == b);
    PairRelation { related, u_class, v_class }
}

/// One resolution of a schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationRecord<S> {
    pub boxes: usize,
    pub delta: S,
    pub u_box: usize,
    pub v_box: usize,
    pub relation: PairRelation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationVerdict<S> {
    pub records: Vec<RelationRecord<S>>,
    /// Conjunction over the tested resolutions; never a claim about the limit.
    pub related_for_all_tested: bool,
}

/// Discretises `spec` at every `(boxes, δ)` entry and records whether the
/// boxes of `u` and `v` are related there.
pub fn relate_schedule<S: Scalar>(
    spec: &SystemSpec<S>,
    u: &Point<S>,
    v: &Point<S>,
    schedule: &[(usize, S)],
) -> Result<RelationVerdict<S>> {
    if schedule.is_empty() {
        return Err(Error::Input("resolution schedule is empty".into()));
    }
    if schedule.windows(2).any(|w| w[0].1 <= w[1].1) {
        return Err(Error::Input("resolutions must be strictly decreasing".into()));
    }
    let mut records = Vec::with_capacity(schedule.len());
    for (boxes, delta) in schedule {
        let g = discretize(spec, *boxes, delta)?;
        let u_box = spec.locate(g.cover(), u)?;
        let v_box = spec.locate(g.cover(), v)?;
        let dec = g.cyclic_decomposition();
        records.push(RelationRecord {
            boxes: *boxes,
            delta: delta.clone(),
            u_box,
            v_box,
            relation: related_at(&dec, u_box, v_box),
        });
    }
    let related_for_all_tested = records.iter().all(|r| r.relation.related);
    Ok(RelationVerdict { records, related_for_all_tested })
}

/// Related pairs of distinct vertices at one resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntropyPairs {
    pub pairs: Vec<(usize, usize)>,
    /// Present when the system is not a subshift: without shadowing the
    /// related pairs need not be entropy pairs (rotations are the standard
    /// counterexample).
    pub shadowing_caveat: Option<String>,
}

pub fn entropy_pairs<S: Scalar>(g: &ChainGraph<S>, dec: &CyclicDecomposition) -> EntropyPairs {
    let mut pairs = Vec::new();
    for comp in &dec.components {
        for class in &comp.classes {
            for &a in class {
                for &b in class {
                    if a != b {
                        pairs.push((a, b));
                    }
                }
            }
        }
    }
    pairs.sort_unstable();
    let shadowing_caveat = match g.metric() {
        crate::systems::Metric::Symbolic => None,
        m => Some(format!(
            "shadowing not verified for this {} system; related pairs are entropy-pair candidates only",
            m.name()
        )),
    };
    EntropyPairs { pairs, shadowing_caveat }
}

/// Four chains of a common length `a` joining `u` and `v` in every direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyPWitness {
    pub length: usize,
    pub uu: Vec<usize>,
    pub uv: Vec<usize>,
    pub vu: Vec<usize>,
    pub vv: Vec<usize>,
}

impl PropertyPWitness {
    /// Chain from `i` to `j` with `0 ↦ u`, `1 ↦ v`.
    pub fn chain(&self, i: u8, j: u8) -> &[usize] {
        match (i, j) {
            (0, 0) => &self.uu,
            (0, _) => &self.uv,
            (_, 0) => &self.vu,
            _ => &self.vv,
        }
    }
}

/// Upper bound on the multiples of the period worth searching: the
/// primitivity exponent of the class plus one window of `|V|`.
pub(crate) fn length_search_bound(component_size: usize, vertices: usize) -> usize {
    (component_size - 1) * (component_size - 1) + 1 + vertices
}

/// Searches lengths `a = period·n` for a common length carrying all four chains.
pub fn check_property_p<S: Scalar>(
    g: &ChainGraph<S>,
    dec: &CyclicDecomposition,
    u: usize,
    v: usize,
) -> Result<Option<PropertyPWitness>> {
    if u >= g.len() || v >= g.len() {
        return Err(Error::Input(format!("unknown vertex in ({u},{v})")));
    }
    let rel = related_at(dec, u, v);
    if !rel.related {
        return Ok(None);
    }
    let comp = &dec.components[rel.u_class.unwrap().component];
    let bound = length_search_bound(comp.vertices.len(), g.len());
    for n in 1..=bound {
        let a = comp.period * n;
        let Some(uu) = g.find_chain(u, u, a)? else { continue };
        let Some(uv) = g.find_chain(u, v, a)? else { continue };
        let Some(vu) = g.find_chain(v, u, a)? else { continue };
        let Some(vv) = g.find_chain(v, v, a)? else { continue };
        return Ok(Some(PropertyPWitness { length: a, uu, uv, vu, vv }));
    }
    Ok(None)
}
