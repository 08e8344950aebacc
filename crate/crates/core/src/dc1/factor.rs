//! A factor map onto the full 2-shift from a related pair, the entropy bound
//! it implies, and DC1 pairs near a related pair.

use super::{build_schedule, certify_dc1, dyadic_grid, gather_blocks, BlockGrid, DC1Schedule, Dc1Certificate};
use crate::chaingraph::ChainGraph;
use crate::error::{Error, Result};
use crate::pstar::{property_star, PStarOutcome};
use crate::relation::{check_property_p, related_at};
use crate::scalar::Scalar;
use crate::shadowing::shadow_sft;
use crate::symbolic::{SymbolSeq, DISTANCE_CAP};
use crate::systems::{discretize, BoxGeometry, Point, Subshift, SystemSpec};

/// Chains `γ_ij` of a common length `a` between the boxes of `x` (0) and
/// `y` (1). Any binary word `s` picks the pseudo-orbit
/// `γ_{s_1 s_2} γ_{s_2 s_3} …` and hence, by exact shadowing, a point whose
/// `a`-step orbit visits the boxes of `x_{s_1}, x_{s_2}, …`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorMap<S> {
    pub depth: usize,
    pub epsilon: S,
    pub graph: ChainGraph<S>,
    pub x: SymbolSeq,
    pub y: SymbolSeq,
    pub x_box: usize,
    pub y_box: usize,
    pub a: usize,
    /// `chains[i][j]` runs from box `i` to box `j`.
    pub chains: [[Vec<usize>; 2]; 2],
    pub sft: Subshift,
    pub sft_entropy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorSample<S> {
    pub s: Vec<u8>,
    pub point: SymbolSeq,
    /// `d(σ^{ia} point, x_{s_i})`.
    pub distances: Vec<S>,
    /// `σ^{ia} point` lies in the cylinder of `x_{s_i}`.
    pub in_cylinder: Vec<bool>,
    /// `d(σ^{ia} point, x_{s_i}) < ε`.
    pub within_epsilon: Vec<bool>,
}

impl<S: Scalar> FactorSample<S> {
    pub fn all_in_cylinder(&self) -> bool {
        self.in_cylinder.iter().all(|&b| b)
    }

    pub fn all_within_epsilon(&self) -> bool {
        self.within_epsilon.iter().all(|&b| b)
    }
}

fn word<S>(g: &ChainGraph<S>, v: usize) -> Vec<u8>
where
    S: Scalar,
{
    match g.geometry(v) {
        BoxGeometry::Word(w) => w.clone(),
        _ => unreachable!("factor maps live on word graphs"),
    }
}

impl<S: Scalar> FactorMap<S> {
    pub fn chain(&self, i: u8, j: u8) -> &[usize] {
        &self.chains[i as usize][j as usize]
    }

    /// Periodic point read off the closed chain `γ_ii`.
    pub fn loop_point(&self, i: u8) -> Result<SymbolSeq> {
        let c = self.chain(i, i);
        let symbols: Vec<u8> = c[..self.a].iter().map(|&v| word(&self.graph, v)[0]).collect();
        SymbolSeq::periodic(&symbols)
    }

    pub fn sample(&self, s: &[u8]) -> Result<FactorSample<S>> {
        if s.is_empty() || s.iter().any(|&b| b > 1) {
            return Err(Error::Input("sample word must be a non-empty binary word".into()));
        }
        let mut vertices = Vec::with_capacity((s.len() - 1) * self.a + 1);
        for w in s.windows(2) {
            vertices.extend_from_slice(&self.chain(w[0], w[1])[..self.a]);
        }
        vertices.push(if s[s.len() - 1] == 0 { self.x_box } else { self.y_box });
        let words: Vec<Vec<u8>> = vertices.iter().map(|&v| word(&self.graph, v)).collect();
        let point = shadow_sft(&words, self.depth, &self.sft)?;
        let mut distances = Vec::with_capacity(s.len());
        let mut in_cylinder = Vec::with_capacity(s.len());
        let mut within_epsilon = Vec::with_capacity(s.len());
        for (i, &b) in s.iter().enumerate() {
            let target = if b == 0 { &self.x } else { &self.y };
            let exp = point.shift_by(i * self.a).distance_exponent(target);
            let d = exp.map_or_else(S::zero, S::dyadic);
            in_cylinder.push(exp.is_none_or(|j| j as usize >= self.depth));
            within_epsilon.push(d < self.epsilon);
            distances.push(d);
        }
        Ok(FactorSample { s: s.to_vec(), point, distances, in_cylinder, within_epsilon })
    }
}

/// Builds the factor map for a related pair of symbolic points.
pub fn factor_construct<S: Scalar>(
    spec: &SystemSpec<S>,
    x: &Point<S>,
    y: &Point<S>,
    epsilon: &S,
) -> Result<FactorMap<S>> {
    let sft = spec
        .subshift()
        .ok_or_else(|| Error::NoShadowing(format!("a {} system has no exact shadowing", spec.kind_name())))?;
    spec.check_point(x)?;
    spec.check_point(y)?;
    let d = spec.distance(x, y)?;
    if *epsilon <= S::zero() || epsilon.clone() * S::from_usize(2) >= d {
        return Err(Error::Precondition(format!("need 0 < ε < d(x,y)/2 = {}", d / S::from_usize(2))));
    }
    let k = sft.depth();
    let g = discretize(spec, k, &S::dyadic(k as u32))?;
    let (xb, yb) = (spec.locate(g.cover(), x)?, spec.locate(g.cover(), y)?);
    if xb == yb {
        return Err(Error::Precondition(format!("x and y share the depth-{k} cylinder {}", g.label(xb))));
    }
    let dec = g.cyclic_decomposition();
    if !related_at(&dec, xb, yb).related {
        return Err(Error::Precondition(format!(
            "boxes {} and {} are not related",
            g.label(xb),
            g.label(yb)
        )));
    }
    let p = check_property_p(&g, &dec, xb, yb)?.ok_or_else(|| Error::NoCommonLength {
        level: 1,
        diagnostics: format!("no common chain length between {} and {}", g.label(xb), g.label(yb)),
    })?;
    Ok(FactorMap {
        depth: k,
        epsilon: epsilon.clone(),
        x: x.as_symbolic().unwrap().clone(),
        y: y.as_symbolic().unwrap().clone(),
        x_box: xb,
        y_box: yb,
        a: p.length,
        chains: [[p.uu, p.uv], [p.vu, p.vv]],
        sft_entropy: sft.entropy(),
        sft: sft.clone(),
        graph: g,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyBound {
    /// `log 2 / a`.
    pub bound: f64,
    /// `log ρ(A)` of the subshift.
    pub sft_entropy: f64,
}

pub fn entropy_lower_bound<S: Scalar>(f: &FactorMap<S>) -> EntropyBound {
    EntropyBound { bound: std::f64::consts::LN_2 / f.a as f64, sft_entropy: f.sft_entropy }
}

/// A DC1-evidence pair `(z, w)` within `ε` of a related pair `(x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NearPair<S> {
    pub depth: usize,
    pub factor: FactorMap<S>,
    pub z: SymbolSeq,
    pub w: SymbolSeq,
    pub dz: S,
    pub dw: S,
    pub r: S,
    pub schedule: DC1Schedule<S>,
    pub certificate: Dc1Certificate<S>,
}

/// Refines the cylinders until they fit in `ε`-balls, takes `z`, `w` as the
/// periodic points of the loops `γ_00`, `γ_11` of the factor map (they are
/// their own ω-limit), and certifies them with `u = 0^∞`, `v = (01)^∞`.
pub fn approximate_dc1_near<S: Scalar>(
    spec: &SystemSpec<S>,
    x: &Point<S>,
    y: &Point<S>,
    epsilon: &S,
    n_max: usize,
) -> Result<NearPair<S>> {
    let sft = spec
        .subshift()
        .ok_or_else(|| Error::NoShadowing(format!("a {} system has no exact shadowing", spec.kind_name())))?;
    if *epsilon <= S::zero() {
        return Err(Error::Precondition("ε must be positive".into()));
    }
    let fine = (0..=DISTANCE_CAP).find(|&j| S::dyadic(j) < *epsilon).unwrap_or(DISTANCE_CAP) as usize;
    let depth = sft.depth().max(fine);
    let spec = SystemSpec::Shift(sft.with_depth(depth)?);
    let factor = factor_construct(&spec, x, y, epsilon)?;
    let (z, w) = (factor.loop_point(0)?, factor.loop_point(1)?);
    let (zp, wp) = (Point::Symbolic(z.clone()), Point::Symbolic(w.clone()));
    let g = &factor.graph;
    let (zb, wb) = (spec.locate(g.cover(), &zp)?, spec.locate(g.cover(), &wp)?);
    let r = (0..=DISTANCE_CAP)
        .map(S::dyadic)
        .find(|r| matches!(property_star(g, zb, wb, r), Ok(PStarOutcome::Found(_))))
        .ok_or_else(|| Error::PropertyStar { level: 1, reason: "no dyadic radius admits a witness".into() })?;
    let blocks = gather_blocks(&spec, &zp, &wp, &r, n_max, &BlockGrid::Words)?;
    let schedule = build_schedule(blocks, n_max)?;
    let u = vec![0u8; n_max];
    let v: Vec<u8> = (0..n_max).map(|i| (i % 2) as u8).collect();
    let certificate = certify_dc1(&spec, &schedule, &u, &v, &dyadic_grid())?;
    Ok(NearPair {
        depth,
        dz: spec.distance(&zp, x)?,
        dw: spec.distance(&wp, y)?,
        z,
        w,
        r,
        factor,
        schedule,
        certificate,
    })
}
