//! property*: equal-length cycles through two vertices that stay separated
//! index by index, found as a cycle of the separation-restricted product graph.

use std::collections::{HashMap, VecDeque};

use crate::chaingraph::ChainGraph;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::systems::{Point, SystemSpec};

/// Two cycles `cycle1` through `u` and `cycle2` through `v`, both of length
/// `k`, whose simultaneous entries are more than `r` apart after subtracting
/// the discretisation slack.
#[derive(Clone, Debug, PartialEq)]
pub struct PStarWitness<S> {
    pub r: S,
    pub k: usize,
    pub cycle1: Vec<usize>,
    pub cycle2: Vec<usize>,
    /// Raw center distances per index.
    pub separations: Vec<S>,
    /// `separation - slack - r` per index; all positive.
    pub margins: Vec<S>,
}

impl<S: Scalar> PStarWitness<S> {
    pub fn min_margin(&self) -> S {
        self.margins.iter().cloned().reduce(S::min_of).unwrap_or_else(S::zero)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PStarOutcome<S> {
    Found(PStarWitness<S>),
    Absent(String),
}

impl<S> PStarOutcome<S> {
    pub fn witness(&self) -> Option<&PStarWitness<S>> {
        match self {
            PStarOutcome::Found(w) => Some(w),
            PStarOutcome::Absent(_) => None,
        }
    }

    pub fn into_witness(self) -> Option<PStarWitness<S>> {
        match self {
            PStarOutcome::Found(w) => Some(w),
            PStarOutcome::Absent(_) => None,
        }
    }
}

/// Certified separation test used for product-graph vertices.
pub fn separated<S: Scalar>(g: &ChainGraph<S>, a: usize, b: usize, r: &S) -> bool {
    g.distance(a, b).clone() - g.pair_slack(a, b) > *r
}

/// Shortest cycle through `(u, v)` in the product graph restricted to
/// separated pairs. Product vertices are generated on demand.
pub fn property_star<S: Scalar>(g: &ChainGraph<S>, u: usize, v: usize, r: &S) -> Result<PStarOutcome<S>> {
    if u >= g.len() || v >= g.len() {
        return Err(Error::Input(format!("unknown vertex in ({u},{v})")));
    }
    if *r < S::zero() {
        return Err(Error::Input(format!("radius {r} is negative")));
    }
    if !separated(g, u, v, r) {
        return Ok(PStarOutcome::Absent("endpoints too close".into()));
    }
    let start = (u, v);
    let mut parent: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    parent.insert(start, start);
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        for &a in g.successors(cur.0) {
            for &b in g.successors(cur.1) {
                if !separated(g, a, b, r) {
                    continue;
                }
                let next = (a, b);
                if next == start {
                    return Ok(PStarOutcome::Found(build_witness(g, &parent, start, cur, r)));
                }
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                    e.insert(cur);
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(PStarOutcome::Absent("no separated product cycle through the pair".into()))
}

fn build_witness<S: Scalar>(
    g: &ChainGraph<S>,
    parent: &HashMap<(usize, usize), (usize, usize)>,
    start: (usize, usize),
    last: (usize, usize),
    r: &S,
) -> PStarWitness<S> {
    let mut path = vec![start];
    let mut cur = last;
    while cur != start {
        path.push(cur);
        cur = parent[&cur];
    }
    path.push(start);
    path.reverse();
    let cycle1: Vec<usize> = path.iter().map(|p| p.0).collect();
    let cycle2: Vec<usize> = path.iter().map(|p| p.1).collect();
    let separations: Vec<S> = path.iter().map(|&(a, b)| g.distance(a, b).clone()).collect();
    let margins = path
        .iter()
        .zip(&separations)
        .map(|(&(a, b), d)| d.clone() - g.pair_slack(a, b) - r.clone())
        .collect();
    PStarWitness { r: r.clone(), k: path.len() - 1, cycle1, cycle2, separations, margins }
}

/// Re-checks a witness from scratch: both sequences are cycles of the graph
/// through their endpoints and every index is certifiably separated.
pub fn verify_witness<S: Scalar>(g: &ChainGraph<S>, u: usize, v: usize, w: &PStarWitness<S>) -> Result<bool> {
    let k = w.k;
    if w.cycle1.len() != k + 1 || w.cycle2.len() != k + 1 {
        return Ok(false);
    }
    if w.cycle1[0] != u || w.cycle2[0] != v {
        return Ok(false);
    }
    let cycles = g.verify_chain(&w.cycle1, true)? && g.verify_chain(&w.cycle2, true)?;
    let apart = w.cycle1.iter().zip(&w.cycle2).all(|(&a, &b)| separated(g, a, b, &w.r));
    Ok(cycles && apart)
}

/// Box pairs visited by the tail of the product orbit of `(u, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaProduct {
    pub pairs: Vec<(usize, usize)>,
    /// True when the product orbit was found to be exactly eventually
    /// periodic, so `pairs` is the box image of the true ω-limit set.
    pub exact: bool,
}

pub fn omega_product<S: Scalar>(
    spec: &SystemSpec<S>,
    u: &Point<S>,
    v: &Point<S>,
    horizon: usize,
    grid: usize,
) -> Result<OmegaProduct> {
    if horizon == 0 {
        return Err(Error::Input("horizon must be at least 1".into()));
    }
    spec.check_point(u)?;
    spec.check_point(v)?;
    let cover = spec.cover(grid)?;
    let locate = |x: &Point<S>, y: &Point<S>| -> Result<(usize, usize)> {
        Ok((spec.locate(&cover, x)?, spec.locate(&cover, y)?))
    };
    let mut pairs = Vec::new();
    if let (Point::Symbolic(a), Point::Symbolic(b)) = (u, v) {
        let start = a.preperiod().max(b.preperiod());
        let period = num::integer::lcm(a.period(), b.period());
        for t in start..start + period {
            let x = Point::Symbolic(a.shift_by(t));
            let y = Point::Symbolic(b.shift_by(t));
            pairs.push(locate(&x, &y)?);
        }
        pairs.sort_unstable();
        pairs.dedup();
        return Ok(OmegaProduct { pairs, exact: true });
    }
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut states = Vec::with_capacity(horizon);
    let (mut x, mut y) = (u.clone(), v.clone());
    for t in 0..horizon {
        let key = format!("{x}|{y}");
        if let Some(&s) = seen.get(&key) {
            for (a, b) in &states[s..t] {
                pairs.push(locate(a, b)?);
            }
            pairs.sort_unstable();
            pairs.dedup();
            return Ok(OmegaProduct { pairs, exact: true });
        }
        seen.insert(key, t);
        let (nx, ny) = (spec.step(&x), spec.step(&y));
        states.push((x, y));
        x = nx;
        y = ny;
    }
    let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
    for (a, b) in &states[horizon / 2..] {
        *counts.entry(locate(a, b)?).or_default() += 1;
    }
    pairs = counts.into_iter().filter(|&(_, c)| c >= 2).map(|(p, _)| p).collect();
    pairs.sort_unstable();
    Ok(OmegaProduct { pairs, exact: false })
}
