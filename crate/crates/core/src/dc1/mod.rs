//! DC1 pairs from separated cycles.
//!
//! Two related vertices `z`, `w` with a separated product cycle give, at every
//! level `n`, four chains of a common length `a_n`: cycles `γ0` through `z`
//! and `γ1` through `w` that stay more than `r` apart, and connectors
//! `α: z → w`, `β: w → z`. Concatenating `γ0^{m_n}` or `α γ1^{m_n−2} β` along a
//! binary sequence `u` yields a pseudo-orbit `ξ(u)`; on a shift of finite
//! type its read-off point is a true orbit tracking it. Statistics of two
//! such points at the checkpoints `c_n` are the finite-scale evidence for
//! distributional chaos.
//!
//! Everything reported here is per checkpoint. No limit statement is made.

pub mod factor;
pub mod schedule;
pub mod stats;
pub mod xi;

use std::collections::VecDeque;

use num::{BigInt, ToPrimitive};

pub use factor::{
    approximate_dc1_near, entropy_lower_bound, factor_construct, EntropyBound, FactorMap, FactorSample,
    NearPair,
};
pub use schedule::{minimal_repetition, schedule_lengths, LengthRow};
pub use stats::{dyadic_grid, pair_buckets, pair_statistics, CheckpointStats, ExponentHistogram, PairStatistics};
pub use xi::{build_xi, Segment, XiOrbit};

use crate::chaingraph::ChainGraph;
use crate::error::{Error, Result};
use crate::pstar::{property_star, PStarOutcome};
use crate::relation::{length_search_bound, related_at};
use crate::scalar::Scalar;
use crate::shadowing::complete_word;
use crate::symbolic::SymbolSeq;
use crate::systems::{discretize, BoxGeometry, Point, SystemSpec};
use stats::{stream_statistics, Stream, Tracker};

/// Resolutions used for the levels of a block search.
#[derive(Clone, Debug, PartialEq)]
pub enum BlockGrid<S> {
    /// One word graph at the subshift's own depth serves every level.
    Words,
    /// `(boxes, δ)` for level `n` at index `n − 1`.
    Boxes(Vec<(usize, S)>),
}

/// The four chains of level `n`, each of `a + 1` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelBlocks {
    pub n: usize,
    pub graph: usize,
    pub z_box: usize,
    pub w_box: usize,
    pub a: usize,
    pub gamma0: Vec<usize>,
    pub gamma1: Vec<usize>,
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Blocks<S> {
    pub r: S,
    pub z: Point<S>,
    pub w: Point<S>,
    pub graphs: Vec<ChainGraph<S>>,
    pub levels: Vec<LevelBlocks>,
}

impl<S: Scalar> Blocks<S> {
    /// Re-checks lengths, endpoints, chain edges and pointwise separation.
    pub fn verify(&self) -> Result<bool> {
        for lb in &self.levels {
            let g = &self.graphs[lb.graph];
            let (z, w) = (lb.z_box, lb.w_box);
            let ends = |c: &[usize], s: usize, e: usize| c.len() == lb.a + 1 && c[0] == s && c[lb.a] == e;
            if !(ends(&lb.gamma0, z, z) && ends(&lb.gamma1, w, w) && ends(&lb.alpha, z, w) && ends(&lb.beta, w, z)) {
                return Ok(false);
            }
            for c in [&lb.gamma0, &lb.gamma1, &lb.alpha, &lb.beta] {
                if !g.verify_chain(c, false)? {
                    return Ok(false);
                }
            }
            let apart = lb
                .gamma0
                .iter()
                .zip(&lb.gamma1)
                .all(|(&p, &q)| crate::pstar::separated(g, p, q, &self.r));
            if !apart {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn repeat_cycle(cycle: &[usize], times: usize) -> Vec<usize> {
    let k = cycle.len() - 1;
    let mut out = Vec::with_capacity(k * times + 1);
    for _ in 0..times {
        out.extend_from_slice(&cycle[..k]);
    }
    out.push(cycle[0]);
    out
}

fn level_blocks<S: Scalar>(
    g: &ChainGraph<S>,
    graph: usize,
    n: usize,
    z_box: usize,
    w_box: usize,
    r: &S,
) -> Result<LevelBlocks> {
    let dec = g.cyclic_decomposition();
    let rel = related_at(&dec, z_box, w_box);
    if !rel.related {
        return Err(Error::Precondition(format!(
            "z and w are not related at level {n} (boxes {} and {})",
            g.label(z_box),
            g.label(w_box)
        )));
    }
    let witness = match property_star(g, z_box, w_box, r)? {
        PStarOutcome::Found(w) => w,
        PStarOutcome::Absent(reason) => return Err(Error::PropertyStar { level: n, reason }),
    };
    let comp = &dec.components[rel.u_class.unwrap().component];
    let bound = length_search_bound(comp.vertices.len(), g.len());
    for t in 1..=bound {
        let a = t * witness.k;
        let Some(alpha) = g.find_chain(z_box, w_box, a)? else { continue };
        let Some(beta) = g.find_chain(w_box, z_box, a)? else { continue };
        return Ok(LevelBlocks {
            n,
            graph,
            z_box,
            w_box,
            a,
            gamma0: repeat_cycle(&witness.cycle1, t),
            gamma1: repeat_cycle(&witness.cycle2, t),
            alpha,
            beta,
        });
    }
    let (cz, cw) = (rel.u_class.unwrap().class, rel.v_class.unwrap().class);
    Err(Error::NoCommonLength {
        level: n,
        diagnostics: format!(
            "z in class {cz}, w in class {cw} of period {}; separated cycle length {}; \
             no connectors of length t*{} for t <= {bound}",
            comp.period, witness.k, witness.k
        ),
    })
}

/// Chains for levels `1..=n_max`.
pub fn gather_blocks<S: Scalar>(
    spec: &SystemSpec<S>,
    z: &Point<S>,
    w: &Point<S>,
    r: &S,
    n_max: usize,
    grid: &BlockGrid<S>,
) -> Result<Blocks<S>> {
    if n_max == 0 {
        return Err(Error::Input("need at least one level".into()));
    }
    spec.check_point(z)?;
    spec.check_point(w)?;
    let mut graphs = Vec::new();
    let mut levels = Vec::with_capacity(n_max);
    match grid {
        BlockGrid::Words => {
            let sft = spec
                .subshift()
                .ok_or_else(|| Error::Input("word grids need a subshift".into()))?;
            let k = sft.depth();
            let g = discretize(spec, k, &S::dyadic(k as u32))?;
            let (zb, wb) = (spec.locate(g.cover(), z)?, spec.locate(g.cover(), w)?);
            let first = level_blocks(&g, 0, 1, zb, wb, r)?;
            graphs.push(g);
            for n in 1..=n_max {
                levels.push(LevelBlocks { n, ..first.clone() });
            }
        }
        BlockGrid::Boxes(res) => {
            if res.len() < n_max {
                return Err(Error::Input(format!("{} resolutions given for {n_max} levels", res.len())));
            }
            for (i, (boxes, delta)) in res.iter().take(n_max).enumerate() {
                let g = discretize(spec, *boxes, delta)?;
                let (zb, wb) = (spec.locate(g.cover(), z)?, spec.locate(g.cover(), w)?);
                levels.push(level_blocks(&g, i, i + 1, zb, wb, r)?);
                graphs.push(g);
            }
        }
    }
    Ok(Blocks { r: r.clone(), z: z.clone(), w: w.clone(), graphs, levels })
}

/// Blocks together with the repetition counts.
#[derive(Clone, Debug, PartialEq)]
pub struct DC1Schedule<S> {
    pub blocks: Blocks<S>,
    pub rows: Vec<LengthRow>,
}

impl<S> DC1Schedule<S> {
    pub fn checkpoint(&self, n: usize) -> Option<&BigInt> {
        self.rows.get(n.checked_sub(1)?).map(|r| &r.c)
    }
}

pub fn build_schedule<S: Scalar>(blocks: Blocks<S>, n_max: usize) -> Result<DC1Schedule<S>> {
    if n_max == 0 || n_max > blocks.levels.len() {
        return Err(Error::Input(format!(
            "cannot schedule {n_max} levels from {} gathered",
            blocks.levels.len()
        )));
    }
    let a: Vec<BigInt> = blocks.levels[..n_max].iter().map(|l| BigInt::from(l.a)).collect();
    let rows = schedule_lengths(&a)?;
    let mut blocks = blocks;
    blocks.levels.truncate(n_max);
    Ok(DC1Schedule { blocks, rows })
}

fn word_of<S>(g: &ChainGraph<S>, v: usize) -> Result<&[u8]>
where
    S: Scalar,
{
    match g.geometry(v) {
        BoxGeometry::Word(w) => Ok(w),
        _ => Err(Error::NoShadowing(format!("vertex {v} is not a cylinder"))),
    }
}

/// Shortest cycle through `v`, as the periodic point it reads off.
fn cycle_point<S: Scalar>(g: &ChainGraph<S>, v: usize) -> Result<SymbolSeq> {
    let mut parent = vec![usize::MAX; g.len()];
    let mut queue = VecDeque::new();
    for &s in g.successors(v) {
        if parent[s] == usize::MAX {
            parent[s] = v;
            queue.push_back(s);
        }
    }
    while let Some(x) = queue.pop_front() {
        if x == v {
            let mut cycle = vec![v];
            let mut cur = parent[v];
            while cur != v {
                cycle.push(cur);
                cur = parent[cur];
            }
            cycle.reverse();
            // `cycle` is now v's predecessor chain ending at v; rotate v to front.
            cycle.rotate_right(1);
            let symbols =
                cycle.iter().map(|&u| word_of(g, u).map(|w| w[0])).collect::<Result<Vec<u8>>>()?;
            return SymbolSeq::periodic(&symbols);
        }
        for &s in g.successors(x) {
            if parent[s] == usize::MAX {
                parent[s] = x;
                queue.push_back(s);
            }
        }
    }
    Err(Error::Precondition(format!("vertex {} lies on no cycle", g.label(v))))
}

/// Shadow point of `ξ(u)` and the streams used to measure it.
pub struct ShadowedXi {
    pub xi: XiOrbit,
    /// Point after the last entry: the completion of the terminal word.
    pub tail: SymbolSeq,
}

impl ShadowedXi {
    /// The whole shadow point; allocates one byte per entry.
    pub fn point<S: Scalar>(&self, g: &ChainGraph<S>) -> Result<SymbolSeq> {
        let n = self.xi.len() - 1;
        let mut prefix = Vec::with_capacity(n as usize + self.tail.preperiod());
        for v in self.xi.iter().take(n as usize) {
            prefix.push(word_of(g, v)?[0]);
        }
        prefix.extend_from_slice(self.tail.prefix());
        SymbolSeq::new(prefix, self.tail.cycle().to_vec())
    }

    fn stream<'a, S: Scalar>(&'a self, g: &'a ChainGraph<S>, firsts: &'a [u8]) -> Stream<'a> {
        let _ = g;
        Stream {
            len: self.xi.len() - 1,
            rev: Box::new(self.xi.iter_rev().skip(1).map(move |v| (firsts[v], v))),
            tail: self.tail.clone(),
            terminal: self.xi.terminal(),
        }
    }
}

fn sft_graph<'a, S: Scalar>(spec: &SystemSpec<S>, sched: &'a DC1Schedule<S>) -> Result<&'a ChainGraph<S>> {
    if !spec.is_subshift() {
        return Err(Error::NoShadowing(format!("a {} system has no exact shadowing", spec.kind_name())));
    }
    if sched.blocks.levels.iter().any(|l| l.graph != 0) || sched.blocks.graphs.len() != 1 {
        return Err(Error::NoShadowing("blocks must come from a single word graph".into()));
    }
    Ok(&sched.blocks.graphs[0])
}

/// Builds `ξ(u)` and its read-off shadow point.
pub fn shadow_xi<S: Scalar>(spec: &SystemSpec<S>, sched: &DC1Schedule<S>, u: &[u8]) -> Result<ShadowedXi> {
    let g = sft_graph(spec, sched)?;
    let sft = spec.subshift().unwrap();
    let xi = build_xi(u, sched)?;
    let tail = complete_word(sft, word_of(g, xi.terminal())?.to_vec())?;
    Ok(ShadowedXi { xi, tail })
}

/// Representative point of every vertex used by the schedule: `z` and `w`
/// for their own boxes, otherwise the shortest cycle through the vertex.
fn representatives<S: Scalar>(g: &ChainGraph<S>, sched: &DC1Schedule<S>) -> Result<Vec<Option<SymbolSeq>>> {
    let mut reps: Vec<Option<SymbolSeq>> = vec![None; g.len()];
    let b = &sched.blocks;
    for lb in &b.levels {
        for v in lb.gamma0.iter().chain(&lb.gamma1).chain(&lb.alpha).chain(&lb.beta) {
            if reps[*v].is_none() {
                reps[*v] = Some(cycle_point(g, *v)?);
            }
        }
        if let Some(z) = b.z.as_symbolic() {
            reps[lb.z_box] = Some(z.clone());
        }
        if let Some(w) = b.w.as_symbolic() {
            reps[lb.w_box] = Some(w.clone());
        }
    }
    Ok(reps)
}

/// Statistics of the shadow points of `ξ(u)` and `ξ(v)` at the checkpoints
/// `c_1, …, c_{|u|}`, including tracking averages against representatives.
pub fn dc1_statistics<S: Scalar>(
    spec: &SystemSpec<S>,
    sched: &DC1Schedule<S>,
    u: &[u8],
    v: &[u8],
    delta_grid: &[S],
    s_grid: &[S],
) -> Result<PairStatistics<S>> {
    if u.len() != v.len() {
        return Err(Error::Input("binary prefixes must have equal length".into()));
    }
    let g = sft_graph(spec, sched)?;
    let (x0, x1) = (shadow_xi(spec, sched, u)?, shadow_xi(spec, sched, v)?);
    let firsts = (0..g.len()).map(|v| word_of(g, v).map(|w| w[0])).collect::<Result<Vec<u8>>>()?;
    let tracker = Tracker::new(&representatives(g, sched)?);
    let checkpoints = (1..=u.len())
        .map(|n| {
            sched.rows[n - 1]
                .c
                .to_u64()
                .map(|c| (n, c))
                .ok_or_else(|| Error::Input(format!("checkpoint {n} is too large")))
        })
        .collect::<Result<Vec<_>>>()?;
    stream_statistics(
        x0.stream(g, &firsts),
        x1.stream(g, &firsts),
        Some(&tracker),
        &checkpoints,
        delta_grid,
        s_grid,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// Matching symbols: `|{d < δ}| > c(1 − 1/n − 2δ⁻¹(ε0+ε1))`.
    Closeness,
    /// Differing symbols: `|{d > r/3}| > c(1 − 1/n − 3r⁻¹(ε0+ε1))`.
    Separation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelCheck<S> {
    pub n: usize,
    pub checkpoint: u64,
    pub kind: BoundKind,
    /// `δ` or `r/3`.
    pub threshold: S,
    pub measured: u64,
    pub eps: (S, S),
    pub bound: S,
    /// `measured − bound`.
    pub margin: S,
    /// `measured/c − (1 − 1/n)`, the bound with the tracking terms dropped.
    pub fraction_margin: S,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dc1Certificate<S> {
    pub u: Vec<u8>,
    pub v: Vec<u8>,
    pub r: S,
    pub checks: Vec<LevelCheck<S>>,
    pub passed: bool,
    pub verdict: String,
}

impl<S: Scalar> Dc1Certificate<S> {
    pub fn min_margin(&self, kind: BoundKind) -> Option<S> {
        self.checks.iter().filter(|c| c.kind == kind).map(|c| c.margin.clone()).reduce(S::min_of)
    }
}

/// Checks, at every level, the closeness bound (matching symbols, every δ
/// in the grid) or the separation bound (differing symbols, `r/3`).
pub fn certify_dc1<S: Scalar>(
    spec: &SystemSpec<S>,
    sched: &DC1Schedule<S>,
    u: &[u8],
    v: &[u8],
    delta_grid: &[S],
) -> Result<Dc1Certificate<S>> {
    sft_graph(spec, sched)?;
    if u == v {
        return Err(Error::Precondition("no separation checkpoints".into()));
    }
    if u.len() != v.len() {
        return Err(Error::Input("binary prefixes must have equal length".into()));
    }
    if !u.iter().zip(v).any(|(a, b)| a == b) {
        return Err(Error::Precondition("no closeness checkpoints".into()));
    }
    let r = sched.blocks.r.clone();
    let third = r.clone() / S::from_usize(3);
    let stats = dc1_statistics(spec, sched, u, v, delta_grid, std::slice::from_ref(&third))?;
    let mut checks = Vec::new();
    for (cp, (a, b)) in stats.checkpoints.iter().zip(u.iter().zip(v)) {
        let (e0, e1) = cp.eps.clone().unwrap();
        let c = S::from_usize(cp.c as usize);
        let n = S::from_usize(cp.n);
        let base = S::one() - S::one() / n;
        let mut push = |kind, threshold: S, measured: u64, weight: S| {
            let bound = c.clone() * (base.clone() - weight * (e0.clone() + e1.clone()));
            let m = S::from_usize(measured as usize);
            checks.push(LevelCheck {
                n: cp.n,
                checkpoint: cp.c,
                kind,
                threshold,
                measured,
                eps: (e0.clone(), e1.clone()),
                margin: m.clone() - bound.clone(),
                fraction_margin: m / c.clone() - base.clone(),
                passed: S::from_usize(measured as usize) > bound,
                bound,
            });
        };
        if a == b {
            for (j, delta) in delta_grid.iter().enumerate() {
                let weight = S::from_usize(2) / delta.clone();
                push(BoundKind::Closeness, delta.clone(), cp.closeness[j], weight);
            }
        } else {
            let weight = S::from_usize(3) / r.clone();
            push(BoundKind::Separation, third.clone(), cp.separation[0], weight);
        }
    }
    let failed = checks.iter().find(|c| !c.passed).map(|c| c.n);
    let verdict = match failed {
        None => format!("finite-scale DC1 evidence to level {}", u.len()),
        Some(n) => format!("finite-scale DC1 evidence fails at level {n}"),
    };
    Ok(Dc1Certificate { u: u.to_vec(), v: v.to_vec(), r, checks, passed: failed.is_none(), verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from_ratio(p, d)
    }

    fn sym(s: &str) -> Point<Rational> {
        Point::Symbolic(SymbolSeq::parse(s).unwrap())
    }

    #[test]
    fn full_shift_blocks() {
        let spec = SystemSpec::<Rational>::full_shift(1);
        let b = gather_blocks(&spec, &sym("(0)"), &sym("(1)"), &q(1, 2), 3, &BlockGrid::Words).unwrap();
        for lb in &b.levels {
            assert_eq!(lb.a, 1);
            assert_eq!(lb.gamma0, vec![0, 0]);
            assert_eq!(lb.gamma1, vec![1, 1]);
            assert_eq!(lb.alpha, vec![0, 1]);
            assert_eq!(lb.beta, vec![1, 0]);
        }
        assert!(b.verify().unwrap());
    }

    #[test]
    fn golden_mean_blocks() {
        let spec = SystemSpec::<Rational>::golden_mean(2);
        let b = gather_blocks(&spec, &sym("(0)"), &sym("(01)"), &q(1, 4), 2, &BlockGrid::Words).unwrap();
        let g = &b.graphs[0];
        let lb = &b.levels[0];
        assert_eq!(lb.a, 2);
        let labels = |c: &[usize]| c.iter().map(|&v| g.label(v)).collect::<Vec<_>>();
        assert_eq!(labels(&lb.gamma0), ["00", "00", "00"]);
        assert_eq!(labels(&lb.gamma1), ["01", "10", "01"]);
        assert!(b.verify().unwrap());
    }

    #[test]
    fn unrelated_endpoints_are_refused() {
        let g = ChainGraph::<Rational>::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(matches!(level_blocks(&g, 0, 1, 0, 1, &q(1, 2)), Err(Error::Precondition(_))));
    }

    #[test]
    fn xi_words_for_short_prefixes() {
        let spec = SystemSpec::<Rational>::full_shift(1);
        let b = gather_blocks(&spec, &sym("(0)"), &sym("(1)"), &q(1, 2), 2, &BlockGrid::Words).unwrap();
        let s = build_schedule(b, 2).unwrap();
        assert_eq!(build_xi(&[0], &s).unwrap().entries(), vec![0, 0, 0]);
        let xi = build_xi(&[0, 1], &s).unwrap();
        assert_eq!(xi.entries()[2..], [0, 1, 1, 1, 1, 1, 0]);
        assert_eq!(xi.len(), 2 + 6 + 1);
        assert_eq!(xi.block_range(2), Some((2, 8)));
        let mut rev = xi.entries();
        rev.reverse();
        assert_eq!(xi.iter_rev().collect::<Vec<_>>(), rev);
    }

    #[test]
    fn full_shift_certificate_passes() {
        let spec = SystemSpec::<Rational>::full_shift(1);
        let b = gather_blocks(&spec, &sym("(0)"), &sym("(1)"), &q(1, 2), 8, &BlockGrid::Words).unwrap();
        let s = build_schedule(b, 8).unwrap();
        let u = [0u8; 8];
        let v = [0u8, 1, 0, 1, 0, 1, 0, 1];
        let cert = certify_dc1(&spec, &s, &u, &v, &dyadic_grid()).unwrap();
        assert!(cert.passed, "{cert:?}");
        assert_eq!(cert.verdict, "finite-scale DC1 evidence to level 8");
        assert!(matches!(certify_dc1(&spec, &s, &u, &u, &dyadic_grid()), Err(Error::Precondition(_))));
    }

    #[test]
    fn box_systems_have_no_certificate() {
        let spec = SystemSpec::<Rational>::doubling();
        let grid = BlockGrid::Boxes(vec![(8, q(1, 8))]);
        let b = gather_blocks(&spec, &Point::Real(q(0, 1)), &Point::Real(q(1, 2)), &q(1, 4), 1, &grid);
        let s = build_schedule(b.unwrap(), 1).unwrap();
        assert!(matches!(certify_dc1(&spec, &s, &[0], &[1], &dyadic_grid()), Err(Error::NoShadowing(_))));
        assert!(matches!(
            dc1_statistics(&spec, &s, &[0], &[1], &dyadic_grid(), &dyadic_grid()),
            Err(Error::NoShadowing(_))
        ));
    }
}
