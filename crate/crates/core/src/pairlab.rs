//! Finite-horizon pair classification, thick sets, and the path from a
//! Li–Yorke pair to a related pair with property*.
//!
//! Proximal, distal and Li–Yorke are limit notions. Everything here is
//! evidence at an explicit horizon with explicit thresholds.

use std::collections::HashMap;

use crate::dc1::stats::{bucket_distance, pair_buckets};
use crate::error::{Error, Result};
use crate::pstar::{property_star, PStarOutcome, PStarWitness};
use crate::relation::{related_at, relate_schedule, PairRelation, RelationVerdict};
use crate::scalar::Scalar;
use crate::symbolic::{SymbolSeq, DISTANCE_CAP};
use crate::systems::{discretize, Point, SystemSpec};

#[derive(Clone, Debug, PartialEq)]
pub struct Thresholds<S> {
    /// Distances below this count as close.
    pub low: S,
    /// Tail distances above this count as far.
    pub high: S,
}

impl<S: Scalar> Default for Thresholds<S> {
    fn default() -> Self {
        Thresholds { low: S::dyadic(8), high: S::dyadic(2) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairLabel {
    ProximalEvidence,
    DistalEvidence,
    LiYorkeEvidence,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairClass<S> {
    pub horizon: usize,
    pub min_distance: S,
    /// `min` over the tail `[H/2, H)`, a liminf proxy.
    pub tail_min: S,
    /// `max` over the tail `[H/2, H)`, a limsup proxy.
    pub tail_max: S,
    pub labels: Vec<PairLabel>,
}

impl<S> PairClass<S> {
    pub fn has(&self, label: PairLabel) -> bool {
        self.labels.contains(&label)
    }
}

/// `d(f^i x, f^i y)` for `i < h`. Symbolic distances below `2^-64` are
/// reported as `2^-64`.
pub fn orbit_distances<S: Scalar>(spec: &SystemSpec<S>, x: &Point<S>, y: &Point<S>, h: usize) -> Result<Vec<S>> {
    spec.check_point(x)?;
    spec.check_point(y)?;
    if let (Point::Symbolic(a), Point::Symbolic(b)) = (x, y) {
        return Ok(pair_buckets(a, b, h).into_iter().map(bucket_distance).collect());
    }
    let (ox, oy) = (spec.orbit(x, h)?, spec.orbit(y, h)?);
    ox.iter().zip(&oy).map(|(a, b)| spec.distance(a, b)).collect()
}

fn classify_distances<S: Scalar>(d: &[S], t: &Thresholds<S>) -> PairClass<S> {
    let h = d.len();
    let tail = &d[h / 2..];
    let min = d.iter().cloned().reduce(S::min_of).unwrap();
    let tail_min = tail.iter().cloned().reduce(S::min_of).unwrap();
    let tail_max = tail.iter().cloned().reduce(S::max_of).unwrap();
    let mut labels = Vec::new();
    let proximal = min < t.low;
    if proximal {
        labels.push(PairLabel::ProximalEvidence);
        if tail_max > t.high {
            labels.push(PairLabel::LiYorkeEvidence);
        }
    } else if min > t.low.clone() * S::from_usize(2) {
        labels.push(PairLabel::DistalEvidence);
    }
    PairClass { horizon: h, min_distance: min, tail_min, tail_max, labels }
}

pub fn classify_pair<S: Scalar>(
    spec: &SystemSpec<S>,
    x: &Point<S>,
    y: &Point<S>,
    horizon: usize,
    thresholds: &Thresholds<S>,
) -> Result<PairClass<S>> {
    if horizon < 2 {
        return Err(Error::Input("horizon must be at least 2".into()));
    }
    Ok(classify_distances(&orbit_distances(spec, x, y, horizon)?, thresholds))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThickProfile {
    pub horizon: usize,
    pub max_run: usize,
    /// Start of the first longest run.
    pub max_run_start: usize,
    /// Entry `n − 1` records whether some run of `n` consecutive members exists.
    pub levels: Vec<bool>,
}

impl ThickProfile {
    pub fn thick_to(&self) -> usize {
        self.levels.iter().take_while(|&&b| b).count()
    }
}

/// Run-length profile of the first `horizon` bits.
pub fn thick_profile(bits: &[bool], horizon: usize) -> Result<ThickProfile> {
    if bits.len() < horizon {
        return Err(Error::Input(format!("{} bits given for horizon {horizon}", bits.len())));
    }
    let (mut best, mut best_start, mut run) = (0, 0, 0);
    for (i, &b) in bits[..horizon].iter().enumerate() {
        run = if b { run + 1 } else { 0 };
        if run > best {
            best = run;
            best_start = i + 1 - run;
        }
    }
    Ok(ThickProfile {
        horizon,
        max_run: best,
        max_run_start: best_start,
        levels: (1..=horizon).map(|n| n <= best).collect(),
    })
}

/// A pair taken from the product recurrence of `(x, y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Recurrence<S> {
    pub z: Point<S>,
    pub w: Point<S>,
    /// The product orbit was exactly eventually periodic within the horizon,
    /// so `(z, w)` is a true ω-limit pair.
    pub exact: bool,
    pub how: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RecurrenceOutcome<S> {
    Found(Recurrence<S>),
    Inconclusive(String),
}

/// Longest run of indices with `d_i > δ0`, as `(start, length)`.
fn separation_run<S: Scalar>(d: &[S], delta0: &S) -> (usize, usize) {
    let bits: Vec<bool> = d.iter().map(|x| x > delta0).collect();
    let p = thick_profile(&bits, bits.len()).expect("horizon equals length");
    (p.max_run_start, p.max_run)
}

/// Exact ω-limit pairs when the product orbit closes up inside the horizon.
fn exact_omega<S: Scalar>(spec: &SystemSpec<S>, x: &Point<S>, y: &Point<S>, h: usize) -> Option<Vec<(Point<S>, Point<S>)>> {
    if let (Point::Symbolic(a), Point::Symbolic(b)) = (x, y) {
        let t0 = a.preperiod().max(b.preperiod());
        let l = num::integer::lcm(a.period(), b.period());
        if t0 + l > h {
            return None;
        }
        let pairs = (t0..t0 + l)
            .map(|t| (Point::Symbolic(a.shift_by(t)), Point::Symbolic(b.shift_by(t))))
            .collect();
        return Some(pairs);
    }
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut states = Vec::new();
    let (mut p, mut q) = (x.clone(), y.clone());
    for t in 0..h {
        if let Some(&s) = seen.get(&format!("{p}|{q}")) {
            return Some(states[s..t].to_vec());
        }
        seen.insert(format!("{p}|{q}"), t);
        let next = (spec.evaluate(&p).ok()?, spec.evaluate(&q).ok()?);
        states.push((p, q));
        (p, q) = next;
    }
    None
}

/// Smallest `P ≤ len/2` for which the window is `P`-periodic, else `len`.
fn window_period(pairs: &[(u8, u8)]) -> usize {
    let n = pairs.len();
    (1..=n / 2).find(|&p| (p..n).all(|i| pairs[i] == pairs[i - p])).unwrap_or(n)
}

/// Picks `(z, w)` from the recurrence of `(x, y)`: the farthest pair of the
/// exact ω-limit when it is visible within the horizon, otherwise the
/// repeating pattern in the second half of the longest separation run.
pub fn recurrent_pair<S: Scalar>(
    spec: &SystemSpec<S>,
    x: &Point<S>,
    y: &Point<S>,
    horizon: usize,
    delta0: &S,
    min_run: usize,
) -> Result<RecurrenceOutcome<S>> {
    if let Some(omega) = exact_omega(spec, x, y, horizon) {
        let mut best: Option<(S, &(Point<S>, Point<S>))> = None;
        for pair in &omega {
            let d = spec.distance(&pair.0, &pair.1)?;
            if best.as_ref().is_none_or(|(b, _)| d > *b) {
                best = Some((d, pair));
            }
        }
        let (d, (z, w)) = best.unwrap();
        if d.is_zero() {
            return Ok(RecurrenceOutcome::Inconclusive("ω-limit lies on the diagonal".into()));
        }
        return Ok(RecurrenceOutcome::Found(Recurrence {
            z: z.clone(),
            w: w.clone(),
            exact: true,
            how: format!("farthest pair of the periodic product orbit ({} pairs)", omega.len()),
        }));
    }
    let d = orbit_distances(spec, x, y, horizon)?;
    let (start, len) = separation_run(&d, delta0);
    if len < min_run.max(1) {
        return Ok(RecurrenceOutcome::Inconclusive(format!(
            "no separation run of length {} within horizon {horizon}",
            min_run.max(1)
        )));
    }
    match (x, y) {
        (Point::Symbolic(a), Point::Symbolic(b)) => {
            // The second half of the run: its edges carry boundary effects.
            let from = start + len / 2;
            let window: Vec<(u8, u8)> = (from..start + len).map(|i| (a.symbol(i), b.symbol(i))).collect();
            let p = window_period(&window);
            let z = SymbolSeq::periodic(&window[..p].iter().map(|s| s.0).collect::<Vec<_>>())?;
            let w = SymbolSeq::periodic(&window[..p].iter().map(|s| s.1).collect::<Vec<_>>())?;
            let (z, w) = (Point::Symbolic(z), Point::Symbolic(w));
            if spec.check_point(&z).is_err() || spec.check_point(&w).is_err() {
                return Ok(RecurrenceOutcome::Inconclusive(format!(
                    "window pattern of period {p} is not admissible"
                )));
            }
            Ok(RecurrenceOutcome::Found(Recurrence {
                z,
                w,
                exact: false,
                how: format!("period-{p} pattern of the separation run [{start}, {})", start + len),
            }))
        }
        _ => {
            // Closest return of the product orbit over the tail half.
            let (ox, oy) = (spec.orbit(x, horizon)?, spec.orbit(y, horizon)?);
            let lo = horizon / 2;
            let hi = horizon.min(lo + 1024);
            let mut best: Option<(S, usize)> = None;
            for i in lo..hi {
                for j in i + 1..hi {
                    let gap = S::max_of(spec.distance(&ox[i], &ox[j])?, spec.distance(&oy[i], &oy[j])?);
                    if best.as_ref().is_none_or(|(g, _)| gap < *g) {
                        best = Some((gap, i));
                    }
                }
            }
            let Some((_, i)) = best else {
                return Ok(RecurrenceOutcome::Inconclusive("tail too short for a return".into()));
            };
            if spec.distance(&ox[i], &oy[i])?.is_zero() {
                return Ok(RecurrenceOutcome::Inconclusive("closest return lies on the diagonal".into()));
            }
            Ok(RecurrenceOutcome::Found(Recurrence {
                z: ox[i].clone(),
                w: oy[i].clone(),
                exact: false,
                how: format!("closest return of the product orbit at time {i}"),
            }))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtractOptions<S> {
    pub horizon: usize,
    /// Separation threshold for the runs.
    pub delta0: S,
    pub min_run: usize,
    /// `(boxes, δ)` for the witness graph; subshifts default to their own
    /// word depth.
    pub grid: Option<(usize, S)>,
}

impl<S: Scalar> ExtractOptions<S> {
    pub fn new(horizon: usize) -> Self {
        ExtractOptions { horizon, delta0: S::dyadic(2), min_run: 2, grid: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PStarExtraction<S> {
    pub run_start: usize,
    pub run_len: usize,
    pub candidate: Option<Recurrence<S>>,
    pub boxes: Option<(usize, usize)>,
    pub r: Option<S>,
    pub witness: Option<PStarWitness<S>>,
    pub relation: Option<PairRelation>,
    pub inconclusive: Option<String>,
}

fn witness_graph<S: Scalar>(spec: &SystemSpec<S>, grid: &Option<(usize, S)>) -> Result<crate::ChainGraph<S>> {
    match (grid, spec.subshift()) {
        (Some((n, delta)), _) => discretize(spec, *n, delta),
        (None, Some(sft)) => discretize(spec, sft.depth(), &S::dyadic(sft.depth() as u32)),
        (None, None) => Err(Error::Input("a resolution grid is required for this system".into())),
    }
}

/// From a pair with long separation runs, a recurrent pair `(z, w)` with a
/// property* witness at the largest dyadic radius that admits one.
pub fn extract_pstar_pair<S: Scalar>(
    spec: &SystemSpec<S>,
    x: &Point<S>,
    y: &Point<S>,
    opts: &ExtractOptions<S>,
) -> Result<PStarExtraction<S>> {
    let d = orbit_distances(spec, x, y, opts.horizon)?;
    let (run_start, run_len) = separation_run(&d, &opts.delta0);
    if run_len < opts.min_run.max(1) {
        return Err(Error::Precondition(format!(
            "longest separation run is {run_len}, need {}",
            opts.min_run.max(1)
        )));
    }
    let mut out = PStarExtraction {
        run_start,
        run_len,
        candidate: None,
        boxes: None,
        r: None,
        witness: None,
        relation: None,
        inconclusive: None,
    };
    let rec = match recurrent_pair(spec, x, y, opts.horizon, &opts.delta0, opts.min_run)? {
        RecurrenceOutcome::Found(r) => r,
        RecurrenceOutcome::Inconclusive(why) => {
            out.inconclusive = Some(why);
            return Ok(out);
        }
    };
    let g = witness_graph(spec, &opts.grid)?;
    let (zb, wb) = (spec.locate(g.cover(), &rec.z)?, spec.locate(g.cover(), &rec.w)?);
    out.boxes = Some((zb, wb));
    out.relation = Some(related_at(&g.cyclic_decomposition(), zb, wb));
    for j in 0..=DISTANCE_CAP {
        let r = S::dyadic(j);
        if let PStarOutcome::Found(w) = property_star(&g, zb, wb, &r)? {
            out.r = Some(r);
            out.witness = Some(w);
            break;
        }
    }
    if out.witness.is_none() {
        out.inconclusive = Some("no property* witness at any dyadic radius".into());
    }
    out.candidate = Some(rec);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiYorkeRelation<S> {
    pub candidate: Option<Recurrence<S>>,
    pub verdict: Option<RelationVerdict<S>>,
    pub inconclusive: Option<String>,
}

/// Relation verdicts, across `schedule`, for a recurrent pair of a Li–Yorke
/// pair. Inconclusive when no off-diagonal recurrent pair is visible.
pub fn liyorke_to_relation<S: Scalar>(
    spec: &SystemSpec<S>,
    x: &Point<S>,
    y: &Point<S>,
    horizon: usize,
    delta0: &S,
    schedule: &[(usize, S)],
) -> Result<LiYorkeRelation<S>> {
    match recurrent_pair(spec, x, y, horizon, delta0, 2)? {
        RecurrenceOutcome::Inconclusive(why) => {
            Ok(LiYorkeRelation { candidate: None, verdict: None, inconclusive: Some(why) })
        }
        RecurrenceOutcome::Found(rec) => {
            let verdict = relate_schedule(spec, &rec.z, &rec.w, schedule)?;
            Ok(LiYorkeRelation { candidate: Some(rec), verdict: Some(verdict), inconclusive: None })
        }
    }
}
