//! Closeness and separation profiles of a pair of orbits.
//!
//! For symbolic points every distance is `2^-j` with `j` the first
//! disagreement, and `j_i = 0` or `1 + j_{i+1}`. A single backward pass
//! therefore yields exact exponent histograms at every checkpoint without
//! materialising the orbits.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symbolic::{SymbolSeq, DISTANCE_CAP};
use crate::systems::{Point, SystemSpec};

const CAP: usize = DISTANCE_CAP as usize;
/// Bucket for distance exactly zero.
pub const ZERO_BUCKET: usize = CAP + 1;

/// Default δ and s grids: `2^-1, …, 2^-10`.
pub fn dyadic_grid<S: Scalar>() -> Vec<S> {
    (1..=10).map(S::dyadic).collect()
}

/// Counts of distances by exponent. Bucket `j < CAP` is exactly `2^-j`,
/// bucket `CAP` is anything in `(0, 2^-CAP]`, [`ZERO_BUCKET`] is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentHistogram {
    counts: Vec<u64>,
}

impl Default for ExponentHistogram {
    fn default() -> Self {
        ExponentHistogram { counts: vec![0; ZERO_BUCKET + 1] }
    }
}

impl ExponentHistogram {
    pub fn add(&mut self, bucket: usize) {
        self.counts[bucket] += 1;
    }

    pub fn merge(&mut self, other: &ExponentHistogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    fn upper<S: Scalar>(bucket: usize) -> S {
        if bucket == ZERO_BUCKET {
            S::zero()
        } else {
            S::dyadic(bucket as u32)
        }
    }

    fn lower<S: Scalar>(bucket: usize) -> S {
        if bucket >= CAP {
            S::zero()
        } else {
            S::dyadic(bucket as u32)
        }
    }

    /// Entries certainly below `delta`.
    pub fn closer_than<S: Scalar>(&self, delta: &S) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .filter(|&(b, _)| Self::upper::<S>(b) < *delta)
            .map(|(_, c)| c)
            .sum()
    }

    /// Entries certainly above `s`.
    pub fn farther_than<S: Scalar>(&self, s: &S) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .filter(|&(b, _)| Self::lower::<S>(b) > *s)
            .map(|(_, c)| c)
            .sum()
    }

    /// Upper bound on the sum of all recorded distances.
    pub fn sum<S: Scalar>(&self) -> S {
        self.counts.iter().enumerate().fold(S::zero(), |acc, (b, &c)| {
            if c == 0 {
                acc
            } else {
                acc + Self::upper::<S>(b) * S::from_usize(c as usize)
            }
        })
    }
}

/// Statistics of the first `c` indices.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckpointStats<S> {
    pub n: usize,
    pub c: u64,
    /// `|{i < c : d_i < δ}|` per δ-grid entry.
    pub closeness: Vec<u64>,
    /// `|{i < c : d_i > s}|` per s-grid entry.
    pub separation: Vec<u64>,
    /// Exponent histogram of the pair distances (symbolic points only).
    pub pair: Option<ExponentHistogram>,
    /// Tracking averages of the two points against their pseudo-orbits.
    pub eps: Option<(S, S)>,
}

impl<S: Scalar> CheckpointStats<S> {
    pub fn phi(&self, j: usize) -> S {
        S::from_usize(self.closeness[j] as usize) / S::from_usize(self.c as usize)
    }

    pub fn psi(&self, j: usize) -> S {
        S::from_usize(self.separation[j] as usize) / S::from_usize(self.c as usize)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairStatistics<S> {
    pub delta_grid: Vec<S>,
    pub s_grid: Vec<S>,
    pub checkpoints: Vec<CheckpointStats<S>>,
}

/// Symbols of one point: `len` head positions (streamed in reverse, each with
/// the pseudo-orbit vertex it should track) followed by an exact tail.
pub(crate) struct Stream<'a> {
    pub len: u64,
    pub rev: Box<dyn Iterator<Item = (u8, usize)> + 'a>,
    pub tail: SymbolSeq,
    pub terminal: usize,
}

impl<'a> Stream<'a> {
    /// The first `len` symbols of `x` as head, untracked.
    pub fn of_seq(x: &'a SymbolSeq, len: u64) -> Self {
        Stream {
            len,
            rev: Box::new((0..len as usize).rev().map(move |i| (x.symbol(i), usize::MAX))),
            tail: x.shift_by(len as usize),
            terminal: usize::MAX,
        }
    }
}

/// Representative points of pseudo-orbit vertices. Two consecutive vertices
/// are consistent when the shift of the first representative is the second,
/// which lets tracking agreements propagate backwards in `O(1)`.
pub(crate) struct Tracker {
    pub heads: Vec<Vec<u8>>,
    pub rep_id: Vec<usize>,
    pub shifted_id: Vec<usize>,
    pub reps: Vec<SymbolSeq>,
}

impl Tracker {
    pub fn new(per_vertex: &[Option<SymbolSeq>]) -> Self {
        let mut reps: Vec<SymbolSeq> = Vec::new();
        let id_of = |s: &SymbolSeq, reps: &mut Vec<SymbolSeq>| match reps.iter().position(|r| r == s) {
            Some(i) => i,
            None => {
                reps.push(s.clone());
                reps.len() - 1
            }
        };
        let rep_id: Vec<usize> =
            per_vertex.iter().map(|r| r.as_ref().map_or(usize::MAX, |s| id_of(s, &mut reps))).collect();
        let shifted_id = per_vertex
            .iter()
            .map(|r| {
                r.as_ref()
                    .and_then(|s| {
                        let t = s.shift();
                        reps.iter().position(|x| *x == t)
                    })
                    .unwrap_or(usize::MAX)
            })
            .collect();
        let heads = per_vertex
            .iter()
            .map(|r| r.as_ref().map_or_else(Vec::new, |s| s.take(CAP + 1)))
            .collect();
        Tracker { heads, rep_id, shifted_id, reps }
    }

    fn rep(&self, v: usize) -> Result<&SymbolSeq> {
        self.rep_id
            .get(v)
            .and_then(|&i| self.reps.get(i))
            .ok_or_else(|| Error::Input(format!("vertex {v} has no representative point")))
    }
}

fn bucket_of(exp: Option<u32>) -> usize {
    exp.map_or(ZERO_BUCKET, |j| (j as usize).min(CAP))
}

fn inc(b: usize) -> usize {
    if b == ZERO_BUCKET {
        b
    } else {
        (b + 1).min(CAP)
    }
}

fn track_step(
    tracker: &Tracker,
    y: u8,
    v: usize,
    next_v: usize,
    next: usize,
    ahead: &VecDeque<u8>,
) -> Result<usize> {
    let head = tracker.heads.get(v).filter(|h| !h.is_empty());
    let head = head.ok_or_else(|| Error::Input(format!("vertex {v} has no representative point")))?;
    if y != head[0] {
        return Ok(0);
    }
    if tracker.shifted_id[v] != usize::MAX && tracker.shifted_id[v] == tracker.rep_id[next_v] {
        return Ok(inc(next));
    }
    let agree = ahead.iter().zip(&head[1..]).take_while(|(a, b)| a == b).count();
    Ok((1 + agree).min(CAP))
}

/// Per-checkpoint histograms of pair distances and (when `tracker` is given)
/// tracking distances. `checkpoints` are `(level, c)` with `c` strictly
/// increasing and at most `len + 1`.
pub(crate) fn scan(
    s0: Stream<'_>,
    s1: Stream<'_>,
    tracker: Option<&Tracker>,
    checkpoints: &[(usize, u64)],
) -> Result<Vec<[ExponentHistogram; 3]>> {
    if s0.len != s1.len {
        return Err(Error::Input("orbit heads differ in length".into()));
    }
    let len = s0.len;
    if checkpoints.windows(2).any(|w| w[0].1 >= w[1].1)
        || checkpoints.first().is_some_and(|c| c.1 == 0)
        || checkpoints.last().is_some_and(|c| c.1 > len + 1)
    {
        return Err(Error::Input("checkpoints must increase within the horizon".into()));
    }
    let mut hist: Vec<[ExponentHistogram; 3]> = vec![Default::default(); checkpoints.len()];
    let mut slot = checkpoints.len();
    let mut record = |p: u64, buckets: [usize; 3]| {
        while slot > 1 && p < checkpoints[slot - 2].1 {
            slot -= 1;
        }
        if slot > 0 && p < checkpoints[slot - 1].1 {
            for (h, b) in hist[slot - 1].iter_mut().zip(buckets) {
                h.add(b);
            }
        }
    };
    let mut d = bucket_of(s0.tail.distance_exponent(&s1.tail));
    let (mut l0, mut l1) = (ZERO_BUCKET, ZERO_BUCKET);
    if let Some(t) = tracker {
        l0 = bucket_of(s0.tail.distance_exponent(t.rep(s0.terminal)?));
        l1 = bucket_of(s1.tail.distance_exponent(t.rep(s1.terminal)?));
    }
    record(len, [d, l0, l1]);
    let mut ahead0: VecDeque<u8> = s0.tail.take(CAP).into();
    let mut ahead1: VecDeque<u8> = s1.tail.take(CAP).into();
    let (mut v0, mut v1) = (s0.terminal, s1.terminal);
    let mut p = len;
    for ((y0, u0), (y1, u1)) in s0.rev.zip(s1.rev) {
        if p == 0 {
            break;
        }
        p -= 1;
        d = if y0 != y1 { 0 } else { inc(d) };
        if let Some(t) = tracker {
            l0 = track_step(t, y0, u0, v0, l0, &ahead0)?;
            l1 = track_step(t, y1, u1, v1, l1, &ahead1)?;
        }
        record(p, [d, l0, l1]);
        ahead0.push_front(y0);
        ahead0.truncate(CAP);
        ahead1.push_front(y1);
        ahead1.truncate(CAP);
        v0 = u0;
        v1 = u1;
    }
    if p != 0 {
        return Err(Error::Input("orbit stream ended early".into()));
    }
    for j in 1..hist.len() {
        let (done, rest) = hist.split_at_mut(j);
        for (h, prev) in rest[0].iter_mut().zip(&done[j - 1]) {
            h.merge(prev);
        }
    }
    Ok(hist)
}

fn from_histograms<S: Scalar>(
    checkpoints: &[(usize, u64)],
    hist: Vec<[ExponentHistogram; 3]>,
    delta_grid: &[S],
    s_grid: &[S],
    tracked: bool,
) -> PairStatistics<S> {
    let checkpoints = checkpoints
        .iter()
        .zip(hist)
        .map(|(&(n, c), [pair, t0, t1])| {
            let cs = S::from_usize(c as usize);
            CheckpointStats {
                n,
                c,
                closeness: delta_grid.iter().map(|d| pair.closer_than(d)).collect(),
                separation: s_grid.iter().map(|s| pair.farther_than(s)).collect(),
                eps: tracked.then(|| (t0.sum::<S>() / cs.clone(), t1.sum::<S>() / cs)),
                pair: Some(pair),
            }
        })
        .collect();
    PairStatistics { delta_grid: delta_grid.to_vec(), s_grid: s_grid.to_vec(), checkpoints }
}

pub(crate) fn stream_statistics<S: Scalar>(
    s0: Stream<'_>,
    s1: Stream<'_>,
    tracker: Option<&Tracker>,
    checkpoints: &[(usize, u64)],
    delta_grid: &[S],
    s_grid: &[S],
) -> Result<PairStatistics<S>> {
    let hist = scan(s0, s1, tracker, checkpoints)?;
    Ok(from_histograms(checkpoints, hist, delta_grid, s_grid, tracker.is_some()))
}

/// `Φ_c` and `Ψ_c` of the orbits of `x0`, `x1` at each checkpoint `c`.
/// Checkpoints are labelled `1, 2, …` in order.
pub fn pair_statistics<S: Scalar>(
    spec: &SystemSpec<S>,
    x0: &Point<S>,
    x1: &Point<S>,
    checkpoints: &[u64],
    delta_grid: &[S],
    s_grid: &[S],
) -> Result<PairStatistics<S>> {
    spec.check_point(x0)?;
    spec.check_point(x1)?;
    let labelled: Vec<(usize, u64)> = checkpoints.iter().enumerate().map(|(i, &c)| (i + 1, c)).collect();
    let horizon = checkpoints.last().copied().unwrap_or(0);
    if let (Point::Symbolic(a), Point::Symbolic(b)) = (x0, x1) {
        let len = horizon.saturating_sub(1);
        return stream_statistics(
            Stream::of_seq(a, len),
            Stream::of_seq(b, len),
            None,
            &labelled,
            delta_grid,
            s_grid,
        );
    }
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) || checkpoints.first() == Some(&0) {
        return Err(Error::Input("checkpoints must increase within the horizon".into()));
    }
    let o0 = spec.orbit(x0, horizon as usize)?;
    let o1 = spec.orbit(x1, horizon as usize)?;
    let dist = o0.iter().zip(&o1).map(|(a, b)| spec.distance(a, b)).collect::<Result<Vec<S>>>()?;
    let checkpoints = labelled
        .iter()
        .map(|&(n, c)| {
            let head = &dist[..c as usize];
            CheckpointStats {
                n,
                c,
                closeness: delta_grid.iter().map(|d| head.iter().filter(|x| *x < d).count() as u64).collect(),
                separation: s_grid.iter().map(|s| head.iter().filter(|x| *x > s).count() as u64).collect(),
                pair: None,
                eps: None,
            }
        })
        .collect();
    Ok(PairStatistics { delta_grid: delta_grid.to_vec(), s_grid: s_grid.to_vec(), checkpoints })
}

/// Distance buckets `d(σ^i x, σ^i y)` for `i < h`.
pub fn pair_buckets(x: &SymbolSeq, y: &SymbolSeq, h: usize) -> Vec<usize> {
    let mut out = vec![0; h];
    if h == 0 {
        return out;
    }
    let mut d = bucket_of(x.shift_by(h).distance_exponent(&y.shift_by(h)));
    for i in (0..h).rev() {
        d = if x.symbol(i) != y.symbol(i) { 0 } else { inc(d) };
        out[i] = d;
    }
    out
}

/// Exact value of a bucket as a distance upper bound.
pub fn bucket_distance<S: Scalar>(bucket: usize) -> S {
    ExponentHistogram::upper(bucket)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn seq(s: &str) -> SymbolSeq {
        SymbolSeq::parse(s).unwrap()
    }

    #[test]
    fn identical_points_are_always_close() {
        let spec = SystemSpec::<Rational>::full_shift(1);
        let x = Point::Symbolic(seq("01(011)"));
        let grid = dyadic_grid::<Rational>();
        let st = pair_statistics(&spec, &x, &x, &[1, 5, 40], &grid, &grid).unwrap();
        for cp in &st.checkpoints {
            assert!(cp.closeness.iter().all(|&k| k == cp.c));
            assert!(cp.separation.iter().all(|&k| k == 0));
        }
    }

    #[test]
    fn distinct_fixed_points_are_always_apart() {
        let spec = SystemSpec::<Rational>::full_shift(1);
        let grid = dyadic_grid::<Rational>();
        let st = pair_statistics(
            &spec,
            &Point::Symbolic(seq("(0)")),
            &Point::Symbolic(seq("(1)")),
            &[3, 9],
            &grid,
            &grid,
        )
        .unwrap();
        for cp in &st.checkpoints {
            assert!(cp.separation.iter().all(|&k| k == cp.c));
            assert!(cp.closeness.iter().all(|&k| k == 0));
        }
    }

    #[test]
    fn buckets_match_direct_first_disagreement() {
        let (x, y) = (seq("0010(01)"), seq("00(1)"));
        let b = pair_buckets(&x, &y, 12);
        for (i, &bk) in b.iter().enumerate() {
            assert_eq!(bk, bucket_of(x.shift_by(i).distance_exponent(&y.shift_by(i))));
        }
    }

    #[test]
    fn real_points_are_counted_directly() {
        let spec = SystemSpec::<Rational>::doubling();
        let grid = vec![Rational::from_ratio(1, 2)];
        let st = pair_statistics(
            &spec,
            &Point::Real(Rational::from_ratio(1, 3)),
            &Point::Real(Rational::from_ratio(2, 3)),
            &[4],
            &grid,
            &[Rational::from_ratio(1, 4)],
        )
        .unwrap();
        assert_eq!(st.checkpoints[0].closeness, vec![4]);
        assert_eq!(st.checkpoints[0].separation, vec![4]);
    }
}
