//! Pseudo-orbits, exact shadowing on shifts of finite type, and running
//! tracking averages.
//!
//! On a subshift the read-off point (first symbol of every entry) tracks a
//! depth-`k` pseudo-orbit to within `2^-k`, which is a proof rather than an
//! estimate. Nothing here claims shadowing for interval or circle maps;
//! those only get [`tracking_average`] diagnostics.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symbolic::{word_to_string, SymbolSeq};
use crate::systems::{Point, Subshift, SystemSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PseudoOrbitKind {
    Finite,
    /// Generated block by block from a schedule.
    Blockwise,
}

/// A finite stretch of a pseudo-orbit together with its step defects
/// `d(f(x_i), x_{i+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoOrbit<S> {
    entries: Vec<Point<S>>,
    defects: Vec<S>,
    kind: PseudoOrbitKind,
}

impl<S: Scalar> PseudoOrbit<S> {
    pub fn new(spec: &SystemSpec<S>, entries: Vec<Point<S>>, kind: PseudoOrbitKind) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Input("pseudo-orbit has no entries".into()));
        }
        for x in &entries {
            spec.check_point(x)?;
        }
        let defects = entries
            .windows(2)
            .map(|w| spec.distance(&spec.step(&w[0]), &w[1]))
            .collect::<Result<Vec<_>>>()?;
        Ok(PseudoOrbit { entries, defects, kind })
    }

    /// The true orbit of `x` as a pseudo-orbit with zero defects.
    pub fn orbit(spec: &SystemSpec<S>, x: &Point<S>, len: usize) -> Result<Self> {
        Self::new(spec, spec.orbit(x, len)?, PseudoOrbitKind::Finite)
    }

    pub fn entries(&self) -> &[Point<S>] {
        &self.entries
    }

    pub fn defects(&self) -> &[S] {
        &self.defects
    }

    pub fn kind(&self) -> PseudoOrbitKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_defect(&self) -> S {
        self.defects.iter().cloned().fold(S::zero(), S::max_of)
    }
}

/// Extends a finite admissible word to an eventually periodic sequence by
/// always taking the smallest allowed next symbol.
pub(crate) fn complete_word(sft: &Subshift, mut word: Vec<u8>) -> Result<SymbolSeq> {
    let Some(&last) = word.last() else {
        return Err(Error::Input("cannot complete an empty word".into()));
    };
    let next = |s: u8| (0..sft.alphabet() as u8).find(|&b| sft.allows(s, b));
    let mut tail = vec![last];
    let mut cur = last;
    loop {
        let n = next(cur).ok_or_else(|| Error::Subshift(format!("symbol {cur} has no successor")))?;
        if let Some(pos) = tail.iter().position(|&s| s == n) {
            // After `tail`, the block `tail[pos..]` repeats forever.
            word.extend_from_slice(&tail[1..]);
            return SymbolSeq::new(word, tail[pos..].to_vec());
        }
        tail.push(n);
        cur = n;
    }
}

/// Read-off shadow of a word pseudo-orbit: the first symbol of every word,
/// then the whole last word, then the smallest admissible continuation.
///
/// Consecutive words must overlap on `k-1` symbols, which is the same as a
/// defect of at most `2^-k` between cylinders.
pub fn shadow_sft(words: &[Vec<u8>], k: usize, sft: &Subshift) -> Result<SymbolSeq> {
    if words.is_empty() || k == 0 {
        return Err(Error::Input("need at least one word of positive depth".into()));
    }
    if let Some(i) = words.iter().position(|w| w.len() != k) {
        return Err(Error::Precondition(format!("entry {i} is not a word of length {k}")));
    }
    if let Some(i) = words.windows(2).position(|w| w[0][1..] != w[1][..k - 1]) {
        return Err(Error::Precondition(format!(
            "entries {i} and {} do not overlap on {} symbols",
            i + 1,
            k - 1
        )));
    }
    let mut read: Vec<u8> = words[..words.len() - 1].iter().map(|w| w[0]).collect();
    read.extend_from_slice(words.last().unwrap());
    if let Some(i) = sft.first_violation(&read) {
        return Err(Error::Subshift(format!(
            "read-off contains forbidden word {} at index {i}",
            word_to_string(&read[i..(i + 2).min(read.len())])
        )));
    }
    complete_word(sft, read)
}

/// Read-off shadow of a pseudo-orbit of points whose steps agree to depth `k`
/// after one shift: `x_0[0] x_1[0] … x_{n-2}[0] · x_{n-1}`.
pub fn shadow_points<S: Scalar>(po: &PseudoOrbit<S>, k: usize, sft: &Subshift) -> Result<SymbolSeq> {
    let seqs = po
        .entries()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            p.as_symbolic()
                .ok_or_else(|| Error::Precondition(format!("entry {i} is not a symbolic point")))
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, w) in seqs.windows(2).enumerate() {
        if matches!(w[0].shift().first_disagreement(w[1]), Some(j) if j < k) {
            return Err(Error::Precondition(format!(
                "entries {i} and {} disagree before depth {k}",
                i + 1
            )));
        }
    }
    let last = seqs.last().unwrap();
    let mut prefix: Vec<u8> = seqs[..seqs.len() - 1].iter().map(|s| s.symbol(0)).collect();
    let tail_len = prefix.len();
    prefix.extend_from_slice(last.prefix());
    let y = SymbolSeq::new(prefix, last.cycle().to_vec())?;
    let probe = y.take(tail_len + last.preperiod() + last.period() + 1);
    if let Some(i) = sft.first_violation(&probe) {
        return Err(Error::Subshift(format!("read-off is inadmissible at index {i}")));
    }
    Ok(y)
}

/// Number of leading symbols of `σ^i y` that agree with word `i`; the
/// tracking distance to that cylinder is at most `2^-agreement`.
pub fn word_agreements(y: &SymbolSeq, words: &[Vec<u8>]) -> Vec<usize> {
    words
        .iter()
        .enumerate()
        .map(|(i, w)| w.iter().enumerate().take_while(|&(j, &s)| y.symbol(i + j) == s).count())
        .collect()
}

/// `ε_m = (1/m) Σ_{i<m} d_i` for `m = 1..=d.len()`.
pub fn running_averages<S: Scalar>(distances: impl IntoIterator<Item = S>) -> Vec<S> {
    let mut sum = S::zero();
    distances
        .into_iter()
        .enumerate()
        .map(|(i, d)| {
            sum = sum.clone() + d;
            sum.clone() / S::from_usize(i + 1)
        })
        .collect()
}

/// `d(f^i(y), x_i)` for `i < n`.
pub fn tracking_distances<S: Scalar>(
    spec: &SystemSpec<S>,
    y: &Point<S>,
    po: &PseudoOrbit<S>,
    n: usize,
) -> Result<Vec<S>> {
    if n > po.len() {
        return Err(Error::Input(format!("horizon {n} exceeds pseudo-orbit length {}", po.len())));
    }
    spec.orbit(y, n)?
        .iter()
        .zip(po.entries())
        .map(|(a, b)| spec.distance(a, b))
        .collect()
}

/// Running tracking averages `ε_1, …, ε_n` of `y` against `po`.
pub fn tracking_average<S: Scalar>(
    spec: &SystemSpec<S>,
    y: &Point<S>,
    po: &PseudoOrbit<S>,
    n: usize,
) -> Result<Vec<S>> {
    Ok(running_averages(tracking_distances(spec, y, po, n)?))
}
