//! Exact dynamical systems and their discretisation into chain graphs.

use std::fmt;

use crate::chaingraph::ChainGraph;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symbolic::{word_to_string, SymbolSeq, DISTANCE_CAP};

/// A point of the phase space.
#[derive(Clone, Debug, PartialEq)]
pub enum Point<S> {
    /// A coordinate in `[0,1]` (interval) or `[0,1)` (circle).
    Real(S),
    Symbolic(SymbolSeq),
}

impl<S: Scalar> Point<S> {
    pub fn as_real(&self) -> Option<&S> {
        match self {
            Point::Real(x) => Some(x),
            Point::Symbolic(_) => None,
        }
    }

    pub fn as_symbolic(&self) -> Option<&SymbolSeq> {
        match self {
            Point::Symbolic(s) => Some(s),
            Point::Real(_) => None,
        }
    }
}

impl<S: Scalar> fmt::Display for Point<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Real(x) => write!(f, "{x}"),
            Point::Symbolic(s) => write!(f, "{s}"),
        }
    }
}

/// Metric attached to a phase space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    /// `|x - y|` on `[0,1]`.
    Absolute,
    /// Arc length on the circle `R/Z`.
    Arc,
    /// `2^-min{i : x_i != y_i}` on sequences.
    Symbolic,
    /// Abstract graphs: distinct vertices are at distance one.
    Discrete,
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Absolute => "absolute",
            Metric::Arc => "arc",
            Metric::Symbolic => "symbolic",
            Metric::Discrete => "discrete",
        }
    }

    pub fn real_distance<S: Scalar>(&self, x: &S, y: &S) -> S {
        let d = (x.clone() - y.clone()).abs();
        match self {
            Metric::Arc => {
                let d = d.clone() - d.floor_val();
                S::min_of(d.clone(), S::one() - d)
            }
            _ => d,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AffinePiece<S> {
    pub slope: S,
    pub intercept: S,
}

impl<S: Scalar> AffinePiece<S> {
    pub fn new(slope: S, intercept: S) -> Self {
        AffinePiece { slope, intercept }
    }

    pub fn at(&self, x: &S) -> S {
        self.slope.clone() * x.clone() + self.intercept.clone()
    }
}

/// Continuous piecewise-linear self-map of `[0,1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinear<S> {
    breakpoints: Vec<S>,
    pieces: Vec<AffinePiece<S>>,
}

impl<S: Scalar> PiecewiseLinear<S> {
    /// `breakpoints` run from 0 to 1; piece `i` acts on
    /// `[breakpoints[i], breakpoints[i+1]]`.
    pub fn new(breakpoints: Vec<S>, pieces: Vec<AffinePiece<S>>) -> Result<Self> {
        if breakpoints.len() < 2 || pieces.len() + 1 != breakpoints.len() {
            return Err(Error::Validation(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len().saturating_sub(1),
                pieces.len()
            )));
        }
        if breakpoints[0] != S::zero() || *breakpoints.last().unwrap() != S::one() {
            return Err(Error::Validation("breakpoints must start at 0 and end at 1".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Validation("breakpoints must be strictly increasing".into()));
        }
        for (i, b) in breakpoints.iter().enumerate().skip(1).take(pieces.len() - 1) {
            let left = pieces[i - 1].at(b);
            let right = pieces[i].at(b);
            if left != right {
                return Err(Error::Validation(format!(
                    "map is discontinuous at breakpoint {b}: {left} vs {right}"
                )));
            }
        }
        for (i, p) in pieces.iter().enumerate() {
            for b in [&breakpoints[i], &breakpoints[i + 1]] {
                let v = p.at(b);
                if v < S::zero() || v > S::one() {
                    return Err(Error::Validation(format!("f({b}) = {v} leaves [0,1]")));
                }
            }
        }
        Ok(PiecewiseLinear { breakpoints, pieces })
    }

    pub fn breakpoints(&self) -> &[S] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[AffinePiece<S>] {
        &self.pieces
    }

    pub fn eval(&self, x: &S) -> S {
        let idx = self
            .breakpoints
            .windows(2)
            .position(|w| *x <= w[1])
            .unwrap_or(self.pieces.len() - 1);
        self.pieces[idx].at(x)
    }

    /// Exact image of `[lo, hi)` (or `[lo, hi]` when `closed_right`).
    fn image(&self, lo: &S, hi: &S, closed_right: bool) -> ImageInterval<S> {
        let mut attained: Vec<S> = vec![self.eval(lo)];
        attained.extend(
            self.breakpoints
                .iter()
                .filter(|b| *b > lo && *b < hi)
                .map(|b| self.eval(b)),
        );
        let end = self.eval(hi);
        if closed_right {
            attained.push(end.clone());
        }
        let amin = attained.iter().cloned().reduce(S::min_of).unwrap();
        let amax = attained.iter().cloned().reduce(S::max_of).unwrap();
        // A limit value only reached at the open right end is excluded.
        let (lo_v, lo_closed) = if end < amin { (end.clone(), false) } else { (amin, true) };
        let (hi_v, hi_closed) = if end > amax { (end, false) } else { (amax, true) };
        ImageInterval { lo: lo_v, lo_closed, hi: hi_v, hi_closed }
    }
}

/// `x ↦ factor·x + offset (mod 1)` on the circle; `factor` must be an integer.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleAffine<S> {
    factor: S,
    offset: S,
}

impl<S: Scalar> CircleAffine<S> {
    pub fn new(factor: S, offset: S) -> Result<Self> {
        if !factor.is_integral() {
            return Err(Error::Validation(format!(
                "circle map factor {factor} is not an integer, the map would be discontinuous"
            )));
        }
        let offset = offset.clone() - offset.floor_val();
        Ok(CircleAffine { factor, offset })
    }

    pub fn factor(&self) -> &S {
        &self.factor
    }

    pub fn offset(&self) -> &S {
        &self.offset
    }

    pub fn eval(&self, x: &S) -> S {
        let y = self.factor.clone() * x.clone() + self.offset.clone();
        y.clone() - y.floor_val()
    }
}

/// One-step subshift of finite type given by a 0/1 transition matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subshift {
    adjacency: Vec<Vec<bool>>,
    depth: usize,
}

impl Subshift {
    pub fn new(adjacency: Vec<Vec<bool>>, depth: usize) -> Result<Self> {
        let n = adjacency.len();
        if n == 0 || n > 36 {
            return Err(Error::Validation(format!("alphabet size {n} outside 1..=36")));
        }
        if adjacency.iter().any(|row| row.len() != n) {
            return Err(Error::Validation("adjacency matrix must be square".into()));
        }
        for a in 0..n {
            if !adjacency[a].iter().any(|&b| b) {
                return Err(Error::Validation(format!("symbol {a} has no successor")));
            }
            if !(0..n).any(|b| adjacency[b][a]) {
                return Err(Error::Validation(format!("symbol {a} has no predecessor")));
            }
        }
        if depth == 0 {
            return Err(Error::Validation("word depth must be at least 1".into()));
        }
        Ok(Subshift { adjacency, depth })
    }

    /// Full shift on `alphabet` symbols.
    pub fn full(alphabet: usize, depth: usize) -> Result<Self> {
        Self::new(vec![vec![true; alphabet]; alphabet], depth)
    }

    /// Binary shift forbidding the word `11`.
    pub fn golden_mean(depth: usize) -> Result<Self> {
        Self::new(vec![vec![true, true], vec![true, false]], depth)
    }

    pub fn alphabet(&self) -> usize {
        self.adjacency.len()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn with_depth(&self, depth: usize) -> Result<Self> {
        Self::new(self.adjacency.clone(), depth)
    }

    pub fn adjacency(&self) -> &[Vec<bool>] {
        &self.adjacency
    }

    pub fn allows(&self, a: u8, b: u8) -> bool {
        self.adjacency
            .get(a as usize)
            .and_then(|row| row.get(b as usize))
            .copied()
            .unwrap_or(false)
    }

    /// First forbidden transition index in a finite word.
    pub fn first_violation(&self, word: &[u8]) -> Option<usize> {
        if let Some(i) = word.iter().position(|&s| s as usize >= self.alphabet()) {
            return Some(i);
        }
        word.windows(2).position(|w| !self.allows(w[0], w[1]))
    }

    pub fn admits_word(&self, word: &[u8]) -> bool {
        self.first_violation(word).is_none()
    }

    pub fn admits(&self, seq: &SymbolSeq) -> bool {
        self.admits_word(&seq.take(seq.preperiod() + seq.period() + 1))
    }

    /// Admissible words of length `k`, lexicographically ordered.
    pub fn words(&self, k: usize) -> Vec<Vec<u8>> {
        let mut words: Vec<Vec<u8>> = (0..self.alphabet() as u8).map(|s| vec![s]).collect();
        for _ in 1..k {
            words = words
                .into_iter()
                .flat_map(|w| {
                    let last = *w.last().unwrap();
                    (0..self.alphabet() as u8)
                        .filter(move |&b| self.allows(last, b))
                        .map(move |b| {
                            let mut next = w.clone();
                            next.push(b);
                            next
                        })
                })
                .collect();
        }
        words
    }

    /// Topological entropy `log ρ(A)` of the subshift.
    pub fn entropy(&self) -> f64 {
        spectral_radius(&self.adjacency).ln()
    }
}

/// Perron root of a non-negative 0/1 matrix, via power iteration on `A + I`
/// (which shares eigenvectors and is aperiodic on every irreducible block).
pub fn spectral_radius(adjacency: &[Vec<bool>]) -> f64 {
    let n = adjacency.len();
    let mut v = vec![1.0f64; n];
    let mut lambda = 0.0;
    for _ in 0..100_000 {
        let w: Vec<f64> = (0..n)
            .map(|i| v[i] + (0..n).filter(|&j| adjacency[i][j]).map(|j| v[j]).sum::<f64>())
            .collect();
        let norm = w.iter().cloned().fold(0.0, f64::max);
        let next: Vec<f64> = w.iter().map(|x| x / norm).collect();
        let delta = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        v = next;
        let converged = delta < 1e-15 && (norm - lambda).abs() < 1e-15;
        lambda = norm;
        if converged {
            break;
        }
    }
    lambda - 1.0
}

/// An exact description of `(X, f, d)`.
#[derive(Clone, Debug, PartialEq)]
pub enum SystemSpec<S> {
    Interval(PiecewiseLinear<S>),
    Circle(CircleAffine<S>),
    Shift(Subshift),
}

impl<S: Scalar> SystemSpec<S> {
    /// Doubling map `x ↦ 2x mod 1`, modelled on the circle so that it is
    /// continuous.
    pub fn doubling() -> Self {
        SystemSpec::Circle(CircleAffine::new(S::from_usize(2), S::zero()).unwrap())
    }

    pub fn rotation(numer: i64, denom: i64) -> Self {
        SystemSpec::Circle(CircleAffine::new(S::one(), S::from_ratio(numer, denom)).unwrap())
    }

    pub fn identity() -> Self {
        SystemSpec::Interval(
            PiecewiseLinear::new(vec![S::zero(), S::one()], vec![AffinePiece::new(S::one(), S::zero())])
                .unwrap(),
        )
    }

    /// Full tent map `1 - |2x - 1|`.
    pub fn tent() -> Self {
        let two = S::from_usize(2);
        SystemSpec::Interval(
            PiecewiseLinear::new(
                vec![S::zero(), S::from_ratio(1, 2), S::one()],
                vec![AffinePiece::new(two.clone(), S::zero()), AffinePiece::new(-two.clone(), two)],
            )
            .unwrap(),
        )
    }

    pub fn full_shift(depth: usize) -> Self {
        SystemSpec::Shift(Subshift::full(2, depth).unwrap())
    }

    pub fn golden_mean(depth: usize) -> Self {
        SystemSpec::Shift(Subshift::golden_mean(depth).unwrap())
    }

    pub fn metric(&self) -> Metric {
        match self {
            SystemSpec::Interval(_) => Metric::Absolute,
            SystemSpec::Circle(_) => Metric::Arc,
            SystemSpec::Shift(_) => Metric::Symbolic,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            SystemSpec::Interval(_) => "interval-pw-linear",
            SystemSpec::Circle(_) => "circle-affine",
            SystemSpec::Shift(_) => "sft",
        }
    }

    pub fn subshift(&self) -> Option<&Subshift> {
        match self {
            SystemSpec::Shift(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_subshift(&self) -> bool {
        matches!(self, SystemSpec::Shift(_))
    }

    /// Checks that `x` lies in the phase space.
    pub fn check_point(&self, x: &Point<S>) -> Result<()> {
        match (self, x) {
            (SystemSpec::Interval(_), Point::Real(v)) => {
                if *v < S::zero() || *v > S::one() {
                    return Err(Error::Domain(format!("{v} is outside [0,1]")));
                }
                Ok(())
            }
            (SystemSpec::Circle(_), Point::Real(v)) => {
                if *v < S::zero() || *v >= S::one() {
                    return Err(Error::Domain(format!("{v} is outside [0,1)")));
                }
                Ok(())
            }
            (SystemSpec::Shift(sft), Point::Symbolic(s)) => {
                if !sft.admits(s) {
                    return Err(Error::Domain(format!("{s} is not admissible")));
                }
                Ok(())
            }
            _ => Err(Error::Domain(format!("point {x} does not match a {} system", self.kind_name()))),
        }
    }

    /// `f(x)`.
    pub fn evaluate(&self, x: &Point<S>) -> Result<Point<S>> {
        self.check_point(x)?;
        Ok(self.step(x))
    }

    /// `f(x)` without the domain check.
    pub(crate) fn step(&self, x: &Point<S>) -> Point<S> {
        match (self, x) {
            (SystemSpec::Interval(m), Point::Real(v)) => Point::Real(m.eval(v)),
            (SystemSpec::Circle(m), Point::Real(v)) => Point::Real(m.eval(v)),
            (_, Point::Symbolic(s)) => Point::Symbolic(s.shift()),
            (_, p) => p.clone(),
        }
    }

    /// `f^n(x)` for `n = 0..len`.
    pub fn orbit(&self, x: &Point<S>, len: usize) -> Result<Vec<Point<S>>> {
        self.check_point(x)?;
        let mut out = Vec::with_capacity(len);
        let mut cur = x.clone();
        for _ in 0..len {
            let next = self.step(&cur);
            out.push(cur);
            cur = next;
        }
        Ok(out)
    }

    pub fn distance(&self, x: &Point<S>, y: &Point<S>) -> Result<S> {
        match (x, y) {
            (Point::Real(a), Point::Real(b)) => Ok(self.metric().real_distance(a, b)),
            (Point::Symbolic(a), Point::Symbolic(b)) => {
                Ok(a.distance_exponent(b).map_or_else(S::zero, S::dyadic))
            }
            _ => Err(Error::Domain("cannot measure distance between mixed point kinds".into())),
        }
    }

    /// Index of the cover box containing `x`.
    pub fn locate(&self, cover: &BoxCover<S>, x: &Point<S>) -> Result<usize> {
        self.check_point(x)?;
        match (x, cover.kind()) {
            (Point::Real(v), CoverKind::Uniform(n)) => {
                let idx = (v.clone() * S::from_usize(*n)).floor_val().to_f64_lossy() as usize;
                Ok(idx.min(n - 1))
            }
            (Point::Symbolic(s), CoverKind::Words(k)) => {
                let word = s.take(*k);
                cover
                    .boxes
                    .iter()
                    .position(|b| matches!(b, BoxGeometry::Word(w) if *w == word))
                    .ok_or_else(|| Error::Input(format!("point {s} maps to no box")))
            }
            _ => Err(Error::Input(format!("point {x} maps to no box"))),
        }
    }

    /// Box cover with `n` equal boxes (interval, circle) or the admissible
    /// words of length `n` (subshift).
    pub fn cover(&self, n: usize) -> Result<BoxCover<S>> {
        match self {
            SystemSpec::Interval(_) | SystemSpec::Circle(_) => {
                if n < 2 {
                    return Err(Error::Input(format!("need at least 2 boxes, got {n}")));
                }
                let step = S::from_ratio(1, n as i64);
                let boxes = (0..n)
                    .map(|i| BoxGeometry::Interval {
                        lo: S::from_ratio(i as i64, n as i64),
                        hi: S::from_ratio(i as i64 + 1, n as i64),
                    })
                    .collect();
                Ok(BoxCover { kind: CoverKind::Uniform(n), boxes, diam: step })
            }
            SystemSpec::Shift(sft) => {
                if n == 0 {
                    return Err(Error::Input("word depth must be at least 1".into()));
                }
                let boxes = sft.words(n).into_iter().map(BoxGeometry::Word).collect();
                Ok(BoxCover { kind: CoverKind::Words(n), boxes, diam: S::dyadic(n as u32) })
            }
        }
    }
}

/// Shape of one cover element.
#[derive(Clone, Debug, PartialEq)]
pub enum BoxGeometry<S> {
    /// Half-open `[lo, hi)`; the last interval box also contains 1.
    Interval { lo: S, hi: S },
    /// Depth-k cylinder.
    Word(Vec<u8>),
    /// Vertex of an abstract graph.
    Abstract,
}

impl<S: Scalar> BoxGeometry<S> {
    pub fn label(&self, index: usize) -> String {
        match self {
            BoxGeometry::Interval { lo, hi } => format!("[{lo},{hi})"),
            BoxGeometry::Word(w) => word_to_string(w),
            BoxGeometry::Abstract => format!("v{index}"),
        }
    }

    pub fn center(&self) -> Option<S> {
        match self {
            BoxGeometry::Interval { lo, hi } => {
                Some((lo.clone() + hi.clone()) / (S::one() + S::one()))
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverKind {
    Uniform(usize),
    Words(usize),
    Abstract(usize),
}

/// Finite cover of the phase space.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxCover<S> {
    kind: CoverKind,
    boxes: Vec<BoxGeometry<S>>,
    diam: S,
}

impl<S: Scalar> BoxCover<S> {
    pub fn abstract_vertices(n: usize) -> Self {
        BoxCover { kind: CoverKind::Abstract(n), boxes: vec![BoxGeometry::Abstract; n], diam: S::zero() }
    }

    pub fn kind(&self) -> &CoverKind {
        &self.kind
    }

    pub fn boxes(&self) -> &[BoxGeometry<S>] {
        &self.boxes
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// Maximum box diameter.
    pub fn diam(&self) -> &S {
        &self.diam
    }

    pub fn word_depth(&self) -> Option<usize> {
        match self.kind {
            CoverKind::Words(k) => Some(k),
            _ => None,
        }
    }
}

/// Interval `⟨lo, hi⟩` with independent open/closed ends.
#[derive(Clone, Debug)]
struct ImageInterval<S> {
    lo: S,
    lo_closed: bool,
    hi: S,
    hi_closed: bool,
}

impl<S: Scalar> ImageInterval<S> {
    /// Non-empty intersection with `[lo, hi)` (or `[lo, hi]`).
    fn meets(&self, lo: &S, hi: &S, hi_closed: bool) -> bool {
        let below_hi = self.lo < *hi || (self.lo == *hi && self.lo_closed && hi_closed);
        let above_lo = self.hi > *lo || (self.hi == *lo && self.hi_closed);
        below_hi && above_lo
    }

    /// Infimum distance to the closed box `[lo, hi]`.
    fn gap(&self, lo: &S, hi: &S) -> S {
        let g = S::max_of(lo.clone() - self.hi.clone(), self.lo.clone() - hi.clone());
        S::max_of(g, S::zero())
    }
}

/// Builds the δ-chain graph of `spec` on `n` boxes (or words of length `n`).
///
/// Interval and circle systems: edge `i → j` iff the exact image `f(B_i)`
/// meets `B_j` when `δ = 0`, or lies within distance `δ` of it when `δ > 0`.
/// Subshifts: `δ` must be at least `2^-n`; words are joined when they
/// overlap on `n - 1` symbols.
pub fn discretize<S: Scalar>(spec: &SystemSpec<S>, n: usize, delta: &S) -> Result<ChainGraph<S>> {
    if *delta < S::zero() {
        return Err(Error::Input(format!("resolution {delta} is negative")));
    }
    let cover = spec.cover(n)?;
    let m = cover.len();
    let mut succ = vec![Vec::new(); m];
    match spec {
        SystemSpec::Interval(map) => {
            for (i, b) in cover.boxes.iter().enumerate() {
                let BoxGeometry::Interval { lo, hi } = b else { unreachable!() };
                let image = map.image(lo, hi, i + 1 == m);
                for (j, target) in cover.boxes.iter().enumerate() {
                    let BoxGeometry::Interval { lo: tlo, hi: thi } = target else { unreachable!() };
                    let edge = if delta.is_zero() {
                        image.meets(tlo, thi, j + 1 == m)
                    } else {
                        image.gap(tlo, thi) <= *delta
                    };
                    if edge {
                        succ[i].push(j);
                    }
                }
            }
        }
        SystemSpec::Circle(map) => {
            for (i, b) in cover.boxes.iter().enumerate() {
                let BoxGeometry::Interval { lo, hi } = b else { unreachable!() };
                let a = map.factor().clone();
                let (x0, x1) = (
                    a.clone() * lo.clone() + map.offset().clone(),
                    a.clone() * hi.clone() + map.offset().clone(),
                );
                let image = if a > S::zero() {
                    ImageInterval { lo: x0, lo_closed: true, hi: x1, hi_closed: false }
                } else if a < S::zero() {
                    ImageInterval { lo: x1, lo_closed: false, hi: x0, hi_closed: true }
                } else {
                    ImageInterval { lo: x0.clone(), lo_closed: true, hi: x0, hi_closed: true }
                };
                let whole = image.hi.clone() - image.lo.clone() >= S::one();
                let base = image.lo.floor_val();
                for (j, target) in cover.boxes.iter().enumerate() {
                    let BoxGeometry::Interval { lo: tlo, hi: thi } = target else { unreachable!() };
                    let edge = whole
                        || (-2..=2i64).any(|t| {
                            let shift = base.clone() + S::from_ratio(t, 1);
                            let (slo, shi) = (tlo.clone() + shift.clone(), thi.clone() + shift);
                            if delta.is_zero() {
                                image.meets(&slo, &shi, false)
                            } else {
                                image.gap(&slo, &shi) <= *delta
                            }
                        });
                    if edge {
                        succ[i].push(j);
                    }
                }
            }
        }
        SystemSpec::Shift(sft) => {
            if *delta < S::dyadic(n as u32) {
                return Err(Error::Input(format!(
                    "resolution {delta} is finer than the cylinder scale 2^-{n}"
                )));
            }
            let words: Vec<&Vec<u8>> = cover
                .boxes
                .iter()
                .map(|b| match b {
                    BoxGeometry::Word(w) => w,
                    _ => unreachable!(),
                })
                .collect();
            for (i, w) in words.iter().enumerate() {
                for (j, v) in words.iter().enumerate() {
                    let overlaps = w[1..] == v[..n - 1];
                    if overlaps && sft.allows(w[n - 1], v[n - 1]) {
                        succ[i].push(j);
                    }
                }
            }
        }
    }
    let dist = distance_table(spec.metric(), &cover);
    let delta = if spec.is_subshift() { S::dyadic(n as u32) } else { delta.clone() };
    Ok(ChainGraph::from_parts(delta, spec.metric(), cover, succ, dist))
}

fn distance_table<S: Scalar>(metric: Metric, cover: &BoxCover<S>) -> Vec<Vec<S>> {
    let boxes = cover.boxes();
    boxes
        .iter()
        .map(|a| {
            boxes
                .iter()
                .map(|b| match (a, b) {
                    (BoxGeometry::Word(u), BoxGeometry::Word(v)) => u
                        .iter()
                        .zip(v)
                        .position(|(x, y)| x != y)
                        .map_or_else(S::zero, |i| S::dyadic((i as u32).min(DISTANCE_CAP))),
                    _ => match (a.center(), b.center()) {
                        (Some(x), Some(y)) => metric.real_distance(&x, &y),
                        _ => S::zero(),
                    },
                })
                .collect()
        })
        .collect()
}
