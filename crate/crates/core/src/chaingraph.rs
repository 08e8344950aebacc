//! δ-chains, chain recurrence and the cyclic decomposition of a chain graph.

use std::collections::VecDeque;
use std::fmt::Write as _;

use num::integer::gcd;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::systems::{BoxCover, BoxGeometry, Metric};

/// Finite directed graph whose edges are admissible δ-chain steps between
/// cover elements. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainGraph<S> {
    delta: S,
    metric: Metric,
    cover: BoxCover<S>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    dist: Vec<Vec<S>>,
}

impl<S: Scalar> ChainGraph<S> {
    pub(crate) fn from_parts(
        delta: S,
        metric: Metric,
        cover: BoxCover<S>,
        mut succ: Vec<Vec<usize>>,
        dist: Vec<Vec<S>>,
    ) -> Self {
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        let mut pred = vec![Vec::new(); succ.len()];
        for (u, vs) in succ.iter().enumerate() {
            for &v in vs {
                pred[v].push(u);
            }
        }
        ChainGraph { delta, metric, cover, succ, pred, dist }
    }

    /// Abstract graph with the discrete metric (distinct vertices at distance 1).
    pub fn from_successors(succ: Vec<Vec<usize>>) -> Result<Self> {
        let n = succ.len();
        let dist = (0..n)
            .map(|i| (0..n).map(|j| if i == j { S::zero() } else { S::one() }).collect())
            .collect();
        Self::with_distances(succ, dist)
    }

    /// Abstract graph with an explicit symmetric distance table.
    pub fn with_distances(succ: Vec<Vec<usize>>, dist: Vec<Vec<S>>) -> Result<Self> {
        let n = succ.len();
        if let Some(bad) = succ.iter().flatten().find(|&&v| v >= n) {
            return Err(Error::Input(format!("edge target {bad} out of range for {n} vertices")));
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::Input("distance table must be n x n".into()));
        }
        Ok(Self::from_parts(S::zero(), Metric::Discrete, BoxCover::abstract_vertices(n), succ, dist))
    }

    /// Builds an abstract graph from an edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut succ = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Input(format!("edge ({u},{v}) out of range for {n} vertices")));
            }
            succ[u].push(v);
        }
        Self::from_successors(succ)
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn delta(&self) -> &S {
        &self.delta
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn cover(&self) -> &BoxCover<S> {
        &self.cover
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ.iter().enumerate().flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn label(&self, v: usize) -> String {
        self.cover.boxes()[v].label(v)
    }

    pub fn geometry(&self, v: usize) -> &BoxGeometry<S> {
        &self.cover.boxes()[v]
    }

    /// Center-to-center distance.
    pub fn distance(&self, a: usize, b: usize) -> &S {
        &self.dist[a][b]
    }

    /// Worst-case error between the center distance of two boxes and the
    /// distance of any two points drawn from them.
    pub fn pair_slack(&self, a: usize, b: usize) -> S {
        match self.metric {
            Metric::Discrete => S::zero(),
            // Cylinders that already disagree within their depth are at an
            // exactly known distance.
            Metric::Symbolic if a != b => S::zero(),
            _ => self.cover.diam().clone(),
        }
    }

    /// Largest tabulated distance.
    pub fn diameter(&self) -> S {
        self.dist.iter().flatten().cloned().fold(S::zero(), S::max_of)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.len() {
            return Err(Error::Input(format!("unknown vertex {v} (graph has {})", self.len())));
        }
        Ok(())
    }

    /// True iff `seq` is a chain (consecutive pairs are edges) and, when
    /// `closed`, a cycle.
    pub fn verify_chain(&self, seq: &[usize], closed: bool) -> Result<bool> {
        if seq.len() < 2 {
            return Err(Error::Input("a chain needs at least two entries".into()));
        }
        for &v in seq {
            self.check_vertex(v)?;
        }
        let linked = seq.windows(2).all(|w| self.has_edge(w[0], w[1]));
        Ok(linked && (!closed || seq.first() == seq.last()))
    }

    /// Strongly connected components, each sorted, listed by smallest vertex.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let mut comps = tarjan(&self.succ);
        for c in &mut comps {
            c.sort_unstable();
        }
        comps.sort_unstable_by_key(|c| c[0]);
        comps
    }

    /// Vertices lying on at least one cycle.
    pub fn chain_recurrent_set(&self) -> Vec<usize> {
        let mut cr: Vec<usize> = self
            .strongly_connected_components()
            .into_iter()
            .filter(|c| c.len() > 1 || self.has_edge(c[0], c[0]))
            .flatten()
            .collect();
        cr.sort_unstable();
        cr
    }

    pub fn cyclic_decomposition(&self) -> CyclicDecomposition {
        let mut index = vec![None; self.len()];
        let mut components = Vec::new();
        for comp in self.strongly_connected_components() {
            if comp.len() == 1 && !self.has_edge(comp[0], comp[0]) {
                continue;
            }
            let id = components.len();
            let mut inside = vec![false; self.len()];
            for &v in &comp {
                inside[v] = true;
            }
            let mut level = vec![usize::MAX; self.len()];
            let root = comp[0];
            level[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.succ[u] {
                    if inside[v] && level[v] == usize::MAX {
                        level[v] = level[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            let mut period = 0usize;
            for &u in &comp {
                for &v in self.succ[u].iter().filter(|&&v| inside[v]) {
                    let diff = (level[u] + 1).abs_diff(level[v]);
                    period = gcd(period, diff);
                }
            }
            let mut classes = vec![Vec::new(); period];
            for &v in &comp {
                let j = level[v] % period;
                classes[j].push(v);
                index[v] = Some(ClassIndex { component: id, class: j });
            }
            components.push(Component { id, period, vertices: comp, classes });
        }
        CyclicDecomposition { components, index }
    }

    /// A path from `u` to `v` with exactly `length` steps, lexicographically
    /// smallest among all such paths.
    pub fn find_chain(&self, u: usize, v: usize, length: usize) -> Result<Option<Vec<usize>>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if length == 0 {
            return Err(Error::Input("chain length must be at least 1".into()));
        }
        let n = self.len();
        // can[s][w]: w reaches v in exactly s steps.
        let mut can = vec![vec![false; n]; length + 1];
        can[0][v] = true;
        for s in 1..=length {
            let (done, rest) = can.split_at_mut(s);
            let prev = &done[s - 1];
            let cur = &mut rest[0];
            for (w, slot) in cur.iter_mut().enumerate() {
                *slot = self.succ[w].iter().any(|&x| prev[x]);
            }
        }
        if !can[length][u] {
            return Ok(None);
        }
        let mut path = Vec::with_capacity(length + 1);
        path.push(u);
        let mut cur = u;
        for s in (0..length).rev() {
            cur = *self.succ[cur].iter().find(|&&x| can[s][x]).expect("feasible step");
            path.push(cur);
        }
        Ok(Some(path))
    }

    /// Per pair `(u, v)` of a class, the least `N ≥ 1` such that paths of
    /// every length `period·n`, `n ∈ [N, N + |V|]`, join `u` to `v`.
    pub fn reachability_threshold(
        &self,
        dec: &CyclicDecomposition,
        component: usize,
    ) -> Result<Vec<ReachThreshold>> {
        let comp = dec
            .components
            .get(component)
            .ok_or_else(|| Error::Input(format!("unknown component {component}")))?;
        let m = comp.period;
        let size = comp.vertices.len();
        let window = self.len();
        // Exponent bound for a primitive matrix of order `size`.
        let n_search = (size - 1) * (size - 1) + 1;
        let horizon = n_search + window + 1;
        let mut out = Vec::new();
        for (class_idx, class) in comp.classes.iter().enumerate() {
            for &u in class {
                let feasible = self.multiples_reachable(u, m, horizon);
                for &v in class {
                    let ok = |n: usize| feasible[n][v];
                    let threshold = (1..=n_search).find(|&start| (start..=start + window).all(ok));
                    if let Some(n) = threshold {
                        out.push(ReachThreshold { u, v, class: class_idx, threshold: n });
                    }
                }
            }
        }
        Ok(out)
    }

    /// `out[n][w]`: a path of length `step·n` joins `from` to `w`.
    fn multiples_reachable(&self, from: usize, step: usize, count: usize) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut cur = vec![false; n];
        cur[from] = true;
        let mut out = vec![cur.clone()];
        for _ in 0..count {
            for _ in 0..step {
                let mut next = vec![false; n];
                for (w, _) in cur.iter().enumerate().filter(|(_, &b)| b) {
                    for &x in &self.succ[w] {
                        next[x] = true;
                    }
                }
                cur = next;
            }
            out.push(cur.clone());
        }
        out
    }

    /// Graphviz rendering.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph chain {\n");
        for v in 0..self.len() {
            let _ = writeln!(out, "  {v} [label=\"{}\"];", self.label(v));
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} -> {v};");
        }
        out.push_str("}\n");
        out
    }
}

/// Iterative Tarjan SCC.
fn tarjan(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < succ[v].len() {
                let w = succ[v][*next];
                *next += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClassIndex {
    pub component: usize,
    pub class: usize,
}

/// One chain-recurrent component, split into `period` cyclically permuted classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub id: usize,
    pub period: usize,
    pub vertices: Vec<usize>,
    /// `classes[j]`; every edge inside the component goes from class `j` to `j+1 mod period`.
    pub classes: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicDecomposition {
    pub components: Vec<Component>,
    index: Vec<Option<ClassIndex>>,
}

impl CyclicDecomposition {
    /// Class of `v`, or `None` when `v` is not chain recurrent.
    pub fn class_of(&self, v: usize) -> Option<ClassIndex> {
        self.index.get(v).copied().flatten()
    }

    pub fn is_recurrent(&self, v: usize) -> bool {
        self.class_of(v).is_some()
    }

    pub fn vertex_count(&self) -> usize {
        self.index.len()
    }

    pub fn period_of(&self, v: usize) -> Option<usize> {
        self.class_of(v).map(|c| self.components[c.component].period)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReachThreshold {
    pub u: usize,
    pub v: usize,
    pub class: usize,
    pub threshold: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::systems::{discretize, SystemSpec};

    type G = ChainGraph<Rational>;

    fn three_cycle() -> G {
        G::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn doubling(n: usize) -> G {
        discretize(&SystemSpec::doubling(), n, &Rational::from_ratio(0, 1)).unwrap()
    }

    #[test]
    fn verify_chain_examples() {
        let id = G::from_edges(1, &[(0, 0)]).unwrap();
        assert!(id.verify_chain(&[0, 0], true).unwrap());
        assert!(doubling(4).verify_chain(&[0, 1, 2], false).unwrap());
        assert!(!three_cycle().verify_chain(&[0, 2], false).unwrap());
        assert!(!three_cycle().verify_chain(&[0, 1], true).unwrap());
        assert!(three_cycle().verify_chain(&[0, 7], false).is_err());
        assert!(three_cycle().verify_chain(&[0], false).is_err());
    }

    #[test]
    fn chain_recurrent_set_examples() {
        let path = G::from_edges(3, &[(0, 1), (1, 2), (2, 2)]).unwrap();
        assert_eq!(path.chain_recurrent_set(), vec![2]);
        assert_eq!(doubling(8).chain_recurrent_set(), (0..8).collect::<Vec<_>>());
        let id = G::from_edges(3, &[(0, 0), (1, 1), (2, 2)]).unwrap();
        assert_eq!(id.chain_recurrent_set(), vec![0, 1, 2]);
    }

    #[test]
    fn decomposition_examples() {
        let dec = three_cycle().cyclic_decomposition();
        assert_eq!(dec.components.len(), 1);
        assert_eq!(dec.components[0].period, 3);
        assert_eq!(dec.components[0].classes, vec![vec![0], vec![1], vec![2]]);

        let dec = doubling(8).cyclic_decomposition();
        assert_eq!(dec.components.len(), 1);
        assert_eq!(dec.components[0].period, 1);

        let two = G::from_edges(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
        let dec = two.cyclic_decomposition();
        assert_eq!(dec.components.len(), 2);
        assert!(dec.components.iter().all(|c| c.period == 2));
    }

    #[test]
    fn trivial_components_are_not_recurrent() {
        let g = G::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let dec = g.cyclic_decomposition();
        assert!(dec.components.is_empty());
        assert_eq!(dec.class_of(1), None);
    }

    #[test]
    fn find_chain_examples() {
        let c = three_cycle();
        assert_eq!(c.find_chain(0, 0, 3).unwrap(), Some(vec![0, 1, 2, 0]));
        assert_eq!(c.find_chain(0, 1, 2).unwrap(), None);
        let d = doubling(8);
        for u in 0..8 {
            for v in 0..8 {
                let p = d.find_chain(u, v, 3).unwrap().expect("diameter at most 3");
                assert_eq!(p.len(), 4);
                assert!(d.verify_chain(&p, false).unwrap());
            }
        }
    }

    #[test]
    fn thresholds() {
        let c = three_cycle();
        let dec = c.cyclic_decomposition();
        let t = c.reachability_threshold(&dec, 0).unwrap();
        let own = t.iter().find(|e| e.u == 0 && e.v == 0).unwrap();
        assert_eq!(own.threshold, 1);

        let d = doubling(8);
        let dec = d.cyclic_decomposition();
        let t = d.reachability_threshold(&dec, 0).unwrap();
        assert_eq!(t.len(), 64);
        assert!(t.iter().all(|e| e.threshold <= 8));

        let two = G::from_edges(2, &[(0, 1), (1, 0)]).unwrap();
        let dec = two.cyclic_decomposition();
        let t = two.reachability_threshold(&dec, 0).unwrap();
        assert!(t.iter().all(|e| e.u == e.v));
        assert!(two.reachability_threshold(&dec, 5).is_err());
    }

    #[test]
    fn dot_export_lists_edges() {
        let dot = three_cycle().to_dot();
        assert!(dot.contains("0 -> 1;"));
        assert!(dot.starts_with("digraph"));
    }
}
