//! Undirected graphs with edge weights in {0, 1}, shortest-path primitives and
//! generators.
//!
//! Weight-0 edges only appear in graphs produced by the degree-reduction split
//! transform; everything built by the generators here has unit weights.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

pub type NodeId = u32;

/// Path weight. `INF` marks unreachable nodes and compares greater than any
/// feasible distance.
pub type Dist = u32;

pub const INF: Dist = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({u}, {v}) references a node outside 0..{n}")]
    NodeOutOfRange { u: u64, v: u64, n: usize },
    #[error("edge ({u}, {u}) is a self-loop")]
    SelfLoop { u: NodeId },
    #[error("edge ({u}, {v}) appears more than once")]
    DuplicateEdge { u: NodeId, v: NodeId },
    #[error("edge ({u}, {v}) has weight {w}; only 0 and 1 are allowed")]
    InvalidWeight { u: NodeId, v: NodeId, w: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("edge list line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub w: u8,
}

/// Minimum path weight together with the minimum edge count among the
/// minimum-weight paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct HopDistance {
    pub weight: Dist,
    pub hops: Dist,
}

impl HopDistance {
    pub const UNREACHABLE: HopDistance = HopDistance { weight: INF, hops: INF };

    pub fn is_reachable(&self) -> bool {
        self.weight != INF
    }
}

/// Immutable undirected graph on nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(NodeId, u8)>>,
}

impl Graph {
    /// Builds a graph, rejecting out-of-range ids, self-loops, duplicate
    /// undirected edges and weights outside {0, 1}.
    pub fn new(n: usize, edge_list: &[(u64, u64, u64)]) -> Result<Graph, GraphError> {
        let mut seen = HashSet::with_capacity(edge_list.len());
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in edge_list {
            if u >= n as u64 || v >= n as u64 {
                return Err(GraphError::NodeOutOfRange { u, v, n });
            }
            let (u, v) = (u as NodeId, v as NodeId);
            if u == v {
                return Err(GraphError::SelfLoop { u });
            }
            if w > 1 {
                return Err(GraphError::InvalidWeight { u, v, w });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge { u, v });
            }
            let w = w as u8;
            edges.push(Edge { u, v, w });
            adj[u as usize].push((v, w));
            adj[v as usize].push((u, w));
        }
        Ok(Graph { n, edges, adj })
    }

    /// Builds a graph whose edges are all unit weight.
    pub fn from_unit_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Graph, GraphError> {
        let list: Vec<_> = edges.iter().map(|&(u, v)| (u as u64, v as u64, 1)).collect();
        Graph::new(n, &list)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, u: NodeId) -> &[(NodeId, u8)] {
        &self.adj[u as usize]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adj[u as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_unit_weight(&self) -> bool {
        self.edges.iter().all(|e| e.w == 1)
    }

    /// Single-source shortest paths over weights {0, 1}, with hop count as
    /// the tie-break among minimum-weight paths.
    ///
    /// Nodes are settled one weight level at a time. Inside a level two FIFO
    /// queues are merged by hop count: arrivals over 1-edges from the previous
    /// level and discoveries over 0-edges inside the level. Both stay sorted, so
    /// the first pop of a node carries its lexicographic minimum (weight, hops).
    pub fn sssp(&self, source: NodeId) -> Vec<HopDistance> {
        let mut dist = vec![HopDistance::UNREACHABLE; self.n];
        let mut arrivals: VecDeque<(NodeId, Dist)> = VecDeque::new();
        let mut zero: VecDeque<(NodeId, Dist)> = VecDeque::new();
        let mut next: VecDeque<(NodeId, Dist)> = VecDeque::new();
        arrivals.push_back((source, 0));
        let mut level: Dist = 0;
        while !arrivals.is_empty() {
            loop {
                let take_zero = match (arrivals.front(), zero.front()) {
                    (None, None) => break,
                    (Some(_), None) => false,
                    (None, Some(_)) => true,
                    (Some(a), Some(z)) => z.1 < a.1,
                };
                let (u, hops) = if take_zero {
                    zero.pop_front().unwrap()
                } else {
                    arrivals.pop_front().unwrap()
                };
                if dist[u as usize].is_reachable() {
                    continue;
                }
                dist[u as usize] = HopDistance { weight: level, hops };
                for &(x, w) in &self.adj[u as usize] {
                    if dist[x as usize].is_reachable() {
                        continue;
                    }
                    if w == 0 {
                        zero.push_back((x, hops + 1));
                    } else {
                        next.push_back((x, hops + 1));
                    }
                }
            }
            std::mem::swap(&mut arrivals, &mut next);
            level += 1;
        }
        dist
    }

    /// Hop-free convenience wrapper around [`Graph::sssp`].
    pub fn distances_from(&self, source: NodeId) -> Vec<Dist> {
        self.sssp(source).into_iter().map(|d| d.weight).collect()
    }

    /// All-pairs oracle: one [`Graph::sssp`] run per node.
    pub fn all_pairs(&self) -> DistanceMatrix {
        let rows: Vec<Vec<HopDistance>> =
            (0..self.n as NodeId).into_par_iter().map(|s| self.sssp(s)).collect();
        let mut d = Vec::with_capacity(self.n * self.n);
        let mut hops = Vec::with_capacity(self.n * self.n);
        for row in rows {
            d.extend(row.iter().map(|x| x.weight));
            hops.extend(row.iter().map(|x| x.hops));
        }
        DistanceMatrix { n: self.n, d, hops }
    }

    /// Renders the edge-list text format: `n m` header, then one `u v [w]` line
    /// per edge (weight omitted when it is 1).
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.n, self.edges.len()).unwrap();
        for e in &self.edges {
            if e.w == 1 {
                writeln!(out, "{} {}", e.u, e.v).unwrap();
            } else {
                writeln!(out, "{} {} {}", e.u, e.v, e.w).unwrap();
            }
        }
        out
    }

    pub fn read_edge_list<R: Read>(reader: R) -> Result<Graph, GraphError> {
        let reader = BufReader::new(reader);
        let mut header: Option<(usize, usize)> = None;
        let mut list = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| GraphError::Io(e.to_string()))?;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<u64>().map_err(|_| GraphError::Parse {
                    line: lineno,
                    msg: format!("expected a non-negative integer, found {s:?}"),
                })
            };
            match header {
                None => {
                    if fields.len() != 2 {
                        return Err(GraphError::Parse {
                            line: lineno,
                            msg: "header must be `n m`".into(),
                        });
                    }
                    header = Some((parse(fields[0])? as usize, parse(fields[1])? as usize));
                }
                Some(_) => {
                    if !(2..=3).contains(&fields.len()) {
                        return Err(GraphError::Parse {
                            line: lineno,
                            msg: "edge line must be `u v [w]`".into(),
                        });
                    }
                    let w = if fields.len() == 3 { parse(fields[2])? } else { 1 };
                    list.push((parse(fields[0])?, parse(fields[1])?, w));
                }
            }
        }
        let (n, m) = header.ok_or(GraphError::Parse { line: 0, msg: "missing header".into() })?;
        if list.len() != m {
            return Err(GraphError::Parse {
                line: 0,
                msg: format!("header announces {m} edges but {} were listed", list.len()),
            });
        }
        Graph::new(n, &list)
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        Graph::read_edge_list(text.as_bytes())
    }
}

/// Brute-force all-pairs distances used to verify decoders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<Dist>,
    hops: Vec<Dist>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: NodeId, v: NodeId) -> Dist {
        self.d[u as usize * self.n + v as usize]
    }

    pub fn hops(&self, u: NodeId, v: NodeId) -> Dist {
        self.hops[u as usize * self.n + v as usize]
    }

    pub fn row(&self, u: NodeId) -> &[Dist] {
        &self.d[u as usize * self.n..(u as usize + 1) * self.n]
    }
}

pub(crate) fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform simple graph with exactly `m` unit-weight edges.
pub fn gen_gnm(n: usize, m: usize, seed: u64) -> Result<Graph, GraphError> {
    let total = n.saturating_mul(n.saturating_sub(1)) / 2;
    if m > total {
        return Err(GraphError::InvalidParams(format!(
            "{m} edges requested but a simple graph on {n} nodes has at most {total}"
        )));
    }
    let mut rng = rng_for(seed);
    let mut pairs: Vec<(NodeId, NodeId)> = if 2 * m <= total {
        let mut chosen = HashSet::with_capacity(m);
        let mut out = Vec::with_capacity(m);
        while out.len() < m {
            let u = rng.gen_range(0..n as NodeId);
            let v = rng.gen_range(0..n as NodeId);
            if u == v {
                continue;
            }
            let key = (u.min(v), u.max(v));
            if chosen.insert(key) {
                out.push(key);
            }
        }
        out
    } else {
        let mut all: Vec<(NodeId, NodeId)> = (0..n as NodeId)
            .flat_map(|u| (u + 1..n as NodeId).map(move |v| (u, v)))
            .collect();
        let (picked, _) = all.partial_shuffle(&mut rng, m);
        picked.to_vec()
    };
    pairs.sort_unstable();
    Graph::from_unit_edges(n, &pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structured {
    Path(usize),
    Cycle(usize),
    Grid(usize, usize),
    /// Center 0 plus the given number of leaves.
    Star(usize),
}

pub fn gen_structured(kind: Structured) -> Result<Graph, GraphError> {
    let edges: Vec<(NodeId, NodeId)> = match kind {
        Structured::Path(n) => {
            if n == 0 {
                return Err(GraphError::InvalidParams("path needs at least one node".into()));
            }
            return Graph::from_unit_edges(
                n,
                &(1..n as NodeId).map(|i| (i - 1, i)).collect::<Vec<_>>(),
            );
        }
        Structured::Cycle(n) => {
            if n < 3 {
                return Err(GraphError::InvalidParams("cycle needs at least 3 nodes".into()));
            }
            (0..n as NodeId).map(|i| (i, (i + 1) % n as NodeId)).collect()
        }
        Structured::Grid(rows, cols) => {
            if rows == 0 || cols == 0 {
                return Err(GraphError::InvalidParams("grid sides must be positive".into()));
            }
            let id = |r: usize, c: usize| (r * cols + c) as NodeId;
            let mut e = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        e.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < rows {
                        e.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            return Graph::from_unit_edges(rows * cols, &e);
        }
        Structured::Star(leaves) => (1..=leaves as NodeId).map(|i| (0, i)).collect(),
    };
    let n = match kind {
        Structured::Cycle(n) => n,
        Structured::Star(leaves) => leaves + 1,
        _ => unreachable!(),
    };
    Graph::from_unit_edges(n, &edges)
}

/// Bipartite graph between `k` left and `k` right nodes, each right node
/// extended into a path of `path_len` nodes.
#[derive(Debug, Clone)]
pub struct LowerBoundFamily {
    pub graph: Graph,
    /// Ids of the left nodes `L_0..L_{k-1}`.
    pub left: Vec<NodeId>,
    /// Ids of the last node on each right path.
    pub path_ends: Vec<NodeId>,
}

/// Layout: left nodes `0..k`, then for each `j` the path `R_j = w_j^1, ..,
/// w_j^D` occupying ids `k + j*D .. k + (j+1)*D`.
/// `dist(L_i, w_j) = D` exactly when `adj[i][j]` is set.
pub fn gen_lower_bound_family(
    k: usize,
    path_len: usize,
    adj: &[Vec<bool>],
) -> Result<LowerBoundFamily, GraphError> {
    if k == 0 || path_len == 0 {
        return Err(GraphError::InvalidParams("k and D must both be at least 1".into()));
    }
    if adj.len() != k || adj.iter().any(|row| row.len() != k) {
        return Err(GraphError::InvalidParams(format!("adjacency must be {k}x{k}")));
    }
    let n = k + k * path_len;
    let right = |j: usize| (k + j * path_len) as NodeId;
    let mut edges = Vec::new();
    for (i, row) in adj.iter().enumerate() {
        for (j, &bit) in row.iter().enumerate() {
            if bit {
                edges.push((i as NodeId, right(j)));
            }
        }
    }
    for j in 0..k {
        for step in 1..path_len {
            let a = right(j) + step as NodeId - 1;
            edges.push((a, a + 1));
        }
    }
    let graph = Graph::from_unit_edges(n, &edges)?;
    Ok(LowerBoundFamily {
        graph,
        left: (0..k as NodeId).collect(),
        path_ends: (0..k).map(|j| right(j) + path_len as NodeId - 1).collect(),
    })
}

pub fn random_adjacency(k: usize, seed: u64) -> Vec<Vec<bool>> {
    let mut rng = rng_for(seed);
    (0..k).map(|_| (0..k).map(|_| rng.gen_bool(0.5)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Lexicographic (weight, hops) relaxation until fixpoint; independent of
    /// the level-queue implementation.
    fn bellman_ford(g: &Graph, s: NodeId) -> Vec<HopDistance> {
        let mut d = vec![(INF, INF); g.n()];
        d[s as usize] = (0, 0);
        loop {
            let mut changed = false;
            for e in g.edges() {
                for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                    let da = d[a as usize];
                    if da.0 == INF {
                        continue;
                    }
                    let cand = (da.0 + e.w as u32, da.1 + 1);
                    if cand < d[b as usize] {
                        d[b as usize] = cand;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        d.into_iter().map(|(weight, hops)| HopDistance { weight, hops }).collect()
    }

    #[test]
    fn single_edge_and_empty_graph() {
        let g = Graph::new(2, &[(0, 1, 1)]).unwrap();
        assert_eq!(g.distances_from(0), vec![0, 1]);
        let g = Graph::new(3, &[]).unwrap();
        let apsp = g.all_pairs();
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(apsp.get(u, v), if u == v { 0 } else { INF });
            }
        }
    }

    #[test]
    fn zero_weight_edge_contributes_nothing() {
        let g = Graph::new(4, &[(0, 1, 1), (1, 2, 0), (2, 3, 1)]).unwrap();
        assert_eq!(g.distances_from(0)[3], 2);
        let g = Graph::new(3, &[(0, 1, 0), (1, 2, 1)]).unwrap();
        let d = g.sssp(0);
        assert_eq!(d[2], HopDistance { weight: 1, hops: 2 });
    }

    #[test]
    fn path_sssp() {
        let g = gen_structured(Structured::Path(3)).unwrap();
        let d = g.sssp(0);
        assert_eq!(d.iter().map(|x| x.weight).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(d.iter().map(|x| x.hops).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn construction_errors_name_the_edge() {
        assert_eq!(
            Graph::new(2, &[(0, 2, 1)]),
            Err(GraphError::NodeOutOfRange { u: 0, v: 2, n: 2 })
        );
        assert_eq!(Graph::new(2, &[(1, 1, 1)]), Err(GraphError::SelfLoop { u: 1 }));
        assert_eq!(
            Graph::new(3, &[(0, 1, 1), (1, 0, 1)]),
            Err(GraphError::DuplicateEdge { u: 1, v: 0 })
        );
        assert_eq!(
            Graph::new(3, &[(0, 1, 2)]),
            Err(GraphError::InvalidWeight { u: 0, v: 1, w: 2 })
        );
    }

    #[test]
    fn sssp_matches_relaxation_on_random_graphs() {
        for seed in 0..5 {
            let g = gen_gnm(64, 128, seed).unwrap();
            for s in [0, 17, 63] {
                assert_eq!(g.sssp(s), bellman_ford(&g, s));
            }
        }
    }

    #[test]
    fn sssp_matches_relaxation_with_zero_edges() {
        // random 0/1 weights exercise the hop tie-break
        let mut rng = rng_for(99);
        for seed in 0..10 {
            let base = gen_gnm(48, 110, seed).unwrap();
            let list: Vec<_> = base
                .edges()
                .iter()
                .map(|e| (e.u as u64, e.v as u64, rng.gen_range(0..2u64)))
                .collect();
            let g = Graph::new(48, &list).unwrap();
            for s in 0..48 {
                assert_eq!(g.sssp(s), bellman_ford(&g, s), "seed {seed} source {s}");
            }
        }
    }

    #[test]
    fn all_pairs_examples() {
        let c4 = gen_structured(Structured::Cycle(4)).unwrap();
        assert_eq!(c4.all_pairs().get(0, 2), 2);
        let two = Graph::from_unit_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let d = two.all_pairs();
        assert_eq!(d.get(0, 3), INF);
        assert_eq!(d.get(1, 2), INF);
        let g = gen_gnm(32, 64, 3).unwrap();
        let d = g.all_pairs();
        for s in 0..32 {
            assert_eq!(d.row(s), g.distances_from(s).as_slice());
        }
    }

    #[test]
    fn all_pairs_metric_properties() {
        let g = gen_gnm(40, 60, 11).unwrap();
        let d = g.all_pairs();
        for u in 0..40 {
            assert_eq!(d.get(u, u), 0);
            for v in 0..40 {
                assert_eq!(d.get(u, v), d.get(v, u));
                assert_eq!(d.hops(u, v), d.get(u, v));
                for x in 0..40 {
                    let (a, b, c) = (d.get(u, v), d.get(u, x), d.get(x, v));
                    if b != INF && c != INF {
                        assert!(a <= b + c);
                    }
                }
            }
        }
    }

    #[test]
    fn gnm_generator() {
        let k4 = gen_gnm(4, 6, 5).unwrap();
        assert_eq!(k4.m(), 6);
        assert!((0..4).all(|u| k4.degree(u) == 3));
        assert_eq!(gen_gnm(10, 0, 1).unwrap().m(), 0);
        assert_eq!(gen_gnm(100, 200, 42).unwrap(), gen_gnm(100, 200, 42).unwrap());
        assert!(gen_gnm(4, 7, 0).is_err());
        // dense branch
        let g = gen_gnm(20, 150, 2).unwrap();
        assert_eq!(g.m(), 150);
    }

    #[test]
    fn structured_generators() {
        let d = |g: Graph, a, b| g.distances_from(a)[b as usize];
        assert_eq!(d(gen_structured(Structured::Path(5)).unwrap(), 0, 4), 4);
        assert_eq!(d(gen_structured(Structured::Cycle(8)).unwrap(), 0, 4), 4);
        assert_eq!(d(gen_structured(Structured::Grid(3, 3)).unwrap(), 0, 8), 4);
        let star = gen_structured(Structured::Star(5)).unwrap();
        assert_eq!(star.n(), 6);
        assert_eq!(d(star, 1, 5), 2);
        assert!(gen_structured(Structured::Cycle(2)).is_err());
        assert!(gen_structured(Structured::Grid(0, 3)).is_err());
    }

    #[test]
    fn lower_bound_family_small_cases() {
        let id = vec![vec![true, false], vec![false, true]];
        let fam = gen_lower_bound_family(2, 2, &id).unwrap();
        assert_eq!(fam.graph.n(), 6);
        let d = fam.graph.all_pairs();
        assert_eq!(d.get(fam.left[0], fam.path_ends[0]), 2);
        assert_eq!(d.get(fam.left[0], fam.path_ends[1]), INF);

        let fam = gen_lower_bound_family(1, 1, &[vec![true]]).unwrap();
        assert_eq!(fam.path_ends, vec![1]);
        assert_eq!(fam.graph.distances_from(0)[1], 1);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn lower_bound_family_exhaustive() {
        for k in 1..=8usize {
            for dd in 1..=8usize {
                let adj = random_adjacency(k, (k * 31 + dd) as u64);
                let fam = gen_lower_bound_family(k, dd, &adj).unwrap();
                let d = fam.graph.all_pairs();
                for i in 0..k {
                    for j in 0..k {
                        let x = d.get(fam.left[i], fam.path_ends[j]);
                        assert_eq!(x == dd as u32, adj[i][j]);
                        if x != INF {
                            assert!(x >= dd as u32);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn edge_list_round_trip_and_comments() {
        let text = "# a comment\n4 3\n0 1\n1 2 0 # zero weight\n2 3 1\n";
        let g = Graph::parse_edge_list(text).unwrap();
        assert_eq!(g.m(), 3);
        assert_eq!(g.edges()[1].w, 0);
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        assert!(Graph::parse_edge_list("3 2\n0 1\n").is_err());
        assert!(matches!(
            Graph::parse_edge_list("3 1\n0 x\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
    }
}
