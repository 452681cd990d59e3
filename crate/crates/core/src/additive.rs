//! r-additive labels: decoded distances lie in `[d, d + r]`.
//!
//! Nodes with at least `t` neighbours in the power graph `G^r` (edges between
//! nodes at distance at most `⌊r/2⌋`) are dominated by a greedily chosen set
//! `S`, and every node stores its distance to each member of `S`. Nodes below
//! the degree threshold also store their radius-`D` ball in the subgraph
//! induced by the low-degree nodes. A D-preserving label handles far pairs.
//! The decoder takes the minimum over all three candidates; each one is an
//! upper bound on its own.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use log::warn;
use rayon::prelude::*;

use crate::codec::{width_for, BitCursor, BitWriter};
use crate::graph::{Dist, Graph, NodeId, INF};
use crate::label::{
    decode_as, lookup, min_shared_sum, read_capped_table, read_id_table, write_capped_table,
    write_id_table, DecodeError, EncodeError, Header, Label, LabelSet, SchemeInfo, SchemeTag,
};
use crate::preserving::{full_bodies, FullView, Sources, DEFAULT_RESAMPLE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdditiveParams {
    pub r: u32,
    /// Degree threshold; `None` selects `⌈r·(ln n)^10⌉` clamped to `n`.
    pub t: Option<u32>,
    /// Preserving threshold; `None` selects `⌊r·ln n / (4·ln t)⌋`.
    pub threshold: Option<u32>,
    pub seed: u64,
}

/// Parameters after defaults and clamping for a concrete `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolvedAdditive {
    pub r: u32,
    pub t: u32,
    pub threshold: u32,
}

impl AdditiveParams {
    pub fn new(r: u32, seed: u64) -> AdditiveParams {
        AdditiveParams { r, t: None, threshold: None, seed }
    }

    pub fn with_overrides(r: u32, t: u32, threshold: u32, seed: u64) -> AdditiveParams {
        AdditiveParams { r, t: Some(t), threshold: Some(threshold), seed }
    }

    pub fn resolve(&self, n: usize) -> Result<ResolvedAdditive, EncodeError> {
        if self.r < 2 {
            return Err(EncodeError::InvalidParams(format!("r must be >= 2, got {}", self.r)));
        }
        let ln_n = (n.max(1) as f64).ln();
        let t = match self.t {
            Some(0) => return Err(EncodeError::InvalidParams("t must be >= 1".into())),
            Some(t) => t,
            None => {
                let raw = (self.r as f64 * ln_n.powi(10)).ceil();
                raw.min(n as f64).max(1.0) as u32
            }
        };
        let threshold = match self.threshold {
            Some(d) => d,
            None => {
                let ln_t = (t as f64).ln();
                if ln_t <= 0.0 {
                    n as u32
                } else {
                    (self.r as f64 * ln_n / (4.0 * ln_t)).floor().min(n as f64) as u32
                }
            }
        };
        let threshold = threshold.min(n as u32).max(2);
        Ok(ResolvedAdditive { r: self.r, t, threshold })
    }
}

/// Graph with an edge between every pair at distance `1..=radius` in `g`.
pub fn power_graph(g: &Graph, radius: u32) -> Result<Graph, EncodeError> {
    if radius == 0 {
        return Err(EncodeError::InvalidParams("radius must be >= 1".into()));
    }
    if !g.is_unit_weight() {
        return Err(EncodeError::UnsupportedInput("power graph needs unit weights".into()));
    }
    let rows: Vec<Vec<NodeId>> = (0..g.n() as NodeId)
        .into_par_iter()
        .map(|u| {
            truncated_bfs(g, u, radius, None)
                .into_iter()
                .filter(|&(v, _)| v > u)
                .map(|(v, _)| v)
                .collect()
        })
        .collect();
    let edges: Vec<(NodeId, NodeId)> = rows
        .into_iter()
        .enumerate()
        .flat_map(|(u, vs)| vs.into_iter().map(move |v| (u as NodeId, v)))
        .collect();
    Ok(Graph::from_unit_edges(g.n(), &edges)?)
}

/// BFS from `u` up to `depth`, skipping masked nodes. Returns `(node, dist)`
/// sorted by node id.
fn truncated_bfs(
    g: &Graph,
    u: NodeId,
    depth: u32,
    excluded: Option<&[bool]>,
) -> Vec<(NodeId, Dist)> {
    let mut dist = vec![INF; g.n()];
    let mut queue = VecDeque::new();
    dist[u as usize] = 0;
    queue.push_back(u);
    let mut out = vec![(u, 0)];
    while let Some(x) = queue.pop_front() {
        let dx = dist[x as usize];
        if dx == depth {
            continue;
        }
        for &(y, _) in g.neighbors(x) {
            if dist[y as usize] != INF || excluded.is_some_and(|m| m[y as usize]) {
                continue;
            }
            dist[y as usize] = dx + 1;
            out.push((y, dx + 1));
            queue.push_back(y);
        }
    }
    out.sort_unstable();
    out
}

/// Nodes of `gr` with degree at least `t`.
pub fn high_degree_set(gr: &Graph, t: u32) -> Vec<NodeId> {
    (0..gr.n() as NodeId).filter(|&v| gr.degree(v) >= t as usize).collect()
}

/// Greedy max-coverage dominating set of `targets` in `gr`: repeatedly picks
/// the node whose closed neighbourhood holds the most undominated targets,
/// smallest id first on ties. Returned in ascending id order.
pub fn greedy_dominating_set(gr: &Graph, targets: &[NodeId]) -> Vec<NodeId> {
    let n = gr.n();
    let mut pending = vec![false; n];
    for &t in targets {
        pending[t as usize] = true;
    }
    let mut left = pending.iter().filter(|&&p| p).count();
    let gain = |x: NodeId, pending: &[bool]| {
        pending[x as usize] as usize
            + gr.neighbors(x).iter().filter(|(y, _)| pending[*y as usize]).count()
    };
    let mut heap: BinaryHeap<(usize, Reverse<NodeId>)> = (0..n as NodeId)
        .map(|x| (gain(x, &pending), Reverse(x)))
        .filter(|&(g, _)| g > 0)
        .collect();
    let mut chosen = Vec::new();
    while left > 0 {
        let (stale, Reverse(x)) = heap.pop().expect("every target dominates itself");
        let fresh = gain(x, &pending);
        if fresh == stale {
            chosen.push(x);
            for y in std::iter::once(x).chain(gr.neighbors(x).iter().map(|e| e.0)) {
                if pending[y as usize] {
                    pending[y as usize] = false;
                    left -= 1;
                }
            }
        } else if fresh > 0 {
            heap.push((fresh, Reverse(x)));
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Radius-`depth` ball around `u` in the subgraph induced by the nodes not in
/// `excluded`, as `(node, induced distance)` sorted by node id.
pub fn ball_in_induced(
    g: &Graph,
    excluded: &[NodeId],
    u: NodeId,
    depth: u32,
) -> Result<Vec<(NodeId, Dist)>, EncodeError> {
    let mut mask = vec![false; g.n()];
    for &x in excluded {
        mask[x as usize] = true;
    }
    if mask[u as usize] {
        return Err(EncodeError::InvalidParams(format!("ball center {u} is excluded")));
    }
    Ok(truncated_bfs(g, u, depth, Some(&mask)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveInfo {
    pub params: ResolvedAdditive,
    pub high_degree: usize,
    pub dominators: usize,
    pub max_ball: usize,
}

pub fn encode_additive_with_info(
    g: &Graph,
    p: &AdditiveParams,
) -> Result<(LabelSet, AdditiveInfo), EncodeError> {
    if g.n() == 0 {
        return Err(EncodeError::InvalidParams("graph has no nodes".into()));
    }
    if !g.is_unit_weight() {
        return Err(EncodeError::UnsupportedInput("additive scheme needs unit weights".into()));
    }
    let params = p.resolve(g.n())?;
    if params.r as f64 > (g.n() as f64).powf(0.1) {
        warn!("r = {} exceeds n^(1/10) for n = {}", params.r, g.n());
    }
    let gr = power_graph(g, params.r / 2)?;
    let high = high_degree_set(&gr, params.t);
    let dominators = greedy_dominating_set(&gr, &high);
    let mut high_mask = vec![false; g.n()];
    for &h in &high {
        high_mask[h as usize] = true;
    }
    let n_width = width_for(g.n() as u64);
    let ball_width = width_for(params.threshold as u64);
    let (full, _) = full_bodies(&Sources::new(g), params.threshold, p.seed, DEFAULT_RESAMPLE_CAP)?;
    let parts: Vec<(Label, usize)> = full
        .into_par_iter()
        .enumerate()
        .map(|(u, full)| -> Result<(Label, usize), EncodeError> {
            let u = u as NodeId;
            let dist = g.distances_from(u);
            let mut w = BitWriter::new();
            Header { scheme: SchemeTag::Additive, n: g.n() as u32, id: u }.write(&mut w)?;
            w.write_gamma(params.r as u64)?;
            w.write_gamma(params.t as u64)?;
            w.write_gamma(params.threshold as u64)?;
            let is_high = high_mask[u as usize];
            w.write_bit(is_high);
            w.write_gamma(dominators.len() as u64 + 1)?;
            write_capped_table(
                &mut w,
                dominators.iter().map(|&s| dist[s as usize]),
                INF - 1,
                n_width,
            )?;
            let mut ball_len = 0;
            if !is_high {
                let ball = truncated_bfs(g, u, params.threshold, Some(&high_mask));
                ball_len = ball.len();
                write_id_table(&mut w, &ball, ball_width)?;
            }
            w.append(&full.finish());
            Ok((Label(w.finish()), ball_len))
        })
        .collect::<Result<_, _>>()?;
    let max_ball = parts.iter().map(|p| p.1).max().unwrap_or(0);
    let info = AdditiveInfo {
        params,
        high_degree: high.len(),
        dominators: dominators.len(),
        max_ball,
    };
    let set = LabelSet {
        scheme: SchemeInfo {
            tag: SchemeTag::Additive,
            params: vec![
                params.r as u64,
                params.t as u64,
                params.threshold as u64,
                dominators.len() as u64,
            ],
        },
        labels: parts.into_iter().map(|p| p.0).collect(),
    };
    Ok((set, info))
}

pub fn encode_additive(g: &Graph, p: &AdditiveParams) -> Result<LabelSet, EncodeError> {
    encode_additive_with_info(g, p).map(|(set, _)| set)
}

pub fn decode_additive(a: &Label, b: &Label) -> Result<Dist, DecodeError> {
    decode_as(SchemeTag::Additive, a, b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct AdditiveView {
    r: u32,
    t: u32,
    threshold: u32,
    high: bool,
    dominator_count: u32,
    dominators: Vec<(u32, Dist)>,
    ball: Vec<(NodeId, Dist)>,
    full: FullView,
}

impl AdditiveView {
    pub(crate) fn read(c: &mut BitCursor<'_>, n: u32) -> Result<AdditiveView, DecodeError> {
        let r = c.read_gamma_u32()?;
        let t = c.read_gamma_u32()?;
        let threshold = c.read_gamma_u32()?;
        let high = c.read_bit()?;
        let dominator_count = c.read_gamma_u32()? - 1;
        let dominators = read_capped_table(c, dominator_count, width_for(n as u64))?;
        let ball = if high { Vec::new() } else { read_id_table(c, width_for(threshold as u64))? };
        let full = FullView::read(c)?;
        Ok(AdditiveView { r, t, threshold, high, dominator_count, dominators, ball, full })
    }

    pub(crate) fn distance(
        &self,
        a: NodeId,
        other: &AdditiveView,
        b: NodeId,
    ) -> Result<Dist, DecodeError> {
        if (self.r, self.t, self.threshold, self.dominator_count)
            != (other.r, other.t, other.threshold, other.dominator_count)
        {
            return Err(DecodeError::Incompatible("different additive parameters".into()));
        }
        let mut best = min_shared_sum(&self.dominators, &other.dominators);
        if let Some(d) = lookup(&self.ball, b).or_else(|| lookup(&other.ball, a)) {
            best = best.min(d);
        }
        Ok(best.min(self.full.distance(a, &other.full, b)?))
    }
}
