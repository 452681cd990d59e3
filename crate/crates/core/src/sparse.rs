//! Exact labels for bounded-degree and sparse graphs.
//!
//! A bounded-degree label is a table of every node within fewer than `D` hops
//! plus a D-preserving label with `D = ⌈ln n / (1 + 2 ln Δ)⌉`: close pairs are
//! answered by the table, far pairs by the preserving levels. Sparse graphs are
//! first reduced to degree at most `k = max(⌈m/n⌉, 3)` by splitting every
//! high-degree node into a chain of copies joined by 0-weight edges.

use rayon::prelude::*;

use crate::codec::{BitCursor, BitWriter, CodecError};
use crate::graph::{Dist, Graph, NodeId};
use crate::label::{
    decode_as, lookup, read_id_table, write_id_table, DecodeError, EncodeError, Header, Label,
    LabelSet, SchemeInfo, SchemeTag,
};
use crate::preserving::{full_bodies, FullView, Sources, DEFAULT_RESAMPLE_CAP};

/// Degree-reduced graph and the mapping back to the input graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    pub gprime: Graph,
    /// `rep[u]` is the first copy of original node `u`; always `u` itself.
    pub rep: Vec<NodeId>,
    /// `origin[x] = (original node, copy index)` for every node of `gprime`.
    pub origin: Vec<(NodeId, u32)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SparseParams {
    /// Split threshold `max(⌈m/n⌉, 3)`.
    pub k: u32,
    /// Degree bound handed to the bounded-degree scheme; equal to `k`.
    pub delta: u32,
    /// Preserving threshold computed on the split graph.
    pub threshold: u32,
}

pub fn split_threshold(n: usize, m: usize) -> u32 {
    (m.div_ceil(n.max(1)) as u32).max(3)
}

/// `max(2, ⌈ln n / (1 + 2 ln Δ)⌉)`.
pub fn bounded_degree_threshold(n: usize, delta: usize) -> u32 {
    let ln_n = (n.max(1) as f64).ln();
    let denom = 1.0 + 2.0 * (delta.max(1) as f64).ln();
    ((ln_n / denom).ceil() as u32).max(2)
}

/// Replaces each node of degree above `k` by `⌈deg/(k-2)⌉` copies on a
/// 0-weight path and hands its edge endpoints to the copies first-fit, so
/// every copy ends with degree at most `k`.
pub fn split_transform(g: &Graph, k: u32) -> Result<SplitResult, EncodeError> {
    if k < 3 {
        return Err(EncodeError::InvalidParams(format!("split threshold must be >= 3, got {k}")));
    }
    if !g.is_unit_weight() {
        return Err(EncodeError::UnsupportedInput("split transform needs unit weights".into()));
    }
    let n = g.n();
    let k = k as usize;
    let mut copies: Vec<Vec<NodeId>> = Vec::with_capacity(n);
    let mut origin: Vec<(NodeId, u32)> = (0..n as NodeId).map(|u| (u, 0)).collect();
    let mut next = n as NodeId;
    for u in 0..n as NodeId {
        let deg = g.degree(u);
        let count = if deg > k { deg.div_ceil(k - 2) } else { 1 };
        let mut ids = vec![u];
        for c in 1..count {
            ids.push(next);
            origin.push((u, c as u32));
            next += 1;
        }
        copies.push(ids);
    }
    let total = next as usize;
    let mut degree = vec![0usize; total];
    let mut edges: Vec<(u64, u64, u64)> = Vec::with_capacity(g.m() + total - n);
    for chain in &copies {
        for pair in chain.windows(2) {
            degree[pair[0] as usize] += 1;
            degree[pair[1] as usize] += 1;
            edges.push((pair[0] as u64, pair[1] as u64, 0));
        }
    }
    let mut cursor = vec![0usize; n];
    let mut place = |u: NodeId, degree: &mut Vec<usize>| -> NodeId {
        let chain = &copies[u as usize];
        let at = &mut cursor[u as usize];
        while degree[chain[*at] as usize] >= k {
            *at += 1;
        }
        let copy = chain[*at];
        degree[copy as usize] += 1;
        copy
    };
    for e in g.edges() {
        let a = place(e.u, &mut degree);
        let b = place(e.v, &mut degree);
        edges.push((a as u64, b as u64, 1));
    }
    let gprime = Graph::new(total, &edges)?;
    Ok(SplitResult { gprime, rep: (0..n as NodeId).collect(), origin })
}

fn ceil_log2(x: u32) -> u32 {
    if x <= 1 {
        0
    } else {
        32 - (x - 1).leading_zeros()
    }
}

fn near_width(threshold: u32) -> u32 {
    ceil_log2(threshold) + 1
}

/// Body shared by `bdeg` and `sparse`: γ(Δ), γ(D), the near table (ids with
/// hop distance below `D` and their weighted distances) and a full
/// D-preserving body.
fn near_bodies(
    g: &Graph,
    delta: u32,
    threshold: u32,
    seed: u64,
) -> Result<(Vec<BitWriter>, usize), EncodeError> {
    let width = near_width(threshold);
    let src = Sources::new(g);
    let near: Vec<BitWriter> = (0..g.n() as NodeId)
        .into_par_iter()
        .map(|u| -> Result<BitWriter, EncodeError> {
            let dist = src.get(u);
            let table: Vec<(NodeId, Dist)> = dist
                .iter()
                .enumerate()
                .filter(|(_, d)| d.is_reachable() && d.hops < threshold)
                .map(|(v, d)| (v as NodeId, d.weight))
                .collect();
            let mut w = BitWriter::new();
            w.write_gamma(delta as u64)?;
            w.write_gamma(threshold as u64)?;
            write_id_table(&mut w, &table, width)?;
            Ok(w)
        })
        .collect::<Result<_, _>>()?;
    let (full, stats) = full_bodies(&src, threshold, seed, DEFAULT_RESAMPLE_CAP)?;
    let out = near
        .into_iter()
        .zip(full)
        .map(|(mut w, f)| {
            w.append(&f.finish());
            w
        })
        .collect();
    Ok((out, stats.len()))
}

/// Exact labels for graphs whose maximum degree is at most `delta`.
pub fn encode_bounded_degree(g: &Graph, delta: u32, seed: u64) -> Result<LabelSet, EncodeError> {
    if g.n() == 0 {
        return Err(EncodeError::InvalidParams("graph has no nodes".into()));
    }
    if let Some(node) = (0..g.n() as NodeId).find(|&u| g.degree(u) > delta as usize) {
        return Err(EncodeError::DegreeBound {
            node,
            degree: g.degree(node),
            bound: delta as usize,
        });
    }
    let threshold = bounded_degree_threshold(g.n(), delta as usize);
    let (bodies, levels) = near_bodies(g, delta, threshold, seed)?;
    let labels = bodies
        .into_iter()
        .enumerate()
        .map(|(u, body)| {
            let mut w = BitWriter::new();
            Header { scheme: SchemeTag::BoundedDegree, n: g.n() as u32, id: u as NodeId }
                .write(&mut w)?;
            w.append(&body.finish());
            Ok(Label(w.finish()))
        })
        .collect::<Result<Vec<_>, EncodeError>>()?;
    Ok(LabelSet {
        scheme: SchemeInfo {
            tag: SchemeTag::BoundedDegree,
            params: vec![delta as u64, threshold as u64, levels as u64],
        },
        labels,
    })
}

pub fn sparse_params(g: &Graph, split: &SplitResult) -> SparseParams {
    let k = split_threshold(g.n(), g.m());
    SparseParams {
        k,
        delta: k,
        threshold: bounded_degree_threshold(split.gprime.n(), k as usize),
    }
}

/// Exact labels for any unit-weight graph via the split transform. Node `u`
/// receives the label of its first copy, which keeps id `u`.
pub fn encode_sparse(g: &Graph, seed: u64) -> Result<LabelSet, EncodeError> {
    if g.n() == 0 {
        return Err(EncodeError::InvalidParams("graph has no nodes".into()));
    }
    let k = split_threshold(g.n(), g.m());
    let split = split_transform(g, k)?;
    let params = sparse_params(g, &split);
    let gp = &split.gprime;
    let (bodies, levels) = near_bodies(gp, params.delta, params.threshold, seed)?;
    let labels = split
        .rep
        .iter()
        .map(|&copy| {
            let mut w = BitWriter::new();
            Header { scheme: SchemeTag::Sparse, n: gp.n() as u32, id: copy }.write(&mut w)?;
            w.write_gamma(k as u64)?;
            w.append(&bodies[copy as usize].clone().finish());
            Ok(Label(w.finish()))
        })
        .collect::<Result<Vec<_>, EncodeError>>()?;
    Ok(LabelSet {
        scheme: SchemeInfo {
            tag: SchemeTag::Sparse,
            params: vec![
                params.delta as u64,
                params.threshold as u64,
                k as u64,
                gp.n() as u64,
                levels as u64,
            ],
        },
        labels,
    })
}

pub fn decode_bounded_degree(a: &Label, b: &Label) -> Result<Dist, DecodeError> {
    decode_as(SchemeTag::BoundedDegree, a, b)
}

pub fn decode_sparse(a: &Label, b: &Label) -> Result<Dist, DecodeError> {
    decode_as(SchemeTag::Sparse, a, b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct NearView {
    delta: u32,
    threshold: u32,
    near: Vec<(NodeId, Dist)>,
    full: FullView,
}

impl NearView {
    pub(crate) fn read(c: &mut BitCursor<'_>) -> Result<NearView, DecodeError> {
        let pos = c.position();
        let delta = c.read_gamma_u32()?;
        let threshold = c.read_gamma_u32()?;
        if threshold > 1 << 30 {
            return Err(CodecError::Malformed { position: pos }.into());
        }
        let near = read_id_table(c, near_width(threshold))?;
        let full = FullView::read(c)?;
        Ok(NearView { delta, threshold, near, full })
    }

    #[cfg(test)]
    pub(crate) fn near_len(&self) -> usize {
        self.near.len()
    }

    pub(crate) fn distance(
        &self,
        a: NodeId,
        other: &NearView,
        b: NodeId,
    ) -> Result<Dist, DecodeError> {
        if self.delta != other.delta || self.threshold != other.threshold {
            return Err(DecodeError::Incompatible(format!(
                "(Δ, D) = ({}, {}) vs ({}, {})",
                self.delta, self.threshold, other.delta, other.threshold
            )));
        }
        if let Some(d) = lookup(&self.near, b).or_else(|| lookup(&other.near, a)) {
            return Ok(d);
        }
        self.full.distance(a, &other.full, b)
    }
}
