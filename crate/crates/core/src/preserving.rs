//! D-preserving distance labels.
//!
//! Three encoders share one landmark machinery:
//!
//! * **warm-up**: `⌈c·(n/D)·ln n⌉` sampled landmarks; every label stores its
//!   distance to each landmark and the decoder minimises over them. Resampled
//!   until every pair at distance at least `D` has a landmark on a shortest
//!   path.
//! * **medium** (`[D, 2D]`-preserving): `⌈2·(n/D)·ln D⌉` landmarks `R`. A node
//!   `v` is *uncovered* for `u` when `h(u, v) >= D` and no landmark `w` has
//!   `d(u, w) + d(w, v) = d(u, v)`. Nodes with more than `n/D` uncovered nodes
//!   are *sick* and join the landmark set; healthy nodes store their uncovered
//!   nodes with hop distance in `[D, 2D]` explicitly.
//! * **full**: medium labels for thresholds `D, 2D, 4D, .., 2^k·D` with
//!   `k = ⌊log₂(n/D)⌋`, decoded by taking the minimum over levels.
//!
//! Windows are defined on hop distance `h(u, v)` (fewest edges among the
//! minimum-weight paths) while stored values are weighted distances, so the
//! schemes stay exact on graphs with 0-weight edges. On unit-weight graphs
//! `h = d`.

use std::borrow::Cow;

use rand::Rng;
use rayon::prelude::*;

use crate::codec::{width_for, BitCursor, BitString, BitWriter, CodecError};
use crate::graph::{rng_for, Dist, Graph, HopDistance, NodeId, INF};
use crate::label::{
    decode_as, lookup, min_shared_sum, read_capped_table, read_id_table, write_capped_table,
    write_id_table, DecodeError, EncodeError, Header, Label, LabelSet, SchemeInfo, SchemeTag,
};

pub const DEFAULT_RESAMPLE_CAP: u32 = 50;
pub const DEFAULT_OVERSAMPLING: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreservingParams {
    /// Threshold `D`; pairs at hop distance at least `D` decode exactly.
    pub threshold: u32,
    pub seed: u64,
    pub resample_cap: u32,
    /// Warm-up oversampling constant `c`; must exceed 2.
    pub oversampling: f64,
}

impl PreservingParams {
    pub fn new(threshold: u32, seed: u64) -> PreservingParams {
        PreservingParams {
            threshold,
            seed,
            resample_cap: DEFAULT_RESAMPLE_CAP,
            oversampling: DEFAULT_OVERSAMPLING,
        }
    }

    fn check(&self) -> Result<(), EncodeError> {
        if self.resample_cap == 0 {
            return Err(EncodeError::InvalidParams("resample cap must be at least 1".into()));
        }
        Ok(())
    }
}

pub(crate) fn mix_seed(seed: u64, salt: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `size` uniform independent draws from the nodes of `g`, deduplicated and
/// returned in ascending id order.
pub fn sample_landmarks(g: &Graph, size: usize, seed: u64) -> Vec<NodeId> {
    if g.n() == 0 {
        return Vec::new();
    }
    let mut rng = rng_for(seed);
    let mut picked: Vec<NodeId> = (0..size).map(|_| rng.gen_range(0..g.n() as NodeId)).collect();
    picked.sort_unstable();
    picked.dedup();
    picked
}

/// `⌈c·(n/D)·ln n⌉`, at least 1.
pub fn warmup_sample_size(n: usize, threshold: u32, oversampling: f64) -> usize {
    let n_f = n as f64;
    ((oversampling * n_f / threshold as f64 * n_f.ln()).ceil() as usize).max(1)
}

/// `⌈2·(n/D)·ln D⌉`, at least 1.
pub fn medium_sample_size(n: usize, threshold: u32) -> usize {
    let d = threshold as f64;
    ((2.0 * n as f64 / d * d.ln()).ceil() as usize).max(1)
}

/// Level thresholds `D·2^i` for `i = 0..=k`, `k = max(0, ⌊log₂(n/D)⌋)`.
pub fn level_thresholds(n: usize, threshold: u32) -> Vec<u32> {
    let mut out = vec![threshold];
    let mut t = threshold as u64;
    while t * 2 <= n as u64 {
        t *= 2;
        out.push(t as u32);
    }
    out
}

/// Graphs up to this size keep every sssp row in memory across levels.
const SOURCE_CACHE_MAX_NODES: usize = 3072;

/// Per-source shortest paths, shared by every level of one encoding.
pub(crate) struct Sources<'a> {
    g: &'a Graph,
    rows: Option<Vec<Vec<HopDistance>>>,
}

impl<'a> Sources<'a> {
    pub(crate) fn new(g: &'a Graph) -> Sources<'a> {
        let rows = (g.n() <= SOURCE_CACHE_MAX_NODES)
            .then(|| (0..g.n() as NodeId).into_par_iter().map(|u| g.sssp(u)).collect());
        Sources { g, rows }
    }

    pub(crate) fn get(&self, u: NodeId) -> Cow<'_, [HopDistance]> {
        match &self.rows {
            Some(rows) => Cow::Borrowed(&rows[u as usize]),
            None => Cow::Owned(self.g.sssp(u)),
        }
    }
}

fn membership(n: usize, nodes: &[NodeId]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &w in nodes {
        m[w as usize] = true;
    }
    m
}

/// Marks every `v` such that some landmark `w` satisfies
/// `d(u, w) + d(w, v) = d(u, v)`, where `dist` is the sssp output from `u`.
///
/// Those are exactly the nodes reachable from a landmark along tight edges
/// (`d(u, x) + w(x, y) = d(u, y)`).
fn mark_covered(g: &Graph, dist: &[HopDistance], is_landmark: &[bool], covered: &mut Vec<bool>) {
    covered.clear();
    covered.resize(g.n(), false);
    let mut stack: Vec<NodeId> = Vec::new();
    for (w, &lm) in is_landmark.iter().enumerate() {
        if lm && dist[w].is_reachable() {
            covered[w] = true;
            stack.push(w as NodeId);
        }
    }
    while let Some(x) = stack.pop() {
        let dx = dist[x as usize].weight;
        for &(y, w) in g.neighbors(x) {
            if !covered[y as usize] && dx + w as Dist == dist[y as usize].weight {
                covered[y as usize] = true;
                stack.push(y);
            }
        }
    }
}

fn is_uncovered(d: HopDistance, covered: bool, threshold: u32) -> bool {
    d.is_reachable() && d.hops >= threshold && !covered
}

/// Sick nodes and uncovered sets for a landmark set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub sick: Vec<NodeId>,
    /// `uncovered[u]` lists `uc(u)` in ascending order.
    pub uncovered: Vec<Vec<NodeId>>,
}

pub fn is_sick(uncovered: usize, n: usize, threshold: u32) -> bool {
    uncovered as u64 * threshold as u64 > n as u64
}

pub fn classify_nodes(g: &Graph, landmarks: &[NodeId], threshold: u32) -> Classification {
    let is_landmark = membership(g.n(), landmarks);
    let uncovered: Vec<Vec<NodeId>> = (0..g.n() as NodeId)
        .into_par_iter()
        .map_init(Vec::new, |covered, u| {
            let dist = g.sssp(u);
            mark_covered(g, &dist, &is_landmark, covered);
            (0..g.n())
                .filter(|&v| is_uncovered(dist[v], covered[v], threshold))
                .map(|v| v as NodeId)
                .collect()
        })
        .collect();
    let sick = uncovered
        .iter()
        .enumerate()
        .filter(|(_, uc)| is_sick(uc.len(), g.n(), threshold))
        .map(|(u, _)| u as NodeId)
        .collect();
    Classification { sick, uncovered }
}

fn sick_nodes(src: &Sources, is_landmark: &[bool], threshold: u32) -> Vec<bool> {
    let g = src.g;
    (0..g.n() as NodeId)
        .into_par_iter()
        .map_init(Vec::new, |covered, u| {
            let dist = src.get(u);
            mark_covered(g, &dist, is_landmark, covered);
            let count = (0..g.n())
                .filter(|&v| is_uncovered(dist[v], covered[v], threshold))
                .count();
            is_sick(count, g.n(), threshold)
        })
        .collect()
}

/// Sampling outcome for one `[D, 2D]` level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelStats {
    pub threshold: u32,
    /// Size of the sampled multiset `R`.
    pub sample_size: usize,
    /// `|R ∪ S|` after deduplication.
    pub landmark_count: usize,
    pub sick: usize,
    pub attempts: u32,
    pub first_attempt_sick: usize,
}


struct Level {
    /// Sampled set `R`; coverage is decided against it alone.
    sampled: Vec<bool>,
    /// `R ∪ S` in ascending id order.
    landmarks: Vec<NodeId>,
    sick: Vec<bool>,
    stats: LevelStats,
}

impl Level {
    fn from_sample(src: &Sources, threshold: u32, r: &[NodeId], sample_size: usize) -> Level {
        let g = src.g;
        let sampled = membership(g.n(), r);
        let sick = sick_nodes(src, &sampled, threshold);
        let mut landmarks = r.to_vec();
        landmarks.extend((0..g.n() as NodeId).filter(|&u| sick[u as usize]));
        landmarks.sort_unstable();
        landmarks.dedup();
        let count = sick.iter().filter(|&&s| s).count();
        Level {
            sampled,
            stats: LevelStats {
                threshold,
                sample_size,
                landmark_count: landmarks.len(),
                sick: count,
                attempts: 1,
                first_attempt_sick: count,
            },
            landmarks,
            sick,
        }
    }

    fn accepted(&self, n: usize) -> bool {
        // |S| < 2n/D
        (self.stats.sick as u64) * (self.stats.threshold as u64) < 2 * n as u64
    }
}

fn sample_level(src: &Sources, threshold: u32, seed: u64, cap: u32) -> Result<Level, EncodeError> {
    let g = src.g;
    let n = g.n();
    let size = medium_sample_size(n, threshold);
    let mut first_attempt_sick = 0;
    let mut last_sick = 0;
    for attempt in 0..cap {
        let r = sample_landmarks(g, size, mix_seed(seed, attempt as u64));
        let mut level = Level::from_sample(src, threshold, &r, size);
        if attempt == 0 {
            first_attempt_sick = level.stats.sick;
        }
        last_sick = level.stats.sick;
        if level.accepted(n) {
            level.stats.attempts = attempt + 1;
            level.stats.first_attempt_sick = first_attempt_sick;
            return Ok(level);
        }
    }
    Err(EncodeError::ResampleCapExhausted {
        attempts: cap,
        last: format!("{last_sick} sick nodes at D = {threshold}, n = {n}"),
    })
}

/// Per-node level body: γ(D), γ(|R ∪ S| + 1), sick bit, the landmark table
/// capped at `2D`, and for healthy nodes the uncovered nodes with hop distance
/// in `[D, 2D]`.
fn level_bodies(src: &Sources, level: &Level) -> Result<Vec<BitString>, EncodeError> {
    let g = src.g;
    let threshold = level.stats.threshold;
    let cap = 2 * threshold;
    let width = width_for(cap as u64);
    (0..g.n() as NodeId)
        .into_par_iter()
        .map_init(Vec::new, |covered, u| -> Result<BitString, EncodeError> {
            let dist = src.get(u);
            let mut w = BitWriter::new();
            w.write_gamma(threshold as u64)?;
            w.write_gamma(level.landmarks.len() as u64 + 1)?;
            let sick = level.sick[u as usize];
            w.write_bit(sick);
            write_capped_table(
                &mut w,
                level.landmarks.iter().map(|&l| dist[l as usize].weight),
                cap,
                width,
            )?;
            if !sick {
                mark_covered(g, &dist, &level.sampled, covered);
                let table: Vec<(NodeId, Dist)> = (0..g.n())
                    .filter(|&v| {
                        is_uncovered(dist[v], covered[v], threshold) && dist[v].hops <= cap
                    })
                    .map(|v| (v as NodeId, dist[v].weight))
                    .collect();
                write_id_table(&mut w, &table, width)?;
            }
            Ok(w.finish())
        })
        .collect()
}

fn assemble(
    g: &Graph,
    scheme: SchemeTag,
    bodies: Vec<BitString>,
) -> Result<Vec<Label>, EncodeError> {
    bodies
        .into_iter()
        .enumerate()
        .map(|(u, body)| {
            let mut w = BitWriter::new();
            Header { scheme, n: g.n() as u32, id: u as NodeId }.write(&mut w)?;
            w.append(&body);
            Ok(Label(w.finish()))
        })
        .collect()
}

fn require_nonempty(g: &Graph) -> Result<(), EncodeError> {
    if g.n() == 0 {
        return Err(EncodeError::InvalidParams("graph has no nodes".into()));
    }
    Ok(())
}

/// Warm-up scheme with a caller-chosen landmark set; no coverage check.
pub fn warmup_labels(g: &Graph, threshold: u32, landmarks: &[NodeId]) -> Result<LabelSet, EncodeError> {
    require_nonempty(g)?;
    let mut landmarks = landmarks.to_vec();
    landmarks.sort_unstable();
    landmarks.dedup();
    let width = width_for(g.n() as u64);
    let bodies = (0..g.n() as NodeId)
        .into_par_iter()
        .map(|u| -> Result<BitString, EncodeError> {
            let dist = g.distances_from(u);
            let mut w = BitWriter::new();
            w.write_gamma(threshold as u64)?;
            w.write_gamma(landmarks.len() as u64 + 1)?;
            write_capped_table(&mut w, landmarks.iter().map(|&l| dist[l as usize]), INF - 1, width)?;
            Ok(w.finish())
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LabelSet {
        scheme: SchemeInfo {
            tag: SchemeTag::Warmup,
            params: vec![threshold as u64, landmarks.len() as u64],
        },
        labels: assemble(g, SchemeTag::Warmup, bodies)?,
    })
}

/// True when every pair at distance at least `threshold` has a landmark on
/// some shortest path.
pub fn landmarks_cover_far_pairs(g: &Graph, landmarks: &[NodeId], threshold: u32) -> bool {
    let is_landmark = membership(g.n(), landmarks);
    (0..g.n() as NodeId).into_par_iter().all(|u| {
        let mut covered = Vec::new();
        let dist = g.sssp(u);
        mark_covered(g, &dist, &is_landmark, &mut covered);
        (0..g.n()).all(|v| !is_uncovered(dist[v], covered[v], threshold))
    })
}

/// Warm-up scheme: landmarks are resampled until every pair at distance at
/// least `D` is covered, up to the resample cap.
pub fn encode_warmup(g: &Graph, p: &PreservingParams) -> Result<LabelSet, EncodeError> {
    p.check()?;
    require_nonempty(g)?;
    if !g.is_unit_weight() {
        return Err(EncodeError::UnsupportedInput(
            "the warm-up scheme is defined for unit-weight graphs only".into(),
        ));
    }
    if p.threshold == 0 {
        return Err(EncodeError::InvalidParams("D must be at least 1".into()));
    }
    if p.oversampling <= 2.0 {
        return Err(EncodeError::InvalidParams(format!(
            "oversampling constant must exceed 2, got {}",
            p.oversampling
        )));
    }
    let size = warmup_sample_size(g.n(), p.threshold, p.oversampling);
    for attempt in 0..p.resample_cap {
        let r = sample_landmarks(g, size, mix_seed(p.seed, attempt as u64));
        if landmarks_cover_far_pairs(g, &r, p.threshold) {
            let mut set = warmup_labels(g, p.threshold, &r)?;
            set.scheme.params.push(attempt as u64 + 1);
            return Ok(set);
        }
    }
    Err(EncodeError::ResampleCapExhausted {
        attempts: p.resample_cap,
        last: format!("uncovered far pairs remain at D = {}", p.threshold),
    })
}

/// Exact fallback: every label stores its whole distance row.
pub fn encode_trivial(g: &Graph) -> Result<LabelSet, EncodeError> {
    require_nonempty(g)?;
    let width = width_for(g.n() as u64);
    let bodies = (0..g.n() as NodeId)
        .into_par_iter()
        .map(|u| -> Result<BitString, EncodeError> {
            let mut w = BitWriter::new();
            write_capped_table(&mut w, g.distances_from(u).into_iter(), INF - 1, width)?;
            Ok(w.finish())
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LabelSet {
        scheme: SchemeInfo { tag: SchemeTag::Trivial, params: vec![g.n() as u64] },
        labels: assemble(g, SchemeTag::Trivial, bodies)?,
    })
}

/// `[D, 2D]`-preserving labels for a caller-chosen sample `R`; sick nodes
/// are computed and added, no resampling.
pub fn medium_labels_with_sample(
    g: &Graph,
    threshold: u32,
    sample: &[NodeId],
) -> Result<(LabelSet, LevelStats), EncodeError> {
    require_nonempty(g)?;
    if threshold < 2 {
        return Err(EncodeError::InvalidParams("D must be at least 2".into()));
    }
    let mut r = sample.to_vec();
    r.sort_unstable();
    r.dedup();
    let src = Sources::new(g);
    let level = Level::from_sample(&src, threshold, &r, sample.len());
    medium_from_level(&src, level)
}

fn medium_from_level(src: &Sources, level: Level) -> Result<(LabelSet, LevelStats), EncodeError> {
    let g = src.g;
    let bodies = level_bodies(src, &level)?;
    let stats = level.stats;
    let set = LabelSet {
        scheme: SchemeInfo {
            tag: SchemeTag::Medium,
            params: vec![
                stats.threshold as u64,
                stats.landmark_count as u64,
                stats.attempts as u64,
            ],
        },
        labels: assemble(g, SchemeTag::Medium, bodies)?,
    };
    Ok((set, stats))
}

pub fn encode_medium_with_stats(
    g: &Graph,
    p: &PreservingParams,
) -> Result<(LabelSet, Option<LevelStats>), EncodeError> {
    p.check()?;
    require_nonempty(g)?;
    if p.threshold <= 1 {
        return Ok((encode_trivial(g)?, None));
    }
    let src = Sources::new(g);
    let level = sample_level(&src, p.threshold, p.seed, p.resample_cap)?;
    let (set, stats) = medium_from_level(&src, level)?;
    Ok((set, Some(stats)))
}

/// `[D, 2D]`-preserving scheme. `D <= 1` falls back to [`encode_trivial`].
pub fn encode_medium(g: &Graph, p: &PreservingParams) -> Result<LabelSet, EncodeError> {
    encode_medium_with_stats(g, p).map(|(set, _)| set)
}

/// Full-scheme bodies: γ(D), γ(level count), then one level body per
/// threshold from [`level_thresholds`]. Each level samples independently.
pub(crate) fn full_bodies(
    src: &Sources,
    threshold: u32,
    seed: u64,
    cap: u32,
) -> Result<(Vec<BitWriter>, Vec<LevelStats>), EncodeError> {
    let g = src.g;
    let thresholds = level_thresholds(g.n(), threshold);
    let mut out: Vec<BitWriter> = (0..g.n())
        .map(|_| {
            let mut w = BitWriter::new();
            w.write_gamma(threshold as u64).unwrap();
            w.write_gamma(thresholds.len() as u64).unwrap();
            w
        })
        .collect();
    let mut stats = Vec::with_capacity(thresholds.len());
    for (i, &t) in thresholds.iter().enumerate() {
        let level = sample_level(src, t, mix_seed(seed, 0x1_0000 + i as u64), cap)?;
        for (w, body) in out.iter_mut().zip(level_bodies(src, &level)?) {
            w.append(&body);
        }
        stats.push(level.stats);
    }
    Ok((out, stats))
}

pub fn encode_full_with_stats(
    g: &Graph,
    p: &PreservingParams,
) -> Result<(LabelSet, Vec<LevelStats>), EncodeError> {
    p.check()?;
    require_nonempty(g)?;
    if p.threshold <= 1 {
        return Ok((encode_trivial(g)?, Vec::new()));
    }
    let (bodies, stats) = full_bodies(&Sources::new(g), p.threshold, p.seed, p.resample_cap)?;
    let mut params = vec![p.threshold as u64, stats.len() as u64];
    params.extend(stats.iter().map(|s| s.landmark_count as u64));
    let set = LabelSet {
        scheme: SchemeInfo { tag: SchemeTag::Full, params },
        labels: assemble(g, SchemeTag::Full, bodies.into_iter().map(BitWriter::finish).collect())?,
    };
    Ok((set, stats))
}

/// D-preserving scheme: exact for every pair with hop distance at least `D`,
/// an upper bound otherwise. `D <= 1` falls back to [`encode_trivial`].
pub fn encode_full(g: &Graph, p: &PreservingParams) -> Result<LabelSet, EncodeError> {
    encode_full_with_stats(g, p).map(|(set, _)| set)
}

pub fn decode_warmup(a: &Label, b: &Label) -> Result<Dist, DecodeError> {
    decode_as(SchemeTag::Warmup, a, b)
}

pub fn decode_medium(a: &Label, b: &Label) -> Result<Dist, DecodeError> {
    decode_as(SchemeTag::Medium, a, b)
}

pub fn decode_full(a: &Label, b: &Label) -> Result<Dist, DecodeError> {
    decode_as(SchemeTag::Full, a, b)
}

pub fn decode_trivial(a: &Label, b: &Label) -> Result<Dist, DecodeError> {
    decode_as(SchemeTag::Trivial, a, b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct WarmupView {
    threshold: u32,
    count: u32,
    entries: Vec<(u32, Dist)>,
}

impl WarmupView {
    pub(crate) fn read(c: &mut BitCursor<'_>, n: u32) -> Result<WarmupView, DecodeError> {
        let threshold = c.read_gamma_u32()?;
        let count = c.read_gamma_u32()? - 1;
        let entries = read_capped_table(c, count, width_for(n as u64))?;
        Ok(WarmupView { threshold, count, entries })
    }

    pub(crate) fn distance(&self, other: &WarmupView) -> Result<Dist, DecodeError> {
        if self.threshold != other.threshold || self.count != other.count {
            return Err(DecodeError::Incompatible("different landmark samples".into()));
        }
        Ok(min_shared_sum(&self.entries, &other.entries))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct TrivialView {
    pub(crate) row: Vec<Dist>,
}

impl TrivialView {
    pub(crate) fn read(c: &mut BitCursor<'_>, n: u32) -> Result<TrivialView, DecodeError> {
        let width = width_for(n as u64);
        let mut row = Vec::with_capacity(n as usize);
        for _ in 0..n {
            row.push(if c.read_bit()? { c.read_fixed(width)? as Dist } else { INF });
        }
        Ok(TrivialView { row })
    }
}

/// Logical content of one `[D, 2D]` level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct LevelView {
    threshold: u32,
    landmark_count: u32,
    sick: bool,
    /// Present landmark entries as `(index in R ∪ S, weighted distance)`.
    landmarks: Vec<(u32, Dist)>,
    /// Healthy nodes only, sorted by id.
    uncovered: Vec<(NodeId, Dist)>,
}

impl LevelView {
    pub(crate) fn read(c: &mut BitCursor<'_>) -> Result<LevelView, DecodeError> {
        let pos = c.position();
        let threshold = c.read_gamma_u32()?;
        let landmark_count = c.read_gamma_u32()? - 1;
        if threshold > u32::MAX / 2 || landmark_count as usize > c.remaining() {
            return Err(CodecError::Malformed { position: pos }.into());
        }
        let width = width_for(2 * threshold as u64);
        let sick = c.read_bit()?;
        let landmarks = read_capped_table(c, landmark_count, width)?;
        let uncovered = if sick { Vec::new() } else { read_id_table(c, width)? };
        Ok(LevelView { threshold, landmark_count, sick, landmarks, uncovered })
    }

    /// Minimum over the stored uncovered distances (either direction) and
    /// the routes through shared landmarks.
    pub(crate) fn distance(
        &self,
        a: NodeId,
        other: &LevelView,
        b: NodeId,
    ) -> Result<Dist, DecodeError> {
        if self.threshold != other.threshold || self.landmark_count != other.landmark_count {
            return Err(DecodeError::Incompatible(format!(
                "level D = {} with {} landmarks vs D = {} with {}",
                self.threshold, self.landmark_count, other.threshold, other.landmark_count
            )));
        }
        let mut best = min_shared_sum(&self.landmarks, &other.landmarks);
        if let Some(d) = lookup(&self.uncovered, b) {
            best = best.min(d);
        }
        if let Some(d) = lookup(&other.uncovered, a) {
            best = best.min(d);
        }
        Ok(best)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct FullView {
    threshold: u32,
    levels: Vec<LevelView>,
}

impl FullView {
    pub(crate) fn read(c: &mut BitCursor<'_>) -> Result<FullView, DecodeError> {
        let pos = c.position();
        let threshold = c.read_gamma_u32()?;
        let count = c.read_gamma_u32()?;
        if count > 64 {
            return Err(CodecError::Malformed { position: pos }.into());
        }
        let levels = (0..count).map(|_| LevelView::read(c)).collect::<Result<_, _>>()?;
        Ok(FullView { threshold, levels })
    }

    pub(crate) fn distance(
        &self,
        a: NodeId,
        other: &FullView,
        b: NodeId,
    ) -> Result<Dist, DecodeError> {
        if self.threshold != other.threshold || self.levels.len() != other.levels.len() {
            return Err(DecodeError::Incompatible(format!(
                "{} levels from D = {} vs {} levels from D = {}",
                self.levels.len(),
                self.threshold,
                other.levels.len(),
                other.threshold
            )));
        }
        let mut best = INF;
        for (x, y) in self.levels.iter().zip(&other.levels) {
            best = best.min(x.distance(a, y, b)?);
        }
        Ok(best)
    }
}
