//! Corpus generation, scheme dispatch, oracle verification, size benchmarks
//! and the lower-bound reconstruction experiment. The `distlab` binary is a
//! thin argument parser over this module.

use std::fmt::{self, Write as _};
use std::io::Write;
use std::time::Instant;

use log::warn;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::additive::{encode_additive, AdditiveParams};
use crate::graph::{
    gen_gnm, gen_lower_bound_family, gen_structured, random_adjacency, rng_for, Dist, Graph,
    GraphError, NodeId, Structured, INF,
};
use crate::label::{DecodeError, EncodeError, LabelSet, ParsedLabel, SchemeInfo, SchemeTag, SizeStats};
use crate::preserving::{
    encode_full, encode_medium, encode_trivial, encode_warmup, mix_seed, PreservingParams,
    DEFAULT_RESAMPLE_CAP,
};
use crate::sparse::{encode_bounded_degree, encode_sparse};

/// Above this node count exhaustive verification falls back to sampling.
pub const EXHAUSTIVE_LIMIT: usize = 2048;
pub const FORCED_SAMPLE_PAIRS: usize = 200_000;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    /// 2 for usage or input problems, 3 for encoding failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Encode(EncodeError::Graph(_)) => 2,
            HarnessError::Encode(EncodeError::UnsupportedInput(_)) => 2,
            HarnessError::Encode(EncodeError::InvalidParams(_)) => 2,
            HarnessError::Encode(EncodeError::DegreeBound { .. }) => 2,
            HarnessError::Encode(_) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Gnm { n: usize, m: usize },
    Structured(Structured),
    LowerBound { k: usize, d: usize },
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    /// Lower-bound family only: left ids, path-end ids and adjacency bits.
    pub sidecar: Option<String>,
}

pub fn generate(kind: GenKind, seed: u64) -> Result<Generated, HarnessError> {
    Ok(match kind {
        GenKind::Gnm { n, m } => Generated { graph: gen_gnm(n, m, seed)?, sidecar: None },
        GenKind::Structured(s) => Generated { graph: gen_structured(s)?, sidecar: None },
        GenKind::LowerBound { k, d } => {
            let adj = random_adjacency(k, seed);
            let fam = gen_lower_bound_family(k, d, &adj)?;
            let join = |ids: &[NodeId]| {
                ids.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
            };
            let mut side = String::new();
            writeln!(side, "k {k} d {d}").unwrap();
            writeln!(side, "left {}", join(&fam.left)).unwrap();
            writeln!(side, "ends {}", join(&fam.path_ends)).unwrap();
            for row in &adj {
                let bits: String = row.iter().map(|&b| if b { '1' } else { '0' }).collect();
                writeln!(side, "adj {bits}").unwrap();
            }
            Generated { graph: fam.graph, sidecar: Some(side) }
        }
    })
}

/// Scheme choice plus every parameter any scheme may read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodeRequest {
    pub scheme: SchemeTag,
    /// `D` for the preserving schemes, and the additive `D` override.
    pub threshold: Option<u32>,
    pub r: Option<u32>,
    pub t: Option<u32>,
    /// Degree bound for `bdeg`; defaults to the graph's maximum degree.
    pub delta: Option<u32>,
    pub seed: u64,
    pub resample_cap: u32,
}

impl EncodeRequest {
    pub fn new(scheme: SchemeTag, seed: u64) -> EncodeRequest {
        EncodeRequest {
            scheme,
            threshold: None,
            r: None,
            t: None,
            delta: None,
            seed,
            resample_cap: DEFAULT_RESAMPLE_CAP,
        }
    }

    pub fn threshold(mut self, d: u32) -> Self {
        self.threshold = Some(d);
        self
    }

    pub fn additive(mut self, r: u32, t: Option<u32>, d: Option<u32>) -> Self {
        self.r = Some(r);
        self.t = t;
        self.threshold = d;
        self
    }

    fn preserving(&self) -> Result<PreservingParams, EncodeError> {
        let d = self.threshold.ok_or_else(|| {
            EncodeError::InvalidParams(format!("scheme {} needs D", self.scheme))
        })?;
        let mut p = PreservingParams::new(d, self.seed);
        p.resample_cap = self.resample_cap;
        Ok(p)
    }
}

pub fn encode_graph(g: &Graph, req: &EncodeRequest) -> Result<LabelSet, EncodeError> {
    match req.scheme {
        SchemeTag::Warmup => encode_warmup(g, &req.preserving()?),
        SchemeTag::Medium => encode_medium(g, &req.preserving()?),
        SchemeTag::Full => encode_full(g, &req.preserving()?),
        SchemeTag::Trivial => encode_trivial(g),
        SchemeTag::BoundedDegree => {
            let delta = req.delta.unwrap_or(g.max_degree() as u32);
            encode_bounded_degree(g, delta, req.seed)
        }
        SchemeTag::Sparse => encode_sparse(g, req.seed),
        SchemeTag::Additive => {
            let r = req
                .r
                .ok_or_else(|| EncodeError::InvalidParams("additive scheme needs r".into()))?;
            encode_additive(
                g,
                &AdditiveParams { r, t: req.t, threshold: req.threshold, seed: req.seed },
            )
        }
    }
}

/// What a scheme promises about a decoded value beyond being an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contract {
    /// Exact when the hop distance is at least the threshold.
    ExactFrom(u32),
    /// Exact when the hop distance lies in `[lo, hi]`.
    Window(u32, u32),
    Exact,
    /// At most `r` above the true distance.
    Additive(u32),
}

impl fmt::Display for Contract {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Contract::ExactFrom(d) => write!(f, "exact for h >= {d}"),
            Contract::Window(lo, hi) => write!(f, "exact for h in [{lo}, {hi}]"),
            Contract::Exact => f.write_str("exact"),
            Contract::Additive(r) => write!(f, "error <= {r}"),
        }
    }
}

pub fn contract_for(info: &SchemeInfo) -> Contract {
    let p = |i: usize| info.params.get(i).copied().unwrap_or(0) as u32;
    match info.tag {
        SchemeTag::Warmup | SchemeTag::Full => Contract::ExactFrom(p(0)),
        SchemeTag::Medium => Contract::Window(p(0), 2 * p(0)),
        SchemeTag::Trivial | SchemeTag::BoundedDegree | SchemeTag::Sparse => Contract::Exact,
        SchemeTag::Additive => Contract::Additive(p(0)),
    }
}

/// Checks one decoded value; returns the violated clause, if any.
pub fn check_pair(contract: Contract, oracle: Dist, hops: Dist, decoded: Dist) -> Option<&'static str> {
    if decoded < oracle {
        return Some("below true distance");
    }
    if oracle == INF {
        return None;
    }
    let exact_needed = match contract {
        Contract::ExactFrom(d) => hops >= d,
        Contract::Window(lo, hi) => (lo..=hi).contains(&hops),
        Contract::Exact => true,
        Contract::Additive(r) => {
            return (decoded as u64 > oracle as u64 + r as u64).then_some("additive error exceeded");
        }
    };
    (exact_needed && decoded != oracle).then_some("not exact inside its window")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled(usize),
}

impl std::str::FromStr for VerifyMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "exhaustive" {
            return Ok(VerifyMode::Exhaustive);
        }
        s.strip_prefix("sampled:")
            .and_then(|c| c.parse().ok())
            .map(VerifyMode::Sampled)
            .ok_or_else(|| format!("mode must be `exhaustive` or `sampled:<count>`, got {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub u: NodeId,
    pub v: NodeId,
    pub oracle: Option<Dist>,
    /// `None` when decoding failed.
    pub decoded: Option<Dist>,
    pub contract: String,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub graph_id: String,
    pub scheme: SchemeInfo,
    pub contract: Contract,
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
    pub size: SizeStats,
    pub encode_seconds: Option<f64>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.scheme.params.iter().map(ToString::to_string).collect();
        writeln!(f, "graph      {}", self.graph_id)?;
        writeln!(f, "scheme     {} [{}] ({})", self.scheme.tag, params.join(", "), self.contract)?;
        writeln!(f, "pairs      {}", self.pairs_checked)?;
        writeln!(
            f,
            "label bits max {} mean {:.1} p50 {} p99 {}",
            self.size.max_bits, self.size.mean_bits, self.size.p50_bits, self.size.p99_bits
        )?;
        if let Some(s) = self.encode_seconds {
            writeln!(f, "encode     {s:.3}s")?;
        }
        writeln!(f, "violations {}", self.violations.len())?;
        for v in self.violations.iter().take(20) {
            let show = |x: Option<Dist>| match x {
                None => "error".to_string(),
                Some(INF) => "inf".to_string(),
                Some(d) => d.to_string(),
            };
            writeln!(
                f,
                "  ({}, {}) oracle {} decoded {}: {}",
                v.u,
                v.v,
                show(v.oracle),
                show(v.decoded),
                v.contract
            )?;
        }
        writeln!(f, "result     {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Checks `labels` against BFS distances on `g`. Unreadable labels and decode
/// errors are reported as violations, not returned as errors.
pub fn verify(
    graph_id: &str,
    g: &Graph,
    labels: &LabelSet,
    mode: VerifyMode,
    seed: u64,
) -> Result<VerifyReport, HarnessError> {
    if labels.len() != g.n() {
        return Err(HarnessError::Usage(format!(
            "label file has {} labels but the graph has {} nodes",
            labels.len(),
            g.n()
        )));
    }
    let contract = contract_for(&labels.scheme);
    let mode = match mode {
        VerifyMode::Exhaustive if g.n() > EXHAUSTIVE_LIMIT => {
            warn!("n = {} exceeds {EXHAUSTIVE_LIMIT}; sampling pairs instead", g.n());
            VerifyMode::Sampled(FORCED_SAMPLE_PAIRS)
        }
        m => m,
    };
    let parsed: Vec<Result<ParsedLabel, DecodeError>> =
        labels.labels.par_iter().map(ParsedLabel::parse).collect();
    let mut by_source: Vec<Vec<NodeId>> = vec![Vec::new(); g.n()];
    let pairs_checked = match mode {
        VerifyMode::Exhaustive => {
            for u in 0..g.n() as NodeId {
                by_source[u as usize] = (u + 1..g.n() as NodeId).collect();
            }
            g.n() * g.n().saturating_sub(1) / 2
        }
        VerifyMode::Sampled(count) => {
            if g.n() < 2 && count > 0 {
                return Err(HarnessError::Usage("sampling pairs needs at least 2 nodes".into()));
            }
            let mut rng = rng_for(seed);
            for _ in 0..count {
                let u = rng.gen_range(0..g.n() as NodeId);
                let mut v = rng.gen_range(0..g.n() as NodeId - 1);
                if v >= u {
                    v += 1;
                }
                by_source[u as usize].push(v);
            }
            count
        }
    };
    let violations: Vec<Violation> = by_source
        .par_iter()
        .enumerate()
        .filter(|(_, targets)| !targets.is_empty())
        .flat_map_iter(|(u, targets)| {
            let u = u as NodeId;
            let dist = g.sssp(u);
            let mut out = Vec::new();
            for &v in targets {
                let truth = dist[v as usize];
                let decoded = match (&parsed[u as usize], &parsed[v as usize]) {
                    (Ok(a), Ok(b)) => a.distance(b).ok(),
                    _ => None,
                };
                let clause = match decoded {
                    None => Some("decode error"),
                    Some(x) => check_pair(contract, truth.weight, truth.hops, x),
                };
                if let Some(clause) = clause {
                    out.push(Violation {
                        u,
                        v,
                        oracle: Some(truth.weight),
                        decoded,
                        contract: clause.to_string(),
                    });
                }
            }
            out
        })
        .collect();
    Ok(VerifyReport {
        graph_id: graph_id.to_string(),
        scheme: labels.scheme.clone(),
        contract,
        pairs_checked,
        violations,
        size: labels.size_stats(),
        encode_seconds: None,
    })
}

/// One benchmark measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub scheme: String,
    pub params: String,
    pub max_label_bits: usize,
    pub mean_label_bits: f64,
    pub bound: f64,
    pub ratio: f64,
    pub encode_seconds: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSpec {
    pub ns: Vec<usize>,
    /// `m = round(m_factor · n)`.
    pub m_factor: f64,
    pub scheme: SchemeTag,
    /// `D` values for the preserving schemes, `r` values for `additive`.
    pub params: Vec<u32>,
    pub t: Option<u32>,
    pub additive_threshold: Option<u32>,
    pub seeds: Vec<u64>,
}

/// `lg x = max(log₂ x, 1)`.
pub fn lg(x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else {
        x.log2().max(1.0)
    }
}

/// Reference size for the bench ratio column: `(n/D)·lg²D` for the preserving
/// schemes, `n/r` for additive, `n` for the exact schemes.
pub fn size_bound(scheme: SchemeTag, n: usize, param: u32) -> f64 {
    let n = n as f64;
    match scheme {
        SchemeTag::Warmup | SchemeTag::Medium | SchemeTag::Full => {
            let d = param.max(1) as f64;
            n / d * lg(d).powi(2)
        }
        SchemeTag::Additive => n / param.max(1) as f64,
        SchemeTag::Trivial | SchemeTag::BoundedDegree | SchemeTag::Sparse => n,
    }
}

pub fn bench(spec: &BenchSpec) -> Result<Vec<BenchRow>, HarnessError> {
    if spec.ns.is_empty() || spec.seeds.is_empty() {
        return Err(HarnessError::Usage("bench sweep is empty".into()));
    }
    let needs_param = !matches!(
        spec.scheme,
        SchemeTag::Trivial | SchemeTag::Sparse | SchemeTag::BoundedDegree
    );
    if needs_param && spec.params.is_empty() {
        return Err(HarnessError::Usage(format!("scheme {} needs --d or --r values", spec.scheme)));
    }
    let params: Vec<u32> = if needs_param { spec.params.clone() } else { vec![0] };
    let mut rows = Vec::new();
    for &n in &spec.ns {
        for &param in &params {
            for &seed in &spec.seeds {
                let m = (spec.m_factor * n as f64).round() as usize;
                let g = gen_gnm(n, m, seed)?;
                let mut req = EncodeRequest::new(spec.scheme, mix_seed(seed, 7));
                if spec.scheme == SchemeTag::Additive {
                    req = req.additive(param, spec.t, spec.additive_threshold);
                } else if needs_param {
                    req = req.threshold(param);
                }
                let start = Instant::now();
                let labels = encode_graph(&g, &req)?;
                let secs = start.elapsed().as_secs_f64();
                if labels.is_empty() {
                    return Err(HarnessError::Usage(format!("empty label set for n = {n}")));
                }
                let stats = labels.size_stats();
                let bound = size_bound(spec.scheme, n, param);
                rows.push(BenchRow {
                    n,
                    m,
                    scheme: spec.scheme.to_string(),
                    params: labels
                        .scheme
                        .params
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(";"),
                    max_label_bits: stats.max_bits,
                    mean_label_bits: stats.mean_bits,
                    bound,
                    ratio: stats.max_bits as f64 / bound,
                    encode_seconds: secs,
                    seed,
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub trial: usize,
    pub bits_recovered: usize,
    pub bits_total: usize,
    /// Sum of the `2k` labels that were queried.
    pub queried_label_bits: usize,
    pub max_label_bits: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundReport {
    pub k: usize,
    pub d: usize,
    pub trials: Vec<TrialReport>,
}

impl LowerBoundReport {
    pub fn all_recovered(&self) -> bool {
        self.trials.iter().all(|t| t.bits_recovered == t.bits_total)
    }

    /// Adjacency bits the `2k` queried labels jointly determine.
    pub fn information_bits(&self) -> usize {
        self.k * self.k
    }

    /// Half the information bits: the least total any one side (left labels or
    /// path-end labels) must carry when the other side is free.
    pub fn half_information_bits(&self) -> usize {
        self.k * self.k / 2
    }
}

impl fmt::Display for LowerBoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lower-bound family k = {} D = {} ({} nodes)", self.k, self.d, self.k * (self.d + 1))?;
        for t in &self.trials {
            writeln!(
                f,
                "  trial {:>3}: recovered {}/{} bits, queried labels {} bits, max label {} bits",
                t.trial, t.bits_recovered, t.bits_total, t.queried_label_bits, t.max_label_bits
            )?;
        }
        writeln!(
            f,
            "information content {} bits (k^2), half {} bits (k^2/2), per-label floor {} bits (k/2)",
            self.information_bits(),
            self.half_information_bits(),
            self.k / 2
        )?;
        writeln!(f, "result {}", if self.all_recovered() { "PASS" } else { "FAIL" })
    }
}

/// Builds the family for `adj`, encodes it with the full scheme at threshold
/// `d`, and reads every adjacency bit back as `decode(L_i, w_j) == d`.
pub fn lowerbound_trial(
    trial: usize,
    d: usize,
    adj: &[Vec<bool>],
    seed: u64,
) -> Result<TrialReport, HarnessError> {
    let k = adj.len();
    let fam = gen_lower_bound_family(k, d, adj)?;
    let labels = encode_full(&fam.graph, &PreservingParams::new(d as u32, seed))?;
    let left: Vec<ParsedLabel> =
        fam.left.iter().map(|&u| ParsedLabel::parse(labels.label(u))).collect::<Result<_, _>>()?;
    let ends: Vec<ParsedLabel> = fam
        .path_ends
        .iter()
        .map(|&w| ParsedLabel::parse(labels.label(w)))
        .collect::<Result<_, _>>()?;
    let mut recovered = 0;
    for (i, a) in left.iter().enumerate() {
        for (j, b) in ends.iter().enumerate() {
            let bit = a.distance(b)? == d as Dist;
            recovered += (bit == adj[i][j]) as usize;
        }
    }
    let queried: usize = fam
        .left
        .iter()
        .chain(&fam.path_ends)
        .map(|&u| labels.label(u).len())
        .sum();
    Ok(TrialReport {
        trial,
        bits_recovered: recovered,
        bits_total: k * k,
        queried_label_bits: queried,
        max_label_bits: labels.size_stats().max_bits,
    })
}

pub fn lowerbound(k: usize, d: usize, seed: u64, trials: usize) -> Result<LowerBoundReport, HarnessError> {
    let trials = (0..trials)
        .map(|t| {
            let trial_seed = mix_seed(seed, t as u64);
            let adj = random_adjacency(k, trial_seed);
            lowerbound_trial(t, d, &adj, mix_seed(trial_seed, 1))
        })
        .collect::<Result<_, _>>()?;
    Ok(LowerBoundReport { k, d, trials })
}
