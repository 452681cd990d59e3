//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs as a plain binary (`harness = false`).

use std::process::ExitCode;
use std::time::Instant;

use distlab::codec::{width_for, BitString, BitWriter};
use distlab::graph::{gen_gnm, gen_structured, Graph, Structured};
use distlab::harness::{encode_graph, lowerbound, verify, EncodeRequest, VerifyMode};
use distlab::label::{LabelSet, SchemeTag};
use distlab::preserving::{encode_medium_with_stats, PreservingParams};
use distlab::sparse::{split_threshold, split_transform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS_NS: [usize; 5] = [32, 64, 128, 256, 512];
const CORPUS_M_FACTORS: [usize; 3] = [1, 2, 4];
const CORPUS_SEEDS: u64 = 5;
const MIN_CORPUS: usize = 50;
const SOUNDNESS_D: u32 = 4;
const WINDOW_DS: [u32; 3] = [2, 4, 8];
const SPLIT_MAX_N: usize = 256;
const ADDITIVE_CASES: [(u32, u32, u32); 3] = [(2, 8, 2), (4, 16, 4), (8, 16, 6)];

const LEMMA_N: usize = 512;
const LEMMA_SAMPLES: u64 = 200;
const LEMMA_MAX_FRACTION: f64 = 0.6;
const LEMMA_MAX_MEAN_ATTEMPTS: f64 = 3.0;

const SCALING_NS: [usize; 4] = [128, 256, 512, 1024];
const SCALING_D: u32 = 8;
const SCALING_BAND: f64 = 3.0;
const SCALING_DS: [u32; 4] = [2, 4, 8, 16];
const SCALING_SEED: u64 = 11;

const LB_K: usize = 8;
const LB_D: usize = 8;
const LB_TRIALS: usize = 20;

const CODEC_CASES: usize = 10_000;

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

struct Case {
    id: String,
    graph: Graph,
}

fn corpus() -> Vec<Case> {
    let mut out = Vec::new();
    for s in [
        Structured::Path(40),
        Structured::Path(200),
        Structured::Cycle(33),
        Structured::Cycle(128),
        Structured::Grid(8, 8),
        Structured::Grid(12, 20),
        Structured::Star(40),
        Structured::Star(150),
    ] {
        out.push(Case { id: format!("{s:?}"), graph: gen_structured(s).unwrap() });
    }
    for &n in &CORPUS_NS {
        for &f in &CORPUS_M_FACTORS {
            for seed in 0..CORPUS_SEEDS {
                let graph = gen_gnm(n, f * n, 1000 + seed).unwrap();
                out.push(Case { id: format!("G({n},{})#{seed}", f * n), graph });
            }
        }
    }
    out
}

/// Encodes and verifies exhaustively; returns (pairs, violations, first failure).
fn check(case: &Case, req: &EncodeRequest, soundness_only: bool) -> (usize, usize, Option<String>) {
    let labels = match encode_graph(&case.graph, req) {
        Ok(l) => l,
        Err(e) => return (0, 1, Some(format!("{} {}: encode failed: {e}", case.id, req.scheme))),
    };
    let report = verify(&case.id, &case.graph, &labels, VerifyMode::Exhaustive, 0).unwrap();
    let bad: Vec<_> = report
        .violations
        .iter()
        .filter(|v| !soundness_only || v.contract != "not exact inside its window")
        .filter(|v| !soundness_only || v.contract != "additive error exceeded")
        .collect();
    let first = bad.first().map(|v| {
        format!("{} {}: ({}, {}) oracle {:?} decoded {:?} {}", case.id, req.scheme, v.u, v.v, v.oracle, v.decoded, v.contract)
    });
    (report.pairs_checked, bad.len(), first)
}

fn run_checks(corpus: &[Case], reqs: &[EncodeRequest], soundness_only: bool, filter: impl Fn(&Case) -> bool) -> Outcome {
    let (mut pairs, mut bad, mut first, mut graphs) = (0, 0, None, 0);
    for case in corpus.iter().filter(|c| filter(c)) {
        graphs += 1;
        for req in reqs {
            let (p, b, f) = check(case, req, soundness_only);
            pairs += p;
            bad += b;
            first = first.or(f);
        }
    }
    let mut detail = format!("{graphs} graphs, {} encodings, {pairs} pairs, {bad} violations", graphs * reqs.len());
    if let Some(f) = first {
        detail.push_str(&format!("; first: {f}"));
    }
    outcome(bad == 0 && graphs > 0, detail)
}

fn criterion_1(corpus: &[Case]) -> Outcome {
    let d = SOUNDNESS_D;
    let reqs = [
        EncodeRequest::new(SchemeTag::Warmup, 1).threshold(d),
        EncodeRequest::new(SchemeTag::Medium, 1).threshold(d),
        EncodeRequest::new(SchemeTag::Full, 1).threshold(d),
        EncodeRequest::new(SchemeTag::Trivial, 1),
        EncodeRequest::new(SchemeTag::BoundedDegree, 1),
        EncodeRequest::new(SchemeTag::Sparse, 1),
        EncodeRequest::new(SchemeTag::Additive, 1).additive(4, None, None),
    ];
    let mut o = run_checks(corpus, &reqs, true, |_| true);
    o.pass &= corpus.len() >= MIN_CORPUS;
    o
}

fn criterion_2(corpus: &[Case]) -> Outcome {
    let reqs: Vec<_> = WINDOW_DS
        .iter()
        .flat_map(|&d| {
            [
                EncodeRequest::new(SchemeTag::Medium, 2).threshold(d),
                EncodeRequest::new(SchemeTag::Full, 2).threshold(d),
            ]
        })
        .collect();
    run_checks(corpus, &reqs, false, |_| true)
}

fn criterion_3(corpus: &[Case]) -> Outcome {
    let exact = run_checks(
        corpus,
        &[EncodeRequest::new(SchemeTag::Sparse, 3)],
        false,
        |c| c.graph.m() <= 4 * c.graph.n(),
    );
    let (mut split_graphs, mut split_bad) = (0, 0);
    for case in corpus.iter().filter(|c| c.graph.n() <= SPLIT_MAX_N) {
        let g = &case.graph;
        let k = split_threshold(g.n(), g.m());
        let split = split_transform(g, k).unwrap();
        split_graphs += 1;
        if split.gprime.max_degree() > k as usize {
            split_bad += 1;
            continue;
        }
        let (a, b) = (g.all_pairs(), split.gprime.all_pairs());
        for u in 0..g.n() as u32 {
            for v in 0..g.n() as u32 {
                if a.get(u, v) != b.get(split.rep[u as usize], split.rep[v as usize]) {
                    split_bad += 1;
                }
            }
        }
    }
    outcome(
        exact.pass && split_bad == 0,
        format!("sparse exact: {}; split: {split_graphs} graphs, {split_bad} mismatches", exact.detail),
    )
}

fn criterion_4(corpus: &[Case]) -> Outcome {
    let reqs: Vec<_> = ADDITIVE_CASES
        .iter()
        .map(|&(r, t, d)| EncodeRequest::new(SchemeTag::Additive, 4).additive(r, Some(t), Some(d)))
        .collect();
    run_checks(corpus, &reqs, false, |_| true)
}

fn criterion_5() -> Outcome {
    let n = LEMMA_N;
    let d = (n as f64).sqrt().ceil() as u32;
    let reject_at = 2.0 * n as f64 / d as f64;
    let (mut rejected, mut attempts) = (0u64, 0u64);
    for seed in 0..LEMMA_SAMPLES {
        let g = gen_gnm(n, 2 * n, 5000 + seed).unwrap();
        let (_, stats) = encode_medium_with_stats(&g, &PreservingParams::new(d, seed)).unwrap();
        let stats = stats.expect("D > 1 runs the sampler");
        rejected += (stats.first_attempt_sick as f64 >= reject_at) as u64;
        attempts += stats.attempts as u64;
    }
    let fraction = rejected as f64 / LEMMA_SAMPLES as f64;
    let mean = attempts as f64 / LEMMA_SAMPLES as f64;
    outcome(
        fraction <= LEMMA_MAX_FRACTION && mean <= LEMMA_MAX_MEAN_ATTEMPTS,
        format!(
            "n={n} D={d}: {LEMMA_SAMPLES} samples, |S| >= 2n/D in {fraction:.3} (limit {LEMMA_MAX_FRACTION}), mean attempts {mean:.2} (limit {LEMMA_MAX_MEAN_ATTEMPTS})"
        ),
    )
}

fn max_bits(g: &Graph, req: &EncodeRequest) -> usize {
    encode_graph(g, req).unwrap().size_stats().max_bits
}

fn lg(x: f64) -> f64 {
    x.log2().max(1.0)
}

fn criterion_6() -> Outcome {
    let mut ratios = Vec::new();
    let mut sparse = Vec::new();
    for &n in &SCALING_NS {
        let g = gen_gnm(n, 2 * n, SCALING_SEED).unwrap();
        let bits = max_bits(&g, &EncodeRequest::new(SchemeTag::Full, 6).threshold(SCALING_D));
        let d = SCALING_D as f64;
        ratios.push(bits as f64 / (n as f64 / d * lg(d).powi(2)));
        sparse.push(max_bits(&g, &EncodeRequest::new(SchemeTag::Sparse, 6)) as f64 / n as f64);
    }
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    let band_ok = hi / lo < SCALING_BAND;

    let n = *SCALING_NS.last().unwrap();
    let g = gen_gnm(n, 2 * n, SCALING_SEED).unwrap();
    let by_d: Vec<usize> = SCALING_DS
        .iter()
        .map(|&d| max_bits(&g, &EncodeRequest::new(SchemeTag::Full, 6).threshold(d)))
        .collect();
    let d_ok = by_d.windows(2).all(|w| w[1] < w[0]);
    let sparse_ok = sparse.windows(2).all(|w| w[1] < w[0]);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.2}")).collect::<Vec<_>>().join(" ");
    outcome(
        band_ok && d_ok && sparse_ok,
        format!(
            "full D={SCALING_D} ratio [{}] spread {:.2}x ({}); n={n} max bits by D {SCALING_DS:?}: {by_d:?} ({}); sparse bits/n [{}] ({})",
            fmt(&ratios),
            hi / lo,
            if band_ok { "ok" } else { "FAIL" },
            if d_ok { "ok" } else { "FAIL" },
            fmt(&sparse),
            if sparse_ok { "ok" } else { "FAIL" },
        ),
    )
}

fn criterion_7() -> Outcome {
    let report = lowerbound(LB_K, LB_D, 7, LB_TRIALS).unwrap();
    let recovered: usize = report.trials.iter().map(|t| t.bits_recovered).sum();
    let total: usize = report.trials.iter().map(|t| t.bits_total).sum();
    let queried: usize = report.trials.iter().map(|t| t.queried_label_bits).sum();
    let mean_queried = queried as f64 / report.trials.len() as f64;
    outcome(
        report.all_recovered() && report.trials.len() == LB_TRIALS,
        format!(
            "k={LB_K} D={LB_D}: recovered {recovered}/{total} bits; mean queried label bits per trial {mean_queried:.0} vs information bound k^2/2 = {}",
            report.half_information_bits()
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = 0;
    for _ in 0..CODEC_CASES {
        let mut w = BitWriter::new();
        let gammas: Vec<u64> = (0..rng.gen_range(1..20))
            .map(|_| {
                let shift = rng.gen_range(0..63);
                rng.gen_range(1..u64::MAX >> shift)
            })
            .collect();
        let fixed: Vec<(u64, u32)> = (0..rng.gen_range(0..10))
            .map(|_| {
                let x: u64 = rng.gen_range(0..1 << 40);
                (x, width_for(x) + rng.gen_range(0..8))
            })
            .collect();
        let mut ids: Vec<u32> = (0..rng.gen_range(0..30)).map(|_| rng.gen_range(0..5000)).collect();
        ids.sort_unstable();
        ids.dedup();
        let bits: Vec<bool> = (0..rng.gen_range(0..17)).map(|_| rng.gen()).collect();
        for &g in &gammas {
            w.write_gamma(g).unwrap();
        }
        for &(x, width) in &fixed {
            w.write_fixed(x, width).unwrap();
        }
        w.write_id_set(&ids).unwrap();
        for &b in &bits {
            w.write_bit(b);
        }
        let s = w.finish();
        let framed = BitString::from_framed_bytes(&s.to_framed_bytes()).unwrap();
        let mut c = framed.cursor();
        let ok = gammas.iter().all(|&g| c.read_gamma().unwrap() == g)
            && fixed.iter().all(|&(x, width)| c.read_fixed(width).unwrap() == x)
            && c.read_id_set().unwrap() == ids
            && bits.iter().all(|&b| c.read_bit().unwrap() == b)
            && c.remaining() == 0
            && framed == s;
        failures += (!ok) as usize;
    }

    let g = gen_gnm(200, 400, 42).unwrap();
    let reqs = [
        EncodeRequest::new(SchemeTag::Warmup, 9).threshold(4),
        EncodeRequest::new(SchemeTag::Medium, 9).threshold(4),
        EncodeRequest::new(SchemeTag::Full, 9).threshold(4),
        EncodeRequest::new(SchemeTag::Trivial, 9),
        EncodeRequest::new(SchemeTag::BoundedDegree, 9),
        EncodeRequest::new(SchemeTag::Sparse, 9),
        EncodeRequest::new(SchemeTag::Additive, 9).additive(4, Some(16), Some(4)),
    ];
    let mut file_failures = 0;
    for req in &reqs {
        let a = encode_graph(&g, req).unwrap().to_bytes();
        let b = encode_graph(&g, req).unwrap().to_bytes();
        let back = LabelSet::from_bytes(&a).map(|l| l.to_bytes());
        file_failures += (a != b || back.as_ref() != Ok(&a)) as usize;
    }
    outcome(
        failures == 0 && file_failures == 0,
        format!(
            "{CODEC_CASES} randomized round-trips, {failures} failures; {} schemes byte-identical across runs and file round-trips, {file_failures} failures",
            reqs.len()
        ),
    )
}

fn main() -> ExitCode {
    // `cargo test` passes harness flags such as `--nocapture`; a name filter
    // that is not ours skips the suite.
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    if filter.is_some_and(|f| !"acceptance".contains(f.as_str())) {
        return ExitCode::SUCCESS;
    }
    let corpus = corpus();
    let criteria: [(&str, Criterion); 8] = [
        ("soundness of all seven schemes", Box::new(|| criterion_1(&corpus))),
        ("medium and full exactness windows", Box::new(|| criterion_2(&corpus))),
        ("sparse exactness and split transform", Box::new(|| criterion_3(&corpus))),
        ("additive error bound", Box::new(|| criterion_4(&corpus))),
        ("sampling statistics", Box::new(criterion_5)),
        ("label size scaling", Box::new(criterion_6)),
        ("lower-bound reconstruction", Box::new(criterion_7)),
        ("codec round-trips and determinism", Box::new(criterion_8)),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        all &= o.pass;
        println!(
            "criterion {} {}: {} ({:.1}s) {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            name,
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
