// Label size sweep written as CSV, the same rows `distlab bench` emits.
//
// ```bash
// cargo run --release --example size_scaling
// ```

use std::error::Error;
use std::io;

use distlab::harness::{bench, write_bench_csv, BenchSpec};
use distlab::label::SchemeTag;

pub fn run() -> Result<(), Box<dyn Error>> {
    let by_n = BenchSpec {
        ns: vec![64, 128, 256],
        m_factor: 2.0,
        scheme: SchemeTag::Full,
        params: vec![8],
        t: None,
        additive_threshold: None,
        seeds: vec![1],
    };
    let by_d = BenchSpec { ns: vec![256], params: vec![2, 4, 8, 16], ..by_n.clone() };
    let sparse = BenchSpec { scheme: SchemeTag::Sparse, params: vec![], ..by_n.clone() };
    let mut rows = bench(&by_n)?;
    rows.extend(bench(&by_d)?);
    rows.extend(bench(&sparse)?);
    write_bench_csv(&rows, io::stdout())?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
