// Full D-preserving labels on a random graph, checked against BFS.
//
// ```bash
// cargo run --release --example preserving_labels
// ```

use std::error::Error;

use distlab::graph::gen_gnm;
use distlab::label::decode;
use distlab::preserving::{encode_full_with_stats, PreservingParams};

pub fn run() -> Result<(), Box<dyn Error>> {
    let (n, m, d) = (256, 512, 4);
    let g = gen_gnm(n, m, 7)?;
    let (labels, levels) = encode_full_with_stats(&g, &PreservingParams::new(d, 1))?;
    for s in &levels {
        println!(
            "level D={:<4} sampled {:<4} landmarks {:<4} sick {:<3} attempts {}",
            s.threshold, s.sample_size, s.landmark_count, s.sick, s.attempts
        );
    }
    let stats = labels.size_stats();
    println!("max label {} bits, mean {:.1}", stats.max_bits, stats.mean_bits);

    let (mut exact, mut far, mut slack) = (0, 0, 0u64);
    for u in 0..n as u32 {
        let truth = g.sssp(u);
        for v in u + 1..n as u32 {
            let got = decode(labels.label(u), labels.label(v))?;
            let want = truth[v as usize];
            assert!(got >= want.weight);
            if want.is_reachable() && want.hops >= d {
                far += 1;
                exact += (got == want.weight) as u64;
            } else if want.is_reachable() {
                slack += (got - want.weight) as u64;
            }
        }
    }
    println!("pairs at distance >= {d}: {exact}/{far} exact");
    println!("closer pairs: total overestimate {slack}");
    assert_eq!(exact, far);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
