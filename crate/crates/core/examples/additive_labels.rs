// r-additive labels: error histogram against BFS.
//
// ```bash
// cargo run --release --example additive_labels
// ```

use std::error::Error;

use distlab::additive::{encode_additive_with_info, AdditiveParams};
use distlab::graph::{gen_gnm, INF};
use distlab::label::decode;

pub fn run() -> Result<(), Box<dyn Error>> {
    let g = gen_gnm(256, 768, 4)?;
    for (r, t, d) in [(2, 8, 2), (4, 16, 4), (8, 16, 6)] {
        let (labels, info) =
            encode_additive_with_info(&g, &AdditiveParams::with_overrides(r, t, d, 2))?;
        let mut hist = vec![0usize; r as usize + 1];
        for u in 0..g.n() as u32 {
            let truth = g.distances_from(u);
            for v in u + 1..g.n() as u32 {
                let got = decode(labels.label(u), labels.label(v))?;
                let want = truth[v as usize];
                if want == INF {
                    assert_eq!(got, INF);
                    continue;
                }
                hist[(got - want) as usize] += 1;
            }
        }
        println!(
            "r={r} t={t} D={d}: high-degree {}, dominators {}, max ball {}, max label {} bits",
            info.high_degree,
            info.dominators,
            info.max_ball,
            labels.size_stats().max_bits
        );
        println!("  error histogram {hist:?}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
