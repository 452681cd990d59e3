// The lower-bound family: adjacency bits read back from labels alone.
//
// ```bash
// cargo run --example lower_bound
// ```

use std::error::Error;

use distlab::graph::{gen_lower_bound_family, random_adjacency};
use distlab::harness::lowerbound;
use distlab::label::decode;
use distlab::preserving::{encode_full, PreservingParams};

pub fn run() -> Result<(), Box<dyn Error>> {
    let (k, d) = (4, 5);
    let adj = random_adjacency(k, 3);
    let fam = gen_lower_bound_family(k, d, &adj)?;
    let labels = encode_full(&fam.graph, &PreservingParams::new(d as u32, 0))?;
    println!("k = {k}, D = {d}: {} nodes, {} edges", fam.graph.n(), fam.graph.m());
    for (i, &l) in fam.left.iter().enumerate() {
        let row: String = fam
            .path_ends
            .iter()
            .map(|&w| match decode(labels.label(l), labels.label(w)) {
                Ok(x) if x == d as u32 => '1',
                _ => '0',
            })
            .collect();
        let want: String = adj[i].iter().map(|&b| if b { '1' } else { '0' }).collect();
        println!("  L{i}: decoded {row} actual {want}");
        assert_eq!(row, want);
    }

    let report = lowerbound(8, 8, 1, 5)?;
    print!("{report}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
