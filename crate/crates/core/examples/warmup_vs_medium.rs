// Warm-up labels against the [D, 2D] scheme on a path, with hand-picked
// landmarks so the output is easy to follow.
//
// ```bash
// cargo run --example warmup_vs_medium
// ```

use std::error::Error;

use distlab::graph::{gen_gnm, gen_structured, Structured};
use distlab::label::decode;
use distlab::preserving::{
    classify_nodes, encode_medium_with_stats, encode_warmup, medium_labels_with_sample,
    warmup_labels, PreservingParams,
};

pub fn run() -> Result<(), Box<dyn Error>> {
    let path = gen_structured(Structured::Path(6))?;
    let warm = warmup_labels(&path, 3, &[2])?;
    // 0 and 5 have landmark 2 between them; 3 and 5 do not
    println!("warm-up R = {{2}}: d(0,5) -> {}", decode(warm.label(0), warm.label(5))?);
    println!("warm-up R = {{2}}: d(3,5) -> {}", decode(warm.label(3), warm.label(5))?);

    let c = classify_nodes(&path, &[2], 2);
    for (u, uc) in c.uncovered.iter().enumerate() {
        println!("uc({u}) = {uc:?}");
    }
    println!("sick at D = 2: {:?}", c.sick);
    let (medium, stats) = medium_labels_with_sample(&path, 2, &[2])?;
    println!(
        "medium R = {{2}}: landmarks {} (sick {}), d(3,5) -> {}",
        stats.landmark_count,
        stats.sick,
        decode(medium.label(3), medium.label(5))?
    );

    let g = gen_gnm(512, 1024, 3)?;
    let p = PreservingParams::new(8, 5);
    let warm = encode_warmup(&g, &p)?;
    let (medium, stats) = encode_medium_with_stats(&g, &p)?;
    println!(
        "G(512,1024) D=8: warm-up max {} bits ({} landmarks), medium max {} bits ({} landmarks)",
        warm.size_stats().max_bits,
        warm.scheme.params[1],
        medium.size_stats().max_bits,
        stats.map_or(0, |s| s.landmark_count)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
