// Elias γ codes, fixed-width fields and gap-coded id sets on one bit stream.
//
// ```bash
// cargo run --example gamma_codec
// ```

use std::error::Error;

use distlab::codec::{gamma_len, BitString, BitWriter};

pub fn run() -> Result<(), Box<dyn Error>> {
    for x in [1u64, 2, 3, 4, 5, 9, 100] {
        let mut w = BitWriter::new();
        w.write_gamma(x)?;
        let bits = w.finish();
        println!("gamma({x:>3}) = {bits:<13} ({} bits)", gamma_len(x));
        assert_eq!(bits.len(), gamma_len(x));
    }

    let ids = [3u32, 4, 9, 40, 41];
    let mut w = BitWriter::new();
    w.write_fixed(5, 4)?;
    w.write_id_set(&ids)?;
    w.write_bit(true);
    let bits = w.finish();
    println!("fixed(5, 4) + ids {ids:?} + 1 = {bits}");

    // framed bytes carry the bit length, so trailing padding is not data
    let bytes = bits.to_framed_bytes();
    let back = BitString::from_framed_bytes(&bytes)?;
    let mut c = back.cursor();
    assert_eq!(c.read_fixed(4)?, 5);
    assert_eq!(c.read_id_set()?, ids);
    assert!(c.read_bit()?);
    assert_eq!(c.remaining(), 0);
    println!("{} bits -> {} framed bytes -> round trip ok", bits.len(), bytes.len());

    // zero has no γ code
    assert!(BitWriter::new().write_gamma(0).is_err());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
