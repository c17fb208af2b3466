//! Half-chain sectors of the blockaded chain and their Fibonacci growth.
//!
//! `cargo run --release --example chain_enumeration`

use entspec::{blockaded_chain_space, Result, GOLDEN};

fn main() -> Result<()> {
    println!("{:>3} {:>8} {:>8} {:>6} {:>12} {:>12}", "L", "D_0", "D_1", "N", "D_0/D_1", "pairs");
    for sites in 1..=20 {
        let space = blockaded_chain_space(sites)?;
        let (d0, d1) = (space.dims[0], space.dims[1]);
        println!(
            "{sites:>3} {d0:>8} {d1:>8} {:>6} {:>12.9} {:>12}",
            space.n_ref,
            d0 as f64 / d1 as f64,
            space.allowed_pairs()
        );
    }
    println!("golden ratio {GOLDEN:.9}");

    // Sector 0 ends in a down spin, sector 1 in an up spin next to the cut.
    let small = blockaded_chain_space(3)?;
    for (bits, sector) in small.left_configs() {
        println!("{bits:03b} -> sector {sector}");
    }
    let relative = blockaded_chain_space(12)?.relative_spec()?;
    println!("L = 12 relative dims d = {:?}", relative.d());
    Ok(())
}
