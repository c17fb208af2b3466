//! Wick pairings, their loop structure, and planar moments.
//!
//! `cargo run --release --example planar_moments`

use entspec::diagrams::genus_expansion;
use entspec::{
    asymptotic_spec, catalan, enumerate_pairings, loop_structure, normalized_moment, planar_moment,
    ConstraintSpec, ModelKind, Result, GOLDEN,
};

fn main() -> Result<()> {
    for n in 1..=6 {
        let all = enumerate_pairings(n, false)?;
        let planar = all.iter().filter(|p| loop_structure(p).is_planar()).count();
        println!("n = {n}: {} pairings, {planar} planar (Catalan {})", all.len(), catalan(n));
    }

    for p in enumerate_pairings(3, false)? {
        let g = loop_structure(&p);
        println!(
            "{:?}: {} left loops, {} right loops, chi = {}",
            p.matching(),
            g.left_loops.len(),
            g.right_loops.len(),
            g.chi
        );
    }

    let free = ConstraintSpec::unconstrained();
    for n in 2..=5 {
        println!("unconstrained n = {n} genus expansion (chi, weight): {:?}", genus_expansion(&free, n)?);
    }

    let spec = asymptotic_spec(ModelKind::Blockaded { phi: GOLDEN })?;
    println!("\nblockaded golden");
    for n in 1..=8 {
        println!("  m_{n} = {:>14.6}   mu_{n} = {:>10.6}", planar_moment(&spec, n)?, normalized_moment(&spec, n)?);
    }
    Ok(())
}
