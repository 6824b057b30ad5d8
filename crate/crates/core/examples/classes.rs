//! Counts equivalence classes of size-k subsets of D(m, n) under row and
//! column permutations fixing the first index (and transposition when
//! square), and lists the classes of one size.
//!
//! cargo run --example classes [-- m n k]

use std::error::Error;

use sinkpoly::symmetry::SymmetryGroup;

pub fn run(m: usize, n: usize, k: usize) -> Result<(), Box<dyn Error>> {
    for (mm, nn) in [(2, 2), (3, 3), (3, 4), (3, 5), (4, 4)] {
        let g = SymmetryGroup::new(mm, nn);
        let d = g.basis().len();
        let upto = d.min(5);
        let counts: Vec<String> =
            (0..=upto).map(|k| g.enumerate_classes(k).map(|c| c.len().to_string())).collect::<Result<_, _>>()?;
        println!("D({mm}, {nn}): {d} specs, group order {}, classes for k = 0..{upto}: {}", g.order(), counts.join(", "));
    }
    let classes = SymmetryGroup::new(m, n).enumerate_classes(k)?;
    println!("{} classes of size {k} in D({m}, {n}):", classes.len());
    for c in &classes {
        println!("  {c}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    match args[..] {
        [m, n, k] => run(m, n, k),
        _ => run(3, 3, 3),
    }
}
