//! Closed-form coefficient conjectures: link graphs, adjacency-style
//! determinants, and the resulting c_S(m, n) for small subsets, printed as
//! m^|S| c_S(m, n) tables over m and n.
//!
//! cargo run --example conjectured_coefficients

use std::error::Error;

use rug::Rational;
use sinkpoly::links::{conjectured_coefficient, link_graph, SignStore};
use sinkpoly::minors::{spec, MinorSpec, SubsetS};

fn table(name: &str, s: &SubsetS, store: &SignStore) -> Result<(), Box<dyn Error>> {
    let k = s.len() as u32;
    println!("{name}: {s}");
    for m in 2..=5usize {
        let mut row = Vec::new();
        for n in 2..=8usize {
            if !s.fits(m, n) {
                row.push(format!("{:>6}", "."));
                continue;
            }
            let c = conjectured_coefficient(s, m, n, store)?;
            let scaled = c.value * Rational::from(m.pow(k));
            row.push(format!("{scaled:>6}"));
        }
        println!("  m={m}: {}", row.join(" "));
    }
    Ok(())
}

pub fn run() -> Result<(), Box<dyn Error>> {
    let store = SignStore::builtin();
    let e = MinorSpec::empty();
    let component = SubsetS::new(vec![spec(&[2], &[2]), spec(&[3], &[3]), spec(&[2, 3], &[2, 3])]);
    let g = link_graph(&component);
    for (i, j, l) in g.edges() {
        println!("{} -- {}: {l:?}", g.vertices()[i], g.vertices()[j]);
    }
    println!("fingerprint {}", g.fingerprint()?.0);
    println!("columns n = 2..8; '.' where S does not fit");
    table("size 1", &SubsetS::new(vec![e.clone()]), &store)?;
    table("type-1 link", &SubsetS::new(vec![e.clone(), spec(&[2], &[2])]), &store)?;
    table("type-2 link", &SubsetS::new(vec![spec(&[2], &[2]), spec(&[2], &[3])]), &store)?;
    table("path component", &component, &store)?;
    let tri = SubsetS::new(vec![spec(&[2, 3], &[2, 3]), spec(&[2, 3], &[2, 4]), spec(&[2, 3], &[2, 5])]);
    table("type-2 triangle", &tri, &store)?;
    let c = conjectured_coefficient(&tri, 3, 5, &store)?;
    println!("triangle at (3, 5): {} ({})", c.value, c.confidence);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
