//! Fits sign alterations for link structures with three or more vertices
//! against every known coefficient table and prints the resulting store.
//!
//! cargo run --example derive_signs [-- out.txt]

use std::error::Error;

use sinkpoly::links::{conjectured_coefficient, derive_signs, Confidence, SignStore};
use sinkpoly::tables::{builtin_table, shipped_ambients, sign_evidence, table_2xn, table_3x3};

pub fn run() -> Result<SignStore, Box<dyn Error>> {
    let mut tables = vec![table_3x3()];
    for n in 3..=8 {
        tables.push(table_2xn(n)?);
    }
    for (m, n) in shipped_ambients() {
        tables.push(builtin_table(m, n)?);
    }
    let evidence: Vec<_> = tables.iter().flat_map(sign_evidence).collect();
    println!("{} coefficients from {} tables", evidence.len(), tables.len());

    let d = derive_signs(&evidence, SignStore::new())?;
    for (fp, items, survivors) in &d.fitted {
        println!("fitted {fp}: {items} items, {survivors} switching classes fit");
    }
    for fp in &d.contradictions {
        println!("no sign alteration fits {fp}");
    }
    println!("{} structures too large to fit, {} items unused", d.too_large.len(), d.unused);

    let mut wrong = 0;
    let mut unverified = 0;
    for e in &evidence {
        let c = conjectured_coefficient(&e.subset, e.m, e.n, &d.store)?;
        if c.confidence == Confidence::UnverifiedSigns {
            unverified += 1;
        } else if c.value != e.value {
            wrong += 1;
        }
    }
    println!("{wrong} mismatches, {unverified} coefficients without verified signs");
    Ok(d.store)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let store = run()?;
    match std::env::args().nth(1) {
        Some(path) => {
            let header = "# fingerprint, then k*k signs row-major in canonical vertex order\n";
            std::fs::write(&path, format!("{header}{store}"))?;
            println!("wrote {} entries to {path}", store.len());
        }
        None => print!("{store}"),
    }
    Ok(())
}
