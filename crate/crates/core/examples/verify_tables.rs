//! Checks every built-in and shipped coefficient table: identities,
//! provenance, pinning of free variables, and roots at random matrices.
//!
//! cargo run --release --example verify_tables

use std::error::Error;

use sinkpoly::pipeline::{matrix_rng, random_matrix, target_degree};
use sinkpoly::recognition::default_precision;
use sinkpoly::tables::{builtin_table, shipped_ambients, table_identities, verify_polynomial};

pub fn run(trials: u64) -> Result<(), Box<dyn Error>> {
    let mut ambients = vec![(2, 2), (3, 3), (2, 5), (5, 2)];
    for (m, n) in shipped_ambients() {
        ambients.push((m, n));
        ambients.push((n, m));
    }
    for (m, n) in ambients {
        let t = builtin_table(m, n)?;
        let id = table_identities(&t)?;
        let free: usize = t.pinning().iter().map(|p| p.nullity).sum();
        let p = default_precision(target_degree(m, n));
        let mut pass = 0;
        for i in 0..trials {
            let a = random_matrix(m, n, &mut matrix_rng(7, i))?;
            pass += verify_polynomial(&a, &t, p)?.0 as usize;
        }
        println!(
            "{m}x{n} {}: {} classes, binomial {}, duality {:?}, {free} free variables, {pass}/{trials} roots",
            t.provenance(),
            t.len(),
            id.binomial,
            id.duality
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run(5)
}
