//! The closed-form coefficient table for 2×n matrices: identities, and the
//! root check against the numerically computed limit for random matrices.
//!
//! cargo run --release --example two_by_n

use std::error::Error;

use sinkpoly::pipeline::{matrix_rng, random_matrix};
use sinkpoly::tables::{table_2xn, table_identities, verify_polynomial};

pub fn run(max_n: usize, trials: u64) -> Result<(), Box<dyn Error>> {
    for n in 3..=max_n {
        let t = table_2xn(n)?;
        let report = table_identities(&t)?;
        let mut pass = 0;
        for i in 0..trials {
            let a = random_matrix(2, n, &mut matrix_rng(n as u64, i))?;
            pass += verify_polynomial(&a, &t, 1024)?.0 as usize;
        }
        println!("2x{n}: {} classes, identities {}, {pass}/{trials} roots", t.len(), report.passed());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run(12, 10)
}
