//! Exact degree-6 polynomial for the top-left limit entry of a 3×3 matrix
//! from the 24-class coefficient table, for every entry of the matrix.
//!
//! cargo run --example polynomial_3x3

use std::error::Error;

use sinkpoly::exact::ExactMatrix;
use sinkpoly::recognition::verify_root;
use sinkpoly::scaling::sinkhorn_limit;
use sinkpoly::tables::{entry_polynomial, polynomial_for, table_3x3};

pub fn run() -> Result<(), Box<dyn Error>> {
    let a = ExactMatrix::from_ints(&[[3, 9, 1], [3, 2, 9], [5, 3, 4]]);
    let table = table_3x3();
    let p = polynomial_for(&a, &table)?;
    let exact = p.integer().ok_or("non-integral coefficients")?;
    let prim = p.primitive.ok_or("polynomial vanishes")?;
    println!("exact:     {exact}");
    println!("primitive: {prim} (content {})", exact.content());
    let limit = sinkhorn_limit(&a, 256)?;
    for i in 0..3 {
        for j in 0..3 {
            let q = entry_polynomial(&a, i, j)?.primitive.ok_or("polynomial vanishes")?;
            let (ok, _) = verify_root(&q, limit.limit.get(i, j));
            println!("entry ({}, {}): {q}  root {ok}", i + 1, j + 1);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
