//! Recovers the minimal polynomial of a Sinkhorn limit entry from its
//! decimal expansion with PSLQ, then re-checks the root.
//!
//! cargo run --example recognize

use std::error::Error;

use sinkpoly::exact::ExactMatrix;
use sinkpoly::recognition::{minimal_polynomial, verify_root, Recognition};
use sinkpoly::scaling::sinkhorn_limit;

pub fn run() -> Result<(), Box<dyn Error>> {
    let a = ExactMatrix::from_ints(&[[3, 9, 1], [3, 2, 9], [5, 3, 4]]);
    let x = sinkhorn_limit(&a, 512)?;
    match minimal_polynomial(x.top_left(), 6)? {
        Recognition::Found(r) => {
            println!("{}", r.poly);
            println!("degree {}, {} PSLQ iterations, stable {}", r.degree, r.iterations, r.stable);
            let hi = sinkhorn_limit(&a, 2048)?;
            let (ok, residual) = verify_root(&r.poly, hi.top_left());
            println!("root at 2048 bits: {ok} (residual {})", residual.to_string_radix(10, Some(3)));
        }
        Recognition::Failed(f) => println!("no relation: {f:?}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
