//! Kruithof (RAS) scaling of a telephone-traffic style matrix to given row
//! and column totals.
//!
//! cargo run --example kruithof

use std::error::Error;

use rug::Rational;
use sinkpoly::exact::ExactMatrix;
use sinkpoly::scaling::{certified_kruithof, decimal, KruithofTargets};

pub fn run() -> Result<(), Box<dyn Error>> {
    let a = ExactMatrix::from_ints(&[
        [2000, 1030, 650, 320],
        [1080, 1110, 555, 255],
        [720, 580, 500, 200],
        [350, 280, 210, 160],
    ]);
    let ints = |v: &[i64]| v.iter().map(|&x| Rational::from(x)).collect::<Vec<_>>();
    let t = KruithofTargets::new(ints(&[6000, 4000, 2500, 1000]), ints(&[6225, 4000, 2340, 935]))?;
    let r = certified_kruithof(&a, &t, 512)?;
    for i in 0..4 {
        let row: Vec<String> = (0..4).map(|j| decimal(r.limit.get(i, j), 12)).collect();
        println!("{}", row.join("  "));
    }
    println!("{} certified digits after {} sweeps", r.certified_digits, r.iterations);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
