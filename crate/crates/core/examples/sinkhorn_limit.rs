//! Sinkhorn limit of a 3×3 matrix with certified digits, and the 2×2
//! closed form √(ad)/(√(ad)+√(bc)).
//!
//! cargo run --example sinkhorn_limit

use std::error::Error;

use rug::Float;
use sinkpoly::exact::ExactMatrix;
use sinkpoly::scaling::{agreeing_digits, certified, decimal, sinkhorn_limit};

pub fn run() -> Result<(), Box<dyn Error>> {
    let a = ExactMatrix::from_ints(&[[3, 9, 1], [3, 2, 9], [5, 3, 4]]);
    let r = certified(&a, 256)?;
    println!("limit of\n{a}");
    for i in 0..3 {
        let row: Vec<String> = (0..3).map(|j| decimal(r.limit.get(i, j), 20)).collect();
        println!("  {}", row.join("  "));
    }
    println!("{} sweeps, {} certified digits", r.iterations, r.certified_digits);
    println!("top left {}", decimal(r.top_left(), r.certified_digits as usize));

    let b = ExactMatrix::from_ints(&[[2, 7], [5, 3]]);
    let p = 256;
    let s = sinkhorn_limit(&b, p)?;
    let ad = Float::with_val(p, 2 * 3).sqrt();
    let bc = Float::with_val(p, 7 * 5).sqrt();
    let closed = Float::with_val(p, &ad / Float::with_val(p, &ad + &bc));
    println!("2x2: iterate {} closed form {} ({} digits agree)", decimal(s.top_left(), 30), decimal(&closed, 30), agreeing_digits(s.top_left(), &closed));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
