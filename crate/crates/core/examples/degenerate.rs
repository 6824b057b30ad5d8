//! A 3×3 matrix whose third row is a multiple of the second: every
//! general coefficient vanishes, and the proportional-rows cubic takes over.
//!
//! cargo run --example degenerate

use std::error::Error;

use rug::Rational;
use sinkpoly::exact::ExactMatrix;
use sinkpoly::recognition::verify_root;
use sinkpoly::scaling::sinkhorn_limit;
use sinkpoly::tables::{degenerate_3x3, degenerate_3x3_class_sums, polynomial_for, table_3x3};

pub fn run() -> Result<(), Box<dyn Error>> {
    let a = ExactMatrix::from_ints(&[[4, 5, 6], [1, 2, 3], [2, 4, 6]]);
    let general = polynomial_for(&a, &table_3x3())?;
    println!("general polynomial is zero: {}", general.is_zero());
    let cubic = degenerate_3x3(&a)?;
    let exact = cubic.integer().ok_or("non-integral coefficients")?;
    let prim = cubic.primitive.clone().ok_or("cubic vanishes")?;
    println!("cubic {exact} = {} * ({prim})", exact.content());
    let from_sums = degenerate_3x3_class_sums(&a)?.primitive.ok_or("cubic vanishes")?;
    println!("class-sum form agrees: {}", from_sums == prim);
    let (ok, _) = verify_root(&prim, sinkhorn_limit(&a, 256)?.top_left());
    println!("annihilates the limit: {ok}");

    for t in ["7", "1/3", "22/5"] {
        let mut b = a.clone();
        b.scale_row(2, &t.parse::<Rational>()?);
        let q = degenerate_3x3(&b)?.primitive.ok_or("cubic vanishes")?;
        println!("row 3 scaled by {t}: {q}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
