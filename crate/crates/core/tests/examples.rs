//! Smoke runs of the examples at small sizes.

#[path = "../examples/classes.rs"]
mod classes;
#[path = "../examples/conjectured_coefficients.rs"]
mod conjectured_coefficients;
#[path = "../examples/degenerate.rs"]
mod degenerate;
#[path = "../examples/derive_signs.rs"]
mod derive_signs;
#[path = "../examples/interpolate_3x3.rs"]
mod interpolate_3x3;
#[path = "../examples/kruithof.rs"]
mod kruithof;
#[path = "../examples/polynomial_3x3.rs"]
mod polynomial_3x3;
#[path = "../examples/recognize.rs"]
mod recognize;
#[path = "../examples/sinkhorn_limit.rs"]
mod sinkhorn_limit;
#[path = "../examples/two_by_n.rs"]
mod two_by_n;
#[path = "../examples/verify_tables.rs"]
mod verify_tables;

#[test]
fn classes_runs() {
    classes::run(3, 3, 3).unwrap();
}

#[test]
fn conjectured_coefficients_runs() {
    conjectured_coefficients::run().unwrap();
}

#[test]
fn degenerate_runs() {
    degenerate::run().unwrap();
}

#[test]
fn derive_signs_reproduces_shipped_store() {
    let derived = derive_signs::run().unwrap();
    assert_eq!(derived, sinkpoly::links::SignStore::builtin());
}

#[test]
fn interpolate_3x3_runs() {
    interpolate_3x3::run().unwrap();
}

#[test]
fn kruithof_runs() {
    kruithof::run().unwrap();
}

#[test]
fn polynomial_3x3_runs() {
    polynomial_3x3::run().unwrap();
}

#[test]
fn recognize_runs() {
    recognize::run().unwrap();
}

#[test]
fn sinkhorn_limit_runs() {
    sinkhorn_limit::run().unwrap();
}

#[test]
fn two_by_n_runs() {
    two_by_n::run(5, 2).unwrap();
}

#[test]
fn verify_tables_runs() {
    verify_tables::run(2).unwrap();
}
