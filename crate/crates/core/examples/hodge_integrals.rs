//! Hodge-class family series and the psi-lambda integrals behind them.

use hilbgw::genus1::{hodge_family_series, hodge_general_series, psi_lambda_integral};

fn main() {
    for g in 1..=4 {
        println!("g = {g}: {}", hodge_family_series(g, 6));
    }
    println!("int psi_1 lambda_2 lambda_1 over M_2,1 = {}", psi_lambda_integral(2, &[1], 1).unwrap());
    let (c, s) = hodge_general_series(3, 2, &[1, 1], 4).unwrap();
    println!("g = 3, two point insertions: C = {c}, series {s}");
}
