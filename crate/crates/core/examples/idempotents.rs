//! Eigenvectors of `M_D` and the inverse squared lengths of the idempotents.

use hilbgw::kernel::rat;
use hilbgw::spectrum::{delta_i, eigenvectors, frobenius_check, Eigensystem};

fn main() {
    let sys = Eigensystem::new(3, &rat(1, 1), &rat(5, 1), 6).unwrap();
    let vs = eigenvectors(&sys).unwrap();
    println!("Frobenius compatibility: {:?}", frobenius_check(&sys, &vs));
    for (v, d) in vs.iter().zip(delta_i(&sys, &vs).unwrap()) {
        println!("e = {}\n  Delta = {d}", v.eigenvalue);
    }
}
