//! The degree-0 identity and the NL projection identity.

use hilbgw::genus1::{degree0_identity_check, nl_coefficient, nl_projection_check};

fn main() {
    println!("{:?}", degree0_identity_check(8));
    for g in 1..=4 {
        let c: Vec<String> = (1..=6).map(|n| nl_coefficient(g, n).to_string()).collect();
        println!("g = {g}: {}  identity: {:?}", c.join(", "), nl_projection_check(g, 12));
    }
}
