//! Quantum multiplication by Nakajima classes, recovered from powers of `D`.

use hilbgw::combinatorics::Partition;
use hilbgw::hilb::QuantumRing;
use hilbgw::kernel::{rat, Specialized, Symbolic};

fn main() {
    let ring = QuantumRing::new(&Symbolic, 3).unwrap();
    println!("n = 3 commutative: {:?}", ring.commutativity_check());
    for mu in ["(3)", "(2,1)", "(1,1,1)"] {
        let mu: Partition = mu.parse().unwrap();
        println!("Tr_3^{mu} = {}", ring.trmu(&mu).unwrap());
    }

    let ring = QuantumRing::new(&Specialized::new(rat(2, 1), rat(-3, 1)), 4).unwrap();
    let m = ring.mult_operator(&"(3,1)".parse().unwrap()).unwrap();
    println!("M_(3,1) on Hilb^4 at (2, -3): {}x{}, trace {}", m.rows(), m.cols(), m.trace());
}
