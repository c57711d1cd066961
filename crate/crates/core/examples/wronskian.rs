//! Certificates that `det W` is nonzero: one exact nonzero coefficient each.

use hilbgw::spectrum::certify_wronskian;

fn main() {
    let top: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(6);
    for n in 2..=top {
        let c = certify_wronskian(n, None).unwrap();
        println!(
            "n = {n} at ({}, {}): {:?}, [q^{}] det W = {}",
            c.t1,
            c.t2,
            c.verdict,
            c.first_nonzero_index.unwrap_or(0),
            c.coefficient.map(|x| x.to_string()).unwrap_or_default()
        );
    }
}
