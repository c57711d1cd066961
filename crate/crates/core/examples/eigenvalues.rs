//! Eigenvalues of `M_D` as q-series, lifted from box-content sums at `q = 0`.

use hilbgw::spectrum::{choose_specialization, vieta_check, Eigensystem};

fn main() {
    for n in 2..=6 {
        let (t1, t2) = choose_specialization(n, 64).unwrap();
        let sys = Eigensystem::new(n, &t1, &t2, 6).unwrap();
        println!("n = {n} at ({t1}, {t2}), Vieta: {:?}", vieta_check(&sys).map_err(|_| "fails"));
        for e in sys.eigen.iter().take(3) {
            println!("  e[{}] = {}", e.partition, e.series);
        }
    }
}
