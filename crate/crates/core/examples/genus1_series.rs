//! `<D>_1` for small n: the closed rational function and its q-expansion.

use hilbgw::genus1::{d_series, d_series_qexp, ones_series};

fn main() {
    for n in 2..=5 {
        println!("n = {n}");
        println!("  <D>_1 = {}", d_series(n));
        let e = d_series_qexp(n, 7).expect("regular at q = 0");
        println!("  bracket = {e}");
        println!("  <1^n>_1 coefficient = {}", ones_series(n).coefficient);
    }
}
