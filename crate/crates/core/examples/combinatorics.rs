//! Partitions, divisor sums, Bernoulli numbers and Eisenstein series.

use hilbgw::combinatorics::{bernoulli, eisenstein, partition_series, partitions, sigma};

fn main() {
    let p4: Vec<String> = partitions(4).iter().map(|p| p.to_string()).collect();
    println!("partitions of 4: {}", p4.join(" "));
    println!("P(Q) = {}", partition_series(10));
    println!("sigma_3(12) = {}, sigma_-1(12) = {}", sigma(3, 12), sigma(-1, 12));
    let b: Vec<String> = (0..=12).step_by(2).map(|m| bernoulli(m).to_string()).collect();
    println!("B_0, B_2, ..., B_12 = {}", b.join(", "));
    println!("E_4 = {}", eisenstein(2, 5));
}
