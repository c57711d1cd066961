//! Builds `M_D` in the Nakajima basis and compares its trace with `Tr_n`.

use hilbgw::hilb::{build_md, gram_diagonal, trn};
use hilbgw::kernel::{rat, RatFunc, Specialized, Symbolic};

fn main() {
    let tsum = RatFunc::t1() + RatFunc::t2();
    for n in 1..=4 {
        let md = build_md(&Symbolic, n);
        let ok = md.trace() == &tsum * &trn(n);
        println!("n = {n}: {}x{} matrix, trace = (t1+t2) Tr_n: {ok}", md.rows(), md.cols());
    }
    println!("Tr_3 = {}", trn(3));

    let sp = Specialized::new(rat(1, 1), rat(5, 1));
    for (i, g) in gram_diagonal(&sp, 3).iter().enumerate() {
        println!("<mu_{i}, mu_{i}> at (1, 5) = {g}");
    }
}
