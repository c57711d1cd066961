//! Rewriting symmetric differential polynomials over the signed elementary
//! functions `s_k` and the discriminant, checked on explicit roots.

use hilbgw::kernel::Rat;
use hilbgw::symfun::{evaluation_oracle, parse_diffpoly, Family, MPoly, Rewriter};

fn main() {
    for (text, n) in [("sum_i d[1]f_i", 2), ("d[1]f1*d[1]f2", 2), ("sum_i d[1]f_i^2", 2), ("sym(d[2]f1*f2)", 3)] {
        let p = parse_diffpoly(text, n).unwrap();
        let e = Rewriter::new(n).rewrite(&p).unwrap();
        println!("n = {n}: {text}  =  {e}");
    }

    // f = {z, 2z}: the product of first derivatives is 2
    let z = |c: i64| MPoly::from_terms(1, [(vec![1], Rat::from(c))]);
    let fam = Family::new(vec![z(1), z(2)]);
    let p = parse_diffpoly("d[1]f1*d[1]f2", 2).unwrap();
    let e = Rewriter::new(2).rewrite(&p).unwrap();
    let r = evaluation_oracle(&p, &e, &fam, &[Rat::from(3)]).unwrap();
    println!("at z = 3: direct {}, rewritten {}", r.direct, r.rewritten);
}
