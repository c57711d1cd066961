//! Cotangent expansions under `-q = e^{iu}` and the trace identity in `u` and `Q`.

use hilbgw::qmodular::{cot_expansion, lemma_trace_check, CotBasisExpr};

fn main() {
    println!("(-ir/2) c_r, r = 2: {}", cot_expansion(2, 5).unwrap());
    println!("Tr_3 in the cotangent basis: {}", CotBasisExpr::trace(3).to_qfunc());
    match lemma_trace_check(7, 11) {
        Ok(r) => println!(
            "identity holds through Q^{} and u^{}: {} coefficients, {} nonzero",
            r.n_max, r.u_order, r.coefficients_compared, r.nonzero_coefficients
        ),
        Err(m) => println!("mismatch at {m}"),
    }
}
