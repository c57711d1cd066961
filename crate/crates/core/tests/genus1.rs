use hilbgw::combinatorics::{partition_counts, partitions, sigma, Partition};
use hilbgw::genus1::expr::parse_ratfunc;
use hilbgw::genus1::{
    d_bracket, d_series, d_series_in, d_series_qexp, degree0_identity_check, exxx_check, fixed_elliptic_integral,
    hodge_family_series, hodge_general_series, nl_coefficient, nl_projection_check, ones_series, psi_lambda_integral,
    table_display_in, table_eval, table_eval_in, theorem1_consistency, theorem1_consistency_in, xcce_series,
    SeriesSource, Section5Table, TraceCache,
};
use hilbgw::kernel::{rat, QFunc, Rat, RatFunc, Ring, Specialized};

fn r(n: i64, d: i64) -> Rat {
    rat(n, d)
}

#[test]
fn d_series_small_n_closed_forms() {
    assert!(d_series(1).is_zero());
    let two = parse_ratfunc("-1/24*(t1+t2)^2/(t1*t2)*(q+1)/(q-1)").unwrap();
    assert_eq!(d_series(2), two);
    let four =
        parse_ratfunc("-1/24*(t1+t2)^2/(t1*t2)*(35*q^5-28*q^4+23*q^3+23*q^2-28*q+35)/(2*(q-1)*(q^2+1)*(q^2-q+1))").unwrap();
    assert_eq!(d_series(4), four);
}

#[test]
fn d_series_is_symmetric_and_mode_independent() {
    let sp = Specialized::new(r(3, 1), r(-7, 2));
    for n in 1..=6 {
        let d = d_series(n);
        assert_eq!(d.swap_t(), d);
        assert_eq!(d_series_in(&sp, n).unwrap(), d.specialize(&r(3, 1), &r(-7, 2)).unwrap(), "n = {n}");
    }
}

#[test]
fn q_expansions_n3_n4() {
    let want3 = [-5, -7, -1, 2, -1, -7, -10, -7].map(|x| r(x, 1));
    assert_eq!(d_series_qexp(3, 7).unwrap().coeffs(), &want3);
    let want4 = [r(-35, 2), r(-21, 1), r(-1, 1), r(-3, 1), r(-17, 1), r(-21, 1), r(-19, 1), r(-21, 1)];
    assert_eq!(d_series_qexp(4, 7).unwrap().coeffs(), &want4);
}

#[test]
fn n5_bracket_agrees_with_the_one_point_table() {
    // The table form ⟨(2,1,1,1)⟩ = -⟨D⟩ fixes the sign of the bracket.
    let closed = parse_ratfunc(
        "(272*q^9-539*q^8+760*q^7-629*q^6+302*q^5+302*q^4-629*q^3+760*q^2-539*q+272)/(6*(q-1)*(q^2+1)*(q^2-q+1)*(q^4-q^3+q^2-q+1))",
    )
    .unwrap();
    assert_eq!(RatFunc::from_qfunc(&d_bracket(5)), closed);
    let e = d_series_qexp(5, 7).unwrap();
    assert_eq!(e.coeff(0), Some(r(-136, 3)));
    assert_eq!(e.coeff(2), Some(r(41, 6)));
}

#[test]
fn ones_series_values_and_convolution_oracle() {
    let want = [(2, r(5, 2)), (3, r(29, 6)), (4, r(109, 12)), (5, r(907, 60))];
    for (n, v) in want {
        assert_eq!(ones_series(n).coefficient, v);
    }
    // log P = Σ σ_{-1}(j) Q^j, so [Q^n] P log P = Σ_j σ_{-1}(j) p(n - j)
    let p = partition_counts(20);
    for n in 0..=20u32 {
        let oracle: Rat = (1..=n).map(|j| sigma(-1, j as u64) * Rat::from(p[(n - j) as usize].clone())).sum();
        assert_eq!(ones_series(n).coefficient, oracle, "n = {n}");
    }
}

#[test]
fn degree0_identity_holds() {
    let rep = degree0_identity_check(12).unwrap();
    assert!(rep.m0_is_partition_series);
    assert!(rep.theorem1_at_q0);
}

#[test]
fn hodge_family_g1_is_minus_e2_over_576() {
    let h = hodge_family_series(1, 12);
    for n in 0..=12usize {
        let e2 = if n == 0 { Rat::one() } else { r(-24, 1) * sigma(1, n as u64) };
        assert_eq!(h.coeff(n).unwrap(), e2 / r(-576, 1), "n = {n}");
    }
}

#[test]
fn hodge_family_coefficients() {
    assert_eq!(hodge_family_series(2, 0).coeff(0), Some(r(1, 69120)));
    for g in 2..=6 {
        let h = hodge_family_series(g, 12);
        for n in 1..=12u64 {
            assert_eq!(h.coeff(n as usize).unwrap(), fixed_elliptic_integral(g, n) / r(24, 1), "g = {g}, n = {n}");
        }
    }
    assert_eq!(fixed_elliptic_integral(2, 1), r(1, 12));
    assert_eq!(fixed_elliptic_integral(2, 2), r(3, 4));
}

#[test]
fn psi_lambda_integral_genus2() {
    // dilaton: ∫_{M̄_{2,1}} ψ_1 λ_2 λ_1 = 2 ∫_{M̄_2} λ_2 λ_1 = 2/5760
    assert_eq!(psi_lambda_integral(2, &[1], 1).unwrap(), r(1, 2880));
    assert!(psi_lambda_integral(2, &[0], 1).is_err());
    assert!(psi_lambda_integral(2, &[1], 2).is_err());
}

#[test]
fn hodge_general_constant_matches_integral_sum() {
    // C (-1)^g/24 |B_2g|/(4g) = (-1)^g (2g-1)! / (24 (2g+m-2)!) Σ_{i ≤ m} ∫ ...
    let cases: [(u32, usize, &[u32]); 6] =
        [(2, 1, &[1]), (3, 1, &[2]), (3, 2, &[1, 1]), (3, 1, &[1, 1]), (4, 2, &[2, 1]), (4, 3, &[1, 1, 1])];
    for (g, m, ks) in cases {
        let (c, series) = hodge_general_series(g, m, ks, 6).unwrap();
        let fact = |n: u64| (1..=n).fold(Rat::one(), |a, k| a * Rat::from(k));
        let ints: Rat = (1..=m).map(|i| psi_lambda_integral(g, ks, i).unwrap()).sum();
        let lhs = &c * &hilbgw::combinatorics::bernoulli(2 * g as usize).abs() / Rat::from(4 * g as i64);
        let rhs = fact(2 * g as u64 - 1) / fact(2 * g as u64 + m as u64 - 2) * ints;
        assert_eq!(lhs, rhs, "g = {g}, ks = {ks:?}");
        let sign = if g % 2 == 0 { Rat::one() } else { -Rat::one() };
        assert_eq!(series.coeff(0).unwrap(), if m == 1 { lhs * sign / r(24, 1) } else { Rat::zero() });
    }
    assert!(hodge_general_series(3, 1, &[1], 4).is_err());
    assert!(hodge_general_series(3, 3, &[1, 1], 4).is_err());
}

#[test]
fn exxx_and_xcce() {
    assert_eq!(exxx_check(7).unwrap().columns_checked, 8);
    let t = xcce_series(4, 8).unwrap();
    for n in 1..=8 {
        assert!(t.values[&(1, n)].is_zero());
    }
    assert!(t.values[&(2, 1)].is_zero());
    assert_eq!(t.values[&(2, 2)], r(1, 48));
}

#[test]
fn theorem_b_identity() {
    assert_eq!(nl_coefficient(2, 1), r(10, 1));
    for g in 1..=6 {
        nl_projection_check(g, 30).unwrap();
    }
    // brute force at g = 2: Σ_{d | n} σ_1(n/d) d^3 Π_{p | d} (1 - p^{-2}) = σ_3(n)
    for n in 1..=30u64 {
        let mut acc = Rat::zero();
        for d in (1..=n).filter(|d| n % d == 0) {
            let mut v = Rat::from(d * d * d);
            for p in (2..=d).filter(|p| d % p == 0 && (2..*p).all(|k| p % k != 0)) {
                v = v * (Rat::one() - r(1, (p * p) as i64));
            }
            acc = acc + sigma(1, n / d) * v;
        }
        assert_eq!(acc, sigma(3, n), "n = {n}");
    }
}

#[test]
fn shipped_table_is_well_formed() {
    let issues = Section5Table::builtin().validate();
    assert!(issues.is_empty(), "{issues:#?}");
    for n in 2..=5 {
        for mu in partitions(n) {
            assert!(Section5Table::builtin().get(&mu).is_some(), "{mu}");
        }
    }
}

#[test]
fn table_ones_match_ones_series() {
    for n in 2..=5 {
        let v = table_eval(&Partition::ones(n)).unwrap();
        assert_eq!(v.source, SeriesSource::Table);
        assert_eq!(v.value, ones_series(n).value());
    }
}

#[test]
fn table_n2_n3_values() {
    let two = table_eval(&Partition::hook(2)).unwrap().value;
    assert_eq!(two, parse_ratfunc("1/24*(t1+t2)^2/(t1*t2)*(q+1)/(q-1)").unwrap());
    assert!(table_eval(&"6".parse().unwrap()).is_err());
}

#[test]
fn theorem1_consistency_symbolic_n_le_4() {
    for n in 2..=4 {
        assert!(theorem1_consistency(n).unwrap(), "n = {n}");
    }
}

#[test]
fn n5_hook_trace_combination_at_a_specialization() {
    let sp = Specialized::new(r(1, 1), r(5, 1));
    let mut cache = TraceCache::new(sp);
    let hook = Partition::hook(5);
    let v = table_eval_in(&mut cache, &hook).unwrap();
    assert_eq!(v.source, SeriesSource::TraceCombo);
    assert_eq!(Some(v.value.clone()), table_display_in(&cache, &hook).unwrap());
    assert!(theorem1_consistency_in(&mut cache, 5).unwrap());

    // every n = 5 record is a genus-1 series: finite at q = 0
    for mu in partitions(5) {
        let v: QFunc = table_eval_in(&mut cache, &mu).unwrap().value;
        assert!(v.eval(&Rat::zero()).is_some(), "{mu}");
    }
}
