use hilbgw::combinatorics::{partitions, Partition};
use hilbgw::hilb::{
    alpha_annihilate, alpha_create, build_md, dpower_basis, gram_diagonal, mult_operator, selfadjoint_check, trmu,
    trn, trn_in, QuantumRing,
};
use hilbgw::kernel::{rat, Matrix, Poly, QFunc, Rat, RatFunc, Ring, SeriesAt, Specialized, Symbolic};

fn q_over(num: &[i64], den: &[i64]) -> RatFunc {
    let lift = |v: &[i64]| Poly::from_coeffs(v.iter().map(|&x| hilbgw::kernel::TPoly::from_rat(&Rat::from(x))).collect());
    RatFunc::new(lift(num), lift(den))
}

fn at_q0(m: &Matrix<QFunc>) -> Matrix<Rat> {
    m.map(|x| x.eval(&Rat::zero()).expect("regular at q = 0"))
}

fn roots_among(charpoly: &[Rat], candidates: &[i64]) -> Vec<i64> {
    candidates
        .iter()
        .copied()
        .filter(|&c| Poly::from_coeffs(charpoly.to_vec()).eval(&Rat::from(c)).is_zero())
        .collect()
}

#[test]
fn tr1_vanishes_and_tr2_closed_form() {
    assert!(trn(1).is_zero());
    assert_eq!(trn(2), q_over(&[1, 1], &[-1, 1]));
}

#[test]
fn tr3_plus_tr2_closed_form() {
    // (5q^3 - 3q^2 - 3q + 5) / ((q - 1)(q^2 - q + 1))
    let num = [5, -3, -3, 5];
    let den = (Poly::from_coeffs(vec![rat(-1, 1), rat(1, 1)]) * Poly::from_coeffs(vec![rat(1, 1), rat(-1, 1), rat(1, 1)]))
        .coeffs()
        .iter()
        .map(|c| c.numer().try_into().unwrap())
        .collect::<Vec<i64>>();
    assert_eq!(trn(3) + trn(2), q_over(&num, &den));
}

#[test]
fn trace_of_md_matches_trn_symbolic() {
    let tsum = RatFunc::t1() + RatFunc::t2();
    for n in 1..=5 {
        assert_eq!(build_md(&Symbolic, n).trace(), &tsum * &trn(n), "n = {n}");
    }
}

#[test]
fn selfadjoint_symbolic_small_and_specialized_n5() {
    for n in 1..=4 {
        assert!(selfadjoint_check(&Symbolic, n), "n = {n}");
    }
    assert!(selfadjoint_check(&Specialized::new(rat(3, 7), rat(-2, 5)), 5));
}

#[test]
fn gram_n2_explicit() {
    // (2): ℓ = 1, z = 2, sign (-1)^1; (1,1): ℓ = 2, z = 2, sign +1
    let g = gram_diagonal(&Specialized::new(rat(1, 1), rat(5, 1)), 2);
    assert_eq!(g[0], QFunc::from_rat(&rat(-1, 10)));
    assert_eq!(g[1], QFunc::from_rat(&rat(1, 50)));
}

#[test]
fn q0_spectrum_is_box_content_sums() {
    let expected: [(u32, &[i64]); 3] = [(2, &[-1, -5]), (3, &[-3, -6, -15]), (4, &[-6, -8, -12, -16, -30])];
    for (n, eig) in expected {
        let m = at_q0(&build_md(&Specialized::new(rat(1, 1), rat(5, 1)), n));
        let cp = m.charpoly();
        assert_eq!(roots_among(&cp, eig), eig.to_vec(), "n = {n}");
    }
}

#[test]
fn q0_matrix_is_q_independent() {
    // The constant term of every entry equals the q = 0 value, and the q^0 matrix
    // of the series mode agrees with it.
    let sp = Specialized::new(rat(2, 1), rat(7, 1));
    let se = SeriesAt::new(rat(2, 1), rat(7, 1), 6);
    for n in 2..=4 {
        let a = build_md(&sp, n);
        let b = build_md(&se, n);
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                assert_eq!(a.get(i, j).q_expand(6).unwrap(), *b.get(i, j));
            }
        }
    }
}

#[test]
fn number_operator_diagonal() {
    // α_{-r} α_r |μ⟩ = r m_r(μ) |μ⟩
    for mu in partitions(6) {
        for r in 1..=6 {
            let got = alpha_annihilate(r, &mu).map(|(f, rest)| (f, alpha_create(r, &rest)));
            match got {
                Some((f, back)) => {
                    assert_eq!(back, mu);
                    assert_eq!(f, Rat::from((r as usize * mu.multiplicity(r)) as i64));
                }
                None => assert_eq!(mu.multiplicity(r), 0),
            }
        }
    }
}

#[test]
fn dpower_basis_n2() {
    let b = dpower_basis(&Symbolic, 2).unwrap();
    assert_eq!(b.vectors[0], hilbgw::hilb::FockVector::basis(&Partition::ones(2)));
    let hook = Partition::hook(2);
    assert_eq!(b.vectors[1].coeff(&hook), -RatFunc::one());
    assert!(!b.coordinates.map(|x| x.clone()).transpose().is_zero());
}

#[test]
fn mult_operator_unit_and_hook() {
    for n in 2..=4 {
        let qr = QuantumRing::new(&Symbolic, n).unwrap();
        assert_eq!(qr.mult_operator(&Partition::ones(n)).unwrap(), Matrix::identity(partitions(n).len()));
        assert_eq!(qr.mult_operator(&Partition::hook(n)).unwrap(), qr.md().scale(&-RatFunc::one()));
    }
}

#[test]
fn small_trmu_values() {
    assert_eq!(trmu(&Symbolic, &Partition::ones(1)).unwrap(), RatFunc::one());
    assert_eq!(trmu(&Symbolic, &Partition::ones(2)).unwrap(), RatFunc::from_rat(&rat(2, 1)));
    let tsum = RatFunc::t1() + RatFunc::t2();
    assert_eq!(trmu(&Symbolic, &Partition::hook(2)).unwrap(), -(&tsum * &trn(2)));
}

#[test]
fn hook_trace_is_minus_tsum_trn() {
    let sp = Specialized::new(rat(1, 1), rat(5, 1));
    for n in 2..=5 {
        let t = trmu(&sp, &Partition::hook(n)).unwrap();
        assert_eq!(t, -(trn_in(&sp, n).scale_rat(&rat(6, 1))), "n = {n}");
    }
}

#[test]
fn quantum_ring_commutes_symbolic() {
    for n in 2..=4 {
        let qr = QuantumRing::new(&Symbolic, n).unwrap();
        assert_eq!(qr.commutativity_check(), Ok(()), "n = {n}");
    }
}

#[test]
fn mult_operators_commute_as_matrices() {
    let qr = QuantumRing::new(&Specialized::new(rat(2, 1), rat(-3, 1)), 4).unwrap();
    let ops: Vec<_> = partitions(4).iter().map(|mu| qr.mult_numerator(mu).unwrap().0).collect();
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            assert_eq!(a.mul_ref(b), b.mul_ref(a));
        }
    }
}

#[test]
fn product_is_commutative_on_basis_vectors() {
    let qr = QuantumRing::new(&Specialized::new(rat(1, 1), rat(5, 1)), 3).unwrap();
    let ps = partitions(3);
    for (i, mu) in ps.iter().enumerate() {
        for (j, nu) in ps.iter().enumerate() {
            let a = qr.mult_operator(mu).unwrap();
            let b = qr.mult_operator(nu).unwrap();
            assert_eq!(a.column(j), b.column(i));
        }
    }
}

#[test]
fn one_shot_mult_operator_matches_ring() {
    let mu: Partition = "2,2".parse().unwrap();
    let sp = Specialized::new(rat(1, 1), rat(5, 1));
    let a = mult_operator(&sp, &mu).unwrap();
    let b = QuantumRing::new(&sp, 4).unwrap().mult_operator(&mu).unwrap();
    assert_eq!(a, b);
}

#[test]
fn unreduced_trmu_agrees_and_is_symmetric() {
    let ring = QuantumRing::new(&Symbolic, 3).unwrap();
    for mu in partitions(3) {
        let t = ring.trmu_unreduced(&mu).unwrap();
        assert_eq!(t, ring.trmu(&mu).unwrap(), "{mu}");
        assert!(t.is_t_symmetric(), "{mu}");
    }
    let t1 = RatFunc::t1();
    assert!(!t1.is_t_symmetric());
    assert!((&t1 / &RatFunc::t2()).add_ref(&(&RatFunc::t2() / &t1)).is_t_symmetric());
}
