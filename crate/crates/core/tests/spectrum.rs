use hilbgw::combinatorics::partitions;
use hilbgw::hilb::{build_md, gram_diagonal, trn};
use hilbgw::kernel::{Matrix, RatFunc, Ring, SeriesAt, Symbolic, Var};
use hilbgw::spectrum::*;
use hilbgw::Rat;
use proptest::prelude::*;

fn r(n: i64) -> Rat {
    Rat::from(n)
}

fn one_five() -> (Rat, Rat) {
    (r(1), r(5))
}

fn q0_matrix(n: u32, t1: &Rat, t2: &Rat) -> Matrix<Rat> {
    build_md(&SeriesAt::new(t1.clone(), t2.clone(), 0), n).map(|s| s.constant_term())
}

fn series(order: usize, c: &[i64]) -> QSeries {
    QSeries::new(Var::LowerQ, order, c.iter().map(|&x| r(x)).collect())
}

fn is_zero_series(s: &QSeries) -> bool {
    s.coeffs().iter().all(|c| c.is_zero())
}

#[test]
fn charpoly_small_cases() {
    let (t1, t2) = one_five();
    let one = charpoly(&q0_matrix(1, &t1, &t2));
    assert_eq!(one, vec![r(0), r(1)]);
    // 2x2 by hand: x^2 - (a + d) x + (a d - b c)
    let m = q0_matrix(2, &t1, &t2);
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    assert_eq!(charpoly(&m), vec![a * d - b * c, -(a + d), r(1)]);
    assert_eq!(charpoly(&m), vec![r(5), r(6), r(1)]);
}

#[test]
fn charpoly_subleading_coefficient_is_minus_trace_symbolic() {
    for n in 1..=3 {
        let p = build_md(&Symbolic, n).charpoly();
        let d = partitions(n).len();
        assert_eq!(p[d - 1], -((RatFunc::t1() + RatFunc::t2()) * trn(n)), "n = {n}");
    }
}

#[test]
fn initial_eigenvalues_match_an_integer_root_scan() {
    let (t1, t2) = one_five();
    assert_eq!(initial_eigenvalues(1, &t1, &t2).unwrap(), vec![r(0)]);
    assert_eq!(initial_eigenvalues(2, &t1, &t2).unwrap(), vec![r(-1), r(-5)]);
    for n in 2..=5 {
        let p = charpoly(&q0_matrix(n, &t1, &t2));
        let horner = |x: &Rat| p.iter().rev().fold(r(0), |acc, c| acc * x.clone() + c.clone());
        let mut scanned: Vec<Rat> = (-400..=400).map(r).filter(|x| horner(x).is_zero()).collect();
        let mut got = initial_eigenvalues(n, &t1, &t2).unwrap();
        scanned.sort();
        got.sort();
        assert_eq!(got, scanned, "n = {n}");
        assert_eq!(got.len(), partitions(n).len());
    }
}

#[test]
fn collisions_and_redraws() {
    let (t1, t2) = one_five();
    // (6) and (5,1) both give 15 at (1, 5), an accident of the point
    assert!(matches!(initial_eigenvalues(6, &t1, &t2), Err(SpectrumError::Collision { .. })));
    assert_eq!(choose_specialization(6, 8).unwrap(), (r(2), r(7)));
    assert_eq!(choose_specialization(7, 8).unwrap(), (r(4), r(13)));
    for n in 2..=5 {
        assert_eq!(choose_specialization(n, 8).unwrap(), one_five());
    }
    // (3,3) and (4,1,1) share their content sums at every point
    let forms = content_forms(6);
    let parts = partitions(6);
    let at = |s: &str| parts.iter().position(|p| p.to_string() == s).unwrap();
    assert_eq!(forms[at("(3,3)")], forms[at("(4,1,1)")]);
    let init = initial_eigenvalues(6, &r(2), &r(7)).unwrap();
    assert_eq!(init[at("(3,3)")], init[at("(4,1,1)")]);
}

#[test]
fn lifted_eigenvalues_satisfy_vieta_and_trace_oracles() {
    let (t1, t2) = one_five();
    for n in 1..=5 {
        let d = partitions(n).len();
        let sys = Eigensystem::new(n, &t1, &t2, 4 * d).unwrap();
        vieta_check(&sys).unwrap();
        derivative_identity_check(&sys).unwrap();
        let sum = sys.series().into_iter().fold(QSeries::zero(), |a, b| a + b);
        assert_eq!(sum, sys.trace_series());
        assert_eq!(sum, sys.trn_series());
        let prod = sys.series().into_iter().fold(QSeries::one(), |a, b| a * b);
        let sign = if d % 2 == 0 { r(1) } else { r(-1) };
        assert_eq!(prod, sys.charpoly[0].scale_rat(&sign));
        for e in &sys.eigen {
            assert_eq!(e.series.order(), Some(4 * d));
        }
    }
}

#[test]
fn n2_eigenvalues_against_the_quadratic_formula() {
    // e^2 + 6 e + 5 at q = 0; first-order terms from the implicit function theorem
    let (t1, t2) = one_five();
    let sys = Eigensystem::new(2, &t1, &t2, 6).unwrap();
    let p = &sys.charpoly;
    for e in &sys.eigen {
        let e0 = e.series.constant_term();
        let px = r(2) * e0.clone() + p[1].constant_term();
        let pq = p[0].coeff(1).unwrap() + p[1].coeff(1).unwrap() * e0;
        assert_eq!(e.series.coeff(1).unwrap(), -(pq / px));
    }
}

#[test]
fn clusters_split_at_first_order() {
    // (x - q)(x + 2q)(x - 1 - q): a double root at 0 splitting into q and -2q
    let n = 10;
    let x_minus = |c: QSeries| vec![c.neg_ref(), QSeries::one_to(Var::LowerQ, n)];
    let mul = |a: &[QSeries], b: &[QSeries]| {
        let mut out = vec![QSeries::zero_to(Var::LowerQ, n); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&x.mul_ref(y));
            }
        }
        out
    };
    let p = mul(&mul(&x_minus(series(n, &[0, 1])), &x_minus(series(n, &[0, -2]))), &x_minus(series(n, &[1, 1])));
    let mut roots = lift_cluster(&p, &r(0), 2, n - 2).unwrap();
    roots.sort_by_key(|s| s.coeff(1).unwrap());
    assert_eq!(roots, vec![series(n - 2, &[0, -2]), series(n - 2, &[0, 1])]);
    assert_eq!(lift_cluster(&p, &r(1), 1, n).unwrap(), vec![series(n, &[1, 1])]);
    // x^2 - q ramifies
    let ram = vec![series(n, &[0, -1]), QSeries::zero_to(Var::LowerQ, n), QSeries::one_to(Var::LowerQ, n)];
    assert!(matches!(lift_cluster(&ram, &r(0), 2, 4), Err(SpectrumError::Ramified(_))));
}

#[test]
fn n6_repeated_eigenvalues_are_resolved() {
    let sys = Eigensystem::new(6, &r(2), &r(7), 12).unwrap();
    vieta_check(&sys).unwrap();
    derivative_identity_check(&sys).unwrap();
    let mut firsts: Vec<(Rat, Rat)> =
        sys.eigen.iter().map(|e| (e.series.constant_term(), e.series.coeff(1).unwrap())).collect();
    firsts.sort();
    firsts.dedup();
    assert_eq!(firsts.len(), 11);
    let at33: Vec<Rat> = sys.eigen.iter().filter(|e| e.series.constant_term() == r(-33)).map(|e| e.series.coeff(1).unwrap()).collect();
    let mut want = vec![Rat::new(-522, 5), Rat::new(9, 5)];
    let mut got = at33.clone();
    want.sort();
    got.sort();
    assert_eq!(got, want);
}

#[test]
fn cauchy_binet_matches_direct_series_determinant() {
    let (t1, t2) = one_five();
    for n in 2..=4 {
        let order = 14;
        let sys = Eigensystem::new(n, &t1, &t2, order).unwrap();
        let eig = sys.series();
        let w = wronskian_matrix(&eig);
        let d = eig.len();
        // det = (-1)^d charpoly(0)
        let sign = if d % 2 == 0 { r(1) } else { r(-1) };
        let det = w.charpoly()[0].scale_rat(&sign);
        for k in 0..=order {
            assert_eq!(wronskian_coefficient(&eig, k), det.coeff(k), "n = {n}, q^{k}");
        }
        assert!(wronskian_coefficient(&eig, wronskian_max_index(d, order) + 1).is_none());
        // row 0 is the eigenvalues themselves
        let row0 = (0..d).fold(QSeries::zero(), |a, i| a + w.get(0, i).clone());
        assert_eq!(row0, sys.trace_series());
    }
}

#[test]
fn permuting_eigenvalues_flips_the_sign() {
    let (t1, t2) = one_five();
    let sys = Eigensystem::new(4, &t1, &t2, 20).unwrap();
    let eig = sys.series();
    let (k, c) = first_nonzero_wronskian(&eig).unwrap();
    let mut swapped = eig.clone();
    swapped.swap(0, 3);
    assert_eq!(first_nonzero_wronskian(&swapped).unwrap(), (k, -c.clone()));
    let mut cycled = eig.clone();
    cycled.rotate_left(1);
    // a 5-cycle is even
    assert_eq!(first_nonzero_wronskian(&cycled).unwrap(), (k, c));
}

#[test]
fn certificates_pass_for_small_n() {
    for n in 2..=5 {
        let cert = certify_wronskian(n, None).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass, "n = {n}");
        let d = partitions(n).len();
        assert_eq!(cert.q_order, 4 * d);
        assert!(cert.first_nonzero_index.unwrap() >= wronskian_min_index(d));
        assert!(!cert.coefficient.as_ref().unwrap().is_zero());
    }
    let cert = wronskian_certificate(2, &r(1), &r(5), Some(4)).unwrap();
    assert_eq!(cert.first_nonzero_index, Some(1));
    assert_eq!(cert.coefficient, Some(r(30)));
    let json = serde_json::to_value(&cert).unwrap();
    assert_eq!(json["coefficient"], "30");
    assert_eq!(json["verdict"], "pass");
    assert_eq!(json["t2"], "5");
    assert!(matches!(wronskian_certificate(1, &r(1), &r(5), None), Err(SpectrumError::TooSmall { .. })));
}

#[test]
fn eigenvectors_and_idempotent_norms() {
    let (t1, t2) = one_five();
    for n in 1..=4 {
        let d = partitions(n).len();
        let sys = Eigensystem::new(n, &t1, &t2, 10).unwrap();
        let vecs = eigenvectors(&sys).unwrap();
        for (v, e) in vecs.iter().zip(&sys.eigen) {
            assert_eq!(v.eigenvalue, e.series, "bordered and charpoly lifts agree");
            let mv = sys.md.mul_vec(&v.vector);
            for (a, b) in mv.iter().zip(&v.vector) {
                assert!(is_zero_series(&a.sub_ref(&b.mul_ref(&v.eigenvalue))));
            }
        }
        let deltas = delta_i(&sys, &vecs).unwrap();
        // orthogonal eigenbasis: Σ ⟨1, v_i⟩^2 / ⟨v_i, v_i⟩ = ⟨1, 1⟩
        let gram = gram_diagonal(&SeriesAt::new(t1.clone(), t2.clone(), 10), n);
        let total = deltas.iter().fold(QSeries::zero(), |a, x| a + x.inv().unwrap());
        assert_eq!(total, gram[d - 1].truncate(10), "n = {n}");
        if n <= 3 {
            frobenius_check(&sys, &vecs).unwrap();
        }
    }
    let sys = Eigensystem::new(1, &t1, &t2, 4).unwrap();
    let delta = delta_i(&sys, &eigenvectors(&sys).unwrap()).unwrap();
    assert_eq!(delta[0], QSeries::exact(Var::LowerQ, vec![t1 * t2]));
}

#[test]
fn delta_is_scale_invariant() {
    let (t1, t2) = one_five();
    let sys = Eigensystem::new(3, &t1, &t2, 8).unwrap();
    let gram = gram_diagonal(&SeriesAt::new(t1, t2, 8), 3);
    for v in eigenvectors(&sys).unwrap() {
        let scaled: Vec<QSeries> = v.vector.iter().map(|x| x.mul_ref(&series(8, &[3, -1, 2]))).collect();
        assert_eq!(delta_from_vector(&gram, &v.vector), delta_from_vector(&gram, &scaled));
    }
}

fn small_series(order: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-9i64..=9, order + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn newton_recovers_planted_roots(
        consts in prop::collection::btree_set(-20i64..=20, 1..5),
        tails in prop::collection::vec(small_series(6), 5),
    ) {
        let order = 6;
        let roots: Vec<QSeries> = consts
            .iter()
            .zip(&tails)
            .map(|(c, t)| {
                let mut v = t.clone();
                v[0] = *c;
                series(order, &v)
            })
            .collect();
        let mut p = vec![QSeries::one_to(Var::LowerQ, order)];
        for root in &roots {
            let mut next = vec![QSeries::zero_to(Var::LowerQ, order); p.len() + 1];
            for (k, c) in p.iter().enumerate() {
                next[k + 1] = next[k + 1].add_ref(c);
                next[k] = next[k].sub_ref(&c.mul_ref(root));
            }
            p = next;
        }
        for root in &roots {
            prop_assert_eq!(&lift_root(&p, &root.constant_term(), order), root);
        }
    }

    #[test]
    fn rational_convolution_matches_schoolbook(
        a in prop::collection::vec((-50i64..50, 1i64..12), 0..8),
        b in prop::collection::vec((-50i64..50, 1i64..12), 0..8),
    ) {
        let a: Vec<Rat> = a.into_iter().map(|(n, d)| Rat::new(n, d)).collect();
        let b: Vec<Rat> = b.into_iter().map(|(n, d)| Rat::new(n, d)).collect();
        let len = (a.len() + b.len()).saturating_sub(1);
        let mut want = vec![Rat::zero(); len];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                want[i + j] = want[i + j].add_ref(&x.mul_ref(y));
            }
        }
        prop_assert_eq!(Rat::convolve(&a, &b, len), want);
    }
}
