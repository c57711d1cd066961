use hilbgw::kernel::{Rat, Ring};
use hilbgw::symfun::rewrite::{expand_in_roots, substitute_root};
use hilbgw::symfun::{
    evaluation_oracle, parse_diffpoly, phi, random_point, random_symmetric, DiffPoly, DiffSymbol, Family, MPoly,
    Rewriter, SymbolKind, SymfunError,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn p(text: &str, n: u32) -> DiffPoly {
    parse_diffpoly(text, n).unwrap()
}

/// Draws a point where the roots of `family` are distinct.
fn good_point(family: &Family, rng: &mut ChaCha8Rng) -> Vec<Rat> {
    loop {
        let z = random_point(family.nvars(), rng);
        if !family.discriminant(&z).is_zero() {
            return z;
        }
    }
}

#[test]
fn sum_of_first_derivatives() {
    let mut rw = Rewriter::new(2);
    let e = rw.rewrite(&p("sum_i d[1]f_i", 2)).unwrap();
    assert_eq!(e.disc_power, 0);
    assert_eq!(e.to_string(), "-d[1]s1");
    for n in 1..=4 {
        let mut rw = Rewriter::new(n);
        let e = rw.rewrite(&p("sum_i d[0,1]f_i", n)).unwrap();
        assert_eq!(e.to_string(), "-d[0,1]s1", "n = {n}");
    }
}

#[test]
fn discriminant_n2() {
    let mut rw = Rewriter::new(2);
    let d = p("(f1 - f2)*(f2 - f1)", 2);
    let e = rw.rewrite(&d).unwrap();
    assert_eq!(e.disc_power, 0);
    assert_eq!(e.numerator, p("-(s1^2 - 4*s2)", 2));
    assert_eq!(rw.discriminant(), e.numerator);
}

#[test]
fn discriminant_matches_product_of_px() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=4 {
        let mut rw = Rewriter::new(n);
        let d = rw.discriminant();
        for _ in 0..5 {
            let fam = Family::random(n, 2, 2, &mut rng);
            let z = random_point(2, &mut rng);
            let direct = fam.discriminant(&z);
            assert_eq!(direct, fam.discriminant_from_px(&z), "n = {n}");
            let via_s = d.eval(&|s: &DiffSymbol| fam.value(s, &z)).unwrap();
            assert_eq!(direct, via_s, "n = {n}");
        }
    }
}

#[test]
fn rejects_non_symmetric_and_auxiliary_input() {
    let mut rw = Rewriter::new(2);
    assert_eq!(rw.rewrite(&p("d[1]f1", 2)), Err(SymfunError::NotSymmetric));
    assert_eq!(rw.rewrite(&p("Y", 2)), Err(SymfunError::AuxiliarySymbol));
    assert_eq!(phi(2, &[0, 0]), Err(SymfunError::ZeroMultiIndex));
}

#[test]
fn phi_first_order_and_implicit_derivative() {
    // n = 2, f(z) roots of x^2 + s1 x + s2 with s1 = -(f1 + f2), s2 = f1 f2
    let e = phi(2, &[1]).unwrap();
    assert_eq!(e, p("-d[1]s1*Y - d[1]s2", 2));
    let fam = Family::new(vec![
        MPoly::from_terms(1, [(vec![2], Rat::from(1)), (vec![0], Rat::from(3))]),
        MPoly::from_terms(1, [(vec![1], Rat::from(-2))]),
    ]);
    let z = [Rat::new(1, 2)];
    for i in 1..=2 {
        let f = fam.value(&DiffSymbol::f(i), &z).unwrap();
        let val = e
            .eval(&|s: &DiffSymbol| if s.kind == SymbolKind::Y { Some(f.clone()) } else { fam.value(s, &z) })
            .unwrap();
        let s1 = fam.value(&DiffSymbol::s(1), &z).unwrap();
        let px = Rat::from(2) * f.clone() + s1;
        let df = fam.value(&DiffSymbol::f(i).differentiate(0), &z).unwrap();
        assert_eq!(val / px, df);
    }
}

#[test]
fn phi_round_trip_symbolic() {
    // ∂^b f_i · P_x(f_i) = Φ_b(Ds, DY)|_{Y = f_i} once s is written in the roots
    for n in 1..=3u32 {
        let px = {
            let mut q = DiffPoly::var(DiffSymbol::y()).pow_u(n - 1).scale_rat(&Rat::from(n as i64));
            for k in 1..n {
                q = q + (DiffPoly::var(DiffSymbol::s(k)) * DiffPoly::var(DiffSymbol::y()).pow_u(n - k - 1))
                    .scale_rat(&Rat::from((n - k) as i64));
            }
            q
        };
        let bs: Vec<Vec<u32>> = vec![vec![1], vec![0, 1], vec![2], vec![1, 1], vec![0, 2], vec![3], vec![2, 1], vec![1, 2]];
        for b in bs {
            let lhs = expand_in_roots(
                &(DiffPoly::var(DiffSymbol::new(SymbolKind::Y, 0, b.clone())) * px.clone()),
                n,
            );
            let rhs = expand_in_roots(&phi(n, &b).unwrap(), n);
            for i in 1..=n {
                assert_eq!(substitute_root(&lhs, i), substitute_root(&rhs, i), "n = {n}, b = {b:?}, i = {i}");
            }
        }
    }
}

#[test]
fn omega_identity_symbolic() {
    // ∂^b f · P_x(f)^{N_b} - Ω_b(Ds, f) vanishes modulo P(f) in K[Df]
    for n in 2..=3u32 {
        let mut rw = Rewriter::new(n);
        for b in [vec![1], vec![0, 1], vec![2], vec![1, 1]] {
            let (om, k) = rw.omega(&b).unwrap();
            assert_eq!(k, 2 * b.iter().sum::<u32>() - 1);
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..3 {
                let fam = Family::random(n, 2, 3, &mut rng);
                let z = good_point(&fam, &mut rng);
                for i in 1..=n {
                    let f = fam.value(&DiffSymbol::f(i), &z).unwrap();
                    let val = om
                        .eval(&|s: &DiffSymbol| if s.kind == SymbolKind::Y { Some(f.clone()) } else { fam.value(s, &z) })
                        .unwrap();
                    let mut px = Rat::from(n as i64) * f.pow_u(n - 1);
                    for j in 1..n {
                        px = px
                            + fam.value(&DiffSymbol::s(j), &z).unwrap() * Rat::from((n - j) as i64) * f.pow_u(n - j - 1);
                    }
                    let d = fam.value(&DiffSymbol::new(SymbolKind::F, i, b.clone()), &z).unwrap();
                    assert_eq!(d * px.pow_u(k), val, "n = {n}, b = {b:?}");
                }
            }
        }
    }
}

#[test]
fn no_derivatives_means_no_discriminant() {
    // classical rewriting, checked by substituting s back in terms of the roots
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=4 {
        let mut rw = Rewriter::new(n);
        for _ in 0..6 {
            let s = random_symmetric(n, 1, 0, &mut rng);
            let e = rw.rewrite(&s).unwrap();
            assert_eq!(e.disc_power, 0, "{s}");
            assert_eq!(expand_in_roots(&e.numerator, n), s);
        }
    }
}

#[test]
fn rewrite_round_trip_symbolic() {
    // Δ^k · S = numerator with s written in the roots, exactly in K[Df]
    for (text, n) in [("sum_i d[1]f_i^2", 2), ("sym(d[2]f1*f2)", 2), ("sym(d[1]f1*d[0,1]f2)", 2), ("sum_i f_i*d[3]f_i", 2)] {
        let s = p(text, n);
        let mut rw = Rewriter::new(n);
        let e = rw.rewrite(&s).unwrap();
        let disc = expand_in_roots(&rw.discriminant(), n);
        assert_eq!(expand_in_roots(&e.numerator, n), &disc.pow_u(e.disc_power) * &s, "{text}");
    }
}

#[test]
fn small_cases_agree_with_the_oracle() {
    let cases = [("sum_i d[1]f_i^2", 2), ("sym(d[2]f1*f2)", 2), ("sym(d[1]f1*d[0,1]f2)", 2), ("sum_i d[1]f_i", 3)];
    for (text, n) in cases {
        let s = p(text, n);
        let mut rw = Rewriter::new(n);
        let e = rw.rewrite(&s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..4 {
            let fam = Family::random(n, 2, 3, &mut rng);
            let z = good_point(&fam, &mut rng);
            let r = evaluation_oracle(&s, &e, &fam, &z).unwrap();
            assert!(r.agrees(), "{text}: {r:?}");
        }
    }
}

#[test]
fn random_inputs_agree_with_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut rws: Vec<Rewriter> = (1..=4).map(Rewriter::new).collect();
    for k in 0..40u32 {
        let n = 2 + k % 3;
        let m = 1 + (k / 3) % 2;
        let s = random_symmetric(n, m as usize, 3, &mut rng);
        let e = rws[n as usize - 1].rewrite(&s).unwrap();
        assert!(!e.numerator.has_kind(SymbolKind::F) && !e.numerator.has_kind(SymbolKind::Y));
        let fam = Family::random(n, m as usize, 3, &mut rng);
        let z = good_point(&fam, &mut rng);
        let r = evaluation_oracle(&s, &e, &fam, &z).unwrap();
        assert!(r.agrees(), "{s}");
    }
}

#[test]
fn clearing_and_trace_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for k in 0..24u32 {
        let n = 2 + k % 2;
        let s = random_symmetric(n, 2, 2, &mut rng);
        let mut rw = Rewriter::new(n);
        assert_eq!(rw.rewrite(&s).unwrap(), rw.rewrite_by_clearing(&s).unwrap(), "{s}");
    }
}

#[test]
fn product_of_first_derivatives_linear_roots() {
    // f = {z, 2z}: f1' f2' = 2 everywhere
    let fam = Family::new(vec![
        MPoly::from_terms(1, [(vec![1], Rat::from(1))]),
        MPoly::from_terms(1, [(vec![1], Rat::from(2))]),
    ]);
    let s = p("d[1]f1*d[1]f2", 2);
    let mut rw = Rewriter::new(2);
    let e = rw.rewrite(&s).unwrap();
    for z in [Rat::from(1), Rat::new(-5, 3), Rat::from(7)] {
        let r = evaluation_oracle(&s, &e, &fam, &[z]).unwrap();
        assert_eq!(r.direct, Rat::from(2));
        assert_eq!(r.rewritten, Rat::from(2));
    }
    assert!(evaluation_oracle(&s, &e, &fam, &[Rat::zero()]).is_err());
}

#[test]
fn cubic_family_at_twenty_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let fam = Family::random(3, 1, 3, &mut rng);
    let s = p("sym(d[1]f1*d[1]f2) + sum_i f_i*d[2]f_i", 3);
    let mut rw = Rewriter::new(3);
    let e = rw.rewrite(&s).unwrap();
    for _ in 0..20 {
        let z = good_point(&fam, &mut rng);
        assert!(evaluation_oracle(&s, &e, &fam, &z).unwrap().agrees());
    }
}

#[test]
fn inverse_of_px_modulo_p() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 1..=4 {
        let mut rw = Rewriter::new(n);
        let a = rw.px_inverse_numerator();
        let fam = Family::random(n, 1, 2, &mut rng);
        let z = good_point(&fam, &mut rng);
        let disc = fam.discriminant(&z);
        for i in 1..=n {
            let f = fam.value(&DiffSymbol::f(i), &z).unwrap();
            let val = |q: &DiffPoly| {
                q.eval(&|s: &DiffSymbol| if s.kind == SymbolKind::Y { Some(f.clone()) } else { fam.value(s, &z) }).unwrap()
            };
            let mut px = Rat::from(n as i64) * f.pow_u(n - 1);
            for j in 1..n {
                px = px + fam.value(&DiffSymbol::s(j), &z).unwrap() * Rat::from((n - j) as i64) * f.pow_u(n - j - 1);
            }
            assert_eq!(val(&a) * px, disc, "n = {n}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rewrite_is_linear(seed in any::<u64>(), a in -4i64..=4, b in -4i64..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 + (seed % 2) as u32;
        let s1 = random_symmetric(n, 2, 2, &mut rng);
        let s2 = random_symmetric(n, 2, 2, &mut rng);
        let mut rw = Rewriter::new(n);
        let (ra, rb) = (Rat::from(a), Rat::from(b));
        let comb = s1.scale_rat(&ra) + s2.scale_rat(&rb);
        let e = rw.rewrite(&comb).unwrap();
        let e1 = rw.rewrite(&s1).unwrap();
        let e2 = rw.rewrite(&s2).unwrap();
        // compare over the common denominator
        let k = e.disc_power.max(e1.disc_power).max(e2.disc_power);
        let d = rw.discriminant();
        let lift = |x: &hilbgw::symfun::LocalizedExpr| &x.numerator * &d.pow_u(k - x.disc_power);
        prop_assert_eq!(lift(&e), lift(&e1).scale_rat(&ra) + lift(&e2).scale_rat(&rb));
    }

    #[test]
    fn display_parse_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 1 + (seed % 4) as u32;
        let s = random_symmetric(n, 2, 3, &mut rng);
        prop_assert_eq!(parse_diffpoly(&s.to_string(), n).unwrap(), s);
    }
}
