use mathpar::arith::Scalar;
use mathpar::cancel::CancelToken;
use mathpar::groebner::{groebner_basis, is_groebner_basis, reduce, MonomialOrder};
use mathpar::poly::{resultant, Monomial, Poly};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_poly(rng: &mut StdRng, nvars: usize) -> Poly {
    let terms = rng.random_range(2..=3);
    Poly::from_terms((0..terms).map(|_| {
        let exps: Vec<u32> = (0..nvars).map(|_| rng.random_range(0..=2)).collect();
        let c = rng.random_range(-5..=5);
        (
            Monomial::from_exps(exps),
            Scalar::int(if c == 0 { 1 } else { c }),
        )
    }))
}

fn check_system(input: &[Poly], ord: MonomialOrder) {
    let t = CancelToken::never();
    let b = groebner_basis(input, ord, &t).unwrap();
    assert!(is_groebner_basis(&b.generators, ord).unwrap(), "{input:?}");
    for f in input {
        assert!(reduce(f, &b.generators, ord).unwrap().is_zero(), "{f:?}");
    }
    let again = groebner_basis(&b.generators, ord, &t).unwrap();
    assert_eq!(again.generators, b.generators);
    // Reduced: no generator term is divisible by another generator's leading monomial.
    for (i, g) in b.generators.iter().enumerate() {
        for (j, h) in b.generators.iter().enumerate() {
            if i == j {
                continue;
            }
            let lm = ord.leading_term(h).unwrap().0;
            assert!(g.terms().all(|(m, _)| !lm.divides(m)));
        }
    }
}

#[test]
fn random_systems_in_two_and_three_variables() {
    let mut rng = StdRng::seed_from_u64(29);
    for round in 0..40 {
        let nvars = if round % 2 == 0 { 2 } else { 3 };
        let k = rng.random_range(2..=3);
        let input: Vec<Poly> = (0..k).map(|_| random_poly(&mut rng, nvars)).collect();
        check_system(&input, MonomialOrder::Lex);
        check_system(&input, MonomialOrder::DegRevLex);
    }
}

#[test]
fn elimination_member_is_the_resultant() {
    // Variables [y, x] with x greatest.
    let mono = |e: &[u32]| Monomial::from_exps(e.to_vec());
    let f = Poly::from_terms([
        (mono(&[0, 2]), Scalar::int(1)),
        (mono(&[2]), Scalar::int(1)),
        (mono(&[]), Scalar::int(-1)),
    ]);
    let g = Poly::from_terms([
        (mono(&[0, 2]), Scalar::int(2)),
        (mono(&[1, 1]), Scalar::int(1)),
        (mono(&[2]), Scalar::int(1)),
        (mono(&[]), Scalar::int(-1)),
    ]);
    let b = groebner_basis(
        &[f.clone(), g.clone()],
        MonomialOrder::Lex,
        &CancelToken::never(),
    )
    .unwrap();
    let free: Vec<&Poly> = b.generators.iter().filter(|p| p.is_free_of(1)).collect();
    assert_eq!(free.len(), 1);
    let (r, _) = resultant(&f, &g, 1).unwrap().to_primitive_integer();
    let (e, _) = free[0].to_primitive_integer();
    assert!(r == e || r == -e.clone(), "resultant {r:?} vs {e:?}");
}
