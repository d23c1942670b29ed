use std::time::Instant;

use mathpar::arith::{ExactDiv, Scalar};
use mathpar::matrix::determinant;
use mathpar::poly::{
    extended_gcd, gcd, gcd_with_stats, resultant, solve_inequalities, solve_univariate, sylvester,
    Monomial, Poly, Relation, Root, Surd, SylvesterKind,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn upoly(coeffs: &[i64]) -> Poly {
    Poly::from_terms(
        coeffs
            .iter()
            .enumerate()
            .map(|(e, &c)| (Monomial::var(0, e as u32), Scalar::int(c))),
    )
}

fn random_upoly(rng: &mut StdRng, degs: std::ops::RangeInclusive<usize>, bound: i64) -> Poly {
    let deg = rng.random_range(degs);
    let mut c: Vec<i64> = (0..=deg)
        .map(|_| rng.random_range(-bound..=bound))
        .collect();
    if c[deg] == 0 {
        c[deg] = 1;
    }
    upoly(&c)
}

/// Dense coefficients over Q, lowest degree first.
fn dense(p: &Poly) -> Vec<Q> {
    let d = p.degree_in(0).unwrap_or(0) as usize;
    let mut v = vec![Q::zero(); d + 1];
    for (m, c) in p.terms() {
        v[m.exp(0) as usize] = c.as_rational().unwrap();
    }
    trim(v)
}

fn trim(mut v: Vec<Q>) -> Vec<Q> {
    while v.len() > 1 && v.last().unwrap().is_zero() {
        v.pop();
    }
    v
}

fn rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let k = r.len() - 1 - db;
        let f = r.last().unwrap() / b.last().unwrap();
        for (i, bi) in b.iter().enumerate() {
            r[i + k] = &r[i + k] - &f * bi;
        }
        r.pop();
        r = trim(r);
        if r.is_empty() {
            r.push(Q::zero());
        }
    }
    trim(r)
}

fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(|c| c.is_zero())
}

/// Monic Euclidean GCD over Q.
fn euclid_gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !is_zero_vec(&b) {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    let lc = a.last().unwrap().clone();
    a.iter().map(|c| c / &lc).collect()
}

fn int_content(p: &Poly) -> BigInt {
    use num_integer::Integer;
    p.coefficients()
        .fold(BigInt::zero(), |g, c| g.gcd(c.as_integer().unwrap()))
}

#[test]
fn gcd_matches_euclid_over_q() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..250 {
        let common = random_upoly(&mut rng, 0..=3, 6);
        let f = &random_upoly(&mut rng, 0..=5, 9) * &common;
        let g = &random_upoly(&mut rng, 0..=5, 9) * &common;
        let d = gcd(&f, &g).unwrap();
        let oracle = euclid_gcd(&dense(&f), &dense(&g));
        let dd = dense(&d);
        let lc = dd.last().unwrap().clone();
        let monic: Vec<Q> = dd.iter().map(|c| c / &lc).collect();
        assert_eq!(monic, oracle, "f={f:?} g={g:?}");
        use num_integer::Integer;
        let content = int_content(&f).gcd(&int_content(&g));
        assert_eq!(int_content(&d), content);
        assert!(f.exact_div(&d).is_some() && g.exact_div(&d).is_some());
    }
}

#[test]
fn extended_gcd_identity() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..100 {
        let common = random_upoly(&mut rng, 0..=2, 5);
        let f = &random_upoly(&mut rng, 1..=4, 7) * &common;
        let g = &random_upoly(&mut rng, 1..=4, 7) * &common;
        let (d, u, v) = extended_gcd(&f, &g).unwrap();
        assert_eq!(&(&u * &f) + &(&v * &g), d);
        assert_eq!(d, gcd(&f, &g).unwrap());
    }
}

#[test]
fn resultant_equals_sylvester_determinant() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..100 {
        let f = random_upoly(&mut rng, 1..=4, 6);
        let g = random_upoly(&mut rng, 1..=4, 6);
        let r = resultant(&f, &g, 0).unwrap();
        let s = sylvester(&f, &g, 0, SylvesterKind::First).unwrap();
        assert_eq!(determinant(&s).unwrap(), r);
    }
}

#[test]
fn second_kind_determinant_vanishes_with_resultant() {
    let mut rng = StdRng::seed_from_u64(5);
    let mut vanishing = 0;
    for i in 0..120 {
        let n = rng.random_range(1..=3);
        let mut f = random_upoly(&mut rng, n..=n, 5);
        let mut g = random_upoly(&mut rng, 1..=n, 5);
        if i % 3 == 0 {
            let c = random_upoly(&mut rng, 1..=1, 4);
            f = &f * &c;
            g = &g * &c;
        }
        let (f, g) = if f.degree_in(0) < g.degree_in(0) {
            (g, f)
        } else {
            (f, g)
        };
        let r = resultant(&f, &g, 0).unwrap();
        let s = sylvester(&f, &g, 0, SylvesterKind::Second).unwrap();
        let d = determinant(&s).unwrap();
        assert_eq!(r.is_zero(), d.is_zero(), "f={f:?} g={g:?}");
        vanishing += usize::from(r.is_zero());
    }
    assert!(vanishing >= 30);
}

/// Element `x + y√m` of `Q(√m)`.
#[derive(Clone)]
struct Quad {
    x: Q,
    y: Q,
}

impl Quad {
    fn mul(&self, o: &Quad, m: &Q) -> Quad {
        Quad {
            x: &self.x * &o.x + &self.y * &o.y * m,
            y: &self.x * &o.y + &self.y * &o.x,
        }
    }
    fn add(&self, o: &Quad) -> Quad {
        Quad {
            x: &self.x + &o.x,
            y: &self.y + &o.y,
        }
    }
    fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

fn horner(coeffs: &[Q], at: &Quad, m: &Q) -> Quad {
    coeffs
        .iter()
        .rev()
        .fold(Quad { x: q(0), y: q(0) }, |acc, c| {
            acc.mul(at, m).add(&Quad {
                x: c.clone(),
                y: q(0),
            })
        })
}

/// Exact substitution of a surd into a polynomial with rational coefficients.
fn substitutes_to_zero(f: &Poly, s: &Surd) -> bool {
    let c = dense(f);
    let m = Q::from_integer(s.m.clone());
    let inner = Quad {
        x: s.a.clone(),
        y: s.b.clone(),
    };
    match s.nested {
        None => horner(&c, &inner, &m).is_zero(),
        // f(r) = E(r²) + r·O(r²); r is irrational over Q(√m) for a reported
        // nested root, so both parts must vanish.
        Some(_) => {
            let even: Vec<Q> = c.iter().step_by(2).cloned().collect();
            let odd: Vec<Q> = c.iter().skip(1).step_by(2).cloned().collect();
            horner(&even, &inner, &m).is_zero()
                && (odd.is_empty() || horner(&odd, &inner, &m).is_zero())
        }
    }
}

#[test]
fn exact_roots_substitute_to_zero() {
    let mut rng = StdRng::seed_from_u64(13);
    let mut checked = 0;
    for i in 0..150 {
        let mut f = upoly(&[1]);
        for _ in 0..rng.random_range(0..=2) {
            f = &f * &upoly(&[rng.random_range(-6..=6), rng.random_range(1..=3)]);
        }
        match i % 3 {
            0 => f = &f * &upoly(&[rng.random_range(-9..=9), rng.random_range(-5..=5), 1]),
            1 => f = &f * &upoly(&[rng.random_range(-9..=9), 0, rng.random_range(-6..=6), 0, 1]),
            _ => {}
        }
        let set = match solve_univariate(&f, 0) {
            Ok(s) => s,
            Err(e) => panic!("{f:?}: {e}"),
        };
        for (r, _) in &set.roots {
            match r {
                Root::Exact(s) => assert!(substitutes_to_zero(&f, s), "{f:?} at {s:?}"),
                Root::Float(x) => panic!("float root {x} for exact input {f:?}"),
            }
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn numeric_roots_have_small_residuals() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..60 {
        let n = rng.random_range(1..=6);
        let mut f = Poly::constant(Scalar::F64(1.0));
        for _ in 0..n {
            let r: f64 = rng.random_range(-5.0..5.0);
            f = &f
                * &Poly::from_terms([
                    (Monomial::one(), Scalar::F64(-r)),
                    (Monomial::var(0, 1), Scalar::F64(1.0)),
                ]);
        }
        f = &f
            * &Poly::from_terms([
                (Monomial::one(), Scalar::F64(rng.random_range(0.5..4.0))),
                (Monomial::var(0, 2), Scalar::F64(1.0)),
            ]);
        let set = solve_univariate(&f, 0).unwrap();
        let total: u32 = set.roots.iter().map(|(_, k)| *k).sum();
        assert_eq!(total as usize, n);
        assert_eq!(set.complex_omitted, 2);
        let norm = f.max_norm();
        for (r, _) in &set.roots {
            let x = r.to_f64();
            let val = f.eval(&[Scalar::F64(x)]).to_f64();
            assert!(val.abs() < 1e-6 * norm, "residual {val} at {x}");
        }
    }
}

fn random_factor(rng: &mut StdRng) -> Poly {
    if rng.random_bool(0.5) {
        upoly(&[rng.random_range(-8..=8), rng.random_range(1..=3)])
    } else {
        upoly(&[rng.random_range(-9..=9), rng.random_range(-4..=4), 1])
    }
}

fn sign_at(p: &Poly, x: &Q) -> i32 {
    dense(p)
        .iter()
        .rev()
        .fold(q(0), |acc, c| acc * x + c)
        .signum()
        .to_string()
        .parse()
        .unwrap()
}

#[test]
fn inequality_membership_matches_direct_evaluation() {
    let mut rng = StdRng::seed_from_u64(19);
    let rels = [Relation::Lt, Relation::Le, Relation::Gt, Relation::Ge];
    for _ in 0..25 {
        let k = rng.random_range(1..=3);
        let mut cons = Vec::new();
        for _ in 0..k {
            let mut p = random_factor(&mut rng);
            if rng.random_bool(0.4) {
                p = &p * &random_factor(&mut rng);
            }
            cons.push((p, rels[rng.random_range(0..4)]));
        }
        let set = solve_inequalities(&cons).unwrap();
        let mut samples: Vec<Q> = (0..100)
            .map(|_| {
                Q::new(
                    rng.random_range(-400..=400).into(),
                    rng.random_range(1..=40).into(),
                )
            })
            .collect();
        // Include rational endpoints so closed/open ends are exercised.
        for d in -8..=8 {
            for n in 1..=3 {
                samples.push(Q::new(d.into(), n.into()));
            }
        }
        for x in &samples {
            let expected = cons.iter().all(|(p, r)| r.holds(sign_at(p, x)));
            assert_eq!(set.contains(x), expected, "x={x} cons={cons:?}");
        }
    }
}

#[test]
fn subresultant_growth_is_polynomial() {
    let mut rng = StdRng::seed_from_u64(23);
    let bound = 1i64 << 31;
    for _ in 0..3 {
        let f = random_upoly(&mut rng, 20..=20, bound);
        let g = random_upoly(&mut rng, 20..=20, bound);
        let input_bits = f.max_coeff_bits().max(g.max_coeff_bits());
        let start = Instant::now();
        let (d, stats) = gcd_with_stats(&f, &g).unwrap();
        let elapsed = start.elapsed();
        assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
        assert!(
            stats.max_bits < 50 * input_bits,
            "{} vs {}",
            stats.max_bits,
            input_bits
        );
        assert!(d.is_constant());
    }
}
