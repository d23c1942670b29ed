use std::time::Instant;

use mathpar::arith::{ModInt, Scalar};
use mathpar::decomp::{
    bruhat, cholesky, lsu, lsuwmdet, pseudo_inverse, qr, strassen_winograd, svd, LsuWm,
};
use mathpar::matrix::{determinant, rank, Entry, Matrix};
use mathpar::poly::{Frac, Monomial, Poly};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn int_matrix(rng: &mut StdRng, r: usize, c: usize) -> Matrix<Scalar> {
    Matrix::from_fn(r, c, |_, _| Scalar::int(rng.random_range(-9..=9)))
}

/// Random integer matrix, rank-deficient about a third of the time.
fn test_matrix(rng: &mut StdRng, square: bool) -> Matrix<Scalar> {
    let r = rng.random_range(1..=6);
    let c = if square { r } else { rng.random_range(1..=6) };
    if rng.random_range(0..3) == 0 && r.min(c) > 1 {
        let k = rng.random_range(1..r.min(c));
        let b = Matrix::from_fn(r, k, |_, _| Scalar::int(rng.random_range(-3..=3)));
        let d = Matrix::from_fn(k, c, |_, _| Scalar::int(rng.random_range(-3..=3)));
        b.mul(&d).unwrap()
    } else {
        int_matrix(rng, r, c)
    }
}

fn is_integral(a: &Matrix<Scalar>) -> bool {
    a.entries().all(|x| x.as_integer().is_some())
}

fn check_lsu<T, F>(a: &Matrix<T>)
where
    T: mathpar::arith::ExactDiv,
    F: Entry + From<T>,
{
    let f = lsu(a);
    assert!(f.l.is_lower_triangular() && f.u.is_upper_triangular());
    let lift = |m: &Matrix<T>| m.map(|x| F::from(x.clone()));
    let s: Matrix<F> = f.s.to_matrix();
    let prod = lift(&f.l).mul(&s).unwrap().mul(&lift(&f.u)).unwrap();
    assert_eq!(prod, lift(a));
}

fn check_bruhat<T, F>(a: &Matrix<T>)
where
    T: mathpar::arith::ExactDiv,
    F: Entry + From<T>,
{
    let b = bruhat(a).unwrap();
    assert!(b.v.is_upper_triangular() && b.u.is_upper_triangular());
    let lift = |m: &Matrix<T>| m.map(|x| F::from(x.clone()));
    let d: Matrix<F> = b.d.to_matrix();
    let prod = lift(&b.v).mul(&d).unwrap().mul(&lift(&b.u)).unwrap();
    assert_eq!(prod, lift(a));
}

#[test]
fn lsu_and_bruhat_reconstruct_over_z_q_and_zp() {
    let mut rng = StdRng::seed_from_u64(31);
    for _ in 0..150 {
        let a = test_matrix(&mut rng, false);
        check_lsu::<Scalar, Scalar>(&a);
        let f = lsu(&a);
        assert!(is_integral(&f.l) && is_integral(&f.u));
        assert_eq!(f.pivots.len(), rank(&a));
        if a.is_square() && f.pivots.len() == a.rows() {
            assert!(is_integral(&f.s.pseudo_inverse()));
            // The last pivot is the determinant with columns in pivot order.
            let cols: Vec<usize> = f.pivots.iter().map(|p| p.1).collect();
            assert_eq!(f.det, determinant(&a.select_columns(&cols)).unwrap());
        }

        let sq = test_matrix(&mut rng, true);
        check_bruhat::<Scalar, Scalar>(&sq);
        let b = bruhat(&sq).unwrap();
        assert!(is_integral(&b.v) && is_integral(&b.u) && is_integral(&b.d.pseudo_inverse()));

        let q = a.map(|x| x.clone() * Scalar::ratio(1, rng.random_range(1..=5)).unwrap());
        check_lsu::<Scalar, Scalar>(&q);

        for p in [7u64, 268435399] {
            let m = a.map(|x| Scalar::Mod(ModInt::new(x.to_f64() as i128, p)));
            check_lsu::<Scalar, Scalar>(&m);
            let ms = sq.map(|x| Scalar::Mod(ModInt::new(x.to_f64() as i128, p)));
            check_bruhat::<Scalar, Scalar>(&ms);
        }
    }
}

fn random_poly(rng: &mut StdRng) -> Poly {
    let terms = rng.random_range(0..=2);
    Poly::from_terms((0..terms).map(|_| {
        let e = vec![rng.random_range(0..=1), rng.random_range(0..=1)];
        (
            Monomial::from_exps(e),
            Scalar::int(rng.random_range(-9..=9)),
        )
    }))
}

#[test]
fn lsu_and_bruhat_reconstruct_over_polynomials() {
    let mut rng = StdRng::seed_from_u64(37);
    for _ in 0..25 {
        let n = rng.random_range(1..=3);
        let c = rng.random_range(1..=3);
        let a = Matrix::from_fn(n, c, |_, _| random_poly(&mut rng));
        check_lsu::<Poly, Frac>(&a);
        let sq = Matrix::from_fn(n, n, |_, _| random_poly(&mut rng));
        check_bruhat::<Poly, Frac>(&sq);
    }
}

#[test]
fn lsuwmdet_is_consistent_with_lsu() {
    let mut rng = StdRng::seed_from_u64(41);
    for _ in 0..150 {
        let a = test_matrix(&mut rng, false);
        let r: LsuWm<Scalar, Scalar> = lsuwmdet(&a);
        assert_eq!(r.lsu, lsu(&a));
        let rows: Vec<usize> = r.lsu.pivots.iter().map(|p| p.0).collect();
        let cols: Vec<usize> = r.lsu.pivots.iter().map(|p| p.1).collect();
        let block = a.select_rows(&rows).select_columns(&cols);
        assert_eq!(r.det(), &determinant(&block).unwrap());
        assert_eq!(rows.len(), rank(&a));
        let s: Matrix<Scalar> = r.lsu.s.to_matrix();
        assert!(r.w.mul(&s).unwrap().is_upper_triangular());
        assert!(s.mul(&r.m).unwrap().is_lower_triangular());
        let d2 = r.det().clone() * r.det().clone();
        let wsm = r.w.mul(&s).unwrap().mul(&r.m).unwrap();
        let g: Matrix<Scalar> = pseudo_inverse(&a);
        assert_eq!(wsm, g.scale(&d2));
        if a.is_square() && rows.len() == a.rows() {
            assert!(is_integral(&r.w) && is_integral(&r.m), "{a:?}");
        }
    }
}

#[test]
fn pseudo_inverse_satisfies_both_axioms() {
    let mut rng = StdRng::seed_from_u64(43);
    for _ in 0..150 {
        let a = test_matrix(&mut rng, false);
        let g: Matrix<Scalar> = pseudo_inverse(&a);
        assert_eq!(a.mul(&g).unwrap().mul(&a).unwrap(), a);
        assert_eq!(g.mul(&a).unwrap().mul(&g).unwrap(), g);
    }
}

fn max_diff(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
    a.entries()
        .zip(b.entries())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn max_abs(a: &Matrix<f64>) -> f64 {
    a.entries().fold(0.0, |m, x| m.max(x.abs()))
}

fn float_matrix(rng: &mut StdRng, r: usize, c: usize) -> Matrix<f64> {
    Matrix::from_fn(r, c, |_, _| rng.random_range(-1.0..1.0))
}

#[test]
fn qr_on_random_power_of_two_orders() {
    let mut rng = StdRng::seed_from_u64(47);
    for n in [1, 2, 4, 8, 16, 32] {
        let a = float_matrix(&mut rng, n, n);
        let f = qr(&a).unwrap();
        assert!(f.r.is_upper_triangular());
        assert!(max_diff(&f.q.mul(&f.r).unwrap(), &a) < 1e-10 * max_abs(&a));
        let qtq = f.q.transpose().mul(&f.q).unwrap();
        assert!(max_diff(&qtq, &Matrix::identity(n)) < 1e-10);
    }
}

#[test]
fn svd_on_random_matrices() {
    let mut rng = StdRng::seed_from_u64(53);
    for _ in 0..30 {
        let (r, c) = (rng.random_range(1..=7), rng.random_range(1..=7));
        let a = float_matrix(&mut rng, r, c);
        let f = svd(&a);
        assert!(max_diff(&f.u.mul(&f.d).unwrap().mul(&f.v).unwrap(), &a) < 1e-8);
        assert!(max_diff(&f.u.transpose().mul(&f.u).unwrap(), &Matrix::identity(r)) < 1e-8);
        assert!(max_diff(&f.v.transpose().mul(&f.v).unwrap(), &Matrix::identity(c)) < 1e-8);
        let sv = f.singular_values();
        assert!(sv.windows(2).all(|w| w[0] >= w[1]));
        assert!((0..r).all(|i| (0..c).all(|j| i == j || f.d[(i, j)] == 0.0)));
    }
}

fn spd(rng: &mut StdRng, n: usize) -> Matrix<f64> {
    let g = float_matrix(rng, n, n);
    g.mul(&g.transpose())
        .unwrap()
        .add(&Matrix::<f64>::identity(n).scale(&(n as f64)))
        .unwrap()
}

#[test]
fn cholesky_fast_and_standard_agree() {
    let mut rng = StdRng::seed_from_u64(59);
    let a = spd(&mut rng, 128);
    let start = Instant::now();
    let std = cholesky(&a, false).unwrap();
    let fast = cholesky(&a, true).unwrap();
    assert!(start.elapsed().as_secs_f64() < 5.0);
    assert!(max_diff(&std.l, &fast.l) < 1e-8);
    for f in [&std, &fast] {
        assert!(f.l.is_lower_triangular() && f.s.is_lower_triangular());
        let llt = f.l.mul(&f.l.transpose()).unwrap();
        assert!(max_diff(&llt, &a) < 1e-9 * max_abs(&a));
        assert!(max_diff(&f.s.mul(&f.l).unwrap(), &Matrix::identity(128)) < 1e-9);
    }
    for n in [1, 3, 5, 9] {
        let a = spd(&mut rng, n);
        let f = cholesky(&a, false).unwrap();
        assert!(max_diff(&f.l.mul(&f.l.transpose()).unwrap(), &a) < 1e-9 * max_abs(&a));
    }
}

#[test]
fn strassen_winograd_matches_classical() {
    let mut rng = StdRng::seed_from_u64(61);
    let a = int_matrix(&mut rng, 64, 64);
    let b = int_matrix(&mut rng, 64, 64);
    assert_eq!(strassen_winograd(&a, &b).unwrap(), a.mul(&b).unwrap());
    let a = float_matrix(&mut rng, 256, 256);
    let b = float_matrix(&mut rng, 256, 256);
    let fast = strassen_winograd(&a, &b).unwrap();
    let classical = a.mul(&b).unwrap();
    assert!(max_diff(&fast, &classical) < 1e-9 * max_abs(&classical));
}
