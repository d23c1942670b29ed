use mathpar::means::{agm, elliptic_e, elliptic_k, ghm, magm, KMethod};
use proptest::prelude::*;

proptest! {
    #[test]
    fn agm_ghm_product_identity(x in 1e-3f64..1e3, y in 1e-3f64..1e3) {
        let a = agm(&x, &y, 8).unwrap();
        let g = ghm(&x, &y, 8).unwrap();
        prop_assert!((a * g - x * y).abs() <= 1e-10 * x * y);
    }

    #[test]
    fn means_are_bracketed(x in 1e-3f64..1e3, y in 1e-3f64..1e3) {
        let lo = x.min(y);
        let hi = x.max(y);
        let slack = 1e-12 * hi;
        let a = agm(&x, &y, 8).unwrap();
        let g = ghm(&x, &y, 8).unwrap();
        prop_assert!(a >= lo - slack && a <= hi + slack);
        prop_assert!(g >= lo - slack && g <= hi + slack);
        prop_assert!(g <= a + slack);
        prop_assert!(a >= (x * y).sqrt() - slack);
    }

    #[test]
    fn means_are_symmetric(x in 1e-3f64..1e3, y in 1e-3f64..1e3) {
        let tol = 1e-10 * x.max(y);
        prop_assert!((agm(&x, &y, 10).unwrap() - agm(&y, &x, 10).unwrap()).abs() <= tol);
        prop_assert!((ghm(&x, &y, 10).unwrap() - ghm(&y, &x, 10).unwrap()).abs() <= tol);
        prop_assert!((magm(&x, &y, 10).unwrap() - magm(&y, &x, 10).unwrap()).abs() <= tol);
    }

    #[test]
    fn magm_is_at_least_agm(x in 1e-2f64..1e2, y in 1e-2f64..1e2) {
        let a = agm(&x, &y, 8).unwrap();
        let m = magm(&x, &y, 8).unwrap();
        prop_assert!(m >= a - 1e-9 * a);
    }

    #[test]
    fn elliptic_k_methods_agree(k in 0.0f64..0.99) {
        let a = elliptic_k(&k, KMethod::Agm, 10).unwrap();
        let g = elliptic_k(&k, KMethod::Ghm, 10).unwrap();
        prop_assert!((a - g).abs() <= 1e-9 * a);
    }

    #[test]
    fn elliptic_e_bounds(k in 0.0f64..0.999) {
        let e = elliptic_e(&k, 10).unwrap();
        prop_assert!((1.0 - 1e-9..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&e));
    }
}
