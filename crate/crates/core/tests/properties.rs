use binomial_moments::exact::{binomial_int, bracket, falling, rising, Rational};
use binomial_moments::moments::power_expansion_residual;
use binomial_moments::series::{poly_interpolate, Polynomial, TruncatedSeries};
use binomial_moments::sigma::{sigma_poly, sigma_series, SigmaQuery};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=20).prop_map(|(p, q)| Rational::frac(p, q))
}

fn series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(rational(), order + 1)
        .prop_map(move |c| TruncatedSeries::from_coeffs(c, order))
}

proptest! {
    #[test]
    fn display_parse_round_trip(x in rational()) {
        prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
    }

    #[test]
    fn bracket_symmetry(a in 0i64..40, b in 0i64..40) {
        prop_assume!(b <= a);
        prop_assert_eq!(bracket(a, b).unwrap(), bracket(a, a - b).unwrap());
    }

    #[test]
    fn rising_shift(x in rational(), n in 0i64..12) {
        let next = rising(&x, n + 1).unwrap();
        prop_assert_eq!(next, rising(&x, n).unwrap() * (&x + n));
    }

    #[test]
    fn rising_negative_index_inverts(x in rational(), k in 1i64..8) {
        if let Ok(inv) = rising(&x, -k) {
            prop_assert_eq!(inv * rising(&(&x - k), k).unwrap(), Rational::one());
        }
    }

    #[test]
    fn falling_is_reflected_rising(x in rational(), n in 0i64..12) {
        let lhs = falling(&x, n).unwrap();
        prop_assert_eq!(&lhs, &(Rational::sign_power(n) * rising(&-&x, n).unwrap()));
        prop_assert_eq!(lhs, rising(&(&x - n + 1), n).unwrap());
    }

    #[test]
    fn integer_binomial_matches_factorials(n in 0i64..30, k in 0i64..30) {
        prop_assume!(k <= n);
        let x = Rational::from(n);
        let expect = falling(&x, k).unwrap() / falling(&Rational::from(k), k).unwrap();
        prop_assert_eq!(binomial_int(n, k), expect);
    }

    #[test]
    fn series_ring_axioms(a in series(6), b in series(6), c in series(6)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(&ab, &b.mul(&a).unwrap());
        prop_assert_eq!(ab.mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        prop_assert_eq!(left, ab.add(&a.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&TruncatedSeries::one(6)).unwrap(), a);
    }

    #[test]
    fn geometric_inverts_one_minus(c in rational()) {
        let one_minus = TruncatedSeries::from_coeffs(vec![Rational::one(), -&c], 8);
        prop_assert_eq!(TruncatedSeries::geometric(&c, 8).mul(&one_minus).unwrap(), TruncatedSeries::one(8));
    }

    #[test]
    fn interpolation_is_exact(coeffs in prop::collection::vec(rational(), 1..7), extra in 0usize..4) {
        let p = Polynomial::new(coeffs.clone());
        let bound = coeffs.len() - 1;
        let points: Vec<(Rational, Rational)> = (0..=(bound + extra) as i64)
            .map(|i| {
                let x = Rational::frac(2 * i - 3, 3);
                let y = p.eval(&x);
                (x, y)
            })
            .collect();
        prop_assert_eq!(poly_interpolate(&points, bound).unwrap(), p);
    }

    #[test]
    fn sigma_polynomial_matches_series(m in 0usize..6, l in 0usize..6, y in rational()) {
        prop_assume!(l <= m);
        let p = sigma_poly(m, l).unwrap();
        let direct = sigma_series(&SigmaQuery::new(m, l, y.clone()).unwrap()).unwrap();
        prop_assert_eq!(p.eval(&y), direct);
    }

    #[test]
    fn power_expansion_vanishes(m in 0usize..7, x in rational(), y in rational()) {
        prop_assert!(power_expansion_residual(m, &x, &y).is_zero());
    }
}
