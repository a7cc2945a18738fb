use coeffforge::series::inverse_coeffs_closed;
use coeffforge::{BigRational, Complex, NormalizedSeries, Series};
use num_traits::{One, Zero};
use proptest::prelude::*;

type Q = BigRational;

fn rational() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn complex_rational() -> impl Strategy<Value = Complex<Q>> {
    (rational(), rational()).prop_map(|(re, im)| Complex::new(re, im))
}

fn exact_series(order: usize) -> impl Strategy<Value = Series<Q>> {
    prop::collection::vec(complex_rational(), order + 1).prop_map(|c| Series::new(c).unwrap())
}

fn normalized_exact() -> impl Strategy<Value = NormalizedSeries<Q>> {
    (2usize..=7).prop_flat_map(|n| {
        prop::collection::vec(complex_rational(), n - 1)
            .prop_map(move |tail| NormalizedSeries::from_tail(n, &tail).unwrap())
    })
}

fn unit_disk_point(bound: f64) -> impl Strategy<Value = Complex<f64>> {
    (0.0..=bound, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex::from_polar(r, t))
}

fn normalized_float(max_order: usize, bound: f64) -> impl Strategy<Value = NormalizedSeries<f64>> {
    (2usize..=max_order).prop_flat_map(move |n| {
        prop::collection::vec(unit_disk_point(bound), n - 1)
            .prop_map(move |tail| NormalizedSeries::from_tail(n, &tail).unwrap())
    })
}

fn max_norm(s: &Series<f64>) -> f64 {
    s.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_reversion_round_trip(f in normalized_exact()) {
        let g = f.revert();
        prop_assert!(f.composition_residual(&g).unwrap().is_zero());
        // g is also a left inverse.
        let g = NormalizedSeries::new(g.into_series()).unwrap();
        prop_assert!(g.composition_residual(f.series()).unwrap().is_zero());
    }

    #[test]
    fn closed_form_matches_reversion(f in normalized_exact()) {
        prop_assume!(f.order() >= 4);
        let g = f.revert();
        let (a2, a3, a4) = inverse_coeffs_closed(&f.coeff(2), &f.coeff(3), &f.coeff(4));
        prop_assert_eq!(a2, g.coeff(2));
        prop_assert_eq!(a3, g.coeff(3));
        prop_assert_eq!(a4, g.coeff(4));
    }

    /// The float residual stays at rounding level relative to the size of the
    /// inverse coefficients.
    #[test]
    fn float_reversion_residual_rounding_level(f in normalized_float(10, 10.0)) {
        let g = f.revert();
        let residual = f.composition_residual(&g).unwrap();
        let scale = max_norm(&g).max(1.0);
        prop_assert!(max_norm(&residual) <= 1e-12 * scale, "{} vs scale {}", max_norm(&residual), scale);
    }

    #[test]
    fn float_reversion_small_coefficients(f in normalized_float(6, 1.0)) {
        let g = f.revert();
        prop_assert!(max_norm(&f.composition_residual(&g).unwrap()) < 1e-12);
    }

    #[test]
    fn mode_agreement(f in normalized_float(6, 1.0)) {
        let exact = NormalizedSeries::new(Series::from_float(f.series()).unwrap()).unwrap();
        let from_exact = exact.revert().to_float();
        let float = f.revert();
        for (a, b) in from_exact.coeffs().iter().zip(float.coeffs()) {
            prop_assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn mul_commutative_associative(
        a in exact_series(5),
        b in exact_series(4),
        c in exact_series(6),
    ) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b).order(), 4);
    }

    #[test]
    fn reciprocal_two_sided(s in exact_series(6)) {
        prop_assume!(!s.coeff(0).is_zero());
        let r = s.reciprocal().unwrap();
        prop_assert_eq!(s.mul(&r), Series::one(6));
        prop_assert_eq!(r.mul(&s), Series::one(6));
    }

    #[test]
    fn derivative_linear_and_leibniz(a in exact_series(6), b in exact_series(6), k in complex_rational()) {
        let lhs = a.add(&b.scale(&k)).derivative().unwrap();
        let rhs = a.derivative().unwrap().add(&b.derivative().unwrap().scale(&k));
        prop_assert_eq!(lhs, rhs);
        let product = a.mul(&b).derivative().unwrap();
        let leibniz = a.derivative().unwrap().mul(&b).add(&a.mul(&b.derivative().unwrap()));
        prop_assert_eq!(product, leibniz);
    }

    #[test]
    fn compose_associative(a in exact_series(4), b in normalized_exact(), c in normalized_exact()) {
        let left = a.compose(&b.compose(c.series()).unwrap()).unwrap();
        let right = a.compose(b.series()).unwrap().compose(c.series()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn float_matches_exact_product(a in exact_series(6), b in exact_series(6)) {
        let exact = a.mul(&b).to_float();
        let float = a.to_float().mul(&b.to_float());
        for (x, y) in exact.coeffs().iter().zip(float.coeffs()) {
            prop_assert!((x - y).norm() <= 1e-12 * x.norm().max(1.0));
        }
    }
}

#[test]
fn one_is_neutral() {
    let s = Series::new(vec![Complex::new(Q::one(), Q::zero()); 4]).unwrap();
    assert_eq!(s.mul(&Series::one(4)), s);
}
