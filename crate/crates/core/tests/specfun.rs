mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use common::order;
use proptest::prelude::*;
use qpfb::{bessel_j, c_gamma, gamma_fn, normalized_bessel, Order};

/// Unevaluated sum hi + lo carrying about 32 significant digits.
#[derive(Clone, Copy, Debug)]
struct Dd(f64, f64);

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd(s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd(s, b - (s - a))
}

impl Dd {
    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.0, o.0);
        let t = two_sum(self.1, o.1);
        let s = quick_two_sum(s.0, s.1 + t.0);
        quick_two_sum(s.0, s.1 + t.1)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let err = self.0.mul_add(o.0, -p);
        quick_two_sum(p, err + self.0 * o.1 + self.1 * o.0)
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.0 / o.0;
        let r = self.add(o.mul(Dd(-q1, 0.0)));
        let q2 = r.0 / o.0;
        let r = r.add(o.mul(Dd(-q2, 0.0)));
        let q3 = r.0 / o.0;
        quick_two_sum(q1, q2).add(Dd(q3, 0.0))
    }
}

/// j_γ(x) = Σ (-x²/4)ⁿ Γ(γ+1) / (n! Γ(n+γ+1)) summed in double-double.
fn dd_series(gamma: f64, x: f64) -> f64 {
    let x2 = Dd(x, 0.0).mul(Dd(x, 0.0));
    let q = Dd(-0.25 * x2.0, -0.25 * x2.1);
    let mut term = Dd(1.0, 0.0);
    let mut sum = term;
    for n in 1..400 {
        let nf = n as f64;
        let denom = two_sum(nf, gamma).mul(Dd(nf, 0.0));
        term = term.mul(q).div(denom);
        sum = sum.add(term);
        if term.0.abs() < 1e-34 * sum.0.abs().max(1e-300) && nf > x {
            break;
        }
    }
    sum.0 + sum.1
}

fn j(g: f64, x: f64) -> f64 {
    normalized_bessel(order(g), x).unwrap()
}

#[test]
fn gamma_examples() {
    assert_relative_eq!(gamma_fn(1.0).unwrap(), 1.0, max_relative = 1e-13);
    assert_relative_eq!(gamma_fn(5.0).unwrap(), 24.0, max_relative = 1e-13);
    assert_relative_eq!(gamma_fn(0.5).unwrap(), PI.sqrt(), max_relative = 1e-13);
}

#[test]
fn gamma_reference_values() {
    let table = [
        (0.25, 3.625_609_908_221_908_3),
        (1.0 / 3.0, 2.678_938_534_707_747_6),
        (1.5, 0.886_226_925_452_758),
        (3.5, 3.323_350_970_447_842_6),
        (10.0, 362_880.0),
        (20.5, 5.406_242_982_335_075e17),
        (50.0, 6.082_818_640_342_675e62),
    ];
    for (x, want) in table {
        let got = gamma_fn(x).unwrap();
        assert!(
            ((got - want) / want).abs() < 1e-13,
            "gamma({x}) = {got}, want {want}"
        );
    }
}

#[test]
fn gamma_rejects_nonpositive() {
    for x in [0.0, -1.0, -0.5, f64::NAN, f64::INFINITY] {
        assert!(gamma_fn(x).is_err(), "{x}");
    }
}

#[test]
fn c_gamma_examples() {
    assert_relative_eq!(c_gamma(order(0.0)), 1.0, max_relative = 1e-13);
    assert_relative_eq!(c_gamma(order(0.5)), (2.0 / PI).sqrt(), max_relative = 1e-13);
    assert_relative_eq!(c_gamma(order(1.0)), 0.5, max_relative = 1e-13);
}

#[test]
fn order_validation() {
    assert!(Order::new(-0.5).is_err());
    assert!(Order::new(-1.0).is_err());
    assert!(Order::new(f64::NAN).is_err());
    assert!(Order::new(-0.49).is_ok());
}

#[test]
fn bessel_examples() {
    assert_eq!(j(0.3, 0.0), 1.0);
    assert!(j(0.5, PI).abs() < 1e-10);
    assert!(j(0.0, 2.404_825_557_695_773).abs() < 1e-9);
}

#[test]
fn first_zero_of_j0_located_on_the_oracle() {
    let (mut lo, mut hi) = (2.0, 3.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if dd_series(0.0, lo) * dd_series(0.0, mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let zero = 0.5 * (lo + hi);
    assert!((zero - 2.404_825_557_695_773).abs() < 1e-12);
    assert!(j(0.0, zero).abs() < 1e-9);
}

#[test]
fn matches_double_double_series() {
    for g in [-0.45, -0.3, 0.0, 0.25, 0.5, 1.0, 1.7, 3.0, 5.5] {
        let mut worst: f64 = 0.0;
        for k in 1..=1000 {
            let x = 0.05 * k as f64;
            worst = worst.max((j(g, x) - dd_series(g, x)).abs());
        }
        assert!(worst < 1e-10, "gamma {g}: max error {worst:.3e}");
    }
}

#[test]
fn unnormalized_matches_series() {
    // Γ(ν+1) for the orders used
    let table = [
        (0.0, 1.0),
        (0.5, 0.5 * PI.sqrt()),
        (1.0, 1.0),
        (2.5, 3.323_350_970_447_842_6),
    ];
    for (nu, gamma_p1) in table {
        for k in 1..=500 {
            let x = 0.1 * k as f64;
            let want = dd_series(nu, x) * (0.5 * x).powf(nu) / gamma_p1;
            let got = bessel_j(nu, x).unwrap();
            assert!(
                (got - want).abs() < 1e-10,
                "J_{nu}({x}) = {got}, want {want}"
            );
        }
    }
}

#[test]
fn half_integer_closed_forms_to_200() {
    for k in 1..=4000 {
        let x = 0.05 * k as f64;
        let (s, c) = x.sin_cos();
        let j12 = s / x;
        let j32 = 3.0 * (s - x * c) / (x * x * x);
        assert!((j(0.5, x) - j12).abs() < 1e-10, "x = {x}");
        assert!((j(1.5, x) - j32).abs() < 1e-10, "x = {x}");
    }
}

#[test]
fn non_finite_argument_rejected() {
    assert!(normalized_bessel(order(0.0), f64::NAN).is_err());
    assert!(normalized_bessel(order(0.0), f64::INFINITY).is_err());
    assert!(bessel_j(-1.0, 1.0).is_err());
    assert!(bessel_j(0.0, -1.0).is_err());
}

proptest! {
    #[test]
    fn bounded_by_one(g in -0.49f64..3.0, x in -100.0f64..100.0) {
        prop_assert!(j(g, x).abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn even(g in -0.49f64..3.0, x in 0.0f64..200.0) {
        prop_assert_eq!(j(g, x), j(g, -x));
    }

    #[test]
    fn one_at_origin(g in -0.49f64..10.0) {
        prop_assert_eq!(j(g, 0.0), 1.0);
    }

    #[test]
    fn gamma_recurrence(x in 0.5f64..49.0) {
        let lhs = gamma_fn(x + 1.0).unwrap();
        let rhs = x * gamma_fn(x).unwrap();
        prop_assert!(((lhs - rhs) / lhs).abs() < 1e-13);
    }

    #[test]
    fn c_gamma_definition(g in -0.49f64..5.0) {
        let want = 1.0 / (2f64.powf(g) * gamma_fn(g + 1.0).unwrap());
        prop_assert!((c_gamma(order(g)) - want).abs() < 1e-14 * want);
    }
}
