use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use tarskikit::exactring::{Mat3E, RingScalar, Vec3E};
use tarskikit::rotact::{letter_matrix, word_matrix};
use tarskikit::freegroup::{Letter, Word};

fn scalar() -> impl Strategy<Value = RingScalar> {
    (-50i64..50, -50i64..50, 0u32..4, 0u32..4).prop_map(|(p, q, a, b)| RingScalar::new(p, q, a, b))
}

/// Compares rational `x` with `q√2` by signs, then by squares.
fn cmp_sqrt2(x: &BigRational, q: &BigInt) -> Ordering {
    let sx = x.signum().to_integer();
    let sq = q.signum();
    if sx != sq || sq.is_zero() {
        return sx.cmp(&sq);
    }
    let lhs = x * x;
    let rhs = BigRational::from_integer(q * q * 2);
    if sx.is_positive() { lhs.cmp(&rhs) } else { rhs.cmp(&lhs) }
}

/// `|decimal − v| ≤ ½·10^{−digits}` for `v = (p + q√2)/D`, checked with
/// rational bounds on `q√2`.
fn decimal_agrees(v: &RingScalar, digits: u32) -> bool {
    let dec: BigRational = {
        let s = v.to_decimal(digits);
        let neg = s.starts_with('-');
        let body = s.trim_start_matches('-').replace('.', "");
        let n: BigInt = body.parse().unwrap();
        let r = BigRational::new(n, num_traits::pow(BigInt::from(10), digits as usize));
        if neg { -r } else { r }
    };
    let eps = BigRational::new(1.into(), BigInt::from(2) * num_traits::pow(BigInt::from(10), digits as usize));
    let (p, q, _, _) = v.parts();
    let d = BigRational::from_integer(v.denominator());
    let p = BigRational::from_integer(p.clone());
    let lo = (&dec - &eps) * &d - &p;
    let hi = (&dec + &eps) * &d - &p;
    cmp_sqrt2(&lo, q) != Ordering::Greater && cmp_sqrt2(&hi, q) != Ordering::Less
}

proptest! {
    #[test]
    fn ring_laws(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x - &x), &RingScalar::zero());
    }

    #[test]
    fn order_matches_floats(x in scalar(), y in scalar()) {
        let (fx, fy) = (x.to_f64(), y.to_f64());
        if (fx - fy).abs() > 1e-9 {
            prop_assert_eq!(x.cmp_value(&y), fx.partial_cmp(&fy).unwrap());
        }
    }

    #[test]
    fn cross_is_orthogonal(a in (scalar(), scalar(), scalar()), b in (scalar(), scalar(), scalar())) {
        let u = Vec3E::new(a.0, a.1, a.2);
        let v = Vec3E::new(b.0, b.1, b.2);
        let w = u.cross(&v);
        prop_assert!(w.dot(&u).is_zero());
        prop_assert!(w.dot(&v).is_zero());
    }

    #[test]
    fn word_matrices_are_rotations(s in "[sStT]{0,6}") {
        let w = Word::parse(if s.is_empty() { "e" } else { &s }).unwrap();
        let m = word_matrix(&w);
        prop_assert!(m.is_rotation());
        prop_assert_eq!(m.mul(&word_matrix(&w.inverse())), Mat3E::identity());
    }
}

#[test]
fn decimals_within_half_ulp() {
    let samples = [
        RingScalar::sqrt2(),
        RingScalar::new(1, 2, 0, 1),
        RingScalar::new(-7, 3, 2, 3),
        RingScalar::new(5, -4, 1, 0),
        RingScalar::new(0, -1, 0, 2),
    ];
    for v in samples {
        for digits in [0, 3, 12, 30] {
            assert!(decimal_agrees(&v, digits), "{v:?} at {digits}: {}", v.to_decimal(digits));
        }
    }
}

#[test]
fn generator_matrices() {
    let third = |p: i64, q: i64| RingScalar::new(p, q, 0, 1);
    let phi = letter_matrix(Letter::SIGMA);
    assert_eq!(phi.get(0, 0), &third(1, 0));
    assert_eq!(phi.get(0, 1), &third(0, -2));
    assert_eq!(phi.get(1, 0), &third(0, 2));
    assert_eq!(phi.get(2, 2), &RingScalar::one());
    let rho = letter_matrix(Letter::TAU);
    assert_eq!(rho.get(0, 0), &RingScalar::one());
    assert_eq!(rho.get(1, 2), &third(0, -2));
    assert_eq!(rho.get(2, 1), &third(0, 2));
}
