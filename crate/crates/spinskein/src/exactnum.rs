//! Exact arithmetic in the quadratic extension Q(sqrt n).
//!
//! A [`Scalar`] is `a + b*sqrt(n)` with rational `a`, `b` and a fixed
//! positive integer `n` shared by every value of one session.  When `n`
//! is a perfect square the canonical form folds `b*sqrt(n)` into the
//! rational part, so structural equality of canonical forms decides
//! equality of values for every `n`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::{Error, Result};

/// Rational coefficients, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Integer square root; returns `Some(r)` iff `m == r*r`.
pub fn perfect_sqrt(m: u32) -> Option<u32> {
    let r = (m as f64).sqrt().round() as u32;
    for c in r.saturating_sub(1)..=r.saturating_add(1) {
        if c as u64 * c as u64 == m as u64 {
            return Some(c);
        }
    }
    None
}

/// An element `a + b*sqrt(n)` of Q(sqrt n).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    n: u32,
    a: Rational,
    b: Rational,
}

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

impl Scalar {
    /// Canonical `a + b*sqrt(n)`.  Panics if `n == 0`.
    pub fn new(n: u32, a: Rational, b: Rational) -> Self {
        assert!(n > 0, "the spin count n must be positive");
        match perfect_sqrt(n) {
            // sqrt(n) is rational: fold it into the a-part
            Some(r) => Scalar {
                n,
                a: a + b * Rational::from(BigInt::from(r)),
                b: Rational::zero(),
            },
            None => Scalar { n, a, b },
        }
    }

    pub fn zero(n: u32) -> Self {
        Self::new(n, Rational::zero(), Rational::zero())
    }

    pub fn one(n: u32) -> Self {
        Self::new(n, Rational::one(), Rational::zero())
    }

    pub fn from_int(n: u32, v: i64) -> Self {
        Self::new(n, rat(v, 1), Rational::zero())
    }

    pub fn rational(n: u32, p: i64, q: i64) -> Self {
        Self::new(n, rat(p, q), Rational::zero())
    }

    pub fn sqrt_n(n: u32) -> Self {
        Self::new(n, Rational::zero(), Rational::one())
    }

    /// `(sqrt n)^e` exactly, for any integer `e` (negative allowed):
    /// even `e` gives the rational `n^(e/2)`, odd `e` gives
    /// `n^((e-1)/2) * sqrt(n)`.
    pub fn sqrtn_pow(n: u32, e: i64) -> Self {
        assert!(n > 0, "the spin count n must be positive");
        let half = e.div_euclid(2);
        let odd = e.rem_euclid(2) == 1;
        let n_big = BigInt::from(n);
        let pow = if half >= 0 {
            Rational::from(n_big.pow(half as u32))
        } else {
            Rational::new(BigInt::one(), n_big.pow((-half) as u32))
        };
        if odd {
            Self::new(n, Rational::zero(), pow)
        } else {
            Self::new(n, pow, Rational::zero())
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn sqrt_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// Exact sign test for the real number `a + b*sqrt(n)`.
    pub fn is_positive(&self) -> bool {
        let (pa, pb) = (self.a.is_positive(), self.b.is_positive());
        if self.b.is_zero() {
            return pa;
        }
        if self.a.is_zero() {
            return pb;
        }
        let a2 = &self.a * &self.a;
        let nb2 = &self.b * &self.b * Rational::from(BigInt::from(self.n));
        match (pa, pb) {
            (true, true) => true,
            (false, false) => false,
            // a > 0 > b: positive iff a^2 > n b^2
            (true, false) => a2 > nb2,
            // b > 0 > a: positive iff n b^2 > a^2
            (false, true) => nb2 > a2,
        }
    }

    /// Multiplicative inverse: `(a - b*sqrt(n)) / (a^2 - n b^2)`.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = &self.a * &self.a - &self.b * &self.b * Rational::from(BigInt::from(self.n));
        // d = 0 with self != 0 would mean sqrt(n) rational and not folded
        assert!(!d.is_zero(), "norm vanished on a canonical nonzero scalar");
        Ok(Scalar::new(self.n, &self.a / &d, -&self.b / &d))
    }

    pub fn scale_rational(&self, r: &Rational) -> Scalar {
        Scalar::new(self.n, &self.a * r, &self.b * r)
    }

    fn check_same_n(&self, other: &Scalar) {
        assert_eq!(
            self.n, other.n,
            "configuration error: scalars over different n ({} vs {})",
            self.n, other.n
        );
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.check_same_n(&rhs);
        Scalar::new(self.n, self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self.check_same_n(&rhs);
        Scalar::new(self.n, self.a - rhs.a, self.b - rhs.b)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.check_same_n(&rhs);
        // (a1 + b1 s)(a2 + b2 s) with s^2 = n
        let n_rat = Rational::from(BigInt::from(self.n));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * n_rat;
        let b = &self.a * &rhs.b + &rhs.a * &self.b;
        Scalar::new(self.n, a, b)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(self.n, -self.a, -self.b)
    }
}

impl<'a> Add<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.clone() + rhs.clone()
    }
}

impl<'a> Mul<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.clone() * rhs.clone()
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = self.clone() + rhs;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self = self.clone() - rhs;
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = self.clone() * rhs;
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    /// Renders as `p/q + r/s*sqrt(n)` with lowest-terms rationals and
    /// omitted zero parts; this exact form is the CLI output format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let sqrt_term = |b: &Rational| {
            if b.is_one() {
                "sqrt(n)".to_string()
            } else {
                format!("{}*sqrt(n)", fmt_rational(b))
            }
        };
        if self.b.is_zero() {
            write!(f, "{}", fmt_rational(&self.a))
        } else if self.a.is_zero() {
            if self.b.is_negative() && (-&self.b).is_one() {
                write!(f, "-sqrt(n)")
            } else {
                write!(f, "{}", sqrt_term(&self.b))
            }
        } else if self.b.is_negative() {
            write!(f, "{} - {}", fmt_rational(&self.a), sqrt_term(&-&self.b))
        } else {
            write!(f, "{} + {}", fmt_rational(&self.a), sqrt_term(&self.b))
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [n={}]", self, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sc(n: u32, ap: i64, aq: i64, bp: i64, bq: i64) -> Scalar {
        Scalar::new(n, rat(ap, aq), rat(bp, bq))
    }

    #[test]
    fn addition_componentwise_and_identity() {
        let n = 5;
        let one = Scalar::one(n);
        let s = Scalar::sqrt_n(n);
        assert_eq!(one.clone() + s.clone(), sc(n, 1, 1, 1, 1));
        assert_eq!(s.clone() + Scalar::zero(n), s);
    }

    #[test]
    fn perfect_square_addition_canonicalizes() {
        // n = 4: sqrt(4) = 2, so 0 + 1*sqrt(4) canonicalizes to 2
        let x = Scalar::sqrt_n(4) + Scalar::zero(4);
        assert_eq!(x, Scalar::from_int(4, 2));
        assert!(x.sqrt_part().is_zero());
    }

    #[test]
    fn multiplication_defining_relation() {
        let n = 7;
        let s = Scalar::sqrt_n(n);
        assert_eq!(s.clone() * s.clone(), Scalar::from_int(n, 7));
        let x = sc(n, 2, 3, -1, 4);
        assert_eq!(Scalar::one(n) * x.clone(), x);
    }

    #[test]
    fn multiplication_conjugate_pair() {
        // n = 2: (1 + sqrt 2)(1 - sqrt 2) = 1 - 2 = -1
        let p = sc(2, 1, 1, 1, 1);
        let q = sc(2, 1, 1, -1, 1);
        assert_eq!(p * q, Scalar::from_int(2, -1));
    }

    #[test]
    fn inverse_examples() {
        let n = 3;
        // inv(sqrt n) = (1/n) sqrt n
        let s = Scalar::sqrt_n(n);
        assert_eq!(s.inv().unwrap(), sc(n, 0, 1, 1, 3));
        assert_eq!(Scalar::one(n).inv().unwrap(), Scalar::one(n));
        // n = 3: inv(1 + sqrt 3) = -1/2 + (1/2) sqrt 3, since (1+s)(-1+s)/2 = (3-1)/2
        assert_eq!(sc(3, 1, 1, 1, 1).inv().unwrap(), sc(3, -1, 2, 1, 2));
        assert_eq!(Scalar::zero(n).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn sqrtn_pow_table() {
        assert_eq!(Scalar::sqrtn_pow(2, 0), Scalar::one(2));
        assert_eq!(Scalar::sqrtn_pow(2, 1), Scalar::sqrt_n(2));
        assert_eq!(Scalar::sqrtn_pow(2, -1), sc(2, 0, 1, 1, 2));
        // e = -3, n = 2: (sqrt 2)^-3 = (1/4) sqrt 2
        assert_eq!(Scalar::sqrtn_pow(2, -3), sc(2, 0, 1, 1, 4));
        assert_eq!(Scalar::sqrtn_pow(3, 4), Scalar::from_int(3, 9));
    }

    #[test]
    fn positivity_is_exact() {
        assert!(sc(2, 3, 2, -1, 1).is_positive()); // 3/2 - sqrt 2 > 0
        assert!(!sc(2, 7, 5, -1, 1).is_positive()); // 7/5 - sqrt 2 < 0
        assert!(sc(2, -7, 5, 1, 1).is_positive()); // sqrt 2 - 7/5 > 0
        assert!(!Scalar::zero(2).is_positive());
    }

    #[test]
    #[should_panic(expected = "configuration error")]
    fn mismatched_n_is_a_configuration_error() {
        let _ = Scalar::one(2) + Scalar::one(3);
    }

    #[test]
    fn canonical_uniqueness_perfect_square() {
        // value 6 represented two ways over n = 9
        let x = sc(9, 0, 1, 2, 1);
        let y = Scalar::from_int(9, 6);
        assert_eq!(x, y);
    }

    fn arb_scalar(n: u32) -> impl Strategy<Value = Scalar> {
        (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4)
            .prop_map(move |(ap, aq, bp, bq)| sc(n, ap, aq, bp, bq))
    }

    proptest! {
        #[test]
        fn field_axioms_n2(x in arb_scalar(2), y in arb_scalar(2), z in arb_scalar(2)) {
            prop_assert_eq!(x.clone() + y.clone(), y.clone() + x.clone());
            prop_assert_eq!(x.clone() * y.clone(), y.clone() * x.clone());
            prop_assert_eq!(
                (x.clone() + y.clone()) + z.clone(),
                x.clone() + (y.clone() + z.clone())
            );
            prop_assert_eq!(
                (x.clone() * y.clone()) * z.clone(),
                x.clone() * (y.clone() * z.clone())
            );
            prop_assert_eq!(
                x.clone() * (y.clone() + z.clone()),
                x.clone() * y.clone() + x.clone() * z.clone()
            );
            if !x.is_zero() {
                prop_assert_eq!(x.clone() * x.inv().unwrap(), Scalar::one(2));
            }
        }

        #[test]
        fn field_axioms_perfect_square_n(x in arb_scalar(4), y in arb_scalar(4)) {
            prop_assert_eq!(x.clone() * y.clone(), y.clone() * x.clone());
            if !x.is_zero() {
                prop_assert_eq!(x.clone() * x.inv().unwrap(), Scalar::one(4));
            }
        }

        #[test]
        fn sqrtn_pow_is_additive(e1 in -8i64..=8, e2 in -8i64..=8) {
            for n in [2u32, 3, 4] {
                prop_assert_eq!(
                    Scalar::sqrtn_pow(n, e1) * Scalar::sqrtn_pow(n, e2),
                    Scalar::sqrtn_pow(n, e1 + e2)
                );
            }
        }
    }
}
