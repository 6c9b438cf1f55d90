//! Exact arithmetic over the Gaussian rationals Q(i).
//!
//! [`Rational`] is `num-rational`'s big rational, which reduces to lowest terms
//! on every construction, so structural equality is value equality.
//! [`GaussianRational`] pairs two of them and is the coefficient field for all
//! symbolic work in the crate.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `"p"` when the denominator is one, `"p/q"` otherwise.
pub fn rational_to_string(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Domain(format!("not a rational number: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

/// Rising factorial `(a)_n = a (a+1) ... (a+n-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    let mut term = a.clone();
    for _ in 0..n {
        acc *= &term;
        term += Rational::one();
    }
    acc
}

/// Generalized binomial coefficient `x (x-1) ... (x-v+1) / v!` for any
/// rational upper argument.
pub fn gen_binomial(x: &Rational, v: u32) -> Rational {
    let mut num = Rational::one();
    let mut term = x.clone();
    for _ in 0..v {
        num *= &term;
        term -= Rational::one();
    }
    num / Rational::from_integer(factorial(v))
}

/// An element `re + i·im` of Q(i).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(rat(n), Rational::zero())
    }

    pub fn real(re: Rational) -> Self {
        Self::new(re, Rational::zero())
    }

    pub fn imag(im: Rational) -> Self {
        Self::new(Rational::zero(), im)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::imag(Rational::one())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|x|^2 = re^2 + im^2`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(&self.re * r, &self.im * r)
    }

    /// `i^e` for any integer `e`.
    pub fn i_pow(e: i64) -> Self {
        match e.rem_euclid(4) {
            0 => Self::from_int(1),
            1 => Self::i(),
            2 => Self::from_int(-1),
            _ => -Self::i(),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        Self::real(r)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "{}-{}i", self.re, -self.im.clone())
                } else {
                    write!(f, "{}+{}i", self.re, self.im)
                }
            }
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GaussianRational", 2)?;
        st.serialize_field("re", &rational_to_string(&self.re))?;
        st.serialize_field("im", &rational_to_string(&self.im))?;
        st.end()
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(rat(re), rat(im))
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&frac(7, 3), 0), rat(1));
        assert_eq!(pochhammer(&rat(1), 3), rat(6));
        assert_eq!(pochhammer(&rat(-2), 3), rat(0));
    }

    #[test]
    fn gen_binomial_examples() {
        assert_eq!(gen_binomial(&frac(-7, 5), 0), rat(1));
        assert_eq!(gen_binomial(&rat(-1), 2), rat(1));
        assert_eq!(gen_binomial(&frac(5, 2), 2), frac(15, 8));
        assert_eq!(gen_binomial(&rat(5), 7), rat(0));
    }

    #[test]
    fn gaussian_examples() {
        assert_eq!(g(1, 1) * g(1, -1), g(2, 0));
        assert_eq!(g(1, 1).checked_div(&g(1, 1)).unwrap(), g(1, 0));
        assert_eq!(g(3, -4).conj().conj(), g(3, -4));
        assert_eq!(g(0, 1).pow(2).unwrap(), g(-1, 0));
        assert_eq!(
            g(1, 1).pow(-2).unwrap(),
            GaussianRational::imag(frac(-1, 2))
        );
        assert_eq!(g(0, 0).inv(), Err(Error::DivisionByZero));
        assert_eq!(GaussianRational::i_pow(-1), g(0, -1));
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(frac(6, 4).to_string(), "3/2");
        assert_eq!(rat(-3).to_string(), "-3");
        assert_eq!(parse_rational(" -6/4 ").unwrap(), frac(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(g(1, -2).to_string(), "1-2i");
        let js = serde_json::to_string(&GaussianRational::new(frac(1, 2), rat(-1))).unwrap();
        assert_eq!(js, r#"{"re":"1/2","im":"-1"}"#);
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..12).prop_map(|(p, q)| frac(p, q))
    }

    fn small_gaussian() -> impl Strategy<Value = GaussianRational> {
        (small_rational(), small_rational()).prop_map(|(a, b)| GaussianRational::new(a, b))
    }

    proptest! {
        #[test]
        fn pochhammer_step(a in small_rational(), n in 0u32..50) {
            prop_assert_eq!(pochhammer(&a, n + 1), pochhammer(&a, n) * (&a + rat(n as i64)));
        }

        #[test]
        fn binomial_vs_pochhammer(x in small_rational(), v in 0u32..30) {
            let lhs = gen_binomial(&x, v) * Rational::from_integer(factorial(v));
            let rhs = pochhammer(&(&x - rat(v as i64) + rat(1)), v);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn results_in_lowest_terms(a in small_gaussian(), b in small_gaussian()) {
            let prod = &a * &b;
            for r in [&prod.re, &prod.im] {
                prop_assert!(r.numer().gcd(r.denom()) == BigInt::one() || r.is_zero());
                prop_assert!(r.denom().is_positive());
            }
        }

        #[test]
        fn field_axioms(a in small_gaussian(), b in small_gaussian(), c in small_gaussian()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert!(a.norm_sqr() >= Rational::zero());
            prop_assert_eq!(a.norm_sqr().is_zero(), a.is_zero());
            if !b.is_zero() {
                prop_assert_eq!(&(&a * &b).checked_div(&b).unwrap(), &a);
            }
        }
    }
}
