//! Exact scalars over the real quadratic field Q(√2) and its complexification.
//!
//! Every constant appearing in the two hypersurface families lives in Q(√2)
//! (the frame changes introduce 1/√2 factors, nothing worse), so all identity
//! checks can be carried out with no rounding at all. `CScalar` adjoins √-1
//! for the complex pencil computations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Minimal field interface shared by [`Scalar`] and [`CScalar`] so that the
/// exact matrix code can be written once.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;
    fn is_zero(&self) -> bool;
}

/// An element r + s·√2 of Q(√2) with arbitrary-precision rational r, s.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Scalar {
    r: BigRational,
    s: BigRational,
}

const SQRT2: f64 = std::f64::consts::SQRT_2;

impl Scalar {
    pub fn new(r: BigRational, s: BigRational) -> Self {
        Scalar { r, s }
    }

    pub fn int(n: i64) -> Self {
        Scalar {
            r: BigRational::from_integer(BigInt::from(n)),
            s: BigRational::zero(),
        }
    }

    /// The rational p/q. Panics if q = 0.
    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar {
            r: BigRational::new(BigInt::from(p), BigInt::from(q)),
            s: BigRational::zero(),
        }
    }

    /// p/q·√2.
    pub fn ratio_sqrt2(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar {
            r: BigRational::zero(),
            s: BigRational::new(BigInt::from(p), BigInt::from(q)),
        }
    }

    pub fn sqrt2() -> Self {
        Scalar::ratio_sqrt2(1, 1)
    }

    /// 1/√2 = √2/2.
    pub fn inv_sqrt2() -> Self {
        Scalar::ratio_sqrt2(1, 2)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.r
    }

    pub fn sqrt2_part(&self) -> &BigRational {
        &self.s
    }

    pub fn is_one(&self) -> bool {
        self.r.is_one() && self.s.is_zero()
    }

    /// Exactly zero, i.e. both rational components vanish.
    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }

    /// Field inverse: (r - s√2)/(r² - 2s²). Panics on zero (r² = 2s² forces
    /// r = s = 0 because √2 is irrational).
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "division by zero in Q(sqrt2)");
        let two = BigRational::from_integer(BigInt::from(2));
        let norm = &self.r * &self.r - two * &self.s * &self.s;
        Scalar {
            r: &self.r / &norm,
            s: -(&self.s / &norm),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.r.to_f64().unwrap() + SQRT2 * self.s.to_f64().unwrap()
    }

    /// Parses the pair of rational strings used in the polynomial JSON format.
    pub fn from_rational_strings(r: &str, s: &str) -> Result<Scalar, String> {
        Ok(Scalar {
            r: parse_rational(r)?,
            s: parse_rational(s)?,
        })
    }
}

pub(crate) fn parse_rational(text: &str) -> Result<BigRational, String> {
    let mut parts = text.splitn(2, '/');
    let num: BigInt = parts
        .next()
        .unwrap()
        .trim()
        .parse()
        .map_err(|e| format!("bad numerator in {text:?}: {e}"))?;
    let den: BigInt = match parts.next() {
        Some(d) => d
            .trim()
            .parse()
            .map_err(|e| format!("bad denominator in {text:?}: {e}"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(BigRational::new(num, den))
}

pub(crate) fn rational_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Exact decimal-free rendering of a rational, shared by the JSON formats.
pub fn rational_string_of(x: &BigRational) -> String {
    rational_string(x)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s.is_zero() {
            return write!(f, "{}", rational_string(&self.r));
        }
        if self.r.is_zero() {
            return write!(f, "{}*sqrt2", rational_string(&self.s));
        }
        let sign = if self.s.is_negative() { "-" } else { "+" };
        write!(
            f,
            "{} {} {}*sqrt2",
            rational_string(&self.r),
            sign,
            rational_string(&self.s.abs())
        )
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            r: &self.r + &rhs.r,
            s: &self.s + &rhs.s,
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            r: &self.r - &rhs.r,
            s: &self.s - &rhs.s,
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let two = BigRational::from_integer(BigInt::from(2));
        Scalar {
            r: &self.r * &rhs.r + two * &self.s * &rhs.s,
            s: &self.r * &rhs.s + &self.s * &rhs.r,
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            r: -&self.r,
            s: -&self.s,
        }
    }
}

macro_rules! forward_owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

forward_owned_ops!(Scalar);

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::default()
    }
    fn one() -> Self {
        Scalar::int(1)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        Scalar::inv(self)
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

/// An element of Q(√2)(i), the coefficient field of the shape-operator pencils.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct CScalar {
    pub re: Scalar,
    pub im: Scalar,
}

impl CScalar {
    pub fn new(re: Scalar, im: Scalar) -> Self {
        CScalar { re, im }
    }

    pub fn real(re: Scalar) -> Self {
        CScalar {
            re,
            im: Scalar::default(),
        }
    }

    pub fn i() -> Self {
        CScalar {
            re: Scalar::default(),
            im: Scalar::int(1),
        }
    }

    pub fn conj(&self) -> Self {
        CScalar {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn inv(&self) -> CScalar {
        assert!(!self.is_zero(), "division by zero in Q(sqrt2)(i)");
        let norm = &(&self.re * &self.re) + &(&self.im * &self.im);
        let ninv = norm.inv();
        CScalar {
            re: &self.re * &ninv,
            im: -&(&self.im * &ninv),
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for CScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "({})*i", self.im)
        } else {
            write!(f, "({}) + ({})*i", self.re, self.im)
        }
    }
}

impl Add for &CScalar {
    type Output = CScalar;
    fn add(self, rhs: &CScalar) -> CScalar {
        CScalar {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &CScalar {
    type Output = CScalar;
    fn sub(self, rhs: &CScalar) -> CScalar {
        CScalar {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &CScalar {
    type Output = CScalar;
    fn mul(self, rhs: &CScalar) -> CScalar {
        CScalar {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Div for &CScalar {
    type Output = CScalar;
    fn div(self, rhs: &CScalar) -> CScalar {
        self * &rhs.inv()
    }
}

impl Neg for &CScalar {
    type Output = CScalar;
    fn neg(self) -> CScalar {
        CScalar {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

forward_owned_ops!(CScalar);

impl Field for CScalar {
    fn zero() -> Self {
        CScalar::default()
    }
    fn one() -> Self {
        CScalar::real(Scalar::int(1))
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        CScalar::inv(self)
    }
    fn is_zero(&self) -> bool {
        CScalar::is_zero(self)
    }
}
