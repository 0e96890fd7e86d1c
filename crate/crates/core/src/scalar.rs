//! Exact arithmetic in the base field `k = Q[sqrt(-1)]`.
//!
//! A [`Scalar`] is a Gaussian rational `re + im*i` with both components kept
//! in lowest terms (positive denominator), so equality and hashing are
//! canonical. Complex conjugation is the field involution used by every
//! *-structure in the crate. [`QParam`] validates the deformation parameter
//! `q` and, when requested, the rational square root `r = sqrt(1 + q^2)`
//! needed by the quantum-sphere embeddings.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = BigRational;

/// Element of `Q[i]`: `re + im * sqrt(-1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    pub re: Rational,
    pub im: Rational,
}

impl Scalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::new(Rational::one(), Rational::zero())
    }

    /// The imaginary unit `i`.
    pub fn i() -> Self {
        Scalar::new(Rational::zero(), Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(Rational::from_integer(BigInt::from(n)), Rational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::new(
            Rational::new(BigInt::from(num), BigInt::from(den)),
            Rational::zero(),
        )
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::new(r, Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    /// True when the imaginary part vanishes.
    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    /// Complex conjugation; the ring involution fixing rationals.
    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// `|s|^2 = s * conj(s)`, a non-negative rational.
    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm_sq();
        Ok(Scalar::new(&self.re / &n, -&self.im / &n))
    }

    pub fn pow(&self, e: i64) -> Result<Self, Error> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero")
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    /// Prints as `p/r`, `p/r i`, or `p/r + p'/r' i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rational(&self.re, f);
        }
        if self.re.is_zero() {
            if self.im.is_one() {
                return write!(f, "i");
            }
            if self.im == -Rational::one() {
                return write!(f, "-i");
            }
            fmt_rational(&self.im, f)?;
            return write!(f, " i");
        }
        fmt_rational(&self.re, f)?;
        if self.im.is_negative() {
            write!(f, " - ")?;
            let a = -self.im.clone();
            if a.is_one() {
                return write!(f, "i");
            }
            fmt_rational(&a, f)?;
        } else {
            write!(f, " + ")?;
            if self.im.is_one() {
                return write!(f, "i");
            }
            fmt_rational(&self.im, f)?;
        }
        write!(f, " i")
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Parse a rational in `p/r` or `p` form.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let parts: Vec<&str> = s.split('/').collect();
    let bad = || Error::Parse {
        line: 0,
        col: 0,
        msg: format!("invalid rational `{s}`"),
    };
    match parts.as_slice() {
        [n] => n.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        [n, d] => {
            let num = n.parse::<BigInt>().map_err(|_| bad())?;
            let den = d.parse::<BigInt>().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(num, den))
        }
        _ => Err(bad()),
    }
}

/// Exact square root of a non-negative rational, if one exists in `Q`.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (num, den) = (r.numer(), r.denom());
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &(&sn * &sn) == num && &(&sd * &sd) == den {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

/// Validated deformation parameter.
///
/// `q` is a nonzero rational with `q^4 != 1`, treated as a real parameter
/// (conjugation fixes it). When the Podleś computations are requested the
/// record also carries `r` with `r^2 = 1 + q^2` exactly, and `r/q`, which
/// equals `sqrt(1 + q^-2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QParam {
    q: Rational,
    root: Option<Rational>,
}

impl QParam {
    pub fn new(q: Rational, need_root: bool) -> Result<Self, Error> {
        if q.is_zero() {
            return Err(Error::QParam("q must be nonzero".into()));
        }
        let q2 = &q * &q;
        if q2 == Rational::one() || q2 == -Rational::one() {
            return Err(Error::QParam(format!("q^4 = 1 is excluded (q = {})", q)));
        }
        let root = if need_root {
            let one_plus = Rational::one() + &q2;
            match rational_sqrt(&one_plus) {
                Some(r) => Some(r),
                None => {
                    return Err(Error::QParam(format!(
                        "1 + q^2 = {} is not a rational square; pick q = a/b from the \
                         Pythagorean family with a^2 + b^2 a perfect square (e.g. q = 3/4)",
                        one_plus
                    )))
                }
            }
        } else {
            None
        };
        Ok(QParam { q, root })
    }

    pub fn from_ratio(num: i64, den: i64, need_root: bool) -> Result<Self, Error> {
        QParam::new(Rational::new(BigInt::from(num), BigInt::from(den)), need_root)
    }

    pub fn q(&self) -> Scalar {
        Scalar::from_rational(self.q.clone())
    }

    pub fn q_rational(&self) -> &Rational {
        &self.q
    }

    pub fn q_inv(&self) -> Scalar {
        Scalar::from_rational(Rational::one() / &self.q)
    }

    pub fn q_pow(&self, e: i64) -> Scalar {
        Scalar::from_rational(num_traits::pow::Pow::pow(self.q.clone(), e))
    }

    /// `r = sqrt(1 + q^2)`; present only when constructed with `need_root`.
    pub fn root(&self) -> Option<Scalar> {
        self.root.clone().map(Scalar::from_rational)
    }

    /// `r/q = sqrt(1 + q^-2)`.
    pub fn root_inv_scaled(&self) -> Option<Scalar> {
        self.root
            .as_ref()
            .map(|r| Scalar::from_rational(r / &self.q))
    }

    /// `q^(1/2)` when it is rational; needed by rank >= 2 Cartan data.
    pub fn q_half(&self) -> Option<Scalar> {
        rational_sqrt(&self.q).map(Scalar::from_rational)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sc(re: (i64, i64), im: (i64, i64)) -> Scalar {
        Scalar::new(
            Rational::new(BigInt::from(re.0), BigInt::from(re.1)),
            Rational::new(BigInt::from(im.0), BigInt::from(im.1)),
        )
    }

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_int(-1));
    }

    #[test]
    fn conjugation_def() {
        let s = sc((2, 1), (3, 1));
        assert_eq!(s.conj(), sc((2, 1), (-3, 1)));
        assert_eq!(s.conj().conj(), s);
    }

    #[test]
    fn division_by_conjugate() {
        // (1+i)/(1-i) = i, checked by back-multiplication.
        let a = sc((1, 1), (1, 1));
        let b = sc((1, 1), (-1, 1));
        let quot = &a / &b;
        assert_eq!(quot, Scalar::i());
        assert_eq!(&quot * &b, a);
    }

    #[test]
    fn division_by_zero_errors() {
        assert!(Scalar::zero().inv().is_err());
    }

    #[test]
    fn qparam_accepts_pythagorean() {
        let p = QParam::from_ratio(3, 4, true).unwrap();
        assert_eq!(p.root().unwrap(), Scalar::from_ratio(5, 4));
        // r/q = 5/3 and (5/3)^2 = 1 + q^-2.
        let riq = p.root_inv_scaled().unwrap();
        assert_eq!(riq, Scalar::from_ratio(5, 3));
        let lhs = &riq * &riq;
        let rhs = &Scalar::one() + &(&p.q_inv() * &p.q_inv());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn qparam_rejects_unit_roots_and_zero() {
        assert!(QParam::from_ratio(1, 1, false).is_err());
        assert!(QParam::from_ratio(-1, 1, false).is_err());
        assert!(QParam::from_ratio(0, 1, false).is_err());
        // 1 + 4 = 5 is not a rational square.
        assert!(QParam::from_ratio(2, 1, true).is_err());
    }

    #[test]
    fn root_identity_exact() {
        for (n, d) in [(3i64, 4i64), (5, 12), (8, 15), (20, 21)] {
            let p = QParam::from_ratio(n, d, true).unwrap();
            let r = p.root().unwrap();
            let q = p.q();
            assert!((&(&r * &r) - &(&Scalar::one() + &(&q * &q))).is_zero());
        }
    }

    #[test]
    fn printing() {
        assert_eq!(sc((2, 1), (3, 1)).to_string(), "2 + 3i");
        assert_eq!(sc((2, 1), (-3, 1)).to_string(), "2 - 3i");
        assert_eq!(sc((3, 4), (0, 1)).to_string(), "3/4");
        assert_eq!(sc((0, 1), (1, 1)).to_string(), "i");
        assert_eq!(sc((0, 1), (-3, 4)).to_string(), "-3/4 i");
        assert_eq!(Scalar::zero().to_string(), "0");
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), Rational::new(3.into(), 4.into()));
        assert_eq!(parse_rational("-7").unwrap(), Rational::from_integer((-7).into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (-20i64..20, 1i64..8, -20i64..20, 1i64..8)
            .prop_map(|(a, b, c, d)| sc((a, b), (c, d)))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                let inv = a.inv().unwrap();
                prop_assert_eq!(&a * &inv, Scalar::one());
            }
        }

        #[test]
        fn conj_is_ring_involution(a in arb_scalar(), b in arb_scalar()) {
            prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!(a.conj().conj(), a);
        }
    }
}
