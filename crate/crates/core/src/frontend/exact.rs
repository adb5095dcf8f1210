//! Exact scalars for the ket language: finite sums `Σ_r (a_r + i b_r) √r`
//! with rational `a_r, b_r` and squarefree positive integers `r`.
//!
//! Everything the grammar can write (`1/sqrt(2)`, `0.8i`, `sqrt(3)/2`, ...)
//! stays exact until [`ExactScalar::to_complex`], which rounds each term
//! once through an integer square root.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Trial divisors tried when pulling square factors out of a radicand.
/// Larger radicands stay correct but may not be fully reduced.
const SQUAREFREE_TRIAL_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExactScalar {
    /// radicand -> (real coefficient, imaginary coefficient); no zero pairs
    terms: BTreeMap<BigInt, (BigRational, BigRational)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    NegativeRadicand,
    DivisionByZero,
    NonMonomialDivisor,
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactError::NegativeRadicand => write!(f, "square root of a negative number"),
            ExactError::DivisionByZero => write!(f, "division by zero"),
            ExactError::NonMonomialDivisor => {
                write!(f, "divisor must be a single term such as 2, i or sqrt(3)")
            }
        }
    }
}

impl ExactScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn rational(q: BigRational) -> Self {
        Self::monomial(BigInt::one(), q, BigRational::zero())
    }

    pub fn imaginary_unit() -> Self {
        Self::monomial(BigInt::one(), BigRational::zero(), BigRational::one())
    }

    fn monomial(radicand: BigInt, re: BigRational, im: BigRational) -> Self {
        let mut s = Self::zero();
        s.add_term(radicand, re, im);
        s
    }

    /// Parses an unsigned decimal literal such as `12`, `0.6` or `.25`.
    pub fn from_decimal(text: &str) -> Option<Self> {
        let (int, frac) = text.split_once('.').unwrap_or((text, ""));
        if int.is_empty() && frac.is_empty() {
            return None;
        }
        let digits: String = [int, frac].concat();
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let numer: BigInt = digits.parse().ok()?;
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        Some(Self::rational(BigRational::new(numer, denom)))
    }

    /// `√q` for a rational `q ≥ 0`.
    pub fn sqrt_of(q: &BigRational) -> Result<Self, ExactError> {
        if q.is_negative() {
            return Err(ExactError::NegativeRadicand);
        }
        if q.is_zero() {
            return Ok(Self::zero());
        }
        // √(p/d) = √(p·d) / d
        let n = q.numer() * q.denom();
        let (outside, radicand) = split_square(&n);
        Ok(Self::monomial(
            radicand,
            BigRational::new(outside, q.denom().clone()),
            BigRational::zero(),
        ))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// The coefficient `q` when the value is the real rational `q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (r, (re, im)) = self.terms.iter().next()?;
                (r.is_one() && im.is_zero()).then(|| re.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, radicand: BigInt, re: BigRational, im: BigRational) {
        let entry = self
            .terms
            .entry(radicand.clone())
            .or_insert_with(|| (BigRational::zero(), BigRational::zero()));
        entry.0 += re;
        entry.1 += im;
        if entry.0.is_zero() && entry.1.is_zero() {
            self.terms.remove(&radicand);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (r, (re, im)) in &other.terms {
            out.add_term(r.clone(), re.clone(), im.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        ExactScalar {
            terms: self
                .terms
                .iter()
                .map(|(r, (re, im))| (r.clone(), (-re.clone(), -im.clone())))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (r1, (a1, b1)) in &self.terms {
            for (r2, (a2, b2)) in &other.terms {
                let (outside, radicand) = split_square(&(r1 * r2));
                let scale = BigRational::from_integer(outside);
                let re = (a1 * a2 - b1 * b2) * &scale;
                let im = (a1 * b2 + b1 * a2) * &scale;
                out.add_term(radicand, re, im);
            }
        }
        out
    }

    /// Division by a single term `(a + ib)√r`.
    pub fn div(&self, divisor: &Self) -> Result<Self, ExactError> {
        let mut it = divisor.terms.iter();
        let (r, (a, b)) = match (it.next(), it.next()) {
            (None, _) => return Err(ExactError::DivisionByZero),
            (Some(t), None) => t,
            _ => return Err(ExactError::NonMonomialDivisor),
        };
        // 1/((a+ib)√r) = (a−ib)√r / ((a²+b²) r)
        let denom = (a * a + b * b) * BigRational::from_integer(r.clone());
        let inverse = Self::monomial(r.clone(), a / &denom, -(b / &denom));
        Ok(self.mul(&inverse))
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (r, (re, im)) in &self.terms {
            z.re += rational_times_sqrt(re, r);
            z.im += rational_times_sqrt(im, r);
        }
        z
    }
}

/// `n = outside² · radicand` with `radicand` squarefree (up to the trial
/// limit); `n > 0`.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let Some(mut rest) = n.to_u128() else {
        return (BigInt::one(), n.clone());
    };
    let mut outside: u128 = 1;
    let mut f: u128 = 2;
    while f * f <= rest && f <= SQUAREFREE_TRIAL_LIMIT as u128 {
        while rest % (f * f) == 0 {
            rest /= f * f;
            outside *= f;
        }
        f += 1;
    }
    (BigInt::from(outside), BigInt::from(rest))
}

/// `q·√r` rounded from an integer square root carried to at least 64
/// significant bits.
fn rational_times_sqrt(q: &BigRational, r: &BigInt) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    if r.is_one() {
        return ratio_to_f64(q);
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    let p = q.numer().abs();
    let d = q.denom();
    let k = 64 + d.bits();
    let scaled = (&p * &p * r) << (2 * k);
    let d2 = d * d;
    let quotient = &scaled / &d2;
    let root = quotient.sqrt();
    let exact = &quotient * &d2 == scaled && &root * &root == quotient;
    // sticky bit so the final conversion rounds correctly
    let (root, k) = if exact {
        (root, k as i64)
    } else {
        ((root << 1u32) | BigInt::one(), k as i64 + 1)
    };
    sign * scale_by_pow2(root.to_f64().unwrap_or(f64::INFINITY), -k)
}

fn ratio_to_f64(q: &BigRational) -> f64 {
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    let p = q.numer().abs();
    let d = q.denom();
    // 2^k p / d with ≥ 64 quotient bits
    let k = 64 + d.bits() as i64 - p.bits() as i64;
    let shifted = if k >= 0 {
        (&p << k as u64) / d
    } else {
        (&p >> (-k) as u64) / d
    };
    let exact = if k >= 0 {
        (&shifted * d) == (&p << k as u64)
    } else {
        false
    };
    // sticky bit so the final conversion rounds correctly
    let shifted = if exact {
        shifted
    } else {
        (shifted << 1u32) | BigInt::one()
    };
    let k = if exact { k } else { k + 1 };
    sign * scale_by_pow2(shifted.to_f64().unwrap_or(f64::INFINITY), -k)
}

fn scale_by_pow2(x: f64, mut e: i64) -> f64 {
    let mut x = x;
    while e > 0 {
        let step = e.min(1000);
        x *= 2f64.powi(step as i32);
        e -= step;
    }
    while e < 0 {
        let step = (-e).min(1000);
        x *= 2f64.powi(-(step as i32));
        e += step;
    }
    x
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer().abs())
    } else {
        write!(f, "{}/{}", q.numer().abs(), q.denom())
    }
}

/// Renders in the ket grammar, e.g. `1/2 sqrt(2) - 3 i`.
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (r, (re, im)) in &self.terms {
            for (coef, imag) in [(re, false), (im, true)] {
                if coef.is_zero() {
                    continue;
                }
                match (first, coef.is_negative()) {
                    (true, true) => write!(f, "-")?,
                    (true, false) => {}
                    (false, true) => write!(f, " - ")?,
                    (false, false) => write!(f, " + ")?,
                }
                first = false;
                fmt_rational(coef, f)?;
                if imag {
                    write!(f, " i")?;
                }
                if !r.is_one() {
                    write!(f, " sqrt({r})")?;
                }
            }
        }
        Ok(())
    }
}
