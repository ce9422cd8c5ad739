//! Fixed-point reals with a rigorous error radius.
//!
//! An [`ApproxReal`] stores `mid` and `rad` in units of `2^-scale`; the true
//! value lies in `[mid - rad, mid + rad]·2^-scale`. Every operation rounds
//! the midpoint and widens the radius so that the enclosure stays sound.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Number of fraction bits for `digits` decimal digits plus guard bits for
/// roughly `terms` accumulated roundings.
pub fn scale_for_digits(digits: u32, terms: u64) -> u32 {
    let decimal_bits = (digits as f64 * LOG2_10).ceil() as u32 + 1;
    let term_bits = 64 - terms.max(1).leading_zeros();
    decimal_bits + 32 + term_bits
}

pub fn pow10(d: u32) -> BigUint {
    BigUint::from(10u32).pow(d)
}

fn ceil_shift(x: &BigUint, k: u32) -> BigUint {
    if k == 0 {
        return x.clone();
    }
    let q = x >> k;
    if (&q << k) == *x {
        q
    } else {
        q + 1u32
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct ApproxReal {
    mid: BigInt,
    rad: BigUint,
    scale: u32,
}

impl ApproxReal {
    pub fn from_parts(mid: BigInt, rad: BigUint, scale: u32) -> ApproxReal {
        ApproxReal { mid, rad, scale }
    }

    pub fn zero(scale: u32) -> ApproxReal {
        ApproxReal::from_parts(BigInt::zero(), BigUint::zero(), scale)
    }

    pub fn from_integer(n: impl Into<BigInt>, scale: u32) -> ApproxReal {
        ApproxReal::from_parts(n.into() << scale, BigUint::zero(), scale)
    }

    /// Floor of `q·2^scale`, radius 1 ulp unless exact.
    pub fn from_rational(q: &BigRational, scale: u32) -> ApproxReal {
        let num = q.numer() << scale;
        let (mid, rem) = num.div_mod_floor(q.denom());
        let rad = if rem.is_zero() { BigUint::zero() } else { BigUint::one() };
        ApproxReal::from_parts(mid, rad, scale)
    }

    pub fn mid(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad(&self) -> &BigUint {
        &self.rad
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn widen(&self, extra_ulps: &BigUint) -> ApproxReal {
        ApproxReal::from_parts(self.mid.clone(), &self.rad + extra_ulps, self.scale)
    }

    /// Changes the number of fraction bits. Going up is exact; going down
    /// floors the midpoint and rounds the radius outward.
    pub fn rescale(&self, scale: u32) -> ApproxReal {
        match scale.cmp(&self.scale) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let k = scale - self.scale;
                ApproxReal::from_parts(&self.mid << k, &self.rad << k, scale)
            }
            Ordering::Less => {
                let k = self.scale - scale;
                let mid = self.mid.div_floor(&(BigInt::one() << k));
                let exact = (&mid << k) == self.mid;
                let mut rad = ceil_shift(&self.rad, k);
                if !exact {
                    rad += 1u32;
                }
                ApproxReal::from_parts(mid, rad, scale)
            }
        }
    }

    fn aligned(&self, other: &ApproxReal) -> (ApproxReal, ApproxReal) {
        let s = self.scale.max(other.scale);
        (self.rescale(s), other.rescale(s))
    }

    pub fn abs_upper(&self) -> BigUint {
        self.mid.magnitude() + &self.rad
    }

    /// Multiplication by an exact integer.
    pub fn mul_integer(&self, n: &BigInt) -> ApproxReal {
        ApproxReal::from_parts(&self.mid * n, &self.rad * n.magnitude(), self.scale)
    }

    /// Division by a nonzero integer, floor-rounded.
    pub fn div_integer(&self, n: &BigInt) -> Result<ApproxReal> {
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (mid, rem) = self.mid.div_mod_floor(n);
        let mut rad = ceil_div(&self.rad, n.magnitude());
        if !rem.is_zero() {
            rad += 1u32;
        }
        Ok(ApproxReal::from_parts(mid, rad, self.scale))
    }

    pub fn scale_by_rational(&self, q: &BigRational) -> ApproxReal {
        self.mul_integer(q.numer())
            .div_integer(q.denom())
            .expect("rational denominators are nonzero")
    }

    /// Interval division; fails when the divisor interval contains zero.
    pub fn div(&self, other: &ApproxReal) -> Result<ApproxReal> {
        let (x, y) = self.aligned(other);
        let ym = y.mid.magnitude();
        if ym <= &y.rad {
            return Err(Error::DivisionByZero);
        }
        let s = x.scale;
        let (mid, rem) = (&x.mid << s).div_mod_floor(&y.mid);
        // |x/y - mx/my| ≤ (rx|my| + |mx|ry) / (|my|(|my| - ry)), in units of 2^-s after scaling.
        let num = (&x.rad * ym + x.mid.magnitude() * &y.rad) << s;
        let den = ym * (ym - &y.rad);
        let mut rad = ceil_div(&num, &den);
        if !rem.is_zero() {
            rad += 1u32;
        }
        Ok(ApproxReal::from_parts(mid, rad, s))
    }

    pub fn powi(&self, n: u32) -> ApproxReal {
        let mut acc = ApproxReal::from_integer(1, self.scale);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(&self.mid - BigInt::from(self.rad.clone()), BigInt::one() << self.scale)
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(&self.mid + BigInt::from(self.rad.clone()), BigInt::one() << self.scale)
    }

    pub fn midpoint(&self) -> BigRational {
        BigRational::new(self.mid.clone(), BigInt::one() << self.scale)
    }

    pub fn radius(&self) -> BigRational {
        BigRational::new(BigInt::from(self.rad.clone()), BigInt::one() << self.scale)
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lower() <= q && q <= &self.upper()
    }

    /// True when the two enclosures intersect: the values agree within the
    /// combined radii.
    pub fn overlaps(&self, other: &ApproxReal) -> bool {
        let (x, y) = self.aligned(other);
        (&x.mid - &y.mid).magnitude() <= &(&x.rad + &y.rad)
    }

    /// `|self - other|` upper bound, the combined radius included.
    pub fn distance_upper(&self, other: &ApproxReal) -> BigRational {
        let (x, y) = self.aligned(other);
        let d = (&x.mid - &y.mid).magnitude() + &x.rad + &y.rad;
        BigRational::new(BigInt::from(d), BigInt::one() << x.scale)
    }

    /// Whether `rad·2^-scale ≤ 10^-digits`.
    pub fn certifies(&self, digits: u32) -> bool {
        &self.rad * pow10(digits) <= BigUint::one() << self.scale
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal string with `digits` fraction digits, rounded from the
    /// midpoint. Requires the radius to certify `digits`.
    pub fn to_decimal(&self, digits: u32) -> Result<String> {
        if !self.certifies(digits) {
            return Err(Error::PrecisionNotCertified {
                digits,
                radius: format_bound(&self.radius()),
            });
        }
        Ok(format_fixed(&self.midpoint(), digits))
    }

    /// Radius as an upward-rounded scientific string such as `3.5e-31`.
    pub fn bound_string(&self) -> String {
        format_bound(&self.radius())
    }
}

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    let (q, r) = a.div_rem(b);
    if r.is_zero() {
        q
    } else {
        q + 1u32
    }
}

/// Round-half-up decimal rendering of an exact rational.
pub fn format_fixed(x: &BigRational, digits: u32) -> String {
    let scaled = x * BigRational::from_integer(BigInt::from(pow10(digits)));
    let q = (scaled + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
    let negative = q.is_negative();
    let mag = q.magnitude().to_string();
    let d = digits as usize;
    let padded = if mag.len() <= d { format!("{}{}", "0".repeat(d + 1 - mag.len()), mag) } else { mag };
    let (int_part, frac) = padded.split_at(padded.len() - d);
    let sign = if negative { "-" } else { "" };
    if d == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

/// Upward-rounded two-significant-digit scientific rendering of `x ≥ 0`.
pub fn format_bound(x: &BigRational) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let x = x.abs();
    let ten = BigRational::from_integer(BigInt::from(10));
    // Find e with 10^e ≤ x < 10^{e+1}.
    let mut e: i32 = x.to_f64().map_or(0, |f| if f > 0.0 && f.is_finite() { f.log10().floor() as i32 } else { 0 });
    let pow = |e: i32| -> BigRational {
        if e >= 0 {
            ten.pow(e)
        } else {
            BigRational::one() / ten.pow(-e)
        }
    };
    while pow(e) > x {
        e -= 1;
    }
    while pow(e + 1) <= x {
        e += 1;
    }
    let mut m = (&x / pow(e - 1)).ceil().to_integer().to_u32().unwrap_or(100);
    if m >= 100 {
        m = 10;
        e += 1;
    }
    format!("{}.{}e{}", m / 10, m % 10, e)
}

impl fmt::Debug for ApproxReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", format_fixed(&self.midpoint(), 20), self.bound_string())
    }
}

impl fmt::Display for ApproxReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for &ApproxReal {
    type Output = ApproxReal;
    fn add(self, rhs: &ApproxReal) -> ApproxReal {
        let (x, y) = self.aligned(rhs);
        ApproxReal::from_parts(x.mid + y.mid, x.rad + y.rad, x.scale)
    }
}

impl Sub for &ApproxReal {
    type Output = ApproxReal;
    fn sub(self, rhs: &ApproxReal) -> ApproxReal {
        let (x, y) = self.aligned(rhs);
        ApproxReal::from_parts(x.mid - y.mid, x.rad + y.rad, x.scale)
    }
}

impl Neg for &ApproxReal {
    type Output = ApproxReal;
    fn neg(self) -> ApproxReal {
        ApproxReal::from_parts(-&self.mid, self.rad.clone(), self.scale)
    }
}

impl Mul for &ApproxReal {
    type Output = ApproxReal;
    fn mul(self, rhs: &ApproxReal) -> ApproxReal {
        let (x, y) = self.aligned(rhs);
        let s = x.scale;
        let prod = &x.mid * &y.mid;
        let mid = prod.div_floor(&(BigInt::one() << s));
        let exact = (&mid << s) == prod;
        let err = x.mid.magnitude() * &y.rad + y.mid.magnitude() * &x.rad + &x.rad * &y.rad;
        let mut rad = ceil_shift(&err, s);
        if !exact {
            rad += 1u32;
        }
        ApproxReal::from_parts(mid, rad, s)
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(ApproxReal, Add, add);
forward_owned!(ApproxReal, Sub, sub);
forward_owned!(ApproxReal, Mul, mul);

impl Neg for ApproxReal {
    type Output = ApproxReal;
    fn neg(self) -> ApproxReal {
        -&self
    }
}

/// Componentwise enclosure of a complex number.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ApproxComplex {
    pub re: ApproxReal,
    pub im: ApproxReal,
}

impl ApproxComplex {
    pub fn new(re: ApproxReal, im: ApproxReal) -> ApproxComplex {
        ApproxComplex { re, im }
    }

    pub fn real(re: ApproxReal) -> ApproxComplex {
        let s = re.scale();
        ApproxComplex::new(re, ApproxReal::zero(s))
    }

    pub fn zero(scale: u32) -> ApproxComplex {
        ApproxComplex::real(ApproxReal::zero(scale))
    }

    pub fn one(scale: u32) -> ApproxComplex {
        ApproxComplex::real(ApproxReal::from_integer(1, scale))
    }

    /// `i·x`
    pub fn imag(im: ApproxReal) -> ApproxComplex {
        let s = im.scale();
        ApproxComplex::new(ApproxReal::zero(s), im)
    }

    pub fn scale_by_rational(&self, q: &BigRational) -> ApproxComplex {
        ApproxComplex::new(self.re.scale_by_rational(q), self.im.scale_by_rational(q))
    }

    pub fn mul_real(&self, x: &ApproxReal) -> ApproxComplex {
        ApproxComplex::new(&self.re * x, &self.im * x)
    }

    pub fn conj(&self) -> ApproxComplex {
        ApproxComplex::new(self.re.clone(), -&self.im)
    }

    pub fn powi(&self, n: u32) -> ApproxComplex {
        let mut acc = ApproxComplex::one(self.re.scale());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn overlaps(&self, other: &ApproxComplex) -> bool {
        self.re.overlaps(&other.re) && self.im.overlaps(&other.im)
    }

    pub fn certifies(&self, digits: u32) -> bool {
        self.re.certifies(digits) && self.im.certifies(digits)
    }

    /// Imaginary part encloses zero exactly (radius 0 and midpoint 0).
    pub fn is_real_exact(&self) -> bool {
        self.im.mid().is_zero() && self.im.is_exact()
    }
}

impl Add for &ApproxComplex {
    type Output = ApproxComplex;
    fn add(self, rhs: &ApproxComplex) -> ApproxComplex {
        ApproxComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &ApproxComplex {
    type Output = ApproxComplex;
    fn sub(self, rhs: &ApproxComplex) -> ApproxComplex {
        ApproxComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Neg for &ApproxComplex {
    type Output = ApproxComplex;
    fn neg(self) -> ApproxComplex {
        ApproxComplex::new(-&self.re, -&self.im)
    }
}

impl Mul for &ApproxComplex {
    type Output = ApproxComplex;
    fn mul(self, rhs: &ApproxComplex) -> ApproxComplex {
        ApproxComplex::new(
            &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        )
    }
}

forward_owned!(ApproxComplex, Add, add);
forward_owned!(ApproxComplex, Sub, sub);
forward_owned!(ApproxComplex, Mul, mul);

/// The exact points at which polylogarithms are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvalPoint {
    Half,
    MinusOne,
    /// `ρ = e^{iπ/3}`
    Rho,
    /// `ρ̄ = e^{-iπ/3}`
    RhoBar,
}

impl EvalPoint {
    pub fn is_real(self) -> bool {
        matches!(self, EvalPoint::Half | EvalPoint::MinusOne)
    }

    pub fn on_unit_circle(self) -> bool {
        !matches!(self, EvalPoint::Half)
    }

    /// `z^j = (x2_j / 2) + y_j·(√3/2)·i` for `j = 0..6`; real points use the
    /// same table with `y = 0`.
    pub fn power_table(self) -> [(i64, i64); 6] {
        match self {
            EvalPoint::Half => panic!("1/2 has no finite power cycle"),
            EvalPoint::MinusOne => [(2, 0), (-2, 0), (2, 0), (-2, 0), (2, 0), (-2, 0)],
            EvalPoint::Rho => [(2, 0), (1, 1), (-1, 1), (-2, 0), (-1, -1), (1, -1)],
            EvalPoint::RhoBar => [(2, 0), (1, -1), (-1, -1), (-2, 0), (-1, 1), (1, 1)],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EvalPoint::Half => "1/2",
            EvalPoint::MinusOne => "-1",
            EvalPoint::Rho => "rho",
            EvalPoint::RhoBar => "rhobar",
        }
    }
}

impl fmt::Display for EvalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EvalPoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<EvalPoint> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1/2" | "half" | "0.5" => Ok(EvalPoint::Half),
            "-1" | "minusone" | "minus-one" => Ok(EvalPoint::MinusOne),
            "rho" => Ok(EvalPoint::Rho),
            "rhobar" | "rho-bar" => Ok(EvalPoint::RhoBar),
            other => Err(Error::Parse(format!("unknown evaluation point `{other}`"))),
        }
    }
}

/// `log 2 = Σ_{n≥1} 2^{-n}/n` at `scale` fraction bits.
pub fn log2_at_scale(scale: u32) -> ApproxReal {
    let n_terms = scale as u64 + 1;
    let one = BigInt::one() << scale;
    let mut mid = BigInt::zero();
    for n in 1..=n_terms {
        mid += (&one >> n) / BigInt::from(n);
    }
    // Each term floored (< 1 ulp, plus < 1 ulp from the shift) and the tail
    // Σ_{n>N} 2^{-n}/n < 2^{-N} < 1 ulp.
    let rad = BigUint::from(2 * n_terms + 1);
    ApproxReal::from_parts(mid, rad, scale)
}

/// Bailey–Borwein–Plouffe series at `scale` fraction bits.
pub fn pi_at_scale(scale: u32) -> ApproxReal {
    let n_terms = (scale as u64) / 4 + 2;
    let base = BigInt::one() << (scale + 3);
    let mut mid = BigInt::zero();
    for n in 0..n_terms {
        let shifted: BigInt = &base >> (4 * n);
        let k = 8 * n;
        mid += (&shifted * 4) / BigInt::from(k + 1);
        mid -= (&shifted * 2) / BigInt::from(k + 4);
        mid -= &shifted / BigInt::from(k + 5);
        mid -= &shifted / BigInt::from(k + 6);
    }
    // Computed with 3 extra bits; each of the 4 divisions and the shift errs by < 1.
    let extra = ApproxReal::from_parts(mid, BigUint::from(5 * n_terms + 1), scale + 3);
    // Tail: Σ_{n≥N} 16^{-n}·4/(8n+1) < 16^{-N}·(16/15)·(4/(8N+1)) < 2^{-scale-3}.
    extra.widen(&BigUint::one()).rescale(scale)
}

/// `√3` from an integer square root at `scale` fraction bits.
pub fn sqrt3_at_scale(scale: u32) -> ApproxReal {
    let n = BigUint::from(3u32) << (2 * scale);
    let root = n.sqrt();
    ApproxReal::from_parts(BigInt::from(root), BigUint::one(), scale)
}

fn constant_to_digits(digits: u32, f: impl Fn(u32) -> ApproxReal) -> ApproxReal {
    let mut scale = scale_for_digits(digits, 4 * digits as u64 + 8);
    loop {
        let x = f(scale);
        // radius ≤ 10^-digits / 4
        if &x.rad * pow10(digits) * 4u32 <= BigUint::one() << scale {
            return x;
        }
        scale += 16;
    }
}

pub fn const_log2(digits: u32) -> ApproxReal {
    constant_to_digits(digits, log2_at_scale)
}

pub fn const_pi(digits: u32) -> ApproxReal {
    constant_to_digits(digits, pi_at_scale)
}

pub fn const_sqrt3(digits: u32) -> ApproxReal {
    constant_to_digits(digits, sqrt3_at_scale)
}

/// Parses a decimal such as `-1.25` into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad decimal `{s}`"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac}");
    let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let q = BigRational::new(n, BigInt::from(pow10(frac.len() as u32)));
    Ok(if neg { -q } else { q })
}

pub fn sign_of(x: &BigInt) -> Sign {
    x.sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exact_arithmetic_examples() {
        let one = ApproxReal::from_integer(1, 40);
        let two = &one + &one;
        assert_eq!(two, ApproxReal::from_integer(2, 40));
        let x = ApproxReal::from_parts(BigInt::from(12345), BigUint::from(7u32), 40);
        let z = &x * &ApproxReal::zero(40);
        assert!(z.mid().is_zero() && z.rad().is_zero());
    }

    #[test]
    fn third_at_ten_bits() {
        let x = ApproxReal::from_integer(1, 10).scale_by_rational(&q(1, 3));
        assert_eq!(x.mid(), &BigInt::from(341));
        assert!(x.rad() <= &BigUint::one());
        assert!(x.contains(&q(1, 3)));
    }

    #[test]
    fn division_by_interval_containing_zero_fails() {
        let x = ApproxReal::from_integer(1, 20);
        let y = ApproxReal::from_parts(BigInt::from(3), BigUint::from(5u32), 20);
        assert!(matches!(x.div(&y), Err(Error::DivisionByZero)));
        let y = ApproxReal::from_integer(3, 20);
        assert!(x.div(&y).unwrap().contains(&q(1, 3)));
    }

    #[test]
    fn constants_to_fifteen_digits() {
        let cases = [
            (const_log2(15), "0.693147180559945"),
            (const_pi(15), "3.141592653589793"),
            (const_sqrt3(15), "1.732050807568877"),
        ];
        for (x, expected) in cases {
            assert!(x.radius() * BigRational::from_integer(BigInt::from(pow10(15)) * 4) <= BigRational::one());
            let e = parse_decimal(expected).unwrap();
            assert!(x.distance_upper(&ApproxReal::from_rational(&e, x.scale())) <= q(1, 1_000_000_000_000_000));
        }
    }

    #[test]
    fn constants_match_known_digits() {
        let pi50 = "3.14159265358979323846264338327950288419716939937510";
        let log2_50 = "0.69314718055994530941723212145817656807550013436025";
        let sqrt3_50 = "1.73205080756887729352744634150587236694280525381038";
        for (x, s) in [(const_pi(50), pi50), (const_log2(50), log2_50), (const_sqrt3(50), sqrt3_50)] {
            let exact = parse_decimal(s).unwrap();
            // The strings are truncations: the true value lies in [s, s + 10^-50].
            let lo = exact.clone();
            let hi = &exact + BigRational::new(BigInt::one(), BigInt::from(pow10(50)));
            assert!(x.upper() >= lo && x.lower() <= hi, "{s}");
        }
    }

    #[test]
    fn to_decimal_examples() {
        assert_eq!(ApproxReal::from_integer(2, 30).to_decimal(3).unwrap(), "2.000");
        let l = const_log2(7);
        assert_eq!(l.to_decimal(6).unwrap(), "0.693147");
        let coarse = ApproxReal::from_rational(&q(1, 3), 40).widen(&(BigUint::one() << 31));
        assert!(matches!(coarse.to_decimal(6), Err(Error::PrecisionNotCertified { .. })));
        assert_eq!(format_fixed(&q(-1, 8), 2), "-0.12");
        assert_eq!(format_fixed(&q(-126, 1000), 2), "-0.13");
        assert_eq!(format_fixed(&q(1, 3), 0), "0");
    }

    #[test]
    fn bound_formatting_rounds_up() {
        assert_eq!(format_bound(&q(1, 1000)), "1.0e-3");
        assert_eq!(format_bound(&q(1234, 1_000_000)), "1.3e-3");
        assert_eq!(format_bound(&q(999, 1000)), "1.0e0");
        assert_eq!(format_bound(&BigRational::zero()), "0");
    }

    #[test]
    fn rho_power_table_cycles() {
        // ρ^j·ρ = ρ^{j+1} using ρ = 1/2 + (√3/2)i, in units of (1/2, √3/2).
        for p in [EvalPoint::Rho, EvalPoint::RhoBar] {
            let t = p.power_table();
            let (cx, cy) = t[1];
            for j in 0..6 {
                let (x, y) = t[j];
                // (x/2 + y√3/2 i)(cx/2 + cy√3/2 i) = (x cx - 3 y cy)/4 + (x cy + y cx)√3/4 i
                let nx = (x * cx - 3 * y * cy) / 2;
                let ny = (x * cy + y * cx) / 2;
                assert_eq!((nx, ny), t[(j + 1) % 6]);
            }
        }
    }

    #[test]
    fn rescale_down_keeps_enclosure() {
        let x = ApproxReal::from_rational(&q(22, 7), 80);
        let y = x.rescale(30);
        assert!(y.contains(&q(22, 7)));
    }
}
