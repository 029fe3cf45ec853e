//! Exact integer/rational helpers and certified decimal interval arithmetic.
//!
//! Counts live in [`BigInt`], series coefficients and probabilities in
//! [`BigRational`]; both are exact. Irrational constants (√π, e^λ, √n) are
//! represented by [`DecimalEnclosure`], a pair of fixed-point decimal
//! endpoints with *outward* rounding: every operation returns an interval
//! guaranteed to contain the exact result. Decimal fixed point (rather than
//! binary floating point) keeps the printed digits reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exact binomial coefficient `C(n, k)`, with `C(n, k) = 0` for `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc /= BigInt::from(i + 1); // exact: C(n,i+1) is an integer
    }
    acc
}

/// Greatest common divisor of two positive integers.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub(crate) fn pow10(p: u32) -> BigInt {
    BigInt::from(10u32).pow(p)
}

/// floor(q · 10^p) as an integer mantissa.
fn floor_scaled(q: &BigRational, p: u32) -> BigInt {
    (q.numer() * pow10(p)).div_floor(q.denom())
}

/// ceil(q · 10^p) as an integer mantissa.
fn ceil_scaled(q: &BigRational, p: u32) -> BigInt {
    (q.numer() * pow10(p)).div_ceil(q.denom())
}

/// Largest integer `L` with `(L/10^p)^2 <= q`; requires `q >= 0`.
fn sqrt_floor_scaled(q: &BigRational, p: u32) -> BigInt {
    // floor(sqrt(N/D)) with N = numer·10^{2p}, D = denom.
    let n = q.numer() * pow10(2 * p);
    let d = q.denom().clone();
    let s = (&n * &d).sqrt();
    let f = s.div_floor(&d);
    let up = &f + 1;
    if &up * &up * &d <= n {
        up
    } else {
        f
    }
}

/// Smallest integer `H` with `(H/10^p)^2 >= q`; requires `q >= 0`.
fn sqrt_ceil_scaled(q: &BigRational, p: u32) -> BigInt {
    let n = q.numer() * pow10(2 * p);
    let d = q.denom().clone();
    let s = (&n * &d).sqrt();
    let c = s.div_ceil(&d);
    if &c * &c * &d >= n {
        c
    } else {
        c + 1
    }
}

fn mantissa_to_string(m: &BigInt, p: u32) -> String {
    let neg = m.is_negative();
    let abs = m.abs();
    let scale = pow10(p);
    let (int, frac) = abs.div_rem(&scale);
    let sign = if neg { "-" } else { "" };
    if p == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0>width$}", width = p as usize)
    }
}

/// A certified decimal interval `[lo, hi]` at a fixed scale.
///
/// The endpoints are integer mantissas at `precision` fractional digits, so
/// the represented interval is `[lo/10^p, hi/10^p]`. All constructors and
/// operations round outward: the exact mathematical result of the operation
/// on any points of the inputs lies inside the output interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecimalEnclosure {
    lo: BigInt,
    hi: BigInt,
    precision: u32,
}

impl DecimalEnclosure {
    /// Tightest decimal interval containing the exact rational `q`.
    pub fn from_rational(q: &BigRational, precision: u32) -> Self {
        DecimalEnclosure {
            lo: floor_scaled(q, precision),
            hi: ceil_scaled(q, precision),
            precision,
        }
    }

    /// Outward rounding of the exact rational interval `[lo, hi]`.
    pub fn from_endpoints(lo: &BigRational, hi: &BigRational, precision: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain("enclosure endpoints out of order"));
        }
        Ok(DecimalEnclosure {
            lo: floor_scaled(lo, precision),
            hi: ceil_scaled(hi, precision),
            precision,
        })
    }

    /// Exact integer as a zero-width interval.
    pub fn from_int(v: i64, precision: u32) -> Self {
        let m = BigInt::from(v) * pow10(precision);
        DecimalEnclosure {
            lo: m.clone(),
            hi: m,
            precision,
        }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn lo_rational(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow10(self.precision))
    }

    pub fn hi_rational(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow10(self.precision))
    }

    pub fn width(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, pow10(self.precision))
    }

    pub fn midpoint(&self) -> BigRational {
        BigRational::new(&self.hi + &self.lo, 2 * pow10(self.precision))
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo_rational() <= q && q <= &self.hi_rational()
    }

    pub fn contains_enclosure(&self, other: &DecimalEnclosure) -> bool {
        self.lo_rational() <= other.lo_rational() && other.hi_rational() <= self.hi_rational()
    }

    /// Decimal string of the lower endpoint.
    pub fn lo_string(&self) -> String {
        mantissa_to_string(&self.lo, self.precision)
    }

    /// Decimal string of the upper endpoint.
    pub fn hi_string(&self) -> String {
        mantissa_to_string(&self.hi, self.precision)
    }

    /// Re-round to a different scale. Outward, so the value set never shrinks
    /// below the represented one; at a coarser scale the interval may widen.
    pub fn with_precision(&self, precision: u32) -> Self {
        DecimalEnclosure {
            lo: floor_scaled(&self.lo_rational(), precision),
            hi: ceil_scaled(&self.hi_rational(), precision),
            precision,
        }
    }

    fn binary<F>(&self, other: &Self, f: F) -> Self
    where
        F: Fn(&BigRational, &BigRational) -> BigRational,
    {
        let p = self.precision.min(other.precision);
        let (a, b) = (self.lo_rational(), self.hi_rational());
        let (c, d) = (other.lo_rational(), other.hi_rational());
        let candidates = [f(&a, &c), f(&a, &d), f(&b, &c), f(&b, &d)];
        let lo = candidates.iter().min().unwrap();
        let hi = candidates.iter().max().unwrap();
        DecimalEnclosure {
            lo: floor_scaled(lo, p),
            hi: ceil_scaled(hi, p),
            precision: p,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.precision.min(other.precision);
        let lo = self.lo_rational() + other.lo_rational();
        let hi = self.hi_rational() + other.hi_rational();
        DecimalEnclosure {
            lo: floor_scaled(&lo, p),
            hi: ceil_scaled(&hi, p),
            precision: p,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.precision.min(other.precision);
        let lo = self.lo_rational() - other.hi_rational();
        let hi = self.hi_rational() - other.lo_rational();
        DecimalEnclosure {
            lo: floor_scaled(&lo, p),
            hi: ceil_scaled(&hi, p),
            precision: p,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.binary(other, |x, y| x * y)
    }

    /// Interval division; the divisor must not contain zero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.lo_rational() <= BigRational::zero() && other.hi_rational() >= BigRational::zero()
        {
            return Err(Error::domain("enclosure division by interval containing 0"));
        }
        Ok(self.binary(other, |x, y| x / y))
    }

    pub fn neg(&self) -> Self {
        DecimalEnclosure {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
            precision: self.precision,
        }
    }

    /// `1 - self`, exact at the current scale (no rounding needed).
    pub fn one_minus(&self) -> Self {
        let one = pow10(self.precision);
        DecimalEnclosure {
            lo: &one - &self.hi,
            hi: &one - &self.lo,
            precision: self.precision,
        }
    }

    /// Scale by an exact rational (exact endpoint arithmetic, one rounding).
    pub fn mul_rational(&self, q: &BigRational) -> Self {
        let p = self.precision;
        let (a, b) = (self.lo_rational() * q, self.hi_rational() * q);
        let (lo, hi) = if q.is_negative() { (b, a) } else { (a, b) };
        DecimalEnclosure {
            lo: floor_scaled(&lo, p),
            hi: ceil_scaled(&hi, p),
            precision: p,
        }
    }

    /// Shift by an exact rational.
    pub fn add_rational(&self, q: &BigRational) -> Self {
        let p = self.precision;
        DecimalEnclosure {
            lo: floor_scaled(&(self.lo_rational() + q), p),
            hi: ceil_scaled(&(self.hi_rational() + q), p),
            precision: p,
        }
    }

    /// Integer power by repeated multiplication (`e >= 0`; `x^0 = [1,1]`).
    pub fn powi(&self, e: u32) -> Self {
        let mut acc = DecimalEnclosure::from_int(1, self.precision);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Directed-rounding square root; requires a nonnegative interval.
    pub fn sqrt(&self) -> Result<Self> {
        self.sqrt_with_precision(self.precision)
    }

    pub fn sqrt_with_precision(&self, precision: u32) -> Result<Self> {
        let lo_q = self.lo_rational();
        if lo_q.is_negative() {
            return Err(Error::domain("sqrt of an interval containing negatives"));
        }
        Ok(DecimalEnclosure {
            lo: sqrt_floor_scaled(&lo_q, precision),
            hi: sqrt_ceil_scaled(&self.hi_rational(), precision),
            precision,
        })
    }
}

/// Tightest decimal interval containing the exact rational `q`.
pub fn rat_to_enclosure(q: &BigRational, precision: u32) -> DecimalEnclosure {
    DecimalEnclosure::from_rational(q, precision)
}

/// Certified square root of a nonnegative exact rational.
pub fn sqrt_rat_enclosure(q: &BigRational, precision: u32) -> Result<DecimalEnclosure> {
    if q.is_negative() {
        return Err(Error::domain("sqrt of a negative rational"));
    }
    Ok(DecimalEnclosure {
        lo: sqrt_floor_scaled(q, precision),
        hi: sqrt_ceil_scaled(q, precision),
        precision,
    })
}

// 40 fractional digits of π, truncated, so the certified interval is
// (mantissa, mantissa + 1) at scale 40.
const PI_FRAC_DIGITS: &str = "1415926535897932384626433832795028841971";
const PI_LITERAL_DIGITS: u32 = 40;

/// Certified enclosure of π from the embedded 40-digit literal.
pub fn pi_enclosure(precision: u32) -> Result<DecimalEnclosure> {
    if precision == 0 || precision > PI_LITERAL_DIGITS {
        return Err(Error::domain(format!(
            "pi enclosure certified only for 1..={PI_LITERAL_DIGITS} digits, got {precision}"
        )));
    }
    let lo: BigInt = format!("3{PI_FRAC_DIGITS}").parse().expect("valid literal");
    let full = DecimalEnclosure {
        hi: &lo + 1,
        lo,
        precision: PI_LITERAL_DIGITS,
    };
    Ok(full.with_precision(precision))
}

/// Certified enclosure of √π, of width at most `10^(2 - precision)`.
///
/// Certification rests on the embedded π literal: squaring the returned
/// interval must bracket π, which the unit tests check. Supported precision
/// range is 10..=38 (two guard digits against the 40-digit literal).
pub fn sqrt_pi_enclosure(precision: u32) -> Result<DecimalEnclosure> {
    if precision < 10 {
        return Err(Error::domain(format!(
            "precision {precision} too small to certify sqrt(pi); need >= 10"
        )));
    }
    if precision > PI_LITERAL_DIGITS - 2 {
        return Err(Error::domain(format!(
            "precision {precision} exceeds the {PI_LITERAL_DIGITS}-digit pi literal's certified range"
        )));
    }
    pi_enclosure(precision + 2)?.sqrt_with_precision(precision)
}

/// Certified enclosure of `e^x` for `|x| <= 10`.
///
/// Evaluates the truncated power series exactly in rationals at both
/// endpoints and adds the Lagrange remainder bound, with the truncation order
/// chosen so the remainder is below `10^-(precision+2)`.
pub fn exp_enclosure(x: &DecimalEnclosure, precision: u32) -> Result<DecimalEnclosure> {
    let ten = BigRational::from_integer(10.into());
    let lo_q = x.lo_rational();
    let hi_q = x.hi_rational();
    if lo_q < -ten.clone() || hi_q > ten {
        return Err(Error::domain("exp_enclosure requires |x| <= 10"));
    }

    // |R_K(t)| <= |t|^{K+1} e^{max(t,0)} / (K+1)!  with e^{max} <= 3^10.
    let m = lo_q.abs().max(hi_q.abs());
    let e_bound = BigRational::from_integer(59049.into());
    let eps = BigRational::new(BigInt::one(), pow10(precision + 2));
    let mut order = 0u32;
    let mut tail = &m * &e_bound; // bound for K = 0
    while tail > eps {
        order += 1;
        tail = tail * &m / BigRational::from_integer((order + 1).into());
        if order > 10_000 {
            return Err(Error::domain("exp_enclosure failed to converge"));
        }
    }
    let remainder = tail;

    let series = |t: &BigRational| -> BigRational {
        let mut term = BigRational::one();
        let mut sum = BigRational::one();
        for j in 1..=order {
            term = term * t / BigRational::from_integer(j.into());
            sum += &term;
        }
        sum
    };

    // exp is increasing, so evaluating at the endpoints suffices.
    let lo_val = series(&lo_q) - &remainder;
    let hi_val = series(&hi_q) + &remainder;
    DecimalEnclosure::from_endpoints(&lo_val, &hi_val, precision)
}

/// Round an exact rational to `digits` fractional digits, nearest with ties
/// away from zero. This is the single output-boundary rounding used for
/// non-certified (point) values.
pub fn round_rational_string(q: &BigRational, digits: u32) -> String {
    let num = q.numer() * pow10(digits);
    let den = q.denom();
    // div_rem truncates toward zero; bump |mant| when |frac| >= 1/2.
    let (mut mant, rem) = num.div_rem(den);
    if rem.abs() * 2 >= den.abs() {
        if q.is_negative() {
            mant -= 1;
        } else {
            mant += 1;
        }
    }
    mantissa_to_string(&mant, digits)
}

/// Truncate an exact rational toward zero at `digits` fractional digits:
/// the "leading digits" of the decimal expansion, as printed values like
/// `0.392…` are quoted.
pub fn truncate_rational_string(q: &BigRational, digits: u32) -> String {
    let num = q.numer() * pow10(digits);
    let mant = num / q.denom(); // BigInt division truncates toward zero
    mantissa_to_string(&mant, digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    // Independent oracle for binomial: Pascal's triangle.
    fn pascal_row(n: usize) -> Vec<BigInt> {
        let mut row = vec![BigInt::one()];
        for _ in 0..n {
            let mut next = vec![BigInt::one()];
            for i in 1..row.len() {
                next.push(&row[i - 1] + &row[i]);
            }
            next.push(BigInt::one());
            row = next;
        }
        row
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(2, 1), BigInt::from(2));
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(12, 6), BigInt::from(924));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn binomial_matches_pascal_recurrence() {
        for n in 1..=200usize {
            let prev = pascal_row(n - 1);
            for k in 0..=n {
                let lhs = binomial(n as u64, k as u64);
                let a = if k >= 1 { prev[k - 1].clone() } else { BigInt::zero() };
                let b = if k < prev.len() { prev[k].clone() } else { BigInt::zero() };
                assert_eq!(lhs, a + b, "Pascal identity failed at C({n},{k})");
            }
        }
    }

    #[test]
    fn gcd_small_values() {
        assert_eq!(gcd(6, 3), 3);
        assert_eq!(gcd(6, 4), 2);
        assert_eq!(gcd(7, 5), 1);
    }

    #[test]
    fn rat_to_enclosure_examples() {
        let e = rat_to_enclosure(&rat(1, 2), 6);
        assert_eq!(e.lo_string(), "0.500000");
        assert_eq!(e.hi_string(), "0.500000");
        assert_eq!(e.width(), BigRational::zero());

        let e = rat_to_enclosure(&rat(1, 3), 4);
        assert_eq!(e.lo_string(), "0.3333");
        assert_eq!(e.hi_string(), "0.3334");

        let e = rat_to_enclosure(&rat(76, 132), 12);
        assert!(e.contains(&rat(76, 132)));
        assert!(e.lo_string().starts_with("0.575757575757"));
    }

    #[test]
    fn enclosure_negative_formatting() {
        let e = rat_to_enclosure(&rat(-1, 3), 4);
        assert_eq!(e.lo_string(), "-0.3334");
        assert_eq!(e.hi_string(), "-0.3333");
    }

    #[test]
    fn pi_literal_brackets_pi() {
        let pi = pi_enclosure(40).unwrap();
        // The literal must sit strictly inside the 15-digit bracket
        // 3.141592653589793 < π < 3.141592653589794.
        let lo15 = BigRational::new(3141592653589793u64.into(), pow10(15));
        let hi15 = BigRational::new(3141592653589794u64.into(), pow10(15));
        assert!(pi.lo_rational() > lo15);
        assert!(pi.hi_rational() < hi15);
        assert!(pi.width() <= BigRational::new(1.into(), pow10(40)));
    }

    #[test]
    fn sqrt_pi_contains_reference_digits() {
        let sp = sqrt_pi_enclosure(16).unwrap();
        let reference = BigRational::new(1772453850905516u64.into(), pow10(15));
        // The 16-digit reference value must be within one ulp of the interval.
        let ulp = BigRational::new(1.into(), pow10(15));
        assert!(sp.lo_rational() <= &reference + &ulp);
        assert!(sp.hi_rational() >= &reference - &ulp);
        assert!(sp.contains(&reference) || sp.width() <= ulp);
        // Width certificate.
        assert!(sp.width() <= BigRational::new(100.into(), pow10(16)));
    }

    #[test]
    fn sqrt_pi_squared_brackets_pi() {
        let sp = sqrt_pi_enclosure(20).unwrap();
        let sq = sp.mul(&sp);
        let pi = pi_enclosure(30).unwrap();
        assert!(sq.contains(&pi.midpoint()));
    }

    #[test]
    fn sqrt_pi_nesting() {
        let wide = sqrt_pi_enclosure(10).unwrap();
        let tight = sqrt_pi_enclosure(16).unwrap();
        assert!(wide.contains_enclosure(&tight));
    }

    #[test]
    fn sqrt_pi_precision_guards() {
        assert!(sqrt_pi_enclosure(9).is_err());
        assert!(sqrt_pi_enclosure(39).is_err());
    }

    #[test]
    fn exp_of_zero_is_one() {
        let zero = DecimalEnclosure::from_int(0, 20);
        let e = exp_enclosure(&zero, 20).unwrap();
        assert_eq!(e.lo_string(), "1.00000000000000000000");
        assert_eq!(e.hi_string(), "1.00000000000000000000");
    }

    #[test]
    fn exp_near_minus_two_lambda() {
        // e^x for x in [-0.660478, -0.660470] stays within [0.5165, 0.5167].
        let x = DecimalEnclosure::from_endpoints(
            &rat(-660478, 1_000_000),
            &rat(-660470, 1_000_000),
            12,
        )
        .unwrap();
        let e = exp_enclosure(&x, 12).unwrap();
        assert!(e.lo_rational() >= rat(5165, 10_000));
        assert!(e.hi_rational() <= rat(5167, 10_000));
    }

    #[test]
    fn exp_range_guard() {
        let big = DecimalEnclosure::from_int(11, 6);
        assert!(exp_enclosure(&big, 6).is_err());
        let low = DecimalEnclosure::from_int(-11, 6);
        assert!(exp_enclosure(&low, 6).is_err());
    }

    #[test]
    fn interval_division_guard() {
        let a = DecimalEnclosure::from_int(1, 6);
        let b = DecimalEnclosure::from_endpoints(&rat(-1, 2), &rat(1, 2), 6).unwrap();
        assert!(a.div(&b).is_err());
    }

    #[test]
    fn central_binomial_bounds_hold() {
        // 4^n/√(πn)·(1 - 1/(8n)) <= C(2n,n) <= 4^n/√(πn)·(1 - 1/(9n)),
        // checked with enclosures strictly bracketing the exact integer.
        let precision = 30;
        let mut central = BigInt::one(); // C(0,0)
        for n in 1..=200u64 {
            central = central * BigInt::from(2 * (2 * n - 1)) / BigInt::from(n);
            let pi = pi_enclosure(precision + 2).unwrap();
            let pin = pi.mul_rational(&BigRational::from_integer(n.into()));
            let sqrt_pin = pin.sqrt_with_precision(precision).unwrap();
            let pow4 = BigRational::from_integer(BigInt::from(4u32).pow(n as u32));
            let base = rat_to_enclosure(&pow4, precision).div(&sqrt_pin).unwrap();
            let lower = base.mul_rational(&(BigRational::one() - rat(1, (8 * n) as i64)));
            let upper = base.mul_rational(&(BigRational::one() - rat(1, (9 * n) as i64)));
            let exact = BigRational::from_integer(central.clone());
            assert!(
                lower.hi_rational() < exact,
                "central binomial lower bound failed at n={n}"
            );
            assert!(
                upper.lo_rational() > exact,
                "central binomial upper bound failed at n={n}"
            );
        }
    }

    #[test]
    fn rounding_helpers() {
        assert_eq!(round_rational_string(&rat(1, 3), 4), "0.3333");
        assert_eq!(round_rational_string(&rat(2, 3), 4), "0.6667");
        assert_eq!(round_rational_string(&rat(-2, 3), 4), "-0.6667");
        assert_eq!(round_rational_string(&rat(1, 2), 0), "1");
        assert_eq!(round_rational_string(&rat(-1, 2), 0), "-1");
        assert_eq!(truncate_rational_string(&rat(2, 3), 4), "0.6666");
        assert_eq!(truncate_rational_string(&rat(-2, 3), 4), "-0.6666");
        assert_eq!(truncate_rational_string(&rat(7, 1), 2), "7.00");
    }
}
