//! Erdős–Ginzburg–Ziv numbers.
//!
//! `N_n` counts the n-element subsets of `{1, …, 2n−1}` whose sum is a
//! multiple of `n`. The closed form is a signed sum of central binomial
//! coefficients over `d = gcd(n, k)`, divided by `2n`; that division must be
//! exact, and the code asserts it on every evaluation so transcription bugs
//! surface immediately. A combination-enumeration oracle covers `n <= 13`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::{binomial, gcd, rat_to_enclosure, sqrt_pi_enclosure, DecimalEnclosure};
use crate::{Error, Result};

/// Largest `n` for which the brute-force subset enumeration is allowed.
pub const BRUTE_FORCE_MAX: u64 = 13;

/// Exact values `N_1..N_n_max`.
#[derive(Debug, Clone)]
pub struct EgzTable {
    // values[0] is an unused zero so values[n] = N_n.
    values: Vec<BigInt>,
}

impl EgzTable {
    pub fn n_max(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    /// `N_n`; panics if `n` is 0 or beyond the table.
    pub fn value(&self, n: u64) -> &BigInt {
        assert!(n >= 1 && n <= self.n_max(), "EgzTable index {n} out of range");
        &self.values[n as usize]
    }

    /// `N_1..N_n_max` in order.
    pub fn values(&self) -> &[BigInt] {
        &self.values[1..]
    }

    /// The sequence as series coefficients `(0, N_1, N_2, …)`.
    pub fn as_series_coeffs(&self) -> Vec<BigRational> {
        self.values
            .iter()
            .map(|v| BigRational::from_integer(v.clone()))
            .collect()
    }

    /// Rebuild a table from stored values `N_1..N_n_max` (cache reload path).
    pub fn from_values(values: Vec<BigInt>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("EgzTable requires at least N_1"));
        }
        let mut all = vec![BigInt::zero()];
        all.extend(values);
        Ok(EgzTable { values: all })
    }
}

fn egz_signed_sum(n: u64, flip_central_sign: bool) -> BigInt {
    let mut sum = BigInt::zero();
    for k in 1..=n {
        let d = gcd(n, k);
        let term = binomial(2 * d, d);
        let mut negative = (n + d) % 2 == 1;
        if flip_central_sign && d == n {
            negative = !negative;
        }
        if negative {
            sum -= term;
        } else {
            sum += term;
        }
    }
    sum
}

fn egz_from_sum(n: u64, sum: BigInt) -> Result<BigInt> {
    let divisor = BigInt::from(2 * n);
    let (quot, rem) = sum.div_rem(&divisor);
    if !rem.is_zero() {
        return Err(Error::consistency(
            "egz-divisibility",
            format!("signed central-binomial sum for n={n} is not divisible by 2n"),
        ));
    }
    Ok(quot)
}

/// Exact `N_n` from the signed gcd sum, asserting the division by `2n` is
/// exact.
pub fn egz_number(n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::domain("egz_number requires n >= 1"));
    }
    egz_from_sum(n, egz_signed_sum(n, false))
}

/// Mutation hook for the verification suite's self-test: evaluates the same
/// sum with the sign of the central (`d = n`) term flipped. The divisibility
/// assertion is expected to reject this for some small `n`.
#[doc(hidden)]
pub fn egz_number_mutated(n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::domain("egz_number requires n >= 1"));
    }
    egz_from_sum(n, egz_signed_sum(n, true))
}

/// Count n-element subsets of `{1, …, 2n−1}` summing to `0 (mod n)` by
/// direct depth-first enumeration of combinations. Guarded to `n <= 13`.
pub fn egz_brute_force(n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::domain("egz_brute_force requires n >= 1"));
    }
    if n > BRUTE_FORCE_MAX {
        return Err(Error::guard(format!(
            "egz_brute_force enumerates C(2n-1,n) subsets; refusing n={n} > {BRUTE_FORCE_MAX}"
        )));
    }
    let top = 2 * n - 1;
    let mut count: u64 = 0;
    // DFS over increasing elements; `remaining` elements still to pick.
    fn walk(next: u64, top: u64, remaining: u64, residue: u64, modulus: u64, count: &mut u64) {
        if remaining == 0 {
            if residue == 0 {
                *count += 1;
            }
            return;
        }
        // Not enough elements left to finish the combination.
        for v in next..=(top - remaining + 1) {
            walk(v + 1, top, remaining - 1, (residue + v) % modulus, modulus, count);
        }
    }
    walk(1, top, n, 0, n, &mut count);
    Ok(BigInt::from(count))
}

/// Certified lower/upper bounds `(1/2√π)·4^n/n^{3/2}·(1 − 1/4n)` and
/// `(1/2√π)·4^n/n^{3/2}`, valid for `n >= 10`.
pub fn egz_bounds(n: u64, precision: u32) -> Result<(DecimalEnclosure, DecimalEnclosure)> {
    if n < 10 {
        return Err(Error::domain(format!(
            "egz_bounds requires n >= 10, got {n}"
        )));
    }
    let work = (precision + 4).min(38).max(10);
    let sqrt_pi = sqrt_pi_enclosure(work)?;
    let sqrt_n = crate::exact::sqrt_rat_enclosure(&BigRational::from_integer(n.into()), work)?;
    // denominator 2√π · n · √n
    let denom = sqrt_pi
        .mul(&sqrt_n)
        .mul_rational(&BigRational::from_integer((2 * n).into()));
    let pow4n = BigRational::from_integer(BigInt::from(4u32).pow(
        u32::try_from(n).map_err(|_| Error::domain("n too large for egz_bounds"))?,
    ));
    let upper = rat_to_enclosure(&pow4n, work).div(&denom)?.with_precision(precision);
    let shrink = BigRational::one() - BigRational::new(BigInt::one(), (4 * n).into());
    let lower = upper.mul_rational(&shrink).with_precision(precision);
    Ok((lower, upper))
}

/// Euler's totient for `1..=n_max` by sieve.
fn totient_sieve(n_max: u64) -> Vec<u64> {
    let n = n_max as usize;
    let mut phi: Vec<u64> = (0..=n as u64).collect();
    for p in 2..=n {
        if phi[p] == p as u64 {
            // p is prime
            let mut m = p;
            while m <= n {
                phi[m] -= phi[m] / p as u64;
                m += p;
            }
        }
    }
    phi
}

/// Bulk table of `N_1..N_n_max`.
///
/// Groups the gcd sum by divisors: `k` with `gcd(n,k) = d` number `φ(n/d)`,
/// so only central binomials at divisors of each `n` are touched.
pub fn egz_table(n_max: u64) -> Result<EgzTable> {
    if n_max == 0 {
        return Err(Error::domain("egz_table requires n_max >= 1"));
    }
    let phi = totient_sieve(n_max);
    // Incremental central binomials C(2d, d) for d <= n_max.
    let mut central = Vec::with_capacity(n_max as usize + 1);
    central.push(BigInt::one());
    for d in 1..=n_max {
        let next = central.last().unwrap() * BigInt::from(2 * (2 * d - 1)) / BigInt::from(d);
        central.push(next);
    }
    let mut values = vec![BigInt::zero()];
    for n in 1..=n_max {
        let mut sum = BigInt::zero();
        let mut d = 1;
        while d * d <= n {
            if n % d == 0 {
                let mut divisors = vec![d];
                if d != n / d {
                    divisors.push(n / d);
                }
                for dv in divisors {
                    let term = &central[dv as usize] * BigInt::from(phi[(n / dv) as usize]);
                    if (n + dv) % 2 == 1 {
                        sum -= term;
                    } else {
                        sum += term;
                    }
                }
            }
            d += 1;
        }
        values.push(egz_from_sum(n, sum)?);
    }
    Ok(EgzTable { values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn egz_number_examples() {
        assert_eq!(egz_number(1).unwrap(), BigInt::one());
        assert_eq!(egz_number(3).unwrap(), BigInt::from(4));
        assert_eq!(egz_number(6).unwrap(), BigInt::from(76));
    }

    #[test]
    fn egz_brute_force_examples() {
        assert_eq!(egz_brute_force(1).unwrap(), BigInt::one());
        assert_eq!(egz_brute_force(2).unwrap(), BigInt::one());
        assert_eq!(egz_brute_force(6).unwrap(), BigInt::from(76));
    }

    #[test]
    fn formula_matches_brute_force() {
        for n in 1..=10 {
            assert_eq!(
                egz_number(n).unwrap(),
                egz_brute_force(n).unwrap(),
                "N_{n} mismatch"
            );
        }
    }

    #[test]
    fn brute_force_guard() {
        assert!(egz_brute_force(14).is_err());
        assert!(egz_brute_force(0).is_err());
    }

    #[test]
    fn table_small_prefix() {
        let t = egz_table(6).unwrap();
        let expect: Vec<BigInt> = [1u32, 1, 4, 9, 26, 76].iter().map(|&v| v.into()).collect();
        assert_eq!(t.values(), expect.as_slice());
    }

    #[test]
    fn table_matches_single_evaluations() {
        let t = egz_table(300).unwrap();
        for n in [1u64, 2, 17, 60, 128, 255, 300] {
            assert_eq!(t.value(n), &egz_number(n).unwrap(), "table vs direct at {n}");
        }
    }

    #[test]
    fn table_of_one() {
        let t = egz_table(1).unwrap();
        assert_eq!(t.values(), &[BigInt::one()]);
    }

    #[test]
    fn bounds_bracket_n10_and_n100() {
        let (lo, hi) = egz_bounds(10, 12).unwrap();
        let n10 = BigRational::from_integer(egz_number(10).unwrap());
        assert!(lo.hi_rational() <= n10);
        assert!(hi.lo_rational() >= n10);
        // Reference magnitudes: lower ≈ 9120.1, upper ≈ 9354.0.
        assert!(lo.lo_rational() > BigRational::from_integer(9119.into()));
        assert!(lo.hi_rational() < BigRational::from_integer(9121.into()));
        assert!(hi.lo_rational() > BigRational::from_integer(9353.into()));
        assert!(hi.hi_rational() < BigRational::from_integer(9355.into()));

        let (lo, hi) = egz_bounds(100, 12).unwrap();
        let n100 = BigRational::from_integer(egz_number(100).unwrap());
        assert!(lo.hi_rational() <= n100);
        assert!(hi.lo_rational() >= n100);
    }

    #[test]
    fn bounds_domain_error() {
        assert!(egz_bounds(9, 12).is_err());
    }

    #[test]
    fn central_term_dominates() {
        // |N_n − C(2n,n)/2n| <= n·C(n, n/2)/(2n) for n >= 10.
        for n in 10..=200u64 {
            let nn = BigRational::from_integer(egz_number(n).unwrap());
            let central = BigRational::new(binomial(2 * n, n), (2 * n).into());
            let slack = BigRational::new(
                BigInt::from(n) * binomial(n, n / 2),
                (2 * n).into(),
            );
            assert!((nn - central).abs() <= slack, "central-term bound failed at {n}");
        }
    }

    #[test]
    fn mutated_evaluation_trips_divisibility() {
        let mut tripped = false;
        for n in 1..=12 {
            match egz_number_mutated(n) {
                Err(Error::Consistency { check, .. }) => {
                    assert_eq!(check, "egz-divisibility");
                    tripped = true;
                    break;
                }
                _ => continue,
            }
        }
        assert!(tripped, "sign-flip mutation was not caught by divisibility");
    }
}
