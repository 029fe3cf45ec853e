//! Score-sequence counts and exact series transforms.
//!
//! `S_n` counts tournament score sequences on `K_n`. It satisfies the
//! convolution recurrence `n·S_n = Σ_{k=1}^n N_k·S_{n−k}` with `S_0 = 1`,
//! which is the statement that `(N_n)` is the log transform of `(S_n)`.
//! [`ExactSeries`] carries the generic transform machinery (log/exp,
//! convolution powers and roots) in exact rationals; the `S` table itself
//! stays in big integers with the divisibility of the recurrence asserted at
//! every step.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::egz::EgzTable;
use crate::{Error, Result};

/// A finite prefix of a formal power series with exact rational coefficients,
/// indexed from 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSeries {
    coeffs: Vec<BigRational>,
}

impl ExactSeries {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        ExactSeries { coeffs }
    }

    pub fn from_integers(values: &[BigInt]) -> Self {
        ExactSeries {
            coeffs: values
                .iter()
                .map(|v| BigRational::from_integer(v.clone()))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^i`, zero beyond the stored prefix.
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        ExactSeries {
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Full polynomial product (length `len_a + len_b − 1`).
    pub fn convolve(&self, other: &Self) -> Self {
        if self.is_empty() || other.is_empty() {
            return ExactSeries { coeffs: vec![] };
        }
        self.convolve_truncated(other, self.len() + other.len() - 1)
    }

    /// Product truncated to the first `len` coefficients.
    pub fn convolve_truncated(&self, other: &Self, len: usize) -> Self {
        let mut out = vec![BigRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                out[i + j] += a * b;
            }
        }
        ExactSeries { coeffs: out }
    }

    /// `r`-fold convolution power, `r >= 1`.
    pub fn convolution_power(&self, r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::domain("convolution_power requires r >= 1"));
        }
        let mut acc = self.clone();
        for _ in 1..r {
            acc = acc.convolve(self);
        }
        Ok(acc)
    }

    /// `r`-fold convolution power truncated to `len` coefficients.
    pub fn convolution_power_truncated(&self, r: u32, len: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::domain("convolution_power requires r >= 1"));
        }
        let mut acc = ExactSeries {
            coeffs: self.coeffs.iter().take(len).cloned().collect(),
        };
        for _ in 1..r {
            acc = acc.convolve_truncated(self, len);
        }
        Ok(acc)
    }

    /// The log transform: the unique series `â` with `â_0 = 0` satisfying
    /// `n·a_n = Σ_{k=1}^n â_k·a_{n−k}`. Requires `a_0 = 1`.
    pub fn log_transform(&self) -> Result<Self> {
        if self.coeff(0) != BigRational::one() {
            return Err(Error::domain("log_transform requires a_0 = 1"));
        }
        let n = self.len();
        let mut hat = vec![BigRational::zero(); n];
        for i in 1..n {
            let mut acc = BigRational::from_integer(i.into()) * &self.coeffs[i];
            for k in 1..i {
                acc -= &hat[k] * &self.coeffs[i - k];
            }
            hat[i] = acc; // a_0 = 1, so the k = i term is â_i itself
        }
        Ok(ExactSeries { coeffs: hat })
    }

    /// Inverse of [`log_transform`](Self::log_transform): reconstructs `a`
    /// from `â` via `a_n = (1/n)·Σ_{k=1}^n â_k·a_{n−k}`. Requires `â_0 = 0`.
    pub fn exp_transform(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::domain("exp_transform requires hat_a_0 = 0"));
        }
        let n = self.len();
        let mut a = vec![BigRational::zero(); n];
        if n > 0 {
            a[0] = BigRational::one();
        }
        for i in 1..n {
            let mut acc = BigRational::zero();
            for k in 1..=i {
                acc += &self.coeffs[k] * &a[i - k];
            }
            a[i] = acc / BigRational::from_integer(i.into());
        }
        Ok(ExactSeries { coeffs: a })
    }

    /// `r`-th convolution root: the series `b` with `b^{*r} = a`, computed as
    /// the exp transform of `log_transform(a)/r`. Requires `a_0 = 1`.
    pub fn convolution_root(&self, r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::domain("convolution_root requires r >= 1"));
        }
        let hat = self.log_transform()?;
        let scaled = hat.scale(&BigRational::new(BigInt::one(), r.into()));
        scaled.exp_transform()
    }
}

/// Exact values `S_0..S_n_max`.
#[derive(Debug, Clone)]
pub struct ScoreTable {
    values: Vec<BigInt>,
}

impl ScoreTable {
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    /// `S_n`; panics beyond the table.
    pub fn value(&self, n: usize) -> &BigInt {
        &self.values[n]
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn as_series(&self) -> ExactSeries {
        ExactSeries::from_integers(&self.values)
    }

    /// Rebuild from stored values `S_0..S_n_max` (cache reload path).
    pub fn from_values(values: Vec<BigInt>) -> Result<Self> {
        if values.first() != Some(&BigInt::one()) {
            return Err(Error::domain("ScoreTable requires S_0 = 1"));
        }
        Ok(ScoreTable { values })
    }
}

/// Exact `S_0..S_n_max` from the convolution recurrence
/// `n·S_n = Σ_{k=1}^n N_k·S_{n−k}`, asserting divisibility by `n` at each
/// step. The EGZ table must cover `n_max`.
pub fn count_scores(egz: &EgzTable, n_max: usize) -> Result<ScoreTable> {
    if n_max > 0 && egz.n_max() < n_max as u64 {
        return Err(Error::domain(format!(
            "count_scores({n_max}) needs EGZ values to {n_max}, table has {}",
            egz.n_max()
        )));
    }
    let mut values = vec![BigInt::one()];
    for n in 1..=n_max {
        let mut acc = BigInt::zero();
        for k in 1..=n {
            acc += egz.value(k as u64) * &values[n - k];
        }
        let (quot, rem) = acc.div_rem(&BigInt::from(n));
        if !rem.is_zero() {
            return Err(Error::consistency(
                "scores-recurrence-divisibility",
                format!("Σ N_k·S_(n−k) not divisible by n at n={n}"),
            ));
        }
        values.push(quot);
    }
    Ok(ScoreTable { values })
}

fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Largest `n` accepted by the partition-enumeration cross-check.
pub const CYCLE_TYPE_MAX: u64 = 20;

/// `S_n` via the cycle-type sum over integer partitions of `n`:
/// `Σ_λ Π_ℓ N_ℓ^{m_ℓ} / Π_ℓ (ℓ^{m_ℓ}·m_ℓ!)` where `m_ℓ` is the multiplicity
/// of part `ℓ`. The rational total is asserted to be an integer.
pub fn scores_via_cycle_types(egz: &EgzTable, n: u64) -> Result<BigInt> {
    if n == 0 || n > CYCLE_TYPE_MAX {
        return Err(Error::guard(format!(
            "scores_via_cycle_types supports 1..={CYCLE_TYPE_MAX}, got {n}"
        )));
    }
    if egz.n_max() < n {
        return Err(Error::domain("EGZ table too short for cycle-type sum"));
    }

    // Enumerate partitions as (part, multiplicity) lists, parts descending.
    let mut total = BigRational::zero();
    let mut parts: Vec<(u64, u64)> = Vec::new();
    fn recurse(
        remaining: u64,
        max_part: u64,
        parts: &mut Vec<(u64, u64)>,
        egz: &EgzTable,
        total: &mut BigRational,
    ) {
        if remaining == 0 {
            let mut num = BigInt::one();
            let mut den = BigInt::one();
            for &(part, mult) in parts.iter() {
                num *= egz.value(part).pow(mult as u32);
                den *= BigInt::from(part).pow(mult as u32) * factorial(mult);
            }
            *total += BigRational::new(num, den);
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            let max_mult = remaining / part;
            for mult in 1..=max_mult {
                parts.push((part, mult));
                recurse(remaining - part * mult, part - 1, parts, egz, total);
                parts.pop();
            }
        }
    }
    recurse(n, n, &mut parts, egz, &mut total);

    if !total.is_integer() {
        return Err(Error::consistency(
            "cycle-type-integrality",
            format!("cycle-type sum for n={n} is not an integer"),
        ));
    }
    Ok(total.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::egz::egz_table;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn int_series(vals: &[i64]) -> ExactSeries {
        ExactSeries::new(vals.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    #[test]
    fn count_scores_small() {
        let egz = egz_table(6).unwrap();
        let t = count_scores(&egz, 3).unwrap();
        let expect: Vec<BigInt> = [1, 1, 1, 2].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(t.values(), expect.as_slice());

        let t = count_scores(&egz, 6).unwrap();
        assert_eq!(t.value(6), &BigInt::from(22));

        let t = count_scores(&egz, 0).unwrap();
        assert_eq!(t.values(), &[BigInt::one()]);
    }

    #[test]
    fn log_transform_of_scores_is_egz() {
        let egz = egz_table(20).unwrap();
        let scores = count_scores(&egz, 20).unwrap();
        let hat = scores.as_series().log_transform().unwrap();
        assert!(hat.coeff(0).is_zero());
        for n in 1..=20usize {
            assert_eq!(
                hat.coeff(n),
                BigRational::from_integer(egz.value(n as u64).clone()),
                "log transform mismatch at {n}"
            );
        }
    }

    #[test]
    fn log_transform_geometric_fixed_point() {
        // a_n = c^n has log transform â_n = c^n (n >= 1).
        let c = rat(3, 2);
        let coeffs: Vec<BigRational> = (0..15u32).map(|n| c.pow(n as i32)).collect();
        let hat = ExactSeries::new(coeffs.clone()).log_transform().unwrap();
        for n in 1..15usize {
            assert_eq!(hat.coeff(n), coeffs[n]);
        }
    }

    #[test]
    fn log_transform_of_unit_series_is_zero() {
        let a = int_series(&[1, 0, 0, 0, 0]);
        let hat = a.log_transform().unwrap();
        assert!(hat.coeffs().iter().all(|c| c.is_zero()));
    }

    #[test]
    fn log_transform_requires_unit_constant_term() {
        assert!(int_series(&[2, 1]).log_transform().is_err());
        assert!(int_series(&[0, 1]).exp_transform().is_ok());
        assert!(int_series(&[1, 1]).exp_transform().is_err());
    }

    #[test]
    fn exp_transform_examples() {
        let egz = egz_table(15).unwrap();
        let scores = count_scores(&egz, 15).unwrap();
        let mut hat_coeffs = egz.as_series_coeffs();
        hat_coeffs.truncate(16);
        let rebuilt = ExactSeries::new(hat_coeffs).exp_transform().unwrap();
        for n in 0..=15usize {
            assert_eq!(
                rebuilt.coeff(n),
                BigRational::from_integer(scores.value(n).clone())
            );
        }

        let zero_hat = int_series(&[0, 0, 0, 0]);
        let a = zero_hat.exp_transform().unwrap();
        assert_eq!(a.coeff(0), BigRational::one());
        assert!(a.coeffs()[1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn transforms_round_trip() {
        let a = ExactSeries::new(
            std::iter::once(BigRational::one())
                .chain((1..30i64).map(|n| rat(n * n % 7 + 1, n + 2)))
                .collect(),
        );
        let back = a.log_transform().unwrap().exp_transform().unwrap();
        assert_eq!(a, back);
        let hat = ExactSeries::new(
            std::iter::once(BigRational::zero())
                .chain((1..30i64).map(|n| rat(n % 5, n)))
                .collect(),
        );
        let back = hat.exp_transform().unwrap().log_transform().unwrap();
        assert_eq!(hat, back);
    }

    #[test]
    fn convolution_power_examples() {
        let shift = int_series(&[0, 1, 0]);
        let sq = shift.convolution_power(2).unwrap();
        assert_eq!(sq.coeff(2), BigRational::one());
        assert!(sq.coeff(1).is_zero() && sq.coeff(3).is_zero());

        let ones = int_series(&[1, 1]);
        let sq = ones.convolution_power(2).unwrap();
        assert_eq!(sq, int_series(&[1, 2, 1]));

        assert!(ones.convolution_power(0).is_err());
    }

    #[test]
    fn convolution_root_round_trip() {
        let egz = egz_table(40).unwrap();
        let scores = count_scores(&egz, 40).unwrap();
        let series = scores.as_series();
        for r in [1u32, 3] {
            let root = series.convolution_root(r).unwrap();
            let back = root.convolution_power_truncated(r, 41).unwrap();
            assert_eq!(back, series, "convolution root round trip failed for r={r}");
        }
    }

    #[test]
    fn score_series_roots_are_nonnegative() {
        // Infinite divisibility: every convolution root of S has nonnegative
        // coefficients, spot-checked for r in {2, 3, 5} to length 40.
        let egz = egz_table(40).unwrap();
        let series = count_scores(&egz, 40).unwrap().as_series();
        for r in [2u32, 3, 5] {
            let root = series.convolution_root(r).unwrap();
            assert!(
                root.coeffs().iter().all(|c| c >= &BigRational::zero()),
                "negative coefficient in {r}-th root"
            );
        }
    }

    #[test]
    fn cycle_type_examples() {
        let egz = egz_table(20).unwrap();
        assert_eq!(scores_via_cycle_types(&egz, 1).unwrap(), BigInt::one());
        assert_eq!(scores_via_cycle_types(&egz, 3).unwrap(), BigInt::from(2));
        assert_eq!(scores_via_cycle_types(&egz, 6).unwrap(), BigInt::from(22));
        assert!(scores_via_cycle_types(&egz, 21).is_err());
    }

    #[test]
    fn cycle_type_matches_recurrence() {
        let egz = egz_table(12).unwrap();
        let scores = count_scores(&egz, 12).unwrap();
        for n in 1..=12u64 {
            assert_eq!(
                &scores_via_cycle_types(&egz, n).unwrap(),
                scores.value(n as usize),
                "cycle-type route differs at n={n}"
            );
        }
    }

    #[test]
    fn scores_positive_and_nondecreasing() {
        let egz = egz_table(60).unwrap();
        let scores = count_scores(&egz, 60).unwrap();
        for n in 1..=60usize {
            assert!(scores.value(n) >= &BigInt::one());
            if n >= 2 {
                assert!(scores.value(n) >= scores.value(n - 1));
            }
        }
    }
}
