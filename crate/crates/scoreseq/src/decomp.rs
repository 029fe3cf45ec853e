//! Irreducible decomposition of score sequences.
//!
//! Every score sequence splits at the indices where its prefix sum meets the
//! Landau lower bound `C(k,2)`; `S_{n,m}` counts the sequences with exactly
//! `m` such blocks. The strong (one-block) counts `S_{n,1}` determine the
//! whole table: the generating function of column `m` is the `m`-th power of
//! the strong one, equivalently `S(x) = 1/(1 − S_1(x))`.
//!
//! Counts are integers but flow through the exact-rational series machinery
//! (one code path for transforms and powers); integrality is asserted on the
//! way out.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::egz::EgzTable;
use crate::scores::{ExactSeries, ScoreTable};
use crate::{Error, Result};

/// Default cap on the number of irreducible blocks tracked for pmf work.
/// The untracked tail mass is always reported exactly.
pub const DEFAULT_M_MAX: usize = 40;

/// Strong counts `S_{n,1}` as a series with zero constant term.
///
/// Uses `S_{n,1} = S_n − Σ_{k=1}^{n−1} S_{k,1}·S_{n−k}`, the coefficient form
/// of `S_1(x) = 1 − 1/S(x)`. Any negative coefficient is an internal error.
pub fn strong_series(scores: &ScoreTable) -> Result<ExactSeries> {
    let n_max = scores.n_max();
    let mut strong: Vec<BigInt> = vec![BigInt::zero(); n_max + 1];
    for n in 1..=n_max {
        let mut acc = scores.value(n).clone();
        for k in 1..n {
            acc -= &strong[k] * scores.value(n - k);
        }
        if acc.is_negative() {
            return Err(Error::consistency(
                "strong-nonnegative",
                format!("S_(n,1) came out negative at n={n}"),
            ));
        }
        strong[n] = acc;
    }
    Ok(ExactSeries::from_integers(&strong))
}

/// Exact table of `S_{n,m}` for `1 <= m <= min(n, m_max)`, `n <= n_max`.
#[derive(Debug, Clone)]
pub struct SubscoreTable {
    n_max: usize,
    m_max: usize,
    // columns[m-1][n] = S_{n,m}
    columns: Vec<Vec<BigInt>>,
    // totals[n] = S_n, kept for row sums and probabilities
    totals: Vec<BigInt>,
}

impl SubscoreTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    /// `S_{n,m}`; zero for `m > n` within the tracked range.
    pub fn count(&self, n: usize, m: usize) -> &BigInt {
        assert!(n <= self.n_max, "n={n} beyond table");
        assert!(m >= 1 && m <= self.m_max, "m={m} beyond table");
        &self.columns[m - 1][n]
    }

    /// `S_n` as stored alongside the table.
    pub fn total(&self, n: usize) -> &BigInt {
        &self.totals[n]
    }

    /// Row `n` as `(S_{n,1}, …, S_{n,min(n,m_max)})`.
    pub fn row(&self, n: usize) -> Vec<BigInt> {
        (1..=self.m_max.min(n))
            .map(|m| self.count(n, m).clone())
            .collect()
    }

    /// Sum of the tracked entries of row `n` (equals `S_n` when `m_max >= n`).
    pub fn row_sum(&self, n: usize) -> BigInt {
        self.row(n).iter().sum()
    }
}

/// Build the `S_{n,m}` table from a score table: column `m` is the `m`-th
/// convolution power of the strong series, computed incrementally and
/// asserted integral.
pub fn subscore_counts(scores: &ScoreTable, m_max: usize) -> Result<SubscoreTable> {
    if m_max == 0 {
        return Err(Error::domain("subscore_counts requires m_max >= 1"));
    }
    let n_max = scores.n_max();
    let strong = strong_series(scores)?;
    let len = n_max + 1;

    let to_ints = |series: &ExactSeries, m: usize| -> Result<Vec<BigInt>> {
        series
            .coeffs()
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::consistency(
                        "subscore-integrality",
                        format!("S_({n},{m}) is not an integer"),
                    ))
                }
            })
            .collect()
    };

    let mut columns = Vec::with_capacity(m_max);
    let mut current = strong.clone();
    columns.push(to_ints(&current, 1)?);
    for m in 2..=m_max {
        current = current.convolve_truncated(&strong, len);
        columns.push(to_ints(&current, m)?);
    }
    Ok(SubscoreTable {
        n_max,
        m_max,
        columns,
        totals: scores.values().to_vec(),
    })
}

/// Evaluate `n·Σ_m S_{n,m}/m` exactly and assert it equals `N_n`, returning
/// the common value. The table must track all `m <= n`.
pub fn verify_egz_identity(table: &SubscoreTable, egz: &EgzTable, n: usize) -> Result<BigInt> {
    if n == 0 || n > table.n_max() {
        return Err(Error::domain(format!("n={n} outside subscore table")));
    }
    if table.m_max() < n {
        return Err(Error::domain(format!(
            "identity at n={n} needs m_max >= n, table has {}",
            table.m_max()
        )));
    }
    let mut acc = BigRational::zero();
    for m in 1..=n {
        acc += BigRational::new(table.count(n, m).clone(), m.into());
    }
    acc *= BigRational::from_integer(n.into());
    let expected = egz.value(n as u64);
    if !acc.is_integer() || &acc.to_integer() != expected {
        return Err(Error::verification(
            "egz-subscore-identity",
            format!("n·Σ S_(n,m)/m disagrees with N_n at n={n}"),
        ));
    }
    Ok(acc.to_integer())
}

/// Exact distribution of the irreducible-block count of a uniformly random
/// score sequence on `K_n`, truncated at the table's `m_max` with the tail
/// mass reported exactly.
#[derive(Debug, Clone)]
pub struct SubscorePmf {
    n: usize,
    probs: BTreeMap<usize, BigRational>,
    tail: BigRational,
}

impl SubscorePmf {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Probabilities `m -> S_{n,m}/S_n` for the tracked `m` (zeros included).
    pub fn probs(&self) -> &BTreeMap<usize, BigRational> {
        &self.probs
    }

    pub fn prob(&self, m: usize) -> BigRational {
        self.probs.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Exact untracked mass `1 − Σ tracked`; zero whenever `m_max >= n`.
    pub fn tail(&self) -> &BigRational {
        &self.tail
    }

    /// Mean over the tracked support (exact whenever `tail` is zero).
    pub fn mean(&self) -> BigRational {
        self.probs
            .iter()
            .map(|(m, p)| BigRational::from_integer((*m).into()) * p)
            .sum()
    }

    /// Variance over the tracked support (exact whenever `tail` is zero).
    pub fn variance(&self) -> BigRational {
        let mean = self.mean();
        let second: BigRational = self
            .probs
            .iter()
            .map(|(m, p)| BigRational::from_integer((*m * *m).into()) * p)
            .sum();
        second - &mean * &mean
    }

    /// `E[1/I_n]` over the tracked support (exact whenever `tail` is zero).
    pub fn mean_inverse(&self) -> BigRational {
        self.probs
            .iter()
            .map(|(m, p)| p / BigRational::from_integer((*m).into()))
            .sum()
    }
}

/// The pmf `P(I_n = m) = S_{n,m}/S_n` for `m <= min(n, m_max)`.
pub fn subscore_pmf(table: &SubscoreTable, n: usize) -> Result<SubscorePmf> {
    if n == 0 || n > table.n_max() {
        return Err(Error::domain(format!("n={n} outside subscore table")));
    }
    let total = table.total(n).clone();
    let m_cut = table.m_max().min(n);
    let mut probs = BTreeMap::new();
    let mut sum = BigRational::zero();
    for m in 1..=m_cut {
        let p = BigRational::new(table.count(n, m).clone(), total.clone());
        sum += &p;
        probs.insert(m, p);
    }
    let tail = BigRational::one() - sum;
    if tail.is_negative() {
        return Err(Error::consistency(
            "pmf-mass",
            format!("tracked pmf mass exceeds 1 at n={n}"),
        ));
    }
    Ok(SubscorePmf { n, probs, tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::egz::egz_table;
    use crate::scores::count_scores;

    fn tables(n_max: usize, m_max: usize) -> (EgzTable, ScoreTable, SubscoreTable) {
        let egz = egz_table(n_max as u64).unwrap();
        let scores = count_scores(&egz, n_max).unwrap();
        let table = subscore_counts(&scores, m_max).unwrap();
        (egz, scores, table)
    }

    #[test]
    fn strong_series_small_values() {
        let egz = egz_table(6).unwrap();
        let scores = count_scores(&egz, 6).unwrap();
        let strong = strong_series(&scores).unwrap();
        assert!(strong.coeff(0).is_zero());
        assert_eq!(strong.coeff(1), BigRational::one());
        assert!(strong.coeff(2).is_zero());
        assert_eq!(strong.coeff(6), BigRational::from_integer(7.into()));
    }

    #[test]
    fn strong_series_rejects_bad_table() {
        // A fake "score table" that forces a negative strong count.
        let bad = ScoreTable::from_values(vec![
            BigInt::one(),
            BigInt::from(5),
            BigInt::from(1),
        ])
        .unwrap();
        match strong_series(&bad) {
            Err(Error::Consistency { check, .. }) => assert_eq!(check, "strong-nonnegative"),
            other => panic!("expected consistency error, got {other:?}"),
        }
    }

    #[test]
    fn subscore_row_six() {
        let (_, _, table) = tables(6, 6);
        let row: Vec<BigInt> = table.row(6);
        let expect: Vec<BigInt> = [7, 7, 3, 4, 0, 1].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(row, expect);
    }

    #[test]
    fn subscore_diagonals() {
        let (_, _, table) = tables(12, 12);
        for n in 1..=12usize {
            assert_eq!(table.count(n, n), &BigInt::one(), "S_(n,n) at n={n}");
            if n >= 2 {
                assert_eq!(table.count(n, n - 1), &BigInt::zero(), "S_(n,n-1) at n={n}");
            }
        }
    }

    #[test]
    fn row_sums_match_totals() {
        let (_, scores, table) = tables(40, 40);
        for n in 1..=40usize {
            assert_eq!(&table.row_sum(n), scores.value(n), "row sum at n={n}");
        }
    }

    #[test]
    fn egz_identity_examples() {
        let (egz, _, table) = tables(50, 50);
        assert_eq!(verify_egz_identity(&table, &egz, 6).unwrap(), BigInt::from(76));
        assert_eq!(verify_egz_identity(&table, &egz, 1).unwrap(), BigInt::one());
        let n50 = verify_egz_identity(&table, &egz, 50).unwrap();
        assert_eq!(&n50, egz.value(50));
    }

    #[test]
    fn egz_identity_term_display_matches() {
        // 6·Σ S_(6,m)/m = 42 + 21 + 6 + 6 + 0 + 1 = 76.
        let (_, _, table) = tables(6, 6);
        let terms: Vec<BigRational> = (1..=6usize)
            .map(|m| {
                BigRational::new(table.count(6, m).clone() * BigInt::from(6), m.into())
            })
            .collect();
        let expect = [42, 21, 6, 6, 0, 1];
        for (t, e) in terms.iter().zip(expect) {
            assert_eq!(t, &BigRational::from_integer(e.into()));
        }
    }

    #[test]
    fn pmf_at_six() {
        let (_, _, table) = tables(6, 6);
        let pmf = subscore_pmf(&table, 6).unwrap();
        let expect = [(1, 7), (2, 7), (3, 3), (4, 4), (5, 0), (6, 1)];
        for (m, num) in expect {
            assert_eq!(pmf.prob(m), BigRational::new(num.into(), 22.into()));
        }
        assert!(pmf.tail().is_zero());
        assert_eq!(pmf.mean(), BigRational::new(52.into(), 22.into()));
        assert_eq!(pmf.mean_inverse(), BigRational::new(76.into(), 132.into()));
    }

    #[test]
    fn pmf_at_one() {
        let (_, _, table) = tables(4, 4);
        let pmf = subscore_pmf(&table, 1).unwrap();
        assert_eq!(pmf.prob(1), BigRational::one());
        assert_eq!(pmf.mean(), BigRational::one());
        assert!(pmf.tail().is_zero());
    }

    #[test]
    fn truncated_pmf_reports_tail() {
        let (_, _, table) = tables(12, 3);
        let pmf = subscore_pmf(&table, 12).unwrap();
        let tracked: BigRational = pmf.probs().values().cloned().sum();
        assert_eq!(tracked + pmf.tail().clone(), BigRational::one());
        assert!(pmf.tail() > &BigRational::zero());
    }

    #[test]
    fn mean_inverse_equals_egz_ratio() {
        // E[1/I_n] = N_n/(n·S_n), exactly, for full rows.
        let (egz, scores, table) = tables(30, 30);
        for n in 1..=30usize {
            let pmf = subscore_pmf(&table, n).unwrap();
            let rhs = BigRational::new(
                egz.value(n as u64).clone(),
                BigInt::from(n) * scores.value(n),
            );
            assert_eq!(pmf.mean_inverse(), rhs, "E[1/I] identity at n={n}");
        }
    }

    #[test]
    fn generating_identity_spot_check() {
        // [x^n] S_1(x)^m recomputed independently matches the table.
        let (_, scores, table) = tables(30, 8);
        let strong = strong_series(&scores).unwrap();
        for m in 1..=8u32 {
            let power = strong.convolution_power_truncated(m, 31).unwrap();
            for n in 1..=30usize {
                assert_eq!(
                    power.coeff(n),
                    BigRational::from_integer(table.count(n, m as usize).clone()),
                    "generating identity at n={n}, m={m}"
                );
            }
        }
    }
}
