//! Cached construction of the three persisted sequences.

use num_bigint::BigInt;
use scoreseq::egz::{egz_table, EgzTable};
use scoreseq::scores::{count_scores, ExactSeries, ScoreTable};
use scoreseq::Result;

use crate::cache::Cache;

pub fn egz_cached(cache: &Cache, n_max: u64) -> Result<EgzTable> {
    if let Some(values) = cache.load("egz", n_max) {
        let trimmed: Vec<BigInt> = values.into_iter().take(n_max as usize).collect();
        if trimmed.len() == n_max as usize {
            return EgzTable::from_values(trimmed);
        }
    }
    let table = egz_table(n_max)?;
    cache.store("egz", n_max, table.values());
    Ok(table)
}

pub fn scores_cached(cache: &Cache, egz: &EgzTable, n_max: usize) -> Result<ScoreTable> {
    if let Some(values) = cache.load("scores", n_max as u64) {
        let trimmed: Vec<BigInt> = values.into_iter().take(n_max + 1).collect();
        if trimmed.len() == n_max + 1 {
            if let Ok(table) = ScoreTable::from_values(trimmed) {
                return Ok(table);
            }
        }
    }
    let table = count_scores(egz, n_max)?;
    cache.store("scores", n_max as u64, table.values());
    Ok(table)
}

pub fn strong_cached(cache: &Cache, scores: &ScoreTable) -> Result<ExactSeries> {
    let n_max = scores.n_max() as u64;
    if let Some(values) = cache.load("strong", n_max) {
        let trimmed: Vec<BigInt> = values.into_iter().take(n_max as usize).collect();
        if trimmed.len() == n_max as usize {
            let mut with_zero = vec![BigInt::from(0)];
            with_zero.extend(trimmed);
            return Ok(ExactSeries::from_integers(&with_zero));
        }
    }
    let strong = scoreseq::decomp::strong_series(scores)?;
    let ints: Vec<BigInt> = strong.coeffs()[1..]
        .iter()
        .map(|c| {
            debug_assert!(c.is_integer());
            c.to_integer()
        })
        .collect();
    cache.store("strong", n_max, &ints);
    Ok(strong)
}
