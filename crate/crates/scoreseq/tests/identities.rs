//! Cross-module identities at exact (zero-tolerance) equality.
//!
//! Everything here pits two independently coded routes against each other:
//! recurrence vs. enumeration, series transforms vs. tables, generating
//! functions vs. direct convolution.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use scoreseq::decomp::{strong_series, subscore_counts, subscore_pmf, verify_egz_identity};
use scoreseq::egz::{egz_brute_force, egz_number, egz_table};
use scoreseq::oracle::{count_by_subscores_brute, enumerate_scores, sample_uniform};
use scoreseq::scores::{count_scores, scores_via_cycle_types, ExactSeries};

#[test]
fn log_transform_of_scores_reproduces_egz_to_200() {
    let egz = egz_table(200).unwrap();
    let scores = count_scores(&egz, 200).unwrap();
    let hat = scores.as_series().log_transform().unwrap();
    for n in 1..=200usize {
        assert_eq!(
            hat.coeff(n),
            BigRational::from_integer(egz.value(n as u64).clone()),
            "Eq-style log transform identity failed at n={n}"
        );
    }
}

#[test]
fn oracle_equivalences_to_9() {
    let egz = egz_table(9).unwrap();
    let scores = count_scores(&egz, 9).unwrap();
    let table = subscore_counts(&scores, 9).unwrap();
    for n in 1..=9usize {
        assert_eq!(&egz_number(n as u64).unwrap(), egz.value(n as u64));
        assert_eq!(egz_brute_force(n as u64).unwrap(), egz_number(n as u64).unwrap());
        let all = enumerate_scores(n).unwrap();
        assert_eq!(BigInt::from(all.len()), scores.value(n).clone());
        let hist = count_by_subscores_brute(n).unwrap();
        for m in 1..=n {
            let brute = hist.get(&m).cloned().unwrap_or_else(BigInt::zero);
            assert_eq!(&brute, table.count(n, m), "S_({n},{m}) vs enumeration");
        }
    }
}

#[test]
fn proposition_identity_to_60() {
    let egz = egz_table(60).unwrap();
    let scores = count_scores(&egz, 60).unwrap();
    let table = subscore_counts(&scores, 60).unwrap();
    for n in 1..=60usize {
        let v = verify_egz_identity(&table, &egz, n).unwrap();
        assert_eq!(&v, egz.value(n as u64));
    }
}

#[test]
fn row_sums_equal_scores_to_60() {
    let egz = egz_table(60).unwrap();
    let scores = count_scores(&egz, 60).unwrap();
    let table = subscore_counts(&scores, 60).unwrap();
    for n in 1..=60usize {
        assert_eq!(&table.row_sum(n), scores.value(n));
    }
}

#[test]
fn renewal_lemma_consistency_to_60() {
    // The generic log transform of S must match n·Σ_m (1/m)[x^n] S_1(x)^m.
    let egz = egz_table(60).unwrap();
    let scores = count_scores(&egz, 60).unwrap();
    let strong = strong_series(&scores).unwrap();
    let hat = scores.as_series().log_transform().unwrap();

    let mut powers: Vec<ExactSeries> = Vec::with_capacity(61);
    powers.push(strong.clone());
    for _ in 1..60 {
        let next = powers.last().unwrap().convolve_truncated(&strong, 61);
        powers.push(next);
    }
    for n in 1..=60usize {
        let mut acc = BigRational::zero();
        for m in 1..=n {
            acc += powers[m - 1].coeff(n) / BigRational::from_integer(m.into());
        }
        acc *= BigRational::from_integer(n.into());
        assert_eq!(acc, hat.coeff(n), "renewal lemma failed at n={n}");
    }
}

#[test]
fn cycle_type_route_to_15() {
    let egz = egz_table(15).unwrap();
    let scores = count_scores(&egz, 15).unwrap();
    for n in 1..=15u64 {
        assert_eq!(
            &scores_via_cycle_types(&egz, n).unwrap(),
            scores.value(n as usize)
        );
    }
}

#[test]
fn sampler_histogram_tracks_exact_pmf_smoke() {
    // Small smoke version of the sampler acceptance check: n = 6, 20k draws,
    // every bin within 5 binomial standard deviations of the exact pmf.
    let egz = egz_table(6).unwrap();
    let scores = count_scores(&egz, 6).unwrap();
    let table = subscore_counts(&scores, 6).unwrap();
    let pmf = subscore_pmf(&table, 6).unwrap();

    let draws = 20_000usize;
    let samples = sample_uniform(6, 2024, draws).unwrap();
    let mut hist = vec![0usize; 7];
    for s in &samples {
        hist[scoreseq::oracle::irreducible_count(&s)] += 1;
    }
    for m in 1..=6usize {
        let p = pmf.prob(m);
        let pf = rational_to_f64(&p);
        let expected = draws as f64 * pf;
        let sigma = (draws as f64 * pf * (1.0 - pf)).sqrt();
        let got = hist[m] as f64;
        if sigma == 0.0 {
            assert_eq!(got, expected, "deterministic bin m={m}");
        } else {
            assert!(
                (got - expected).abs() <= 5.0 * sigma,
                "bin m={m}: got {got}, expected {expected} ± {sigma}"
            );
        }
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap()
}

#[test]
fn subset_images_are_distinct_up_to_9() {
    use std::collections::BTreeSet;
    for n in 1..=9usize {
        let all = enumerate_scores(n).unwrap();
        let images: BTreeSet<Vec<u64>> = all
            .iter()
            .map(|s| scoreseq::oracle::score_to_subset(s).unwrap())
            .collect();
        assert_eq!(images.len(), all.len(), "bijection failed at n={n}");
        for img in &images {
            assert_eq!(img.iter().sum::<u64>(), (n * n) as u64);
        }
    }
}

#[test]
fn completion_counts_match_recurrence_to_16() {
    let egz = egz_table(16).unwrap();
    let scores = count_scores(&egz, 16).unwrap();
    for n in [1usize, 5, 12, 16] {
        let table = scoreseq::oracle::completion_counts(n).unwrap();
        assert_eq!(table.total(), scores.value(n), "DP total at n={n}");
    }
}

#[test]
fn strong_series_constant_term_and_ones() {
    let egz = egz_table(25).unwrap();
    let scores = count_scores(&egz, 25).unwrap();
    let strong = strong_series(&scores).unwrap();
    assert!(strong.coeff(0).is_zero());
    assert_eq!(strong.coeff(1), BigRational::one());
    // S_{2,1} = 0: no strong sequence on two teams.
    assert!(strong.coeff(2).is_zero());
}
