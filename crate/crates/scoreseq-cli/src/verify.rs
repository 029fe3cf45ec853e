//! The `verify` subcommand: the cross-module identity suite.
//!
//! Always recomputes from scratch (no cache) so the checks validate the
//! build, not a file. Exit code 0 means every check passed; 2 means at
//! least one named invariant failed.
//!
//! Setting `SCORESEQ_FAULT=egz-sign-flip` injects a sign-flip mutation into
//! the EGZ formula evaluation used by the first check; this exists so the
//! suite's own sensitivity can be exercised end to end.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use scoreseq::asympt::lambda_enclosure;
use scoreseq::decomp::{subscore_counts, verify_egz_identity};
use scoreseq::egz::{egz_bounds, egz_brute_force, egz_number, egz_number_mutated, egz_table};
use scoreseq::exact::{pi_enclosure, rat_to_enclosure};
use scoreseq::oracle::{count_by_subscores_brute, enumerate_scores, score_to_subset};
use scoreseq::scores::{count_scores, scores_via_cycle_types};
use scoreseq::Result;

const RANGE: usize = 200;

struct CheckOutcome {
    name: &'static str,
    result: Result<String>,
}

pub fn run(max_oracle: usize) -> i32 {
    let fault = std::env::var("SCORESEQ_FAULT").ok();
    let egz_sign_flip = fault.as_deref() == Some("egz-sign-flip");

    let mut outcomes: Vec<CheckOutcome> = Vec::new();
    let mut push = |name: &'static str, result: Result<String>| {
        outcomes.push(CheckOutcome { name, result });
    };

    push("egz-divisibility", check_egz_divisibility(egz_sign_flip));
    push("scores-recurrence-divisibility", check_scores_recurrence());
    push("log-transform-identity", check_log_transform());
    push("proposition-identity", check_proposition());
    push("oracle-equivalence", check_oracle_equivalence(max_oracle));
    push("bijection", check_bijection(max_oracle));
    push("appendix-bounds", check_appendix_bounds());
    push("cycle-type", check_cycle_type());

    let mut failed = 0usize;
    for outcome in &outcomes {
        match &outcome.result {
            Ok(detail) => println!("ok   {}: {detail}", outcome.name),
            Err(err) => {
                failed += 1;
                println!("FAIL {}: {err}", outcome.name);
            }
        }
    }
    if failed == 0 {
        println!("verify: all {} checks passed", outcomes.len());
        0
    } else {
        println!("verify: {failed} of {} checks FAILED", outcomes.len());
        2
    }
}

fn check_egz_divisibility(sign_flip: bool) -> Result<String> {
    for n in 1..=RANGE as u64 {
        if sign_flip {
            egz_number_mutated(n)?;
        } else {
            egz_number(n)?;
        }
    }
    Ok(format!("signed sums divisible by 2n for n <= {RANGE}"))
}

fn check_scores_recurrence() -> Result<String> {
    let egz = egz_table(RANGE as u64)?;
    count_scores(&egz, RANGE)?;
    Ok(format!("recurrence sums divisible by n for n <= {RANGE}"))
}

fn check_log_transform() -> Result<String> {
    let egz = egz_table(RANGE as u64)?;
    let scores = count_scores(&egz, RANGE)?;
    let hat = scores.as_series().log_transform()?;
    for n in 1..=RANGE {
        if hat.coeff(n) != BigRational::from_integer(egz.value(n as u64).clone()) {
            return Err(scoreseq::Error::verification(
                "log-transform-identity",
                format!("log transform of S differs from N at n={n}"),
            ));
        }
    }
    Ok(format!("log transform of S equals N for n <= {RANGE}"))
}

fn check_proposition() -> Result<String> {
    let limit = 100usize;
    let egz = egz_table(limit as u64)?;
    let scores = count_scores(&egz, limit)?;
    let table = subscore_counts(&scores, limit)?;
    for n in 1..=limit {
        verify_egz_identity(&table, &egz, n)?;
    }
    Ok(format!("N_n = n·Σ S_(n,m)/m exactly for n <= {limit}"))
}

fn check_oracle_equivalence(max_oracle: usize) -> Result<String> {
    let egz = egz_table(max_oracle as u64)?;
    let scores = count_scores(&egz, max_oracle)?;
    let table = subscore_counts(&scores, max_oracle)?;
    for n in 1..=max_oracle {
        let brute = egz_brute_force(n as u64)?;
        if &brute != egz.value(n as u64) {
            return Err(scoreseq::Error::verification(
                "oracle-equivalence",
                format!("N_{n}: formula vs brute force mismatch"),
            ));
        }
        let all = enumerate_scores(n)?;
        if BigInt::from(all.len()) != scores.value(n).clone() {
            return Err(scoreseq::Error::verification(
                "oracle-equivalence",
                format!("S_{n}: recurrence vs enumeration mismatch"),
            ));
        }
        let hist = count_by_subscores_brute(n)?;
        for m in 1..=n {
            let brute = hist.get(&m).cloned().unwrap_or_else(BigInt::zero);
            if &brute != table.count(n, m) {
                return Err(scoreseq::Error::verification(
                    "oracle-equivalence",
                    format!("S_({n},{m}): series vs enumeration mismatch"),
                ));
            }
        }
    }
    Ok(format!("formula/series counts equal enumeration for n <= {max_oracle}"))
}

fn check_bijection(max_oracle: usize) -> Result<String> {
    for n in 1..=max_oracle {
        let all = enumerate_scores(n)?;
        let mut images = std::collections::BTreeSet::new();
        for s in &all {
            let subset = score_to_subset(s)?;
            if !images.insert(subset) {
                return Err(scoreseq::Error::verification(
                    "bijection",
                    format!("duplicate subset image at n={n}"),
                ));
            }
        }
    }
    Ok(format!("score→subset injective with sum n² for n <= {max_oracle}"))
}

fn check_appendix_bounds() -> Result<String> {
    let limit = 300u64;
    let egz = egz_table(limit)?;
    for n in 10..=limit {
        let (lo, hi) = egz_bounds(n, 20)?;
        let value = BigRational::from_integer(egz.value(n).clone());
        if lo.hi_rational() > value || hi.lo_rational() < value {
            return Err(scoreseq::Error::verification(
                "appendix-bounds",
                format!("EGZ bounds fail to bracket N_{n}"),
            ));
        }
    }
    // Central binomial bracket.
    let mut central = BigInt::from(1);
    for n in 1..=limit {
        central = central * BigInt::from(2 * (2 * n - 1)) / BigInt::from(n);
        let pin = pi_enclosure(32)?.mul_rational(&BigRational::from_integer(n.into()));
        let sqrt_pin = pin.sqrt_with_precision(30)?;
        let pow4 = BigRational::from_integer(BigInt::from(4u32).pow(n as u32));
        let base = rat_to_enclosure(&pow4, 30).div(&sqrt_pin)?;
        let one = BigRational::from_integer(1.into());
        let lower = base.mul_rational(&(&one - BigRational::new(1.into(), (8 * n).into())));
        let upper = base.mul_rational(&(&one - BigRational::new(1.into(), (9 * n).into())));
        let exact = BigRational::from_integer(central.clone());
        if lower.hi_rational() >= exact || upper.lo_rational() <= exact {
            return Err(scoreseq::Error::verification(
                "appendix-bounds",
                format!("central binomial bracket fails at n={n}"),
            ));
        }
    }
    // λ tail nesting.
    let wide = lambda_enclosure(&egz, 10, 20)?;
    let mid = lambda_enclosure(&egz, 50, 20)?;
    let tight = lambda_enclosure(&egz, 100, 20)?;
    if !wide.enclosure().contains_enclosure(mid.enclosure())
        || !mid.enclosure().contains_enclosure(tight.enclosure())
    {
        return Err(scoreseq::Error::verification(
            "appendix-bounds",
            "lambda enclosures fail to nest across term counts".to_string(),
        ));
    }
    Ok(format!(
        "EGZ + central-binomial brackets to {limit}, lambda nesting at 10/50/100 terms"
    ))
}

fn check_cycle_type() -> Result<String> {
    let egz = egz_table(15)?;
    let scores = count_scores(&egz, 15)?;
    for n in 1..=15u64 {
        if &scores_via_cycle_types(&egz, n)? != scores.value(n as usize) {
            return Err(scoreseq::Error::verification(
                "cycle-type",
                format!("cycle-type sum differs from recurrence at n={n}"),
            ));
        }
    }
    Ok("cycle-type formula reproduces S_n for n <= 15".to_string())
}
