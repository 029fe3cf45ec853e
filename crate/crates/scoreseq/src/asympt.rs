//! The constant λ, the constants derived from it, and convergence
//! diagnostics for the limit statements.
//!
//! λ = Σ_{k≥1} N_k/(k·4^k). A finite prefix of the sum is exact rational;
//! the remainder is bracketed by the certified tail bounds
//! `(1/3√π)·n^{−3/2}·(1 − 2/n) <= Σ_{k>n} N_k/(k·4^k) <= (1/3√π)·n^{−3/2}`
//! (valid for `n >= 10`). To keep the certified interval tight enough for
//! the published six-digit window, the tail of a `terms`-term enclosure is
//! certified as the exact sum of terms `terms+1 .. 2·terms` plus the bracket
//! applied at `2·terms`; the bracket applied at `terms` directly is looser
//! than the window it is quoted against.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::decomp::SubscoreTable;
use crate::egz::EgzTable;
use crate::exact::{
    exp_enclosure, rat_to_enclosure, sqrt_pi_enclosure, sqrt_rat_enclosure, DecimalEnclosure,
};
use crate::scores::{ExactSeries, ScoreTable};
use crate::{Error, Result};

fn pow4(n: u64) -> BigInt {
    BigInt::from(4u32).pow(u32::try_from(n).expect("exponent fits u32"))
}

/// Exact Σ_{k≤cut} N_k/(k·4^k) for each cut, in one incremental pass.
///
/// Keeps the accumulator as `num / (lcm·4^k)` so only one gcd reduction runs
/// per requested cut instead of per term.
fn weighted_partial_sums(egz: &EgzTable, cuts: &[u64]) -> Result<Vec<(u64, BigRational)>> {
    debug_assert!(cuts.iter().all(|&c| c >= 1));
    let max = cuts.iter().copied().max().unwrap_or(0);
    if egz.n_max() < max {
        return Err(Error::domain(format!(
            "partial sums to {max} need EGZ values to {max}, table has {}",
            egz.n_max()
        )));
    }
    let mut wanted: Vec<u64> = cuts.to_vec();
    wanted.sort_unstable();
    wanted.dedup();
    let mut out = Vec::new();
    let mut num = BigInt::zero();
    let mut lcm = BigInt::one();
    let mut idx = 0;
    for k in 1..=max {
        // extend the lcm part of the denominator to cover k
        let kb = BigInt::from(k);
        let g = lcm.gcd(&kb);
        let factor = &kb / g;
        if !factor.is_one() {
            num *= &factor;
            lcm *= &factor;
        }
        // denominator is lcm·4^k; previous terms gain a factor 4
        num *= 4;
        num += egz.value(k) * (&lcm / kb);
        while idx < wanted.len() && wanted[idx] == k {
            out.push((k, BigRational::new(num.clone(), &lcm * pow4(k))));
            idx += 1;
        }
    }
    Ok(out)
}

fn partial_sum_pair(egz: &EgzTable, a: u64, b: u64) -> Result<(BigRational, BigRational)> {
    let sums = weighted_partial_sums(egz, &[a, b])?;
    let find = |cut: u64| {
        sums.iter()
            .find(|(c, _)| *c == cut)
            .map(|(_, v)| v.clone())
            .expect("requested cut present")
    };
    Ok((find(a), find(b)))
}

/// Enclosure of `(1/3√π)·n^{−3/2}`, the certified upper tail bound at `n`.
fn tail_upper_expr(n: u64, precision: u32) -> Result<DecimalEnclosure> {
    let work = (precision + 4).min(38).max(10);
    let sqrt_pi = sqrt_pi_enclosure(work)?;
    let sqrt_n = sqrt_rat_enclosure(&BigRational::from_integer(n.into()), work)?;
    let denom = sqrt_pi
        .mul(&sqrt_n)
        .mul_rational(&BigRational::from_integer((3 * n).into()));
    DecimalEnclosure::from_int(1, work)
        .div(&denom)
        .map(|e| e.with_precision(precision))
}

/// A certified enclosure of λ: exact partial sum plus bracketed tail.
#[derive(Debug, Clone)]
pub struct LambdaEnclosure {
    terms: u64,
    partial_sum: BigRational,
    tail_lo: DecimalEnclosure,
    tail_hi: DecimalEnclosure,
    enclosure: DecimalEnclosure,
}

impl LambdaEnclosure {
    pub fn terms(&self) -> u64 {
        self.terms
    }

    /// Exact Σ_{k≤terms} N_k/(k·4^k).
    pub fn partial_sum(&self) -> &BigRational {
        &self.partial_sum
    }

    /// Enclosure of the certified lower bound for the tail Σ_{k>terms}.
    pub fn tail_lo(&self) -> &DecimalEnclosure {
        &self.tail_lo
    }

    /// Enclosure of the certified upper bound for the tail Σ_{k>terms}.
    pub fn tail_hi(&self) -> &DecimalEnclosure {
        &self.tail_hi
    }

    /// The full certified interval containing λ.
    pub fn enclosure(&self) -> &DecimalEnclosure {
        &self.enclosure
    }
}

/// Certified enclosure of λ from `terms` exact terms (`terms >= 10`).
///
/// The EGZ table must cover `2·terms`: the tail certificate sums terms up to
/// `2·terms` exactly before applying the bracket.
pub fn lambda_enclosure(egz: &EgzTable, terms: u64, precision: u32) -> Result<LambdaEnclosure> {
    if terms < 10 {
        return Err(Error::domain(format!(
            "lambda_enclosure requires terms >= 10 (tail bracket validity), got {terms}"
        )));
    }
    let cutoff = 2 * terms;
    if egz.n_max() < cutoff {
        return Err(Error::domain(format!(
            "lambda_enclosure with terms={terms} needs EGZ values to {cutoff}, table has {}",
            egz.n_max()
        )));
    }
    let (partial, extended) = partial_sum_pair(egz, terms, cutoff)?;
    let between = &extended - &partial; // exact Σ_{terms<k<=2·terms}

    let upper_expr = tail_upper_expr(cutoff, precision + 4)?;
    let shrink = BigRational::one()
        - BigRational::new(BigInt::from(2), BigInt::from(cutoff));
    let lower_expr = upper_expr.mul_rational(&shrink);

    let tail_lo = lower_expr.add_rational(&between).with_precision(precision);
    let tail_hi = upper_expr.add_rational(&between).with_precision(precision);

    let lo = tail_lo.lo_rational() + &partial;
    let hi = tail_hi.hi_rational() + &partial;
    let enclosure = DecimalEnclosure::from_endpoints(&lo, &hi, precision)?;
    Ok(LambdaEnclosure {
        terms,
        partial_sum: partial,
        tail_lo,
        tail_hi,
        enclosure,
    })
}

/// Enclosures of the seven constants derived from λ.
#[derive(Debug, Clone)]
pub struct ConstantSet {
    /// e^λ
    pub e_lambda: DecimalEnclosure,
    /// e^λ/(2√π), the leading constant of `n^{5/2}·S_n/4^n`
    pub takacs: DecimalEnclosure,
    /// e^{−λ}, the limit of `N_n/(n·S_n)`
    pub inv_e_lambda: DecimalEnclosure,
    /// e^{−2λ}, the limit of `S_{n,1}/S_n`
    pub strong_frac: DecimalEnclosure,
    /// e^{−λ}/(2√π), the leading constant of `n^{5/2}·S_{n,1}/4^n`
    pub strong_takacs: DecimalEnclosure,
    /// 2(1−e^{−λ})e^λ + 1, the limit mean block count
    pub nb_mean: DecimalEnclosure,
    /// 2(1−e^{−λ})e^{2λ}, the limit block-count variance
    pub nb_variance: DecimalEnclosure,
}

impl ConstantSet {
    /// `(name, enclosure)` pairs in canonical order.
    pub fn entries(&self) -> Vec<(&'static str, &DecimalEnclosure)> {
        vec![
            ("e_lambda", &self.e_lambda),
            ("takacs", &self.takacs),
            ("inv_e_lambda", &self.inv_e_lambda),
            ("strong_frac", &self.strong_frac),
            ("strong_takacs", &self.strong_takacs),
            ("nb_mean", &self.nb_mean),
            ("nb_variance", &self.nb_variance),
        ]
    }
}

/// Derive the constant set from a λ enclosure.
pub fn constants(lam: &LambdaEnclosure, precision: u32) -> Result<ConstantSet> {
    let work = precision + 6;
    let lam_enc = lam.enclosure().with_precision(work);
    let e_lambda = exp_enclosure(&lam_enc, work)?;
    let inv_e_lambda = exp_enclosure(&lam_enc.neg(), work)?;
    // e^{−2λ} as the interval square of e^{−λ}, so it encloses it by
    // construction.
    let strong_frac = inv_e_lambda.mul(&inv_e_lambda);
    let sqrt_pi = sqrt_pi_enclosure(work.min(38).max(10))?;
    let two_sqrt_pi = sqrt_pi.mul_rational(&BigRational::from_integer(2.into()));
    let takacs = e_lambda.div(&two_sqrt_pi)?;
    let strong_takacs = inv_e_lambda.div(&two_sqrt_pi)?;
    let one_minus_inv = inv_e_lambda.one_minus();
    let two = BigRational::from_integer(2.into());
    let nb_mean = one_minus_inv
        .mul(&e_lambda)
        .mul_rational(&two)
        .add_rational(&BigRational::one());
    let nb_variance = one_minus_inv
        .mul(&e_lambda.mul(&e_lambda))
        .mul_rational(&two);
    Ok(ConstantSet {
        e_lambda: e_lambda.with_precision(precision),
        takacs: takacs.with_precision(precision),
        inv_e_lambda: inv_e_lambda.with_precision(precision),
        strong_frac: strong_frac.with_precision(precision),
        strong_takacs: strong_takacs.with_precision(precision),
        nb_mean: nb_mean.with_precision(precision),
        nb_variance: nb_variance.with_precision(precision),
    })
}

/// Per-`n` convergence diagnostics. Every field is derived from exact
/// rationals with a single outward rounding at the stated precision.
#[derive(Debug, Clone)]
pub struct DiagnosticRow {
    pub n: usize,
    /// `n^{5/2}·S_n/4^n`
    pub takacs_ratio: DecimalEnclosure,
    /// `S_{n,1}/S_n`
    pub strong_ratio: DecimalEnclosure,
    /// `N_n/(n·S_n)` = E[1/I_n]
    pub inv_mean: DecimalEnclosure,
    /// `β_n^{*2}/(2·β_n)` with `β_k = N_k/(k·4^k)`
    pub beta_conv_ratio: DecimalEnclosure,
    /// `Σ_{k≤n} S_k/4^k`
    pub partial_gf: DecimalEnclosure,
}

/// Exact `β^{*2}_n / (2·β_n)` as a rational.
///
/// Scales by `L = lcm(1..n)` so the inner sum is a plain integer:
/// `ratio = n·Σ_k (L/k)N_k·(L/(n−k))N_{n−k} / (2·L²·N_n)`.
fn beta_conv_ratio_exact(egz: &EgzTable, n: u64) -> BigRational {
    let mut lcm = BigInt::one();
    for k in 1..n {
        let kb = BigInt::from(k);
        let g = lcm.gcd(&kb);
        lcm *= kb / g;
    }
    let mut sum = BigInt::zero();
    for k in 1..n {
        let a = (&lcm / BigInt::from(k)) * egz.value(k);
        let b = (&lcm / BigInt::from(n - k)) * egz.value(n - k);
        sum += a * b;
    }
    BigRational::new(
        BigInt::from(n) * sum,
        BigInt::from(2) * &lcm * &lcm * egz.value(n),
    )
}

/// Diagnostics rows for the given grid of `n` values.
pub fn diagnostics(
    grid: &[usize],
    scores: &ScoreTable,
    egz: &EgzTable,
    strong: &ExactSeries,
    precision: u32,
) -> Result<Vec<DiagnosticRow>> {
    if grid.is_empty() {
        return Err(Error::domain("diagnostics requires a non-empty grid"));
    }
    let max = *grid.iter().max().unwrap();
    if grid.iter().any(|&n| n == 0) {
        return Err(Error::domain("diagnostics grid entries must be >= 1"));
    }
    if scores.n_max() < max || (egz.n_max() as usize) < max || strong.len() <= max {
        return Err(Error::domain(format!(
            "diagnostics grid to {max} exceeds the computed tables"
        )));
    }

    // partial_gf snapshots in one pass: acc_n = Σ_{k≤n} S_k·4^{n−k}.
    let mut sorted: Vec<usize> = grid.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut gf: BTreeMap<usize, BigRational> = BTreeMap::new();
    let mut acc = BigInt::one(); // k = 0 term
    let mut idx = 0;
    for n in 1..=max {
        acc = acc * 4 + scores.value(n);
        while idx < sorted.len() && sorted[idx] == n {
            gf.insert(n, BigRational::new(acc.clone(), pow4(n as u64)));
            idx += 1;
        }
    }

    grid.iter()
        .map(|&n| {
            let nu = n as u64;
            let s_n = scores.value(n);
            // n^{5/2}·S_n/4^n = sqrt(n^5·S_n²/16^n), one directed rounding.
            let takacs_sq = BigRational::new(
                BigInt::from(nu).pow(5) * s_n * s_n,
                pow4(nu) * pow4(nu),
            );
            let takacs_ratio = sqrt_rat_enclosure(&takacs_sq, precision)?;
            let strong_n = strong.coeff(n);
            let strong_ratio = rat_to_enclosure(
                &(strong_n / BigRational::from_integer(s_n.clone())),
                precision,
            );
            let inv_mean = rat_to_enclosure(
                &BigRational::new(egz.value(nu).clone(), BigInt::from(nu) * s_n),
                precision,
            );
            let beta_conv_ratio =
                rat_to_enclosure(&beta_conv_ratio_exact(egz, nu), precision);
            let partial_gf = rat_to_enclosure(&gf[&n], precision);
            Ok(DiagnosticRow {
                n,
                takacs_ratio,
                strong_ratio,
                inv_mean,
                beta_conv_ratio,
                partial_gf,
            })
        })
        .collect()
}

/// The probability sequence `p_n = e^{−λ}·S_n/4^n` as enclosures.
#[derive(Debug, Clone)]
pub struct TournamentPmf {
    probs: Vec<DecimalEnclosure>,
}

impl TournamentPmf {
    pub fn n_max(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn prob(&self, n: usize) -> &DecimalEnclosure {
        &self.probs[n]
    }

    pub fn probs(&self) -> &[DecimalEnclosure] {
        &self.probs
    }

    /// Enclosure of Σ_{k≤n} p_k.
    pub fn partial_sum(&self, n: usize) -> DecimalEnclosure {
        let mut acc = DecimalEnclosure::from_int(0, self.probs[0].precision());
        for p in &self.probs[..=n] {
            acc = acc.add(p);
        }
        acc
    }
}

/// Tournament distribution enclosures for `n <= n_max`.
pub fn tournament_pmf(
    n_max: usize,
    scores: &ScoreTable,
    lam: &LambdaEnclosure,
    precision: u32,
) -> Result<TournamentPmf> {
    if scores.n_max() < n_max {
        return Err(Error::domain(format!(
            "tournament_pmf to {n_max} exceeds the score table"
        )));
    }
    let work = precision + 4;
    let inv_e = exp_enclosure(&lam.enclosure().with_precision(work).neg(), work)?;
    let probs = (0..=n_max)
        .map(|n| {
            let alpha = BigRational::new(scores.value(n).clone(), pow4(n as u64));
            inv_e.mul_rational(&alpha).with_precision(precision)
        })
        .collect();
    Ok(TournamentPmf { probs })
}

/// Enclosure of the limit probability `P(I = m) → m(1−e^{−λ})^{m−1}e^{−2λ}`.
pub fn nb_pmf(m: u64, lam: &LambdaEnclosure, precision: u32) -> Result<DecimalEnclosure> {
    if m == 0 {
        return Err(Error::domain("nb_pmf requires m >= 1"));
    }
    let work = precision + 6;
    let inv_e = exp_enclosure(&lam.enclosure().with_precision(work).neg(), work)?;
    let q = inv_e.one_minus();
    let power = q.powi(u32::try_from(m - 1).map_err(|_| Error::domain("m too large"))?);
    Ok(power
        .mul(&inv_e)
        .mul(&inv_e)
        .mul_rational(&BigRational::from_integer(m.into()))
        .with_precision(precision))
}

/// Total variation distance between the exact block-count pmf at `n` and the
/// shifted negative-binomial limit, at enclosure midpoints, with the
/// truncation slack reported separately.
#[derive(Debug, Clone)]
pub struct NbDistance {
    /// ½·Σ_{m≤m_cut} |S_{n,m}/S_n − nb_pmf(m)| over midpoints.
    pub distance: BigRational,
    /// ½·(untracked exact mass + untracked limit mass).
    pub truncation_slack: BigRational,
}

pub fn nb_limit_distance(
    table: &SubscoreTable,
    n: usize,
    lam: &LambdaEnclosure,
    precision: u32,
) -> Result<NbDistance> {
    let pmf = crate::decomp::subscore_pmf(table, n)?;
    let m_cut = table.m_max().min(n);
    let mut acc = BigRational::zero();
    let mut nb_mass = BigRational::zero();
    for m in 1..=m_cut {
        let limit = nb_pmf(m as u64, lam, precision)?.midpoint();
        nb_mass += &limit;
        acc += (pmf.prob(m) - limit).abs();
    }
    let half = BigRational::new(1.into(), 2.into());
    let nb_tail = (BigRational::one() - nb_mass).max(BigRational::zero());
    Ok(NbDistance {
        distance: &half * acc,
        truncation_slack: half * (pmf.tail() + nb_tail),
    })
}

/// Deviations of the two compound-Poisson reconstructions.
///
/// `nb_dev`: the shifted NB limit law rebuilt as a compound Poisson with
/// rate `2λ` and logarithmic jumps with parameter `1 − e^{−λ}` (jump pmf
/// `(1−e^{−λ})^k/(kλ)`). This is the parameterization whose generating
/// function reproduces `m(1−e^{−λ})^{m−1}e^{−2λ}`.
///
/// `swapped_dev`: the same machinery with the roles of `e^{−λ}` and
/// `1 − e^{−λ}` swapped (logarithmic parameter `e^{−λ}`). This
/// parameterization appears in print but does *not* reproduce the stated
/// pmf; its deviation is reported so the discrepancy is visible rather than
/// silently corrected.
///
/// `tournament_dev`: the tournament distribution rebuilt as a compound
/// Poisson with rate λ and jump pmf `β_k/λ`.
#[derive(Debug, Clone)]
pub struct CompoundCheck {
    pub nb_dev: BigRational,
    pub swapped_dev: BigRational,
    pub tournament_dev: BigRational,
}

impl CompoundCheck {
    /// Largest deviation among the two reconstructions that must agree.
    pub fn max_deviation(&self) -> BigRational {
        self.nb_dev.clone().max(self.tournament_dev.clone())
    }
}

/// Convolution powers of an enclosure vector (index 0 unused, jump at k>=1).
fn enclosure_convolve(a: &[DecimalEnclosure], b: &[DecimalEnclosure], precision: u32) -> Vec<DecimalEnclosure> {
    let len = a.len();
    let mut out = vec![DecimalEnclosure::from_int(0, precision); len];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// Reconstruct `Σ_j r^j·h^{*j}(v)/j!` for v = 0..len−1, where `h_k = q^k/k`.
fn log_compound_series(
    q: &DecimalEnclosure,
    rate_factor: u32,
    len: usize,
    precision: u32,
) -> Vec<DecimalEnclosure> {
    let zero = DecimalEnclosure::from_int(0, precision);
    let mut h = vec![zero.clone(); len];
    for k in 1..len {
        h[k] = q
            .powi(k as u32)
            .mul_rational(&BigRational::new(BigInt::one(), k.into()));
    }
    let mut acc = vec![zero.clone(); len];
    acc[0] = DecimalEnclosure::from_int(1, precision); // j = 0 term
    let mut power = {
        let mut e = vec![zero.clone(); len];
        e[0] = DecimalEnclosure::from_int(1, precision);
        e
    };
    let mut factor = BigRational::one();
    for j in 1..len {
        power = enclosure_convolve(&power, &h, precision);
        factor = factor * BigRational::from_integer(rate_factor.into())
            / BigRational::from_integer(j.into());
        for v in 0..len {
            acc[v] = acc[v].add(&power[v].mul_rational(&factor));
        }
    }
    acc
}

/// Run both compound-Poisson reconstructions; see [`CompoundCheck`].
pub fn compound_poisson_check(
    egz: &EgzTable,
    scores: &ScoreTable,
    lam: &LambdaEnclosure,
    truncation: usize,
    precision: u32,
) -> Result<CompoundCheck> {
    if truncation < 10 {
        return Err(Error::domain("compound_poisson_check requires truncation >= 10"));
    }
    let work = precision + 6;
    let inv_e = exp_enclosure(&lam.enclosure().with_precision(work).neg(), work)?;

    // (a) NB limit: prefactor e^{−2λ}, rate factor 2, parameter 1 − e^{−λ}.
    let m_limit = 30.min(truncation);
    let q = inv_e.one_minus();
    let series = log_compound_series(&q, 2, m_limit + 1, work);
    let prefactor = inv_e.mul(&inv_e);
    let mut nb_dev = BigRational::zero();
    for m in 1..=m_limit {
        let rebuilt = prefactor.mul(&series[m - 1]).midpoint();
        let direct = nb_pmf(m as u64, lam, work)?.midpoint();
        nb_dev = nb_dev.max((rebuilt - direct).abs());
    }

    // Swapped parameterization: parameter e^{−λ}, prefactor (1−e^{−λ})².
    let swapped_series = log_compound_series(&inv_e, 2, m_limit + 1, work);
    let swapped_prefactor = q.mul(&q);
    let mut swapped_dev = BigRational::zero();
    for m in 1..=m_limit {
        let rebuilt = swapped_prefactor.mul(&swapped_series[m - 1]).midpoint();
        let direct = nb_pmf(m as u64, lam, work)?.midpoint();
        swapped_dev = swapped_dev.max((rebuilt - direct).abs());
    }

    // (b) tournament distribution: rate λ, jump pmf β_k/λ, so
    // p_n = e^{−λ}·Σ_j (β^{*j})_n/j! — the inner sum is exact rational.
    let n_limit = truncation
        .min(scores.n_max())
        .min(egz.n_max() as usize);
    let beta: Vec<BigRational> = std::iter::once(BigRational::zero())
        .chain((1..=n_limit).map(|k| {
            BigRational::new(egz.value(k as u64).clone(), BigInt::from(k) * pow4(k as u64))
        }))
        .collect();
    let beta_series = ExactSeries::new(beta);
    let pmf = tournament_pmf(n_limit, scores, lam, work)?;
    let mut reconstructed = vec![BigRational::zero(); n_limit + 1];
    reconstructed[0] = BigRational::one();
    let mut power = ExactSeries::new(
        std::iter::once(BigRational::one())
            .chain(std::iter::repeat(BigRational::zero()).take(n_limit))
            .collect(),
    );
    let mut factorial = BigRational::one();
    for j in 1..=n_limit {
        power = power.convolve_truncated(&beta_series, n_limit + 1);
        factorial *= BigRational::from_integer(j.into());
        for v in 0..=n_limit {
            let term = power.coeff(v) / &factorial;
            reconstructed[v] += term;
        }
    }
    let inv_mid = inv_e.midpoint();
    let mut tournament_dev = BigRational::zero();
    for v in 0..=n_limit.min(truncation) {
        let rebuilt = &inv_mid * &reconstructed[v];
        let direct = pmf.prob(v).midpoint();
        tournament_dev = tournament_dev.max((rebuilt - direct).abs());
    }

    Ok(CompoundCheck {
        nb_dev,
        swapped_dev,
        tournament_dev,
    })
}
