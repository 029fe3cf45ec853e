//! `scoreseq` — exact tournament score-sequence tables, decompositions,
//! certified constants, diagnostics, sampling, and a verification suite.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification/consistency failure.

mod cache;
mod output;
mod tables;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use scoreseq::asympt::{constants, diagnostics, lambda_enclosure, nb_pmf, tournament_pmf};
use scoreseq::decomp::{subscore_counts, subscore_pmf, DEFAULT_M_MAX};
use scoreseq::egz::egz_number;
use scoreseq::oracle::sample_uniform;
use scoreseq::Error;

use cache::Cache;
use output::{endpoints, point, print_csv, Format};
use tables::{egz_cached, scores_cached, strong_cached};

#[derive(Parser)]
#[command(
    name = "scoreseq",
    about = "Exact score-sequence counts, decompositions, and certified constants",
    version
)]
struct Cli {
    /// Output format for tabular results
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Fractional digits for decimal output (single rounding at the boundary)
    #[arg(long, global = true, default_value_t = 12)]
    precision: u32,

    /// Cache directory for computed sequences (overrides SCORESEQ_CACHE_DIR)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Erdős–Ginzburg–Ziv numbers N_n
    Egz(SelectArgs),
    /// Score-sequence counts S_0..S_n
    Scores {
        /// Largest n to tabulate
        #[arg(long)]
        upto: usize,
    },
    /// Irreducible-decomposition row: m, S_{n,m}, probability
    Decomp {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Largest block count tracked (default min(n, 40))
        #[arg(long)]
        m_max: Option<usize>,
    },
    /// Certified enclosure of λ = Σ N_k/(k·4^k)
    Lambda(LambdaArgs),
    /// The seven constants derived from λ, printed as certified intervals
    Constants(LambdaArgs),
    /// Convergence diagnostics over a grid of n values
    Converge {
        /// Comma-separated n values, e.g. 250,500,1000,2000
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<usize>,
    },
    /// Exact block-count distribution at n; --limit adds the NB limit column
    Dist {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Append the limiting pmf column (certified endpoints)
        #[arg(long)]
        limit: bool,
        /// Largest block count tracked (default min(n, 40))
        #[arg(long)]
        m_max: Option<usize>,
        /// λ terms for the limit column
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(10..))]
        terms: u64,
    },
    /// Exactly uniform random score sequences
    Sample {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the cross-module verification suite (exit 2 on failure)
    Verify {
        /// Largest n for the enumeration-backed checks (<= 13)
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..=13))]
        max_oracle: u64,
    },
    /// Tournament-distribution data: n, S_n/4^n, certified p_n endpoints
    Export {
        #[arg(long)]
        upto: usize,
        /// λ terms for the e^{−λ} factor
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(10..))]
        terms: u64,
    },
}

#[derive(Args)]
struct SelectArgs {
    /// Single n
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), conflicts_with = "upto")]
    n: Option<u64>,
    /// Tabulate 1..=upto
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    upto: Option<u64>,
}

#[derive(Args)]
struct LambdaArgs {
    /// Number of exact terms in the partial sum (tail bracket needs >= 10)
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(10..))]
    terms: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help/--version arrive as Err but are not usage errors.
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };
    let cache = Cache::resolve(cli.cache_dir.clone());
    match run(&cli, &cache) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Consistency { .. } | Error::Verification { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: &Cli, cache: &Cache) -> scoreseq::Result<ExitCode> {
    let precision = cli.precision;
    match &cli.command {
        Command::Egz(select) => cmd_egz(select, cli.format, cache),
        Command::Scores { upto } => cmd_scores(*upto, cli.format, cache),
        Command::Decomp { n, m_max } => {
            cmd_decomp(*n as usize, *m_max, cli.format, precision, cache)
        }
        Command::Lambda(args) => cmd_lambda(args.terms, cli.format, precision, cache),
        Command::Constants(args) => cmd_constants(args.terms, cli.format, precision, cache),
        Command::Converge { grid } => cmd_converge(grid, cli.format, precision, cache),
        Command::Dist {
            n,
            limit,
            m_max,
            terms,
        } => cmd_dist(*n as usize, *limit, *m_max, *terms, cli.format, precision, cache),
        Command::Sample { n, count, seed } => cmd_sample(*n as usize, *seed, *count, cli.format),
        Command::Verify { max_oracle } => Ok(ExitCode::from(verify::run(*max_oracle as usize) as u8)),
        Command::Export { upto, terms } => {
            cmd_export(*upto, *terms, cli.format, precision, cache)
        }
    }
}

fn cmd_egz(select: &SelectArgs, format: Format, cache: &Cache) -> scoreseq::Result<ExitCode> {
    match (select.n, select.upto) {
        (Some(n), None) => {
            let value = egz_number(n)?;
            match format {
                Format::Csv => println!("{value}"),
                Format::Json => println!("{}", json!({"n": n, "value": value.to_string()})),
            }
        }
        (None, Some(upto)) => {
            let table = egz_cached(cache, upto)?;
            match format {
                Format::Csv => {
                    let rows: Vec<Vec<String>> = (1..=upto)
                        .map(|n| vec![n.to_string(), table.value(n).to_string()])
                        .collect();
                    print_csv("n,N_n", &rows);
                }
                Format::Json => {
                    let values: Vec<String> =
                        table.values().iter().map(|v| v.to_string()).collect();
                    println!("{}", json!({"kind": "egz", "n_max": upto, "values": values}));
                }
            }
        }
        _ => {
            return Err(Error::domain("egz requires exactly one of --n or --upto"));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_scores(upto: usize, format: Format, cache: &Cache) -> scoreseq::Result<ExitCode> {
    let egz = if upto > 0 {
        egz_cached(cache, upto as u64)?
    } else {
        egz_cached(cache, 1)?
    };
    let table = scores_cached(cache, &egz, upto)?;
    match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = (0..=upto)
                .map(|n| vec![n.to_string(), table.value(n).to_string()])
                .collect();
            print_csv("n,S_n", &rows);
        }
        Format::Json => {
            let values: Vec<String> = table.values().iter().map(|v| v.to_string()).collect();
            println!("{}", json!({"kind": "scores", "n_max": upto, "values": values}));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_decomp(
    n: usize,
    m_max: Option<usize>,
    format: Format,
    precision: u32,
    cache: &Cache,
) -> scoreseq::Result<ExitCode> {
    let m_max = m_max.unwrap_or_else(|| n.min(DEFAULT_M_MAX)).max(1);
    let egz = egz_cached(cache, n as u64)?;
    let scores = scores_cached(cache, &egz, n)?;
    let table = subscore_counts(&scores, m_max)?;
    let pmf = subscore_pmf(&table, n)?;
    let m_cut = m_max.min(n);
    match format {
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = (1..=m_cut)
                .map(|m| {
                    vec![
                        m.to_string(),
                        table.count(n, m).to_string(),
                        point(&pmf.prob(m), precision),
                    ]
                })
                .collect();
            if pmf.tail() > &BigRational::from_integer(0.into()) {
                let untracked = scores.value(n) - &table.row_sum(n);
                rows.push(vec![
                    "tail".to_string(),
                    untracked.to_string(),
                    point(pmf.tail(), precision),
                ]);
            }
            print_csv("m,count,prob", &rows);
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = (1..=m_cut)
                .map(|m| {
                    json!({
                        "m": m,
                        "count": table.count(n, m).to_string(),
                        "prob": point(&pmf.prob(m), precision),
                    })
                })
                .collect();
            println!(
                "{}",
                json!({
                    "n": n,
                    "m_max": m_cut,
                    "rows": rows,
                    "tail_prob": point(pmf.tail(), precision),
                })
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn lambda_for(cache: &Cache, terms: u64, precision: u32) -> scoreseq::Result<scoreseq::asympt::LambdaEnclosure> {
    let egz = egz_cached(cache, 2 * terms)?;
    lambda_enclosure(&egz, terms, precision)
}

fn cmd_lambda(
    terms: u64,
    format: Format,
    precision: u32,
    cache: &Cache,
) -> scoreseq::Result<ExitCode> {
    let lam = lambda_for(cache, terms, precision + 6)?;
    let (lo, hi) = endpoints(lam.enclosure(), precision);
    let partial = point(lam.partial_sum(), precision);
    match format {
        Format::Csv => {
            print_csv(
                "terms,partial_sum,lambda_lo,lambda_hi",
                &[vec![terms.to_string(), partial, lo, hi]],
            );
        }
        Format::Json => {
            println!(
                "{}",
                json!({
                    "terms": terms,
                    "partial_sum": partial,
                    "lambda_lo": lo,
                    "lambda_hi": hi,
                })
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_constants(
    terms: u64,
    format: Format,
    precision: u32,
    cache: &Cache,
) -> scoreseq::Result<ExitCode> {
    let lam = lambda_for(cache, terms, precision + 6)?;
    let set = constants(&lam, precision + 2)?;
    let mut rows = Vec::new();
    for (name, enc) in set.entries() {
        let (lo, hi) = endpoints(enc, precision);
        rows.push((name, lo, hi, output::width_string(enc, precision)));
    }
    match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = rows
                .into_iter()
                .map(|(name, lo, hi, width)| vec![name.to_string(), lo, hi, width])
                .collect();
            print_csv("name,lo,hi,width", &rows);
        }
        Format::Json => {
            let obj: serde_json::Map<String, serde_json::Value> = rows
                .into_iter()
                .map(|(name, lo, hi, width)| {
                    (
                        name.to_string(),
                        json!({"lo": lo, "hi": hi, "width": width}),
                    )
                })
                .collect();
            println!("{}", serde_json::Value::Object(obj));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_converge(
    grid: &[usize],
    format: Format,
    precision: u32,
    cache: &Cache,
) -> scoreseq::Result<ExitCode> {
    if grid.is_empty() || grid.iter().any(|&n| n == 0) {
        return Err(Error::domain("--grid needs positive n values"));
    }
    let max = *grid.iter().max().unwrap();
    let egz = egz_cached(cache, max as u64)?;
    let scores = scores_cached(cache, &egz, max)?;
    let strong = strong_cached(cache, &scores)?;
    let rows = diagnostics(grid, &scores, &egz, &strong, precision + 6)?;
    let fields = |row: &scoreseq::asympt::DiagnosticRow| {
        vec![
            row.n.to_string(),
            point(&row.takacs_ratio.midpoint(), precision),
            point(&row.strong_ratio.midpoint(), precision),
            point(&row.inv_mean.midpoint(), precision),
            point(&row.beta_conv_ratio.midpoint(), precision),
            point(&row.partial_gf.midpoint(), precision),
        ]
    };
    match format {
        Format::Csv => {
            let rendered: Vec<Vec<String>> = rows.iter().map(&fields).collect();
            print_csv(
                "n,takacs_ratio,strong_ratio,inv_mean,beta_conv_ratio,partial_gf",
                &rendered,
            );
        }
        Format::Json => {
            let rendered: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    let f = fields(row);
                    json!({
                        "n": row.n,
                        "takacs_ratio": f[1],
                        "strong_ratio": f[2],
                        "inv_mean": f[3],
                        "beta_conv_ratio": f[4],
                        "partial_gf": f[5],
                    })
                })
                .collect();
            println!("{}", json!({"rows": rendered}));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_dist(
    n: usize,
    limit: bool,
    m_max: Option<usize>,
    terms: u64,
    format: Format,
    precision: u32,
    cache: &Cache,
) -> scoreseq::Result<ExitCode> {
    let m_max = m_max.unwrap_or_else(|| n.min(DEFAULT_M_MAX)).max(1);
    let egz = egz_cached(cache, n as u64)?;
    let scores = scores_cached(cache, &egz, n)?;
    let table = subscore_counts(&scores, m_max)?;
    let pmf = subscore_pmf(&table, n)?;
    let lam = if limit {
        Some(lambda_for(cache, terms, precision + 6)?)
    } else {
        None
    };
    let m_cut = m_max.min(n);

    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut json_rows: Vec<serde_json::Value> = Vec::new();
    for m in 1..=m_cut {
        let prob = point(&pmf.prob(m), precision);
        match &lam {
            Some(lam) => {
                let nb = nb_pmf(m as u64, lam, precision + 4)?;
                let (lo, hi) = endpoints(&nb, precision);
                json_rows.push(json!({"m": m, "prob": prob, "nb_lo": lo, "nb_hi": hi}));
                rows.push(vec![m.to_string(), prob, lo, hi]);
            }
            None => {
                json_rows.push(json!({"m": m, "prob": prob}));
                rows.push(vec![m.to_string(), prob]);
            }
        }
    }
    if pmf.tail() > &BigRational::from_integer(0.into()) {
        let mut row = vec!["tail".to_string(), point(pmf.tail(), precision)];
        if lam.is_some() {
            row.extend(["".to_string(), "".to_string()]);
        }
        rows.push(row);
    }
    match format {
        Format::Csv => {
            let header = if lam.is_some() {
                "m,prob,nb_lo,nb_hi"
            } else {
                "m,prob"
            };
            print_csv(header, &rows);
        }
        Format::Json => {
            println!(
                "{}",
                json!({
                    "n": n,
                    "rows": json_rows,
                    "tail_prob": point(pmf.tail(), precision),
                })
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sample(n: usize, seed: u64, count: usize, format: Format) -> scoreseq::Result<ExitCode> {
    let samples = sample_uniform(n, seed, count)?;
    match format {
        Format::Csv => {
            for s in &samples {
                let line: Vec<String> = s.scores().iter().map(|v| v.to_string()).collect();
                println!("{}", line.join(" "));
            }
        }
        Format::Json => {
            let arrays: Vec<Vec<u64>> = samples.iter().map(|s| s.scores().to_vec()).collect();
            println!(
                "{}",
                json!({"n": n, "seed": seed, "count": count, "samples": arrays})
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_export(
    upto: usize,
    terms: u64,
    format: Format,
    precision: u32,
    cache: &Cache,
) -> scoreseq::Result<ExitCode> {
    let egz = egz_cached(cache, (2 * terms).max(upto as u64).max(1))?;
    let scores = scores_cached(cache, &egz, upto)?;
    let lam = lambda_enclosure(&egz, terms, precision + 6)?;
    let pmf = tournament_pmf(upto, &scores, &lam, precision + 4)?;
    let pow4 = |n: usize| BigInt::from(4u32).pow(n as u32);
    let mut rows = Vec::new();
    for n in 0..=upto {
        let alpha = BigRational::new(scores.value(n).clone(), pow4(n));
        let (lo, hi) = endpoints(pmf.prob(n), precision);
        rows.push(vec![n.to_string(), point(&alpha, precision), lo, hi]);
    }
    match format {
        Format::Csv => print_csv("n,alpha,p_lo,p_hi", &rows),
        Format::Json => {
            let json_rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| json!({"n": r[0], "alpha": r[1], "p_lo": r[2], "p_hi": r[3]}))
                .collect();
            println!("{}", json!({"n_max": upto, "terms": terms, "rows": json_rows}));
        }
    }
    Ok(ExitCode::SUCCESS)
}
