//! CSV/JSON emission helpers.
//!
//! CSV always carries a header row. JSON encodes every big integer and every
//! exact rational as a decimal string so nothing is squeezed through f64.

use num_rational::BigRational;
use scoreseq::exact::{round_rational_string, DecimalEnclosure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn print_csv(header: &str, rows: &[Vec<String>]) {
    println!("{header}");
    for row in rows {
        println!("{}", row.join(","));
    }
}

/// Point value: exact rational rounded once at the output boundary.
pub fn point(q: &BigRational, precision: u32) -> String {
    round_rational_string(q, precision)
}

/// Certified endpoints, outward-rounded to the requested precision.
pub fn endpoints(e: &DecimalEnclosure, precision: u32) -> (String, String) {
    let shown = e.with_precision(precision);
    (shown.lo_string(), shown.hi_string())
}

pub fn width_string(e: &DecimalEnclosure, precision: u32) -> String {
    round_rational_string(&e.width(), precision)
}
