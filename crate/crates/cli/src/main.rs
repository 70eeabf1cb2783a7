//! `kasami` — inspect GF(2^n) fields, solve the degree-(q+1) equations, and
//! run exhaustive verification sweeps over Kasami-type power functions.
//!
//! Exit codes: 0 when every check passed, 1 when a verification found a
//! counterexample, 2 on usage or domain errors.

mod run;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use kasami_core::gf2n::Elem;

#[derive(Parser)]
#[command(
    name = "kasami",
    version,
    about = "Binary-field toolkit for differential analysis of Kasami-type power functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Field degree n (2..=28).
    #[arg(long, global = true)]
    pub n: Option<u32>,

    /// Frobenius parameter k; most checks require gcd(k, n) = 1.
    #[arg(long, global = true)]
    pub k: Option<u32>,

    /// Reduction polynomial as a hex mask including the degree-n bit
    /// (default: the lexicographically smallest irreducible one).
    #[arg(long, global = true, value_parser = parse_hex_mask)]
    pub poly: Option<u32>,

    /// Worker threads for sweeps; output is identical for every value.
    #[arg(long, global = true, default_value_t = 1,
          value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: u32,

    /// Output format; csv applies to `ddt` only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Omit timing fields so output is byte-stable across runs.
    #[arg(long, global = true)]
    pub stable: bool,

    /// Cross-check single-direction shortcuts against the full
    /// difference table (quadratically slower).
    #[arg(long, global = true)]
    pub full_sweep: bool,

    /// Write output to this path instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Print the field parameters: degree, polynomial, generator.
    Field,
    /// Solve X^(q+1) + X + a = 0 and print the root set.
    Solve {
        /// Right-hand constant a (hex).
        #[arg(long, value_parser = parse_elem)]
        a: Elem,
        /// Also print the three-root witness when a has three roots.
        #[arg(long)]
        witness: bool,
    },
    /// Build the explicit three-root witness attached to a parameter u.
    Witness {
        /// Witness parameter u (hex), outside GF(2) (and GF(4) for even n).
        #[arg(long, value_parser = parse_elem)]
        u: Elem,
    },
    /// Recover a witness from a constant a with three roots.
    Recover {
        /// Right-hand constant a (hex).
        #[arg(long, value_parser = parse_elem)]
        a: Elem,
    },
    /// Print one difference-table row of a power function.
    Ddt {
        /// Power exponent (decimal); defaults to the Kasami exponent of --k.
        #[arg(long)]
        d: Option<u64>,
        /// Derivative direction a != 0 (hex).
        #[arg(long, value_parser = parse_elem, default_value = "0x1")]
        a: Elem,
    },
    /// Decide almost-perfect nonlinearity of a power function.
    Apn {
        /// Power exponent (decimal); defaults to the Kasami exponent of --k.
        #[arg(long)]
        d: Option<u64>,
    },
    /// Batch verification over an (n, k) grid, one JSON line per pair.
    Sweep {
        #[command(subcommand)]
        target: SweepTarget,
    },
    /// Run one verification check and print its report.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// List the known APN power-function families applicable at degree n.
    Catalog,
}

#[derive(Subcommand)]
pub enum SweepTarget {
    /// Differential uniformity of x^(2^(2k)-2^k+1) for every coprime k
    /// on n = n-min ..= n-max.
    Kasami {
        #[arg(long, default_value_t = 3)]
        n_min: u32,
        #[arg(long, default_value_t = 16)]
        n_max: u32,
    },
}

#[derive(Subcommand)]
pub enum Check {
    /// Root-count census plus witness round-trips over every admissible u.
    Lemma,
    /// F(X) + F(X+1) + 1 equals the composition polynomial at X + X^2.
    Identity,
    /// Composition-polynomial permutation check; for even n also the
    /// 2-to-1 derivative check.
    Mcm,
    /// Odd-degree system: at most one admissible root per c, with closed
    /// forms and traces checked in every three-root case.
    OddSystem,
    /// Trace balancedness and squaring invariance over every element.
    Trace,
    /// GF(4)-unit trace and power facts for even degrees.
    EvenFacts,
    /// Even-degree membership branches for every u outside GF(4), with
    /// the cross-unit findings reported.
    Discussion {
        /// Check a single GF(4) unit (hex) instead of all three.
        #[arg(long, value_parser = parse_elem)]
        omega_prime: Option<Elem>,
    },
    /// Substitution-chain count equivalence, for one b or every b.
    Reduction {
        /// Check a single b (hex) instead of every b.
        #[arg(long, value_parser = parse_elem)]
        b: Option<Elem>,
        /// Chain to apply; defaults to the parity of n and must match it.
        #[arg(long, value_enum)]
        parity: Option<ParityArg>,
    },
    /// Brute-force APN status of every catalog family at degree n.
    Table1,
    /// Randomized field-axiom suite with a deterministic seed.
    Axioms {
        #[arg(long, default_value_t = 100_000)]
        cases: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
pub enum ParityArg {
    Odd,
    Even,
}

/// Hex field element, with or without a 0x prefix.
fn parse_elem(s: &str) -> Result<Elem, String> {
    s.parse()
        .map_err(|e| format!("expected a hex element such as 0x1f: {e}"))
}

/// Hex polynomial mask, with or without a 0x prefix.
fn parse_hex_mask(s: &str) -> Result<u32, String> {
    let digits = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .unwrap_or(s);
    u32::from_str_radix(digits, 16).map_err(|e| format!("expected a hex mask such as 0x11b: {e}"))
}

fn main() {
    std::process::exit(run::dispatch(Cli::parse()));
}
