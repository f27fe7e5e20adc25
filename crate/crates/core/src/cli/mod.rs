//! Command-line front end.
//!
//! Exit codes: 0 when everything ran and every check passed, 1 for usage
//! errors, 2 when a mathematical check failed, 3 when a computation exceeds
//! its configured budget.

pub mod cache;
pub mod record;

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::cyclotomic::{self, expected_floor_sign, expected_pair_sign};
use crate::error::Error;
use crate::grid_count::{self, DEFAULT_MAX_WIDTH};
use crate::padics::TwoAdicTrunc;
use crate::quasipoly::{self, functional_report};
use crate::series;

use cache::{Cache, CacheKey};
use record::{FModField, Format, ResultRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable naming the default cache file.
pub const CACHE_ENV: &str = "DOMINO2ADIC_CACHE";

#[derive(Parser, Debug)]
#[command(
    name = "domino2adic",
    version,
    about = "Domino tilings of 2n x 2n squares and the 2-adic behaviour of f(n)"
)]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Newline-delimited JSON result cache
    #[arg(long, env = CACHE_ENV, global = true)]
    pub cache: Option<PathBuf>,

    /// Corrupt one computed identity before it is checked (test harness only).
    #[arg(long, value_enum, hide = true, global = true)]
    pub inject_fault: Option<Fault>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count tilings of the 2n x 2n square and factor the count as 2^n f(n)^2
    Count {
        #[arg(long)]
        n: usize,
        /// Largest board side the DP may handle
        #[arg(long, default_value_t = DEFAULT_MAX_WIDTH)]
        max_width: usize,
    },
    /// Compute f(n) exactly
    F {
        #[arg(long)]
        n: usize,
        /// Use one method only; by default every method within budget runs and
        /// the results are cross-checked
        #[arg(long, value_enum)]
        method: Option<FMethod>,
        #[arg(long, default_value_t = DEFAULT_MAX_WIDTH)]
        max_width: usize,
        #[arg(long, default_value_t = cyclotomic::DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Compute f(n) mod 2^bits from power sums (n may be negative)
    Fmod {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=4096))]
        bits: u32,
        #[arg(long, value_enum, default_value_t = SeriesPath::Auto)]
        method: SeriesPath,
    },
    /// Exact identity sweeps
    Verify {
        #[command(subcommand)]
        which: VerifyCommand,
    },
    /// Empirical scans
    Scan {
        #[command(subcommand)]
        which: ScanCommand,
    },
    /// Exact power sum U_k(n) of reciprocals of zeta + 1/zeta
    Uk {
        #[arg(long)]
        k: usize,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
    /// Quasi-polynomial fits
    Quasi {
        #[command(subcommand)]
        which: QuasiCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// Unit product, pair/cosine sign products and full alpha product for n = 1..=n-max
    Lemmas {
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = cyclotomic::DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// f(-1-n) = +-f(n) mod 2^bits for n = 0..=n-max
    Functional {
        #[arg(long)]
        n_max: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=4096))]
        bits: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum ScanCommand {
    /// Smallest l with n ≡ m (mod 2^l) => f(n) ≡ f(m) (mod 2^k), for k = 1..=bits
    Continuity {
        #[arg(long)]
        n_max: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
        bits: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum QuasiCommand {
    /// Fit U_k as A(n) + (-1)^n B(n)
    Fit {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
        k: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FMethod {
    Dp,
    Cyclo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesPath {
    /// Direct series for 0 <= n <= 10000, quasi-polynomials otherwise
    Auto,
    Direct,
    Quasi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    TwoExponent,
    FCross,
    UnitProduct,
    PairProductSign,
    CosProductSign,
    FullProduct,
    Functional,
    Reflection,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Math(Error),
    Io(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Math(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Math(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Math(Error::InsufficientPrecision { .. }) => EXIT_USAGE,
            CliError::Math(_) => EXIT_CHECK_FAILED,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::Io(e) => format!("i/o error: {e}"),
            CliError::Math(e @ Error::BudgetExceeded { .. }) => format!("error: {e}"),
            CliError::Math(e) => format!("check failed: {e}"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command against
/// the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    execute(cli, &mut io::stdout().lock(), &mut io::stderr().lock())
}

/// Runs a parsed command, writing records to `out` and diagnostics to `err`.
pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute_inner(&cli) {
        Ok(records) => {
            let _ = out.write_all(record::render(&records, cli.format).as_bytes());
            let mut code = EXIT_OK;
            for r in &records {
                for name in r.failed_checks() {
                    let _ = writeln!(err, "check failed: n={}: {name}", r.n);
                    code = EXIT_CHECK_FAILED;
                }
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "{}", e.message());
            e.exit_code()
        }
    }
}

struct Context {
    cache: Option<Cache>,
    fault: Option<Fault>,
}

impl Context {
    fn faulty(&self, f: Fault) -> bool {
        self.fault == Some(f)
    }

    /// Looks up each key, computes the missing ones in parallel, and appends
    /// the fresh records to the cache in key order. A fault-injected run
    /// neither reads nor writes the cache.
    fn sweep<F>(&mut self, keys: Vec<CacheKey>, compute: F) -> Result<Vec<ResultRecord>, CliError>
    where
        F: Fn(&CacheKey) -> Result<ResultRecord, CliError> + Sync,
    {
        let use_cache = self.fault.is_none();
        let lookup = |k: &CacheKey| -> Option<ResultRecord> {
            if !use_cache {
                return None;
            }
            self.cache.as_ref().and_then(|c| c.get(k)).cloned()
        };
        let cached: Vec<Option<ResultRecord>> = keys.iter().map(lookup).collect();
        let missing: Vec<&CacheKey> = keys
            .iter()
            .zip(&cached)
            .filter(|(_, c)| c.is_none())
            .map(|(k, _)| k)
            .collect();
        let computed: Vec<Result<ResultRecord, CliError>> =
            missing.par_iter().map(|k| compute(k)).collect();

        let mut fresh: HashMap<&CacheKey, ResultRecord> = HashMap::new();
        let mut to_write = Vec::new();
        for (k, r) in missing.iter().zip(computed) {
            let r = r?;
            to_write.push(((*k).clone(), r.clone()));
            fresh.insert(k, r);
        }
        if use_cache {
            if let Some(c) = self.cache.as_mut() {
                c.append(to_write)?;
            }
        }
        Ok(keys
            .iter()
            .zip(cached)
            .map(|(k, c)| c.unwrap_or_else(|| fresh.remove(k).expect("computed above")))
            .collect())
    }
}

fn execute_inner(cli: &Cli) -> Result<Vec<ResultRecord>, CliError> {
    let cache = cli.cache.as_deref().map(Cache::open).transpose()?;
    let mut ctx = Context {
        cache,
        fault: cli.inject_fault,
    };
    match &cli.command {
        Command::Count { n, max_width } => count(&mut ctx, *n, *max_width),
        Command::F {
            n,
            method,
            max_width,
            max_n,
        } => f_exact(&mut ctx, *n, *method, *max_width, *max_n),
        Command::Fmod { n, bits, method } => fmod(&mut ctx, *n, *bits, *method),
        Command::Verify {
            which: VerifyCommand::Lemmas { n_max, max_n },
        } => verify_lemmas(&mut ctx, *n_max, *max_n),
        Command::Verify {
            which: VerifyCommand::Functional { n_max, bits },
        } => verify_functional(&mut ctx, *n_max, *bits),
        Command::Scan {
            which: ScanCommand::Continuity { n_max, bits },
        } => scan_continuity(&mut ctx, *n_max, *bits),
        Command::Uk { k, n } => uk(&mut ctx, *k, *n),
        Command::Quasi {
            which: QuasiCommand::Fit { k },
        } => quasi_fit(&mut ctx, *k as usize),
    }
}

fn count(ctx: &mut Context, n: usize, max_width: usize) -> Result<Vec<ResultRecord>, CliError> {
    let corrupt = ctx.faulty(Fault::TwoExponent);
    ctx.sweep(vec![CacheKey::new("count", n as i64, None)], |_| {
        let mut fact = grid_count::factor_square_count_with_limit(n, max_width)?;
        if corrupt {
            fact.two_exponent += 1;
        }
        let reassembles = fact.reassemble() == fact.count;
        Ok(ResultRecord {
            count: Some(fact.count.to_string()),
            two_exponent: Some(fact.two_exponent),
            f: Some(fact.odd_root.to_string()),
            ..ResultRecord::new(n as i64)
        }
        .check("two_exponent_equals_n", fact.two_exponent == n as u64)
        .check("count_reassembles", reassembles))
    })
}

fn f_exact(
    ctx: &mut Context,
    n: usize,
    method: Option<FMethod>,
    max_width: usize,
    max_n: usize,
) -> Result<Vec<ResultRecord>, CliError> {
    let corrupt = ctx.faulty(Fault::FCross);
    let tag = match method {
        None => "f",
        Some(FMethod::Dp) => "f:dp",
        Some(FMethod::Cyclo) => "f:cyclo",
    };
    ctx.sweep(vec![CacheKey::new(tag, n as i64, None)], |_| {
        let dp_ok = 2 * n <= max_width;
        let cyclo_ok = n <= max_n;
        let run_dp = method == Some(FMethod::Dp) || (method.is_none() && (dp_ok || !cyclo_ok));
        let run_cyclo = method == Some(FMethod::Cyclo) || (method.is_none() && cyclo_ok);

        let dp = run_dp
            .then(|| grid_count::factor_square_count_with_limit(n, max_width).map(|f| f.odd_root_signed()))
            .transpose()?;
        let cyclo = run_cyclo
            .then(|| {
                cyclotomic::f_exact_with_limit(n, max_n).map(|f| if corrupt { f + 2 } else { f })
            })
            .transpose()?;

        let value = dp.clone().or_else(|| cyclo.clone()).expect("at least one method ran");
        let used = match (&dp, &cyclo) {
            (Some(_), Some(_)) => "dp+cyclo",
            (Some(_), None) => "dp",
            _ => "cyclo",
        };
        let mut rec = ResultRecord {
            f: Some(value.to_string()),
            ..ResultRecord::new(n as i64)
        }
        .datum("method", used);
        if let (Some(a), Some(b)) = (&dp, &cyclo) {
            rec = rec.check("dp_matches_cyclo", a == b);
        }
        Ok(rec)
    })
}

fn fmod(ctx: &mut Context, n: i64, bits: u32, method: SeriesPath) -> Result<Vec<ResultRecord>, CliError> {
    if method == SeriesPath::Direct && n < 0 {
        return Err(CliError::Usage(
            "the direct series needs n >= 0; use --method quasi or auto".into(),
        ));
    }
    ctx.sweep(vec![CacheKey::new("fmod", n, Some(bits))], |_| {
        let value = match method {
            SeriesPath::Auto => series::f_mod(n, bits)?,
            SeriesPath::Direct => series::f_mod_direct(n as u64, bits)?,
            SeriesPath::Quasi => quasipoly::f_mod_quasi(n, bits)?,
        };
        Ok(ResultRecord {
            f_mod: Some(FModField::from(&value)),
            ..ResultRecord::new(n)
        })
    })
}

fn verify_lemmas(ctx: &mut Context, n_max: usize, max_n: usize) -> Result<Vec<ResultRecord>, CliError> {
    if n_max > max_n {
        return Err(Error::BudgetExceeded {
            what: "cyclotomic product size n",
            requested: n_max as u64,
            limit: max_n as u64,
        }
        .into());
    }
    let fault = ctx.fault;
    let keys = (1..=n_max as i64)
        .map(|n| CacheKey::new("verify-lemmas", n, None))
        .collect();
    ctx.sweep(keys, |key| {
        let n = key.n as usize;
        let mut unit = cyclotomic::unit_product(n)?;
        let mut pair = cyclotomic::pair_product_sign_with_limit(n, max_n)?;
        let mut cos = cyclotomic::cos_product_sign(n)?;
        let (mut full_v, full_s) = cyclotomic::full_product_check_with_limit(n, max_n)?;
        let f = cyclotomic::f_exact_with_limit(n, max_n)?;
        match fault {
            Some(Fault::UnitProduct) => unit += 1,
            Some(Fault::PairProductSign) => pair = -pair,
            Some(Fault::CosProductSign) => cos = -cos,
            Some(Fault::FullProduct) => full_v += 1,
            _ => {}
        }
        let f_mod4 = TwoAdicTrunc::new(&f, 2);
        let pair_mod4 = TwoAdicTrunc::new(&BigInt::from(pair), 2);
        let floor_sign = expected_floor_sign(n);
        Ok(ResultRecord {
            f: Some(f.to_string()),
            ..ResultRecord::new(n as i64)
        }
        .datum("unit_product", &unit)
        .datum("pair_product", pair)
        .datum("cos_product", cos)
        .datum("full_product_valuation", full_v)
        .datum("full_product_sign", full_s)
        .check("unit_product_is_one", unit.is_one())
        .check("pair_product_sign", pair == expected_pair_sign(n))
        .check("cos_product_sign", cos == floor_sign)
        .check("full_product", full_v == n as u64 && full_s == floor_sign)
        .check("f_congruent_pair_product_mod4", f_mod4 == pair_mod4))
    })
}

fn verify_functional(ctx: &mut Context, n_max: u64, bits: u32) -> Result<Vec<ResultRecord>, CliError> {
    let corrupt = ctx.faulty(Fault::Functional);
    // Fit once up front so the parallel rows don't queue on the fit cache.
    quasipoly::u_fits(series::required_u_terms(bits))?;
    let keys = (0..=n_max as i64)
        .map(|n| CacheKey::new("verify-functional", n, Some(bits)))
        .collect();
    ctx.sweep(keys, |key| {
        let mut rep = quasipoly::functional_check(key.n as u64, bits)?;
        if corrupt {
            let bumped = rep.lhs.add(&TwoAdicTrunc::from_u64(2, bits));
            rep = functional_report(rep.n, bits, bumped, rep.rhs);
        }
        Ok(ResultRecord {
            f_mod: Some(FModField::from(&rep.rhs)),
            ..ResultRecord::new(rep.n)
        }
        .datum("reflected_n", -1 - rep.n)
        .datum("f_mod_reflected", rep.lhs.residue())
        .datum("sign", rep.sign)
        .check("functional_equation", rep.pass))
    })
}

fn scan_continuity(ctx: &mut Context, n_max: u64, bits: u32) -> Result<Vec<ResultRecord>, CliError> {
    if n_max == 0 {
        return Err(CliError::Usage("--n-max must be at least 1".into()));
    }
    let keys = (1..=bits)
        .map(|k| CacheKey::new("scan-continuity", n_max as i64, Some(k)))
        .collect();
    let mut rows = ctx.sweep(keys, |key| {
        let k = key.bits.expect("continuity keys carry k");
        let rep = quasipoly::continuity_scan(n_max, k)?;
        let witness = rep
            .witness
            .map(|(a, b)| format!("{a},{b}"))
            .unwrap_or_else(|| "none".into());
        Ok(ResultRecord::new(n_max as i64)
            .datum("k", k)
            .datum("ell", rep.ell)
            .datum("witness", witness)
            .datum("window_exhausted", rep.window_exhausted)
            .datum(
                "note",
                format!("empirical over 0..={n_max}: no counterexample at l, witness refutes l-1"),
            ))
    })?;
    let ells: Vec<u32> = rows
        .iter()
        .map(|r| r.data["ell"].parse().expect("ell is numeric"))
        .collect();
    for (i, row) in rows.iter_mut().enumerate().skip(1) {
        row.checks
            .insert("nondecreasing_in_k".into(), ells[i] >= ells[i - 1]);
    }
    Ok(rows)
}

fn uk(ctx: &mut Context, k: usize, n: i64) -> Result<Vec<ResultRecord>, CliError> {
    if k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    ctx.sweep(vec![CacheKey::new("uk", n, Some(k as u32))], |_| {
        let (value, method) = if n >= 0 {
            (series::u_values(n as u64, k).swap_remove(k - 1), "direct")
        } else {
            (quasipoly::u_values_quasi(n, k)?.swap_remove(k - 1), "quasi")
        };
        Ok(ResultRecord::new(n)
            .datum("k", k)
            .datum("u", value)
            .datum("method", method))
    })
}

fn format_coeffs(p: &quasipoly::RatPolynomial) -> String {
    let parts: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn quasi_fit(ctx: &mut Context, k: usize) -> Result<Vec<ResultRecord>, CliError> {
    let corrupt = ctx.faulty(Fault::Reflection);
    ctx.sweep(vec![CacheKey::new("quasi-fit", 0, Some(k as u32))], |_| {
        let mut fit = quasipoly::fit_u(k)?;
        if corrupt {
            fit.poly.even_part = fit
                .poly
                .even_part
                .add(&quasipoly::RatPolynomial::from_ratios(&[(0, 1), (1, 1)]));
        }
        let held_out_ok = fit
            .held_out
            .iter()
            .all(|&n| fit.poly.eval(n) == series::u_values(n as u64, k)[k - 1]);
        let held = format!(
            "{}..={}",
            fit.held_out.first().expect("held-out values"),
            fit.held_out.last().expect("held-out values")
        );
        Ok(ResultRecord::new(0)
            .datum("k", k)
            .datum("degree_bound", fit.degree_bound)
            .datum("fit_window", format!("0..={}", fit.window_end))
            .datum("held_out", held)
            .datum("even_part", format_coeffs(&fit.poly.even_part))
            .datum("sign_part", format_coeffs(&fit.poly.sign_part))
            .datum("quasi_polynomial", &fit.poly)
            .check("held_out_exact", held_out_ok)
            .check("reflection", fit.poly.check_reflection()))
    })
}
