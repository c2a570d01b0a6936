//! `ovp`: compute, verify and export overpartition data from the shell.
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 for usage
//! or input errors.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use overpart_core::cache::{CacheLookup, TableCache};
use overpart_core::congruence::{
    dissection_chain_required_len, find_family, registry, verify_with, verify_dissection_chain, CongruenceFamily,
};
use overpart_core::hecke::{eigenform_check, hecke_apply, HeckeParams};
use overpart_core::squares::squares_table;
use overpart_core::theta::check_two_dissection;
use overpart_core::{overpartition_table, theta_series, CoeffTable, CoefficientRing, Method, Series, ThetaKind};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "ovp", version, about = "Overpartition tables, theta series and congruence checks")]
struct Cli {
    /// Directory for cached coefficient tables.
    #[arg(long, global = true, env = "OVP_CACHE_DIR", default_value = ".ovp-cache")]
    cache_dir: PathBuf,

    /// Skip the table cache entirely.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Output format; each command picks a sensible default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print p̄(n), c_k(n) or theta coefficients for n < T.
    Compute(TableArgs),
    /// Check congruence families against a p̄ table.
    Verify(VerifyArgs),
    /// Apply T(ℓ²) to φ(q)³ or φ(-q)³, optionally checking the eigenvalue.
    Hecke(HeckeArgs),
    /// Check the 2-dissection of φ(±q) and the mod 5 dissection chain.
    Dissect(DissectArgs),
    /// Write a table as CSV (same selectors as `compute`).
    Export(TableArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableKind {
    Pbar,
    Squares,
    Theta,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(value_enum)]
    table: TableKind,

    /// Truncation order: values for 0 <= n < T.
    #[arg(short = 'T', long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    order: u64,

    /// Reduce coefficients modulo this value (exact integers if omitted).
    #[arg(long = "mod", value_parser = clap::value_parser!(u64).range(2..))]
    modulus: Option<u64>,

    /// p̄ generator: theta-inversion, euler-product, enumeration or two-adic.
    #[arg(long, default_value = "theta-inversion")]
    method: Method,

    /// Theta series: phi, phi-minus, psi or positive-squares.
    #[arg(long, default_value = "phi")]
    kind: ThetaKind,

    /// Number of rows c_1..c_k for `squares`.
    #[arg(short, long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Verify every registry family.
    #[arg(long, conflicts_with = "family")]
    all: bool,

    /// Family id (a..q) or name; repeatable.
    #[arg(long, required_unless_present = "all")]
    family: Vec<String>,

    /// Largest p̄ argument to check.
    #[arg(long, default_value_t = 100_000)]
    budget: u64,

    /// Only instances attached to this prime.
    #[arg(long)]
    ell: Option<u64>,

    /// Table modulus; defaults to the lcm of the selected families' moduli.
    #[arg(long = "mod", value_parser = clap::value_parser!(u64).range(2..))]
    modulus: Option<u64>,

    /// Also run the mod 5 dissection chain through this order.
    #[arg(long)]
    chain_order: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum HeckeInput {
    Phi3,
    Phi3Minus,
}

#[derive(Args, Debug)]
struct HeckeArgs {
    #[arg(long = "f", value_enum, default_value = "phi3")]
    input: HeckeInput,

    #[arg(long)]
    ell: u64,

    /// Odd weight numerator k for weight k/2.
    #[arg(long, default_value_t = 3)]
    k: u32,

    /// Level N; defaults to 4 for φ(q)³ and 16 for φ(-q)³.
    #[arg(long)]
    level: Option<u64>,

    /// Input truncation order.
    #[arg(short = 'T', long, default_value_t = 10_000)]
    order: usize,

    /// Compare the image with λ·f instead of printing it.
    #[arg(long)]
    check_eigen: bool,

    /// Expected eigenvalue; defaults to ℓ+1.
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<i64>,
}

#[derive(Args, Debug)]
struct DissectArgs {
    /// Order for both the 2-dissection and the dissection chain.
    #[arg(short = 'T', long, default_value_t = 2500, value_parser = clap::value_parser!(u64).range(1..))]
    order: u64,
}

/// Failures that map onto exit codes.
enum Failure {
    Usage(String),
    Verification,
}

impl From<overpart_core::Error> for Failure {
    fn from(e: overpart_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Output {
        path: cli.out.clone(),
        format: cli.format,
    };
    let cache = if cli.no_cache { None } else { open_cache(&cli.cache_dir) };
    let result = match &cli.command {
        Command::Compute(a) => cmd_compute(a, &out, cache.as_ref()),
        Command::Export(a) => {
            let out = Output {
                format: Some(Format::Csv),
                ..out
            };
            cmd_compute(a, &out, cache.as_ref())
        }
        Command::Verify(a) => cmd_verify(a, &out, cache.as_ref()),
        Command::Hecke(a) => cmd_hecke(a, &out),
        Command::Dissect(a) => cmd_dissect(a, &out, cache.as_ref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

struct Output {
    path: Option<PathBuf>,
    format: Option<Format>,
}

impl Output {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn emit(&self, bytes: &[u8]) -> CliResult {
        match &self.path {
            Some(p) => fs::write(p, bytes).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(bytes)?;
                stdout.flush()?;
                Ok(())
            }
        }
    }

    fn emit_json(&self, value: &Value) -> CliResult {
        let mut s = serde_json::to_string_pretty(value).expect("json values always serialize");
        s.push('\n');
        self.emit(s.as_bytes())
    }
}

fn open_cache(dir: &PathBuf) -> Option<TableCache> {
    match TableCache::open(dir) {
        Ok(c) => Some(c),
        Err(e) => {
            eprintln!("warning: cache at {} unavailable ({e}); computing without cache", dir.display());
            None
        }
    }
}

fn ring_of(modulus: Option<u64>) -> CoefficientRing {
    modulus.map_or(CoefficientRing::ExactInteger, CoefficientRing::ModM)
}

/// Loads `p̄` from the cache when a verified entry exists, otherwise computes
/// and stores it. Cache problems only produce warnings.
fn pbar_table(cache: Option<&TableCache>, ring: CoefficientRing, order: usize, method: Method) -> CliResult<CoeffTable> {
    if let Some(c) = cache {
        match c.lookup("pbar", method, ring, order) {
            Ok(CacheLookup::Hit(t)) => {
                eprintln!("cache hit: pbar {method} {} T={order}", ring.tag());
                return Ok(t);
            }
            Ok(CacheLookup::Miss) => {}
            Ok(CacheLookup::Invalid(why)) => eprintln!("warning: ignoring cache entry ({why})"),
            Err(e) => eprintln!("warning: cache read failed ({e})"),
        }
    }
    let table = overpartition_table(ring, order, method)?;
    if let Some(c) = cache {
        if let Err(e) = c.store(&table) {
            eprintln!("warning: cache not writable ({e}); result not cached");
        }
    }
    Ok(table)
}

fn series_values(s: &Series) -> Vec<String> {
    s.to_bigints().iter().map(ToString::to_string).collect()
}

fn series_csv(s: &Series) -> Vec<u8> {
    let mut out = String::from("n,value\n");
    for (n, v) in series_values(s).iter().enumerate() {
        out.push_str(&format!("{n},{v}\n"));
    }
    out.into_bytes()
}

fn series_text(s: &Series) -> Vec<u8> {
    let mut out = series_values(s).join(",");
    out.push('\n');
    out.into_bytes()
}

fn cmd_compute(a: &TableArgs, out: &Output, cache: Option<&TableCache>) -> CliResult {
    let order = a.order as usize;
    let ring = ring_of(a.modulus);
    match a.table {
        TableKind::Pbar => {
            let table = pbar_table(cache, ring, order, a.method)?;
            match out.format_or(Format::Text) {
                Format::Text => out.emit(&series_text(table.series())),
                Format::Csv => {
                    let mut buf = Vec::new();
                    table.write_csv(&mut buf)?;
                    out.emit(&buf)
                }
                Format::Json => out.emit_json(&json!({
                    "table": table.name,
                    "method": table.method,
                    "series": table.series(),
                })),
            }
        }
        TableKind::Theta => {
            let s = theta_series(a.kind, ring, order)?;
            match out.format_or(Format::Text) {
                Format::Text => out.emit(&series_text(&s)),
                Format::Csv => out.emit(&series_csv(&s)),
                Format::Json => out.emit_json(&json!({ "table": a.kind.name(), "series": s })),
            }
        }
        TableKind::Squares => {
            if a.modulus.is_some() {
                return Err(Failure::Usage("squares are computed exactly; drop --mod".into()));
            }
            let t = squares_table(a.k as usize, order)?;
            match out.format_or(Format::Text) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    t.write_csv(&mut buf)?;
                    out.emit(&buf)
                }
                Format::Text => {
                    let mut s = String::new();
                    for k in 1..=t.k_max() {
                        let row: Vec<String> = t.row(k).unwrap().iter().map(ToString::to_string).collect();
                        s.push_str(&format!("c{k}: {}\n", row.join(",")));
                    }
                    out.emit(s.as_bytes())
                }
                Format::Json => {
                    let rows: Vec<Vec<String>> = (1..=t.k_max())
                        .map(|k| t.row(k).unwrap().iter().map(ToString::to_string).collect())
                        .collect();
                    out.emit_json(&json!({ "table": "squares", "order": order, "rows": rows }))
                }
            }
        }
    }
}

fn selected_families(a: &VerifyArgs) -> CliResult<Vec<CongruenceFamily>> {
    if a.all {
        return Ok(registry());
    }
    a.family
        .iter()
        .map(|key| {
            find_family(key).ok_or_else(|| {
                let ids: Vec<String> = registry().into_iter().map(|f| f.id).collect();
                Failure::Usage(format!(
                    "unknown family {key:?}; valid ids: {}, planted-false",
                    ids.join(", ")
                ))
            })
        })
        .collect()
}

fn cmd_verify(a: &VerifyArgs, out: &Output, cache: Option<&TableCache>) -> CliResult {
    let families = selected_families(a)?;
    if let Some(ell) = a.ell {
        overpart_core::arith::ensure_odd_prime(ell)?;
    }
    let modulus = a
        .modulus
        .unwrap_or_else(|| families.iter().fold(1, |m, f| overpart_core::arith::lcm(m, f.modulus())));
    let ring = CoefficientRing::ModM(modulus);
    let table = pbar_table(cache, ring, a.budget as usize + 1, Method::ThetaInversion)?;

    let mut pass = true;
    let mut reports = Vec::new();
    let mut lines = Vec::new();
    for family in &families {
        let r = verify_with(family, &table, a.budget, a.ell)?;
        pass &= r.pass;
        lines.push(format!(
            "{} ({}) {}: {} cases, {} counterexamples",
            if r.pass { "PASS" } else { "FAIL" },
            r.family,
            r.anchor,
            r.cases,
            r.counterexamples.len()
        ));
        reports.push(r);
    }
    let chain = match a.chain_order {
        Some(order) => {
            let t = pbar_table(cache, CoefficientRing::ModM(5), dissection_chain_required_len(order), Method::ThetaInversion)?;
            let c = verify_dissection_chain(order, &t)?;
            pass &= c.pass;
            lines.push(format!("{} dissection chain mod 5 through order {order}", if c.pass { "PASS" } else { "FAIL" }));
            Some(c)
        }
        None => None,
    };

    match out.format_or(Format::Json) {
        Format::Text => {
            let mut s = lines.join("\n");
            s.push('\n');
            out.emit(s.as_bytes())?;
        }
        Format::Csv => return Err(Failure::Usage("verify reports are json or text".into())),
        Format::Json => {
            let mut v = json!({
                "pass": pass,
                "budget": a.budget,
                "modulus": modulus,
                "families": reports,
            });
            if let Some(c) = chain {
                v["dissection_chain"] = json!(c);
            }
            out.emit_json(&v)?;
        }
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_hecke(a: &HeckeArgs, out: &Output) -> CliResult {
    let (kind, default_level) = match a.input {
        HeckeInput::Phi3 => (ThetaKind::PhiPlus, 4),
        HeckeInput::Phi3Minus => (ThetaKind::PhiMinus, 16),
    };
    let params = HeckeParams::new(a.k, a.level.unwrap_or(default_level), a.ell)?;
    let f = theta_series(kind, CoefficientRing::ExactInteger, a.order)?.pow(3);
    if a.check_eigen {
        let lambda = a.lambda.unwrap_or(a.ell as i64 + 1);
        let r = eigenform_check(&f, &params, lambda)?;
        match out.format_or(Format::Json) {
            Format::Json => out.emit_json(&json!(r))?,
            _ => out.emit(
                format!(
                    "{} ℓ={} λ={} through order {}\n",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.ell,
                    r.eigenvalue,
                    r.residual_order
                )
                .as_bytes(),
            )?,
        }
        return if r.pass { Ok(()) } else { Err(Failure::Verification) };
    }
    let image = hecke_apply(&f, &params)?;
    match out.format_or(Format::Text) {
        Format::Text => out.emit(&series_text(&image)),
        Format::Csv => out.emit(&series_csv(&image)),
        Format::Json => out.emit_json(&json!({ "ell": a.ell, "k": a.k, "level": params.level(), "series": image })),
    }
}

fn cmd_dissect(a: &DissectArgs, out: &Output, cache: Option<&TableCache>) -> CliResult {
    let order = a.order as usize;
    let two = check_two_dissection(order)?;
    let table = pbar_table(cache, CoefficientRing::ModM(5), dissection_chain_required_len(order), Method::ThetaInversion)?;
    let chain = verify_dissection_chain(order, &table)?;
    let pass = two.pass() && chain.pass;
    match out.format_or(Format::Text) {
        Format::Json => out.emit_json(&json!({ "pass": pass, "two_dissection": two, "chain": chain }))?,
        Format::Csv => return Err(Failure::Usage("dissect reports are json or text".into())),
        Format::Text => {
            let mut s = String::new();
            for r in [&two.plus, &two.minus].into_iter().chain(chain.checks.iter()) {
                let status = if r.pass { "PASS" } else { "FAIL" };
                match r.first_difference {
                    Some(n) => s.push_str(&format!("{status} {} (first difference at q^{n})\n", r.identity)),
                    None => s.push_str(&format!("{status} {} (order {})\n", r.identity, r.order)),
                }
            }
            out.emit(s.as_bytes())?;
        }
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
