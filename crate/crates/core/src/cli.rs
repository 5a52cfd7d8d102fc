//! The `origami-h2` command line.
//!
//! [`run`] holds all the logic and returns the process exit code, so the
//! binary is a thin wrapper and the commands can be driven from tests.
//!
//! Exit codes: 0 success, 1 mismatch or failed check, 2 bad arguments or
//! over the compute budget, 3 surface not primitive / not in H(2) / invalid
//! diagram, 4 inconclusive noncongruence search.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cache::OrbitCache;
use crate::congruence::{
    lcm_upto, noncongruence_search, strategy_surface, table73, CertificateJson, FactoredInteger,
    OrbitLabel,
};
use crate::enumeration::{enumerate_primitive, verify_counts, CountReport};
use crate::error::Error;
use crate::origami::{CylinderDiagram, Origami};
use crate::sl2::{orbit_partition, Orbit};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BAD_SURFACE: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "origami-h2",
    version,
    about = "Primitive square-tiled surfaces in H(2) and their Veech groups"
)]
pub struct Cli {
    /// Directory for cached orbits. Without one, nothing is cached.
    #[arg(long, global = true, env = "ORIGAMI_H2_CACHE")]
    pub cache_dir: Option<PathBuf>,
    /// Largest n for which orbits are computed.
    #[arg(long, global = true, default_value_t = 25)]
    pub max_orbit_n: usize,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate primitive surfaces and compare with the counting formulas.
    Counts { n_min: usize, n_max: usize },
    /// Orbit summary of a surface given as 1cyl(l1,l2,l3;t;h), 2cyl(h1,h2,w1,w2,t1,t2) or L(a,b).
    Orbit { spec: String },
    /// Search for a noncongruence certificate for the orbit A_n, B_n or C_n.
    Noncong { label: String, n: usize },
    /// d and δ for the first bad cases of the B_n family.
    Table73,
    /// Run a property suite for all n up to N_MAX.
    Verify { suite: Suite, n_max: usize },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Levels,
    Orbits,
    Invariant,
}

struct Ctx<'a, W: Write> {
    cli: &'a Cli,
    out: &'a mut W,
    err: &'a mut (dyn Write + Send),
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T, W>(args: I, out: &mut W, err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write + Send,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            let _ = writeln!(err, "error: --threads must be positive");
            return EXIT_USAGE;
        }
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_FAILURE;
        }
    };
    let mut ctx = Ctx {
        cli: &cli,
        out,
        err,
    };
    pool.install(|| dispatch(&mut ctx))
}

fn dispatch<W: Write + Send>(ctx: &mut Ctx<'_, W>) -> i32 {
    let result = match &ctx.cli.command {
        Command::Counts { n_min, n_max } => cmd_counts(ctx, *n_min, *n_max),
        Command::Orbit { spec } => cmd_orbit(ctx, spec),
        Command::Noncong { label, n } => cmd_noncong(ctx, label, *n),
        Command::Table73 => cmd_table73(ctx),
        Command::Verify { suite, n_max } => cmd_verify(ctx, *suite, *n_max),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Exit code for an error escaping a command.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidArgument(_) | Error::NotUnimodular(_) => EXIT_USAGE,
        Error::NotPrimitive | Error::NotInH2 | Error::InvalidDiagram(_) | Error::NotConnected => {
            EXIT_BAD_SURFACE
        }
        Error::InvalidPermutation(_) => EXIT_BAD_SURFACE,
        _ => EXIT_FAILURE,
    }
}

type CmdResult = crate::Result<i32>;

fn emit<W: Write>(out: &mut W, text: &str) -> crate::Result<()> {
    writeln!(out, "{text}").map_err(|e| Error::Cache(format!("writing output: {e}")))
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain data serialises")
}

fn check_budget(n: usize, budget: usize) -> crate::Result<()> {
    if n > budget {
        return Err(Error::InvalidArgument(format!(
            "n = {n} exceeds the orbit budget {budget} (raise --max-orbit-n)"
        )));
    }
    Ok(())
}

fn orbit_of<W: Write>(ctx: &Ctx<'_, W>, o: &Origami) -> crate::Result<Orbit> {
    match &ctx.cli.cache_dir {
        Some(dir) => Ok(OrbitCache::new(dir)?.get_or_compute(o)?.0),
        None => Orbit::compute(o),
    }
}

fn cmd_counts<W: Write>(ctx: &mut Ctx<'_, W>, n_min: usize, n_max: usize) -> CmdResult {
    let reports = verify_counts(n_min, n_max)?;
    match ctx.cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            emit(ctx.out, CountReport::CSV_HEADER)?;
            for r in &reports {
                emit(ctx.out, &r.csv_row())?;
            }
        }
        Format::Json => emit(ctx.out, &json(&reports))?,
    }
    Ok(if reports.iter().all(CountReport::is_match) {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

#[derive(Serialize)]
struct OrbitSummary {
    schema_version: u32,
    n: usize,
    size: usize,
    cusp_widths: Vec<u64>,
    level: u64,
    /// Integer Weierstrass count; only defined for odd `n`.
    invariant: Option<usize>,
}

impl OrbitSummary {
    fn of(orb: &Orbit) -> crate::Result<Self> {
        Ok(OrbitSummary {
            schema_version: 1,
            n: orb.n(),
            size: orb.size(),
            cusp_widths: orb.cusp_widths(),
            level: orb.level(),
            invariant: if orb.n() % 2 == 1 {
                Some(orb.invariant()?)
            } else {
                None
            },
        })
    }
}

fn cmd_orbit<W: Write>(ctx: &mut Ctx<'_, W>, spec: &str) -> CmdResult {
    let diagram: CylinderDiagram = spec.parse()?;
    let o = diagram.build();
    if !o.is_in_h2() {
        return Err(Error::NotInH2);
    }
    if !diagram.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    check_budget(o.n(), ctx.cli.max_orbit_n)?;
    let orb = orbit_of(ctx, &o)?;
    let s = OrbitSummary::of(&orb)?;
    match ctx.cli.format.unwrap_or(Format::Json) {
        Format::Json => emit(ctx.out, &json(&s))?,
        Format::Csv => {
            emit(ctx.out, "n,size,cusp_widths,level,invariant")?;
            let widths: Vec<String> = s.cusp_widths.iter().map(u64::to_string).collect();
            let inv = s.invariant.map(|i| i.to_string()).unwrap_or_default();
            emit(
                ctx.out,
                &format!("{},{},{},{},{inv}", s.n, s.size, widths.join(";"), s.level),
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_noncong<W: Write>(ctx: &mut Ctx<'_, W>, label: &str, n: usize) -> CmdResult {
    let label: OrbitLabel = label.parse()?;
    let base = strategy_surface(label, n as u64)?.build();
    check_budget(n, ctx.cli.max_orbit_n)?;
    let orb = orbit_of(ctx, &base)?;
    let found = OrbitLabel::of_orbit(&orb)?;
    if found != label {
        return Err(Error::MalformedSurface(format!(
            "base surface lies in {found}_{n}, not {label}_{n}"
        )));
    }
    let (doc, code) = match noncongruence_search(&orb)? {
        Some(cert) => (cert.to_json(), EXIT_OK),
        None => (
            CertificateJson::inconclusive(&orb, label),
            EXIT_INCONCLUSIVE,
        ),
    };
    match ctx.cli.format.unwrap_or(Format::Json) {
        Format::Json => emit(ctx.out, &json(&doc))?,
        Format::Csv => {
            emit(
                ctx.out,
                "n,orbit_label,surface_key,k,k_prime,d,level,m,delta,verdict",
            )?;
            let opt = |v: Option<String>| v.unwrap_or_default();
            emit(
                ctx.out,
                &format!(
                    "{},{},{},{},{},{},{},{},{},{}",
                    doc.n,
                    doc.orbit_label,
                    opt(doc.surface_key.clone()).replace(',', " "),
                    opt(doc.k.map(|x| x.to_string())),
                    opt(doc.k_prime.map(|x| x.to_string())),
                    doc.d,
                    doc.level_factored,
                    opt(doc.m.map(|x| x.to_string())),
                    opt(doc.delta_factored.clone()),
                    doc.verdict
                ),
            )?;
        }
    }
    Ok(code)
}

#[derive(Serialize)]
struct Table73Row {
    n: u64,
    d_factored: String,
    delta_factored: String,
}

fn cmd_table73<W: Write>(ctx: &mut Ctx<'_, W>) -> CmdResult {
    let rows = table73()?;
    let ok = rows.iter().all(|r| r.noncongruence);
    let rows: Vec<Table73Row> = rows
        .iter()
        .map(|r| Table73Row {
            n: r.n,
            d_factored: r.d.to_string(),
            delta_factored: r.delta.to_string(),
        })
        .collect();
    match ctx.cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            emit(ctx.out, "n,d_factored,delta_factored")?;
            for r in &rows {
                emit(
                    ctx.out,
                    &format!("{},{},{}", r.n, r.d_factored, r.delta_factored),
                )?;
            }
        }
        Format::Json => emit(ctx.out, &json(&rows))?,
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
}

fn cmd_verify<W: Write>(ctx: &mut Ctx<'_, W>, suite: Suite, n_max: usize) -> CmdResult {
    if n_max < 3 {
        return Err(Error::InvalidArgument(format!(
            "n_max must be at least 3, got {n_max}"
        )));
    }
    check_budget(n_max, ctx.cli.max_orbit_n)?;
    let mut failures = Vec::new();
    for n in 3..=n_max {
        let problems = match suite {
            Suite::Orbits => check_orbits(n)?,
            Suite::Levels => check_levels(n)?,
            Suite::Invariant => check_invariant(n)?,
        };
        let status = if problems.is_empty() { "ok" } else { "FAIL" };
        emit(ctx.out, &format!("n={n} {status}"))?;
        for p in problems {
            emit(ctx.out, &format!("  {p}"))?;
            failures.push(p);
        }
    }
    Ok(if failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

/// All orbits of primitive `n`-square surfaces.
pub fn primitive_orbits(n: usize) -> crate::Result<Vec<Orbit>> {
    orbit_partition(&enumerate_primitive(n)?)
}

/// One orbit for `n = 3` and even `n`; two for odd `n >= 5`, with integer
/// Weierstrass counts 1 and 3.
pub fn check_orbits(n: usize) -> crate::Result<Vec<String>> {
    let orbits = primitive_orbits(n)?;
    let mut problems = Vec::new();
    let expected = if n >= 5 && n % 2 == 1 { 2 } else { 1 };
    if orbits.len() != expected {
        problems.push(format!(
            "n={n}: {} orbits, expected {expected}",
            orbits.len()
        ));
    }
    if expected == 2 {
        let values: BTreeSet<usize> = orbits
            .iter()
            .map(Orbit::invariant)
            .collect::<crate::Result<_>>()?;
        if values != BTreeSet::from([1, 3]) {
            problems.push(format!(
                "n={n}: invariant values {values:?}, expected {{1, 3}}"
            ));
        }
    }
    Ok(problems)
}

/// Expected level: `lcm(1..n)` for `A_n` and `C_n`, a quarter of it for `B_n`,
/// and 2 for the single orbit at `n = 3`.
pub fn expected_level(label: OrbitLabel, n: u64) -> FactoredInteger {
    if n == 3 {
        return FactoredInteger::from_factors([(2, 1)]);
    }
    let d = lcm_upto(n);
    match label {
        OrbitLabel::B => d
            .div(&FactoredInteger::from_factors([(2, 2)]))
            .expect("4 | lcm(1..n) for n >= 4"),
        _ => d,
    }
}

pub fn check_levels(n: usize) -> crate::Result<Vec<String>> {
    let mut problems = Vec::new();
    for orb in primitive_orbits(n)? {
        let label = OrbitLabel::of_orbit(&orb)?;
        let want = expected_level(label, n as u64);
        let got = crate::congruence::factorize(orb.level())?;
        if got != want {
            problems.push(format!("{label}_{n}: level {got}, expected {want}"));
        }
        let index = crate::congruence::expected_index(label, n as u64)?;
        if orb.size() as u64 != index {
            problems.push(format!(
                "{label}_{n}: index {}, expected {index}",
                orb.size()
            ));
        }
    }
    Ok(problems)
}

/// The integer Weierstrass count is constant on each orbit and preserved by
/// `T` (odd `n` only; even `n` passes trivially).
pub fn check_invariant(n: usize) -> crate::Result<Vec<String>> {
    let mut problems = Vec::new();
    if n.is_multiple_of(2) {
        return Ok(problems);
    }
    for orb in primitive_orbits(n)? {
        let base_value = orb.invariant()?;
        for key in orb.surfaces() {
            let o = key.to_origami();
            let v = o.integer_weierstrass_count()?;
            let tv = o.apply_t().integer_weierstrass_count()?;
            if v != base_value || tv != v {
                problems.push(format!(
                    "n={n}: {key} has invariant {v} (T-image {tv}), orbit has {base_value}"
                ));
            }
        }
        if n >= 5 && ![1, 3].contains(&base_value) {
            problems.push(format!("n={n}: orbit invariant {base_value}"));
        }
    }
    Ok(problems)
}
