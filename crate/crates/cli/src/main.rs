//! `linkseg` command-line tool.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 usage or parse error,
//! 3 geometric error.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use thiserror::Error;

use linkseg::closed_form::{at_term, lk_from_invariants, lk_simple_orthogonal};
use linkseg::invariants::SegmentPairInvariants;
use linkseg::io::{LinkFile, LinkFileError};
use linkseg::link::{builtin_expected, LinkError};
use linkseg::periodic::{default_lattice, PeriodicError};
use linkseg::quadrature::{
    gauss_lk_segments, lk_single_integral, reduced_double_integral, QuadratureConfig,
};
use linkseg::sampling::{random_skew_pair, seeded, SkewPairBounds};
use linkseg::{
    builtin_links, convergence_scan, extract_invariants, lk_link, LatticeSpec, PolyLink, Segment,
    Vec3,
};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Geometric(String),
    /// Carries the full report, printed to stdout before the message.
    #[error("{message}")]
    Verification { report: String, message: String },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification { .. } => 1,
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::Geometric(_) => 3,
        }
    }
}

impl From<LinkFileError> for CliError {
    fn from(e: LinkFileError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<LinkError> for CliError {
    fn from(e: LinkError) -> Self {
        match e {
            LinkError::Geom(g) => CliError::Parse(g.to_string()),
            other => CliError::Geometric(other.to_string()),
        }
    }
}

impl From<PeriodicError> for CliError {
    fn from(e: PeriodicError) -> Self {
        match e {
            PeriodicError::Contact { .. } | PeriodicError::DegenerateProbe => {
                CliError::Geometric(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "linkseg",
    version,
    about = "Linking numbers of straight segments and polygonal links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Linking number of a two-component link file.
    Lk {
        /// JSON link file.
        path: Option<PathBuf>,
        /// Use a built-in link instead of a file.
        #[arg(long, conflicts_with = "path")]
        builtin: Option<String>,
    },
    /// Isometry invariants of one segment pair.
    Invariants {
        /// JSON file `{"s1": {"a": [..], "b": [..]}, "s2": {...}}`.
        #[arg(long, conflicts_with = "coords")]
        file: Option<PathBuf>,
        /// A1 B1 A2 B2 as 12 numbers.
        #[arg(num_args = 12, allow_hyphen_values = true)]
        coords: Vec<f64>,
    },
    /// Compare the closed form with the quadrature oracles on random pairs.
    Verify {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// CSV tables of the AT function and linking number surfaces.
    Table {
        kind: TableKind,
        /// Points per free axis.
        #[arg(long, default_value_t = 41)]
        grid: usize,
        /// Fixed a (start coordinate of both segments).
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        /// Fixed segment length l = b - a.
        #[arg(long, allow_hyphen_values = true)]
        l: Option<f64>,
        /// Fixed signed distance d.
        #[arg(long, allow_hyphen_values = true)]
        d: Option<f64>,
        /// Fixed angle alpha in radians.
        #[arg(long)]
        alpha: Option<f64>,
        /// Free d ranges over [-dmax, dmax].
        #[arg(long, default_value_t = 2.0)]
        dmax: f64,
        /// Free a ranges over [-amax, amax].
        #[arg(long, default_value_t = 2.0)]
        amax: f64,
        /// Free l ranges over [0, lmax].
        #[arg(long, default_value_t = 2.0)]
        lmax: f64,
        /// Tolerance of the asymptotics checks.
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
    },
    /// Convergence of the periodic linking number, as CSV.
    Periodic {
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        nmax: usize,
        /// JSON lattice spec `{probe, cell, directions, n}` replacing the default lattice.
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// List the built-in links or export them as JSON files.
    Builtins {
        /// Directory to write `<name>.json` files into.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKind {
    AtSurface,
    LkSurface,
    Asymptotics,
}

#[derive(Debug, Deserialize)]
struct PairFile {
    s1: Segment,
    s2: Segment,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn cmd_lk(path: Option<PathBuf>, builtin: Option<String>) -> Result<String, CliError> {
    let link: PolyLink = match (path, builtin) {
        (_, Some(name)) => builtin_links()
            .remove(name.as_str())
            .ok_or_else(|| CliError::Usage(format!("unknown built-in link '{name}'")))?,
        (Some(p), None) => LinkFile::from_json(&read(&p)?)?.to_link()?,
        (None, None) => return Err(CliError::Usage("give a link file or --builtin".into())),
    };
    let report = lk_link(&link)?;
    let mut out = String::new();
    writeln!(out, "lk_total = {}", num(report.lk_total)).unwrap();
    writeln!(out, "pairs = {}", report.pair_count).unwrap();
    let hist: Vec<String> = report
        .branch_histogram
        .iter()
        .map(|(b, n)| format!("{}={n}", b.name()))
        .collect();
    writeln!(out, "branches = {}", hist.join(" ")).unwrap();
    for w in &report.warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    Ok(out)
}

fn cmd_invariants(file: Option<PathBuf>, coords: Vec<f64>) -> Result<String, CliError> {
    let (s1, s2) = match file {
        Some(p) => {
            let pair: PairFile =
                serde_json::from_str(&read(&p)?).map_err(|e| CliError::Parse(e.to_string()))?;
            (pair.s1, pair.s2)
        }
        None if coords.len() == 12 => {
            let v = |i: usize| Vec3::new(coords[i], coords[i + 1], coords[i + 2]);
            (Segment::new(v(0), v(3)), Segment::new(v(6), v(9)))
        }
        None => {
            return Err(CliError::Usage(
                "give --file or 12 endpoint coordinates".into(),
            ))
        }
    };
    if ![s1.a, s1.b, s2.a, s2.b].iter().all(|p| p.is_finite()) {
        return Err(CliError::Parse("non-finite coordinate".into()));
    }
    let inv = extract_invariants(&s1, &s2);
    let mut out = String::new();
    for (name, v) in ["alpha", "d", "a1", "b1", "a2", "b2"]
        .iter()
        .zip(inv.fields())
    {
        writeln!(out, "{name} = {}", num(v)).unwrap();
    }
    let mut flags = Vec::new();
    if inv.flags.parallel {
        flags.push("parallel");
    }
    if inv.flags.degenerate1 {
        flags.push("degenerate1");
    }
    if inv.flags.degenerate2 {
        flags.push("degenerate2");
    }
    writeln!(
        out,
        "flags = {}",
        if flags.is_empty() {
            "none".into()
        } else {
            flags.join(",")
        }
    )
    .unwrap();
    writeln!(out, "lk = {}", num(lk_from_invariants(&inv).value)).unwrap();
    Ok(out)
}

fn cmd_verify(count: usize, seed: u64, tol: f64) -> Result<String, CliError> {
    if count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(CliError::Usage("--tol must be non-negative".into()));
    }
    let cfg = QuadratureConfig::default();
    let mut rng = seeded(seed);
    let mut worst = [0.0_f64; 3];
    let mut failures = Vec::new();
    for i in 0..count {
        let (s1, s2) = random_skew_pair(&mut rng, &SkewPairBounds::default());
        let inv = extract_invariants(&s1, &s2);
        let exact = lk_from_invariants(&inv).value;
        let oracles = [
            gauss_lk_segments(&s1, &s2, &cfg),
            reduced_double_integral(&inv, &cfg),
            lk_single_integral(&inv, &cfg),
        ];
        for (w, o) in worst.iter_mut().zip(oracles) {
            match o {
                Ok(v) => *w = w.max((v - exact).abs()),
                Err(e) => failures.push(format!("pair {i}: {e}")),
            }
        }
    }
    let mut out = String::new();
    writeln!(out, "pairs = {count}").unwrap();
    for (name, w) in ["gauss", "reduced", "single"].iter().zip(worst) {
        writeln!(out, "max_deviation_{name} = {}", num(w)).unwrap();
    }
    let max = worst.iter().copied().fold(0.0, f64::max);
    writeln!(out, "max_deviation = {}", num(max)).unwrap();
    if !failures.is_empty() {
        return Err(CliError::Verification {
            report: out,
            message: format!("oracle errors: {}", failures.join("; ")),
        });
    }
    if max > tol {
        return Err(CliError::Verification {
            report: out,
            message: format!("max deviation {max:e} exceeds tolerance {tol:e}"),
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Param {
    A,
    L,
    D,
    Alpha,
}

impl Param {
    fn name(self) -> &'static str {
        match self {
            Param::A => "a",
            Param::L => "l",
            Param::D => "d",
            Param::Alpha => "alpha",
        }
    }
}

/// Midpoints of `n` equal cells of `[lo, hi]`; endpoints such as `alpha = 0`
/// are never sampled.
fn midpoints(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64)
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_table(
    kind: TableKind,
    grid: usize,
    fixed: [Option<f64>; 4],
    dmax: f64,
    amax: f64,
    lmax: f64,
    tol: f64,
) -> Result<String, CliError> {
    if kind == TableKind::Asymptotics {
        return asymptotics(tol);
    }
    if grid < 1 {
        return Err(CliError::Usage("--grid must be at least 1".into()));
    }
    let params = [Param::A, Param::L, Param::D, Param::Alpha];
    let mut values = fixed;
    if values.iter().all(Option::is_none) {
        values = match kind {
            TableKind::AtSurface => [Some(0.0), Some(1.0), None, None],
            _ => [None, Some(1.0), None, Some(FRAC_PI_2)],
        };
    }
    let free: Vec<Param> = params
        .iter()
        .zip(values)
        .filter(|(_, v)| v.is_none())
        .map(|(p, _)| *p)
        .collect();
    if free.len() != 2 {
        return Err(CliError::Usage(format!(
            "fix exactly two of --a, --l, --d, --alpha (got {} fixed)",
            4 - free.len()
        )));
    }
    if values.iter().flatten().any(|v| !v.is_finite())
        || ![dmax, amax, lmax].iter().all(|v| v.is_finite() && *v > 0.0)
    {
        return Err(CliError::Usage(
            "grid parameters must be finite and ranges positive".into(),
        ));
    }
    let axis = |p: Param| match p {
        Param::A => midpoints(-amax, amax, grid),
        Param::L => midpoints(0.0, lmax, grid),
        Param::D => midpoints(-dmax, dmax, grid),
        Param::Alpha => midpoints(0.0, PI, grid),
    };
    let value_name = if kind == TableKind::AtSurface {
        "at"
    } else {
        "lk"
    };
    let mut out = format!("{},{},{value_name}\n", free[0].name(), free[1].name());
    for x in axis(free[0]) {
        for y in axis(free[1]) {
            let mut v = values;
            v[params.iter().position(|&p| p == free[0]).unwrap()] = Some(x);
            v[params.iter().position(|&p| p == free[1]).unwrap()] = Some(y);
            let [a, l, d, alpha] = v.map(Option::unwrap);
            let z = match kind {
                TableKind::AtSurface => {
                    at_term(a, a + l, d, alpha).map_err(|e| CliError::Usage(e.to_string()))?
                }
                _ => {
                    lk_from_invariants(&SegmentPairInvariants::new(alpha, d, a, a + l, a, a + l))
                        .value
                }
            };
            writeln!(out, "{},{},{}", num(x), num(y), num(z)).unwrap();
        }
    }
    Ok(out)
}

fn asymptotics(tol: f64) -> Result<String, CliError> {
    let lk = |alpha, d, a1, b1, a2, b2| {
        lk_from_invariants(&SegmentPairInvariants::new(alpha, d, a1, b1, a2, b2)).value
    };
    let so = |l1, l2, d| lk_simple_orthogonal(l1, l2, d).expect("positive arguments");
    let rows: Vec<(&str, f64, f64, f64)> = vec![
        (
            "d->0+ disjoint projections",
            lk(FRAC_PI_2, 1e-6, 1.0, 2.0, 1.0, 2.0),
            0.0,
            tol,
        ),
        (
            "d->0- disjoint projections",
            lk(FRAC_PI_2, -1e-6, 1.0, 2.0, 1.0, 2.0),
            0.0,
            tol,
        ),
        (
            "d->0+ crossing projections",
            lk(FRAC_PI_2, 1e-6, -1.0, 1.0, -1.0, 1.0),
            -0.5,
            tol,
        ),
        (
            "d->0- crossing projections",
            lk(FRAC_PI_2, -1e-6, -1.0, 1.0, -1.0, 1.0),
            0.5,
            tol,
        ),
        ("d->0 simple orthogonal", so(1.0, 1.0, 1e-12), -0.125, tol),
        ("d->inf", lk(FRAC_PI_2, 1e6, -0.5, 0.5, -0.5, 0.5), 0.0, tol),
        ("l->0 simple orthogonal", so(1e-9, 1.0, 1.0), 0.0, tol),
        (
            "l->0 general",
            lk(1.0, 0.5, -0.3, -0.3 + 1e-9, 0.2, 1.2),
            0.0,
            tol,
        ),
        ("alpha->0", lk(1e-8, 1.0, -0.5, 0.5, -0.5, 0.5), 0.0, tol),
        (
            "alpha->pi",
            lk(PI - 1e-8, 1.0, -0.5, 0.5, -0.5, 0.5),
            0.0,
            tol,
        ),
        (
            "a->inf",
            lk(FRAC_PI_2, 1.0, 1e6, 1e6 + 1.0, 1e6, 1e6 + 1.0),
            0.0,
            10.0 * tol,
        ),
    ];
    let mut out = String::from("check,value,expected,tolerance,pass\n");
    let mut failed = false;
    for (name, value, expected, t) in rows {
        let pass = (value - expected).abs() < t;
        failed |= !pass;
        writeln!(
            out,
            "{name},{},{},{},{pass}",
            num(value),
            num(expected),
            num(t)
        )
        .unwrap();
    }
    if failed {
        return Err(CliError::Verification {
            report: out,
            message: "some asymptotic checks failed".into(),
        });
    }
    Ok(out)
}

fn cmd_periodic(
    k: usize,
    nmax: usize,
    spec: Option<PathBuf>,
) -> Result<(String, String), CliError> {
    let lattice: LatticeSpec = match spec {
        Some(p) => serde_json::from_str(&read(&p)?).map_err(|e| CliError::Parse(e.to_string()))?,
        None => {
            if !(1..=3).contains(&k) {
                return Err(CliError::Usage(format!("--k must be 1, 2 or 3, got {k}")));
            }
            default_lattice(k, 0)?
        }
    };
    let rows = convergence_scan(&lattice, nmax)?;
    let mut out = String::from("n,partial_lk,delta\n");
    for r in &rows {
        writeln!(out, "{},{},{}", r.n, num(r.partial_lk), num(r.delta)).unwrap();
    }
    let last = rows.last().expect("at least one row");
    let note = format!(
        "limit estimate = {} (last shell contribution {})\n",
        num(last.partial_lk),
        num(last.delta)
    );
    Ok((out, note))
}

fn cmd_builtins(out_dir: Option<PathBuf>) -> Result<String, CliError> {
    let mut out = String::new();
    for (name, link) in builtin_links() {
        let expected = builtin_expected(name).expect("every built-in has an expected value");
        match &out_dir {
            Some(dir) => {
                fs::create_dir_all(dir)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
                let path = dir.join(format!("{name}.json"));
                fs::write(&path, LinkFile::from(&link).to_json())
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                writeln!(out, "{}", path.display()).unwrap();
            }
            None => writeln!(out, "{name} {expected}").unwrap(),
        }
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<(String, String), CliError> {
    let plain = |r: Result<String, CliError>| r.map(|s| (s, String::new()));
    match cli.command {
        Command::Lk { path, builtin } => plain(cmd_lk(path, builtin)),
        Command::Invariants { file, coords } => plain(cmd_invariants(file, coords)),
        Command::Verify { count, seed, tol } => plain(cmd_verify(count, seed, tol)),
        Command::Table {
            kind,
            grid,
            a,
            l,
            d,
            alpha,
            dmax,
            amax,
            lmax,
            tol,
        } => plain(cmd_table(
            kind,
            grid,
            [a, l, d, alpha],
            dmax,
            amax,
            lmax,
            tol,
        )),
        Command::Periodic { k, nmax, spec } => cmd_periodic(k, nmax, spec),
        Command::Builtins { out } => plain(cmd_builtins(out)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((stdout, stderr)) => {
            print!("{stdout}");
            eprint!("{stderr}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::Verification { report, .. } = &e {
                print!("{report}");
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
