//! Command-line front end. Every subcommand writes one JSON document (CSV
//! for `spectrum`) and maps outcomes to exit codes: 0 found or passed,
//! 1 not found or failed, 2 usage or runtime error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bohr::{first_piecewise_violation, folner_bohr_check, spectral_csv, spectral_hints, BohrSpec};
use crate::cert::{check_folner, check_jin, check_lattice, check_pws, CheckFailure};
use crate::density::{banach_density_est, best_shift};
use crate::error::{Error, Result};
use crate::folner::{cc_cover, default_test_window, greedy_disjoint_shifts, greedy_disjoint_shifts_windowed, FolnerReport};
use crate::jin::{jin_experiment, JinOptions, JinReport};
use crate::lattice::{banach_density_est_d, diff_set_d, pws_certificate_d, GridBox, LatticeCertificate, LatticeSet};
use crate::real::parse_q;
use crate::setmodel::{materialize, parse, ExactSet, SetSpec, Window};
use crate::structure::{min_gap_bound, pws_certificate, PwsCertificate};

#[derive(Debug, Parser)]
#[command(name = "banach", version, about = "Density, difference-set and piecewise-syndeticity toolkit")]
pub struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for sampled quantities; required whenever randomness is involved.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SpecWindow {
    #[arg(long)]
    pub spec: String,
    #[arg(long, allow_hyphen_values = true)]
    pub window: Window,
}

#[derive(Debug, Args)]
pub struct Pair {
    #[arg(long = "specA")]
    pub spec_a: String,
    #[arg(long = "specB")]
    pub spec_b: String,
}

#[derive(Debug, Args)]
pub struct LatticeInput {
    /// One spec per axis (product set); repeat the flag.
    #[arg(long)]
    pub spec: Vec<String>,
    /// With `--specB`, operate on the difference set A − B.
    #[arg(long = "specA")]
    pub spec_a: Vec<String>,
    #[arg(long = "specB")]
    pub spec_b: Vec<String>,
    #[arg(long = "box", allow_hyphen_values = true)]
    pub bbox: GridBox,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a spec and print its canonical form.
    Parse {
        #[arg(long)]
        spec: String,
    },
    /// List the members of a spec on a window.
    Materialize(SpecWindow),
    /// Maximum density over length-L subwindows (L defaults to the window length).
    Density {
        #[command(flatten)]
        sw: SpecWindow,
        #[arg(long = "L")]
        l: Option<usize>,
    },
    /// Shift n maximizing the density of {k ∈ B : k + n ∈ A}.
    Bestshift {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, allow_hyphen_values = true)]
        range: Window,
        #[arg(long, allow_hyphen_values = true)]
        window: Window,
    },
    /// Smallest k with S − {−k..k} covering the window.
    Syndetic(SpecWindow),
    /// Piecewise-syndeticity certificate.
    Pws {
        #[command(flatten)]
        sw: SpecWindow,
        #[arg(long)]
        kmax: u64,
        #[arg(long)]
        lmin: usize,
    },
    /// Greedy disjoint shifts of C and the covering check for C − C.
    Folner {
        #[arg(long)]
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        range: Window,
        /// Covering test window (default [−10P, 10P]).
        #[arg(long = "test-window", allow_hyphen_values = true)]
        test_window: Option<Window>,
        /// Decide disjointness on this window for sets without a periodic form.
        #[arg(long, allow_hyphen_values = true)]
        core: Option<Window>,
    },
    /// Whether the translates (C − C) + i cover the window.
    Cover {
        #[command(flatten)]
        sw: SpecWindow,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        shifts: Vec<i64>,
    },
    /// Difference set, certificate and translate probes for a pair.
    Jin {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, allow_hyphen_values = true)]
        window: Window,
        #[arg(long)]
        kmax: u64,
        #[arg(long)]
        lmin: usize,
        #[arg(long, default_value_t = 0)]
        probes: usize,
        /// Radius of the shift search for n*.
        #[arg(long)]
        radius: Option<i64>,
    },
    /// Check C − C ⊇ U ∖ N for a Bohr set U.
    Bohr {
        #[command(flatten)]
        sw: SpecWindow,
        #[arg(long)]
        bohr: String,
        #[arg(long, default_value = "0/1")]
        tol: String,
    },
    /// Check that P contains every Bohr member inside the listed intervals.
    Pwbohr {
        #[command(flatten)]
        sw: SpecWindow,
        #[arg(long)]
        bohr: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        intervals: Vec<Window>,
    },
    /// Largest normalized exponential sums over the grid j/G (CSV).
    Spectrum {
        #[command(flatten)]
        sw: SpecWindow,
        #[arg(long)]
        grid: usize,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    #[command(name = "lattice-density")]
    LatticeDensity {
        #[command(flatten)]
        input: LatticeInput,
        #[arg(long = "L")]
        l: usize,
    },
    #[command(name = "lattice-diff")]
    LatticeDiff {
        #[command(flatten)]
        input: LatticeInput,
    },
    #[command(name = "lattice-pws")]
    LatticePws {
        #[command(flatten)]
        input: LatticeInput,
        #[arg(long)]
        kmax: u64,
        #[arg(long)]
        lmin: usize,
    },
    /// Re-validate a certificate or report against its specs.
    Check {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        spec: Vec<String>,
        #[arg(long = "specA")]
        spec_a: Vec<String>,
        #[arg(long = "specB")]
        spec_b: Vec<String>,
        /// Covering test window for Følner reports; operand window for
        /// one-dimensional difference certificates.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<Window>,
        /// Operand box for lattice difference certificates.
        #[arg(long = "box", allow_hyphen_values = true)]
        bbox: Option<GridBox>,
    },
}

/// Exit status and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(found: bool, stdout: String) -> Self {
        Outcome { code: if found { 0 } else { 1 }, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Outcome { code, stdout: String::new(), stderr }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome { code, stdout: if code == 0 { e.to_string() } else { String::new() }, stderr: if code == 0 { String::new() } else { e.to_string() } };
        }
    };
    let out = match execute(&cli) {
        Ok((found, text)) => Outcome::ok(found, text),
        Err(e) => return Outcome::fail(2, format!("error: {e}\n")),
    };
    match &cli.out {
        Some(path) => match std::fs::write(path, &out.stdout) {
            Ok(()) => Outcome { stdout: String::new(), ..out },
            Err(e) => Outcome::fail(2, format!("error: {}\n", Error::Io(e.to_string()))),
        },
        None => out,
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn not_found() -> String {
    to_json(&json!({ "result": "NotFound" }))
}

fn spec(text: &str, seed: Option<u64>) -> Result<SetSpec> {
    let s = parse(text)?;
    if s.uses_random() && seed.is_none() {
        return Err(Error::OutOfRange("random specs require --seed".into()));
    }
    Ok(s)
}

fn bohr_spec(text: &str) -> Result<BohrSpec> {
    match parse(text)? {
        SetSpec::Bohr(b) => Ok(b),
        other => Err(Error::OutOfRange(format!("expected a bohr(...) spec, got {other}"))),
    }
}

fn lattice_product(texts: &[String], bbox: GridBox, seed: Option<u64>) -> Result<LatticeSet> {
    let specs = texts.iter().map(|t| spec(t, seed)).collect::<Result<Vec<_>>>()?;
    LatticeSet::product(&specs, bbox)
}

/// The product set on the box, or the difference of two product sets each
/// materialized on the box.
fn lattice_input(input: &LatticeInput, seed: Option<u64>) -> Result<LatticeSet> {
    match (input.spec.is_empty(), input.spec_a.is_empty(), input.spec_b.is_empty()) {
        (false, true, true) => lattice_product(&input.spec, input.bbox.clone(), seed),
        (true, false, false) => {
            let a = lattice_product(&input.spec_a, input.bbox.clone(), seed)?;
            let b = lattice_product(&input.spec_b, input.bbox.clone(), seed)?;
            diff_set_d(&a, &b)
        }
        _ => Err(Error::OutOfRange("give either --spec per axis or both --specA and --specB per axis".into())),
    }
}

fn execute(cli: &Cli) -> Result<(bool, String)> {
    let seed = cli.seed;
    Ok(match &cli.command {
        Command::Parse { spec: text } => {
            let s = parse(text)?;
            (true, to_json(&json!({ "spec": s.to_string(), "depth": s.depth() })))
        }
        Command::Materialize(sw) => {
            let m = materialize(&spec(&sw.spec, seed)?, sw.window)?;
            let members: Vec<i64> = m.members().collect();
            (true, to_json(&json!({ "window": m.window(), "members": members, "approximate": m.is_approximate() })))
        }
        Command::Density { sw, l } => {
            let m = materialize(&spec(&sw.spec, seed)?, sw.window)?;
            let report = banach_density_est(&m, l.unwrap_or(sw.window.len()))?;
            (true, to_json(&report))
        }
        Command::Bestshift { pair, range, window } => {
            let w = best_shift(&spec(&pair.spec_a, seed)?, &spec(&pair.spec_b, seed)?, *range, *window)?;
            (true, to_json(&w))
        }
        Command::Syndetic(sw) => {
            let m = materialize(&spec(&sw.spec, seed)?, sw.window)?;
            (true, to_json(&json!({ "k": min_gap_bound(&m)?, "window": m.window() })))
        }
        Command::Pws { sw, kmax, lmin } => {
            let m = materialize(&spec(&sw.spec, seed)?, sw.window)?;
            match pws_certificate(&m, *kmax, *lmin)? {
                Some(c) => (true, to_json(&c)),
                None => (false, not_found()),
            }
        }
        Command::Folner { spec: text, range, test_window, core } => {
            let c = spec(text, seed)?;
            let mut report = match core {
                Some(core) => {
                    let wide = core.widened(-range.lo(), range.hi())?;
                    greedy_disjoint_shifts_windowed(&materialize(&c, wide)?, *core, *range)?
                }
                None => greedy_disjoint_shifts(&c, *range)?,
            };
            if let Some(t) = test_window {
                report.cover_verified = cc_cover(&c, &report.shifts, *t)?.covered;
            }
            (report.cover_verified, to_json(&report))
        }
        Command::Cover { sw, shifts } => {
            let cover = cc_cover(&spec(&sw.spec, seed)?, shifts, sw.window)?;
            let v = json!({ "covered": cover.covered, "first_miss": cover.first_miss, "exact": cover.exact });
            (cover.covered, to_json(&v))
        }
        Command::Jin { pair, window, kmax, lmin, probes, radius } => {
            if *probes > 0 && seed.is_none() {
                return Err(Error::OutOfRange("translate probes require --seed".into()));
            }
            let opts = JinOptions { probes: *probes, seed: seed.unwrap_or(0), shift_radius: *radius };
            let report = jin_experiment(&spec(&pair.spec_a, seed)?, &spec(&pair.spec_b, seed)?, *window, *kmax, *lmin, &opts)?;
            (report.success(), to_json(&report))
        }
        Command::Bohr { sw, bohr, tol } => {
            let tol = parse_q(tol).ok_or_else(|| Error::OutOfRange(format!("bad tolerance {tol:?}")))?;
            let out = folner_bohr_check(&spec(&sw.spec, seed)?, &bohr_spec(bohr)?, sw.window, tol)?;
            (out.pass, to_json(&out))
        }
        Command::Pwbohr { sw, bohr, intervals } => {
            let m = materialize(&spec(&sw.spec, seed)?, sw.window)?;
            let violation = first_piecewise_violation(&m, &bohr_spec(bohr)?, intervals)?;
            (violation.is_none(), to_json(&json!({ "holds": violation.is_none(), "violation": violation })))
        }
        Command::Spectrum { sw, grid, top } => {
            let m = materialize(&spec(&sw.spec, seed)?, sw.window)?;
            (true, spectral_csv(&spectral_hints(&m, *grid, *top)?))
        }
        Command::LatticeDensity { input, l } => (true, to_json(&banach_density_est_d(&lattice_input(input, seed)?, *l)?)),
        Command::LatticeDiff { input } => {
            let d = lattice_input(input, seed)?;
            let members: Vec<Vec<i64>> = d.members().collect();
            (true, to_json(&json!({ "box": d.bbox(), "members": members, "approximate": d.is_approximate() })))
        }
        Command::LatticePws { input, kmax, lmin } => match pws_certificate_d(&lattice_input(input, seed)?, *kmax, *lmin)? {
            Some(c) => (true, to_json(&c)),
            None => (false, not_found()),
        },
        Command::Check { cert, spec: specs, spec_a, spec_b, window, bbox } => {
            let text = std::fs::read_to_string(cert).map_err(|e| Error::Io(format!("{}: {e}", cert.display())))?;
            let value: Value = serde_json::from_str(&text).map_err(|e| Error::Io(format!("{}: {e}", cert.display())))?;
            let verdict = check(&value, specs, spec_a, spec_b, *window, bbox.clone(), seed)?;
            let v = match &verdict {
                Ok(()) => json!({ "valid": true }),
                Err(f) => json!({ "valid": false, "reason": f.to_string() }),
            };
            (verdict.is_ok(), to_json(&v))
        }
    })
}

fn one<'a>(v: &'a [String], flag: &str) -> Result<&'a str> {
    match v {
        [s] => Ok(s),
        _ => Err(Error::OutOfRange(format!("expected exactly one {flag}"))),
    }
}

fn decode<T: serde::de::DeserializeOwned>(v: &Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Io(format!("malformed certificate: {e}")))
}

/// Dispatches on the document shape: Jin report, Følner report, lattice
/// certificate or one-dimensional certificate.
fn check(
    v: &Value,
    specs: &[String],
    spec_a: &[String],
    spec_b: &[String],
    window: Option<Window>,
    bbox: Option<GridBox>,
    seed: Option<u64>,
) -> Result<std::result::Result<(), CheckFailure>> {
    if v.get("densities").is_some() {
        let report: JinReport = decode(v)?;
        let a = spec(one(spec_a, "--specA")?, seed)?;
        let b = spec(one(spec_b, "--specB")?, seed)?;
        return Ok(check_jin(&a, &b, &report));
    }
    if v.get("shifts").is_some() {
        let report: FolnerReport = decode(v)?;
        let c = spec(one(specs, "--spec")?, seed)?;
        let test = match window {
            Some(w) => w,
            None => default_test_window(
                ExactSet::of(&c).ok_or_else(|| Error::NotPeriodicClass(c.to_string()))?.period(),
            ),
        };
        return Ok(check_folner(&c, &report, test));
    }
    let lattice = v.get("window").and_then(|w| w.get(0)).is_some_and(Value::is_array);
    if lattice {
        let c: LatticeCertificate = decode(v)?;
        let s = if spec_a.is_empty() && spec_b.is_empty() {
            lattice_product(specs, c.window.clone(), seed)?
        } else {
            let bbox = bbox.ok_or_else(|| Error::OutOfRange("--box (the operand box) is required with --specA/--specB".into()))?;
            let a = lattice_product(spec_a, bbox.clone(), seed)?;
            let b = lattice_product(spec_b, bbox, seed)?;
            diff_set_d(&a, &b)?
        };
        return Ok(check_lattice(&s, &c));
    }
    let c: PwsCertificate = decode(v)?;
    let s = if spec_a.is_empty() && spec_b.is_empty() {
        materialize(&spec(one(specs, "--spec")?, seed)?, c.window)?
    } else {
        let w = window.ok_or_else(|| Error::OutOfRange("--window (the operand window) is required with --specA/--specB".into()))?;
        let a = materialize(&spec(one(spec_a, "--specA")?, seed)?, w)?;
        let b = materialize(&spec(one(spec_b, "--specB")?, seed)?, w)?;
        crate::setmodel::diff_set(&a, &b)?
    };
    Ok(check_pws(&s, &c))
}
