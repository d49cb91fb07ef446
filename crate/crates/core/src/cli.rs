//! `ihs` command-line front end.
//!
//! Every command prints a report in text form, or with `--json` an envelope
//! `{"schema_version": 1, "command", "defaults", "result"}`. Exit codes: 0 on
//! success, 1 on a domain error, 2 on a usage error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{self, Int};
use crate::cubic::{self, CongruenceCertificate};
use crate::curves::{self, SurfaceKind};
use crate::error::Error;
use crate::lattice::{find_hyperbolic_pair, parse_lattice_expr, BoxQuery, IntRange, Lattice, LatticeVector};
use crate::mori::{self, MoriQuery};
use crate::noether_lefschetz::{self as nl, NlQuery, OrbitQuery};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_G_MAX: i64 = 40;

#[derive(Parser, Debug)]
#[command(name = "ihs", version, about = "Lattice computations for hyperkähler manifolds")]
pub struct Cli {
    /// Emit a JSON envelope instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lattice invariants and enumeration.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Noether-Lefschetz density checks.
    #[command(subcommand)]
    Nl(NlCmd),
    /// Same as `nl orbit-squares`.
    Orbit(OrbitArgs),
    /// Nodal curves, pencils and rational curve classes.
    #[command(subcommand)]
    Curves(CurvesCmd),
    /// Special cubic fourfold discriminants.
    #[command(subcommand)]
    Cubic(CubicCmd),
    /// Mori cone wall classes.
    #[command(subcommand)]
    Mori(MoriCmd),
}

#[derive(Args, Debug, Clone)]
pub struct LatticeInput {
    /// Lattice expression, e.g. `K3n(2)` or `U+U+rank1(-4)`.
    #[arg(long, conflicts_with = "gram_file")]
    pub name: Option<String>,
    /// JSON file with `{"gram": [[..]]}` or a bare matrix.
    #[arg(long)]
    pub gram_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// Rank, signature, determinant and discriminant group.
    Info(LatticeInput),
    /// Orthogonal complement of the span of some vectors.
    Complement {
        #[command(flatten)]
        lattice: LatticeInput,
        /// Vectors separated by `;`, coordinates by `,`.
        #[arg(long, allow_hyphen_values = true)]
        vectors: String,
    },
    /// Vectors in the box `max |x_i| <= bound` with square in a range.
    Enumerate {
        #[command(flatten)]
        lattice: LatticeInput,
        #[arg(long, default_value_t = mori::DEFAULT_COORD_BOUND)]
        bound: u32,
        #[arg(long, allow_hyphen_values = true)]
        min_square: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        max_square: Option<i64>,
    },
    /// Search for a hyperbolic pair `e, f` (`e^2 = f^2 = 0`, `(e, f) = 1`).
    Hyperbolic {
        #[command(flatten)]
        lattice: LatticeInput,
        #[arg(long, default_value_t = mori::DEFAULT_COORD_BOUND)]
        bound: u32,
    },
}

#[derive(Args, Debug)]
pub struct NlCheckArgs {
    /// JSON query `{"ambient", "h"?, "N", "saturate_first"?}`.
    #[arg(long, conflicts_with_all = ["name", "gram_file"])]
    pub query_file: Option<PathBuf>,
    #[command(flatten)]
    pub lattice: LatticeInput,
    /// Polarization.
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
    /// Generators of N, separated by `;`.
    #[arg(long = "n", allow_hyphen_values = true)]
    pub generators: Option<String>,
    /// Use N as given instead of its saturation.
    #[arg(long)]
    pub no_saturate: bool,
}

#[derive(Args, Debug)]
pub struct OrbitArgs {
    /// JSON query `{"ambient", "h", "lambda", "generator_squares"?, "generator_bound"?, "support"?, "depth"?}`.
    #[arg(long, conflicts_with_all = ["name", "gram_file"])]
    pub query_file: Option<PathBuf>,
    #[command(flatten)]
    pub lattice: LatticeInput,
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Squares of the reflection generators, comma separated.
    #[arg(long, allow_hyphen_values = true, default_value = "-2")]
    pub gen_squares: String,
    /// Coordinate box for the generators.
    #[arg(long, default_value_t = 1)]
    pub gen_bound: u32,
    /// Coordinates the generators may use, comma separated.
    #[arg(long)]
    pub support: Option<String>,
    /// Overrides the depth (also over a query file).
    #[arg(long)]
    pub depth: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum NlCmd {
    /// Density verdict for a Noether-Lefschetz locus.
    Check(NlCheckArgs),
    /// Squares of projections of a reflection orbit.
    OrbitSquares(OrbitArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct SurfaceArgs {
    /// 0 for K3 surfaces, 1 for abelian surfaces.
    #[arg(long)]
    pub eps: i64,
    #[arg(long)]
    pub n: i64,
}

#[derive(Subcommand, Debug)]
pub enum CurvesCmd {
    /// Whether a pencil exists on the normalization of a nodal curve.
    Exists {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        delta: i64,
    },
    /// Minimal node count at geometric genus g.
    DeltaMin {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        g: i64,
    },
    /// Class, square and divisibility of the rational curve.
    Class {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        g: i64,
        #[arg(long)]
        r: i64,
    },
    /// Divisibility of the dual divisor.
    Divisibility {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        g: i64,
    },
    /// Parameters realizing a dual divisor of square 2d and divisibility t.
    Cover {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Target square 2d.
        #[arg(long)]
        square: i64,
        #[arg(long)]
        t: i64,
        #[arg(long, default_value_t = DEFAULT_G_MAX)]
        g_max: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum CubicCmd {
    Admissible {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Search for `d a^2 = 2(m^2 + m + 1)`, then a congruence sieve.
    Necessary {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value_t = cubic::DEFAULT_A_BOUND)]
        a_bound: i64,
        /// Sieve moduli, comma separated.
        #[arg(long, default_value = "8,16,24,5,7,9,11,13")]
        moduli: String,
    },
    Sufficient {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Density check for Fano varieties birational to Hilbert squares.
    Density {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        e0: i64,
    },
    /// Re-check a congruence certificate.
    Replay {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        certificate_file: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum MoriCmd {
    Enumerate {
        /// JSON query `{"lattice", "v", "h", "kummer"?, "coord_bound"?}`.
        #[arg(long, conflicts_with_all = ["name", "gram_file"])]
        query_file: Option<PathBuf>,
        #[command(flatten)]
        lattice: LatticeInput,
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
        #[arg(long)]
        kummer: bool,
        /// Overrides the box (also over a query file).
        #[arg(long)]
        bound: Option<u32>,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = std::result::Result<Value, Failure>;

fn defaults() -> Value {
    json!({
        "coord_bound": mori::DEFAULT_COORD_BOUND,
        "a_bound": cubic::DEFAULT_A_BOUND,
        "depth": nl::DEFAULT_ORBIT_DEPTH,
        "g_max": DEFAULT_G_MAX,
    })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Domain(Error::Parse(format!("cannot read {}: {e}", path.display()))))?;
    serde_json::from_str(&text).map_err(|e| Failure::Domain(Error::Parse(format!("{}: {e}", path.display()))))
}

fn load_lattice(input: &LatticeInput) -> Result<Lattice, Failure> {
    match (&input.name, &input.gram_file) {
        (Some(name), None) => Ok(parse_lattice_expr(name)?),
        (None, Some(path)) => {
            let v = read_json(path)?;
            match v {
                Value::Array(_) => Ok(nl::lattice_from_json(&json!({ "gram": v }))?),
                other => Ok(nl::lattice_from_json(&other)?),
            }
        }
        _ => Err(usage("a lattice is required: pass --name or --gram-file")),
    }
}

fn parse_ints(s: &str) -> Result<Vec<Int>, Failure> {
    s.split(',')
        .map(|x| x.trim().parse::<Int>().map_err(|_| Failure::Domain(Error::Parse(format!("bad integer `{x}` in `{s}`")))))
        .collect()
}

fn parse_vector(s: &str) -> Result<LatticeVector, Failure> {
    Ok(LatticeVector(parse_ints(s)?))
}

fn parse_vectors(s: &str) -> Result<Vec<LatticeVector>, Failure> {
    s.split(';').filter(|p| !p.trim().is_empty()).map(parse_vector).collect()
}

fn parse_small_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, Failure> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|x| x.trim().parse::<T>().map_err(|_| Failure::Domain(Error::Parse(format!("bad entry `{x}` in `{s}`")))))
        .collect()
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str, Failure> {
    v.as_deref().ok_or_else(|| usage(format!("missing {flag}")))
}

fn surface(args: &SurfaceArgs) -> Result<SurfaceKind, Failure> {
    Ok(SurfaceKind::from_epsilon(args.eps)?)
}

fn lattice_cmd(cmd: &LatticeCmd) -> Outcome {
    match cmd {
        LatticeCmd::Info(input) => {
            let l = load_lattice(input)?;
            let disc = match l.discriminant_group() {
                Ok(g) => to_value(&g),
                Err(Error::Degenerate) => Value::Null,
                Err(e) => return Err(e.into()),
            };
            Ok(json!({
                "label": l.label(),
                "rank": l.rank(),
                "even": l.is_even(),
                "determinant": arith::int_to_json(&l.determinant()),
                "signature": to_value(&l.signature()),
                "discriminant_group": disc,
            }))
        }
        LatticeCmd::Complement { lattice, vectors } => {
            let l = load_lattice(lattice)?;
            let vs = parse_vectors(vectors)?;
            let c = l.orthogonal_complement(&vs)?;
            Ok(json!({
                "rank": c.rank(),
                "basis": to_value(&c.basis_vectors()),
                "gram": to_value(&c.lattice)["gram"].clone(),
                "signature": to_value(&c.lattice.signature()),
            }))
        }
        LatticeCmd::Enumerate { lattice, bound, min_square, max_square } => {
            let l = load_lattice(lattice)?;
            let range = IntRange { min: min_square.map(Int::from), max: max_square.map(Int::from) };
            let vectors = BoxQuery::new(&l, *bound).square(range).collect();
            let items = vectors
                .iter()
                .map(|v| Ok(json!({ "vector": to_value(v), "square": arith::int_to_json(&l.square(v)?) })))
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(json!({ "bound": bound, "count": items.len(), "vectors": items }))
        }
        LatticeCmd::Hyperbolic { lattice, bound } => {
            let l = load_lattice(lattice)?;
            let found = find_hyperbolic_pair(&l, *bound);
            let (e, f) = match &found.pair {
                Some((e, f)) => (to_value(e), to_value(f)),
                None => (Value::Null, Value::Null),
            };
            Ok(json!({ "bound": bound, "found": found.pair.is_some(), "e": e, "f": f }))
        }
    }
}

fn nl_check(a: &NlCheckArgs) -> Outcome {
    let query = match &a.query_file {
        Some(path) => NlQuery::from_json(&read_json(path)?)?,
        None => {
            let l = load_lattice(&a.lattice)?;
            let h = a.h.as_deref().map(parse_vector).transpose()?;
            let gens = parse_vectors(required(&a.generators, "--n")?)?;
            NlQuery::new(l, h, gens)
        }
    };
    let query = NlQuery { saturate_first: query.saturate_first && !a.no_saturate, ..query };
    Ok(to_value(&nl::nl_density_check(&query)?))
}

fn orbit(a: &OrbitArgs) -> Outcome {
    let mut query = match &a.query_file {
        Some(path) => OrbitQuery::from_json(&read_json(path)?)?,
        None => OrbitQuery {
            ambient: load_lattice(&a.lattice)?,
            h: parse_vector(required(&a.h, "--h")?)?,
            lambda: parse_vector(required(&a.lambda, "--lambda")?)?,
            generator_squares: parse_small_list(&a.gen_squares)?,
            generator_bound: a.gen_bound,
            support: a.support.as_deref().map(parse_small_list).transpose()?,
            depth: nl::DEFAULT_ORBIT_DEPTH,
        },
    };
    if let Some(d) = a.depth {
        query.depth = d;
    }
    let generators = query.generators()?;
    let report = nl::orbit_projection_squares(&query.ambient, &query.h, &query.lambda, &generators, query.depth)?;
    let mut v = to_value(&report);
    v["generator_count"] = json!(generators.len());
    v["distinct_squares"] = json!(report.squares.len());
    Ok(v)
}

fn curves_cmd(cmd: &CurvesCmd) -> Outcome {
    match cmd {
        CurvesCmd::Exists { surface: s, p, delta } => {
            let kind = surface(s)?;
            let e = curves::g1_exists(kind, s.n, *p, *delta)?;
            let dim = if e.exists { Some(curves::series_dimension(kind, s.n, *p, *delta)?) } else { None };
            let mut v = to_value(&e);
            v["series_dimension"] = json!(dim);
            Ok(v)
        }
        CurvesCmd::DeltaMin { surface: s, g } => Ok(to_value(&curves::delta_min(*g, surface(s)?, s.n)?)),
        CurvesCmd::Class { surface: s, g, r } => Ok(to_value(&curves::curve_class(*g, *r, surface(s)?, s.n)?)),
        CurvesCmd::Divisibility { surface: s, g } => {
            Ok(to_value(&curves::dual_divisor_divisibility(*g, surface(s)?, s.n)?))
        }
        CurvesCmd::Cover { surface: s, square, t, g_max } => {
            let kind = surface(s)?;
            let hits = curves::pair_component_cover(*square, *t, kind, s.n, *g_max)?;
            let summary = curves::has_rational_curve_dual_to_polarization(kind, s.n, Some((*square, *t)), *g_max)?;
            Ok(json!({ "hits": to_value(&hits), "summary": to_value(&summary) }))
        }
    }
}

fn cubic_cmd(cmd: &CubicCmd) -> Outcome {
    match cmd {
        CubicCmd::Admissible { d } => Ok(json!({
            "d": d,
            "admissible": cubic::is_admissible(*d),
            "note": cubic::admissibility_note(*d),
        })),
        CubicCmd::Necessary { d, a_bound, moduli } => {
            let moduli: Vec<i64> = parse_small_list(moduli)?;
            let mut v = to_value(&cubic::hassett_necessary(*d, *a_bound, &moduli)?);
            v["d"] = json!(d);
            Ok(v)
        }
        CubicCmd::Sufficient { d } => Ok(json!({ "d": d, "m": cubic::hassett_sufficient(*d) })),
        CubicCmd::Density { d, e0 } => {
            let mut v = to_value(&cubic::fano_density_check(*d, *e0)?);
            v["d"] = json!(d);
            v["e0"] = json!(e0);
            Ok(v)
        }
        CubicCmd::Replay { d, certificate_file } => {
            let raw = read_json(certificate_file)?;
            let cert: CongruenceCertificate =
                serde_json::from_value(raw).map_err(|e| Failure::Domain(Error::Parse(e.to_string())))?;
            Ok(json!({ "d": d, "modulus": cert.modulus, "valid": cert.replay(*d) }))
        }
    }
}

fn mori_cmd(cmd: &MoriCmd) -> Outcome {
    let MoriCmd::Enumerate { query_file, lattice, v, h, kummer, bound } = cmd;
    let mut query = match query_file {
        Some(path) => MoriQuery::from_json(&read_json(path)?)?,
        None => MoriQuery::new(
            load_lattice(lattice)?,
            parse_vector(required(v, "--v")?)?,
            parse_vector(required(h, "--h")?)?,
            *kummer,
            mori::DEFAULT_COORD_BOUND,
        )?,
    };
    if let Some(b) = bound {
        query.coord_bound = *b;
    }
    Ok(to_value(&mori::mori_report(&query)?))
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Lattice(c) => match c {
            LatticeCmd::Info(_) => "lattice info",
            LatticeCmd::Complement { .. } => "lattice complement",
            LatticeCmd::Enumerate { .. } => "lattice enumerate",
            LatticeCmd::Hyperbolic { .. } => "lattice hyperbolic",
        },
        Command::Nl(NlCmd::Check(_)) => "nl check",
        Command::Nl(NlCmd::OrbitSquares(_)) => "nl orbit-squares",
        Command::Orbit(_) => "orbit",
        Command::Curves(c) => match c {
            CurvesCmd::Exists { .. } => "curves exists",
            CurvesCmd::DeltaMin { .. } => "curves delta-min",
            CurvesCmd::Class { .. } => "curves class",
            CurvesCmd::Divisibility { .. } => "curves divisibility",
            CurvesCmd::Cover { .. } => "curves cover",
        },
        Command::Cubic(c) => match c {
            CubicCmd::Admissible { .. } => "cubic admissible",
            CubicCmd::Necessary { .. } => "cubic necessary",
            CubicCmd::Sufficient { .. } => "cubic sufficient",
            CubicCmd::Density { .. } => "cubic density",
            CubicCmd::Replay { .. } => "cubic replay",
        },
        Command::Mori(_) => "mori enumerate",
    }
}

fn dispatch(cmd: &Command) -> Outcome {
    match cmd {
        Command::Lattice(c) => lattice_cmd(c),
        Command::Nl(NlCmd::Check(a)) => nl_check(a),
        Command::Nl(NlCmd::OrbitSquares(a)) | Command::Orbit(a) => orbit(a),
        Command::Curves(c) => curves_cmd(c),
        Command::Cubic(c) => cubic_cmd(c),
        Command::Mori(c) => mori_cmd(c),
    }
}

fn is_rational(map: &serde_json::Map<String, Value>) -> bool {
    map.len() == 2 && map.contains_key("num") && map.contains_key("den")
}

fn inline(v: &Value) -> String {
    match v {
        Value::Null => "none".to_string(),
        Value::String(s) => s.clone(),
        Value::Array(xs) => format!("[{}]", xs.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Object(m) if is_rational(m) => {
            let (num, den) = (inline(&m["num"]), inline(&m["den"]));
            if den == "1" {
                num
            } else {
                format!("{num}/{den}")
            }
        }
        Value::Object(m) => {
            let parts: Vec<String> = m.iter().map(|(k, x)| format!("{k}: {}", inline(x))).collect();
            format!("{{{}}}", parts.join(", "))
        }
        other => other.to_string(),
    }
}

/// Indented `key: value` lines; rationals print as `p/q`.
pub fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) if !is_rational(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(inner) if !is_rational(inner) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                    Value::Array(items) if items.iter().any(|i| matches!(i, Value::Object(o) if !is_rational(o))) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for item in items {
                            out.push_str(&format!("{pad}  - {}\n", inline(item)));
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", inline(x))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other))),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let name = command_name(&cli.command);
    match dispatch(&cli.command) {
        Ok(result) => {
            if cli.json {
                let envelope = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": name,
                    "defaults": defaults(),
                    "result": result,
                });
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&envelope).expect("json"));
            } else {
                let mut text = format!("{name}\n");
                render_text(&result, 1, &mut text);
                text.push_str("defaults:\n");
                render_text(&defaults(), 1, &mut text);
                let _ = write!(out, "{text}");
            }
            0
        }
        Err(Failure::Usage(msg)) => {
            let e = Cli::command().error(ErrorKind::MissingRequiredArgument, msg);
            let _ = write!(err, "{}", e.render());
            2
        }
        Err(Failure::Domain(e)) => {
            if cli.json {
                let envelope = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": name,
                    "defaults": defaults(),
                    "error": { "kind": e.kind(), "message": e.to_string() },
                });
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&envelope).expect("json"));
            }
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("ihs").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn call_json(args: &[&str]) -> (i32, Value) {
        let mut full = vec!["--json"];
        full.extend_from_slice(args);
        let (code, out, _) = call(&full);
        (code, serde_json::from_str(&out).unwrap())
    }

    #[test]
    fn lattice_info_k3n2() {
        let (code, v) = call_json(&["lattice", "info", "--name", "K3n(2)"]);
        assert_eq!(code, 0);
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["command"], "lattice info");
        assert_eq!(v["result"]["signature"]["positive"], 3);
        assert_eq!(v["result"]["signature"]["negative"], 20);
        assert_eq!(v["result"]["discriminant_group"]["invariant_factors"], json!([2]));
        assert_eq!(v["defaults"]["a_bound"], 10000);
    }

    #[test]
    fn text_mode() {
        let (code, out, _) = call(&["curves", "class", "--g", "4", "--r", "5", "--eps", "0", "--n", "5"]);
        assert_eq!(code, 0);
        assert!(out.contains("tau_coefficient: 8"));
        assert!(out.contains("square: 8\n"));
        assert!(out.contains("g_max: 40"));
        let (_, out, _) = call(&["curves", "class", "--g", "16", "--r", "0", "--eps", "0", "--n", "2"]);
        assert!(out.contains("square: -5/2"));
    }

    #[test]
    fn exit_codes() {
        let (code, _, err) = call(&["cubic", "frobnicate"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
        let (code, _, _) = call(&["lattice", "info"]);
        assert_eq!(code, 2);
        let (code, v) = call_json(&["cubic", "density", "--d", "10", "--e0", "1"]);
        assert_eq!(code, 1);
        assert_eq!(v["error"]["kind"], "inadmissible_discriminant");
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("Usage"));
    }

    #[test]
    fn sufficient_and_negative_args() {
        let (_, v) = call_json(&["cubic", "sufficient", "--d", "14"]);
        assert_eq!(v["result"]["m"], 2);
        let (code, v) = call_json(&["lattice", "enumerate", "--name", "U+rank1(-2)", "--bound", "1", "--min-square", "-2", "--max-square", "-2"]);
        assert_eq!(code, 0);
        // z = ±1 with xy = 0 (10), z = 0 with xy = -1 (2)
        assert_eq!(v["result"]["count"], 12);
    }
}
