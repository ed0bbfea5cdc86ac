//! Command-line front end. Every command prints JSON (to `--out` when
//! given). Exit codes: 0 success, 1 failed verification, 2 usage error,
//! 3 violated geometric precondition, 4 search budget exceeded.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::constructs;
use crate::error::{Error, ErrorKind, Result};
use crate::gf::FieldSpec;
use crate::io::{FieldEcho, PointSetFile};
use crate::plane::{AffineFrame, Plane, PointId, PointSet};
use crate::props;
use crate::search::{self, Filter, Mode, SearchOptions, SearchQuery};
use crate::verify;

#[derive(Debug, Parser)]
#[command(
    name = "planeforge",
    version,
    about = "Blocking sets and semiovals in PG(2,q) and AG(2,q)"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct FieldArgs {
    /// Field order (a prime power).
    #[arg(long)]
    q: Option<u64>,
    /// Characteristic, together with --e.
    #[arg(long, requires = "e")]
    p: Option<u64>,
    /// Extension degree, together with --p.
    #[arg(long, requires = "p")]
    e: Option<u32>,
}

impl FieldArgs {
    fn plane(&self) -> Result<Plane> {
        let field = match (self.q, self.p, self.e) {
            (_, Some(p), Some(e)) => {
                let f = FieldSpec::new(p, e)?;
                if let Some(q) = self.q.filter(|&q| q != f.q() as u64) {
                    return Err(Error::InvalidQuery(format!(
                        "--q {q} disagrees with {p}^{e}"
                    )));
                }
                f
            }
            (Some(q), _, _) => FieldSpec::with_order(q)?,
            _ => return Err(Error::InvalidQuery("give --q or --p and --e".into())),
        };
        Plane::new(field)
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Node budget (default: PLANEFORGE_BUDGET or 2^32).
    #[arg(long)]
    budget: Option<u64>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

impl RunArgs {
    fn options(&self) -> Result<SearchOptions> {
        let mut opts = SearchOptions::from_env()?;
        if let Some(b) = self.budget {
            opts.budget = b;
        }
        opts.jobs = self.jobs;
        Ok(opts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    VertexlessTriangle,
    KConstruction,
    #[value(name = "affine-3q4")]
    Affine3q4,
    #[value(name = "affine-3q6")]
    Affine3q6,
    BaerPatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Pruned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct SizeRange(usize, usize);

fn parse_size(s: &str) -> std::result::Result<SizeRange, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok(SizeRange(num(a)?, num(b)?))
        }
        None => num(s).map(|k| SizeRange(k, k)),
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Points and lines of PG(2,q).
    Plane {
        #[command(flatten)]
        field: FieldArgs,
        /// Plain-text dump instead of JSON.
        #[arg(long)]
        text: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a named example and print it as a point-set file.
    Construct {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        field: FieldArgs,
        /// Number of added points for the k-construction.
        #[arg(long)]
        n: Option<usize>,
        /// Seeded choice of triangle and points (default: smallest ids).
        #[arg(long)]
        seed: Option<u64>,
        /// Line at infinity for the affine examples.
        #[arg(long = "r-inf")]
        r_inf: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate properties of a point-set file.
    Check {
        #[arg(long)]
        set: PathBuf,
        /// Comma list of: blocking, minimal, semioval, blocking_semioval,
        /// r_inf, pi, pi_strong, spectrum.
        #[arg(long, default_value = "blocking,minimal")]
        props: String,
        #[arg(long)]
        point: Option<PointId>,
        #[arg(long)]
        direction: Option<PointId>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map a projective set with the r-infinity property at --point to the
    /// affine plane, or an affine file back with --direction.
    Alpha {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        point: Option<PointId>,
        #[arg(long)]
        direction: Option<PointId>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate blocking sets with filters.
    Search {
        #[command(flatten)]
        field: FieldArgs,
        /// Size or range, e.g. `7` or `7..9` (inclusive).
        #[arg(long, value_parser = parse_size)]
        size: Option<SizeRange>,
        /// Comma list of extra filters: minimal, semioval, r_inf, pi,
        /// pi_strong. The blocking filter is always on.
        #[arg(long, default_value = "")]
        props: String,
        #[arg(long)]
        point: Option<PointId>,
        #[arg(long)]
        direction: Option<PointId>,
        /// Search the affine plane with this line at infinity.
        #[arg(long = "r-inf")]
        r_inf: Option<usize>,
        #[arg(long, value_enum, default_value = "pruned")]
        mode: ModeArg,
        #[arg(long)]
        limit: Option<usize>,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Labelled counts of minimal blocking sets per size.
    Spectrum {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = parse_size)]
        size: Option<SizeRange>,
        /// Plain-text table instead of JSON.
        #[arg(long)]
        table: bool,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the theorem checks for one order; exits 1 if any fails.
    VerifyPaper {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(e.kind())
        }
    }
}

pub fn exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Usage => 2,
        ErrorKind::Domain => 3,
        ErrorKind::Budget => 4,
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("output serializes")
}

fn read_set(path: &Path) -> Result<PointSetFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    PointSetFile::parse(&text)
}

fn prop_list(list: &str) -> Vec<String> {
    list.split(',')
        .map(|s| s.trim().replace('-', "_").to_lowercase())
        .filter(|s| !s.is_empty())
        .collect()
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Plane { field, text, out } => {
            let plane = field.plane()?;
            let body = if text {
                plane.dump().trim_end().to_string()
            } else {
                to_json(&plane_json(&plane))
            };
            emit(out.as_deref(), &body)?;
        }
        Command::Construct {
            kind,
            field,
            n,
            seed,
            r_inf,
            out,
        } => {
            let plane = field.plane()?;
            let file = construct(&plane, kind, n, seed, r_inf)?;
            emit(out.as_deref(), &file.to_json())?;
        }
        Command::Check {
            set,
            props,
            point,
            direction,
            out,
        } => {
            let file = read_set(&set)?;
            let (plane, set) = file.load()?;
            let report = check(
                &plane,
                &set,
                file.r_inf,
                &prop_list(&props),
                point,
                direction,
            )?;
            emit(out.as_deref(), &to_json(&report))?;
        }
        Command::Alpha {
            set,
            point,
            direction,
            out,
        } => {
            let file = read_set(&set)?;
            let (plane, set) = file.load()?;
            let result = match (file.r_inf, point, direction) {
                (None, Some(p), _) => {
                    let (frame, image) = constructs::alpha(&plane, &set, p)?;
                    PointSetFile::new(&plane, &image)
                        .with_r_inf(frame.r_inf())
                        .with_trace(json!({ "direction": p }))
                }
                (Some(r_inf), _, Some(d)) => {
                    let frame = AffineFrame::new(&plane, r_inf)?;
                    let back = constructs::alpha_inverse(&frame, &set, d)?;
                    PointSetFile::new(&plane, &back).with_trace(json!({ "point": d }))
                }
                (None, None, _) => {
                    return Err(Error::InvalidQuery("a projective set needs --point".into()))
                }
                (Some(_), _, None) => {
                    return Err(Error::InvalidQuery(
                        "an affine set needs --direction".into(),
                    ))
                }
            };
            emit(out.as_deref(), &result.to_json())?;
        }
        Command::Search {
            field,
            size,
            props,
            point,
            direction,
            r_inf,
            mode,
            limit,
            run,
            out,
        } => {
            let plane = field.plane()?;
            let query = search_query(
                &plane,
                size,
                &prop_list(&props),
                point,
                direction,
                r_inf,
                mode,
                limit,
            )?;
            let cert = search::enumerate(&plane, &query, &run.options()?)?;
            emit(out.as_deref(), &to_json(&cert))?;
        }
        Command::Spectrum {
            field,
            size,
            table,
            run,
            out,
        } => {
            let plane = field.plane()?;
            let SizeRange(lo, hi) = size.unwrap_or(SizeRange(1, plane.size()));
            let report = search::spectrum_report(&plane, lo, hi, &run.options()?)?;
            let body = if table {
                report.to_table().trim_end().to_string()
            } else {
                to_json(&report)
            };
            emit(out.as_deref(), &body)?;
        }
        Command::VerifyPaper { field, run, out } => {
            let plane = field.plane()?;
            let report = verify::verify_paper(plane.q() as u64, &run.options()?)?;
            emit(out.as_deref(), &to_json(&report))?;
            if !report.passed {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn plane_json(plane: &Plane) -> Value {
    let points: Vec<Value> = plane
        .points()
        .iter()
        .map(|p| json!({ "id": p.id, "coords": p.coords }))
        .collect();
    let lines: Vec<Value> = plane
        .lines()
        .iter()
        .map(|l| json!({ "id": l.id, "coeffs": l.coeffs, "points": l.members.iter().collect::<Vec<_>>() }))
        .collect();
    json!({
        "q": plane.q(),
        "field": FieldEcho::of(plane.field()),
        "points": points,
        "lines": lines,
    })
}

fn construct(
    plane: &Plane,
    kind: Kind,
    n: Option<usize>,
    seed: Option<u64>,
    r_inf: Option<usize>,
) -> Result<PointSetFile> {
    let r_inf = r_inf.unwrap_or_else(|| verify::default_r_inf(plane));
    Ok(match kind {
        Kind::VertexlessTriangle => {
            let (a, b, c) = constructs::triangle_sides(plane, seed);
            let (set, trace) = constructs::vertexless_triangle(plane, a, b, c)?;
            PointSetFile::new(plane, &set).with_trace(trace.labels())
        }
        Kind::KConstruction => {
            let n = n.ok_or_else(|| Error::InvalidQuery("k-construction needs --n".into()))?;
            let (set, trace) = constructs::k_construction(plane, n, seed)?;
            PointSetFile::new(plane, &set).with_trace(trace.labels())
        }
        Kind::Affine3q4 | Kind::Affine3q6 => {
            let frame = AffineFrame::new(plane, r_inf)?;
            let (set, trace) = if kind == Kind::Affine3q4 {
                constructs::affine_3q4(&frame)?
            } else {
                constructs::affine_3q6(&frame)?
            };
            PointSetFile::new(plane, &set)
                .with_r_inf(r_inf)
                .with_trace(json!({ "labels": trace.labels, "direction": trace.direction }))
        }
        Kind::BaerPatch => {
            let patch = constructs::baer_patch_q4(plane)?;
            PointSetFile::new(plane, &patch.set).with_trace(patch.labels())
        }
    })
}

#[derive(Debug, Serialize)]
struct CheckReport {
    size: usize,
    setting: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    r_inf: Option<usize>,
    results: BTreeMap<String, Value>,
}

fn check(
    plane: &Plane,
    set: &PointSet,
    r_inf: Option<usize>,
    props_list: &[String],
    point: Option<PointId>,
    direction: Option<PointId>,
) -> Result<CheckReport> {
    let frame = r_inf.map(|l| AffineFrame::new(plane, l)).transpose()?;
    if let Some(f) = &frame {
        props::is_blocking_affine(f, set)?;
    }
    let blocking = match &frame {
        Some(f) => props::is_blocking(f, set),
        None => props::is_blocking(plane, set),
    };
    let projective_only = |name: &str| -> Result<()> {
        if frame.is_some() {
            return Err(Error::InvalidQuery(format!(
                "{name} is a projective property"
            )));
        }
        Ok(())
    };
    let mut results = BTreeMap::new();
    for name in props_list {
        let value: Value = match name.as_str() {
            "blocking" => blocking.into(),
            "minimal" => {
                let minimal = blocking
                    && match &frame {
                        Some(f) => props::is_minimal(f, set)?,
                        None => props::is_minimal(plane, set)?,
                    };
                minimal.into()
            }
            "semioval" => {
                projective_only(name)?;
                props::is_semioval(plane, set).into()
            }
            "blocking_semioval" => {
                projective_only(name)?;
                props::is_blocking_semioval(plane, set).into()
            }
            "r_inf" => {
                projective_only(name)?;
                if !blocking {
                    Value::Bool(false)
                } else if let Some(p) = point {
                    plane.point(p)?;
                    let tangent = if set.contains(p) {
                        props::has_r_infinity_property(plane, set, p)?
                    } else {
                        None
                    };
                    results.insert("r_inf_tangent".into(), json!(tangent));
                    tangent.is_some().into()
                } else {
                    let pts = props::r_infinity_points(plane, set)?;
                    results.insert("r_inf_points".into(), json!(pts));
                    (!pts.is_empty()).into()
                }
            }
            "pi" | "pi_strong" => {
                let f = frame.as_ref().ok_or_else(|| {
                    Error::InvalidQuery(format!("{name} needs an affine set file (r_inf)"))
                })?;
                let d = direction
                    .ok_or_else(|| Error::InvalidQuery(format!("{name} needs --direction")))?;
                f.parallel_class(d)?;
                let ok = blocking
                    && if name == "pi" {
                        props::has_pi_property(f, set, d)?
                    } else {
                        props::has_pi_strong_property(f, set, d)?
                    };
                ok.into()
            }
            "spectrum" => match &frame {
                Some(f) => serde_json::to_value(props::tangent_report(f, set)),
                None => serde_json::to_value(props::tangent_report(plane, set)),
            }
            .expect("tangent reports serialize"),
            other => return Err(Error::InvalidQuery(format!("unknown property {other:?}"))),
        };
        results.insert(name.clone(), value);
    }
    Ok(CheckReport {
        size: set.size(),
        setting: if frame.is_some() {
            "affine"
        } else {
            "projective"
        },
        r_inf,
        results,
    })
}

#[allow(clippy::too_many_arguments)]
fn search_query(
    plane: &Plane,
    size: Option<SizeRange>,
    props_list: &[String],
    point: Option<PointId>,
    direction: Option<PointId>,
    r_inf: Option<usize>,
    mode: ModeArg,
    limit: Option<usize>,
) -> Result<SearchQuery> {
    let mut filters = vec![Filter::Blocking];
    let mut affine = r_inf.is_some();
    for name in props_list {
        filters.push(match name.as_str() {
            "blocking" => continue,
            "minimal" => Filter::Minimal,
            "semioval" => Filter::Semioval,
            "r_inf" => match point {
                Some(p) => Filter::RInfAtPoint(p),
                None => Filter::RInfAtSomePoint,
            },
            "pi" | "pi_strong" => {
                affine = true;
                let d = direction
                    .ok_or_else(|| Error::InvalidQuery(format!("{name} needs --direction")))?;
                if name == "pi" {
                    Filter::PiProperty(d)
                } else {
                    Filter::PiStrong(d)
                }
            }
            other => return Err(Error::InvalidQuery(format!("unknown filter {other:?}"))),
        });
    }
    let r_inf = r_inf.unwrap_or_else(|| verify::default_r_inf(plane));
    let SizeRange(lo, hi) = size.unwrap_or(SizeRange(1, plane.size()));
    let mut query = if affine {
        SearchQuery::affine(r_inf, lo, hi, &filters)
    } else {
        SearchQuery::projective(lo, hi, &filters)
    };
    query.mode = match mode {
        ModeArg::Exhaustive => Mode::Exhaustive,
        ModeArg::Pruned => Mode::Pruned,
    };
    query.limit = limit;
    Ok(query)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_ranges() {
        assert_eq!(parse_size("7"), Ok(SizeRange(7, 7)));
        assert_eq!(parse_size("7..9"), Ok(SizeRange(7, 9)));
        assert_eq!(parse_size("7..=9"), Ok(SizeRange(7, 9)));
        assert!(parse_size("a..9").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["planeforge", "plane"]), 2);
        assert_eq!(run(["planeforge", "plane", "--q", "6"]), 2);
        assert_eq!(run(["planeforge", "bogus"]), 2);
        assert_eq!(
            run(["planeforge", "construct", "k-construction", "--q", "5"]),
            2
        );
    }

    #[test]
    fn domain_and_budget_exit_codes() {
        assert_eq!(
            run([
                "planeforge",
                "construct",
                "k-construction",
                "--q",
                "5",
                "--n",
                "4"
            ]),
            3
        );
        assert_eq!(
            run(["planeforge", "construct", "baer-patch", "--q", "5"]),
            3
        );
        assert_eq!(
            run([
                "planeforge",
                "search",
                "--q",
                "7",
                "--mode",
                "exhaustive",
                "--budget",
                "1000"
            ]),
            4
        );
    }
}
