//! Command-line front end: every pipeline behind a subcommand, reporting
//! as versioned JSON on stdout.
//!
//! Exit codes: 0 when the check passes, 1 when it fails, 2 on usage,
//! input or resource errors.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};
use tarskikit::absorption::{find_avoiding_rotation, standard_origin_absorber, build_absorber, CirclePoint};
use tarskikit::actions::{choose_representatives, FiniteAction};
use tarskikit::doubling::{export_cloud, orbit_double, strong_form_plan, CloudFormat};
use tarskikit::equideco::bsb_combine;
use tarskikit::equideco::finite::random_bsb_instance;
use tarskikit::freegroup::{ball_size, verify_group_doubling, DEFAULT_WORD_CAP};
use tarskikit::rotact::{certify_freeness_with, SphereTriple};
use tarskikit::{Error, VerificationReport};

pub const SCHEMA: &str = "tarskikit/1";

/// Environment variable overriding the word-count resource cap.
pub const CAP_ENV: &str = "TARSKIKIT_WORD_CAP";

#[derive(Parser, Debug)]
#[command(name = "tarskikit", version, about = "Exact certificates for paradoxical decompositions")]
struct Cli {
    /// Largest number of words any single enumeration may touch.
    #[arg(long, global = true, env = CAP_ENV)]
    word_cap: Option<u128>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that no nonempty reduced word of length ≤ depth acts trivially.
    CertifyFreeness {
        #[arg(long)]
        depth: u32,
    },
    /// Verify the two doubling certificates of the free group.
    DoubleGroup {
        #[arg(long)]
        depth: u32,
    },
    /// Double the orbit of a base point and optionally export it.
    DoubleOrbit {
        #[arg(long)]
        depth: u32,
        /// Base point as `a,b,c,k` for `[a, b√2, c]/3^k`.
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// csv, json or ply; without --out the export goes to stdout.
        #[arg(long)]
        format: Option<String>,
    },
    /// Combine a random pair of finite piecewise injections.
    BsbDemo {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_pieces: usize,
    },
    /// Find a rotation absorbing rational circle points.
    AbsorbCircle {
        /// JSON array of `["x", "y"]` rational pairs.
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        horizon: u32,
        /// Powers checked for avoidance; defaults to the horizon.
        #[arg(long)]
        avoid: Option<u64>,
        #[arg(long, default_value_t = 16)]
        pool: usize,
    },
    /// Build the isometry absorbing the centre of the ball.
    AbsorbBall {
        #[arg(long)]
        horizon: u32,
    },
    /// Piece-count plan between two bounded bodies with nonempty interior.
    PlanStrongForm {
        #[arg(long = "rq")]
        r_q: String,
        #[arg(long = "RQ")]
        big_q: String,
        #[arg(long = "rt")]
        r_t: String,
        #[arg(long = "RT")]
        big_t: String,
        /// Write the full derivation here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Orbits, freeness and translate partition of a finite action.
    AnalyzeAction {
        /// JSON action document.
        #[arg(long)]
        file: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CertifyFreeness { .. } => "certify-freeness",
            Command::DoubleGroup { .. } => "double-group",
            Command::DoubleOrbit { .. } => "double-orbit",
            Command::BsbDemo { .. } => "bsb-demo",
            Command::AbsorbCircle { .. } => "absorb-circle",
            Command::AbsorbBall { .. } => "absorb-ball",
            Command::PlanStrongForm { .. } => "plan-strong-form",
            Command::AnalyzeAction { .. } => "analyze-action",
        }
    }
}

/// What a run prints and returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Caps on horizons that are not bounded by the word cap.
pub const MAX_HORIZON: u32 = 100_000;
pub const MAX_BSB_SIZE: usize = 4096;

enum Output {
    Report { pass: bool, params: Value, result: Value },
    Raw(String),
}

fn document(command: &str, status: &str, body: Vec<(&str, Value)>) -> String {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    m.insert("status".into(), json!(status));
    for (k, v) in body {
        m.insert(k.into(), v);
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("report serializes");
    s.push('\n');
    s
}

fn error_outcome(command: &str, e: &Error) -> Outcome {
    let code = if e.is_verification_failure() { 1 } else { 2 };
    let mut err = json!({ "kind": e.kind(), "message": e.to_string() });
    if let Error::Verification(r) = e {
        err["report"] = serde_json::to_value(r).expect("report serializes");
    }
    let status = if code == 1 { "fail" } else { "error" };
    Outcome { code, stdout: document(command, status, vec![("error", err)]), stderr: format!("{e}\n") }
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if !e.use_stderr() {
                return Outcome { code: 0, stdout: text, stderr: String::new() };
            }
            let diag = json!({ "kind": "usage", "message": e.kind().to_string() });
            return Outcome { code: 2, stdout: document("usage", "error", vec![("error", diag)]), stderr: text };
        }
    };
    let name = cli.command.name();
    let cap = cli.word_cap.unwrap_or(DEFAULT_WORD_CAP);
    match execute(cli.command, cap) {
        Ok(Output::Raw(s)) => Outcome { code: 0, stdout: s, stderr: String::new() },
        Ok(Output::Report { pass, params, result }) => Outcome {
            code: if pass { 0 } else { 1 },
            stdout: document(name, if pass { "pass" } else { "fail" }, vec![("params", params), ("result", result)]),
            stderr: String::new(),
        },
        Err(e) => error_outcome(name, &e),
    }
}

fn cap_check(what: &str, depth: u32, cap: u128) -> Result<(), Error> {
    let requested = ball_size(depth);
    if requested > cap {
        return Err(Error::Resource { what: what.into(), requested, cap });
    }
    Ok(())
}

fn rational(name: &str, s: &str) -> Result<BigRational, Error> {
    s.trim().parse::<BigRational>().map_err(|e| Error::Parse(format!("--{name} {s:?}: {e}")))
}

fn report_value(r: &VerificationReport) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

fn read(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write(path: &PathBuf, contents: &str) -> Result<(), Error> {
    fs::write(path, contents).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn execute(cmd: Command, cap: u128) -> Result<Output, Error> {
    match cmd {
        Command::CertifyFreeness { depth } => {
            let r = certify_freeness_with(depth, cap, &[])?;
            Ok(Output::Report {
                pass: r.pass,
                params: json!({ "depth": depth }),
                result: serde_json::to_value(&r).expect("report serializes"),
            })
        }
        Command::DoubleGroup { depth } => {
            cap_check("group ball", depth, cap)?;
            let r = verify_group_doubling(depth);
            Ok(Output::Report { pass: r.pass, params: json!({ "depth": depth }), result: report_value(&r) })
        }
        Command::DoubleOrbit { depth, base, out, format } => {
            let base = match base {
                Some(s) => SphereTriple::parse(&s)?,
                None => SphereTriple::default_base(),
            };
            if !base.on_sphere() {
                return Err(Error::Precondition(format!("base {base} is not on the unit sphere")));
            }
            cap_check("stabilizer ball", depth.saturating_mul(2), cap)?;
            let format = format.as_deref().map(str::parse::<CloudFormat>).transpose()?;
            let d = orbit_double(&base, depth)?;
            let params = json!({ "depth": depth, "base": base });
            match (out, format) {
                (None, Some(f)) => Ok(Output::Raw(export_cloud(&d.cloud, f))),
                (Some(path), f) => {
                    let f = f.unwrap_or(CloudFormat::Json);
                    write(&path, &export_cloud(&d.cloud, f))?;
                    let mut result = report_value(&d.report);
                    result["export"] = json!({ "path": path.display().to_string(), "points": d.cloud.len() });
                    Ok(Output::Report { pass: d.report.pass, params, result })
                }
                (None, None) => Ok(Output::Report { pass: d.report.pass, params, result: report_value(&d.report) }),
            }
        }
        Command::BsbDemo { size, seed, max_pieces } => {
            if size > MAX_BSB_SIZE {
                return Err(Error::Resource { what: "bsb instance".into(), requested: size as u128, cap: MAX_BSB_SIZE as u128 });
            }
            let inst = random_bsb_instance(size, max_pieces, seed);
            let out = bsb_combine(&inst.g, &inst.f, 0)?;
            let r = out.cert.verify(0);
            let map = out.cert.induced_map(0)?;
            let bound = inst.g.piece_count() + inst.f.piece_count();
            let pass = r.pass && out.cert.piece_count() <= bound;
            Ok(Output::Report {
                pass,
                params: json!({ "size": size, "seed": seed, "max_pieces": max_pieces }),
                result: json!({
                    "a": inst.a,
                    "b": inst.b,
                    "g_pieces": inst.g.piece_count(),
                    "f_pieces": inst.f.piece_count(),
                    "pieces": out.cert.piece_count(),
                    "fixed_point": out.fixed_point,
                    "iterations": out.iterations,
                    "map": map.into_iter().collect::<Vec<_>>(),
                    "verification": report_value(&r),
                }),
            })
        }
        Command::AbsorbCircle { points, horizon, avoid, pool } => {
            if horizon > MAX_HORIZON {
                return Err(Error::Resource { what: "horizon".into(), requested: horizon as u128, cap: MAX_HORIZON as u128 });
            }
            let pts: Vec<CirclePoint> =
                serde_json::from_str(&read(&points)?).map_err(|e| Error::Parse(format!("{}: {e}", points.display())))?;
            let avoid = avoid.unwrap_or(horizon as u64);
            let (tau, rejected) = find_avoiding_rotation(&pts, avoid, pool)?;
            let set: BTreeSet<CirclePoint> = pts.iter().cloned().collect();
            let q = build_absorber(&set, tau.clone(), horizon)?;
            let r = q.shift_identity();
            Ok(Output::Report {
                pass: r.pass,
                params: json!({ "points": pts.len(), "horizon": horizon, "avoid": avoid, "pool": pool }),
                result: json!({
                    "rotation": { "cos": tau.cos().to_string(), "sin": tau.sin().to_string() },
                    "rejected": rejected,
                    "absorber_size": q.len(),
                    "shift_identity": report_value(&r),
                }),
            })
        }
        Command::AbsorbBall { horizon } => {
            if horizon > MAX_HORIZON {
                return Err(Error::Resource { what: "horizon".into(), requested: horizon as u128, cap: MAX_HORIZON as u128 });
            }
            let o = standard_origin_absorber(horizon, 16)?;
            let r = o.verify();
            let c = o.ball_cert()?.verify(horizon);
            Ok(Output::Report {
                pass: r.pass && c.pass,
                params: json!({ "horizon": horizon }),
                result: json!({
                    "u": o.u,
                    "rho": o.rho,
                    "r": o.r,
                    "absorption": report_value(&r),
                    "certificate": report_value(&c),
                }),
            })
        }
        Command::PlanStrongForm { r_q, big_q, r_t, big_t, out } => {
            let plan = strong_form_plan(
                &rational("rq", &r_q)?,
                &rational("RQ", &big_q)?,
                &rational("rt", &r_t)?,
                &rational("RT", &big_t)?,
            )?;
            let r = plan.validate();
            if let Some(path) = &out {
                write(path, &plan.to_json())?;
            }
            Ok(Output::Report {
                pass: r.pass,
                params: json!({ "rq": r_q, "RQ": big_q, "rt": r_t, "RT": big_t }),
                result: json!({
                    "bound": plan.bound().to_string(),
                    "nodes": plan.nodes.len(),
                    "root": plan.root_node().claim,
                    "plan": plan.params,
                    "validation": report_value(&r),
                }),
            })
        }
        Command::AnalyzeAction { file } => {
            let act = FiniteAction::from_json(&read(&file)?)?;
            let p = act.orbits();
            let m = choose_representatives(&p);
            let t = act.translates_partition(&m);
            let names = |s: &BTreeSet<usize>| s.iter().map(|&x| act.point_name(x).to_string()).collect::<Vec<_>>();
            let free = act.is_free();
            Ok(Output::Report {
                pass: t.pass == free,
                params: json!({ "file": file.display().to_string() }),
                result: json!({
                    "order": act.order(),
                    "carrier": act.carrier_size(),
                    "orbits": p.blocks.iter().map(names).collect::<Vec<_>>(),
                    "free": free,
                    "fixed_point": act.fixed_point().map(|(g, x)| [act.element_name(g), act.point_name(x)]),
                    "representatives": names(&m.points),
                    "translates_partition": report_value(&t),
                }),
            })
        }
    }
}
