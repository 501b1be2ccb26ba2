//! The `plumbroot` command line.
//!
//! Exit status is 0 on success, 1 when the input is rejected by the library
//! (reported as a JSON object `{"error": kind, "message": text}` on stderr)
//! and 2 on a usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::admissible::{Expansion, FHat, FHatPm, Family, SeedFamily};
use crate::error::{Error, Result};
use crate::fuzz::{check_case, random_moves, random_spinc, FuzzCase};
use crate::oracle::zhat_oracle;
use crate::plumbing::Plumbing;
use crate::rational::{parse_q, Q};
use crate::root::{build_root, normalize_root, GradingMode, LatticeContext, Top};
use crate::series::{conjugation_check, specialize_t1, two_var_series};
use crate::spinc::{self, SpincGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Negative definiteness, determinant and number of spin^c classes.
    Check,
    /// One representative per spin^c class.
    Spinc,
    /// The weighted graded root.
    Root,
    /// The one-variable series at `t = 1`.
    Zhat,
    /// The two-variable series.
    Zz,
    /// The one-variable series from its integral formula.
    Oracle,
    /// Random Neumann-move chains; counts chains on which anything changed.
    Verify,
    /// Compares the series of `k` and `-k` with `t` inverted.
    Conjcheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpincChoice {
    /// The unique class of an integer homology sphere.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    FHat,
    FHatPlus,
    FHatMinus,
    Seeds(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KVector(pub Vec<i64>);

fn parse_k(s: &str) -> std::result::Result<KVector, String> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| format!("not an integer: {t:?}")))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(KVector)
}

fn parse_family(s: &str) -> std::result::Result<FamilySpec, String> {
    match s {
        "fhat" => Ok(FamilySpec::FHat),
        "fhat+" => Ok(FamilySpec::FHatPlus),
        "fhat-" => Ok(FamilySpec::FHatMinus),
        _ => match s.strip_prefix("seeds:") {
            Some(path) if !path.is_empty() => Ok(FamilySpec::Seeds(PathBuf::from(path))),
            _ => Err("expected fhat, fhat+, fhat- or seeds:<file>".into()),
        },
    }
}

fn parse_order(s: &str) -> std::result::Result<Q, String> {
    let q = parse_q(s).map_err(|e| e.to_string())?;
    if q < Q::from_integer(0) {
        return Err("order must be nonnegative".into());
    }
    Ok(q)
}

fn parse_top(s: &str) -> std::result::Result<Top, String> {
    if s == "auto" {
        return Ok(Top::Auto);
    }
    s.parse::<i64>()
        .map(Top::Level)
        .map_err(|_| "expected an integer or auto".into())
}

#[derive(Debug, Parser)]
#[command(name = "plumbroot", version, about = "Weighted graded roots of negative definite plumbings")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Plumbing file: {"weights": [..], "edges": [[i, j], ..]}.
    pub file: PathBuf,
    /// Characteristic vector, comma separated.
    #[arg(long, value_parser = parse_k, allow_hyphen_values = true, conflicts_with = "spinc")]
    pub k: Option<KVector>,
    #[arg(long, value_enum)]
    pub spinc: Option<SpincChoice>,
    /// fhat, fhat+, fhat- or seeds:<file>.
    #[arg(long, value_parser = parse_family, default_value = "fhat")]
    pub family: FamilySpec,
    /// Series are complete through `q^{Delta + order}`.
    #[arg(long, value_parser = parse_order, default_value = "10")]
    pub order: Q,
    /// Root truncation: a `chi` level, or auto.
    #[arg(long, value_parser = parse_top, default_value = "auto", allow_hyphen_values = true)]
    pub top: Top,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Longest move sequence per trial.
    #[arg(long, default_value_t = 5)]
    pub moves: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

fn load_family(spec: &FamilySpec) -> Result<Family> {
    Ok(match spec {
        FamilySpec::FHat => Arc::new(FHat),
        FamilySpec::FHatPlus => Arc::new(FHatPm(Expansion::Plus)),
        FamilySpec::FHatMinus => Arc::new(FHatPm(Expansion::Minus)),
        FamilySpec::Seeds(path) => Arc::new(SeedFamily::from_json(&read(path)?)?),
    })
}

/// The explicit `--k`, or the unique class when `|det M| = 1`.
fn select_k(p: &Plumbing, k: Option<&KVector>) -> Result<Vec<i64>> {
    if let Some(KVector(k)) = k {
        if k.len() != p.len() {
            return Err(Error::MalformedInput(format!(
                "--k has {} entries, the plumbing has {} vertices",
                k.len(),
                p.len()
            )));
        }
        spinc::check_characteristic(p, k)?;
        return Ok(k.clone());
    }
    let g = SpincGroup::new(p)?;
    if g.order() != 1 {
        return Err(Error::AmbiguousSpinc(g.order()));
    }
    Ok(g.nth(0))
}

fn line(v: &Value) -> String {
    format!("{}\n", serde_json::to_string(v).expect("json values serialise"))
}

fn execute(args: &Args) -> Result<String> {
    let family = load_family(&args.family)?;
    let p = Plumbing::from_json(&read(&args.file)?)?;
    match args.command {
        Command::Check => {
            let m = p.intersection_matrix();
            let nd = m.is_negative_definite();
            let count = if nd { json!(m.det().unsigned_abs()) } else { Value::Null };
            Ok(line(&json!({"negative_definite": nd, "det": m.det(), "spinc_count": count})))
        }
        Command::Spinc => {
            let g = SpincGroup::new(&p)?;
            let mut out = String::new();
            let mut flags = Vec::new();
            for k in g.iter() {
                flags.push(spinc::is_self_conjugate(&p, &k)?);
                out.push_str(&line(&json!(k)));
            }
            out.push_str(&line(&json!({"det_abs": g.order(), "self_conjugate": flags})));
            Ok(out)
        }
        Command::Root => {
            let k = select_k(&p, args.k.as_ref())?;
            let ctx = LatticeContext::new(&p, &k)?;
            let root = normalize_root(&build_root(&ctx, family.as_ref(), args.top)?, GradingMode::HfGrading);
            Ok(match args.format {
                Format::Json => line(&root.to_json()),
                Format::Dot => root.to_dot(),
                Format::Text => root.to_text(),
            })
        }
        Command::Zhat | Command::Zz => {
            let k = select_k(&p, args.k.as_ref())?;
            let ctx = LatticeContext::new(&p, &k)?;
            let s = two_var_series(&ctx, family.as_ref(), args.order)?;
            Ok(match (args.command, args.format) {
                (Command::Zz, Format::Text) => format!("{s}\n"),
                (Command::Zz, _) => line(&s.to_json()),
                (_, Format::Text) => format!("{}\n", specialize_t1(&s)),
                _ => line(&specialize_t1(&s).to_json()),
            })
        }
        Command::Oracle => {
            let k = select_k(&p, args.k.as_ref())?;
            let z = zhat_oracle(&p, &spinc::k_to_a(&p, &k)?, args.order)?;
            Ok(match args.format {
                Format::Text => format!("{z}\n"),
                _ => line(&z.to_json()),
            })
        }
        Command::Verify => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let fixed = match &args.k {
                Some(_) => Some(select_k(&p, args.k.as_ref())?),
                None => None,
            };
            let mut failures = 0usize;
            for _ in 0..args.trials {
                let k = match &fixed {
                    Some(k) => k.clone(),
                    None => random_spinc(&mut rng, &p)?,
                };
                let len = if args.moves == 0 { 0 } else { rng.gen_range(1..=args.moves) };
                let moves = random_moves(&mut rng, &p, len)?;
                let case = FuzzCase { plumbing: p.clone(), k, moves };
                if !check_case(&case, family.as_ref(), args.order)?.passed() {
                    failures += 1;
                }
            }
            Ok(line(&json!({"failures": failures})))
        }
        Command::Conjcheck => {
            let k = select_k(&p, args.k.as_ref())?;
            let ok = conjugation_check(&p, &k, family.as_ref(), args.order)?;
            Ok(line(&json!({"conjugation_symmetric": ok})))
        }
    }
}

/// Runs one command and returns the process exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(&args) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = out.flush();
            let _ = write!(err, "{}", line(&json!({"error": e.kind(), "message": e.to_string()})));
            1
        }
    }
}
