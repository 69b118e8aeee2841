//! `k3cert`: certify curve-existence conditions on a K3 surface from its
//! Picard lattice.
//!
//! Exit codes: 0 when a verdict or witness is produced, 2 when the answer is
//! inconclusive or no witness exists, 1 on any input or validation error.

mod document;
mod report;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use k3cert_core::classifier::{classify_with, Certificate};
use k3cert_core::conditions::{a1_witness, check_a2, check_a3, check_rank4, regeneration_degree_bound};
use k3cert_core::positivity::{is_big_nef, minimal_nef_decompose, RootSet};
use k3cert_core::qform::{isotropic_exists, IsotropyStatus, SearchConfig, DEFAULT_SEARCH_CAP};
use k3cert_core::{extended_corpus, Condition, ConditionWitness, Int};
use serde_json::json;

use document::{load, parse_class};

/// Environment variable overriding the witness-search coordinate cap.
const SEARCH_CAP_VAR: &str = "K3CERT_SEARCH_CAP";

#[derive(Debug, Parser)]
#[command(name = "k3cert", version, about = "Certify curve-existence conditions on K3 Picard lattices")]
struct Cli {
    /// Emit a machine-readable JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide which existence result covers the lattice and emit a certificate.
    Classify {
        /// Lattice document (TOML) or corpus name.
        #[arg(long)]
        lattice: String,
        /// Queried class as comma-separated coordinates; defaults to the ample class.
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
        /// Characteristic of the ground field.
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
    },
    /// Check one condition on a class, or re-verify a certificate.
    Check {
        #[arg(long, required_unless_present = "certificate")]
        condition: Option<Condition>,
        #[arg(long, required_unless_present = "certificate")]
        lattice: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
        /// Verify this witness (JSON) instead of searching for one.
        #[arg(long, requires = "condition")]
        witness: Option<PathBuf>,
        /// Re-verify a certificate (JSON) emitted by `classify --json`.
        #[arg(long, conflicts_with_all = ["condition", "lattice", "class", "witness"])]
        certificate: Option<PathBuf>,
    },
    /// Minimal nef decomposition of an effective class.
    Decompose {
        #[arg(long)]
        lattice: String,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Decide whether the lattice contains a nonzero class of square zero.
    Isotropic {
        #[arg(long)]
        lattice: String,
    },
    /// List the (−2)-classes of positive degree up to a bound.
    Roots {
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        max_degree: u64,
    },
    /// Regeneration degree bound from H² = a, H·C = b, C² = c.
    Bound {
        #[arg(long, allow_negative_numbers = true)]
        a: String,
        #[arg(long, allow_negative_numbers = true)]
        b: String,
        #[arg(long, allow_negative_numbers = true)]
        c: String,
    },
    /// List the bundled lattices.
    Corpus,
}

#[derive(Debug)]
pub struct CliError(pub String);

impl CliError {
    pub fn new(msg: impl Into<String>) -> Self {
        CliError(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<k3cert_core::Error> for CliError {
    fn from(e: k3cert_core::Error) -> Self {
        CliError(e.to_string())
    }
}

/// A finished command: both renderings and the exit code.
pub struct Outcome {
    pub text: String,
    pub json: serde_json::Value,
    pub code: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion);
            let _ = e.print();
            return ExitCode::from(if informational { 0 } else { 1 });
        }
    };
    match run(cli.command) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("reports serialize"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn search_config() -> Result<SearchConfig, CliError> {
    match std::env::var(SEARCH_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|&c| c > 0)
            .map(SearchConfig::with_cap)
            .ok_or_else(|| CliError::new(format!("{SEARCH_CAP_VAR}={v:?} is not a positive integer"))),
        Err(_) => Ok(SearchConfig::with_cap(DEFAULT_SEARCH_CAP)),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// Integers as JSON numbers when they fit, decimal strings otherwise.
fn int_json(v: &Int) -> serde_json::Value {
    use num_traits::ToPrimitive;
    v.to_i64().map_or_else(|| json!(v.to_string()), |small| json!(small))
}

fn parse_int(flag: &str, text: &str) -> Result<Int, CliError> {
    text.trim().parse().map_err(|_| CliError::new(format!("--{flag}: {text:?} is not an integer")))
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Classify { lattice, class, characteristic } => {
            let loaded = load(&lattice)?;
            let queried = class.map(|c| parse_class(&c, loaded.lattice.rank())).transpose()?;
            let cert = classify_with(
                &loaded.lattice,
                &loaded.ample,
                queried.as_ref(),
                characteristic,
                Some(&loaded.roots),
                &search_config()?,
            )?;
            let code = if cert.verdict.is_conclusive() { 0 } else { 2 };
            Ok(Outcome { text: report::certificate(&cert), json: to_json(&cert), code })
        }
        Command::Check { certificate: Some(path), .. } => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::new(format!("cannot read {}: {e}", path.display())))?;
            let cert: Certificate = serde_json::from_str(&text)
                .map_err(|e| CliError::new(format!("{}: parse error: {e}", path.display())))?;
            cert.verify().map_err(|e| CliError::new(format!("certificate rejected: {e}")))?;
            Ok(Outcome {
                text: format!("certificate verified: {}\n", cert.verdict.label()),
                json: json!({ "verified": true, "verdict": cert.verdict.label() }),
                code: 0,
            })
        }
        Command::Check { condition, lattice, class, witness, .. } => {
            let condition = condition.expect("required by clap");
            let loaded = load(&lattice.expect("required by clap"))?;
            let l = &loaded.lattice;
            let target = match (&class, condition) {
                (Some(c), _) => parse_class(c, l.rank())?,
                (None, Condition::A1) => k3cert_core::DivisorClass::zero(l.rank()),
                (None, _) => return Err(CliError::new(format!("--class is required for {condition}"))),
            };
            if let Some(path) = witness {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::new(format!("cannot read {}: {e}", path.display())))?;
                let w: ConditionWitness = serde_json::from_str(&text)
                    .map_err(|e| CliError::new(format!("{}: parse error: {e}", path.display())))?;
                if w.condition != condition {
                    return Err(CliError::new(format!("witness is for {}, not {condition}", w.condition)));
                }
                w.verify(l, &target).map_err(|e| CliError::new(format!("witness rejected: {e}")))?;
                return Ok(Outcome {
                    text: format!("{condition} witness verified for {target}\n"),
                    json: json!({ "condition": condition, "class": target, "verified": true }),
                    code: 0,
                });
            }
            let found = match condition {
                Condition::A1 => a1_witness(l)?,
                Condition::A2 => check_a2(l, &target, &loaded.roots)?,
                Condition::A3 => check_a3(l, &target, &loaded.roots)?,
                Condition::Rank4 => check_rank4(l, &target, &loaded.ample)?,
            };
            let big_nef = (condition != Condition::A1).then(|| is_big_nef(l, &target, &loaded.roots)).transpose()?;
            let code = if found.is_some() { 0 } else { 2 };
            Ok(Outcome {
                text: report::condition(l, condition, &target, found.as_ref(), big_nef.as_ref()),
                json: json!({
                    "lattice": l.name(),
                    "condition": condition,
                    "class": target,
                    "holds": found.is_some(),
                    "big_nef": big_nef,
                    "witness": found,
                }),
                code,
            })
        }
        Command::Decompose { lattice, class } => {
            let loaded = load(&lattice)?;
            let d = parse_class(&class, loaded.lattice.rank())?;
            let dec = minimal_nef_decompose(&loaded.lattice, &d, &loaded.roots)?;
            let code = if dec.is_complete() { 0 } else { 2 };
            Ok(Outcome {
                text: report::decomposition(&loaded.lattice, &d, &dec),
                json: json!({ "lattice": loaded.lattice.name(), "class": d, "decomposition": dec }),
                code,
            })
        }
        Command::Isotropic { lattice } => {
            let loaded = load(&lattice)?;
            let verdict = isotropic_exists(&loaded.lattice, &search_config()?)?;
            let code = match &verdict.status {
                IsotropyStatus::Isotropic { witness: Some(_) } | IsotropyStatus::Anisotropic { .. } => 0,
                _ => 2,
            };
            Ok(Outcome {
                text: report::isotropy(&loaded.lattice, &verdict),
                json: json!({ "lattice": loaded.lattice.name(), "verdict": verdict }),
                code,
            })
        }
        Command::Roots { lattice, max_degree } => {
            let loaded = load(&lattice)?;
            let l = &loaded.lattice;
            let bound = Int::from(max_degree);
            let set = RootSet::enumerate(l, &loaded.ample, &bound)?;
            let irreducible = set.irreducible_to_degree(l, &bound)?.unwrap_or_default();
            let rows = set
                .roots
                .iter()
                .map(|r| Ok((r.clone(), set.degree_of(l, r)?, irreducible.contains(r))))
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(Outcome {
                text: report::roots(l, &loaded.ample, &bound, &rows),
                json: json!({
                    "lattice": l.name(),
                    "ample": loaded.ample,
                    "max_degree": max_degree,
                    "roots": rows.iter().map(|(r, d, irr)| json!({
                        "class": r,
                        "degree": int_json(d),
                        "irreducible": irr,
                    })).collect::<Vec<_>>(),
                }),
                code: 0,
            })
        }
        Command::Bound { a, b, c } => {
            let (a, b, c) = (parse_int("a", &a)?, parse_int("b", &b)?, parse_int("c", &c)?);
            let n = regeneration_degree_bound(&a, &b, &c)?;
            Ok(Outcome {
                text: format!("{n}\n"),
                json: json!({ "a": int_json(&a), "b": int_json(&b), "c": int_json(&c), "n": int_json(&n) }),
                code: 0,
            })
        }
        Command::Corpus => {
            let entries = extended_corpus();
            Ok(Outcome {
                text: report::corpus(&entries),
                json: serde_json::Value::Array(
                    entries
                        .iter()
                        .map(|e| {
                            json!({
                                "name": e.name(),
                                "description": e.description,
                                "rank": e.lattice.rank(),
                                "signature": e.lattice.signature(),
                                "discriminant": int_json(e.lattice.discriminant()),
                                "gram": e.lattice.gram().iter().map(|r| r.iter().map(int_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
                                "ample": e.ample,
                                "roots": e.roots,
                            })
                        })
                        .collect(),
                ),
                code: 0,
            })
        }
    }
}
