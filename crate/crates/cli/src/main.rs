use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use sl2cert::decomp::decompose_tensor;
use sl2cert::invariants::{
    fundamental_invariants, generation_check_with, invariant_dimension, syzygy_check_with,
    transvectant,
};
use sl2cert::reps::fixed_space;
use sl2cert::verify::{verify_all, Config, DEFAULT_ORACLE_SAMPLES, DEFAULT_SEED};
use sl2cert::{build_group, BinaryForm, GroupLabel, PrimeField, DEFAULT_PRIME};

#[derive(Parser)]
#[command(
    name = "sl2cert",
    version,
    about = "Exact checks for binary polyhedral invariants over F_p"
)]
struct Cli {
    /// Characteristic of the base field.
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    prime: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order, generators and trace multiset of T, S or I.
    Group { label: GroupLabel },
    /// Dimension and RREF basis of W_m^G.
    Fixspace { label: GroupLabel, m: usize },
    /// Clebsch-Gordan splitting of W_m ⊗ W_n.
    Decompose {
        m: usize,
        n: usize,
        /// Write every projection matrix to this file as JSON.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Fundamental invariants, dimension table, syzygy and generation verdicts.
    Invariants {
        label: GroupLabel,
        #[arg(long, default_value_t = 40)]
        dmax: usize,
    },
    /// The transvectant (f, g)^r of two forms given as comma-separated coefficients.
    Transvect {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        r: usize,
    },
    /// Run every check; exit status 0 iff all pass.
    VerifyAll {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Run only the check with this id (or id prefix).
        #[arg(long)]
        only: Option<String>,
        /// Also write the report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn parse_coeffs(field: PrimeField, s: &str) -> Result<BinaryForm> {
    let coeffs = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .with_context(|| format!("bad coefficient {t:?}"))
        })
        .collect::<Result<Vec<_>>>()?;
    if coeffs.is_empty() {
        bail!("empty coefficient list");
    }
    Ok(BinaryForm::from_signed(field, &coeffs))
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print(v: &Value) {
    emit(&format!(
        "{}\n",
        serde_json::to_string_pretty(v).expect("json")
    ));
}

fn run(cli: Cli) -> Result<ExitCode> {
    let field = PrimeField::new(cli.prime)?;
    match cli.command {
        Command::Group { label } => {
            let g = build_group(field, label)?;
            let traces: serde_json::Map<String, Value> = g
                .trace_multiset()
                .into_iter()
                .map(|(t, c)| (t.to_string(), json!(c)))
                .collect();
            print(&json!({
                "group": label,
                "prime": field.modulus(),
                "order": g.order(),
                "generators": g.generators().iter().map(|e| e.to_json_value()).collect::<Vec<_>>(),
                "traces": traces,
            }));
        }
        Command::Fixspace { label, m } => {
            let g = build_group(field, label)?;
            let space = fixed_space(&g, m)?;
            print(&json!({
                "group": label,
                "m": m,
                "dim": space.dim(),
                "basis": space.basis().to_json_value(),
            }));
        }
        Command::Decompose { m, n, dump } => {
            let dec = decompose_tensor(field, m, n)?;
            let summands: Vec<Value> = dec
                .summands()
                .iter()
                .map(|s| json!({ "degree": s.degree(), "dim": s.image().dim() }))
                .collect();
            print(&json!({ "m": m, "n": n, "degrees": dec.degrees(), "summands": summands }));
            if let Some(path) = dump {
                let projections: Vec<Value> = dec
                    .projections()
                    .map(|(k, p)| json!({ "degree": k, "matrix": p.to_json_value() }))
                    .collect();
                let body =
                    json!({ "prime": field.modulus(), "m": m, "n": n, "projections": projections });
                std::fs::write(&path, serde_json::to_string(&body)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Invariants { label, dmax } => {
            let g = build_group(field, label)?;
            let set = fundamental_invariants(&g)?;
            let dims = (0..=dmax)
                .map(|d| invariant_dimension(&g, d))
                .collect::<sl2cert::Result<Vec<_>>>()?;
            let syz = syzygy_check_with(&set, field)?;
            let gen = generation_check_with(&g, &set, dmax)?;
            print(&json!({
                "group": label,
                "degrees": set.degrees(),
                "invariants": set.forms.iter().map(|f| f.coeffs().to_vec()).collect::<Vec<_>>(),
                "dimensions": dims,
                "syzygy": { "pass": syz.pass(), "rank": syz.rank, "failures": syz.failures },
                "generation": { "pass": gen.pass(), "dmax": dmax, "deficits": gen.deficits },
            }));
        }
        Command::Transvect { f, g, r } => {
            let f = parse_coeffs(field, &f)?;
            let g = parse_coeffs(field, &g)?;
            let t = transvectant(&f, &g, r)?;
            print(&json!({ "degree": t.degree(), "coeffs": t.coeffs(), "form": t.to_string() }));
        }
        Command::VerifyAll { seed, only, json } => {
            let config = Config {
                prime: field.modulus(),
                seed,
                only,
                oracle_samples: DEFAULT_ORACLE_SAMPLES,
            };
            let report = verify_all(&config)?;
            emit(&report.summary_table());
            if let Some(path) = json {
                std::fs::write(&path, report.to_json())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if !report.pass {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
