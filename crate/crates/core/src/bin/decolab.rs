use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use decolab::channels::{apply_channel, inverse_damping, inverse_two_sided, is_physical, DampingChannel};
use decolab::entanglement::{c1_closed, c2_closed, c2_unbalanced, log_negativity_eps, sde_threshold, wootters_concurrence};
use decolab::experiments::{
    forward_sweep, inverse_sweep, linear_grid, physicality_eps, sde_search, ModePlan, NamedWitness, SeparableSpec,
};
use decolab::fock::{BipartiteState, Mode, QubitPure};
use decolab::io::{read_spec, read_state, state_to_json, write_state, write_sweep_csv, StateFile};
use decolab::moments::{default_det_tol, hz_first_order, presets, witness_from_det, MomentMatrixSpec};
use decolab::numerics::herm_eigen;
use decolab::{Error, Result};

#[derive(Parser)]
#[command(name = "decolab", version, about = "Entanglement under passive decoherence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    A,
    B,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Damp a state through vacuum beam-splitter channels.
    Evolve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        eta_a: f64,
        #[arg(long, default_value_t = 1.0)]
        eta_b: f64,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        #[arg(long, value_enum, default_value_t = Target::Both)]
        mode: Target,
    },
    /// Evaluate a moment-determinant witness (d1, d2, d3, hz or a spec file).
    Witness {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        spec: String,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Sweep the coupling and write a CSV table.
    Sweep {
        #[arg(long = "in")]
        input: PathBuf,
        /// `lo:hi:n` or a comma-separated list.
        #[arg(long, default_value = "0.5:1:101")]
        grid: String,
        /// A_ONLY, B_ONLY, BOTH, UNBALANCED:<eta_b>, INVERSE (both modes) or INVERSE_A.
        #[arg(long, default_value = "INVERSE")]
        plan: String,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        /// Witness column (preset name or spec file); repeatable.
        #[arg(long = "witness")]
        witnesses: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply the inverse damping map.
    Invert {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        #[arg(long)]
        two_sided: bool,
        /// Mode to invert when not two-sided.
        #[arg(long, value_enum, default_value_t = Target::A)]
        mode: Target,
    },
    /// Search random separable states for physical, entangled preimages.
    SearchSde {
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        local_dim: usize,
        #[arg(long, default_value_t = 20)]
        num_terms: usize,
        #[arg(long, default_value = "0.5:1:101")]
        grid: String,
        #[arg(long)]
        one_sided: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-qubit concurrence after damping, numerically and in closed form.
    Concurrence {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        eta_a: f64,
        #[arg(long, default_value_t = 1.0)]
        eta_b: f64,
    },
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::Invalid(format!("bad grid {text:?}"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        return Ok(linear_grid(lo, hi, n));
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

fn witness_spec(name: &str) -> Result<MomentMatrixSpec> {
    match presets::by_name(name) {
        Some(spec) => Ok(spec),
        None => read_spec(name),
    }
}

fn witness_name(arg: &str) -> String {
    PathBuf::from(arg)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| arg.to_string())
}

fn emit_state(out: Option<&PathBuf>, state: &BipartiteState) -> Result<()> {
    match out {
        Some(path) => write_state(path, state),
        None => {
            println!("{}", state_to_json(state)?);
            Ok(())
        }
    }
}

fn sink(out: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn pure_qubit(state: &BipartiteState) -> Option<QubitPure> {
    if (state.purity() - 1.0).abs() > 1e-10 {
        return None;
    }
    let eig = herm_eigen(state.rho()).ok()?;
    let v = &eig.vectors;
    QubitPure::normalized(v[(0, 3)], v[(1, 3)], v[(2, 3)], v[(3, 3)]).ok()
}

fn summary(state: &BipartiteState) -> Result<serde_json::Value> {
    let eps = physicality_eps();
    let (physical, min_eig) = is_physical(state, eps);
    let ln = if physical {
        Some(log_negativity_eps(state, eps)?.log_negativity)
    } else {
        None
    };
    Ok(json!({ "physical": physical, "min_eig": min_eig, "log_negativity": ln }))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Evolve { input, out, eta_a, eta_b, phi, mode } => {
            let mut state = read_state(&input)?;
            if matches!(mode, Target::A | Target::Both) {
                state = apply_channel(&state, &DampingChannel::new(eta_a, phi, Mode::A)?)?;
            }
            if matches!(mode, Target::B | Target::Both) {
                state = apply_channel(&state, &DampingChannel::new(eta_b, phi, Mode::B)?)?;
            }
            emit_state(out.as_ref(), &state)
        }
        Command::Witness { input, spec, tol } => {
            let state = read_state(&input)?;
            let report = if spec == "hz" {
                let (w1, w2) = hz_first_order(&state);
                let tol = tol.unwrap_or(1e-12);
                let verdict = if w1 > tol || w2 > tol { "ENTANGLED" } else { "INCONCLUSIVE" };
                json!({ "spec": "hz", "w1": w1, "w2": w2, "verdict": verdict, "tolerance": tol })
            } else {
                let m = witness_spec(&spec)?;
                let r = witness_from_det(&state, &m, tol.unwrap_or(default_det_tol(m.len())))?;
                json!({ "spec": spec, "size": m.len(), "value": r.value, "verdict": r.verdict, "tolerance": r.tolerance })
            };
            println!("{report}");
            Ok(())
        }
        Command::Sweep { input, grid, plan, phi, witnesses, out } => {
            let state = read_state(&input)?;
            let grid = parse_grid(&grid)?;
            let named = witnesses
                .iter()
                .map(|w| Ok(NamedWitness::new(witness_name(w), witness_spec(w)?)))
                .collect::<Result<Vec<_>>>()?;
            let records = match plan.trim().to_ascii_uppercase().as_str() {
                "INVERSE" => inverse_sweep(&state, &grid, phi, true, &named)?,
                "INVERSE_A" => inverse_sweep(&state, &grid, phi, false, &named)?,
                _ => forward_sweep(&state, &grid, plan.parse::<ModePlan>()?, &named)?,
            };
            write_sweep_csv(sink(out.as_ref())?, &records)
        }
        Command::Invert { input, out, eta, phi, two_sided, mode } => {
            let state = read_state(&input)?;
            let pre = match (two_sided, mode) {
                (true, _) | (false, Target::Both) => inverse_two_sided(&state, eta, phi)?,
                (false, Target::A) => inverse_damping(&state, eta, phi, Mode::A)?,
                (false, Target::B) => inverse_damping(&state, eta, phi, Mode::B)?,
            };
            eprintln!("{}", summary(&pre)?);
            emit_state(out.as_ref(), &pre)
        }
        Command::SearchSde { trials, seed, local_dim, num_terms, grid, one_sided, out } => {
            let spec = SeparableSpec::new(num_terms, local_dim, seed)?;
            let grid = parse_grid(&grid)?;
            let hits = sde_search(&spec, &grid, trials, !one_sided)?;
            let rows: Vec<_> = hits
                .iter()
                .map(|h| {
                    json!({
                        "seed": h.seed,
                        "eta": h.eta,
                        "preimage_min_eig": h.preimage_min_eig,
                        "preimage_log_neg": h.preimage_log_neg,
                        "state": StateFile::from(&h.state),
                    })
                })
                .collect();
            let mut w = sink(out.as_ref())?;
            serde_json::to_writer_pretty(&mut w, &json!({ "spec": spec, "grid": grid, "hits": rows }))?;
            writeln!(w)?;
            eprintln!("{} hits over {trials} trials", hits.len());
            Ok(())
        }
        Command::Concurrence { input, eta_a, eta_b } => {
            let state = read_state(&input)?;
            let damped = apply_channel(&state, &DampingChannel::new(eta_a, 0.0, Mode::A)?)?;
            let damped = apply_channel(&damped, &DampingChannel::new(eta_b, 0.0, Mode::B)?)?;
            let num = wootters_concurrence(&damped)?;
            let mut report = json!({
                "eta_a": eta_a,
                "eta_b": eta_b,
                "numerical": num.value,
                "raw": num.raw,
                "lambdas": num.lambdas,
            });
            if let Some(q) = pure_qubit(&state) {
                let raw = c2_unbalanced(&q, eta_a, eta_b)?;
                let mut closed = json!({ "raw": raw, "value": raw.max(0.0) });
                if eta_a == eta_b {
                    closed["c2"] = json!(c2_closed(&q, eta_a)?);
                }
                if eta_b == 1.0 {
                    closed["c1"] = json!(c1_closed(&q, eta_a)?);
                }
                if q.invariant() > 0.0 {
                    closed["threshold"] = json!(sde_threshold(&q)?);
                }
                report["closed_form"] = closed;
            }
            println!("{report}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
