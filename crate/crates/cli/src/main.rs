//! `wedge`: entanglement measures, separability reports and local-unitary
//! experiments for pure states given as ket expressions or JSON files.
//!
//! Exit codes: 0 success, 1 syntax/schema/io or usage errors, 2 validation
//! errors, 3 size guard.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use wedge_core::frontend::{evaluate, load_state, parse_ket, save_state, StateFile};
use wedge_core::lu::{random_state, stream_rng, STATE_STREAM};
use wedge_core::measures::{self, MeasureConfig, MeasureKind, MeasureSelector};
use wedge_core::{invariance_experiment, separability_report, Error, PureState};

#[derive(Parser, Debug)]
#[command(
    name = "wedge",
    version,
    about = "Wedge-product entanglement measures for pure states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the concurrence or the multipartite measure E.
    Measure {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2.0)]
        norm_constant: f64,
        #[arg(long, value_enum, default_value_t = Selector::Auto)]
        measure: Selector,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        output: Output,
    },
    /// Residuals across every bipartition, plus a product certificate.
    Separability {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1e-10)]
        threshold: f64,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        output: Output,
    },
    /// Apply seeded Haar-random local unitaries and report |ΔE|.
    Invariance {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 2.0)]
        norm_constant: f64,
        #[arg(long, value_enum, default_value_t = Selector::Auto)]
        measure: Selector,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        output: Output,
    },
    /// Parse a ket expression and print its dims and amplitudes.
    Parse {
        #[arg(long)]
        expr: String,
        /// Explicit local dimensions, comma separated.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        /// Also write the state to a JSON state file.
        #[arg(long)]
        save: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        output: Output,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "source")]
struct Source {
    /// JSON state file.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Ket expression, e.g. "(1/sqrt(2))(|0,0>+|1,1>)".
    #[arg(long)]
    expr: Option<String>,
    /// Gaussian random state with these local dimensions, comma separated.
    #[arg(long, value_delimiter = ',')]
    random: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
struct Input {
    #[command(flatten)]
    source: Source,
    /// Explicit local dimensions for --expr, comma separated.
    #[arg(long, value_delimiter = ',', requires = "expr")]
    dims: Option<Vec<usize>>,
    /// Rescale the state to unit norm instead of rejecting it.
    #[arg(long)]
    normalize: bool,
    /// Seeds --random and the invariance trials.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Selector {
    Bipartite,
    Multipartite,
    Auto,
}

impl From<Selector> for MeasureSelector {
    fn from(s: Selector) -> Self {
        match s {
            Selector::Bipartite => MeasureSelector::Bipartite,
            Selector::Multipartite => MeasureSelector::Multipartite,
            Selector::Auto => MeasureSelector::Auto,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Output {
    Text,
    Machine,
}

const TWO_PARTY_NOTE: &str = "for two subsystems E = 2C";

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. } | Error::ArityMismatch(_) | Error::Io(_) | Error::Schema { .. } => 1,
        Error::TooLarge(_) => 3,
        _ => 2,
    }
}

impl Input {
    fn echo(&self) -> Value {
        json!({
            "state": self.source.state.as_ref().map(|p| p.display().to_string()),
            "expr": self.source.expr,
            "random": self.source.random,
            "dims": self.dims,
            "normalize": self.normalize,
            "seed": self.seed,
        })
    }

    fn load(&self) -> Result<PureState, Error> {
        let state = if let Some(path) = &self.source.state {
            load_state(path)?
        } else if let Some(text) = &self.source.expr {
            evaluate(&parse_ket(text)?, self.dims.as_deref())?
        } else {
            let dims = self.source.random.as_deref().unwrap_or_default();
            random_state(dims, &mut stream_rng(self.seed, STATE_STREAM))?
        };
        if self.normalize {
            state.normalize()
        } else {
            Ok(state)
        }
    }
}

fn kind_name(kind: MeasureKind) -> &'static str {
    match kind {
        MeasureKind::BipartiteConcurrence => "bipartite_concurrence",
        MeasureKind::MultipartiteE => "multipartite_e",
    }
}

fn forced_two_party(selector: Selector, state: &PureState) -> bool {
    selector == Selector::Multipartite && state.num_subsystems() == 2
}

fn config(norm_constant: f64) -> MeasureConfig {
    MeasureConfig::with_norm_constant(norm_constant)
}

fn machine(doc: Value) -> String {
    serde_json::to_string_pretty(&doc).expect("json values serialize")
}

fn run(command: Command) -> Result<String, Error> {
    match command {
        Command::Measure {
            input,
            norm_constant,
            measure,
            output,
        } => {
            let state = input.load()?;
            let r = measures::evaluate(&state, measure.into(), &config(norm_constant))?;
            let note = forced_two_party(measure, &state).then_some(TWO_PARTY_NOTE);
            Ok(match output {
                Output::Machine => machine(json!({
                    "command": "measure",
                    "input": input.echo(),
                    "dims": state.dims(),
                    "kind": kind_name(r.kind),
                    "norm_constant": r.norm_constant,
                    "value": r.value,
                    "term_sum": r.term_sum,
                    "note": note,
                })),
                Output::Text => {
                    let mut out = format!(
                        "dims: {:?}\nmeasure: {}\nnorm constant: {}\nvalue: {}\nterm sum: {}\n",
                        state.dims(),
                        kind_name(r.kind),
                        r.norm_constant,
                        r.value,
                        r.term_sum
                    );
                    if let Some(n) = note {
                        out.push_str(&format!("note: {n}\n"));
                    }
                    out
                }
            })
        }
        Command::Separability {
            input,
            threshold,
            output,
        } => {
            let state = input.load()?;
            let rep = separability_report(&state, threshold)?;
            Ok(match output {
                Output::Machine => {
                    let partitions: Vec<Value> = rep
                        .per_partition
                        .iter()
                        .map(|(p, v)| {
                            json!({
                                "left": p.left(),
                                "right": p.right(),
                                "residual": v.residual,
                                "separable": v.separable,
                            })
                        })
                        .collect();
                    let certificate = rep.certificate.as_ref().map(|c| {
                        let factors: Vec<Vec<[f64; 2]>> = c
                            .factors
                            .iter()
                            .map(|f| f.iter().map(|z| [z.re, z.im]).collect())
                            .collect();
                        json!({
                            "factors": factors,
                            "reconstruction_error": c.reconstruction_error,
                        })
                    });
                    machine(json!({
                        "command": "separability",
                        "input": input.echo(),
                        "dims": state.dims(),
                        "threshold": rep.threshold,
                        "fully_separable": rep.fully_separable,
                        "partitions": partitions,
                        "certificate": certificate,
                    }))
                }
                Output::Text => {
                    let mut out = format!("dims: {:?}\nthreshold: {:e}\n", state.dims(), threshold);
                    for (p, v) in &rep.per_partition {
                        out.push_str(&format!(
                            "{:<12} residual {:<24e} {}\n",
                            format!("{p}|{}", p.complement()),
                            v.residual,
                            if v.separable {
                                "separable"
                            } else {
                                "entangled"
                            }
                        ));
                    }
                    out.push_str(if rep.fully_separable {
                        "fully separable\n"
                    } else {
                        "not fully separable\n"
                    });
                    if let Some(c) = &rep.certificate {
                        for (j, f) in c.factors.iter().enumerate() {
                            let parts: Vec<String> =
                                f.iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect();
                            out.push_str(&format!("factor {j}: [{}]\n", parts.join(", ")));
                        }
                        out.push_str(&format!(
                            "reconstruction error: {:e}\n",
                            c.reconstruction_error
                        ));
                    }
                    out
                }
            })
        }
        Command::Invariance {
            input,
            trials,
            norm_constant,
            measure,
            output,
        } => {
            let state = input.load()?;
            let selector: MeasureSelector = measure.into();
            let run = invariance_experiment(
                &state,
                trials,
                input.seed,
                selector,
                &config(norm_constant),
            )?;
            let kind = selector.resolve(state.num_subsystems());
            let note = forced_two_party(measure, &state).then_some(TWO_PARTY_NOTE);
            Ok(match output {
                Output::Machine => machine(json!({
                    "command": "invariance",
                    "input": input.echo(),
                    "dims": state.dims(),
                    "kind": kind_name(kind),
                    "norm_constant": norm_constant,
                    "seed": run.seed,
                    "trials": run.trials,
                    "baseline": run.baseline,
                    "max_abs_deviation": run.max_abs_deviation,
                    "per_trial_deviations": run.per_trial_deviations,
                    "note": note,
                })),
                Output::Text => {
                    let mut out = format!(
                        "dims: {:?}\nmeasure: {}\nseed: {}\ntrials: {}\nbaseline: {}\nmax |deviation|: {:e}\n",
                        state.dims(),
                        kind_name(kind),
                        run.seed,
                        run.trials,
                        run.baseline,
                        run.max_abs_deviation
                    );
                    if let Some(n) = note {
                        out.push_str(&format!("note: {n}\n"));
                    }
                    out
                }
            })
        }
        Command::Parse {
            expr,
            dims,
            save,
            output,
        } => {
            let parsed = parse_ket(&expr)?;
            let state = evaluate(&parsed, dims.as_deref())?;
            if let Some(path) = &save {
                save_state(path, &state)?;
            }
            Ok(match output {
                Output::Machine => machine(json!({
                    "command": "parse",
                    "expr": expr,
                    "normalized_expr": parsed.to_string(),
                    "state": StateFile::from_state(&state),
                    "norm": state.norm(),
                })),
                Output::Text => {
                    let mut out = format!("expr: {parsed}\ndims: {:?}\n", state.dims());
                    for (flat, a) in state.amplitudes().iter().enumerate() {
                        if a.re == 0.0 && a.im == 0.0 {
                            continue;
                        }
                        let idx: Vec<String> = state
                            .multi_index(flat)
                            .iter()
                            .map(|i| i.to_string())
                            .collect();
                        out.push_str(&format!("|{}>  {}{:+}i\n", idx.join(","), a.re, a.im));
                    }
                    out.push_str(&format!("norm: {}\n", state.norm()));
                    out
                }
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::NotNormalized { .. } = e {
                eprintln!("hint: pass --normalize to rescale the state");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
