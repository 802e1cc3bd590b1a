use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pplane::abgroup::{self, TorsionConstraint};
use pplane::classify::{self, HalfDim, ModelDescriptor};
use pplane::msq::{self, PontrjaginSymbol};
use pplane::series::{self, DEFAULT_ORDER};
use pplane::{Execution, FgAbGroup};

mod checks;

/// Exact genus calculus and classification of projective-plane-like manifolds.
#[derive(Parser)]
#[command(name = "pplane", version)]
struct Cli {
    /// Run enumerations on a single thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients of a genus series in t = x^2.
    Series {
        #[arg(long, value_enum)]
        which: SeriesKind,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Multiplicative-sequence polynomial of a given weight.
    Genus {
        #[arg(long, value_enum)]
        which: GenusKind,
        #[arg(long)]
        weight: usize,
        /// Pontrjagin classes to set to zero, e.g. p4,p12.
        #[arg(long, value_delimiter = ',')]
        zero: Vec<PontrjaginSymbol>,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Invariant report of one model.
    Classify {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Invariant table over odd r in a range and every exotic residue s.
    Enumerate {
        #[arg(long)]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        r_min: i64,
        #[arg(long, allow_hyphen_values = true)]
        r_max: i64,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
    },
    /// Number of homotopy types of models.
    HomotopyCount {
        #[arg(long)]
        m: u32,
    },
    /// Finite abelian group computations.
    Abelian {
        #[command(subcommand)]
        command: AbelianCommand,
    },
    /// Recompute every known value and consequence; exit 1 on any failure.
    Verify,
}

#[derive(Subcommand)]
enum AbelianCommand {
    /// List the finite abelian groups satisfying all constraints.
    Solve {
        /// T is isomorphic to a subgroup of Z/a.
        #[arg(long)]
        embeds_in: Vec<u64>,
        /// T tensor Z/n is isomorphic to H, written n:H (e.g. 2:Z/2).
        #[arg(long, value_parser = parse_tensor_iso)]
        tensor_iso: Vec<(u64, FgAbGroup)>,
        #[arg(long, default_value_t = abgroup::DEFAULT_ORDER_BOUND)]
        max_order: u64,
    },
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    m: u32,
    #[arg(long, allow_hyphen_values = true)]
    r: i64,
    #[arg(long, default_value_t = 0)]
    s: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesKind {
    #[value(name = "L")]
    L,
    #[value(name = "Ahat")]
    Ahat,
    #[value(name = "Ldual")]
    Ldual,
    #[value(name = "Ahatdual")]
    Ahatdual,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenusKind {
    #[value(name = "L")]
    L,
    #[value(name = "Ahat")]
    Ahat,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
    Text,
}

fn parse_tensor_iso(s: &str) -> Result<(u64, FgAbGroup), String> {
    let (n, h) = s.split_once(':').ok_or_else(|| format!("expected n:H, got {s:?}"))?;
    let n = n.trim().parse::<u64>().map_err(|e| format!("bad modulus {n:?}: {e}"))?;
    let h = h.parse::<FgAbGroup>().map_err(|e| e.to_string())?;
    Ok((n, h))
}

/// Failure of a command; usage problems map to exit code 2.
enum Failure {
    Usage(String),
    Check,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn half_dim(m: u32) -> Result<HalfDim, Failure> {
    Ok(HalfDim::try_from(m)?)
}

fn render(rows: &[classify::InvariantReport], format: Format, single: bool) -> String {
    match format {
        Format::Json if single => format!("{}\n", serde_json::to_string_pretty(&rows[0]).expect("serializable")),
        Format::Json => format!("{}\n", classify::render_json(rows)),
        Format::Csv => classify::render_csv(rows),
        Format::Md => classify::render_markdown(rows),
        Format::Text => rows.iter().map(|r| r.to_text()).collect::<Vec<_>>().join("\n"),
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    match cli.command {
        Command::Series { which, order } => {
            let f = match which {
                SeriesKind::L => series::l_genus_series(order),
                SeriesKind::Ahat => series::a_hat_series(order),
                SeriesKind::Ldual => series::dual_series(&series::l_genus_series(order))?,
                SeriesKind::Ahatdual => series::dual_series(&series::a_hat_series(order))?,
            };
            let cells: Vec<String> = f.coefficients().iter().map(series::format_rational).collect();
            Ok(format!("{}\n", cells.join(", ")))
        }
        Command::Genus { which, weight, zero, order } => {
            let f = match which {
                GenusKind::L => series::l_genus_series(order),
                GenusKind::Ahat => series::a_hat_series(order),
            };
            let poly = msq::genus_polynomial(&f, weight)?;
            Ok(format!("{}\n", poly.with_zeroed(&zero)))
        }
        Command::Classify { model, format } => {
            let d = ModelDescriptor::new(half_dim(model.m)?, model.r, model.s)?;
            Ok(render(&[classify::model_invariants(&d)], format, true))
        }
        Command::Enumerate { m, r_min, r_max, format } => {
            if r_min > r_max {
                return Err(Failure::Usage(format!("--r-min {r_min} exceeds --r-max {r_max}")));
            }
            let rs: Vec<i64> = (r_min..=r_max).filter(|r| r % 2 != 0).collect();
            let table = classify::enumerate_models(half_dim(m)?, &rs, exec);
            Ok(render(&table.rows, format, false))
        }
        Command::HomotopyCount { m } => Ok(format!("{}\n", classify::count_homotopy_types(half_dim(m)?)?)),
        Command::Abelian { command: AbelianCommand::Solve { embeds_in, tensor_iso, max_order } } => {
            let mut constraints: Vec<TorsionConstraint> =
                embeds_in.into_iter().map(TorsionConstraint::EmbedsIn).collect();
            constraints.extend(tensor_iso.into_iter().map(|(n, h)| TorsionConstraint::TensorIsomorphic(n, h)));
            constraints.push(TorsionConstraint::OrderAtMost(max_order));
            let groups = abgroup::solve_torsion_constraints_with(&constraints, exec)?;
            Ok(groups.iter().map(|g| format!("{g}\n")).collect())
        }
        Command::Verify => {
            let outcomes = checks::run_all();
            let mut out = String::from("| # | location | check | kind | result |\n|---|---|---|---|---|\n");
            for (i, o) in outcomes.iter().enumerate() {
                let result = match &o.result {
                    Ok(()) => "pass".to_string(),
                    Err(detail) => format!("FAIL: {detail}"),
                };
                out.push_str(&format!(
                    "| {} | {} | {} | consequence check | {} |\n",
                    i + 1,
                    o.location,
                    o.description,
                    result
                ));
            }
            let failed = outcomes.iter().filter(|o| o.result.is_err()).count();
            out.push_str(&format!("\n{} of {} checks passed\n", outcomes.len() - failed, outcomes.len()));
            print!("{out}");
            if failed > 0 {
                return Err(Failure::Check);
            }
            Ok(String::new())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
