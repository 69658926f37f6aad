use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ident_core::algebra::Budget;
use ident_core::diff::Ranking;
use ident_core::io_elim::IoOptions;
use ident_core::model::{gen_appendix, parse_model, OdeModel};
use ident_core::pipeline::{analyze, check, IdentReport, Options, Stage};
use ident_core::wronskian::RankMethod;
use ident_core::Error;

#[derive(Parser)]
#[command(name = "ident", version, about = "Identifiable parameter functions of rational ODE models")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Input-output equations.
    Io(Common),
    /// Single-experiment identifiable functions, plus the multi-experiment analysis.
    Ident {
        #[command(flatten)]
        common: Common,
        /// Print the intersection ideal chain to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Multi-experiment identifiable functions and the experiment bound.
    Multi(Common),
    /// Decide whether a parameter expression is identifiable.
    Check {
        #[command(flatten)]
        common: Common,
        /// Expression over the model parameters.
        #[arg(long)]
        function: String,
        /// Test against the multi-experiment field.
        #[arg(long)]
        multi: bool,
    },
    /// Write a generated benchmark model.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        h: usize,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Appendix,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Symbolic,
    Prob,
}

#[derive(Args)]
struct Common {
    /// Model file.
    model: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Outputs and inputs, highest first; `a|b` groups an orderly block.
    #[arg(long)]
    ranking: Option<String>,
    #[arg(long, value_enum, default_value = "symbolic")]
    rank_method: Method,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long)]
    max_prolongation: Option<u32>,
    #[arg(long)]
    budget_degree: Option<u32>,
    #[arg(long)]
    budget_terms: Option<usize>,
    /// Report zero elapsed time so output is byte-stable.
    #[arg(long)]
    no_timing: bool,
}

impl Common {
    fn load(&self) -> Result<OdeModel, Error> {
        let text = std::fs::read_to_string(&self.model)
            .map_err(|e| Error::Invalid(format!("{}: {e}", self.model.display())))?;
        parse_model(&text)
    }

    fn method(&self) -> RankMethod {
        match self.rank_method {
            Method::Symbolic => RankMethod::Symbolic,
            Method::Prob => RankMethod::Probabilistic {
                seed: self.seed,
                trials: self.trials,
            },
        }
    }

    fn options(&self) -> Result<Options, Error> {
        let mut budget = Budget::default();
        if let Some(d) = self.budget_degree {
            budget.max_degree = d;
        }
        if let Some(t) = self.budget_terms {
            budget.max_terms = t;
        }
        if let Ok(ms) = std::env::var("IDENT_BUDGET_MS") {
            let ms: u64 = ms
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("IDENT_BUDGET_MS must be an integer, got `{ms}`")))?;
            budget = budget.with_timeout(Duration::from_millis(ms));
        }
        let ranking = self.ranking.as_deref().map(Ranking::parse).transpose()?;
        Ok(Options {
            io: IoOptions {
                ranking,
                max_prolongation: self.max_prolongation,
                jet_cap: None,
                budget,
            },
            method: self.method(),
            timing: !self.no_timing,
        })
    }
}

fn report(c: &Common, stage: Stage, trace: bool) -> Result<String, Error> {
    let m = c.load()?;
    let a = analyze(&m, &c.options()?, stage)?;
    if let (true, Some(t)) = (trace, &a.trace) {
        for (label, gens) in &t.steps {
            let g: Vec<String> = gens.iter().map(|p| p.to_string()).collect();
            eprintln!("{label} = ({})", g.join(", "));
        }
    }
    let r = IdentReport::new(&a, c.method(), c.seed);
    Ok(match c.format {
        Format::Json => r.to_json(),
        Format::Text => r.to_text(),
    })
}

fn run(cli: Cli) -> Result<String, Error> {
    match cli.cmd {
        Cmd::Io(c) => report(&c, Stage::Io, false),
        Cmd::Ident { common, trace } => report(&common, Stage::Ident, trace),
        Cmd::Multi(c) => report(&c, Stage::Multi, false),
        Cmd::Check {
            common,
            function,
            multi,
        } => {
            let m = common.load()?;
            let ok = check(&m, &function, multi, &common.options()?)?;
            Ok(match common.format {
                Format::Json => serde_json::json!({
                    "model": m.name(),
                    "function": function,
                    "multi": multi,
                    "identifiable": ok,
                })
                .to_string(),
                Format::Text => {
                    let scope = if multi { "multi-experiment" } else { "single-experiment" };
                    let verdict = if ok { "identifiable" } else { "not identifiable" };
                    format!("{function}: {verdict} ({scope})")
                }
            })
        }
        Cmd::Gen { family, n, h, out } => {
            let m = match family {
                Family::Appendix => gen_appendix(n, h)?,
            };
            let text = m.to_string();
            match out {
                Some(p) => {
                    std::fs::write(&p, &text)
                        .map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(s) => {
            if !s.is_empty() {
                println!("{}", s.trim_end());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
