use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use occur::app::{
    self, DeriveRequest, ModeCheck, ModesRequest, NstoRequest, PropertyChoice, Report, RuleChoice,
    UnifyRequest, VerifyChoice,
};
use occur::corpus;
use occur::nsto::DEFAULT_BUDGET;
use occur::sld::{Bounds, Engine, DEFAULT_MAX_DEPTH, DEFAULT_MAX_NODES};
use occur::unify::Algorithm;

#[derive(Parser, Debug)]
#[command(name = "occur", version, about = "Occur-check analysis for logic programs")]
struct Cli {
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a unification algorithm on two terms.
    Unify {
        lhs: String,
        rhs: String,
        #[arg(long, value_enum, default_value_t = AlgoArg::Mma)]
        algo: AlgoArg,
        /// first, random:SEED or script:I;J,K;...
        #[arg(long, default_value = "first")]
        strategy: String,
        /// Print every step of the run.
        #[arg(long)]
        trace: bool,
    },
    /// Decide NSTO and WNSTO for a set of equations.
    Nsto {
        /// Equations such as "f(X) = f(a), Y = X".
        equations: String,
        #[arg(long, value_enum, default_value_t = PropertyArg::Both)]
        property: PropertyArg,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Moding enabling the atom-based sufficient conditions.
        #[arg(long)]
        moding: Option<String>,
    },
    /// Check a program against a mode discipline.
    Modes {
        /// Program file, or the name of a bundled example.
        program: String,
        #[arg(long, value_enum)]
        check: CheckArg,
        #[arg(long)]
        moding: Option<String>,
        #[arg(long)]
        moding2: Option<String>,
        /// Search every 2-valued moding instead of checking the declared one.
        #[arg(long)]
        search: bool,
        /// Stop after this many modings are found.
        #[arg(long, default_value_t = 1000)]
        limit: usize,
        /// Also check this query.
        #[arg(long)]
        query: Option<String>,
    },
    /// Build an SLD tree and optionally verify it is (weakly) occur-check free.
    Derive {
        program: String,
        query: String,
        #[arg(long, value_enum, default_value_t = RuleArg::Leftmost)]
        rule: RuleArg,
        #[arg(long, value_enum, default_value_t = VerifyArg::None)]
        verify: VerifyArg,
        #[arg(long, value_enum, default_value_t = EngineArg::Sound)]
        engine: EngineArg,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
        max_nodes: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long)]
        moding: Option<String>,
        /// Print the whole tree.
        #[arg(long)]
        tree: bool,
    },
    /// Run a bundled scenario.
    Scenario {
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgoArg {
    Mma,
    MmaMinus,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PropertyArg {
    Nsto,
    Wnsto,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckArg {
    Tidy,
    Nicely,
    Well,
    Well3,
    WeaklyTidy,
    WeaklyLinearHeads,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RuleArg {
    Leftmost,
    ModeCompatible,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VerifyArg {
    None,
    Nsto,
    Wnsto,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EngineArg {
    Sound,
    Unsound,
}

/// Reads a program from disk, falling back to the bundled examples.
/// Scenarios only use the bundled copies so their output never depends
/// on the working directory.
fn load_program(name: &str, bundled_only: bool) -> Result<(String, String), String> {
    if !bundled_only && Path::new(name).is_file() {
        let text = std::fs::read_to_string(name).map_err(|e| format!("{name}: {e}"))?;
        return Ok((name.to_string(), text));
    }
    let key = name.rsplit('/').next().unwrap_or(name);
    corpus::program(key)
        .map(|t| (key.to_string(), t.to_string()))
        .ok_or_else(|| format!("{name}: no such file or bundled program"))
}

fn usage_error(message: String) -> Report {
    app::usage_report(message)
}

fn execute(command: Command, bundled_only: bool) -> Report {
    match command {
        Command::Unify { lhs, rhs, algo, strategy, trace } => {
            let strategy = match app::parse_strategy(&strategy) {
                Ok(s) => s,
                Err(e) => return usage_error(e),
            };
            let algorithm = match algo {
                AlgoArg::Mma => Algorithm::Mma,
                AlgoArg::MmaMinus => Algorithm::MmaMinus,
            };
            app::cmd_unify(&UnifyRequest { lhs, rhs, algorithm, strategy, trace })
        }
        Command::Nsto { equations, property, budget, moding } => {
            let property = match property {
                PropertyArg::Nsto => PropertyChoice::Nsto,
                PropertyArg::Wnsto => PropertyChoice::Wnsto,
                PropertyArg::Both => PropertyChoice::Both,
            };
            app::cmd_nsto(&NstoRequest { equations, property, budget, moding })
        }
        Command::Modes { program, check, moding, moding2, search, limit, query } => {
            let (program_name, program_text) = match load_program(&program, bundled_only) {
                Ok(p) => p,
                Err(e) => return usage_error(e),
            };
            let check = match check {
                CheckArg::Tidy => ModeCheck::Tidy,
                CheckArg::Nicely => ModeCheck::Nicely,
                CheckArg::Well => ModeCheck::Well,
                CheckArg::Well3 => ModeCheck::Well3,
                CheckArg::WeaklyTidy => ModeCheck::WeaklyTidy,
                CheckArg::WeaklyLinearHeads => ModeCheck::WeaklyLinearHeads,
            };
            app::cmd_modes(&ModesRequest {
                program_name,
                program_text,
                check,
                moding,
                moding2,
                search,
                query,
                limit,
            })
        }
        Command::Derive {
            program,
            query,
            rule,
            verify,
            engine,
            max_depth,
            max_nodes,
            budget,
            moding,
            tree,
        } => {
            let (program_name, program_text) = match load_program(&program, bundled_only) {
                Ok(p) => p,
                Err(e) => return usage_error(e),
            };
            app::cmd_derive(&DeriveRequest {
                program_name,
                program_text,
                query,
                rule: match rule {
                    RuleArg::Leftmost => RuleChoice::Leftmost,
                    RuleArg::ModeCompatible => RuleChoice::ModeCompatible,
                    RuleArg::All => RuleChoice::All,
                },
                verify: match verify {
                    VerifyArg::None => VerifyChoice::None,
                    VerifyArg::Nsto => VerifyChoice::Nsto,
                    VerifyArg::Wnsto => VerifyChoice::Wnsto,
                },
                engine: match engine {
                    EngineArg::Sound => Engine::Sound,
                    EngineArg::Unsound => Engine::Unsound,
                },
                bounds: Bounds { max_depth, max_nodes },
                budget,
                moding,
                tree,
            })
        }
        Command::Scenario { name, .. } => {
            let name = name.expect("clap requires a name without --list");
            let Some(args) = corpus::scenario(&name) else {
                return usage_error(format!("unknown scenario '{name}' (try --list)"));
            };
            let argv = std::iter::once("occur".to_string()).chain(args);
            match Cli::try_parse_from(argv) {
                Ok(Cli { command: Command::Scenario { .. }, .. }) => {
                    usage_error(format!("scenario '{name}' refers to another scenario"))
                }
                Ok(inner) => execute(inner.command, true).with_scenario(&name),
                Err(e) => usage_error(format!("scenario '{name}': {e}")),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Scenario { list: true, .. } = cli.command {
        let mut out = std::io::stdout().lock();
        for (name, _) in corpus::SCENARIOS {
            // a closed pipe (`occur scenario --list | head`) is not an error
            if writeln!(out, "{name}").is_err() {
                break;
            }
        }
        return ExitCode::SUCCESS;
    }
    let report = execute(cli.command, false);
    // write errors (usually a closed pipe) are deliberately ignored
    let _ = if cli.json {
        std::io::stdout().write_all(report.to_json().as_bytes())
    } else if report.error.is_some() {
        std::io::stderr().write_all(report.text.as_bytes())
    } else {
        std::io::stdout().write_all(report.text.as_bytes())
    };
    ExitCode::from(report.exit_status as u8)
}
