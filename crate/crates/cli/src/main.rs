use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use compcalc::Ring;
use compcalc_cli::session::{
    default_models, default_rings, run_hochschild, run_suite, summary_table, CliError, ModelSpec, Session,
};
use compcalc_cli::suite::SuiteConfig;

#[derive(Parser)]
#[command(name = "compcalc", version, about = "Comp calculus of pre-operads")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression such as `dev_total(f, g)` or `(h o_2 f) o_0 g`.
    Eval {
        expr: String,
        #[arg(long, default_value = "q")]
        ring: Ring,
        #[arg(long, default_value = "endo:1")]
        model: ModelSpec,
        /// `name=value`; endo values are `<arity>:<c0>,..`, `random:<arity>`
        /// or `@file.json`, free values are tree combinations,
        /// `0:<degree>` or `random:<degree>`.
        #[arg(long = "var", value_name = "NAME=VALUE")]
        vars: Vec<String>,
        /// The degree-2 multiplication used by cup, delta and the deviations.
        #[arg(long)]
        mu: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run the randomized identity suite.
    Suite {
        /// Repeatable; defaults to q, zmod:2 and zmod:3.
        #[arg(long)]
        ring: Vec<Ring>,
        /// Repeatable; defaults to endo:1, endo:2 and free.
        #[arg(long)]
        model: Vec<ModelSpec>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// Only identities whose id starts with this.
        #[arg(long)]
        only: Option<String>,
        /// One JSON report per line instead of the table.
        #[arg(long)]
        json: bool,
    },
    /// Associativity and Hochschild cohomology of an algebra given by structure constants.
    Hochschild {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        /// Exit with 1 when the algebra is not associative.
        #[arg(long)]
        require_assoc: bool,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Eval {
            expr,
            ring,
            model,
            vars,
            mu,
            seed,
            json,
        } => {
            let mut session = Session::new(ring, model);
            session.seed = seed;
            for binding in &vars {
                let (name, value) = binding
                    .split_once('=')
                    .ok_or_else(|| CliError::Usage(format!("--var expects NAME=VALUE, got `{binding}`")))?;
                session.bind(name.trim(), value.trim());
            }
            if let Some(mu) = &mu {
                session.with_mu(mu);
            }
            let out = session.eval(&expr)?;
            if json {
                println!("{}", out.json_line());
            } else {
                println!("degree {}", out.degree);
                println!("{}", out.text);
            }
            Ok(0)
        }
        Command::Suite {
            ring,
            model,
            seed,
            trials,
            max_degree,
            only,
            json,
        } => {
            let rings = if ring.is_empty() { default_rings() } else { ring };
            let models = if model.is_empty() { default_models() } else { model };
            let cfg = SuiteConfig {
                seed,
                trials,
                max_degree,
                only,
            };
            let reports = run_suite(&models, &rings, &cfg)?;
            if reports.is_empty() {
                return Err(CliError::Usage("no identity matches the filter".into()));
            }
            if json {
                for r in &reports {
                    println!("{}", r.to_json_line());
                }
            } else {
                print!("{}", summary_table(&reports));
                for r in reports.iter().filter(|r| !r.passed()) {
                    println!("counterexample for {} in {} over {}:", r.id, r.model, r.ring);
                    println!("{}", serde_json::to_string_pretty(&r.counterexample).expect("serializes"));
                }
            }
            Ok(if reports.iter().all(|r| r.passed()) { 0 } else { 1 })
        }
        Command::Hochschild {
            file,
            n_max,
            require_assoc,
            json,
        } => {
            let (spec, report) = run_hochschild(&file, n_max)?;
            let value = report.to_json(spec.labels());
            if json {
                println!("{value}");
            } else {
                println!("associative: {}", report.associative);
                if let Some(w) = value.get("witness").filter(|w| !w.is_null()) {
                    println!("witness: {w}");
                }
                if let Some(dims) = &report.dims {
                    println!("dims: {dims:?}");
                    println!("oracle agrees: {}", report.oracle_agree() == Some(true));
                }
            }
            let broken = report.oracle_agree() == Some(false) || report.delta_squared_zero == Some(false);
            Ok(if broken || (require_assoc && !report.associative) { 1 } else { 0 })
        }
    }
}
