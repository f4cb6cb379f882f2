//! `qaffine`: exact verification of the super RS algebra of
//! U_q[osp(1|2)^(1)], its Gauss decomposition, the Drinfeld current
//! relations and their rational degeneration.
//!
//! Exit status: 0 when every selected check passes, 1 when any check fails,
//! 2 on configuration, parse or arithmetic errors (and when nothing could be
//! verified).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qaffine::gauss::{gauss_decompose, leading_coefficients, verify_gauss};
use qaffine::relations::{
    builtin_suite, currents_for, mutation_probe, parse_suite, verify_suite, verify_transposed_pair, Suite, BUILTIN,
    TRANSPOSED_PAIR,
};
use qaffine::report::{exit_code, render_text, sort_reports, CheckReport};
use qaffine::rmatrix::{build_r, RMatrix};
use qaffine::rs::{build_l, verify_component_random, Sign};
use qaffine::yangian::{compare_suites, degenerate_suite, theorem4};
use qaffine::{Error, Result, Q};

/// Number of random instances in the component-form comparison.
const COMPONENT_SAMPLES: usize = 100;

#[derive(Parser, Debug)]
#[command(name = "qaffine", version, about = "Exact verifier for the super RS algebra of U_q[osp(1|2)^(1)]")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Series cutoff: coefficients are kept for indices in [-N, N].
    #[arg(long, global = true, env = "QAFFINE_CUTOFF", default_value_t = 8, value_parser = clap::value_parser!(i32).range(2..))]
    cutoff: i32,

    /// Restrict to the named suites (comma separated).
    #[arg(long, global = true, value_delimiter = ',')]
    suite: Vec<String>,

    /// Load the R-matrix from a JSON document instead of the built-in one.
    #[arg(long, global = true)]
    rmatrix: Option<PathBuf>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for randomized checks; with `verify-suites` it also enables the
    /// mutation probes.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Yang-Baxter equation, unitarity, R21, R(z=w)=P and crossing.
    VerifyR,
    /// RLL relations, their consequences and the component-form cross-check.
    VerifyRll,
    /// Gauss decomposition round trip and explicit inverses.
    VerifyGauss,
    /// Drinfeld-current relation suites (built-in or from files).
    VerifySuites {
        /// Additional suite files in the relation DSL.
        #[arg(long = "file")]
        files: Vec<PathBuf>,
    },
    /// Maps a trigonometric suite to its rational form.
    Degenerate {
        /// Compare the result with a rational suite.
        #[arg(long)]
        compare: bool,
        /// Rational suite file to compare with (defaults to the built-in
        /// counterpart of `theorem3`).
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Leading coefficients of the nine Gauss factors of both L-operators.
    GaussPrint,
}

struct Output {
    text: String,
    code: u8,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn load_suite(path: &Path) -> Result<Suite> {
    parse_suite(&read(path)?).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn load_r(cli: &Cli) -> Result<(RMatrix<Q>, bool)> {
    match &cli.rmatrix {
        Some(p) => {
            let r = RMatrix::from_json(&read(p)?).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
            Ok((r, false))
        }
        None => Ok((build_r(), true)),
    }
}

fn render(cli: &Cli, mut reports: Vec<CheckReport>) -> Result<Output> {
    sort_reports(&mut reports);
    let code = exit_code(&reports) as u8;
    let text = match cli.format {
        Format::Text => render_text(&reports),
        Format::Json => serde_json::to_string_pretty(&reports)? + "\n",
    };
    Ok(Output { text, code })
}

fn selected_builtins(cli: &Cli) -> Result<Vec<Suite>> {
    if cli.suite.is_empty() {
        return BUILTIN.iter().map(|(name, _)| builtin_suite(name)).collect();
    }
    cli.suite.iter().map(|n| builtin_suite(n)).collect()
}

fn verify_suites(cli: &Cli, files: &[PathBuf]) -> Result<Output> {
    // Validate every input before computing anything.
    let external = files.iter().map(|p| load_suite(p)).collect::<Result<Vec<_>>>()?;
    let mut suites = if external.is_empty() || !cli.suite.is_empty() {
        selected_builtins(cli)?
    } else {
        Vec::new()
    };
    suites.extend(external);
    let (r, _) = load_r(cli)?;
    let env = currents_for(&r, cli.cutoff)?;
    let mut reports = Vec::new();
    for s in &suites {
        reports.extend(verify_suite(s, &env, cli.cutoff));
        if s.relation(TRANSPOSED_PAIR.0).is_some() && s.relation(TRANSPOSED_PAIR.1).is_some() {
            reports.push(verify_transposed_pair(s, &env, cli.cutoff));
        }
        if let Some(seed) = cli.seed {
            reports.push(mutation_probe(s, &env, cli.cutoff, seed));
        }
    }
    render(cli, reports)
}

fn degenerate(cli: &Cli, compare: bool, against: Option<&Path>) -> Result<Output> {
    let name = match cli.suite.as_slice() {
        [] => "theorem3",
        [one] => one.as_str(),
        _ => return Err(Error::Invalid("degenerate takes a single --suite".into())),
    };
    let trig = builtin_suite(name)?;
    let reference = match (compare, against) {
        (false, _) => None,
        (true, Some(p)) => Some(load_suite(p)?),
        (true, None) if name == "theorem3" => Some(theorem4()?),
        (true, None) => {
            return Err(Error::Invalid(format!(
                "no built-in rational counterpart of {name}; pass --against FILE"
            )))
        }
    };
    let d = degenerate_suite(&trig)?;
    let reports = reference.map(|t| compare_suites(&d, &t)).unwrap_or_default();
    let code = exit_code(&reports) as u8;
    let text = match cli.format {
        Format::Text => {
            let mut t = d.to_string();
            if compare {
                t.push('\n');
                t.push_str(&render_text(&reports));
            }
            t
        }
        Format::Json => {
            let v = serde_json::json!({ "suite": d.to_string(), "reports": reports });
            serde_json::to_string_pretty(&v)? + "\n"
        }
    };
    Ok(Output { text, code })
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::VerifyR => {
            let (r, builtin) = load_r(cli)?;
            render(cli, qaffine::rmatrix::verify_all(&r, builtin))
        }
        Command::VerifyRll => {
            let (r, _) = load_r(cli)?;
            let mut reports = qaffine::rs::verify_all(&r, cli.cutoff);
            reports.push(verify_component_random::<Q>(cli.seed.unwrap_or(0), COMPONENT_SAMPLES));
            render(cli, reports)
        }
        Command::VerifyGauss => {
            let (r, _) = load_r(cli)?;
            let window = (-cli.cutoff, cli.cutoff);
            let mut reports = Vec::new();
            for sign in [Sign::Plus, Sign::Minus] {
                reports.extend(verify_gauss(&build_l(sign, &r, window)?)?);
            }
            render(cli, reports)
        }
        Command::VerifySuites { files } => verify_suites(cli, files),
        Command::Degenerate { compare, against } => degenerate(cli, *compare, against.as_deref()),
        Command::GaussPrint => {
            let (r, _) = load_r(cli)?;
            let window = (-cli.cutoff, cli.cutoff);
            let gs = [Sign::Plus, Sign::Minus]
                .iter()
                .map(|s| gauss_decompose(&build_l(*s, &r, window)?))
                .collect::<Result<Vec<_>>>()?;
            Ok(Output {
                text: serde_json::to_string_pretty(&leading_coefficients(&gs))? + "\n",
                code: 0,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
