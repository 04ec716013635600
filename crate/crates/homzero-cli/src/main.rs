//! Command-line front end: validate tables, test categoricity, compute
//! 0-homology and bar homology, run the presentation pipeline, and decide
//! reflector-sequence equivalence.
//!
//! Exit codes: 0 success, 1 invalid input or failed hypothesis, 2 undecided
//! within the search budget, 3 usage error. `HOMZERO_BUDGET` overrides the
//! default search budgets.

mod input;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use homzero::abelian::homology_of_complex;
use homzero::homology::{bar_homology_capped, zero_chain_complex, DEFAULT_BASIS_CAP};
use homzero::pipeline::{run_pipeline, PipelineError, PipelineRoute, VerifiedFact};
use homzero::presentation::{PresentationError, RewriteBounds};
use homzero::reflector::{sequences_equivalent, ReflectorElement, SearchBounds, SequenceVerdict};
use homzero::semigroup::FiniteZeroSemigroup;

use input::digest;
use report::Report;

#[derive(Debug)]
pub enum CliError {
    /// Invalid input or a failed hypothesis: exit 1.
    Invalid(String),
    /// The search budget ran out before a verdict: exit 2.
    Undecided(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Undecided(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Undecided(m) => m,
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match &e {
            PipelineError::Presentation(PresentationError::Undecided { .. }) => {
                CliError::Undecided(e.to_string())
            }
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "homzero",
    version,
    about = "0-homology of finite semigroups with zero, and homology of finitely presented semigroups through finite models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Route {
    /// Quotient by the ideal of non-divisors.
    Ideal,
    /// Zero pairs on the complement of the relation graph.
    Graph,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a semigroup-with-zero table
    Validate {
        /// Semigroup file (JSON: names, table)
        semigroup: PathBuf,
    },
    /// Decide categoricity at zero of a table
    Cat0 {
        semigroup: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// 0-homology groups of a finite semigroup with zero
    H0 {
        semigroup: PathBuf,
        /// Module file (JSON: rank, moduli, actions keyed by element name)
        module: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
        #[arg(long)]
        json: bool,
    },
    /// Bar-complex homology of a plain finite semigroup
    Bar {
        semigroup: PathBuf,
        /// Module file (actions keyed by element name, all elements act)
        module: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
        #[arg(long)]
        json: bool,
    },
    /// Homology of a finitely presented semigroup through a finite
    /// categorical-at-zero model
    Pipeline {
        /// Presentation file (text format)
        presentation: PathBuf,
        /// Module file (actions keyed by generator name)
        module: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
        #[arg(long, value_enum, default_value_t = Route::Ideal)]
        via: Route,
        #[arg(long)]
        json: bool,
    },
    /// Reflector-sequence operations: currently `eq seq1 seq2`
    Reflector {
        semigroup: PathBuf,
        /// Operation: eq
        op: String,
        /// First sequence, element names joined by dots
        seq1: String,
        /// Second sequence
        seq2: String,
        #[arg(long)]
        budget: Option<usize>,
    },
}

fn env_budget() -> Option<usize> {
    std::env::var("HOMZERO_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
}

fn print_report(report: &Report, json: bool) {
    if json {
        println!("{}", report.render_json());
    } else {
        print!("{}", report.render_text());
    }
}

fn parse_sequence(
    s: &Arc<FiniteZeroSemigroup>,
    spelled: &str,
) -> Result<ReflectorElement, CliError> {
    let indices = spelled
        .split('.')
        .map(|name| {
            (0..s.size())
                .find(|&i| s.name(i) == name.trim())
                .ok_or_else(|| CliError::Invalid(format!("unknown element '{name}'")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ReflectorElement::new(Arc::clone(s), indices).map_err(|e| CliError::Invalid(e.to_string()))
}

fn cmd_validate(path: &Path) -> Result<(), CliError> {
    let s = input::load_zero_semigroup(path)?;
    println!(
        "valid semigroup with zero: {} elements, categorical at zero: {}",
        s.size(),
        if s.is_categorical_at_zero() {
            "yes"
        } else {
            "no"
        }
    );
    Ok(())
}

fn cmd_cat0(path: &Path, json: bool) -> Result<(), CliError> {
    let text = input::read_to_string(path)?;
    let s = input::load_zero_semigroup(path)?;
    let mut report = Report::new("cat0", digest(&[&text]));
    match s.categoricity_witness() {
        None => {
            report
                .verdicts
                .insert("categorical-at-zero".into(), "yes".into());
        }
        Some((x, y, z)) => {
            report
                .verdicts
                .insert("categorical-at-zero".into(), "no".into());
            report.verdicts.insert(
                "witness".into(),
                format!("({}, {}, {})", s.name(x), s.name(y), s.name(z)),
            );
        }
    }
    print_report(&report, json);
    Ok(())
}

fn cmd_h0(semigroup: &Path, module: &Path, max_dim: usize, json: bool) -> Result<(), CliError> {
    let s_text = input::read_to_string(semigroup)?;
    let m_text = input::read_to_string(module)?;
    let s = Arc::new(input::load_zero_semigroup(semigroup)?);
    let module_file = input::load_module_file(module)?;
    let action = input::module_over_zero_semigroup(&module_file, &s)?;

    let complex = zero_chain_complex(&s, &action, max_dim + 1)
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let mut report = Report::new("h0", digest(&[&s_text, &m_text]));
    for n in 0..=max_dim {
        let h = homology_of_complex(&complex, n).map_err(|e| CliError::Invalid(e.to_string()))?;
        report.groups.insert(n, h.to_string());
    }
    report.verdicts.insert(
        "categorical-at-zero".into(),
        if s.is_categorical_at_zero() {
            "yes"
        } else {
            "no"
        }
        .into(),
    );
    if let Some(k) = s.nilpotency_degree() {
        report
            .verdicts
            .insert("nilpotency-degree".into(), k.to_string());
    }
    print_report(&report, json);
    Ok(())
}

fn cmd_bar(semigroup: &Path, module: &Path, max_dim: usize, json: bool) -> Result<(), CliError> {
    let s_text = input::read_to_string(semigroup)?;
    let m_text = input::read_to_string(module)?;
    let s = Arc::new(input::load_plain_semigroup(semigroup)?);
    let module_file = input::load_module_file(module)?;
    let action = input::module_over_plain_semigroup(&module_file, &s)?;

    let mut report = Report::new("bar", digest(&[&s_text, &m_text]));
    for n in 0..=max_dim {
        let h = bar_homology_capped(&action, n, DEFAULT_BASIS_CAP)
            .map_err(|e| CliError::Invalid(e.to_string()))?;
        report.groups.insert(n, h.to_string());
    }
    print_report(&report, json);
    Ok(())
}

fn cmd_pipeline(
    presentation: &Path,
    module: &Path,
    max_dim: usize,
    via: Route,
    json: bool,
) -> Result<(), CliError> {
    let p_text = input::read_to_string(presentation)?;
    let m_text = input::read_to_string(module)?;
    let p = input::load_presentation(presentation)?;
    if !p.zero_pairs().is_empty() {
        return Err(CliError::Invalid(
            "pipeline expects a presentation without zero pairs; the chosen route derives them"
                .into(),
        ));
    }
    let module_file = input::load_module_file(module)?;
    let actions = input::module_over_generators(&module_file, &p)?;
    let route = match via {
        Route::Ideal => PipelineRoute::Ideal,
        Route::Graph => PipelineRoute::Graph,
    };
    let mut bounds = RewriteBounds::for_presentation(&p);
    if let Some(budget) = env_budget() {
        bounds = bounds.with_budget(budget);
    }

    let outcome = run_pipeline(&p, &actions, route, max_dim, &bounds)?;

    let mut report = Report::new("pipeline", digest(&[&p_text, &m_text]));
    report
        .verdicts
        .insert("route".into(), outcome.route.to_string());
    report.verdicts.insert(
        "model-size".into(),
        outcome.model.semigroup.size().to_string(),
    );
    for fact in &outcome.verified {
        let (key, value) = match fact {
            VerifiedFact::IdealHypotheses => ("ideal-hypotheses", "verified".to_string()),
            VerifiedFact::EntranceExit => ("entrance-exit", "verified".to_string()),
            VerifiedFact::LongestPath { length } => ("longest-path", length.to_string()),
            VerifiedFact::CategoricalAtZero => ("categorical-at-zero", "verified".to_string()),
            VerifiedFact::ModuleRelationsConsistent => ("module-relations", "verified".to_string()),
            VerifiedFact::VanishingAbove { degree } => {
                ("vanishing-above-degree", degree.to_string())
            }
        };
        report.verdicts.insert(key.into(), value);
    }
    for (n, h) in outcome.groups.iter().enumerate() {
        report.groups.insert(n, h.to_string());
    }
    if (2..=max_dim).all(|n| outcome.groups[n].is_trivial()) && max_dim >= 2 {
        report.warnings.push(format!(
            "all groups in dimensions 2..={max_dim} vanish; dimensions above {max_dim} were not computed"
        ));
    }
    print_report(&report, json);
    Ok(())
}

fn cmd_reflector(
    semigroup: &Path,
    op: &str,
    seq1: &str,
    seq2: &str,
    budget: Option<usize>,
) -> Result<SequenceVerdict, CliError> {
    if op != "eq" {
        return Err(CliError::Invalid(format!(
            "unknown reflector operation '{op}', expected 'eq'"
        )));
    }
    let s = Arc::new(input::load_zero_semigroup(semigroup)?);
    let x = parse_sequence(&s, seq1)?;
    let y = parse_sequence(&s, seq2)?;
    let mut bounds = SearchBounds::default();
    if let Some(b) = budget.or_else(env_budget) {
        bounds.budget = b;
    }
    let verdict =
        sequences_equivalent(&x, &y, bounds).map_err(|e| CliError::Invalid(e.to_string()))?;
    println!(
        "{}",
        match verdict {
            SequenceVerdict::Equivalent => "equal",
            SequenceVerdict::Distinct => "distinct",
            SequenceVerdict::Unknown => "unknown",
        }
    );
    Ok(verdict)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Validate { semigroup } => cmd_validate(semigroup),
        Command::Cat0 { semigroup, json } => cmd_cat0(semigroup, *json),
        Command::H0 {
            semigroup,
            module,
            max_dim,
            json,
        } => cmd_h0(semigroup, module, *max_dim, *json),
        Command::Bar {
            semigroup,
            module,
            max_dim,
            json,
        } => cmd_bar(semigroup, module, *max_dim, *json),
        Command::Pipeline {
            presentation,
            module,
            max_dim,
            via,
            json,
        } => cmd_pipeline(presentation, module, *max_dim, *via, *json),
        Command::Reflector {
            semigroup,
            op,
            seq1,
            seq2,
            budget,
        } => match cmd_reflector(semigroup, op, seq1, seq2, *budget)? {
            SequenceVerdict::Unknown => Err(CliError::Undecided(
                "sequence equivalence unknown within budget".into(),
            )),
            _ => Ok(()),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version through the error path with success
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(3);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
