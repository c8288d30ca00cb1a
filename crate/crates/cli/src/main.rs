//! `gkat`: decide equivalence of (G)KAT programs from the command line.
//!
//! Exit status: 0 equivalent (or inclusion holds, or all laws pass),
//! 1 inequivalent (or a law failed), 2 usage or parse error, 3 resource limit.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gkat::automata::{build_kat, dfa_to_dot, from_json, to_dot, to_json};
use gkat::equivalence::{check_programs, explain, verdict_json};
use gkat::error::HARD_MAX_TESTS;
use gkat::laws::{
    all_laws, catalogue_json, check_law, find_law, list_laws, Family, LawCheckConfig,
};
use gkat::semantics::{lang_bounded, rel_sem, rel_sem_gkat};
use gkat::{build_gkat, parse_gkat_in, parse_kat_in, Error, Interpretation, Limits, Mode};
use gkat::{Program, Universe};

#[derive(Parser)]
#[command(
    name = "gkat",
    version,
    about = "Decide equivalence of (G)KAT programs"
)]
struct Cli {
    /// Largest number of primitive tests accepted (the atom universe has 2^n members).
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u8).range(0..=HARD_MAX_TESTS as i64))]
    max_tests: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check two program files for equivalence.
    Check {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Lang)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Compare through the KAT embedding; required to mix .gkat and .kat files.
        #[arg(long)]
        via_embedding: bool,
    },
    /// Print the automaton of a program or of a .json automaton fixture.
    Dot {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
    },
    /// List the guarded strings of a program with at most `bound` actions.
    Lang {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        bound: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a program on a finite interpretation and print its relation as JSON.
    Run {
        file: PathBuf,
        #[arg(long)]
        interp: PathBuf,
    },
    /// The catalogue of algebraic laws.
    Laws {
        #[command(subcommand)]
        command: LawsCommand,
    },
}

#[derive(Subcommand)]
enum LawsCommand {
    /// List the laws with their statements.
    List {
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check laws on random instances.
    Check {
        /// Law ids to check; all laws when omitted.
        ids: Vec<String>,
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Guarded-language equivalence.
    Lang,
    /// Bisimilarity.
    Bisim,
    /// Inclusion of the left language in the right one.
    Incl,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Lang => Mode::Lang,
            ModeArg::Bisim => Mode::Bisim,
            ModeArg::Incl => Mode::LangInclusion,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Kat,
    Gkat,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Kat => Family::Kat,
            FamilyArg::Gkat => Family::Gkat,
        }
    }
}

/// A failure that ends the run, with the exit status it maps to.
enum Failure {
    Usage(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

type Outcome = Result<ExitCode, Failure>;

const EQUIVALENT: u8 = 0;
const INEQUIVALENT: u8 = 1;
const USAGE: u8 = 2;
const RESOURCE: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = Limits::default().with_max_tests(cli.max_tests as usize);
    let result = match cli.command {
        Command::Check {
            left,
            right,
            mode,
            format,
            via_embedding,
        } => cmd_check(&left, &right, mode.into(), format, via_embedding, &limits),
        Command::Dot { file, format } => cmd_dot(&file, format, &limits),
        Command::Lang {
            file,
            bound,
            format,
        } => cmd_lang(&file, bound, format, &limits),
        Command::Run { file, interp } => cmd_run(&file, &interp),
        Command::Laws { command } => match command {
            LawsCommand::List { family, format } => cmd_laws_list(family, format),
            LawsCommand::Check {
                ids,
                family,
                samples,
                seed,
                format,
            } => cmd_laws_check(&ids, family, samples, seed, format, &limits),
        },
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(message)) => {
            eprintln!("gkat: {message}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Library(e)) => {
            eprintln!("gkat: {e}");
            ExitCode::from(if e.is_resource_limit() {
                RESOURCE
            } else {
                USAGE
            })
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Gkat,
    Kat,
    Automaton,
}

fn kind_of(path: &Path) -> Result<Kind, Failure> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("gkat") => Ok(Kind::Gkat),
        Some("kat") => Ok(Kind::Kat),
        Some("json") => Ok(Kind::Automaton),
        _ => Err(Failure::Usage(format!(
            "{}: expected a .gkat or .kat program file",
            path.display()
        ))),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Reads a program file, naming the file in parse errors.
fn load(path: &Path, universe: Option<&Universe>) -> Result<(Universe, Program), Failure> {
    let text = read(path)?;
    let located = |e: Error| -> Failure {
        match e {
            Error::Syntax { .. } | Error::UndeclaredSymbol { .. } => {
                Failure::Usage(format!("{}:{e}", path.display()))
            }
            e if e.is_resource_limit() => Failure::Library(e),
            e => Failure::Usage(format!("{}: {e}", path.display())),
        }
    };
    let (header, _) = gkat::syntax::parse_header(&text).map_err(located)?;
    let u = match universe {
        Some(u) => u.clone(),
        None => header,
    };
    let program = match kind_of(path)? {
        Kind::Gkat => Program::Gkat(parse_gkat_in(&text, &u).map_err(located)?),
        Kind::Kat => Program::Kat(parse_kat_in(&text, &u).map_err(located)?),
        Kind::Automaton => {
            return Err(Failure::Usage(format!(
                "{}: expected a .gkat or .kat program file",
                path.display()
            )))
        }
    };
    Ok((u, program))
}

fn cmd_check(
    left: &Path,
    right: &Path,
    mode: Mode,
    format: Format,
    via_embedding: bool,
    limits: &Limits,
) -> Outcome {
    let (lk, rk) = (kind_of(left)?, kind_of(right)?);
    if lk != rk && !via_embedding {
        return Err(Failure::Usage(format!(
            "cannot compare {} with {} directly; pass --via-embedding",
            left.display(),
            right.display()
        )));
    }
    let (lu, _) = load(left, None)?;
    let (ru, _) = load(right, None)?;
    let u = lu.merge(&ru)?;
    let (_, mut e) = load(left, Some(&u))?;
    let (_, mut f) = load(right, Some(&u))?;
    if via_embedding {
        e = Program::Kat(e.to_kat());
        f = Program::Kat(f.to_kat());
    }
    let (verdict, _) = check_programs(&e, &f, &u, mode, limits)?;
    match format {
        Format::Json => println!("{}", verdict_json(&verdict, mode, &u)),
        Format::Text => {
            let word = match (mode, verdict.is_equivalent()) {
                (Mode::LangInclusion, true) => "included",
                (Mode::LangInclusion, false) => "not included",
                (_, true) => "equivalent",
                (_, false) => "not equivalent",
            };
            println!("{word} ({mode})");
            if !verdict.is_equivalent() {
                println!("{}", explain(&verdict, &u)?);
            }
        }
    }
    Ok(ExitCode::from(if verdict.is_equivalent() {
        EQUIVALENT
    } else {
        INEQUIVALENT
    }))
}

fn cmd_dot(file: &Path, format: GraphFormat, limits: &Limits) -> Outcome {
    let out = match kind_of(file)? {
        Kind::Automaton => {
            let a = from_json(&read(file)?)
                .map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
            match format {
                GraphFormat::Dot => to_dot(&a),
                GraphFormat::Json => to_json(&a),
            }
        }
        Kind::Gkat => {
            let (u, program) = load(file, None)?;
            let Program::Gkat(e) = program else {
                unreachable!("a .gkat file parses to a GKAT program")
            };
            let a = build_gkat(&e, &u, limits)?;
            match format {
                GraphFormat::Dot => to_dot(&a),
                GraphFormat::Json => to_json(&a),
            }
        }
        Kind::Kat => {
            if format == GraphFormat::Json {
                return Err(Failure::Usage(
                    "JSON export needs a GKAT program or automaton; KAT automata are not GKAT-deterministic".into(),
                ));
            }
            let (u, program) = load(file, None)?;
            dfa_to_dot(&build_kat(&program.to_kat(), &u, limits)?)
        }
    };
    print!("{out}");
    if !out.ends_with('\n') {
        println!();
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_lang(file: &Path, bound: usize, format: Format, limits: &Limits) -> Outcome {
    let (u, program) = load(file, None)?;
    let lang = lang_bounded(&program.to_kat(), bound, &u, limits)?;
    let strings: Vec<String> = lang.strings.iter().map(|w| w.render(&u)).collect();
    match format {
        Format::Text => {
            for s in strings {
                println!("{s}");
            }
        }
        Format::Json => println!("{}", serde_json::Value::from(strings)),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_run(file: &Path, interp: &Path) -> Outcome {
    let (u, program) = load(file, None)?;
    let interpretation = Interpretation::from_json(&read(interp)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", interp.display())))?;
    let model = interpretation.resolve(&u)?;
    let relation = match &program {
        Program::Gkat(e) => rel_sem_gkat(e, &model)?,
        Program::Kat(e) => rel_sem(e, &model)?,
    };
    let json = interpretation.relation_json(&relation);
    println!(
        "{}",
        serde_json::to_string_pretty(&json).expect("serializable")
    );
    Ok(ExitCode::SUCCESS)
}

fn selected_laws(family: Option<FamilyArg>) -> Vec<gkat::laws::LawSchema> {
    match family {
        Some(f) => list_laws(f.into()),
        None => all_laws(),
    }
}

fn cmd_laws_list(family: Option<FamilyArg>, format: Format) -> Outcome {
    let laws = selected_laws(family);
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&catalogue_json(&laws)).expect("serializable")
        ),
        Format::Text => {
            let width = laws.iter().map(|l| l.id.len()).max().unwrap_or(0);
            for law in &laws {
                let mut flags = Vec::new();
                if !law.sound {
                    flags.push("unsound");
                }
                if !law.bisimilar && law.sound {
                    flags.push("language only");
                }
                let flags = if flags.is_empty() {
                    String::new()
                } else {
                    format!("  [{}]", flags.join(", "))
                };
                println!("{:width$}  {}{flags}", law.id, law.statement());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_laws_check(
    ids: &[String],
    family: Option<FamilyArg>,
    samples: usize,
    seed: u64,
    format: Format,
    limits: &Limits,
) -> Outcome {
    let laws = if ids.is_empty() {
        selected_laws(family)
    } else {
        ids.iter()
            .map(|id| find_law(id).ok_or_else(|| Failure::Usage(format!("unknown law `{id}`"))))
            .collect::<Result<_, _>>()?
    };
    let config = LawCheckConfig {
        samples,
        seed,
        limits: *limits,
        ..LawCheckConfig::default()
    };
    let mut all_passed = true;
    let mut reports = Vec::new();
    for law in &laws {
        let report = check_law(law, &config)?;
        all_passed &= report.passed();
        match format {
            Format::Text => {
                let status = if report.passed() { "PASS" } else { "FAIL" };
                let detail = if report.sound && law.premises.is_empty() {
                    format!(
                        "{} samples, {} failures",
                        report.samples,
                        report.failures.len()
                    )
                } else if report.sound {
                    format!(
                        "{} samples, {} satisfied the premises, {} constructed, {} failures",
                        report.samples,
                        report.premise_held,
                        report.constructed,
                        report.failures.len()
                    )
                } else if report.refutation.is_some() {
                    "refuted as expected".to_string()
                } else {
                    "no refutation found".to_string()
                };
                println!("{status} {}: {detail}", report.id);
                for failure in report.failures.iter().chain(&report.refutation) {
                    println!(
                        "  sample {} ({}): {} vs {}",
                        failure.sample, failure.mode, failure.lhs, failure.rhs
                    );
                    for line in failure.explanation.lines() {
                        println!("    {line}");
                    }
                }
            }
            Format::Json => {
                let failure_json = |f: &gkat::laws::LawFailure| {
                    serde_json::json!({
                        "sample": f.sample,
                        "mode": f.mode.name(),
                        "lhs": f.lhs,
                        "rhs": f.rhs,
                        "explanation": f.explanation,
                    })
                };
                reports.push(serde_json::json!({
                    "id": report.id,
                    "sound": report.sound,
                    "passed": report.passed(),
                    "samples": report.samples,
                    "premiseHeld": report.premise_held,
                    "constructed": report.constructed,
                    "failures": report.failures.iter().map(failure_json).collect::<Vec<_>>(),
                    "refutation": report.refutation.as_ref().map(failure_json),
                }));
            }
        }
    }
    if format == Format::Json {
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::Value::from(reports)).expect("serializable")
        );
    }
    Ok(ExitCode::from(if all_passed {
        EQUIVALENT
    } else {
        INEQUIVALENT
    }))
}
