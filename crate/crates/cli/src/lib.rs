//! Command-line front end for `localrat`.
//!
//! Exit codes: 0 on success, 1 when a checked property fails, 2 on usage or
//! input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use localrat::axioms::{check_axiom, implication_witnesses, AxiomId, Verdict};
use localrat::harness::{
    parse_choice_table, parse_margins, parse_profile, serialize_choice_table, verify_claim, Mode,
    Sweep, CLAIMS,
};
use localrat::majority::{evaluate_rule, MarginMatrix, Profile, RuleId, TieBreakOrder};
use localrat::rationalization::{
    gamma_core, gamma_hull, hull_oracle, local_rat_class, standard_rat_class, CoreVariant,
    PathReading,
};
use localrat::ChoiceTable;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "localrat",
    version,
    about = "Local rationalizability of choice functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Winners of a voting rule on a feasible set.
    Winners(WinnersArgs),
    /// Check every axiom on a choice table.
    Axioms {
        #[arg(long)]
        table: PathBuf,
        /// Exit with status 1 if this axiom fails (repeatable).
        #[arg(long = "require", value_name = "AXIOM")]
        require: Vec<AxiomId>,
    },
    /// Strongest local and standard rationalizability classes.
    Rational {
        #[arg(long)]
        table: PathBuf,
    },
    /// Local revealed preference on one feasible set.
    Lrp {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, value_name = "LABELS")]
        set: String,
    },
    /// Gamma-hull of a choice table.
    Hull {
        #[arg(long)]
        table: PathBuf,
        /// Compute by fixpoint repair instead of local revealed preference.
        #[arg(long)]
        oracle: bool,
    },
    /// Weak or strict gamma-core of a choice table.
    Core {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// Read witness paths as covering walks rather than simple paths.
        #[arg(long)]
        walk: bool,
    },
    /// Implications between expansion axioms and converse witnesses.
    Implications {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Run a registered claim over a population.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["profile", "margins"]))]
struct WinnersArgs {
    #[arg(long)]
    rule: RuleId,
    #[arg(long)]
    profile: Option<PathBuf>,
    #[arg(long)]
    margins: Option<PathBuf>,
    /// Comma-separated labels; defaults to every alternative.
    #[arg(long, value_name = "LABELS")]
    feasible: Option<String>,
    /// Strict order such as `a>b>c`.
    #[arg(long, value_name = "ORDER")]
    tiebreak: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, required_unless_present = "list")]
    claim: Option<String>,
    #[arg(long, required_unless_present = "list")]
    n: Option<usize>,
    #[arg(long, conflicts_with_all = ["samples", "seed"])]
    exhaustive: bool,
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// List registered claims.
    #[arg(long)]
    list: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Weak,
    Strict,
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
    }
}

type Outcome = Result<i32, String>;

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_table(path: &Path) -> Result<ChoiceTable, String> {
    parse_choice_table(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), String> {
    out.write_all(text.as_bytes()).map_err(|e| e.to_string())
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Winners(args) => winners(args, out),
        Command::Axioms { table, require } => {
            let c = load_table(&table)?;
            let mut code = EXIT_OK;
            let mut text = String::new();
            for id in AxiomId::ALL {
                match check_axiom(&c, id) {
                    Verdict::Holds => text.push_str(&format!("{id}: PASS\n")),
                    Verdict::Fails(w) => {
                        text.push_str(&format!("{id}: FAIL ({})\n", w.display(c.universe())));
                        if require.contains(&id) {
                            code = EXIT_FAILED;
                        }
                    }
                }
            }
            emit(out, &text)?;
            Ok(code)
        }
        Command::Rational { table } => {
            let c = load_table(&table)?;
            let local = local_rat_class(&c).map_err(|e| e.to_string())?;
            let standard = standard_rat_class(&c).map_err(|e| e.to_string())?;
            emit(out, &format!("local: {local}\nstandard: {standard}\n"))?;
            Ok(EXIT_OK)
        }
        Command::Lrp { table, set } => {
            let c = load_table(&table)?;
            let a = c.universe().parse_set(&set).map_err(|e| e.to_string())?;
            let fam = c.local_revealed_preference();
            emit(out, &fam.get(a).fmt_with(c.universe()).to_string())?;
            Ok(EXIT_OK)
        }
        Command::Hull { table, oracle } => {
            let c = load_table(&table)?;
            let h = if oracle {
                hull_oracle(&c)
            } else {
                gamma_hull(&c)
            };
            emit(out, &serialize_choice_table(&h))?;
            Ok(EXIT_OK)
        }
        Command::Core {
            table,
            variant,
            walk,
        } => {
            let c = load_table(&table)?;
            let variant = match variant {
                VariantArg::Weak => CoreVariant::Weak,
                VariantArg::Strict => CoreVariant::Strict,
            };
            let reading = if walk {
                PathReading::Walk
            } else {
                PathReading::Simple
            };
            let (core, _) = gamma_core(&c, variant, reading).map_err(|e| e.to_string())?;
            emit(out, &serialize_choice_table(&core))?;
            Ok(EXIT_OK)
        }
        Command::Implications { n } => implications(n, out),
        Command::Verify(args) => verify(args, out, err),
    }
}

fn winners(args: WinnersArgs, out: &mut dyn Write) -> Outcome {
    let (margins, profile): (MarginMatrix, Option<Profile>) = match (&args.profile, &args.margins) {
        (Some(path), _) => {
            let p = parse_profile(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
            (p.margins(), Some(p))
        }
        (None, Some(path)) => (
            parse_margins(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?,
            None,
        ),
        (None, None) => unreachable!("clap requires an input"),
    };
    let u = margins.universe().clone();
    let feasible = match &args.feasible {
        Some(text) => u.parse_set(text).map_err(|e| e.to_string())?,
        None => u.full(),
    };
    let tie = match &args.tiebreak {
        Some(text) => {
            let order = text
                .split('>')
                .map(|l| u.alternative(l.trim()))
                .collect::<Result<Vec<usize>, _>>()
                .map_err(|e| e.to_string())?;
            Some(TieBreakOrder::new(u.len(), order).map_err(|e| e.to_string())?)
        }
        None => None,
    };
    let winners = evaluate_rule(
        args.rule,
        &margins,
        feasible,
        tie.as_ref(),
        profile.as_ref(),
    )
    .map_err(|e| e.to_string())?;
    emit(out, &format!("{}\n", u.format_members(winners)))?;
    Ok(EXIT_OK)
}

fn implications(n: usize, out: &mut dyn Write) -> Outcome {
    let report = implication_witnesses(n).map_err(|e| e.to_string())?;
    let names = |ids: &[AxiomId]| ids.iter().map(|a| a.name()).collect::<Vec<_>>().join(" & ");
    let mut text = format!("population: {}\n", report.population);
    for check in &report.forward {
        let status = if check.counterexample.is_none() {
            "PASS"
        } else {
            "FAIL"
        };
        text.push_str(&format!(
            "{} => {}: {status} ({} tables)\n",
            names(check.premise),
            names(check.conclusion),
            check.checked
        ));
    }
    for w in &report.converses {
        let head = format!("{} =/=> {}", names(w.premise), names(w.conclusion));
        match &w.table {
            Some(t) => text.push_str(&format!("{head}: witness\n{}", serialize_choice_table(t))),
            None => text.push_str(&format!("{head}: no witness found\n")),
        }
    }
    emit(out, &text)?;
    let ok = report.forward_holds() && report.all_converses_witnessed();
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn verify(args: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    if args.list {
        let mut text = String::new();
        for c in CLAIMS {
            text.push_str(&format!("{:<16} {}\n", c.id, c.summary));
        }
        emit(out, &text)?;
        return Ok(EXIT_OK);
    }
    let (Some(claim), Some(n)) = (args.claim, args.n) else {
        return Err("--claim and --n are required".into());
    };
    let sweep = Sweep {
        n,
        mode: if args.exhaustive {
            Mode::Exhaustive
        } else {
            Mode::Sample
        },
        samples: args.samples,
        seed: args.seed,
        workers: args.workers,
    };
    let report = verify_claim(&claim, sweep).map_err(|e| e.to_string())?;
    emit(out, &report.to_string())?;
    let _ = writeln!(err, "elapsed: {:.3}s", report.elapsed.as_secs_f64());
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}
