//! Command-line front end. `run` returns the exit code and both output
//! streams so that it can be tested without spawning a process.
//!
//! Exit codes: 0 success (accepted, derivable, countermodel found, sound,
//! property holds), 1 negative result, 2 usage or input error.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::audit::{audit_targets, default_targets, translation_collapse_check, AuditConfig, AuditTarget, ContextRegime};
use crate::calculus::check_derivation;
use crate::metacalculus::{check_meta_derivation, CoordinationMode};
use crate::search::{check_disjunction_property, check_dual_conjunction_property, prove, SearchBudget};
use crate::semantics::{find_countermodel, KripkeModel, ModelClass, Reading, MAX_WORLDS};
use crate::sexp::{parse_script, print_proof_script, Script};
use crate::syntax::{parse_sequent, AtomSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Asymmetric,
    Unified,
    Independent,
}

impl From<ModeArg> for CoordinationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Asymmetric => CoordinationMode::AsymmetricDefault,
            ModeArg::Unified => CoordinationMode::UnifiedConstructions,
            ModeArg::Independent => CoordinationMode::IndependentConstructions,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Nonexclusive,
    Exclusive,
}

impl From<ClassArg> for ModelClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Nonexclusive => ModelClass::NonExclusive,
            ClassArg::Exclusive => ModelClass::Exclusive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReadingArg {
    R1,
    R2,
}

impl From<ReadingArg> for Reading {
    fn from(r: ReadingArg) -> Self {
        match r {
            ReadingArg::R1 => Reading::R1Absence,
            ReadingArg::R2 => Reading::R2Unified,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    Empty,
    Disjoint,
    Arbitrary,
}

impl From<RegimeArg> for ContextRegime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Empty => ContextRegime::Empty,
            RegimeArg::Disjoint => ContextRegime::Disjoint,
            RegimeArg::Arbitrary => ContextRegime::Arbitrary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "bilateral", version, about = "Bilateral sequent calculus: checker, prover, countermodels and rule audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a proof script (base or meta level).
    Check {
        file: PathBuf,
        /// Coordination rules available to meta scripts.
        #[arg(long, value_enum, default_value = "asymmetric")]
        mode: ModeArg,
        /// Allow meta variants with double-lined premises and a single-lined conclusion.
        #[arg(long)]
        include_zeta: bool,
    },
    /// Search for a derivation of a sequent.
    Prove {
        sequent: String,
        #[arg(long, alias = "depth", default_value_t = 8)]
        budget: usize,
    },
    /// Search for a Kripke countermodel, or evaluate the sequent in a given model.
    Countermodel {
        sequent: String,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        #[arg(long, value_enum, default_value = "nonexclusive")]
        class: ClassArg,
        /// Extra atoms for the valuation, comma separated.
        #[arg(long, value_delimiter = ',')]
        atoms: Vec<String>,
        /// Evaluate in this model (JSON) instead of searching.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Audit rule soundness over bounded model classes.
    Audit {
        #[arg(long, value_enum, value_delimiter = ',', default_value = "r1")]
        reading: Vec<ReadingArg>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "nonexclusive")]
        class: Vec<ClassArg>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "empty")]
        regime: Vec<RegimeArg>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "asymmetric")]
        mode: Vec<ModeArg>,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        #[arg(long, default_value_t = 2)]
        max_depth: usize,
        #[arg(long, value_delimiter = ',', default_value = "p,q")]
        atoms: Vec<String>,
        /// Budget for derivations backing meta-level witnesses.
        #[arg(long, default_value_t = 6)]
        budget: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        /// Only audit these rule ids.
        #[arg(long, value_delimiter = ',')]
        rule: Vec<String>,
    },
    /// Check the disjunction and dual conjunction properties.
    Props {
        #[arg(long, value_delimiter = ',', default_value = "p,q")]
        atoms: Vec<String>,
        #[arg(long, default_value_t = 2)]
        max_depth: usize,
        #[arg(long, default_value_t = 6)]
        budget: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Output {
        Output { code: 0, stdout, stderr: String::new() }
    }

    fn negative(stdout: String) -> Output {
        Output { code: 1, stdout, stderr: String::new() }
    }

    fn error(message: impl std::fmt::Display) -> Output {
        Output { code: 2, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

fn atom_set_of(names: &[String]) -> Result<AtomSet, String> {
    let set: AtomSet = names.iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    match set.iter().find(|a| !a.chars().next().is_some_and(|c| c.is_ascii_lowercase()) || !a.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')) {
        Some(bad) => Err(format!("`{bad}` is not an atom name")),
        None => Ok(set),
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code: 2, stdout: String::new(), stderr: text }
            } else {
                Output::ok(text)
            };
        }
    };
    match cli.command {
        Command::Check { file, mode, include_zeta } => check(&file, mode.into(), include_zeta),
        Command::Prove { sequent, budget } => prove_cmd(&sequent, budget),
        Command::Countermodel { sequent, max_worlds, class, atoms, model } => {
            countermodel(&sequent, max_worlds, class.into(), &atoms, model.as_ref())
        }
        Command::Audit { reading, class, regime, mode, max_worlds, max_depth, atoms, budget, format, rule } => {
            let atoms = match atom_set_of(&atoms) {
                Ok(a) => a,
                Err(e) => return Output::error(e),
            };
            if max_worlds == 0 || max_worlds > 4 {
                return Output::error("--max-worlds must be between 1 and 4");
            }
            if max_depth > 3 {
                return Output::error("--max-depth must be at most 3");
            }
            let mut configs = Vec::new();
            for &r in &reading {
                for &c in &class {
                    for &g in &regime {
                        for &m in &mode {
                            configs.push(AuditConfig {
                                reading: r.into(),
                                model_class: c.into(),
                                context_regime: g.into(),
                                max_worlds,
                                atoms: atoms.clone(),
                                max_formula_depth: max_depth,
                                mode: m.into(),
                                search_budget: budget,
                            });
                        }
                    }
                }
            }
            audit(&configs, &rule, format)
        }
        Command::Props { atoms, max_depth, budget } => {
            let atoms = match atom_set_of(&atoms) {
                Ok(a) => a,
                Err(e) => return Output::error(e),
            };
            let budget = SearchBudget::new(budget);
            let reports = [
                check_disjunction_property(&atoms, max_depth, budget),
                check_dual_conjunction_property(&atoms, max_depth, budget),
            ];
            let text = reports.iter().map(|r| format!("{r}\n")).collect::<String>();
            if reports.iter().all(|r| r.passed()) {
                Output::ok(text)
            } else {
                Output::negative(text)
            }
        }
    }
}

fn check(file: &PathBuf, mode: CoordinationMode, include_zeta: bool) -> Output {
    let text = match read(file) {
        Ok(t) => t,
        Err(e) => return Output::error(e),
    };
    let verdict = match parse_script(&text) {
        Ok(Script::Base(tree)) => check_derivation(&tree),
        Ok(Script::Meta(tree)) => check_meta_derivation(&tree, mode, include_zeta),
        Err(e) => return Output::error(format!("{}: {e}", file.display())),
    };
    if verdict.is_accepted() {
        Output::ok(format!("{verdict}\n"))
    } else {
        Output::negative(format!("{verdict}\n"))
    }
}

fn prove_cmd(sequent: &str, budget: usize) -> Output {
    let s = match parse_sequent(sequent) {
        Ok(s) => s,
        Err(e) => return Output::error(e),
    };
    match prove(&s, SearchBudget::new(budget)) {
        Some(tree) => Output::ok(format!("{}\n", print_proof_script(&tree))),
        None => Output::negative(format!("no derivation of `{s}` within budget {budget}\n")),
    }
}

fn countermodel(sequent: &str, max_worlds: usize, class: ModelClass, atoms: &[String], model: Option<&PathBuf>) -> Output {
    let s = match parse_sequent(sequent) {
        Ok(s) => s,
        Err(e) => return Output::error(e),
    };
    if let Some(path) = model {
        let m = match read(path).and_then(|t| KripkeModel::from_json(&t).map_err(|e| e.to_string())) {
            Ok(m) => m,
            Err(e) => return Output::error(e),
        };
        let failing = m.failing_worlds(&s);
        return if failing == 0 {
            Output::negative(format!("`{s}` holds at every world of the model\n"))
        } else {
            let worlds: Vec<&str> =
                m.worlds().filter(|w| failing & (1 << w.0) != 0).map(|w| m.world_name(w)).collect();
            Output::ok(format!("`{s}` fails at: {}\n", worlds.join(", ")))
        };
    }
    if max_worlds == 0 || max_worlds > MAX_WORLDS.min(4) {
        return Output::error("--max-worlds must be between 1 and 4");
    }
    let atoms = match atom_set_of(atoms) {
        Ok(a) => a,
        Err(e) => return Output::error(e),
    };
    match find_countermodel(&s, max_worlds, &atoms, class) {
        Some((m, w)) => {
            let mut out = format!("`{s}` fails at {}\n", m.world_name(w));
            let _ = writeln!(out, "{m}{}", m.to_json());
            Output::ok(out)
        }
        None => Output::negative(format!("no {class} countermodel to `{s}` with at most {max_worlds} worlds\n")),
    }
}

fn audit(configs: &[AuditConfig], only: &[String], format: FormatArg) -> Output {
    let mut targets = default_targets();
    if !only.is_empty() {
        if let Some(bad) = only.iter().find(|id| !targets.iter().any(|t| t.id() == id.as_str())) {
            return Output::error(format!("unknown rule `{bad}`"));
        }
        targets.retain(|t: &AuditTarget| only.iter().any(|id| id == t.id()));
    }
    let report = audit_targets(&targets, configs);
    let mut out = match format {
        FormatArg::Json => report.to_json(),
        FormatArg::Text => report.to_text(),
    };
    if format == FormatArg::Text && configs.iter().any(|c| c.reading == Reading::R2Unified) {
        let collapse = translation_collapse_check(&report);
        let _ = write!(out, "translation check: {}/{} meta rows agree with their base translation", collapse.agreeing, collapse.checked);
        for d in &collapse.disagreements {
            let _ = write!(out, "\n  disagrees: {d}");
        }
        out.push('\n');
    }
    if !out.ends_with('\n') {
        out.push('\n');
    }
    Output::ok(out)
}
