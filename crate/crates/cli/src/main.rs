//! `bes`: command-line workbench for ecumenical base-extension semantics.
//!
//! Exit codes: 0 when the verdict is true (or the command simply succeeds),
//! 1 when the verdict is false or refuted (a witness is reported), 2 on
//! usage, parse, or configuration errors. Reports are plain structured
//! text and byte-identical for identical inputs and flags; every semantic
//! verdict carries a provenance line saying whether it is exact
//! (prover-backed) or relative to the finite universe named in the report.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};

use bes_core::base::{
    bot_complete, check_derivation, derive_witness, derives, is_consistent, parse_base,
    parse_derivation, render_base, render_derivation, Base,
};
use bes_core::formula::{Basic, Formula};
use bes_core::prover::{check_nd, decide_strong, parse_proof, render_proof};
use bes_core::semantics::{Evaluator, Judgement, JudgementKind};
use bes_core::simulation::{
    build_n, completeness_roundtrip_with, consistency_of_n, gamma_star, make_alpha, Strategy,
};
use bes_core::suite::theorem_suite;
use bes_core::universe::{Universe, UniverseConfig};

const EXIT_TRUE: u8 = 0;
const EXIT_REFUTED: u8 = 1;

const PROVENANCE_EXACT: &str = "provenance: exact-via-prover";
const PROVENANCE_UNIVERSE: &str =
    "provenance: universe-relative (the verdict quantifies over this universe's bases only)";

#[derive(Parser)]
#[command(
    name = "bes",
    version,
    about = "Workbench for ecumenical base-extension semantics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and report its shape.
    Parse {
        /// Formula; `A <-> B` is top-level sugar for (A -> B) & (B -> A).
        formula: String,
    },
    /// Decide atomic derivability in a base file.
    Derive {
        #[arg(long, value_name = "FILE")]
        base: PathBuf,
        /// Comma-separated basic sentences taken as open assumptions.
        #[arg(long, value_name = "BASICS", default_value = "")]
        context: String,
        /// Basic sentence to derive (an atom or `bot`).
        goal: String,
    },
    /// Parse a base file and check its consistency.
    CheckBase {
        #[arg(long, value_name = "FILE")]
        base: PathBuf,
    },
    /// Extend a consistent base until every vocab atom is derivable or refutable.
    BotComplete {
        #[arg(long, value_name = "FILE")]
        base: PathBuf,
        /// Comma-separated atoms to settle; defaults to the atoms of the base.
        #[arg(long, value_name = "ATOMS")]
        vocab: Option<String>,
    },
    /// Decide a sequent or formula under the strong or weak readings.
    Decide {
        /// strong = prover-backed entailment; local/global = weak validity
        /// over a finite universe.
        #[arg(long, value_enum, default_value_t = DecideKind::Strong)]
        kind: DecideKind,
        /// Universe config, e.g. "vocab=p,q;max_premises=1;max_discharge=1;pool_cap=16".
        /// Weak kinds default to: vocab = atoms of the judgement (and of any
        /// --base file), max_premises=1, max_discharge=1.
        #[arg(long, value_name = "CFG")]
        universe: Option<String>,
        /// Judge at this base (its rules join the universe pool) instead of
        /// across all bases. Weak kinds only.
        #[arg(long, value_name = "FILE")]
        base: Option<PathBuf>,
        /// Print the evaluation trace of the decisive judgement.
        #[arg(long)]
        trace: bool,
        #[arg(long, hide = true)]
        or_global: bool,
        /// "A, B |- C" or a bare formula; `<->` expands both ways.
        sequent: String,
    },
    /// Check a natural-deduction proof file (or an atomic derivation with --base).
    CheckProof {
        #[arg(long, value_name = "FILE")]
        proof: PathBuf,
        /// Treat the file as an atomic derivation over this base.
        #[arg(long, value_name = "FILE")]
        base: Option<PathBuf>,
    },
    /// Build a universe, report its pool and bases, and cross-check invariants.
    UniverseCheck {
        /// Universe config; defaults to "vocab=p,q;max_premises=1;max_discharge=1".
        #[arg(long, value_name = "CFG")]
        universe: Option<String>,
    },
    /// Search a universe for a base refuting a judgement.
    Counterexample {
        #[arg(long, value_enum, default_value_t = CxKind::Local)]
        kind: CxKind,
        #[arg(long, value_name = "CFG")]
        universe: Option<String>,
        /// Add this base file's rules to the universe pool before searching.
        #[arg(long, value_name = "FILE")]
        base: Option<PathBuf>,
        /// Print the evaluation trace of the refutation.
        #[arg(long)]
        trace: bool,
        #[arg(long, hide = true)]
        or_global: bool,
        /// "A, B |- C" or a bare formula.
        sequent: String,
    },
    /// Compile a sequent to its simulation base, derive, normalize, re-check.
    Simulate {
        #[arg(long, default_value = "degree")]
        strategy: Strategy,
        /// "A, B |- C" or a bare formula.
        sequent: String,
    },
    /// Run the bundled theorem suite over a universe.
    PaperSuite {
        /// Universe config; the vocab must contain p and q. Defaults to
        /// "vocab=p,q;max_premises=1;max_discharge=1".
        #[arg(long, value_name = "CFG")]
        universe: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecideKind {
    Strong,
    Local,
    Global,
}

#[derive(Clone, Copy, ValueEnum)]
enum CxKind {
    Local,
    Global,
    Strong,
}

impl CxKind {
    fn judgement_kind(self) -> JudgementKind {
        match self {
            CxKind::Local => JudgementKind::WeakLocal,
            CxKind::Global => JudgementKind::WeakGlobal,
            CxKind::Strong => JudgementKind::Strong,
        }
    }
}

/// A finished report plus the exit code its verdict earned.
struct Run {
    report: String,
    exit: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(run) => {
            print!("{}", run.report);
            ExitCode::from(run.exit)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Run> {
    match command {
        Command::Parse { formula } => cmd_parse(&formula),
        Command::Derive {
            base,
            context,
            goal,
        } => cmd_derive(&base, &context, &goal),
        Command::CheckBase { base } => cmd_check_base(&base),
        Command::BotComplete { base, vocab } => cmd_bot_complete(&base, vocab.as_deref()),
        Command::Decide {
            kind,
            universe,
            base,
            trace,
            or_global,
            sequent,
        } => cmd_decide(kind, universe.as_deref(), base.as_deref(), trace, or_global, &sequent),
        Command::CheckProof { proof, base } => cmd_check_proof(&proof, base.as_deref()),
        Command::UniverseCheck { universe } => cmd_universe_check(universe.as_deref()),
        Command::Counterexample {
            kind,
            universe,
            base,
            trace,
            or_global,
            sequent,
        } => cmd_counterexample(kind, universe.as_deref(), base.as_deref(), trace, or_global, &sequent),
        Command::Simulate { strategy, sequent } => cmd_simulate(strategy, &sequent),
        Command::PaperSuite { universe } => cmd_paper_suite(universe.as_deref()),
    }
}

// -- argument parsing -------------------------------------------------------

/// Parses a formula, expanding one top-level `A <-> B` into (A->B)&(B->A).
fn parse_formula_arg(src: &str) -> Result<Formula> {
    if let Some((l, r)) = split_top_level_iff(src)? {
        let a = Formula::parse(l).with_context(|| format!("in `{}`", l.trim()))?;
        let b = Formula::parse(r).with_context(|| format!("in `{}`", r.trim()))?;
        return Ok(Formula::and(
            Formula::imp(a.clone(), b.clone()),
            Formula::imp(b, a),
        ));
    }
    Ok(Formula::parse(src)?)
}

/// Splits at a top-level `<->`; errors on chained or nested uses, which the
/// sugar does not cover.
fn split_top_level_iff(src: &str) -> Result<Option<(&str, &str)>> {
    let bytes = src.as_bytes();
    let mut depth = 0usize;
    let mut found: Option<usize> = None;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth = depth.saturating_sub(1),
            b'<' if bytes[i..].starts_with(b"<->") => {
                if depth == 0 {
                    if found.is_some() {
                        bail!("chained `<->` is ambiguous; parenthesize one side");
                    }
                    found = Some(i);
                }
                i += 3;
                continue;
            }
            _ => {}
        }
        i += 1;
    }
    match found {
        Some(at) => Ok(Some((&src[..at], &src[at + 3..]))),
        None if src.contains("<->") => {
            bail!("`<->` is top-level sugar only; expand nested uses by hand")
        }
        None => Ok(None),
    }
}

/// "A, B |- C" into (context, goal); a bare formula has an empty context.
fn parse_sequent_arg(src: &str) -> Result<(Vec<Formula>, Formula)> {
    let (ctx_src, goal_src) = match src.split_once("|-") {
        Some((l, r)) => {
            if r.contains("|-") {
                bail!("more than one `|-` in `{src}`");
            }
            (l, r)
        }
        None => ("", src),
    };
    let context = ctx_src
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_formula_arg)
        .collect::<Result<Vec<_>>>()?;
    let goal = parse_formula_arg(goal_src)?;
    Ok((context, goal))
}

fn parse_basic_arg(src: &str) -> Result<Basic> {
    match Formula::parse(src)? {
        Formula::BasicI(b) => Ok(b),
        other => bail!("`{other}` is not a basic sentence (an atom or `bot`)"),
    }
}

fn parse_basics_list(src: &str) -> Result<BTreeSet<Basic>> {
    src.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_basic_arg)
        .collect()
}

/// "vocab=p,q;max_premises=1;max_discharge=1;pool_cap=16;include_bot=true".
/// Unset numeric keys keep the same defaults as the documented default
/// universe; vocab is mandatory.
fn parse_universe_flag(spec: &str) -> Result<UniverseConfig> {
    let mut vocab: Option<Vec<String>> = None;
    let mut config = UniverseConfig::new(["placeholder"]);
    for part in spec.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("bad universe entry `{part}`: expected key=value"))?;
        let value = value.trim();
        match key.trim() {
            "vocab" => {
                vocab = Some(
                    value
                        .split(',')
                        .map(str::trim)
                        .filter(|a| !a.is_empty())
                        .map(str::to_string)
                        .collect(),
                )
            }
            "max_premises" => config.max_premises = parse_count(value, "max_premises")?,
            "max_discharge" => config.max_discharge = parse_count(value, "max_discharge")?,
            "pool_cap" => config.pool_cap = parse_count(value, "pool_cap")?,
            "include_bot" => {
                config.include_bot_conclusions = value
                    .parse()
                    .map_err(|_| anyhow!("include_bot must be true or false, got `{value}`"))?
            }
            other => bail!("unknown universe key `{other}`"),
        }
    }
    config.vocab = vocab.ok_or_else(|| anyhow!("universe config needs vocab=..."))?;
    Ok(config)
}

fn parse_count(value: &str, key: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| anyhow!("{key} must be a number, got `{value}`"))
}

/// The documented default for weak-semantics commands: vocab = the atoms in
/// sight, unit premises and discharge. An atomless judgement still needs a
/// nonempty vocab, so it falls back to p.
fn default_universe_config<'a>(
    formulas: impl IntoIterator<Item = &'a Formula>,
    extra_atoms: impl IntoIterator<Item = String>,
) -> UniverseConfig {
    let mut atoms: BTreeSet<String> = extra_atoms.into_iter().collect();
    for f in formulas {
        atoms.extend(f.atoms());
    }
    if atoms.is_empty() {
        atoms.insert("p".to_string());
    }
    UniverseConfig::new(atoms)
}

fn load_base(path: &Path) -> Result<Base> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_base(&text).with_context(|| format!("parsing base file {}", path.display()))
}

// -- report building --------------------------------------------------------

fn indent_block(out: &mut String, text: &str) {
    for line in text.lines() {
        if line.is_empty() {
            out.push('\n');
        } else {
            let _ = writeln!(out, "  {line}");
        }
    }
}

fn base_section(out: &mut String, label: &str, base: &Base) {
    if base.is_empty() {
        let _ = writeln!(out, "{label}: (empty)");
    } else {
        let _ = writeln!(out, "{label}:");
        indent_block(out, &render_base(base));
    }
}

fn join_display<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let rendered: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    if rendered.is_empty() {
        "(none)".to_string()
    } else {
        rendered.join(", ")
    }
}

fn sequent_display(context: &[Formula], goal: &Formula) -> String {
    if context.is_empty() {
        return format!("|- {goal}");
    }
    let ctx: Vec<String> = context.iter().map(|f| f.to_string()).collect();
    format!("{} |- {goal}", ctx.join(", "))
}

fn universe_section(out: &mut String, u: &Universe) {
    let _ = writeln!(out, "universe: {}", u.config().canonical_string());
    let _ = writeln!(out, "fingerprint: {}", u.fingerprint());
    let _ = writeln!(out, "bases: {}", u.base_count());
}

// -- commands ---------------------------------------------------------------

fn cmd_parse(raw: &str) -> Result<Run> {
    let formula = parse_formula_arg(raw)?;
    let mut out = String::new();
    let _ = writeln!(out, "command: parse");
    let _ = writeln!(out, "input: {raw}");
    let _ = writeln!(out, "formula: {formula}");
    let _ = writeln!(out, "atoms: {}", join_display(formula.atoms()));
    let _ = writeln!(out, "connectives: {}", formula.complexity());
    let _ = writeln!(
        out,
        "intuitionistic: {}",
        if formula.is_intuitionistic() { "yes" } else { "no" }
    );
    let _ = writeln!(out, "verdict: well-formed");
    Ok(Run {
        report: out,
        exit: EXIT_TRUE,
    })
}

fn cmd_derive(base_path: &Path, context_src: &str, goal_src: &str) -> Result<Run> {
    let base = load_base(base_path)?;
    let context = parse_basics_list(context_src)?;
    let goal = parse_basic_arg(goal_src)?;
    let derivable = derives(&base, &context, &goal);

    let mut out = String::new();
    let _ = writeln!(out, "command: derive");
    let _ = writeln!(out, "base-file: {}", base_path.display());
    base_section(&mut out, "base", &base);
    let _ = writeln!(out, "context: {}", join_display(context.iter()));
    let _ = writeln!(out, "goal: {goal}");
    let _ = writeln!(
        out,
        "verdict: {}",
        if derivable { "derivable" } else { "not-derivable" }
    );
    let _ = writeln!(out, "{PROVENANCE_EXACT}");
    if derivable {
        let witness = derive_witness(&base, &context, &goal)
            .expect("derivable sequents have a witness");
        let _ = writeln!(out, "witness:");
        indent_block(&mut out, &render_derivation(&witness));
    }
    Ok(Run {
        report: out,
        exit: if derivable { EXIT_TRUE } else { EXIT_REFUTED },
    })
}

fn cmd_check_base(base_path: &Path) -> Result<Run> {
    let base = load_base(base_path)?;
    let consistent = is_consistent(&base);

    let mut out = String::new();
    let _ = writeln!(out, "command: check-base");
    let _ = writeln!(out, "base-file: {}", base_path.display());
    let _ = writeln!(out, "rules: {}", base.len());
    base_section(&mut out, "base", &base);
    let _ = writeln!(out, "atoms: {}", join_display(base.atoms()));
    let _ = writeln!(
        out,
        "verdict: {}",
        if consistent { "consistent" } else { "inconsistent" }
    );
    let _ = writeln!(out, "{PROVENANCE_EXACT}");
    if !consistent {
        let witness = derive_witness(&base, &BTreeSet::new(), &Basic::Falsum)
            .expect("inconsistent bases derive bot");
        let _ = writeln!(out, "witness:");
        indent_block(&mut out, &render_derivation(&witness));
    }
    Ok(Run {
        report: out,
        exit: if consistent { EXIT_TRUE } else { EXIT_REFUTED },
    })
}

fn cmd_bot_complete(base_path: &Path, vocab_src: Option<&str>) -> Result<Run> {
    let base = load_base(base_path)?;
    let vocab: Vec<Basic> = match vocab_src {
        Some(src) => parse_basics_list(src)?
            .into_iter()
            .filter(|b| !b.is_falsum())
            .collect(),
        None => base.atoms().into_iter().collect(),
    };

    let mut out = String::new();
    let _ = writeln!(out, "command: bot-complete");
    let _ = writeln!(out, "base-file: {}", base_path.display());
    base_section(&mut out, "base", &base);
    let _ = writeln!(out, "vocab: {}", join_display(vocab.iter()));

    match bot_complete(&base, &vocab) {
        Ok(completion) => {
            let _ = writeln!(out, "verdict: completed");
            base_section(&mut out, "completion", &completion);
            let _ = writeln!(out, "added-axioms: {}", completion.len() - base.len());
            let _ = writeln!(out, "{PROVENANCE_EXACT}");
            Ok(Run {
                report: out,
                exit: EXIT_TRUE,
            })
        }
        Err(e) => {
            let _ = writeln!(out, "verdict: inconsistent");
            let _ = writeln!(out, "error: {e}");
            let _ = writeln!(out, "{PROVENANCE_EXACT}");
            Ok(Run {
                report: out,
                exit: EXIT_REFUTED,
            })
        }
    }
}

fn cmd_decide(
    kind: DecideKind,
    universe_flag: Option<&str>,
    base_path: Option<&Path>,
    trace: bool,
    or_global: bool,
    sequent_src: &str,
) -> Result<Run> {
    let (context, goal) = parse_sequent_arg(sequent_src)?;

    if kind == DecideKind::Strong {
        if universe_flag.is_some() || base_path.is_some() || trace || or_global {
            bail!("--universe, --base, --trace, and --or-global apply to weak kinds only");
        }
        let valid = decide_strong(&context, &goal);
        let mut out = String::new();
        let _ = writeln!(out, "command: decide");
        let _ = writeln!(out, "judgement: {}", sequent_display(&context, &goal));
        let _ = writeln!(out, "kind: strong");
        let _ = writeln!(out, "verdict: {}", if valid { "valid" } else { "refuted" });
        let _ = writeln!(out, "{PROVENANCE_EXACT}");
        return Ok(Run {
            report: out,
            exit: if valid { EXIT_TRUE } else { EXIT_REFUTED },
        });
    }

    let judgement_kind = match kind {
        DecideKind::Local => JudgementKind::WeakLocal,
        DecideKind::Global => JudgementKind::WeakGlobal,
        DecideKind::Strong => unreachable!("handled above"),
    };
    let at_base = base_path.map(load_base).transpose()?;
    if let Some(b) = &at_base {
        if !is_consistent(b) {
            bail!("--base file is inconsistent; weak judgements range over consistent bases");
        }
    }

    let mut config = match universe_flag {
        Some(spec) => parse_universe_flag(spec)?,
        None => default_universe_config(
            context.iter().chain(std::iter::once(&goal)),
            at_base
                .iter()
                .flat_map(|b| b.atoms())
                .map(|a| a.to_string()),
        ),
    };
    if let Some(b) = &at_base {
        for rule in b.rules() {
            if !config.extra_rules.contains(rule) {
                config.extra_rules.push(rule.clone());
            }
        }
    }
    let u = Universe::build(config)?;
    let ev = if or_global {
        Evaluator::with_global_disjunction(&u)
    } else {
        Evaluator::new(&u)
    };

    let mut out = String::new();
    let _ = writeln!(out, "command: decide");
    let _ = writeln!(out, "judgement: {}", sequent_display(&context, &goal));
    let _ = writeln!(out, "kind: {judgement_kind}");
    universe_section(&mut out, &u);

    let exit = if let Some(b) = &at_base {
        let id = u
            .find_base(b)
            .expect("a consistent base joined to the pool is in the universe");
        let _ = writeln!(out, "at-base: id {id}");
        indent_block(&mut out, &render_base(b));
        let j = Judgement::new(judgement_kind, id, context.clone(), goal.clone());
        let holds = ev.eval_judgement(&j)?;
        let _ = writeln!(out, "verdict: {}", if holds { "valid" } else { "refuted" });
        if trace {
            let _ = writeln!(out, "trace:");
            indent_block(&mut out, &ev.trace(&j)?.render());
        }
        if holds {
            EXIT_TRUE
        } else {
            EXIT_REFUTED
        }
    } else {
        match ev.find_weak_counterexample(&context, &goal, judgement_kind)? {
            None => {
                let _ = writeln!(out, "verdict: valid at all {} bases", u.base_count());
                if trace {
                    let _ = writeln!(out, "trace: (valid everywhere; no refutation to show)");
                }
                EXIT_TRUE
            }
            Some((id, failure)) => {
                let _ = writeln!(out, "verdict: refuted");
                witness_base_section(&mut out, &u, id);
                if trace {
                    let _ = writeln!(out, "trace:");
                    indent_block(&mut out, &failure.render());
                }
                EXIT_REFUTED
            }
        }
    };
    let _ = writeln!(out, "{PROVENANCE_UNIVERSE}");
    Ok(Run { report: out, exit })
}

fn witness_base_section(out: &mut String, u: &Universe, id: bes_core::BaseId) {
    let witness = u.base(id);
    if witness.is_empty() {
        let _ = writeln!(out, "witness-base: id {id} (empty)");
    } else {
        let _ = writeln!(out, "witness-base: id {id}");
        indent_block(out, &render_base(witness));
    }
}

fn cmd_check_proof(proof_path: &Path, base_path: Option<&Path>) -> Result<Run> {
    let text = fs::read_to_string(proof_path)
        .with_context(|| format!("reading {}", proof_path.display()))?;
    let mut out = String::new();
    let _ = writeln!(out, "command: check-proof");
    let _ = writeln!(out, "proof-file: {}", proof_path.display());

    if let Some(base_path) = base_path {
        let base = load_base(base_path)?;
        let derivation = parse_derivation(&text)
            .with_context(|| format!("parsing derivation file {}", proof_path.display()))?;
        let _ = writeln!(out, "format: atomic-derivation");
        let _ = writeln!(out, "base-file: {}", base_path.display());
        base_section(&mut out, "base", &base);
        let _ = writeln!(out, "derivation:");
        indent_block(&mut out, &render_derivation(&derivation));
        return Ok(match check_derivation(&base, &derivation) {
            Ok((open, conclusion)) => {
                let _ = writeln!(out, "verdict: checks");
                let _ = writeln!(out, "open-assumptions: {}", join_display(open.iter()));
                let _ = writeln!(out, "conclusion: {conclusion}");
                let _ = writeln!(out, "{PROVENANCE_EXACT}");
                Run {
                    report: out,
                    exit: EXIT_TRUE,
                }
            }
            Err(e) => {
                let _ = writeln!(out, "verdict: rejected");
                let _ = writeln!(out, "error: {e}");
                let _ = writeln!(out, "{PROVENANCE_EXACT}");
                Run {
                    report: out,
                    exit: EXIT_REFUTED,
                }
            }
        });
    }

    let proof = parse_proof(&text)
        .with_context(|| format!("parsing proof file {}", proof_path.display()))?;
    let _ = writeln!(out, "format: natural-deduction");
    let _ = writeln!(out, "proof:");
    indent_block(&mut out, &render_proof(&proof));
    Ok(match check_nd(&proof) {
        Ok((open, conclusion)) => {
            let _ = writeln!(out, "verdict: checks");
            let _ = writeln!(out, "open-assumptions: {}", join_display(open.iter()));
            let _ = writeln!(out, "conclusion: {conclusion}");
            let _ = writeln!(out, "{PROVENANCE_EXACT}");
            Run {
                report: out,
                exit: EXIT_TRUE,
            }
        }
        Err(e) => {
            let _ = writeln!(out, "verdict: rejected");
            let _ = writeln!(out, "error: {e}");
            let _ = writeln!(out, "{PROVENANCE_EXACT}");
            Run {
                report: out,
                exit: EXIT_REFUTED,
            }
        }
    })
}

fn cmd_universe_check(universe_flag: Option<&str>) -> Result<Run> {
    let config = match universe_flag {
        Some(spec) => parse_universe_flag(spec)?,
        None => UniverseConfig::new(["p", "q"]),
    };
    let u = Universe::build(config)?;

    let mut out = String::new();
    let _ = writeln!(out, "command: universe-check");
    universe_section(&mut out, &u);
    let _ = writeln!(out, "pool: {} rules", u.pool().len());
    for rule in u.pool() {
        let _ = writeln!(out, "  {rule}");
    }
    let _ = writeln!(out, "subsets: {}", 1u64 << u.pool().len());

    // Re-derive what the builder promises: id 0 is the empty base, every
    // admitted base passes the consistency check, and the empty base sits
    // below everything.
    let empty_first = u.base(0).is_empty();
    let all_consistent = u.base_ids().all(|id| is_consistent(u.base(id)));
    let empty_below_all = u
        .extensions_of(0)
        .map(|exts| exts.len() == u.base_count())
        .unwrap_or(false);
    let _ = writeln!(
        out,
        "checks: empty base first: {}; all bases consistent: {}; empty base below all: {}",
        yes_no(empty_first),
        yes_no(all_consistent),
        yes_no(empty_below_all)
    );
    let ok = empty_first && all_consistent && empty_below_all;
    let _ = writeln!(out, "verdict: {}", if ok { "ok" } else { "broken" });
    let _ = writeln!(out, "{PROVENANCE_UNIVERSE}");
    Ok(Run {
        report: out,
        exit: if ok { EXIT_TRUE } else { EXIT_REFUTED },
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_counterexample(
    kind: CxKind,
    universe_flag: Option<&str>,
    base_path: Option<&Path>,
    trace: bool,
    or_global: bool,
    sequent_src: &str,
) -> Result<Run> {
    let (context, goal) = parse_sequent_arg(sequent_src)?;
    let pool_base = base_path.map(load_base).transpose()?;
    let mut config = match universe_flag {
        Some(spec) => parse_universe_flag(spec)?,
        None => default_universe_config(
            context.iter().chain(std::iter::once(&goal)),
            pool_base
                .iter()
                .flat_map(|b| b.atoms())
                .map(|a| a.to_string()),
        ),
    };
    if let Some(b) = &pool_base {
        for rule in b.rules() {
            if !config.extra_rules.contains(rule) {
                config.extra_rules.push(rule.clone());
            }
        }
    }
    let u = Universe::build(config)?;
    let ev = if or_global {
        Evaluator::with_global_disjunction(&u)
    } else {
        Evaluator::new(&u)
    };
    let judgement_kind = kind.judgement_kind();

    let mut out = String::new();
    let _ = writeln!(out, "command: counterexample");
    let _ = writeln!(out, "judgement: {}", sequent_display(&context, &goal));
    let _ = writeln!(out, "kind: {judgement_kind}");
    universe_section(&mut out, &u);

    let exit = match ev.find_weak_counterexample(&context, &goal, judgement_kind)? {
        None => {
            let _ = writeln!(out, "verdict: no counterexample in this universe");
            EXIT_TRUE
        }
        Some((id, failure)) => {
            let _ = writeln!(out, "verdict: refuted");
            witness_base_section(&mut out, &u, id);
            if trace {
                let _ = writeln!(out, "trace:");
                indent_block(&mut out, &failure.render());
            }
            EXIT_REFUTED
        }
    };
    let _ = writeln!(out, "{PROVENANCE_UNIVERSE}");
    Ok(Run { report: out, exit })
}

fn cmd_simulate(strategy: Strategy, sequent_src: &str) -> Result<Run> {
    let (context, goal) = parse_sequent_arg(sequent_src)?;
    let gs = gamma_star(&context, &goal);
    let alpha = make_alpha(&gs);
    let mut vocab: Vec<Basic> = alpha.atoms().cloned().collect();
    if !vocab.contains(&Basic::Falsum) {
        vocab.push(Basic::Falsum);
    }
    let n = build_n(&gs, &alpha, &vocab)?;
    let consistent = consistency_of_n(&n);

    let mut out = String::new();
    let _ = writeln!(out, "command: simulate");
    let _ = writeln!(out, "sequent: {}", sequent_display(&context, &goal));
    let _ = writeln!(out, "strategy: {strategy}");
    let _ = writeln!(out, "gamma-star: {} formulas", gs.len());
    let _ = writeln!(out, "alpha:");
    for f in &gs {
        let atom = alpha.atom_of(f).expect("the annotation covers gamma-star");
        let _ = writeln!(out, "  {f} -> {atom}");
    }
    let _ = writeln!(out, "n-base: {} rules", n.base().len());
    indent_block(&mut out, &n.render());
    let _ = writeln!(
        out,
        "consistency: {}",
        if consistent { "consistent" } else { "inconsistent" }
    );
    if !consistent {
        let _ = writeln!(out, "verdict: broken");
        let _ = writeln!(out, "{PROVENANCE_EXACT}");
        return Ok(Run {
            report: out,
            exit: EXIT_REFUTED,
        });
    }

    match completeness_roundtrip_with(&context, &goal, strategy) {
        Ok(proof) => {
            let (open, conclusion) = check_nd(&proof).expect("round-trip proofs check");
            let _ = writeln!(out, "verdict: derivable");
            let _ = writeln!(out, "proof:");
            indent_block(&mut out, &render_proof(&proof));
            let _ = writeln!(out, "checked-open: {}", join_display(open.iter()));
            let _ = writeln!(out, "checked-conclusion: {conclusion}");
            let _ = writeln!(out, "{PROVENANCE_EXACT}");
            Ok(Run {
                report: out,
                exit: EXIT_TRUE,
            })
        }
        Err(bes_core::SimulationError::NotDerivable) => {
            let _ = writeln!(out, "verdict: not-derivable");
            let _ = writeln!(out, "{PROVENANCE_EXACT}");
            Ok(Run {
                report: out,
                exit: EXIT_REFUTED,
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_paper_suite(universe_flag: Option<&str>) -> Result<Run> {
    let config = match universe_flag {
        Some(spec) => parse_universe_flag(spec)?,
        None => UniverseConfig::new(["p", "q"]),
    };
    let u = Universe::build(config)?;
    let items = theorem_suite(&u)?;

    let mut out = String::new();
    let _ = writeln!(out, "command: paper-suite");
    universe_section(&mut out, &u);
    let passed = items.iter().filter(|i| i.passed).count();
    for item in &items {
        let _ = writeln!(out, "{item}");
    }
    let _ = writeln!(out, "verdict: {passed}/{} PASS", items.len());
    let _ = writeln!(out, "{PROVENANCE_UNIVERSE}");
    Ok(Run {
        report: out,
        exit: if passed == items.len() {
            EXIT_TRUE
        } else {
            EXIT_REFUTED
        },
    })
}
