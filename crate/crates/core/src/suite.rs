//! The bundled theorem suite: executable forms of the weak-semantics
//! results, each swept over every base of a given universe. Quantifiers in
//! the statements range over that universe's bases, so every verdict is
//! universe-relative; the default two-atom configuration makes all items
//! hold, and the suite reports a witness whenever one fails.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::base::{
    bot_complete, derives, parse_rule_line, Base, BotCompleteError,
};
use crate::formula::{Basic, Formula};
use crate::sampling::{enumerate_ecumenical, enumerate_intuitionistic};
use crate::semantics::{Evaluator, SemanticsError};
use crate::universe::{BaseId, Universe, UniverseError};

/// One suite line: the statement's conventional name, its verdict, and a
/// short instance summary (a witness when the verdict is FAIL).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteItem {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for SuiteItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{:<34} {verdict}  {}", self.name, self.detail)
    }
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("the theorem suite needs atoms `p` and `q` in the universe vocab")]
    VocabMissingPQ,
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error(transparent)]
    BotComplete(#[from] BotCompleteError),
}

/// Runs all 21 items in their fixed order. The instance families hardcode
/// the atoms `p` and `q`, so the universe vocab must contain both.
pub fn theorem_suite(u: &Universe) -> Result<Vec<SuiteItem>, SuiteError> {
    let vocab = &u.config().vocab;
    if !vocab.iter().any(|a| a == "p") || !vocab.iter().any(|a| a == "q") {
        return Err(SuiteError::VocabMissingPQ);
    }
    let ev = Evaluator::new(u);
    let ctx = SuiteCtx::new(u, &ev)?;
    Ok(vec![
        ctx.bot()?,
        ctx.intimpliesclasatom()?,
        ctx.intimpliesclas()?,
        ctx.monotoniccollapse()?,
        ctx.monotonicity()?,
        ctx.localimpliesglobal()?,
        ctx.globaltheoremimplieslocaltheorem()?,
        ctx.newsimplification()?,
        ctx.globalmodusponens()?,
        ctx.mon()?,
        ctx.neg()?,
        ctx.class_iff_not_int()?,
        ctx.pc_implies_extension()?,
        ctx.sameextensionsproperty()?,
        ctx.maximalconsistentpersistency()?,
        ctx.twoglobalequivalences()?,
        ctx.acai()?,
        ctx.ic()?,
        ctx.mp()?,
        ctx.pl()?,
        ctx.proposition()?,
    ])
}

fn item(name: &'static str, fail: Option<String>, ok: String) -> SuiteItem {
    match fail {
        Some(detail) => SuiteItem { name, passed: false, detail },
        None => SuiteItem { name, passed: true, detail: ok },
    }
}

/// Shared instance families. `int`/`ecu` are the exhaustive intuitionistic
/// and ecumenical formula families over {p, q} up to the given connective
/// count; `exts[s]` lists the extensions of `s` (including `s`).
struct SuiteCtx<'a> {
    u: &'a Universe,
    ev: &'a Evaluator<'a>,
    basics: Vec<Basic>,
    int1: Vec<Formula>,
    int2: Vec<Formula>,
    ecu1: Vec<Formula>,
    ecu2: Vec<Formula>,
    exts: Vec<Vec<BaseId>>,
}

impl<'a> SuiteCtx<'a> {
    fn new(u: &'a Universe, ev: &'a Evaluator<'a>) -> Result<Self, SuiteError> {
        let mut exts = Vec::with_capacity(u.base_count());
        for s in u.base_ids() {
            exts.push(u.extensions_of(s)?);
        }
        Ok(SuiteCtx {
            u,
            ev,
            basics: vec![Basic::atom("p"), Basic::atom("q"), Basic::Falsum],
            int1: enumerate_intuitionistic(&["p", "q"], 1),
            int2: enumerate_intuitionistic(&["p", "q"], 2),
            ecu1: enumerate_ecumenical(&["p", "q"], 1),
            ecu2: enumerate_ecumenical(&["p", "q"], 2),
            exts,
        })
    }

    fn wl(&self, s: BaseId, f: &Formula) -> Result<bool, SemanticsError> {
        self.ev.weak_local(s, &[], f)
    }

    /// Local validity of `f` is the same at `s` and at every extension.
    fn constant_above(&self, s: BaseId, f: &Formula) -> Result<bool, SemanticsError> {
        let at_s = self.wl(s, f)?;
        for &s2 in &self.exts[s] {
            if self.wl(s2, f)? != at_s {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// S-monotonicity of `f` above `s`, read hereditarily: local validity
    /// persists along every extension pair at or above `s`.
    fn monotone_above(&self, s: BaseId, f: &Formula) -> Result<bool, SemanticsError> {
        for &s1 in &self.exts[s] {
            if !self.wl(s1, f)? {
                continue;
            }
            for &s2 in &self.exts[s1] {
                if !self.wl(s2, f)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    // Neither bot annotation is ever weakly valid.
    fn bot(&self) -> Result<SuiteItem, SuiteError> {
        let cases = [Formula::falsum(), Formula::BasicC(Basic::Falsum)];
        let mut fail = None;
        'sweep: for s in self.u.base_ids() {
            for f in &cases {
                if self.wl(s, f)? {
                    fail = Some(format!("{f} is weakly valid at base {s}"));
                    break 'sweep;
                }
            }
        }
        Ok(item(
            "bot",
            fail,
            format!("bot^i and bot^c refuted at all {} bases", self.u.base_count()),
        ))
    }

    // p^i locally entails p^c for every basic sentence p.
    fn intimpliesclasatom(&self) -> Result<SuiteItem, SuiteError> {
        let mut fail = None;
        'sweep: for s in self.u.base_ids() {
            for b in &self.basics {
                let int = Formula::BasicI(b.clone());
                let cls = Formula::BasicC(b.clone());
                if !self.ev.weak_local(s, &[int.clone()], &cls)? {
                    fail = Some(format!("{int} does not locally entail {cls} at base {s}"));
                    break 'sweep;
                }
            }
        }
        Ok(item(
            "intimpliesclasatom",
            fail,
            format!("p, q, bot at {} bases", self.u.base_count()),
        ))
    }

    // A locally entails A^c for every compound intuitionistic A.
    fn intimpliesclas(&self) -> Result<SuiteItem, SuiteError> {
        let mut fail = None;
        let mut checked = 0usize;
        'sweep: for s in self.u.base_ids() {
            for a in &self.int2 {
                if !matches!(a, Formula::And(..) | Formula::Or(..) | Formula::Imp(..)) {
                    continue;
                }
                let cls = a.classical_version().expect("compound intuitionistic input");
                checked += 1;
                if !self.ev.weak_local(s, &[a.clone()], &cls)? {
                    fail = Some(format!("{a} does not locally entail {cls} at base {s}"));
                    break 'sweep;
                }
            }
        }
        Ok(item(
            "intimpliesclas",
            fail,
            format!("{checked} compound instances"),
        ))
    }

    // For monotonic contexts and conclusions the local and global
    // entailments coincide; intuitionistic instances are monotonic.
    fn monotoniccollapse(&self) -> Result<SuiteItem, SuiteError> {
        let core: Vec<Formula> = vec![
            Formula::atom_i("p"),
            Formula::atom_i("q"),
            Formula::neg(Formula::atom_i("p")),
            Formula::and(Formula::atom_i("p"), Formula::atom_i("q")),
            Formula::imp(Formula::atom_i("p"), Formula::atom_i("q")),
        ];
        let mut contexts: Vec<Vec<Formula>> = vec![vec![]];
        contexts.extend(self.int1.iter().map(|b| vec![b.clone()]));
        for b1 in &core {
            for b2 in &core {
                contexts.push(vec![b1.clone(), b2.clone()]);
            }
        }
        let mut fail = None;
        let mut checked = 0usize;
        'sweep: for s in self.u.base_ids() {
            for gamma in &contexts {
                for a in &self.int1 {
                    checked += 1;
                    let local = self.ev.weak_local(s, gamma, a)?;
                    let global = self.ev.weak_global(s, gamma, a)?;
                    if local != global {
                        fail = Some(format!(
                            "local/global split for {gamma:?} and {a} at base {s}"
                        ));
                        break 'sweep;
                    }
                }
            }
        }
        Ok(item(
            "monotoniccollapse",
            fail,
            format!("{checked} intuitionistic entailment instances agree"),
        ))
    }

    // Intuitionistic formulas are monotonic; p^c is not, with the empty
    // base and the p-refuter as the first violating pair.
    fn monotonicity(&self) -> Result<SuiteItem, SuiteError> {
        let pc = Formula::atom_c("p");
        let refuter =
            Base::from_rules([parse_rule_line("( |- p) => bot").expect("fixed rule text parses")]);
        let fail = match self.ev.check_monotonic(&pc)? {
            None => Some("no monotonicity violation found for p^c".to_string()),
            Some((s, s2)) => {
                if !self.u.base(s).is_empty() {
                    Some(format!("violation starts at non-empty base {s}"))
                } else if self.u.base(s2).canon() != refuter.canon() {
                    Some(format!("violation witness {s2} is not the p-refuter"))
                } else {
                    let mut sweep_fail = None;
                    for f in &self.int2 {
                        if let Some((v1, v2)) = self.ev.check_monotonic(f)? {
                            sweep_fail =
                                Some(format!("intuitionistic {f} violates at ({v1}, {v2})"));
                            break;
                        }
                    }
                    sweep_fail
                }
            }
        };
        Ok(item(
            "monotonicity",
            fail,
            format!(
                "p^c breaks at (empty, p-refuter); all {} intuitionistic formulas monotonic",
                self.int2.len()
            ),
        ))
    }

    // Local entailment implies global entailment for non-empty contexts.
    fn localimpliesglobal(&self) -> Result<SuiteItem, SuiteError> {
        let mut fail = None;
        let mut fired = 0usize;
        'sweep: for s in self.u.base_ids() {
            for b in &self.ecu1 {
                let gamma = vec![b.clone()];
                for a in &self.ecu1 {
                    if !self.ev.weak_local(s, &gamma, a)? {
                        continue;
                    }
                    fired += 1;
                    if !self.ev.weak_global(s, &gamma, a)? {
                        fail = Some(format!(
                            "{b} locally but not globally entails {a} at base {s}"
                        ));
                        break 'sweep;
                    }
                }
            }
        }
        Ok(item(
            "localimpliesglobal",
            fail,
            format!("{fired} local entailments all global"),
        ))
    }

    // For empty contexts the implication reverses.
    fn globaltheoremimplieslocaltheorem(&self) -> Result<SuiteItem, SuiteError> {
        let mut fail = None;
        let mut fired = 0usize;
        'sweep: for s in self.u.base_ids() {
            for a in &self.ecu2 {
                if !self.ev.weak_global(s, &[], a)? {
                    continue;
                }
                fired += 1;
                if !self.wl(s, a)? {
                    fail = Some(format!("{a} is a global but not local theorem at base {s}"));
                    break 'sweep;
                }
            }
        }
        Ok(item(
            "globaltheoremimplieslocaltheorem",
            fail,
            format!("{fired} global theorems all local"),
        ))
    }

    // If A fails at every extension of S, its negation holds at every
    // extension of S.
    fn newsimplification(&self) -> Result<SuiteItem, SuiteError> {
        let mut fail = None;
        let mut fired = 0usize;
        'sweep: for s in self.u.base_ids() {
            for a in &self.ecu2 {
                let mut refuted_everywhere = true;
                for &s2 in &self.exts[s] {
                    if self.wl(s2, a)? {
                        refuted_everywhere = false;
                        break;
                    }
                }
                if !refuted_everywhere {
                    continue;
                }
                fired += 1;
                let not_a = Formula::neg(a.clone());
                for &s2 in &self.exts[s] {
                    if !self.wl(s2, &not_a)? {
                        fail = Some(format!(
                            "{a} fails above base {s} but {not_a} fails at base {s2}"
                        ));
                        break 'sweep;
                    }
                }
            }
        }
        Ok(item(
            "newsimplification",
            fail,
            format!("{fired} everywhere-refuted formulas negate"),
        ))
    }

    // Global validity of A plus global entailment A => B yields global
    // validity of B.
    fn globalmodusponens(&self) -> Result<SuiteItem, SuiteError> {
        let mut fail = None;
        let mut fired = 0usize;
        'sweep: for s in self.u.base_ids() {
            for a in &self.ecu1 {
                if !self.ev.weak_global(s, &[], a)? {
                    continue;
                }
                let gamma = vec![a.clone()];
                for b in &self.ecu1 {
                    if !self.ev.weak_global(s, &gamma, b)? {
                        continue;
                    }
                    fired += 1;
                    if !self.ev.weak_global(s, &[], b)? {
                        fail = Some(format!("modus ponens fails for {a}, {b} at base {s}"));
                        break 'sweep;
                    }
                }
            }
        }
        Ok(item(
            "globalmodusponens",
            fail,
            format!("{fired} detachments hold"),
        ))
    }

    // A locally valid monotonic antecedent turns a global entailment into
    // local and global validity of the consequent.
    fn mon(&self) -> Result<SuiteItem, SuiteError> {
        let mut fail = None;
        let mut fired = 0usize;
        'sweep: for s in self.u.base_ids() {
            for a in &self.ecu1 {
                if !self.wl(s, a)? || !self.monotone_above(s, a)? {
                    continue;
                }
                let gamma = vec![a.clone()];
                for b in &self.ecu1 {
                    if !self.ev.weak_global(s, &gamma, b)? {
                        continue;
                    }
                    fired += 1;
                    if !self.wl(s, b)? || !self.ev.weak_global(s, &[], b)? {
                        fail = Some(format!(
                            "consequent {b} not carried by monotonic {a} at base {s}"
                        ));
                        break 'sweep;
                    }
                }
            }
        }
        Ok(item("mon", fail, format!("{fired} instances carried")))
    }

    // Atomic refutation, both entailments into bot, and validity of the
    // negation are all the same judgement.
    fn neg(&self) -> Result<SuiteItem, SuiteError> {
        let mut fail = None;
        'sweep: for s in self.u.base_ids() {
            for b in &self.basics {
                let singleton: BTreeSet<Basic> = [b.clone()].into_iter().collect();
                let refuted = derives(self.u.base(s), &singleton, &Basic::Falsum);
                let int = Formula::BasicI(b.clone());
                let gamma = vec![int.clone()];
                let local = self.ev.weak_local(s, &gamma, &Formula::falsum())?;
                let global = self.ev.weak_global(s, &gamma, &Formula::falsum())?;
                let negated = self.wl(s, &Formula::neg(int))?;
                if local != refuted || global != refuted || negated != refuted {
                    fail = Some(format!(
                        "forms disagree for {b} at base {s}: derivability {refuted}, local {local}, global {global}, negation {negated}"
                    ));
                    break 'sweep;
                }
            }
        }
        Ok(item(
            "neg",
            fail,
            format!("four forms agree at {} bases", self.u.base_count()),
        ))
    }

    // p^c is locally valid exactly when p^i does not locally entail bot.
    fn class_iff_not_int(&self) -> Result<SuiteItem, SuiteError> {
        let mut fail = None;
        'sweep: for s in self.u.base_ids() {
            for b in &self.basics {
                let cls = self.wl(s, &Formula::BasicC(b.clone()))?;
                let into_bot =
                    self.ev
                        .weak_local(s, &[Formula::BasicI(b.clone())], &Formula::falsum())?;
                if cls != !into_bot {
                    fail = Some(format!("mismatch for {b} at base {s}"));
                    break 'sweep;
                }
            }
        }
        Ok(item(
            "class-iff-not-int",
            fail,
            format!("equivalence holds at {} bases", self.u.base_count()),
        ))
    }

    // A does not locally entail bot exactly when some extension validates A.
    fn pc_implies_extension(&self) -> Result<SuiteItem, SuiteError> {
        let mut fail = None;
        let mut checked = 0usize;
        'sweep: for s in self.u.base_ids() {
            for a in &self.ecu2 {
                checked += 1;
                let consistent = !self.ev.weak_local(s, &[a.clone()], &Formula::falsum())?;
                let mut witnessed = false;
                for &s2 in &self.exts[s] {
                    if self.wl(s2, a)? {
                        witnessed = true;
                        break;
                    }
                }
                if consistent != witnessed {
                    fail = Some(format!(
                        "{a} at base {s}: consistency {consistent}, witness {witnessed}"
                    ));
                    break 'sweep;
                }
            }
        }
        Ok(item(
            "p^c-implies-extension",
            fail,
            format!("{checked} instances agree"),
        ))
    }

    // When A and B are constant above S, local entailment, global
    // entailment, and the material conditional coincide at every extension.
    fn sameextensionsproperty(&self) -> Result<SuiteItem, SuiteError> {
        let mut fail = None;
        let mut fired = 0usize;
        'sweep: for s in self.u.base_ids() {
            for a in &self.ecu1 {
                if !self.constant_above(s, a)? {
                    continue;
                }
                for b in &self.ecu1 {
                    if !self.constant_above(s, b)? {
                        continue;
                    }
                    fired += 1;
                    let gamma = vec![a.clone()];
                    for &s2 in &self.exts[s] {
                        let local = self.ev.weak_local(s2, &gamma, b)?;
                        let global = self.ev.weak_global(s2, &gamma, b)?;
                        let material = !self.wl(s2, a)? || self.wl(s2, b)?;
                        if local != global || global != material {
                            fail = Some(format!(
                                "{a}, {b} above base {s}: local {local}, global {global}, material {material} at base {s2}"
                            ));
                            break 'sweep;
                        }
                    }
                }
            }
        }
        Ok(item(
            "sameextensionsproperty",
            fail,
            format!("{fired} constant pairs collapse"),
        ))
    }

    // A bot-complete base decides every formula the same way as all its
    // extensions.
    fn maximalconsistentpersistency(&self) -> Result<SuiteItem, SuiteError> {
        let vocab: Vec<Basic> = self
            .u
            .config()
            .vocab
            .iter()
            .map(|a| Basic::atom(a.clone()))
            .collect();
        let mut fail = None;
        let mut completions = 0usize;
        'sweep: for s in self.u.base_ids() {
            let complete = bot_complete(self.u.base(s), &vocab)?;
            for atom in &vocab {
                let singleton: BTreeSet<Basic> = [atom.clone()].into_iter().collect();
                if !derives(&complete, &BTreeSet::new(), atom)
                    && !derives(&complete, &singleton, &Basic::Falsum)
                {
                    fail = Some(format!("completion of base {s} leaves {atom} undecided"));
                    break 'sweep;
                }
            }
            let Some(cid) = self.u.find_base(&complete) else {
                fail = Some(format!("completion of base {s} escapes the universe"));
                break 'sweep;
            };
            completions += 1;
            for &s2 in &self.exts[cid] {
                for f in &self.ecu1 {
                    if self.wl(cid, f)? != self.wl(s2, f)? {
                        fail = Some(format!(
                            "completion {cid} of base {s} disagrees with extension {s2} on {f}"
                        ));
                        break 'sweep;
                    }
                }
            }
        }
        Ok(item(
            "maximalconsistentpersistency",
            fail,
            format!(
                "{completions} completions decide every atom and persist over {} formulas",
                self.ecu1.len()
            ),
        ))
    }

    // A^c and ~~A globally entail each other.
    fn twoglobalequivalences(&self) -> Result<SuiteItem, SuiteError> {
        let mut fail = None;
        let mut checked = 0usize;
        'sweep: for s in self.u.base_ids() {
            for a in &self.int2 {
                let cls = a.classical_version().expect("intuitionistic input");
                let dn = Formula::neg(Formula::neg(a.clone()));
                checked += 1;
                if !self.ev.weak_global(s, &[cls.clone()], &dn)? {
                    fail = Some(format!("{cls} does not globally entail {dn} at base {s}"));
                    break 'sweep;
                }
                if !self.ev.weak_global(s, &[dn.clone()], &cls)? {
                    fail = Some(format!("{dn} does not globally entail {cls} at base {s}"));
                    break 'sweep;
                }
            }
        }
        Ok(item(
            "twoglobalequivalences",
            fail,
            format!("{checked} formulas equivalent both ways"),
        ))
    }

    // The local direction of the first global equivalence fails at the
    // empty base, while the global form holds there.
    fn acai(&self) -> Result<SuiteItem, SuiteError> {
        let Some(empty) = self.u.base_ids().find(|&s| self.u.base(s).is_empty()) else {
            return Ok(item("Acai", Some("no empty base in the universe".into()), String::new()));
        };
        let pc = Formula::atom_c("p");
        let dn = Formula::neg(Formula::neg(Formula::atom_i("p")));
        let local = self.ev.weak_local(empty, &[pc.clone()], &dn)?;
        let global = self.ev.weak_global(empty, &[pc], &dn)?;
        let fail = if local {
            Some(format!("p^c locally entails {dn} at the empty base"))
        } else if !global {
            Some("the global form fails at the empty base too".to_string())
        } else {
            None
        };
        Ok(item(
            "Acai",
            fail,
            format!("p^c does not locally entail ~~p at base {empty}; the global form holds"),
        ))
    }

    // ~~A locally entails A^c everywhere.
    fn ic(&self) -> Result<SuiteItem, SuiteError> {
        let mut fail = None;
        let mut checked = 0usize;
        'sweep: for s in self.u.base_ids() {
            for a in &self.int2 {
                let cls = a.classical_version().expect("intuitionistic input");
                let dn = Formula::neg(Formula::neg(a.clone()));
                checked += 1;
                if !self.ev.weak_local(s, &[dn.clone()], &cls)? {
                    fail = Some(format!("{dn} does not locally entail {cls} at base {s}"));
                    break 'sweep;
                }
            }
        }
        Ok(item("ic", fail, format!("{checked} formulas entail")))
    }

    // The ecumenical excluded middle A^c | ~A is locally valid everywhere.
    fn mp(&self) -> Result<SuiteItem, SuiteError> {
        let mut fail = None;
        let mut checked = 0usize;
        'sweep: for s in self.u.base_ids() {
            for a in &self.int2 {
                let cls = a.classical_version().expect("intuitionistic input");
                let middle = Formula::or(cls, Formula::neg(a.clone()));
                checked += 1;
                if !self.wl(s, &middle)? {
                    fail = Some(format!("{middle} fails at base {s}"));
                    break 'sweep;
                }
            }
        }
        Ok(item("mp", fail, format!("{checked} excluded middles valid")))
    }

    // The ecumenical Peirce formula ((A -> B) -> A) -> A^c is locally valid
    // everywhere.
    fn pl(&self) -> Result<SuiteItem, SuiteError> {
        let mut fail = None;
        let mut checked = 0usize;
        'sweep: for s in self.u.base_ids() {
            for a in &self.int1 {
                let cls = a.classical_version().expect("intuitionistic input");
                for b in &self.int1 {
                    let peirce = Formula::imp(
                        Formula::imp(Formula::imp(a.clone(), b.clone()), a.clone()),
                        cls.clone(),
                    );
                    checked += 1;
                    if !self.wl(s, &peirce)? {
                        fail = Some(format!("{peirce} fails at base {s}"));
                        break 'sweep;
                    }
                }
            }
        }
        Ok(item("pl", fail, format!("{checked} instances valid")))
    }

    // Disjunction elimination fails: with A = ~p, B = p^c and
    // C = ~p | ~~p, all three premises are valid in every base of the
    // witness universe, yet C fails at the empty base. The witness
    // universe extends the configured pool with two rules making q track
    // "p is refutable or p is derivable"; a plain axioms-plus-refuters
    // pool satisfies the disjunction clause vacuously everywhere.
    fn proposition(&self) -> Result<SuiteItem, SuiteError> {
        let mut cfg = self.u.config().clone();
        for line in ["(p |- bot) => q", "( |- p) => q"] {
            let rule = parse_rule_line(line).expect("fixed rule text parses");
            if !cfg.extra_rules.contains(&rule) {
                cfg.extra_rules.push(rule);
            }
        }
        let aug = Universe::build(cfg)?;
        let ev = Evaluator::new(&aug);

        let a = Formula::neg(Formula::atom_i("p"));
        let b = Formula::atom_c("p");
        let c = Formula::or(a.clone(), Formula::neg(Formula::neg(Formula::atom_i("p"))));
        let premises = vec![
            Formula::or(a.clone(), b.clone()),
            Formula::imp(a, c.clone()),
            Formula::imp(b, c.clone()),
        ];

        let mut fail = None;
        for premise in &premises {
            if !ev.weak_valid(&[], premise)? {
                fail = Some(format!("premise {premise} is not valid in the witness universe"));
                break;
            }
        }
        let empty = aug
            .base_ids()
            .find(|&s| aug.base(s).is_empty())
            .expect("the empty base is always consistent");
        if fail.is_none() && ev.weak_local(empty, &[], &c)? {
            fail = Some(format!("{c} holds at the empty base"));
        }
        if fail.is_none() && ev.weak_valid(&premises, &c)? {
            fail = Some("the eliminated entailment is valid after all".to_string());
        }
        Ok(item(
            "Proposition",
            fail,
            format!(
                "~p | ~~p refuted at base {empty} under valid or-elimination premises ({} bases)",
                aug.base_count()
            ),
        ))
    }
}
