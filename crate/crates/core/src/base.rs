//! Atomic bases and deducibility.
//!
//! A base is a finite set of atomic rules over basic sentences. Each rule
//! premise may discharge a set of basic hypotheses, so rules are "second
//! level": premises are judgements `P |- p`, not bare sentences. Deducibility
//! is decided by least-fixpoint saturation over sequents.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::formula::Basic;
use crate::sexpr::{self, Sexpr};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Premise {
    pub discharge: BTreeSet<Basic>,
    pub conclusion: Basic,
}

impl Premise {
    pub fn new(discharge: impl IntoIterator<Item = Basic>, conclusion: Basic) -> Self {
        Premise {
            discharge: discharge.into_iter().collect(),
            conclusion,
        }
    }

    pub fn plain(conclusion: Basic) -> Self {
        Premise::new([], conclusion)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomicRule {
    pub premises: Vec<Premise>,
    pub conclusion: Basic,
}

impl AtomicRule {
    pub fn new(premises: Vec<Premise>, conclusion: Basic) -> Self {
        AtomicRule {
            premises,
            conclusion,
        }
    }

    pub fn axiom(conclusion: Basic) -> Self {
        AtomicRule::new(Vec::new(), conclusion)
    }

    pub fn is_axiom(&self) -> bool {
        self.premises.is_empty()
    }

    /// Premise order is significant for derivation checking but not for rule
    /// identity; the canonical form sorts premises.
    pub(crate) fn canonical(&self) -> AtomicRule {
        let mut premises = self.premises.clone();
        premises.sort();
        AtomicRule {
            premises,
            conclusion: self.conclusion.clone(),
        }
    }

    pub fn basics(&self) -> BTreeSet<Basic> {
        let mut out = BTreeSet::new();
        out.insert(self.conclusion.clone());
        for p in &self.premises {
            out.insert(p.conclusion.clone());
            out.extend(p.discharge.iter().cloned());
        }
        out
    }
}

impl fmt::Display for AtomicRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.premises.is_empty() {
            return write!(f, "=> {}", self.conclusion);
        }
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let discharge: Vec<String> = p.discharge.iter().map(|b| b.to_string()).collect();
            write!(f, "({} |- {})", discharge.join(" "), p.conclusion)?;
        }
        write!(f, " => {}", self.conclusion)
    }
}

/// A finite set of atomic rules. Rules keep their insertion order (derivation
/// nodes reference rules by index) but equality, hashing and deduplication
/// use the canonical form: premise order and duplicate rules are ignored.
#[derive(Debug, Clone, Default)]
pub struct Base {
    rules: Vec<AtomicRule>,
}

impl Base {
    pub fn new() -> Self {
        Base::default()
    }

    pub fn from_rules(rules: impl IntoIterator<Item = AtomicRule>) -> Self {
        let mut b = Base::new();
        for r in rules {
            b.add_rule(r);
        }
        b
    }

    /// Returns the rule's index and whether it was newly inserted.
    pub fn add_rule(&mut self, rule: AtomicRule) -> (usize, bool) {
        let canon = rule.canonical();
        for (i, existing) in self.rules.iter().enumerate() {
            if existing.canonical() == canon {
                return (i, false);
            }
        }
        self.rules.push(rule);
        (self.rules.len() - 1, true)
    }

    pub fn rules(&self) -> &[AtomicRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn canon(&self) -> BTreeSet<AtomicRule> {
        self.rules.iter().map(AtomicRule::canonical).collect()
    }

    pub fn basics(&self) -> BTreeSet<Basic> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            out.extend(r.basics());
        }
        out
    }

    pub fn atoms(&self) -> BTreeSet<Basic> {
        self.basics()
            .into_iter()
            .filter(|b| !b.is_falsum())
            .collect()
    }
}

impl PartialEq for Base {
    fn eq(&self, other: &Self) -> bool {
        self.canon() == other.canon()
    }
}

impl Eq for Base {}

impl std::hash::Hash for Base {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canon().hash(state);
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Deducibility engine.

/// Saturation state for one `derives`/`derive_witness` query.
///
/// Sequents are pairs (context, basic). The reference definition saturates
/// over every subset of the relevant basics; we restrict contexts to the
/// closure of the query context under "union with a premise's discharge
/// set", which is the only way the closure step ever enlarges a context.
/// Every sequent the full saturation could consult from the query context is
/// therefore present, so the answers coincide.
struct Saturation {
    contexts: Vec<BTreeSet<Basic>>,
    index: HashMap<BTreeSet<Basic>, usize>,
    /// (context index, basic) -> (rule index, insertion round).
    derived: HashMap<(usize, Basic), (usize, u32)>,
}

impl Saturation {
    fn run(base: &Base, context: &BTreeSet<Basic>, goal: &Basic) -> Saturation {
        let mut relevant = base.basics();
        relevant.extend(context.iter().cloned());
        relevant.insert(goal.clone());
        relevant.insert(Basic::Falsum);

        // Context universe: closure of the query context under discharge
        // unions, intersected with the relevant basics.
        let root: BTreeSet<Basic> = context.iter().cloned().collect();
        let mut contexts = vec![root.clone()];
        let mut index = HashMap::new();
        index.insert(root, 0usize);
        let discharge_sets: Vec<&BTreeSet<Basic>> = base
            .rules()
            .iter()
            .flat_map(|r| r.premises.iter().map(|p| &p.discharge))
            .filter(|d| !d.is_empty())
            .collect();
        let mut frontier = vec![0usize];
        while let Some(ci) = frontier.pop() {
            for d in &discharge_sets {
                let mut next = contexts[ci].clone();
                next.extend((*d).iter().cloned());
                if !index.contains_key(&next) {
                    index.insert(next.clone(), contexts.len());
                    contexts.push(next);
                    frontier.push(contexts.len() - 1);
                }
            }
        }

        let mut sat = Saturation {
            contexts,
            index,
            derived: HashMap::new(),
        };

        // Naive rounds: facts added in round r only justify additions in
        // later rounds, which keeps witness reconstruction well-founded.
        let mut round = 1u32;
        loop {
            let mut added = false;
            for ci in 0..sat.contexts.len() {
                'rules: for (ri, rule) in base.rules().iter().enumerate() {
                    if sat.holds(ci, &rule.conclusion) {
                        continue;
                    }
                    for premise in &rule.premises {
                        let child = sat.child_context(ci, &premise.discharge);
                        if !sat.holds_before(child, &premise.conclusion, round) {
                            continue 'rules;
                        }
                    }
                    sat.derived
                        .insert((ci, rule.conclusion.clone()), (ri, round));
                    added = true;
                }
            }
            if !added {
                break;
            }
            round += 1;
        }
        sat
    }

    fn child_context(&self, ci: usize, discharge: &BTreeSet<Basic>) -> usize {
        if discharge.is_empty() {
            return ci;
        }
        let mut next = self.contexts[ci].clone();
        next.extend(discharge.iter().cloned());
        self.index[&next]
    }

    fn holds(&self, ci: usize, b: &Basic) -> bool {
        self.contexts[ci].contains(b) || self.derived.contains_key(&(ci, b.clone()))
    }

    fn holds_before(&self, ci: usize, b: &Basic, round: u32) -> bool {
        self.contexts[ci].contains(b)
            || self
                .derived
                .get(&(ci, b.clone()))
                .is_some_and(|&(_, r)| r < round)
    }
}

/// Decides `context |-_S goal`. Monotone in both the context and the base.
pub fn derives(base: &Base, context: &BTreeSet<Basic>, goal: &Basic) -> bool {
    Saturation::run(base, context, goal).holds(0, goal)
}

pub fn is_consistent(base: &Base) -> bool {
    !derives(base, &BTreeSet::new(), &Basic::Falsum)
}

/// True when every rule of `base` occurs in `other`.
pub fn extends(base: &Base, other: &Base) -> bool {
    base.canon().is_subset(&other.canon())
}

/// Adds the atomic axiom concluding `p`. The result is consistent exactly
/// when `derives(base, {p}, bot)` is false.
pub fn add_axiom(base: &Base, p: &Basic) -> Base {
    let mut out = base.clone();
    out.add_rule(AtomicRule::axiom(p.clone()));
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BotCompleteError {
    #[error("bot-complete rejects inconsistent bases")]
    Inconsistent,
}

/// Extends a consistent base so every vocab atom is either derivable or
/// refutes to `bot`: visit atoms in the given order, adding the axiom for
/// each atom that does not yet derive `bot`.
pub fn bot_complete(base: &Base, vocab: &[Basic]) -> Result<Base, BotCompleteError> {
    if !is_consistent(base) {
        return Err(BotCompleteError::Inconsistent);
    }
    let mut current = base.clone();
    for atom in vocab {
        let singleton: BTreeSet<Basic> = [atom.clone()].into_iter().collect();
        if !derives(&current, &singleton, &Basic::Falsum) {
            current.add_rule(AtomicRule::axiom(atom.clone()));
        }
    }
    Ok(current)
}

// ---------------------------------------------------------------------------
// Derivations.

/// Derivation tree over some base. `Apply` nodes reference rules by index;
/// a label on an application discharges, within child `i`, exactly the
/// basics in `premises[i].discharge`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtomicDerivation {
    Assume {
        basic: Basic,
        label: Option<String>,
    },
    Apply {
        rule: usize,
        conclusion: Basic,
        label: Option<String>,
        children: Vec<AtomicDerivation>,
    },
}

impl AtomicDerivation {
    pub fn assume(basic: Basic) -> Self {
        AtomicDerivation::Assume { basic, label: None }
    }

    pub fn conclusion(&self) -> &Basic {
        match self {
            AtomicDerivation::Assume { basic, .. } => basic,
            AtomicDerivation::Apply { conclusion, .. } => conclusion,
        }
    }

    pub fn children(&self) -> &[AtomicDerivation] {
        match self {
            AtomicDerivation::Assume { .. } => &[],
            AtomicDerivation::Apply { children, .. } => children,
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(Self::node_count).sum::<usize>()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DerivationError {
    #[error("unknown rule r{index}")]
    UnknownRule { index: usize },
    #[error("premise mismatch at r{index}: {detail}")]
    PremiseMismatch { index: usize, detail: String },
    #[error("dangling or ill-scoped discharge label {label}")]
    BadDischarge { label: String },
}

/// Validates a derivation against a base and returns the sequent it
/// establishes: (open assumptions, conclusion).
pub fn check_derivation(
    base: &Base,
    d: &AtomicDerivation,
) -> Result<(BTreeSet<Basic>, Basic), DerivationError> {
    let mut open = BTreeSet::new();
    let mut env: Vec<(String, BTreeSet<Basic>)> = Vec::new();
    let conclusion = check_node(base, d, &mut env, &mut open)?;
    Ok((open, conclusion))
}

fn check_node(
    base: &Base,
    d: &AtomicDerivation,
    env: &mut Vec<(String, BTreeSet<Basic>)>,
    open: &mut BTreeSet<Basic>,
) -> Result<Basic, DerivationError> {
    match d {
        AtomicDerivation::Assume { basic, label: None } => {
            open.insert(basic.clone());
            Ok(basic.clone())
        }
        AtomicDerivation::Assume {
            basic,
            label: Some(label),
        } => {
            // Innermost binding of the label wins; shadowed bindings are
            // not consulted.
            match env.iter().rev().find(|(l, _)| l == label) {
                Some((_, discharge)) if discharge.contains(basic) => Ok(basic.clone()),
                _ => Err(DerivationError::BadDischarge {
                    label: label.clone(),
                }),
            }
        }
        AtomicDerivation::Apply {
            rule,
            conclusion,
            label,
            children,
        } => {
            let r = base
                .rules()
                .get(*rule)
                .ok_or(DerivationError::UnknownRule { index: *rule })?;
            if children.len() != r.premises.len() {
                return Err(DerivationError::PremiseMismatch {
                    index: *rule,
                    detail: format!(
                        "expected {} premises, found {}",
                        r.premises.len(),
                        children.len()
                    ),
                });
            }
            if conclusion != &r.conclusion {
                return Err(DerivationError::PremiseMismatch {
                    index: *rule,
                    detail: format!(
                        "conclusion {} does not match rule conclusion {}",
                        conclusion, r.conclusion
                    ),
                });
            }
            for (i, child) in children.iter().enumerate() {
                let scoped = label.is_some();
                if let Some(l) = label {
                    env.push((l.clone(), r.premises[i].discharge.clone()));
                }
                let got = check_node(base, child, env, open)?;
                if scoped {
                    env.pop();
                }
                if got != r.premises[i].conclusion {
                    return Err(DerivationError::PremiseMismatch {
                        index: *rule,
                        detail: format!(
                            "premise {} expects {}, child concludes {}",
                            i, r.premises[i].conclusion, got
                        ),
                    });
                }
            }
            Ok(conclusion.clone())
        }
    }
}

/// Produces a derivation witnessing `derives(base, context, goal)`, or None
/// when the sequent does not hold. The witness always passes
/// `check_derivation` with conclusion `goal` and open assumptions within the
/// context. Application labels are globally unique within the witness.
pub fn derive_witness(
    base: &Base,
    context: &BTreeSet<Basic>,
    goal: &Basic,
) -> Option<AtomicDerivation> {
    let sat = Saturation::run(base, context, goal);
    if !sat.holds(0, goal) {
        return None;
    }
    let mut counter = 0usize;
    let mut binders: Vec<(String, BTreeSet<Basic>)> = Vec::new();
    Some(reconstruct(
        base, &sat, 0, goal, context, &mut binders, &mut counter,
    ))
}

fn reconstruct(
    base: &Base,
    sat: &Saturation,
    ci: usize,
    goal: &Basic,
    root_context: &BTreeSet<Basic>,
    binders: &mut Vec<(String, BTreeSet<Basic>)>,
    counter: &mut usize,
) -> AtomicDerivation {
    // Prefer assumptions: innermost discharge binder first, then the open
    // context.
    if sat.contexts[ci].contains(goal) {
        if let Some((label, _)) = binders
            .iter()
            .rev()
            .find(|(_, discharge)| discharge.contains(goal))
        {
            return AtomicDerivation::Assume {
                basic: goal.clone(),
                label: Some(label.clone()),
            };
        }
        if root_context.contains(goal) {
            return AtomicDerivation::Assume {
                basic: goal.clone(),
                label: None,
            };
        }
        unreachable!("context basic {goal} has no binder and is not in the root context");
    }
    let &(ri, round) = sat
        .derived
        .get(&(ci, goal.clone()))
        .expect("saturation fact disappeared");
    let rule = &base.rules()[ri];
    let needs_label = rule.premises.iter().any(|p| !p.discharge.is_empty());
    let label = needs_label.then(|| {
        *counter += 1;
        format!("n{counter}")
    });
    let mut children = Vec::with_capacity(rule.premises.len());
    for premise in &rule.premises {
        let child_ci = sat.child_context(ci, &premise.discharge);
        debug_assert!(
            sat.holds_before(child_ci, &premise.conclusion, round),
            "witness premise not justified by an earlier round"
        );
        if let Some(l) = &label {
            binders.push((l.clone(), premise.discharge.clone()));
        }
        children.push(reconstruct(
            base,
            sat,
            child_ci,
            &premise.conclusion,
            root_context,
            binders,
            counter,
        ));
        if label.is_some() {
            binders.pop();
        }
    }
    AtomicDerivation::Apply {
        rule: ri,
        conclusion: goal.clone(),
        label,
        children,
    }
}

// ---------------------------------------------------------------------------
// Base file format.
//
//   rule    := premise ("," premise)* "=>" basic | "=>" basic
//   premise := "(" basic* "|-" basic ")"
//
// One rule per line; `#` starts a comment; blank lines are ignored.

#[derive(Debug, Error, PartialEq, Eq)]
#[error("base file error on line {line}: {message}")]
pub struct BaseParseError {
    pub line: usize,
    pub message: String,
}

pub fn parse_base(input: &str) -> Result<Base, BaseParseError> {
    let mut base = Base::new();
    for (lineno, raw) in input.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let rule = parse_rule_line(line).map_err(|message| BaseParseError {
            line: lineno + 1,
            message,
        })?;
        base.add_rule(rule);
    }
    Ok(base)
}

pub fn parse_rule_line(line: &str) -> Result<AtomicRule, String> {
    let toks = tokenize_rule(line)?;
    let mut pos = 0;
    let mut premises = Vec::new();
    while toks.get(pos).map(String::as_str) == Some("(") {
        pos += 1;
        let mut discharge = BTreeSet::new();
        while toks.get(pos).is_some_and(|t| t != "|-") {
            discharge.insert(parse_basic_token(&toks[pos])?);
            pos += 1;
        }
        if toks.get(pos).map(String::as_str) != Some("|-") {
            return Err("expected `|-` in premise".into());
        }
        pos += 1;
        let conclusion =
            parse_basic_token(toks.get(pos).ok_or("expected premise conclusion")?)?;
        pos += 1;
        if toks.get(pos).map(String::as_str) != Some(")") {
            return Err("expected `)` after premise".into());
        }
        pos += 1;
        premises.push(Premise {
            discharge,
            conclusion,
        });
        if toks.get(pos).map(String::as_str) == Some(",") {
            pos += 1;
            if toks.get(pos).map(String::as_str) != Some("(") {
                return Err("expected premise after `,`".into());
            }
        }
    }
    if toks.get(pos).map(String::as_str) != Some("=>") {
        return Err("expected `=>`".into());
    }
    pos += 1;
    let conclusion = parse_basic_token(toks.get(pos).ok_or("expected rule conclusion")?)?;
    pos += 1;
    if pos != toks.len() {
        return Err(format!("unexpected trailing token `{}`", toks[pos]));
    }
    Ok(AtomicRule::new(premises, conclusion))
}

fn tokenize_rule(line: &str) -> Result<Vec<String>, String> {
    let mut toks = Vec::new();
    let bytes = line.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b' ' | b'\t' => i += 1,
            b'(' | b')' | b',' => {
                toks.push((bytes[i] as char).to_string());
                i += 1;
            }
            b'=' if bytes.get(i + 1) == Some(&b'>') => {
                toks.push("=>".into());
                i += 2;
            }
            b'|' if bytes.get(i + 1) == Some(&b'-') => {
                toks.push("|-".into());
                i += 2;
            }
            c if c.is_ascii_lowercase() || c == b'$' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'$')
                {
                    i += 1;
                }
                toks.push(line[start..i].to_string());
            }
            c => return Err(format!("unexpected character `{}`", c as char)),
        }
    }
    Ok(toks)
}

/// Basic-sentence tokens in base files and CLI arguments: `bot` or an atom.
/// The fresh-atom sigil is accepted here (unlike in formulas) so exported
/// simulation bases round-trip.
pub fn parse_basic_token(tok: &str) -> Result<Basic, String> {
    if tok == "bot" {
        return Ok(Basic::Falsum);
    }
    let mut chars = tok.chars();
    let ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_lowercase() || c == crate::formula::FRESH_SIGIL)
        && tok
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == crate::formula::FRESH_SIGIL);
    if !ok {
        return Err(format!("invalid basic sentence `{tok}`"));
    }
    Ok(Basic::Atom(tok.to_string()))
}

pub fn render_base(base: &Base) -> String {
    base.to_string()
}

// ---------------------------------------------------------------------------
// Derivation file format: the proof s-expression format with rule names
// `r<index>`.

#[derive(Debug, Error, PartialEq, Eq)]
#[error("derivation file error at byte {offset}: {message}")]
pub struct DerivationParseError {
    pub offset: usize,
    pub message: String,
}

pub fn render_derivation(d: &AtomicDerivation) -> String {
    let mut out = String::new();
    render_deriv_node(d, 0, &mut out);
    out.push('\n');
    out
}

fn render_deriv_node(d: &AtomicDerivation, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match d {
        AtomicDerivation::Assume { basic, label } => {
            out.push_str(&pad);
            match label {
                Some(l) => out.push_str(&format!("(assume {} {l})", sexpr::quote(&basic.to_string()))),
                None => out.push_str(&format!("(assume {})", sexpr::quote(&basic.to_string()))),
            }
        }
        AtomicDerivation::Apply {
            rule,
            conclusion,
            label,
            children,
        } => {
            out.push_str(&pad);
            out.push_str(&format!("(r{rule} {}", sexpr::quote(&conclusion.to_string())));
            if let Some(l) = label {
                out.push_str(&format!(" :discharge {l}"));
            }
            for child in children {
                out.push('\n');
                render_deriv_node(child, indent + 1, out);
            }
            out.push(')');
        }
    }
}

pub fn parse_derivation(input: &str) -> Result<AtomicDerivation, DerivationParseError> {
    let node = sexpr::parse(input).map_err(|e| DerivationParseError {
        offset: e.offset,
        message: e.message,
    })?;
    convert_deriv(&node)
}

fn convert_deriv(node: &Sexpr) -> Result<AtomicDerivation, DerivationParseError> {
    let fail = |offset: usize, message: &str| DerivationParseError {
        offset,
        message: message.to_string(),
    };
    let Sexpr::List(items, offset) = node else {
        return Err(fail(node.offset(), "expected a derivation node"));
    };
    let Some(Sexpr::Sym(head, _)) = items.first() else {
        return Err(fail(*offset, "expected a node head symbol"));
    };
    let basic_arg = |i: usize| -> Result<Basic, DerivationParseError> {
        match items.get(i) {
            Some(Sexpr::Str(s, o)) => {
                parse_basic_token(s).map_err(|m| fail(*o, &m))
            }
            other => Err(fail(
                other.map_or(*offset, Sexpr::offset),
                "expected a quoted basic sentence",
            )),
        }
    };
    if head == "assume" {
        let basic = basic_arg(1)?;
        let label = match items.get(2) {
            None => None,
            Some(Sexpr::Sym(l, _)) => Some(l.clone()),
            Some(other) => return Err(fail(other.offset(), "expected a label symbol")),
        };
        if items.len() > 3 {
            return Err(fail(*offset, "unexpected items after assumption"));
        }
        return Ok(AtomicDerivation::Assume { basic, label });
    }
    let rule: usize = head
        .strip_prefix('r')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| fail(*offset, "expected `assume` or a rule name `r<index>`"))?;
    let conclusion = basic_arg(1)?;
    let mut pos = 2;
    let mut label = None;
    if matches!(items.get(pos), Some(Sexpr::Sym(s, _)) if s == ":discharge") {
        match items.get(pos + 1) {
            Some(Sexpr::Sym(l, _)) => {
                label = Some(l.clone());
                pos += 2;
            }
            other => {
                return Err(fail(
                    other.map_or(*offset, Sexpr::offset),
                    "expected a label after :discharge",
                ))
            }
        }
    }
    let children = items[pos..]
        .iter()
        .map(convert_deriv)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AtomicDerivation::Apply {
        rule,
        conclusion,
        label,
        children,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(s: &str) -> Basic {
        Basic::atom(s)
    }

    fn ctx(items: &[Basic]) -> BTreeSet<Basic> {
        items.iter().cloned().collect()
    }

    fn bot_rule(p: &str) -> AtomicRule {
        AtomicRule::new(vec![Premise::plain(atom(p))], Basic::Falsum)
    }

    #[test]
    fn assumption_alone_derives() {
        let empty = Base::new();
        assert!(derives(&empty, &ctx(&[atom("p")]), &atom("p")));
        assert!(!derives(&empty, &BTreeSet::new(), &atom("p")));
    }

    #[test]
    fn single_rule_composition() {
        let base = Base::from_rules([bot_rule("p")]);
        assert!(derives(&base, &ctx(&[atom("p")]), &Basic::Falsum));
        assert!(is_consistent(&base));
        assert!(!is_consistent(&Base::from_rules([
            AtomicRule::axiom(atom("p")),
            bot_rule("p")
        ])));
    }

    #[test]
    fn discharge_rule_derives_and_witnesses() {
        // (q |- p) => r : r holds if p is derivable from assumption q.
        let base = Base::from_rules([
            AtomicRule::new(vec![Premise::new([atom("q")], atom("p"))], atom("r")),
            AtomicRule::new(vec![Premise::plain(atom("q"))], atom("p")),
        ]);
        assert!(derives(&base, &BTreeSet::new(), &atom("r")));
        let w = derive_witness(&base, &BTreeSet::new(), &atom("r")).unwrap();
        let (open, concl) = check_derivation(&base, &w).unwrap();
        assert!(open.is_empty());
        assert_eq!(concl, atom("r"));
    }

    #[test]
    fn witness_assumes_from_context() {
        let base = Base::from_rules([AtomicRule::axiom(atom("p"))]);
        let w = derive_witness(&base, &BTreeSet::new(), &atom("p")).unwrap();
        assert_eq!(w.node_count(), 1);
        assert!(derive_witness(&base, &BTreeSet::new(), &atom("z")).is_none());
    }

    #[test]
    fn checker_rejects_unknown_rule_and_mismatches() {
        let base = Base::from_rules([AtomicRule::axiom(atom("p"))]);
        let bad = AtomicDerivation::Apply {
            rule: 7,
            conclusion: atom("p"),
            label: None,
            children: vec![],
        };
        assert_eq!(
            check_derivation(&base, &bad),
            Err(DerivationError::UnknownRule { index: 7 })
        );
        let wrong_concl = AtomicDerivation::Apply {
            rule: 0,
            conclusion: atom("q"),
            label: None,
            children: vec![],
        };
        assert!(matches!(
            check_derivation(&base, &wrong_concl),
            Err(DerivationError::PremiseMismatch { index: 0, .. })
        ));
    }

    #[test]
    fn checker_rejects_ill_scoped_discharge() {
        let base = Base::from_rules([AtomicRule::new(
            vec![Premise::new([atom("q")], atom("q"))],
            atom("r"),
        )]);
        // Label used by a leaf whose basic is not in the discharge set.
        let bad = AtomicDerivation::Apply {
            rule: 0,
            conclusion: atom("r"),
            label: Some("u".into()),
            children: vec![AtomicDerivation::Assume {
                basic: atom("p"),
                label: Some("u".into()),
            }],
        };
        assert!(matches!(
            check_derivation(&base, &bad),
            Err(DerivationError::BadDischarge { .. })
        ));
        // Label with no binder at all.
        let dangling = AtomicDerivation::Assume {
            basic: atom("q"),
            label: Some("nowhere".into()),
        };
        assert!(matches!(
            check_derivation(&base, &dangling),
            Err(DerivationError::BadDischarge { .. })
        ));
    }

    #[test]
    fn add_axiom_consistency_biconditional() {
        let empty = Base::new();
        assert!(is_consistent(&add_axiom(&empty, &atom("p"))));
        let refuter = Base::from_rules([bot_rule("p")]);
        assert!(!is_consistent(&add_axiom(&refuter, &atom("p"))));
        assert!(extends(&refuter, &add_axiom(&refuter, &atom("p"))));
    }

    #[test]
    fn bot_complete_examples() {
        let vocab = [atom("p"), atom("q")];
        let done = bot_complete(&Base::new(), &vocab).unwrap();
        assert_eq!(
            done,
            Base::from_rules([AtomicRule::axiom(atom("p")), AtomicRule::axiom(atom("q"))])
        );
        let partial = bot_complete(&Base::from_rules([bot_rule("p")]), &vocab).unwrap();
        assert_eq!(
            partial,
            Base::from_rules([bot_rule("p"), AtomicRule::axiom(atom("q"))])
        );
        let bad = Base::from_rules([AtomicRule::axiom(atom("p")), bot_rule("p")]);
        assert_eq!(bot_complete(&bad, &vocab), Err(BotCompleteError::Inconsistent));
    }

    #[test]
    fn rule_identity_ignores_premise_order() {
        let r1 = AtomicRule::new(
            vec![Premise::plain(atom("a")), Premise::plain(atom("b"))],
            atom("c"),
        );
        let r2 = AtomicRule::new(
            vec![Premise::plain(atom("b")), Premise::plain(atom("a"))],
            atom("c"),
        );
        let mut base = Base::new();
        assert_eq!(base.add_rule(r1), (0, true));
        assert_eq!(base.add_rule(r2), (0, false));
        assert_eq!(base.len(), 1);
    }

    #[test]
    fn base_file_round_trip() {
        let text = "# sample\n(q |- p), ( |- r) => s\n=> p\n(a b |- bot) => q\n";
        let base = parse_base(text).unwrap();
        assert_eq!(base.len(), 3);
        assert_eq!(base.rules()[0].premises.len(), 2);
        let rendered = render_base(&base);
        assert_eq!(parse_base(&rendered).unwrap(), base);
        assert!(rendered.contains("(q |- p), ( |- r) => s"));
    }

    #[test]
    fn base_file_rejects_garbage() {
        assert!(parse_base("p => q").is_err());
        assert!(parse_base("=> P").is_err());
        assert!(parse_base("( |- p) q").is_err());
    }

    #[test]
    fn derivation_file_round_trip() {
        let base = Base::from_rules([
            AtomicRule::new(vec![Premise::new([atom("q")], atom("p"))], atom("r")),
            AtomicRule::new(vec![Premise::plain(atom("q"))], atom("p")),
        ]);
        let w = derive_witness(&base, &BTreeSet::new(), &atom("r")).unwrap();
        let text = render_derivation(&w);
        let back = parse_derivation(&text).unwrap();
        assert_eq!(back, w);
        assert_eq!(render_derivation(&back), text);
    }
}
