//! Natural-deduction proof objects for the ecumenical calculus, their
//! checker, and an exact decision procedure for strong validity.
//!
//! Proof search for the natural-deduction system is out of scope: proofs
//! come from files or from the simulation round-trip. Deciding strong
//! validity instead goes through the double-negation translation followed
//! by terminating root-first search in a contraction-free intuitionistic
//! sequent calculus.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::Formula;
use crate::semantics::Evaluator;
use crate::sexpr::{self, Sexpr};
use crate::universe::Universe;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Assumption,
    ImpIntro,
    ImpElim,
    OrIntroL,
    OrIntroR,
    OrElim,
    AndIntro,
    AndElimL,
    AndElimR,
    BotElim,
    ClassIntro,
    ClassElim,
}

impl RuleKind {
    pub fn token(self) -> &'static str {
        match self {
            RuleKind::Assumption => "assume",
            RuleKind::ImpIntro => "imp-intro",
            RuleKind::ImpElim => "imp-elim",
            RuleKind::OrIntroL => "or-intro-l",
            RuleKind::OrIntroR => "or-intro-r",
            RuleKind::OrElim => "or-elim",
            RuleKind::AndIntro => "and-intro",
            RuleKind::AndElimL => "and-elim-l",
            RuleKind::AndElimR => "and-elim-r",
            RuleKind::BotElim => "bot-elim",
            RuleKind::ClassIntro => "class-intro",
            RuleKind::ClassElim => "class-elim",
        }
    }

    pub fn from_token(tok: &str) -> Option<RuleKind> {
        Some(match tok {
            "assume" => RuleKind::Assumption,
            "imp-intro" => RuleKind::ImpIntro,
            "imp-elim" => RuleKind::ImpElim,
            "or-intro-l" => RuleKind::OrIntroL,
            "or-intro-r" => RuleKind::OrIntroR,
            "or-elim" => RuleKind::OrElim,
            "and-intro" => RuleKind::AndIntro,
            "and-elim-l" => RuleKind::AndElimL,
            "and-elim-r" => RuleKind::AndElimR,
            "bot-elim" => RuleKind::BotElim,
            "class-intro" => RuleKind::ClassIntro,
            "class-elim" => RuleKind::ClassElim,
            _ => return None,
        })
    }

    /// Rules that may carry a discharge label.
    pub fn discharges(self) -> bool {
        matches!(
            self,
            RuleKind::ImpIntro | RuleKind::OrElim | RuleKind::ClassIntro
        )
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// One node of a natural-deduction proof tree. `label` is the discharge
/// label bound by this node (on discharging rules) or the label under
/// which the leaf is discharged (on assumptions).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NDProof {
    pub kind: RuleKind,
    pub conclusion: Formula,
    pub label: Option<String>,
    pub children: Vec<NDProof>,
}

impl NDProof {
    pub fn assume(conclusion: Formula) -> NDProof {
        NDProof {
            kind: RuleKind::Assumption,
            conclusion,
            label: None,
            children: vec![],
        }
    }

    pub fn assume_labeled(conclusion: Formula, label: impl Into<String>) -> NDProof {
        NDProof {
            kind: RuleKind::Assumption,
            conclusion,
            label: Some(label.into()),
            children: vec![],
        }
    }

    pub fn node(
        kind: RuleKind,
        conclusion: Formula,
        label: Option<String>,
        children: Vec<NDProof>,
    ) -> NDProof {
        NDProof {
            kind,
            conclusion,
            label,
            children,
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(NDProof::node_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(NDProof::depth)
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProofError {
    #[error("schema mismatch for {rule} at {path}: {detail}")]
    SchemaMismatch {
        rule: RuleKind,
        path: String,
        detail: String,
    },
    #[error("dangling or ill-scoped discharge label {label} at {path}")]
    IllScopedDischarge { label: String, path: String },
    #[error("classical-wrap nesting violation at {path}")]
    ClassicalNesting { path: String },
    #[error("decider requires intuitionistic formulas, got {formula}")]
    NonIntuitionistic { formula: String },
}

fn path_str(path: &[usize]) -> String {
    let mut s = String::from("root");
    for i in path {
        s.push('.');
        s.push_str(&i.to_string());
    }
    s
}

/// Validates every node of the proof and returns the established sequent:
/// the set of open assumptions and the conclusion.
pub fn check_nd(p: &NDProof) -> Result<(BTreeSet<Formula>, Formula), ProofError> {
    let mut open = BTreeSet::new();
    let mut scope: Vec<(String, Formula)> = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    check_node(p, &mut scope, &mut open, &mut path)?;
    Ok((open, p.conclusion.clone()))
}

fn mismatch(node: &NDProof, path: &[usize], detail: String) -> ProofError {
    ProofError::SchemaMismatch {
        rule: node.kind,
        path: path_str(path),
        detail,
    }
}

/// Checks child `i`, optionally under one extra discharge binding.
fn check_child(
    node: &NDProof,
    i: usize,
    binding: Option<(&str, &Formula)>,
    scope: &mut Vec<(String, Formula)>,
    open: &mut BTreeSet<Formula>,
    path: &mut Vec<usize>,
) -> Result<(), ProofError> {
    path.push(i);
    let pushed = if let Some((l, f)) = binding {
        scope.push((l.to_string(), f.clone()));
        true
    } else {
        false
    };
    let r = check_node(&node.children[i], scope, open, path);
    if pushed {
        scope.pop();
    }
    path.pop();
    r
}

fn check_node(
    node: &NDProof,
    scope: &mut Vec<(String, Formula)>,
    open: &mut BTreeSet<Formula>,
    path: &mut Vec<usize>,
) -> Result<(), ProofError> {
    if !node.conclusion.is_well_formed() {
        return Err(ProofError::ClassicalNesting {
            path: path_str(path),
        });
    }
    if node.label.is_some() && !node.kind.discharges() && node.kind != RuleKind::Assumption {
        return Err(mismatch(node, path, "rule does not discharge".into()));
    }
    let expected = match node.kind {
        RuleKind::Assumption => 0,
        RuleKind::ImpIntro
        | RuleKind::OrIntroL
        | RuleKind::OrIntroR
        | RuleKind::AndElimL
        | RuleKind::AndElimR
        | RuleKind::BotElim
        | RuleKind::ClassIntro => 1,
        RuleKind::ImpElim | RuleKind::AndIntro | RuleKind::ClassElim => 2,
        RuleKind::OrElim => 3,
    };
    if node.children.len() != expected {
        return Err(mismatch(
            node,
            path,
            format!("expected {expected} premises, found {}", node.children.len()),
        ));
    }
    match node.kind {
        RuleKind::Assumption => {
            match &node.label {
                None => {
                    open.insert(node.conclusion.clone());
                }
                Some(l) => {
                    // innermost binding wins
                    match scope.iter().rev().find(|(name, _)| name == l) {
                        Some((_, bound)) if *bound == node.conclusion => {}
                        _ => {
                            return Err(ProofError::IllScopedDischarge {
                                label: l.clone(),
                                path: path_str(path),
                            })
                        }
                    }
                }
            }
            Ok(())
        }
        RuleKind::ImpIntro => {
            let Formula::Imp(a, b) = &node.conclusion else {
                return Err(mismatch(node, path, "conclusion is not an implication".into()));
            };
            if node.children[0].conclusion != **b {
                return Err(mismatch(
                    node,
                    path,
                    format!("premise concludes {}, expected {b}", node.children[0].conclusion),
                ));
            }
            let binding = node.label.as_deref().map(|l| (l, &**a));
            check_child(node, 0, binding, scope, open, path)
        }
        RuleKind::ImpElim => {
            let Formula::Imp(a, b) = &node.children[0].conclusion else {
                return Err(mismatch(node, path, "major premise is not an implication".into()));
            };
            if node.conclusion != **b {
                return Err(mismatch(
                    node,
                    path,
                    format!("conclusion {} does not match consequent {b}", node.conclusion),
                ));
            }
            if node.children[1].conclusion != **a {
                return Err(mismatch(
                    node,
                    path,
                    format!(
                        "minor premise concludes {}, expected {a}",
                        node.children[1].conclusion
                    ),
                ));
            }
            check_child(node, 0, None, scope, open, path)?;
            check_child(node, 1, None, scope, open, path)
        }
        RuleKind::OrIntroL | RuleKind::OrIntroR => {
            let Formula::Or(a, b) = &node.conclusion else {
                return Err(mismatch(node, path, "conclusion is not a disjunction".into()));
            };
            let side = if node.kind == RuleKind::OrIntroL { a } else { b };
            if node.children[0].conclusion != **side {
                return Err(mismatch(
                    node,
                    path,
                    format!(
                        "premise concludes {}, expected {side}",
                        node.children[0].conclusion
                    ),
                ));
            }
            check_child(node, 0, None, scope, open, path)
        }
        RuleKind::OrElim => {
            let Formula::Or(a, b) = node.children[0].conclusion.clone() else {
                return Err(mismatch(node, path, "major premise is not a disjunction".into()));
            };
            for i in [1, 2] {
                if node.children[i].conclusion != node.conclusion {
                    return Err(mismatch(
                        node,
                        path,
                        format!(
                            "minor premise {} concludes {}, expected {}",
                            i, node.children[i].conclusion, node.conclusion
                        ),
                    ));
                }
            }
            check_child(node, 0, None, scope, open, path)?;
            let case = node.label.as_deref();
            check_child(node, 1, case.map(|l| (l, &*a)), scope, open, path)?;
            check_child(node, 2, case.map(|l| (l, &*b)), scope, open, path)
        }
        RuleKind::AndIntro => {
            let Formula::And(a, b) = &node.conclusion else {
                return Err(mismatch(node, path, "conclusion is not a conjunction".into()));
            };
            for (i, side) in [(0, a), (1, b)] {
                if node.children[i].conclusion != **side {
                    return Err(mismatch(
                        node,
                        path,
                        format!(
                            "premise {} concludes {}, expected {side}",
                            i, node.children[i].conclusion
                        ),
                    ));
                }
            }
            check_child(node, 0, None, scope, open, path)?;
            check_child(node, 1, None, scope, open, path)
        }
        RuleKind::AndElimL | RuleKind::AndElimR => {
            let Formula::And(a, b) = &node.children[0].conclusion else {
                return Err(mismatch(node, path, "premise is not a conjunction".into()));
            };
            let side = if node.kind == RuleKind::AndElimL { a } else { b };
            if node.conclusion != **side {
                return Err(mismatch(
                    node,
                    path,
                    format!(
                        "conclusion {} does not match projected side {side}",
                        node.conclusion
                    ),
                ));
            }
            check_child(node, 0, None, scope, open, path)
        }
        RuleKind::BotElim => {
            if node.children[0].conclusion != Formula::falsum() {
                return Err(mismatch(
                    node,
                    path,
                    format!(
                        "premise concludes {}, expected bot",
                        node.children[0].conclusion
                    ),
                ));
            }
            check_child(node, 0, None, scope, open, path)
        }
        RuleKind::ClassIntro => {
            if node.children[0].conclusion != Formula::falsum() {
                return Err(mismatch(
                    node,
                    path,
                    format!(
                        "premise concludes {}, expected bot",
                        node.children[0].conclusion
                    ),
                ));
            }
            let inner = classical_operand(&node.conclusion).ok_or_else(|| {
                mismatch(node, path, "conclusion is not a classical formula".into())
            })?;
            let discharged = Formula::neg(inner);
            let binding = node.label.as_deref().map(|l| (l, &discharged));
            check_child(node, 0, binding, scope, open, path)
        }
        RuleKind::ClassElim => {
            if node.conclusion != Formula::falsum() {
                return Err(mismatch(node, path, "conclusion must be bot".into()));
            }
            let inner = classical_operand(&node.children[0].conclusion).ok_or_else(|| {
                mismatch(node, path, "major premise is not a classical formula".into())
            })?;
            let expected = Formula::neg(inner);
            if node.children[1].conclusion != expected {
                return Err(mismatch(
                    node,
                    path,
                    format!(
                        "minor premise concludes {}, expected {expected}",
                        node.children[1].conclusion
                    ),
                ));
            }
            check_child(node, 0, None, scope, open, path)?;
            check_child(node, 1, None, scope, open, path)
        }
    }
}

/// The intuitionistic formula whose classical version the argument is,
/// if it is one.
fn classical_operand(f: &Formula) -> Option<Formula> {
    match f {
        Formula::BasicC(b) => Some(Formula::BasicI(b.clone())),
        Formula::Classical(inner) => Some((**inner).clone()),
        _ => None,
    }
}

/// A decision-calculus state: intuitionistic context and goal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequentGoal {
    pub context: Vec<Formula>,
    pub goal: Formula,
}

impl SequentGoal {
    pub fn new(context: impl Into<Vec<Formula>>, goal: Formula) -> Self {
        SequentGoal {
            context: context.into(),
            goal,
        }
    }
}

/// Decides derivability in intuitionistic propositional logic by
/// root-first search in the contraction-free sequent calculus. The
/// four-way split of left implication by the head of its antecedent makes
/// every rule strictly decrease a multiset measure, so the search
/// terminates without loop checking. Rule order is fixed: invertible
/// rules first, then the right disjunction split, then left nested
/// implication.
pub fn decide_ipc(g: &SequentGoal) -> Result<bool, ProofError> {
    for f in g.context.iter().chain(std::iter::once(&g.goal)) {
        if !f.is_intuitionistic() {
            return Err(ProofError::NonIntuitionistic {
                formula: f.to_string(),
            });
        }
    }
    Ok(prove(g.context.clone(), g.goal.clone()))
}

fn prove(mut ctx: Vec<Formula>, mut goal: Formula) -> bool {
    loop {
        if ctx.iter().any(|f| *f == Formula::falsum()) {
            return true;
        }
        if ctx.contains(&goal) {
            return true;
        }
        if let Formula::Imp(a, b) = goal {
            ctx.push(*a);
            goal = *b;
            continue;
        }
        // invertible left rules, first applicable context member
        let mut fired = false;
        for i in 0..ctx.len() {
            match &ctx[i] {
                Formula::And(a, b) => {
                    let (a, b) = ((**a).clone(), (**b).clone());
                    ctx.swap_remove(i);
                    ctx.push(a);
                    ctx.push(b);
                    fired = true;
                }
                Formula::Or(a, b) => {
                    let (a, b) = ((**a).clone(), (**b).clone());
                    ctx.swap_remove(i);
                    let mut left = ctx.clone();
                    left.push(a);
                    ctx.push(b);
                    return prove(left, goal.clone()) && prove(ctx, goal);
                }
                Formula::Imp(h, b) => match &**h {
                    Formula::BasicI(_) if ctx.iter().any(|g| g == &**h) => {
                        let b = (**b).clone();
                        ctx.swap_remove(i);
                        ctx.push(b);
                        fired = true;
                    }
                    Formula::And(x, y) => {
                        let curried =
                            Formula::imp((**x).clone(), Formula::imp((**y).clone(), (**b).clone()));
                        ctx.swap_remove(i);
                        ctx.push(curried);
                        fired = true;
                    }
                    Formula::Or(x, y) => {
                        let fst = Formula::imp((**x).clone(), (**b).clone());
                        let snd = Formula::imp((**y).clone(), (**b).clone());
                        ctx.swap_remove(i);
                        ctx.push(fst);
                        ctx.push(snd);
                        fired = true;
                    }
                    _ => {}
                },
                _ => {}
            }
            if fired {
                break;
            }
        }
        if fired {
            continue;
        }
        if let Formula::And(a, b) = &goal {
            return prove(ctx.clone(), (**a).clone()) && prove(ctx, (**b).clone());
        }
        // choice points: right disjunction, then nested left implication
        if let Formula::Or(a, b) = &goal {
            if prove(ctx.clone(), (**a).clone()) || prove(ctx.clone(), (**b).clone()) {
                return true;
            }
        }
        for i in 0..ctx.len() {
            let Formula::Imp(h, c) = &ctx[i] else { continue };
            let Formula::Imp(x, y) = &**h else { continue };
            let mut rest: Vec<Formula> = ctx.clone();
            rest.swap_remove(i);
            let mut major_ctx = rest.clone();
            major_ctx.push(Formula::imp((**y).clone(), (**c).clone()));
            let major_goal = Formula::imp((**x).clone(), (**y).clone());
            let mut minor_ctx = rest;
            minor_ctx.push((**c).clone());
            if prove(major_ctx, major_goal) && prove(minor_ctx, goal.clone()) {
                return true;
            }
        }
        return false;
    }
}

/// Decides strong validity exactly: translate classical constructs to
/// double negations and decide the resulting intuitionistic sequent.
pub fn decide_strong(context: &[Formula], goal: &Formula) -> bool {
    let g = SequentGoal::new(
        context.iter().map(Formula::dn_translate).collect::<Vec<_>>(),
        goal.dn_translate(),
    );
    decide_ipc(&g).expect("double-negation translation yields intuitionistic formulas")
}

/// Checks the proof, then confirms its sequent is strongly satisfied at
/// every base of the universe. Panics if the universe's vocabulary does
/// not cover the proof.
pub fn soundness_spotcheck(u: &Universe, p: &NDProof) -> Result<bool, ProofError> {
    let (open, conclusion) = check_nd(p)?;
    let context: Vec<Formula> = open.into_iter().collect();
    let ev = Evaluator::new(u);
    for s in u.base_ids() {
        let holds = ev
            .strong_sat(s, &context, &conclusion)
            .expect("universe vocabulary covers the proof");
        if !holds {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Proof file format: one parenthesized node per rule application,
// `(rule-name "CONCLUSION" :discharge label child*)`, assumptions as
// `(assume "FORMULA" label?)`.

#[derive(Debug, Error, PartialEq, Eq)]
#[error("proof file error at byte {offset}: {message}")]
pub struct ProofParseError {
    pub offset: usize,
    pub message: String,
}

pub fn render_proof(p: &NDProof) -> String {
    let mut out = String::new();
    render_node(p, 0, &mut out);
    out.push('\n');
    out
}

fn render_node(p: &NDProof, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    out.push_str(&pad);
    if p.kind == RuleKind::Assumption {
        match &p.label {
            Some(l) => out.push_str(&format!(
                "(assume {} {l})",
                sexpr::quote(&p.conclusion.to_string())
            )),
            None => out.push_str(&format!(
                "(assume {})",
                sexpr::quote(&p.conclusion.to_string())
            )),
        }
        return;
    }
    out.push_str(&format!(
        "({} {}",
        p.kind.token(),
        sexpr::quote(&p.conclusion.to_string())
    ));
    if let Some(l) = &p.label {
        out.push_str(&format!(" :discharge {l}"));
    }
    for child in &p.children {
        out.push('\n');
        render_node(child, indent + 1, out);
    }
    out.push(')');
}

pub fn parse_proof(input: &str) -> Result<NDProof, ProofParseError> {
    let node = sexpr::parse(input).map_err(|e| ProofParseError {
        offset: e.offset,
        message: e.message,
    })?;
    convert_proof(&node)
}

fn convert_proof(node: &Sexpr) -> Result<NDProof, ProofParseError> {
    let fail = |offset: usize, message: &str| ProofParseError {
        offset,
        message: message.to_string(),
    };
    let Sexpr::List(items, offset) = node else {
        return Err(fail(node.offset(), "expected a proof node"));
    };
    let Some(Sexpr::Sym(head, head_offset)) = items.first() else {
        return Err(fail(*offset, "expected a rule name"));
    };
    let Some(kind) = RuleKind::from_token(head) else {
        return Err(fail(*head_offset, &format!("unknown rule name {head}")));
    };
    let conclusion = match items.get(1) {
        Some(Sexpr::Str(s, o)) => Formula::parse(s).map_err(|e| {
            fail(*o, &format!("bad formula: {e}"))
        })?,
        other => {
            return Err(fail(
                other.map_or(*offset, Sexpr::offset),
                "expected a quoted formula",
            ))
        }
    };
    if kind == RuleKind::Assumption {
        let label = match items.get(2) {
            None => None,
            Some(Sexpr::Sym(l, _)) => Some(l.clone()),
            Some(other) => return Err(fail(other.offset(), "expected a label symbol")),
        };
        if items.len() > 3 {
            return Err(fail(*offset, "unexpected items after assumption"));
        }
        return Ok(NDProof {
            kind,
            conclusion,
            label,
            children: vec![],
        });
    }
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
        .map(convert_proof)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(NDProof {
        kind,
        conclusion,
        label,
        children,
    })
}
