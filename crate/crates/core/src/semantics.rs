//! Weak and strong validity over a finite universe.
//!
//! The weak semantics splits entailment into a local notion (single
//! extension quantifier) and a global one (nested quantifiers); formula
//! clauses mix the two: implication is global, disjunction is local. The
//! strong semantics has a single entailment notion. All quantifiers range
//! over the bases of the given universe, so every verdict here is
//! universe-relative.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::base::derives;
use crate::formula::{Basic, Formula};
use crate::universe::{BaseId, MemoKey, Universe};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JudgementKind {
    WeakLocal,
    WeakGlobal,
    Strong,
}

impl fmt::Display for JudgementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JudgementKind::WeakLocal => "weak-local",
            JudgementKind::WeakGlobal => "weak-global",
            JudgementKind::Strong => "strong",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Judgement {
    pub kind: JudgementKind,
    pub base: BaseId,
    pub context: Vec<Formula>,
    pub conclusion: Formula,
}

impl Judgement {
    pub fn new(
        kind: JudgementKind,
        base: BaseId,
        context: impl Into<Vec<Formula>>,
        conclusion: Formula,
    ) -> Self {
        Judgement {
            kind,
            base,
            context: context.into(),
            conclusion,
        }
    }
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "base {} [{}]: ", self.base, self.kind)?;
        for (i, b) in self.context.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        if self.context.is_empty() {
            write!(f, "|- {}", self.conclusion)
        } else {
            write!(f, " |- {}", self.conclusion)
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("atom `{atom}` is outside the universe vocab")]
    AtomOutsideVocab { atom: String },
    #[error("unknown base id {id}")]
    UnknownBase { id: BaseId },
}

/// Evaluation record: which clause decided a judgement, the quantifier
/// witness when one exists, and the child judgements that were consulted.
/// Quantified clauses keep children only for the failing instance;
/// successful sweeps record the instance count in the clause text.
#[derive(Debug, Clone)]
pub struct EvalTrace {
    pub judgement: Judgement,
    pub clause: String,
    pub result: bool,
    pub witness: Option<BaseId>,
    pub children: Vec<EvalTrace>,
}

impl EvalTrace {
    pub fn depth(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(EvalTrace::depth)
            .max()
            .unwrap_or(0)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, indent: usize, out: &mut String) {
        let mark = if self.result { '+' } else { '-' };
        out.push_str(&"  ".repeat(indent));
        out.push(mark);
        out.push(' ');
        out.push_str(&self.judgement.to_string());
        out.push_str(" | ");
        out.push_str(&self.clause);
        if let Some(w) = self.witness {
            out.push_str(&format!(" | witness base {w}"));
        }
        out.push('\n');
        for child in &self.children {
            child.render_into(indent + 1, out);
        }
    }
}

// Memo tags. The global-disjunction option changes the meaning of every
// weak judgement, so it is folded into the tag.
const TAG_WL: u8 = 0;
const TAG_WL_ENT: u8 = 1;
const TAG_WG_ENT: u8 = 2;
const TAG_SS: u8 = 3;
const TAG_SS_ENT: u8 = 4;
const TAG_OR_GLOBAL: u8 = 0x10;

pub struct Evaluator<'u> {
    u: &'u Universe,
    global_disjunction: bool,
}

impl<'u> Evaluator<'u> {
    pub fn new(u: &'u Universe) -> Self {
        Evaluator {
            u,
            global_disjunction: false,
        }
    }

    /// Evaluates the disjunction clause with global instead of local
    /// entailments (an alternative presentation of the strong semantics;
    /// off by default).
    pub fn with_global_disjunction(u: &'u Universe) -> Self {
        Evaluator {
            u,
            global_disjunction: true,
        }
    }

    pub fn universe(&self) -> &'u Universe {
        self.u
    }

    fn tag(&self, code: u8) -> u8 {
        if self.global_disjunction {
            code | TAG_OR_GLOBAL
        } else {
            code
        }
    }

    fn validate(
        &self,
        base: Option<BaseId>,
        context: &[Formula],
        conclusion: &Formula,
    ) -> Result<(), SemanticsError> {
        if let Some(id) = base {
            if id >= self.u.base_count() {
                return Err(SemanticsError::UnknownBase { id });
            }
        }
        for f in context.iter().chain(std::iter::once(conclusion)) {
            debug_assert!(f.is_well_formed());
            for atom in f.atoms() {
                if !self.u.config().vocab.contains(&atom) {
                    return Err(SemanticsError::AtomOutsideVocab { atom });
                }
            }
        }
        Ok(())
    }

    fn exts(&self, s: BaseId) -> Vec<BaseId> {
        self.u.extensions_of(s).expect("base id validated at entry")
    }

    /// Entailment contexts are sets: order and multiplicity do not matter,
    /// so memo keys use the sorted deduplicated context.
    fn memo_ctx(context: &[Formula]) -> Vec<Formula> {
        let set: BTreeSet<&Formula> = context.iter().collect();
        set.into_iter().cloned().collect()
    }

    // -- weak semantics ----------------------------------------------------

    /// Clauses 1-6: weak S-validity of a single formula.
    fn wl(&self, s: BaseId, f: &Formula) -> bool {
        let key = MemoKey(s, self.tag(TAG_WL), Vec::new(), f.clone());
        if let Some(v) = self.u.memo_get(&key) {
            return v;
        }
        let v = match f {
            Formula::BasicI(b) => derives(self.u.base(s), &BTreeSet::new(), b),
            Formula::BasicC(b) => {
                let ctx: BTreeSet<Basic> = [b.clone()].into_iter().collect();
                !derives(self.u.base(s), &ctx, &Basic::Falsum)
            }
            Formula::And(a, b) => self.wl(s, a) && self.wl(s, b),
            Formula::Or(a, b) => self.wl_or(s, a, b).is_none(),
            Formula::Imp(a, b) => self.wg_ent(s, std::slice::from_ref(a), b),
            Formula::Classical(inner) => {
                !self.wl_ent(s, std::slice::from_ref(inner), &Formula::falsum())
            }
        };
        self.u.memo_insert(key, v);
        v
    }

    /// Clause 6 sweep; returns the first failing (extension, basic formula)
    /// pair, if any.
    fn wl_or(&self, s: BaseId, a: &Formula, b: &Formula) -> Option<(BaseId, Formula)> {
        for s2 in self.exts(s) {
            for p in self.u.at_bot_formulas() {
                let (prem_a, prem_b) = if self.global_disjunction {
                    (
                        self.wg_ent(s2, std::slice::from_ref(a), p),
                        self.wg_ent(s2, std::slice::from_ref(b), p),
                    )
                } else {
                    (
                        self.wl_ent(s2, std::slice::from_ref(a), p),
                        self.wl_ent(s2, std::slice::from_ref(b), p),
                    )
                };
                if prem_a && prem_b && !self.wl(s2, p) {
                    return Some((s2, p.clone()));
                }
            }
        }
        None
    }

    /// Clause 7: local entailment; the empty context means bare validity.
    fn wl_ent(&self, s: BaseId, context: &[Formula], f: &Formula) -> bool {
        if context.is_empty() {
            return self.wl(s, f);
        }
        let key = MemoKey(s, self.tag(TAG_WL_ENT), Self::memo_ctx(context), f.clone());
        if let Some(v) = self.u.memo_get(&key) {
            return v;
        }
        let v = self
            .exts(s)
            .into_iter()
            .all(|s2| !(context.iter().all(|b| self.wl(s2, b)) && !self.wl(s2, f)));
        self.u.memo_insert(key, v);
        v
    }

    /// Clause 8: global entailment. With an empty context the persistence
    /// premise is vacuous and the clause collapses to validity at every
    /// extension.
    fn wg_ent(&self, s: BaseId, context: &[Formula], f: &Formula) -> bool {
        let key = MemoKey(s, self.tag(TAG_WG_ENT), Self::memo_ctx(context), f.clone());
        if let Some(v) = self.u.memo_get(&key) {
            return v;
        }
        let v = if context.is_empty() {
            self.exts(s).into_iter().all(|s2| self.wl(s2, f))
        } else {
            self.exts(s).into_iter().all(|s2| {
                let premises_persist = self
                    .exts(s2)
                    .into_iter()
                    .all(|s3| context.iter().all(|b| self.wl(s3, b)));
                !premises_persist || self.exts(s2).into_iter().all(|s3| self.wl(s3, f))
            })
        };
        self.u.memo_insert(key, v);
        v
    }

    // -- strong semantics --------------------------------------------------

    /// Clauses 1-6 of strong validity.
    fn ss(&self, s: BaseId, f: &Formula) -> bool {
        let key = MemoKey(s, self.tag(TAG_SS), Vec::new(), f.clone());
        if let Some(v) = self.u.memo_get(&key) {
            return v;
        }
        let v = match f {
            Formula::BasicI(b) => derives(self.u.base(s), &BTreeSet::new(), b),
            Formula::BasicC(b) => {
                let ctx: BTreeSet<Basic> = [b.clone()].into_iter().collect();
                self.exts(s)
                    .into_iter()
                    .all(|s2| !derives(self.u.base(s2), &ctx, &Basic::Falsum))
            }
            Formula::And(a, b) => self.ss(s, a) && self.ss(s, b),
            Formula::Or(a, b) => self.ss_or(s, a, b).is_none(),
            Formula::Imp(a, b) => self.ss_ent(s, std::slice::from_ref(a), b),
            Formula::Classical(inner) => self.exts(s).into_iter().all(|s2| {
                !self.ss_ent(s2, std::slice::from_ref(inner), &Formula::falsum())
            }),
        };
        self.u.memo_insert(key, v);
        v
    }

    fn ss_or(&self, s: BaseId, a: &Formula, b: &Formula) -> Option<(BaseId, Formula)> {
        for s2 in self.exts(s) {
            for p in self.u.at_bot_formulas() {
                if self.ss_ent(s2, std::slice::from_ref(a), p)
                    && self.ss_ent(s2, std::slice::from_ref(b), p)
                    && !self.ss(s2, p)
                {
                    return Some((s2, p.clone()));
                }
            }
        }
        None
    }

    /// Clause 7 of strong validity: the single entailment notion. The empty
    /// context quantifies validity over all extensions (equivalent to
    /// validity at `s` itself, since strong validity is monotone).
    fn ss_ent(&self, s: BaseId, context: &[Formula], f: &Formula) -> bool {
        let key = MemoKey(s, self.tag(TAG_SS_ENT), Self::memo_ctx(context), f.clone());
        if let Some(v) = self.u.memo_get(&key) {
            return v;
        }
        let v = self
            .exts(s)
            .into_iter()
            .all(|s2| !(context.iter().all(|b| self.ss(s2, b)) && !self.ss(s2, f)));
        self.u.memo_insert(key, v);
        v
    }

    // -- public operations ---------------------------------------------------

    pub fn weak_local(
        &self,
        s: BaseId,
        context: &[Formula],
        f: &Formula,
    ) -> Result<bool, SemanticsError> {
        self.validate(Some(s), context, f)?;
        Ok(self.wl_ent(s, context, f))
    }

    pub fn weak_global(
        &self,
        s: BaseId,
        context: &[Formula],
        f: &Formula,
    ) -> Result<bool, SemanticsError> {
        self.validate(Some(s), context, f)?;
        Ok(self.wg_ent(s, context, f))
    }

    /// Clause 9: global entailment at every base of the universe.
    pub fn weak_valid(&self, context: &[Formula], f: &Formula) -> Result<bool, SemanticsError> {
        self.validate(None, context, f)?;
        Ok(self.u.base_ids().all(|s| self.wg_ent(s, context, f)))
    }

    pub fn strong_sat(
        &self,
        s: BaseId,
        context: &[Formula],
        f: &Formula,
    ) -> Result<bool, SemanticsError> {
        self.validate(Some(s), context, f)?;
        Ok(self.ss_ent(s, context, f))
    }

    /// Clause 8 of strong validity, relative to this universe. The prover's
    /// exact decision procedure is authoritative when they disagree.
    pub fn strong_valid_in_universe(
        &self,
        context: &[Formula],
        f: &Formula,
    ) -> Result<bool, SemanticsError> {
        self.validate(None, context, f)?;
        Ok(self.u.base_ids().all(|s| self.ss_ent(s, context, f)))
    }

    /// Searches for bases S within S2 where A is weakly valid at S but not
    /// at S2. Returns the first violating pair in ascending id order.
    pub fn check_monotonic(
        &self,
        f: &Formula,
    ) -> Result<Option<(BaseId, BaseId)>, SemanticsError> {
        self.validate(None, &[], f)?;
        for s in self.u.base_ids() {
            if !self.wl(s, f) {
                continue;
            }
            for s2 in self.exts(s) {
                if !self.wl(s2, f) {
                    return Ok(Some((s, s2)));
                }
            }
        }
        Ok(None)
    }

    /// First base (ascending) refuting the judgement of the given kind,
    /// with the evaluation trace of the failure.
    pub fn find_weak_counterexample(
        &self,
        context: &[Formula],
        f: &Formula,
        kind: JudgementKind,
    ) -> Result<Option<(BaseId, EvalTrace)>, SemanticsError> {
        self.validate(None, context, f)?;
        for s in self.u.base_ids() {
            let j = Judgement::new(kind, s, context.to_vec(), f.clone());
            if !self.eval_judgement(&j)? {
                let trace = self.trace(&j)?;
                return Ok(Some((s, trace)));
            }
        }
        Ok(None)
    }

    pub fn eval_judgement(&self, j: &Judgement) -> Result<bool, SemanticsError> {
        self.validate(Some(j.base), &j.context, &j.conclusion)?;
        Ok(match j.kind {
            JudgementKind::WeakLocal => self.wl_ent(j.base, &j.context, &j.conclusion),
            JudgementKind::WeakGlobal => self.wg_ent(j.base, &j.context, &j.conclusion),
            JudgementKind::Strong => self.ss_ent(j.base, &j.context, &j.conclusion),
        })
    }

    pub fn trace(&self, j: &Judgement) -> Result<EvalTrace, SemanticsError> {
        self.validate(Some(j.base), &j.context, &j.conclusion)?;
        Ok(match j.kind {
            JudgementKind::WeakLocal if j.context.is_empty() => {
                self.trace_wl_formula(j.base, &j.conclusion)
            }
            JudgementKind::WeakLocal => self.trace_wl_ent(j.base, &j.context, &j.conclusion),
            JudgementKind::WeakGlobal => self.trace_wg_ent(j.base, &j.context, &j.conclusion),
            JudgementKind::Strong if j.context.is_empty() => {
                self.trace_ss_formula(j.base, &j.conclusion)
            }
            JudgementKind::Strong => self.trace_ss_ent(j.base, &j.context, &j.conclusion),
        })
    }

    // -- traced evaluation -------------------------------------------------
    //
    // The traced walk recomputes decisions through the memoized evaluators,
    // so replaying any trace node's judgement reproduces its result.

    fn trace_wl_formula(&self, s: BaseId, f: &Formula) -> EvalTrace {
        let judgement = Judgement::new(JudgementKind::WeakLocal, s, vec![], f.clone());
        match f {
            Formula::BasicI(b) => {
                let result = derives(self.u.base(s), &BTreeSet::new(), b);
                EvalTrace {
                    judgement,
                    clause: format!("clause 1: atomic derivability of {b}"),
                    result,
                    witness: None,
                    children: vec![],
                }
            }
            Formula::BasicC(b) => {
                let ctx: BTreeSet<Basic> = [b.clone()].into_iter().collect();
                let result = !derives(self.u.base(s), &ctx, &Basic::Falsum);
                EvalTrace {
                    judgement,
                    clause: format!("clause 2: {b} does not derive bot"),
                    result,
                    witness: None,
                    children: vec![],
                }
            }
            Formula::And(a, b) => {
                let left = self.trace_wl_formula(s, a);
                let right = self.trace_wl_formula(s, b);
                let result = left.result && right.result;
                EvalTrace {
                    judgement,
                    clause: "clause 4: conjunction".into(),
                    result,
                    witness: None,
                    children: vec![left, right],
                }
            }
            Formula::Or(a, b) => match self.wl_or(s, a, b) {
                None => EvalTrace {
                    judgement,
                    clause: format!(
                        "clause 6: disjunction sweep over {} extensions x {} basics, no failure",
                        self.exts(s).len(),
                        self.u.at_bot_formulas().len()
                    ),
                    result: true,
                    witness: None,
                    children: vec![],
                },
                Some((s2, p)) => {
                    let ent_kind = if self.global_disjunction {
                        JudgementKind::WeakGlobal
                    } else {
                        JudgementKind::WeakLocal
                    };
                    let children = vec![
                        self.trace(&Judgement::new(
                            ent_kind,
                            s2,
                            vec![(**a).clone()],
                            p.clone(),
                        ))
                        .expect("validated"),
                        self.trace(&Judgement::new(
                            ent_kind,
                            s2,
                            vec![(**b).clone()],
                            p.clone(),
                        ))
                        .expect("validated"),
                        self.trace_wl_formula(s2, &p),
                    ];
                    EvalTrace {
                        judgement,
                        clause: format!(
                            "clause 6: both disjuncts entail {p} at extension {s2} but {p} fails there"
                        ),
                        result: false,
                        witness: Some(s2),
                        children,
                    }
                }
            },
            Formula::Imp(a, b) => {
                let child = self
                    .trace(&Judgement::new(
                        JudgementKind::WeakGlobal,
                        s,
                        vec![(**a).clone()],
                        (**b).clone(),
                    ))
                    .expect("validated");
                let result = child.result;
                EvalTrace {
                    judgement,
                    clause: "clause 5: implication via global entailment".into(),
                    result,
                    witness: None,
                    children: vec![child],
                }
            }
            Formula::Classical(inner) => {
                let child = self
                    .trace(&Judgement::new(
                        JudgementKind::WeakLocal,
                        s,
                        vec![(**inner).clone()],
                        Formula::falsum(),
                    ))
                    .expect("validated");
                let result = !child.result;
                EvalTrace {
                    judgement,
                    clause: "clause 3: classical wrap holds iff the inner formula does not locally entail bot"
                        .into(),
                    result,
                    witness: None,
                    children: vec![child],
                }
            }
        }
    }

    fn trace_wl_ent(&self, s: BaseId, context: &[Formula], f: &Formula) -> EvalTrace {
        let judgement =
            Judgement::new(JudgementKind::WeakLocal, s, context.to_vec(), f.clone());
        let exts = self.exts(s);
        for &s2 in &exts {
            if context.iter().all(|b| self.wl(s2, b)) && !self.wl(s2, f) {
                let child = self.trace_wl_formula(s2, f);
                return EvalTrace {
                    judgement,
                    clause: format!(
                        "clause 7: context holds at extension {s2} but the conclusion fails"
                    ),
                    result: false,
                    witness: Some(s2),
                    children: vec![child],
                };
            }
        }
        EvalTrace {
            judgement,
            clause: format!("clause 7: entailment holds at all {} extensions", exts.len()),
            result: true,
            witness: None,
            children: vec![],
        }
    }

    fn trace_wg_ent(&self, s: BaseId, context: &[Formula], f: &Formula) -> EvalTrace {
        let judgement =
            Judgement::new(JudgementKind::WeakGlobal, s, context.to_vec(), f.clone());
        let exts = self.exts(s);
        if context.is_empty() {
            for &s2 in &exts {
                if !self.wl(s2, f) {
                    let child = self.trace_wl_formula(s2, f);
                    return EvalTrace {
                        judgement,
                        clause: format!("clause 8 (empty context): formula fails at extension {s2}"),
                        result: false,
                        witness: Some(s2),
                        children: vec![child],
                    };
                }
            }
            return EvalTrace {
                judgement,
                clause: format!(
                    "clause 8 (empty context): formula holds at all {} extensions",
                    exts.len()
                ),
                result: true,
                witness: None,
                children: vec![],
            };
        }
        for &s2 in &exts {
            let premises_persist = self
                .exts(s2)
                .into_iter()
                .all(|s3| context.iter().all(|b| self.wl(s3, b)));
            if !premises_persist {
                continue;
            }
            if let Some(s3) = self.exts(s2).into_iter().find(|&s3| !self.wl(s3, f)) {
                let child = self.trace_wl_formula(s3, f);
                return EvalTrace {
                    judgement,
                    clause: format!(
                        "clause 8: context persists from extension {s2} but the conclusion fails at {s3}"
                    ),
                    result: false,
                    witness: Some(s2),
                    children: vec![child],
                };
            }
        }
        EvalTrace {
            judgement,
            clause: format!(
                "clause 8: entailment holds across all {} extensions",
                exts.len()
            ),
            result: true,
            witness: None,
            children: vec![],
        }
    }

    fn trace_ss_formula(&self, s: BaseId, f: &Formula) -> EvalTrace {
        let judgement = Judgement::new(JudgementKind::Strong, s, vec![], f.clone());
        match f {
            Formula::BasicI(b) => {
                let result = derives(self.u.base(s), &BTreeSet::new(), b);
                EvalTrace {
                    judgement,
                    clause: format!("clause 1: atomic derivability of {b}"),
                    result,
                    witness: None,
                    children: vec![],
                }
            }
            Formula::BasicC(b) => {
                let ctx: BTreeSet<Basic> = [b.clone()].into_iter().collect();
                let failing = self
                    .exts(s)
                    .into_iter()
                    .find(|&s2| derives(self.u.base(s2), &ctx, &Basic::Falsum));
                match failing {
                    None => EvalTrace {
                        judgement,
                        clause: format!("clause 2: no extension derives bot from {b}"),
                        result: true,
                        witness: None,
                        children: vec![],
                    },
                    Some(s2) => EvalTrace {
                        judgement,
                        clause: format!("clause 2: extension {s2} derives bot from {b}"),
                        result: false,
                        witness: Some(s2),
                        children: vec![],
                    },
                }
            }
            Formula::And(a, b) => {
                let left = self.trace_ss_formula(s, a);
                let right = self.trace_ss_formula(s, b);
                let result = left.result && right.result;
                EvalTrace {
                    judgement,
                    clause: "clause 4: conjunction".into(),
                    result,
                    witness: None,
                    children: vec![left, right],
                }
            }
            Formula::Or(a, b) => match self.ss_or(s, a, b) {
                None => EvalTrace {
                    judgement,
                    clause: format!(
                        "clause 6: disjunction sweep over {} extensions x {} basics, no failure",
                        self.exts(s).len(),
                        self.u.at_bot_formulas().len()
                    ),
                    result: true,
                    witness: None,
                    children: vec![],
                },
                Some((s2, p)) => {
                    let children = vec![
                        self.trace_ss_ent(s2, std::slice::from_ref(a), &p),
                        self.trace_ss_ent(s2, std::slice::from_ref(b), &p),
                        self.trace_ss_formula(s2, &p),
                    ];
                    EvalTrace {
                        judgement,
                        clause: format!(
                            "clause 6: both disjuncts entail {p} at extension {s2} but {p} fails there"
                        ),
                        result: false,
                        witness: Some(s2),
                        children,
                    }
                }
            },
            Formula::Imp(a, b) => {
                let child = self.trace_ss_ent(s, std::slice::from_ref(a), b);
                let result = child.result;
                EvalTrace {
                    judgement,
                    clause: "clause 5: implication via strong entailment".into(),
                    result,
                    witness: None,
                    children: vec![child],
                }
            }
            Formula::Classical(inner) => {
                let failing = self.exts(s).into_iter().find(|&s2| {
                    self.ss_ent(s2, std::slice::from_ref(inner), &Formula::falsum())
                });
                match failing {
                    None => EvalTrace {
                        judgement,
                        clause: "clause 3: no extension strongly entails bot from the inner formula"
                            .into(),
                        result: true,
                        witness: None,
                        children: vec![],
                    },
                    Some(s2) => {
                        let child = self.trace_ss_ent(
                            s2,
                            std::slice::from_ref(inner),
                            &Formula::falsum(),
                        );
                        EvalTrace {
                            judgement,
                            clause: format!(
                                "clause 3: the inner formula strongly entails bot at extension {s2}"
                            ),
                            result: false,
                            witness: Some(s2),
                            children: vec![child],
                        }
                    }
                }
            }
        }
    }

    fn trace_ss_ent(&self, s: BaseId, context: &[Formula], f: &Formula) -> EvalTrace {
        let judgement = Judgement::new(JudgementKind::Strong, s, context.to_vec(), f.clone());
        let exts = self.exts(s);
        for &s2 in &exts {
            if context.iter().all(|b| self.ss(s2, b)) && !self.ss(s2, f) {
                let child = self.trace_ss_formula(s2, f);
                return EvalTrace {
                    judgement,
                    clause: format!(
                        "clause 7: context holds at extension {s2} but the conclusion fails"
                    ),
                    result: false,
                    witness: Some(s2),
                    children: vec![child],
                };
            }
        }
        EvalTrace {
            judgement,
            clause: format!("clause 7: entailment holds at all {} extensions", exts.len()),
            result: true,
            witness: None,
            children: vec![],
        }
    }
}

// Convenience wrappers with default options.

pub fn weak_local(
    u: &Universe,
    s: BaseId,
    context: &[Formula],
    f: &Formula,
) -> Result<bool, SemanticsError> {
    Evaluator::new(u).weak_local(s, context, f)
}

pub fn weak_global(
    u: &Universe,
    s: BaseId,
    context: &[Formula],
    f: &Formula,
) -> Result<bool, SemanticsError> {
    Evaluator::new(u).weak_global(s, context, f)
}

pub fn weak_valid(u: &Universe, context: &[Formula], f: &Formula) -> Result<bool, SemanticsError> {
    Evaluator::new(u).weak_valid(context, f)
}

pub fn strong_sat(
    u: &Universe,
    s: BaseId,
    context: &[Formula],
    f: &Formula,
) -> Result<bool, SemanticsError> {
    Evaluator::new(u).strong_sat(s, context, f)
}

pub fn strong_valid_in_universe(
    u: &Universe,
    context: &[Formula],
    f: &Formula,
) -> Result<bool, SemanticsError> {
    Evaluator::new(u).strong_valid_in_universe(context, f)
}

pub fn check_monotonic(u: &Universe, f: &Formula) -> Result<Option<(BaseId, BaseId)>, SemanticsError> {
    Evaluator::new(u).check_monotonic(f)
}

pub fn find_weak_counterexample(
    u: &Universe,
    context: &[Formula],
    f: &Formula,
    kind: JudgementKind,
) -> Result<Option<(BaseId, EvalTrace)>, SemanticsError> {
    Evaluator::new(u).find_weak_counterexample(context, f, kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::parse_rule_line;
    use crate::universe::UniverseConfig;

    fn u0() -> Universe {
        Universe::build(UniverseConfig::new(["p", "q"])).unwrap()
    }

    fn u_p() -> Universe {
        Universe::build(UniverseConfig::new(["p"])).unwrap()
    }

    fn f(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn classical_atom_at_empty_and_refuting_base() {
        let u = u_p();
        assert!(weak_local(&u, 0, &[], &f("p^c")).unwrap());
        let refuter = crate::base::Base::from_rules([parse_rule_line("( |- p) => bot").unwrap()]);
        let id = u.find_base(&refuter).unwrap();
        assert!(!weak_local(&u, id, &[], &f("p^c")).unwrap());
    }

    #[test]
    fn excluded_middle_weakly_valid() {
        let u = u0();
        assert!(weak_local(&u, 0, &[], &f("p^c | ~p")).unwrap());
        assert!(weak_valid(&u, &[], &f("p^c | ~p")).unwrap());
        assert!(weak_valid(&u, &[], &f("((p -> q) -> p) -> (p)^c")).unwrap());
    }

    #[test]
    fn classical_atom_globally_but_not_locally_entails_double_negation() {
        let u = u0();
        let pc = f("p^c");
        let nnp = f("~~p");
        assert!(weak_global(&u, 0, std::slice::from_ref(&pc), &nnp).unwrap());
        assert!(!weak_local(&u, 0, std::slice::from_ref(&pc), &nnp).unwrap());
        assert!(weak_global(&u, 0, std::slice::from_ref(&nnp), &pc).unwrap());
    }

    #[test]
    fn bot_is_never_weakly_valid() {
        let u = u0();
        for s in u.base_ids() {
            assert!(!weak_local(&u, s, &[], &f("bot")).unwrap());
            assert!(!weak_local(&u, s, &[], &f("(bot)^c")).unwrap());
        }
    }

    /// The universe for the disjunction-elimination failure: the plain pool
    /// cannot refute ~p | ~~p anywhere (its clause 6 premise pairs are never
    /// jointly satisfiable with a failing conclusion), so the suite adds two
    /// witness rules making q track "p is refutable or p is derivable".
    fn u_disj() -> Universe {
        let mut cfg = UniverseConfig::new(["p", "q"]);
        cfg.extra_rules = vec![
            parse_rule_line("(p |- bot) => q").unwrap(),
            parse_rule_line("( |- p) => q").unwrap(),
        ];
        Universe::build(cfg).unwrap()
    }

    #[test]
    fn disjunction_elimination_fails_in_witness_universe() {
        let u = u_disj();
        let c = f("~p | ~~p");
        let premises = vec![f("~p | p^c"), f("~p -> (~p | ~~p)"), f("p^c -> (~p | ~~p)")];
        for premise in &premises {
            assert!(weak_valid(&u, &[], premise).unwrap(), "premise {premise}");
        }
        assert!(!weak_local(&u, 0, &[], &c).unwrap(), "conclusion refutable at the empty base");
        assert!(!weak_valid(&u, &premises, &c).unwrap());
        let (base, trace) = find_weak_counterexample(&u, &premises, &c, JudgementKind::WeakGlobal)
            .unwrap()
            .expect("counterexample exists");
        assert_eq!(base, 0);
        assert!(!trace.result);
        let (base, _) = find_weak_counterexample(&u, &[], &c, JudgementKind::WeakLocal)
            .unwrap()
            .expect("bare counterexample exists");
        assert_eq!(base, 0);
    }

    #[test]
    fn plain_pool_cannot_refute_the_disjunction() {
        let u = u0();
        let c = f("~p | ~~p");
        for s in u.base_ids() {
            assert!(weak_local(&u, s, &[], &c).unwrap());
        }
    }

    #[test]
    fn strong_classical_atom_fails_where_a_refuting_extension_exists() {
        let u = u_p();
        assert!(!strong_sat(&u, 0, &[], &f("p^c")).unwrap());
        assert!(!strong_sat(&u, 0, &[], &f("bot")).unwrap());
        assert!(!strong_sat(&u, 0, &[], &f("(bot)^c")).unwrap());
    }

    #[test]
    fn strong_classical_wrap_matches_double_negation() {
        let u = u0();
        for a in ["p", "p & q", "p -> q", "p | q"] {
            let cls = f(&format!("({a})^c"));
            let dn = f(&format!("~~({a})"));
            for s in u.base_ids() {
                assert_eq!(
                    strong_sat(&u, s, &[], &cls).unwrap(),
                    strong_sat(&u, s, &[], &dn).unwrap(),
                    "A = {a}, base {s}"
                );
            }
        }
    }

    #[test]
    fn strong_validity_examples() {
        let u = u0();
        assert!(strong_valid_in_universe(&u, &[], &f("p -> p^c")).unwrap());
        assert!(strong_valid_in_universe(&u, &[], &f("bot -> q^c")).unwrap());
        // Validated by the small universe but rejected by the exact decision
        // procedure; the contrast is part of the acceptance gate.
        assert!(strong_valid_in_universe(&u, &[], &f("p^c | ~p")).unwrap());
    }

    #[test]
    fn monotonicity_violation_for_classical_atom() {
        let u = u0();
        assert_eq!(check_monotonic(&u, &f("p^c")).unwrap(), Some((0, 1)));
        assert_eq!(check_monotonic(&u, &f("~~p")).unwrap(), None);
        assert_eq!(check_monotonic(&u, &f("p")).unwrap(), None);
    }

    #[test]
    fn counterexample_search_and_trace_replay() {
        let u = u0();
        let (base, trace) =
            find_weak_counterexample(&u, &[], &f("p"), JudgementKind::WeakLocal)
                .unwrap()
                .expect("p fails at the empty base");
        assert_eq!(base, 0);
        assert!(!trace.result);
        let ev = Evaluator::new(&u);
        assert_eq!(ev.eval_judgement(&trace.judgement).unwrap(), trace.result);
        // Valid judgements produce no counterexample.
        assert!(
            find_weak_counterexample(&u, &[], &f("p -> p"), JudgementKind::WeakGlobal)
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn trace_replays_on_nested_judgements() {
        let u = u_disj();
        let ev = Evaluator::new(&u);
        let judgements = [
            Judgement::new(JudgementKind::WeakLocal, 0, vec![], f("~p | ~~p")),
            Judgement::new(JudgementKind::WeakGlobal, 0, vec![f("p^c")], f("~~p")),
            Judgement::new(JudgementKind::Strong, 0, vec![], f("p^c | ~p")),
            Judgement::new(JudgementKind::Strong, 0, vec![f("~~p")], f("p^c")),
        ];
        fn walk(ev: &Evaluator, t: &EvalTrace) {
            assert_eq!(
                ev.eval_judgement(&t.judgement).unwrap(),
                t.result,
                "replay diverged at {}",
                t.judgement
            );
            for c in &t.children {
                walk(ev, c);
            }
        }
        for j in &judgements {
            let t = ev.trace(j).unwrap();
            walk(&ev, &t);
            assert!(t.depth() >= 1);
        }
    }

    #[test]
    fn vocab_validation_rejects_foreign_atoms() {
        let u = u_p();
        assert_eq!(
            weak_local(&u, 0, &[], &f("r")).unwrap_err(),
            SemanticsError::AtomOutsideVocab { atom: "r".into() }
        );
        assert_eq!(
            weak_local(&u, 77, &[], &f("p")).unwrap_err(),
            SemanticsError::UnknownBase { id: 77 }
        );
    }

    #[test]
    fn global_disjunction_option_changes_the_weak_verdict() {
        // Under the global-entailment reading of clause 6 the weak semantics
        // should agree with the strong one on p^c | ~p in the plain pool.
        let u = u0();
        let ev = Evaluator::with_global_disjunction(&u);
        let em = f("p^c | ~p");
        assert!(ev.weak_valid(&[], &em).unwrap());
        let local = Evaluator::new(&u);
        assert!(local.weak_valid(&[], &em).unwrap());
    }
}
