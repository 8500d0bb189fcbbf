//! Compilation of ecumenical sequents into atomic bases and back.
//!
//! The pipeline: close the sequent under subformulas (plus the negated
//! intuitionistic twin of every classical part), assign each closed formula
//! an atom, generate the simulation base whose rules mirror the connective
//! rules schema by schema, derive atomically, normalize away detours, and
//! read the result back as a natural-deduction proof.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::SeedableRng;
use thiserror::Error;

use crate::base::{
    check_derivation, derive_witness, derives, AtomicDerivation, AtomicRule, Base, Premise,
};
use crate::formula::{Basic, Formula, FRESH_SIGIL};
use crate::prover::{decide_strong, NDProof, RuleKind};
use crate::sampling::random_atomic_derivation;

#[derive(Debug, Error, PartialEq)]
pub enum SimulationError {
    #[error("vocabulary must contain every mapped atom plus bot")]
    VocabTooSmall,
    #[error("no atom assigned for `{0}`")]
    UnmappedFormula(Formula),
    #[error("atom `{0}` carries no annotation")]
    UnmappedAtom(Basic),
    #[error("derivation does not check against the simulation base: {0}")]
    IllFormed(String),
    #[error("redex is no longer present in the derivation")]
    StaleRedex,
    #[error("no subderivation at that path")]
    BadPath,
    #[error("sequent is not strongly valid")]
    NotDerivable,
}

/// Subformula closure of `context` plus `goal`, extended with the negated
/// intuitionistic version of every classical formula in the closure (and
/// that negation's own subformulas, so bot is always present alongside).
pub fn gamma_star(context: &[Formula], goal: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for f in context.iter().chain(std::iter::once(goal)) {
        out.extend(f.subformulas());
    }
    let classicals: Vec<Formula> = out
        .iter()
        .filter_map(|f| match f {
            Formula::BasicC(b) => Some(Formula::BasicI(b.clone())),
            Formula::Classical(inner) => Some((**inner).clone()),
            _ => None,
        })
        .collect();
    for inner in classicals {
        out.extend(Formula::neg(inner).subformulas());
    }
    out
}

/// Bijection between the closed formula set and atoms: intuitionistic basic
/// sentences keep their own atom, everything else gets a fresh atom derived
/// from its rendering behind the reserved sigil.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaMap {
    forward: BTreeMap<Formula, Basic>,
    backward: BTreeMap<Basic, Formula>,
}

impl AlphaMap {
    pub fn atom_of(&self, f: &Formula) -> Result<&Basic, SimulationError> {
        self.forward
            .get(f)
            .ok_or_else(|| SimulationError::UnmappedFormula(f.clone()))
    }

    pub fn formula_of(&self, atom: &Basic) -> Option<&Formula> {
        self.backward.get(atom)
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Mapped atoms in insertion-independent (sorted) order.
    pub fn atoms(&self) -> impl Iterator<Item = &Basic> {
        self.backward.keys()
    }
}

pub fn make_alpha(gs: &BTreeSet<Formula>) -> AlphaMap {
    let mut forward = BTreeMap::new();
    let mut backward: BTreeMap<Basic, Formula> = BTreeMap::new();
    for f in gs {
        let atom = match f {
            Formula::BasicI(b) => b.clone(),
            other => Basic::Atom(slug(other)),
        };
        let clash = backward.insert(atom.clone(), f.clone());
        assert!(clash.is_none(), "atom assignment must be injective");
        forward.insert(f.clone(), atom);
    }
    AlphaMap { forward, backward }
}

/// Deterministic fresh-atom name: the formula's rendering transliterated
/// into atom-legal characters behind the reserved sigil. Escapes are
/// prefix-unambiguous, so distinct renderings stay distinct.
fn slug(f: &Formula) -> String {
    let mut s = String::new();
    s.push(FRESH_SIGIL);
    for ch in f.to_string().chars() {
        match ch {
            ' ' | '-' => {}
            '>' => s.push_str("$i"),
            '(' => s.push_str("$l"),
            ')' => s.push_str("$r"),
            '&' => s.push_str("$a"),
            '|' => s.push_str("$o"),
            '^' => s.push_str("$s"),
            c if c.is_ascii_alphanumeric() || c == '_' => s.push(c),
            c => unreachable!("unexpected character `{c}` in a formula rendering"),
        }
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemaTag {
    ImpInt,
    ImpElim,
    OrIntL,
    OrIntR,
    OrElim,
    AndInt,
    AndElimL,
    AndElimR,
    ClsInt,
    ClsElim,
    BotElim,
}

impl SchemaTag {
    pub fn name(self) -> &'static str {
        match self {
            SchemaTag::ImpInt => "imp-int",
            SchemaTag::ImpElim => "imp-elim",
            SchemaTag::OrIntL => "or-int-l",
            SchemaTag::OrIntR => "or-int-r",
            SchemaTag::OrElim => "or-elim",
            SchemaTag::AndInt => "and-int",
            SchemaTag::AndElimL => "and-elim-l",
            SchemaTag::AndElimR => "and-elim-r",
            SchemaTag::ClsInt => "cls-int",
            SchemaTag::ClsElim => "cls-elim",
            SchemaTag::BotElim => "bot-elim",
        }
    }

    pub fn is_intro(self) -> bool {
        matches!(
            self,
            SchemaTag::ImpInt
                | SchemaTag::OrIntL
                | SchemaTag::OrIntR
                | SchemaTag::AndInt
                | SchemaTag::ClsInt
        )
    }

    pub fn is_elim(self) -> bool {
        matches!(
            self,
            SchemaTag::ImpElim
                | SchemaTag::OrElim
                | SchemaTag::AndElimL
                | SchemaTag::AndElimR
                | SchemaTag::ClsElim
                | SchemaTag::BotElim
        )
    }
}

/// Where a simulation-base rule came from: its schema, the compound formula
/// it was generated for (absent for bot-elim), and the instantiating
/// conclusion atom for the q-quantified schemata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleProvenance {
    pub schema: SchemaTag,
    pub formula: Option<Formula>,
    pub q: Option<Basic>,
}

/// An atomic base generated from a closed formula set, with per-rule
/// provenance. Rule indices, provenance entries, and the lookup tables all
/// refer to the same underlying base.
#[derive(Debug, Clone)]
pub struct NBase {
    base: Base,
    provenance: Vec<RuleProvenance>,
    vocab: Vec<Basic>,
    or_elims: BTreeMap<(Basic, Basic), usize>,
    bot_elims: BTreeMap<Basic, usize>,
}

impl NBase {
    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn vocab(&self) -> &[Basic] {
        &self.vocab
    }

    pub fn provenance(&self, rule: usize) -> Option<&RuleProvenance> {
        self.provenance.get(rule)
    }

    /// The disjunction-elimination instance whose major premise is
    /// `major` and whose conclusion is `q`.
    pub fn or_elim_rule(&self, major: &Basic, q: &Basic) -> Option<usize> {
        self.or_elims.get(&(major.clone(), q.clone())).copied()
    }

    pub fn bot_elim_rule(&self, q: &Basic) -> Option<usize> {
        self.bot_elims.get(q).copied()
    }

    /// Base file format with one provenance comment per rule.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, rule) in self.base.rules().iter().enumerate() {
            let p = &self.provenance[i];
            let mut comment = format!("# schema={}", p.schema.name());
            if let Some(f) = &p.formula {
                comment.push_str(&format!(", formula={f}"));
            }
            if let Some(q) = &p.q {
                comment.push_str(&format!(", q={q}"));
            }
            out.push_str(&format!("{rule}  {comment}\n"));
        }
        out
    }
}

/// Generates the simulation base for the closed set `gs`: intro and elim
/// rules per compound formula, with the q-quantified schemata (disjunction
/// elimination and ex falso) instantiated at every vocabulary atom.
/// Degenerate operands can make two schema instances coincide as rules;
/// the first provenance then stands for both, which is sound because such
/// twins are interchangeable in every reduction.
pub fn build_n(
    gs: &BTreeSet<Formula>,
    alpha: &AlphaMap,
    vocab: &[Basic],
) -> Result<NBase, SimulationError> {
    let vocab_set: BTreeSet<&Basic> = vocab.iter().collect();
    if !vocab_set.contains(&Basic::Falsum) {
        return Err(SimulationError::VocabTooSmall);
    }
    for f in gs {
        if !vocab_set.contains(alpha.atom_of(f)?) {
            return Err(SimulationError::VocabTooSmall);
        }
    }

    let mut n = NBase {
        base: Base::default(),
        provenance: Vec::new(),
        vocab: vocab.to_vec(),
        or_elims: BTreeMap::new(),
        bot_elims: BTreeMap::new(),
    };
    let add = |n: &mut NBase, rule: AtomicRule, prov: RuleProvenance| -> usize {
        let (idx, inserted) = n.base.add_rule(rule);
        if inserted {
            debug_assert_eq!(idx, n.provenance.len());
            n.provenance.push(prov);
        }
        idx
    };

    for d in gs {
        let a_d = alpha.atom_of(d)?.clone();
        match d {
            Formula::BasicI(_) => {}
            Formula::Imp(l, r) => {
                let a_l = alpha.atom_of(l)?.clone();
                let a_r = alpha.atom_of(r)?.clone();
                add(
                    &mut n,
                    AtomicRule::new(vec![Premise::new([a_l.clone()], a_r.clone())], a_d.clone()),
                    RuleProvenance {
                        schema: SchemaTag::ImpInt,
                        formula: Some(d.clone()),
                        q: None,
                    },
                );
                add(
                    &mut n,
                    AtomicRule::new(
                        vec![Premise::plain(a_d.clone()), Premise::plain(a_l)],
                        a_r,
                    ),
                    RuleProvenance {
                        schema: SchemaTag::ImpElim,
                        formula: Some(d.clone()),
                        q: None,
                    },
                );
            }
            Formula::Or(l, r) => {
                let a_l = alpha.atom_of(l)?.clone();
                let a_r = alpha.atom_of(r)?.clone();
                add(
                    &mut n,
                    AtomicRule::new(vec![Premise::plain(a_l.clone())], a_d.clone()),
                    RuleProvenance {
                        schema: SchemaTag::OrIntL,
                        formula: Some(d.clone()),
                        q: None,
                    },
                );
                add(
                    &mut n,
                    AtomicRule::new(vec![Premise::plain(a_r.clone())], a_d.clone()),
                    RuleProvenance {
                        schema: SchemaTag::OrIntR,
                        formula: Some(d.clone()),
                        q: None,
                    },
                );
                for q in vocab {
                    let idx = add(
                        &mut n,
                        AtomicRule::new(
                            vec![
                                Premise::plain(a_d.clone()),
                                Premise::new([a_l.clone()], q.clone()),
                                Premise::new([a_r.clone()], q.clone()),
                            ],
                            q.clone(),
                        ),
                        RuleProvenance {
                            schema: SchemaTag::OrElim,
                            formula: Some(d.clone()),
                            q: Some(q.clone()),
                        },
                    );
                    n.or_elims.entry((a_d.clone(), q.clone())).or_insert(idx);
                }
            }
            Formula::And(l, r) => {
                let a_l = alpha.atom_of(l)?.clone();
                let a_r = alpha.atom_of(r)?.clone();
                add(
                    &mut n,
                    AtomicRule::new(
                        vec![Premise::plain(a_l.clone()), Premise::plain(a_r.clone())],
                        a_d.clone(),
                    ),
                    RuleProvenance {
                        schema: SchemaTag::AndInt,
                        formula: Some(d.clone()),
                        q: None,
                    },
                );
                add(
                    &mut n,
                    AtomicRule::new(vec![Premise::plain(a_d.clone())], a_l),
                    RuleProvenance {
                        schema: SchemaTag::AndElimL,
                        formula: Some(d.clone()),
                        q: None,
                    },
                );
                add(
                    &mut n,
                    AtomicRule::new(vec![Premise::plain(a_d.clone())], a_r),
                    RuleProvenance {
                        schema: SchemaTag::AndElimR,
                        formula: Some(d.clone()),
                        q: None,
                    },
                );
            }
            Formula::BasicC(_) | Formula::Classical(_) => {
                let inner = match d {
                    Formula::BasicC(b) => Formula::BasicI(b.clone()),
                    Formula::Classical(inner) => (**inner).clone(),
                    _ => unreachable!(),
                };
                let neg_inner = Formula::neg(inner);
                let a_neg = alpha.atom_of(&neg_inner)?.clone();
                add(
                    &mut n,
                    AtomicRule::new(
                        vec![Premise::new([a_neg.clone()], Basic::Falsum)],
                        a_d.clone(),
                    ),
                    RuleProvenance {
                        schema: SchemaTag::ClsInt,
                        formula: Some(d.clone()),
                        q: None,
                    },
                );
                add(
                    &mut n,
                    AtomicRule::new(
                        vec![Premise::plain(a_d.clone()), Premise::plain(a_neg)],
                        Basic::Falsum,
                    ),
                    RuleProvenance {
                        schema: SchemaTag::ClsElim,
                        formula: Some(d.clone()),
                        q: None,
                    },
                );
            }
        }
    }
    for q in vocab {
        let idx = add(
            &mut n,
            AtomicRule::new(vec![Premise::plain(Basic::Falsum)], q.clone()),
            RuleProvenance {
                schema: SchemaTag::BotElim,
                formula: None,
                q: Some(q.clone()),
            },
        );
        n.bot_elims.entry(q.clone()).or_insert(idx);
    }
    Ok(n)
}

/// Degree of the annotation formula itself: basic sentences are flat,
/// classical flavor costs two, binary connectives sum their operands
/// plus one.
pub fn annotation_degree(f: &Formula) -> usize {
    match f {
        Formula::BasicI(_) => 0,
        Formula::BasicC(_) => 2,
        Formula::Classical(inner) => annotation_degree(inner) + 2,
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
            annotation_degree(l) + annotation_degree(r) + 1
        }
    }
}

pub fn degree_of(alpha: &AlphaMap, atom: &Basic) -> Result<usize, SimulationError> {
    if atom.is_falsum() {
        return Ok(0);
    }
    alpha
        .formula_of(atom)
        .map(annotation_degree)
        .ok_or_else(|| SimulationError::UnmappedAtom(atom.clone()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RedexKind {
    MaximumFormula,
    MaximumSegment,
}

/// A removable detour: either a maximum formula (introduction conclusion
/// standing as elimination major premise) or a maximum segment (the same
/// separated by a run of disjunction-elimination minor premises, or headed
/// by an ex-falso application).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Redex {
    pub kind: RedexKind,
    /// Path to the introduction (or segment head) that opens the detour.
    pub start: Vec<usize>,
    /// Path to the elimination whose major premise closes it.
    pub elim: Vec<usize>,
    /// The basic sentence standing at the detour's vertex.
    pub vertex: Basic,
}

/// All redexes of `pi`, leftmost-innermost first.
pub fn find_redexes(pi: &AtomicDerivation, n: &NBase) -> Result<Vec<Redex>, SimulationError> {
    check_derivation(n.base(), pi).map_err(|e| SimulationError::IllFormed(e.to_string()))?;
    let mut out = Vec::new();
    collect_redexes(pi, &mut Vec::new(), n, &mut out);
    Ok(out)
}

fn collect_redexes(
    node: &AtomicDerivation,
    path: &mut Vec<usize>,
    n: &NBase,
    out: &mut Vec<Redex>,
) {
    let AtomicDerivation::Apply { rule, children, .. } = node else {
        return;
    };
    for (i, child) in children.iter().enumerate() {
        path.push(i);
        collect_redexes(child, path, n, out);
        path.pop();
    }
    let Some(prov) = n.provenance(*rule) else {
        return;
    };
    if !prov.schema.is_elim() {
        return;
    }
    let major = &children[0];
    let AtomicDerivation::Apply {
        rule: mrule,
        conclusion: mconcl,
        ..
    } = major
    else {
        return;
    };
    let Some(mprov) = n.provenance(*mrule) else {
        return;
    };
    let mut mpath = path.clone();
    mpath.push(0);
    if mprov.schema.is_intro() {
        out.push(Redex {
            kind: RedexKind::MaximumFormula,
            start: mpath,
            elim: path.clone(),
            vertex: mconcl.clone(),
        });
    } else if mprov.schema == SchemaTag::BotElim {
        out.push(Redex {
            kind: RedexKind::MaximumSegment,
            start: mpath,
            elim: path.clone(),
            vertex: mconcl.clone(),
        });
    } else if mprov.schema == SchemaTag::OrElim {
        if let Some(start) = segment_start(major, &mpath, n) {
            out.push(Redex {
                kind: RedexKind::MaximumSegment,
                start,
                elim: path.clone(),
                vertex: mconcl.clone(),
            });
        }
    }
}

/// Walks up through disjunction-elimination minor premises looking for the
/// leftmost thread that begins with an introduction or ex falso.
fn segment_start(node: &AtomicDerivation, path: &[usize], n: &NBase) -> Option<Vec<usize>> {
    let AtomicDerivation::Apply { rule, children, .. } = node else {
        return None;
    };
    let prov = n.provenance(*rule)?;
    if prov.schema == SchemaTag::OrElim {
        for i in [1usize, 2] {
            let mut cp = path.to_vec();
            cp.push(i);
            if let Some(found) = segment_start(&children[i], &cp, n) {
                return Some(found);
            }
        }
        None
    } else if prov.schema.is_intro() || prov.schema == SchemaTag::BotElim {
        Some(path.to_vec())
    } else {
        None
    }
}

pub fn is_normal(pi: &AtomicDerivation, n: &NBase) -> Result<bool, SimulationError> {
    Ok(find_redexes(pi, n)?.is_empty())
}

pub fn subderivation<'a>(
    pi: &'a AtomicDerivation,
    path: &[usize],
) -> Result<&'a AtomicDerivation, SimulationError> {
    node_at(pi, path).ok_or(SimulationError::BadPath)
}

fn node_at<'a>(d: &'a AtomicDerivation, path: &[usize]) -> Option<&'a AtomicDerivation> {
    let mut cur = d;
    for &i in path {
        let AtomicDerivation::Apply { children, .. } = cur else {
            return None;
        };
        cur = children.get(i)?;
    }
    Some(cur)
}

fn rewrite_at(d: &AtomicDerivation, path: &[usize], new: AtomicDerivation) -> AtomicDerivation {
    if path.is_empty() {
        return new;
    }
    let AtomicDerivation::Apply {
        rule,
        conclusion,
        label,
        children,
    } = d
    else {
        unreachable!("path through a leaf");
    };
    let mut kids = children.clone();
    kids[path[0]] = rewrite_at(&children[path[0]], &path[1..], new);
    AtomicDerivation::Apply {
        rule: *rule,
        conclusion: conclusion.clone(),
        label: label.clone(),
        children: kids,
    }
}

fn collect_labels(d: &AtomicDerivation) -> HashSet<String> {
    fn walk(d: &AtomicDerivation, out: &mut HashSet<String>) {
        match d {
            AtomicDerivation::Assume { label, .. } => {
                if let Some(l) = label {
                    out.insert(l.clone());
                }
            }
            AtomicDerivation::Apply {
                label, children, ..
            } => {
                if let Some(l) = label {
                    out.insert(l.clone());
                }
                for c in children {
                    walk(c, out);
                }
            }
        }
    }
    let mut out = HashSet::new();
    walk(d, &mut out);
    out
}

fn fresh_label(pool: &mut HashSet<String>, counter: &mut usize) -> String {
    loop {
        let candidate = format!("n{}", *counter);
        *counter += 1;
        if pool.insert(candidate.clone()) {
            return candidate;
        }
    }
}

/// Renames every binder in `d` to a fresh name, rewriting the assumptions
/// each binder discharges. Free labeled assumptions are left alone.
fn freshen(
    d: &AtomicDerivation,
    pool: &mut HashSet<String>,
    counter: &mut usize,
) -> AtomicDerivation {
    fn go(
        d: &AtomicDerivation,
        env: &mut Vec<(String, String)>,
        pool: &mut HashSet<String>,
        counter: &mut usize,
    ) -> AtomicDerivation {
        match d {
            AtomicDerivation::Assume { basic, label } => {
                let renamed = label.as_ref().map(|l| {
                    env.iter()
                        .rev()
                        .find(|(old, _)| old == l)
                        .map(|(_, new)| new.clone())
                        .unwrap_or_else(|| l.clone())
                });
                AtomicDerivation::Assume {
                    basic: basic.clone(),
                    label: renamed,
                }
            }
            AtomicDerivation::Apply {
                rule,
                conclusion,
                label,
                children,
            } => {
                let renamed = label.as_ref().map(|l| {
                    let fresh = fresh_label(pool, counter);
                    env.push((l.clone(), fresh.clone()));
                    fresh
                });
                let kids = children.iter().map(|c| go(c, env, pool, counter)).collect();
                if label.is_some() {
                    env.pop();
                }
                AtomicDerivation::Apply {
                    rule: *rule,
                    conclusion: conclusion.clone(),
                    label: renamed,
                    children: kids,
                }
            }
        }
    }
    go(d, &mut Vec::new(), pool, counter)
}

/// Replaces every assumption discharged by `binder` with a fresh copy of
/// `replacement`. The body must already be freshened so no inner binder
/// shares the name.
fn substitute(
    d: &AtomicDerivation,
    binder: &str,
    shape: &Basic,
    replacement: &AtomicDerivation,
    pool: &mut HashSet<String>,
    counter: &mut usize,
) -> AtomicDerivation {
    match d {
        AtomicDerivation::Assume {
            basic,
            label: Some(l),
        } if l == binder => {
            debug_assert_eq!(basic, shape);
            freshen(replacement, pool, counter)
        }
        AtomicDerivation::Assume { .. } => d.clone(),
        AtomicDerivation::Apply {
            rule,
            conclusion,
            label,
            children,
        } => {
            debug_assert!(label.as_deref() != Some(binder), "binder escaped freshening");
            AtomicDerivation::Apply {
                rule: *rule,
                conclusion: conclusion.clone(),
                label: label.clone(),
                children: children
                    .iter()
                    .map(|c| substitute(c, binder, shape, replacement, pool, counter))
                    .collect(),
            }
        }
    }
}

/// Renames free occurrences of label `old` to `new`, stopping below any
/// binder that shadows `old`.
fn rename_free_label(d: &AtomicDerivation, old: &str, new: &str) -> AtomicDerivation {
    match d {
        AtomicDerivation::Assume {
            basic,
            label: Some(l),
        } if l == old => AtomicDerivation::Assume {
            basic: basic.clone(),
            label: Some(new.to_string()),
        },
        AtomicDerivation::Assume { .. } => d.clone(),
        AtomicDerivation::Apply { label: Some(l), .. } if l == old => d.clone(),
        AtomicDerivation::Apply {
            rule,
            conclusion,
            label,
            children,
        } => AtomicDerivation::Apply {
            rule: *rule,
            conclusion: conclusion.clone(),
            label: label.clone(),
            children: children
                .iter()
                .map(|c| rename_free_label(c, old, new))
                .collect(),
        },
    }
}

fn discharge_shape(n: &NBase, rule: usize, premise: usize) -> Option<Basic> {
    n.base().rules()[rule].premises[premise]
        .discharge
        .iter()
        .next()
        .cloned()
}

/// Contracts the detour closed by `redex`'s elimination node.
pub fn reduce_once(
    pi: &AtomicDerivation,
    redex: &Redex,
    n: &NBase,
) -> Result<AtomicDerivation, SimulationError> {
    let current = find_redexes(pi, n)?;
    if !current.iter().any(|r| r == redex) {
        return Err(SimulationError::StaleRedex);
    }
    let mut pool = collect_labels(pi);
    let mut counter = 0usize;
    let elim = node_at(pi, &redex.elim).ok_or(SimulationError::BadPath)?;
    let contracted = contract(elim, n, &mut pool, &mut counter);
    Ok(rewrite_at(pi, &redex.elim, contracted))
}

/// The rewrite at an elimination whose major premise ends a detour. Which
/// rewrite applies is read off the major's provenance: an introduction
/// triggers the proper reduction for its connective, an ex-falso head
/// collapses the trailing elimination into a single ex falso, and a
/// disjunction elimination is permuted past the trailing elimination.
fn contract(
    elim: &AtomicDerivation,
    n: &NBase,
    pool: &mut HashSet<String>,
    counter: &mut usize,
) -> AtomicDerivation {
    let AtomicDerivation::Apply {
        rule: erule,
        conclusion: econcl,
        label: elabel,
        children: ekids,
    } = elim
    else {
        unreachable!("redex elimination is an application");
    };
    let eprov = n.provenance(*erule).expect("derivation checked against N");
    let major = &ekids[0];
    let AtomicDerivation::Apply {
        rule: mrule,
        label: mlabel,
        children: mkids,
        ..
    } = major
    else {
        unreachable!("redex major premise is an application");
    };
    let mprov = n.provenance(*mrule).expect("derivation checked against N");

    let plug = |body: &AtomicDerivation,
                binder: &Option<String>,
                shape: Option<Basic>,
                replacement: &AtomicDerivation,
                pool: &mut HashSet<String>,
                counter: &mut usize| {
        match binder {
            None => body.clone(),
            Some(l) => {
                let shape = shape.expect("discharging premise carries a shape");
                let fresh_body = freshen(body, pool, counter);
                substitute(&fresh_body, l, &shape, replacement, pool, counter)
            }
        }
    };

    match mprov.schema {
        SchemaTag::AndInt => {
            let i = if eprov.schema == SchemaTag::AndElimL { 0 } else { 1 };
            mkids[i].clone()
        }
        SchemaTag::ImpInt => plug(
            &mkids[0],
            mlabel,
            discharge_shape(n, *mrule, 0),
            &ekids[1],
            pool,
            counter,
        ),
        SchemaTag::ClsInt => plug(
            &mkids[0],
            mlabel,
            discharge_shape(n, *mrule, 0),
            &ekids[1],
            pool,
            counter,
        ),
        SchemaTag::OrIntL | SchemaTag::OrIntR => {
            let i = if mprov.schema == SchemaTag::OrIntL { 1 } else { 2 };
            plug(
                &ekids[i],
                elabel,
                discharge_shape(n, *erule, i),
                &mkids[0],
                pool,
                counter,
            )
        }
        SchemaTag::BotElim => {
            if eprov.schema == SchemaTag::ClsElim {
                // The head already concludes bot, which is the elimination's
                // conclusion; the detour disappears entirely.
                mkids[0].clone()
            } else {
                let idx = n
                    .bot_elim_rule(econcl)
                    .expect("elimination conclusions stay inside the vocabulary");
                AtomicDerivation::Apply {
                    rule: idx,
                    conclusion: econcl.clone(),
                    label: None,
                    children: vec![mkids[0].clone()],
                }
            }
        }
        SchemaTag::OrElim => {
            let major_atom = n.base().rules()[*mrule].premises[0].conclusion.clone();
            let new_rule = n
                .or_elim_rule(&major_atom, econcl)
                .expect("elimination conclusions stay inside the vocabulary");
            let new_label = mlabel.as_ref().map(|_| fresh_label(pool, counter));
            let mut branches = Vec::with_capacity(2);
            for i in [1usize, 2] {
                let mut minor = mkids[i].clone();
                if let (Some(old), Some(new)) = (mlabel.as_ref(), new_label.as_ref()) {
                    minor = rename_free_label(&minor, old, new);
                }
                let (branch_label, deltas): (Option<String>, Vec<AtomicDerivation>) = match elabel
                {
                    Some(el) => {
                        let nl = fresh_label(pool, counter);
                        (
                            Some(nl.clone()),
                            ekids[1..]
                                .iter()
                                .map(|d| rename_free_label(d, el, &nl))
                                .collect(),
                        )
                    }
                    None => (None, ekids[1..].to_vec()),
                };
                let mut children = vec![minor];
                children.extend(deltas);
                branches.push(AtomicDerivation::Apply {
                    rule: *erule,
                    conclusion: econcl.clone(),
                    label: branch_label,
                    children,
                });
            }
            let mut children = vec![mkids[0].clone()];
            children.extend(branches);
            AtomicDerivation::Apply {
                rule: new_rule,
                conclusion: econcl.clone(),
                label: new_label,
                children,
            }
        }
        _ => unreachable!("redex classification"),
    }
}

fn redex_degree(pi: &AtomicDerivation, r: &Redex, n: &NBase) -> usize {
    let Some(AtomicDerivation::Apply { rule, .. }) = node_at(pi, &r.elim) else {
        return 0;
    };
    match n.provenance(*rule).and_then(|p| p.formula.as_ref()) {
        Some(f) => annotation_degree(f),
        None => 0,
    }
}

/// Maximum degree over all detours of the derivation, 0 when normal.
pub fn derivation_degree(pi: &AtomicDerivation, n: &NBase) -> Result<usize, SimulationError> {
    let redexes = find_redexes(pi, n)?;
    Ok(redexes
        .iter()
        .map(|r| redex_degree(pi, r, n))
        .max()
        .unwrap_or(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Always contract an innermost detour of maximal degree.
    DegreeDirected,
    /// Always contract the first detour in leftmost-innermost order.
    LeftmostInnermost,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::DegreeDirected => write!(f, "degree"),
            Strategy::LeftmostInnermost => write!(f, "innermost"),
        }
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "degree" => Ok(Strategy::DegreeDirected),
            "innermost" => Ok(Strategy::LeftmostInnermost),
            other => Err(format!("unknown strategy `{other}` (degree|innermost)")),
        }
    }
}

const NORMALIZATION_FUEL: usize = 200_000;

pub fn normalize(
    pi: &AtomicDerivation,
    n: &NBase,
    strategy: Strategy,
) -> Result<AtomicDerivation, SimulationError> {
    normalize_traced(pi, n, strategy).map(|(d, _)| d)
}

/// Normalizes and also reports the maximal detour degree at each phase
/// boundary. The trace is strictly decreasing: contracting never raises
/// the maximum degree, under either strategy.
pub fn normalize_traced(
    pi: &AtomicDerivation,
    n: &NBase,
    strategy: Strategy,
) -> Result<(AtomicDerivation, Vec<usize>), SimulationError> {
    let mut redexes = find_redexes(pi, n)?;
    let mut cur = pi.clone();
    let mut trace = Vec::new();
    let mut last: Option<usize> = None;
    let mut fuel = NORMALIZATION_FUEL;
    while !redexes.is_empty() {
        assert!(fuel > 0, "normalization fuel exhausted");
        fuel -= 1;
        let degrees: Vec<usize> = redexes.iter().map(|r| redex_degree(&cur, r, n)).collect();
        let dmax = degrees.iter().copied().max().unwrap();
        if last != Some(dmax) {
            trace.push(dmax);
            last = Some(dmax);
        }
        let pick = match strategy {
            Strategy::LeftmostInnermost => 0,
            Strategy::DegreeDirected => degrees.iter().position(|&d| d == dmax).unwrap(),
        };
        cur = step(&cur, &redexes[pick], n);
        redexes.clear();
        collect_redexes(&cur, &mut Vec::new(), n, &mut redexes);
    }
    Ok((cur, trace))
}

/// One contraction without revalidating the whole derivation. Reductions
/// preserve checkability, so revalidation is confined to debug builds.
fn step(cur: &AtomicDerivation, redex: &Redex, n: &NBase) -> AtomicDerivation {
    let mut pool = collect_labels(cur);
    let mut counter = 0usize;
    let elim = node_at(cur, &redex.elim).expect("redex paths stay valid");
    let contracted = contract(elim, n, &mut pool, &mut counter);
    let next = rewrite_at(cur, &redex.elim, contracted);
    debug_assert!(check_derivation(n.base(), &next).is_ok());
    next
}

/// One degree-directed phase: contracts innermost maximal-degree detours
/// until the maximum degree drops below its entry value.
pub fn reduce_phase(
    pi: &AtomicDerivation,
    n: &NBase,
) -> Result<AtomicDerivation, SimulationError> {
    let entry = derivation_degree(pi, n)?;
    let mut cur = pi.clone();
    if entry == 0 {
        return Ok(cur);
    }
    let mut fuel = NORMALIZATION_FUEL;
    loop {
        let mut redexes = Vec::new();
        collect_redexes(&cur, &mut Vec::new(), n, &mut redexes);
        let degrees: Vec<usize> = redexes.iter().map(|r| redex_degree(&cur, r, n)).collect();
        let Some(dmax) = degrees.iter().copied().max() else {
            break;
        };
        if dmax < entry {
            break;
        }
        assert!(fuel > 0, "normalization fuel exhausted");
        fuel -= 1;
        let pick = degrees.iter().position(|&d| d == dmax).unwrap();
        cur = step(&cur, &redexes[pick], n);
    }
    Ok(cur)
}

/// Consistency of a generated simulation base, established two independent
/// ways that must agree: saturation cannot reach bot from no assumptions,
/// and sampled normal derivations obey the structural exclusion argument
/// (anything not ending in an introduction keeps an open assumption, and
/// no closed normal derivation concludes bot).
pub fn consistency_of_n(n: &NBase) -> bool {
    let by_saturation = !derives(n.base(), &BTreeSet::new(), &Basic::Falsum);

    let mut rng = StdRng::seed_from_u64(0x5eed_ba5e);
    let mut by_structure = true;
    if !n.base().is_empty() {
        for _ in 0..24 {
            let raw = random_atomic_derivation(&mut rng, n.base(), 4);
            let nf = normalize(&raw, n, Strategy::DegreeDirected)
                .expect("sampled derivations normalize");
            let (open, conclusion) =
                check_derivation(n.base(), &nf).expect("normal forms still check");
            let ends_in_intro = matches!(
                &nf,
                AtomicDerivation::Apply { rule, .. }
                    if n.provenance(*rule).is_some_and(|p| p.schema.is_intro())
            );
            if !ends_in_intro && open.is_empty() {
                by_structure = false;
            }
            if open.is_empty() && conclusion.is_falsum() {
                by_structure = false;
            }
        }
    }

    assert_eq!(
        by_saturation, by_structure,
        "consistency routes disagree on the simulation base"
    );
    by_saturation
}

/// Proves `goal` from `context` by compiling to the simulation base,
/// deriving atomically, normalizing, and reading the derivation back as a
/// natural-deduction proof. The inconsistent-context branch derives bot
/// and closes with an ex falso.
pub fn completeness_roundtrip(
    context: &[Formula],
    goal: &Formula,
) -> Result<NDProof, SimulationError> {
    completeness_roundtrip_with(context, goal, Strategy::DegreeDirected)
}

/// `completeness_roundtrip` with a caller-chosen normalization strategy.
pub fn completeness_roundtrip_with(
    context: &[Formula],
    goal: &Formula,
    strategy: Strategy,
) -> Result<NDProof, SimulationError> {
    if !decide_strong(context, goal) {
        return Err(SimulationError::NotDerivable);
    }
    let gs = gamma_star(context, goal);
    let alpha = make_alpha(&gs);
    let mut vocab: Vec<Basic> = alpha.atoms().cloned().collect();
    if !vocab.contains(&Basic::Falsum) {
        vocab.push(Basic::Falsum);
    }
    let n = build_n(&gs, &alpha, &vocab)?;

    let mut bb = n.base().clone();
    for b in context {
        bb.add_rule(AtomicRule::axiom(alpha.atom_of(b)?.clone()));
    }

    let empty = BTreeSet::new();
    let target = if derives(&bb, &empty, &Basic::Falsum) {
        Basic::Falsum
    } else {
        alpha.atom_of(goal)?.clone()
    };
    let witness = derive_witness(&bb, &empty, &target)
        .expect("saturation-backed witness search cannot miss");
    let stripped = strip_axioms(&witness, n.base().len());
    let normal = normalize(&stripped, &n, strategy)?;
    let mut proof = to_nd(&normal, &n, &alpha);
    if target.is_falsum() {
        proof = NDProof::node(RuleKind::BotElim, goal.clone(), None, vec![proof]);
    }
    debug_assert!(crate::prover::check_nd(&proof).is_ok());
    Ok(proof)
}

/// Replaces uses of the context axioms (indices past the simulation base)
/// by plain open assumptions of their conclusions.
fn strip_axioms(d: &AtomicDerivation, n_len: usize) -> AtomicDerivation {
    match d {
        AtomicDerivation::Assume { .. } => d.clone(),
        AtomicDerivation::Apply {
            rule, conclusion, ..
        } if *rule >= n_len => AtomicDerivation::Assume {
            basic: conclusion.clone(),
            label: None,
        },
        AtomicDerivation::Apply {
            rule,
            conclusion,
            label,
            children,
        } => AtomicDerivation::Apply {
            rule: *rule,
            conclusion: conclusion.clone(),
            label: label.clone(),
            children: children.iter().map(|c| strip_axioms(c, n_len)).collect(),
        },
    }
}

/// Reads an atomic derivation over the simulation base back as a
/// natural-deduction proof, mapping every atom through the annotation;
/// instantiation atoms outside the map pass through as themselves.
fn to_nd(d: &AtomicDerivation, n: &NBase, alpha: &AlphaMap) -> NDProof {
    let back = |b: &Basic| -> Formula {
        alpha
            .formula_of(b)
            .cloned()
            .unwrap_or_else(|| Formula::BasicI(b.clone()))
    };
    match d {
        AtomicDerivation::Assume { basic, label } => match label {
            Some(l) => NDProof::assume_labeled(back(basic), l.clone()),
            None => NDProof::assume(back(basic)),
        },
        AtomicDerivation::Apply {
            rule,
            conclusion,
            label,
            children,
        } => {
            let prov = n.provenance(*rule).expect("derivation checked against N");
            let formula = prov.formula.clone();
            let kids: Vec<NDProof> = children.iter().map(|c| to_nd(c, n, alpha)).collect();
            let (kind, concl) = match prov.schema {
                SchemaTag::ImpInt => (RuleKind::ImpIntro, formula.unwrap()),
                SchemaTag::ImpElim => match formula.unwrap() {
                    Formula::Imp(_, r) => (RuleKind::ImpElim, *r),
                    _ => unreachable!("implication provenance"),
                },
                SchemaTag::OrIntL => (RuleKind::OrIntroL, formula.unwrap()),
                SchemaTag::OrIntR => (RuleKind::OrIntroR, formula.unwrap()),
                SchemaTag::OrElim => (RuleKind::OrElim, back(conclusion)),
                SchemaTag::AndInt => (RuleKind::AndIntro, formula.unwrap()),
                SchemaTag::AndElimL => match formula.unwrap() {
                    Formula::And(l, _) => (RuleKind::AndElimL, *l),
                    _ => unreachable!("conjunction provenance"),
                },
                SchemaTag::AndElimR => match formula.unwrap() {
                    Formula::And(_, r) => (RuleKind::AndElimR, *r),
                    _ => unreachable!("conjunction provenance"),
                },
                SchemaTag::ClsInt => (RuleKind::ClassIntro, formula.unwrap()),
                SchemaTag::ClsElim => (RuleKind::ClassElim, Formula::BasicI(Basic::Falsum)),
                SchemaTag::BotElim => (RuleKind::BotElim, back(conclusion)),
            };
            NDProof::node(kind, concl, label.clone(), kids)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{extends, parse_base};
    use crate::prover::check_nd;
    use crate::semantics::Evaluator;
    use crate::universe::{Universe, UniverseConfig};

    fn f(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    fn pipeline(context: &[Formula], goal: &Formula) -> (BTreeSet<Formula>, AlphaMap, NBase) {
        let gs = gamma_star(context, goal);
        let alpha = make_alpha(&gs);
        let mut vocab: Vec<Basic> = alpha.atoms().cloned().collect();
        if !vocab.contains(&Basic::Falsum) {
            vocab.push(Basic::Falsum);
        }
        let n = build_n(&gs, &alpha, &vocab).unwrap();
        (gs, alpha, n)
    }

    fn rule_idx(n: &NBase, tag: SchemaTag, formula: Option<&Formula>) -> usize {
        (0..n.base().len())
            .find(|&i| {
                let p = n.provenance(i).unwrap();
                p.schema == tag && p.formula.as_ref() == formula
            })
            .unwrap_or_else(|| panic!("no {} rule for {formula:?}", tag.name()))
    }

    #[test]
    fn closure_of_a_bare_atom_is_just_the_atom() {
        let gs = gamma_star(&[], &f("p"));
        assert_eq!(gs, BTreeSet::from([f("p")]));
    }

    #[test]
    fn closure_of_a_classical_atom_brings_in_its_refutation_material() {
        let gs = gamma_star(&[], &f("p^c"));
        let expected = BTreeSet::from([f("p^c"), f("p"), f("~p"), f("bot")]);
        assert_eq!(gs, expected);
    }

    #[test]
    fn closure_merges_shared_negations() {
        let gs = gamma_star(&[f("~~p")], &f("p^c"));
        let expected = BTreeSet::from([f("~~p"), f("~p"), f("p"), f("bot"), f("p^c")]);
        assert_eq!(gs, expected);
    }

    #[test]
    fn alpha_keeps_intuitionistic_atoms_and_freshens_the_rest() {
        let gs = gamma_star(&[], &f("p^c"));
        let alpha = make_alpha(&gs);
        assert_eq!(alpha.atom_of(&f("p")).unwrap(), &Basic::atom("p"));
        assert_eq!(alpha.atom_of(&f("bot")).unwrap(), &Basic::Falsum);
        for formula in &gs {
            let atom = alpha.atom_of(formula).unwrap();
            if !matches!(formula, Formula::BasicI(_)) {
                let Basic::Atom(name) = atom else {
                    panic!("fresh assignments are atoms")
                };
                assert!(name.starts_with(FRESH_SIGIL));
                assert!(!gs.contains(&Formula::BasicI(atom.clone())));
            }
            assert_eq!(alpha.formula_of(atom), Some(formula));
        }
        assert_eq!(alpha.len(), gs.len());
    }

    #[test]
    fn simulation_base_for_a_classical_atom_has_the_expected_rules() {
        let (_, alpha, n) = pipeline(&[], &f("p^c"));
        let a_neg = alpha.atom_of(&f("~p")).unwrap().clone();
        let a_cls = alpha.atom_of(&f("p^c")).unwrap().clone();

        let cls_int = &n.base().rules()[rule_idx(&n, SchemaTag::ClsInt, Some(&f("p^c")))];
        assert_eq!(cls_int.conclusion, a_cls);
        assert_eq!(cls_int.premises.len(), 1);
        assert_eq!(cls_int.premises[0].discharge, BTreeSet::from([a_neg.clone()]));
        assert_eq!(cls_int.premises[0].conclusion, Basic::Falsum);

        let cls_elim = &n.base().rules()[rule_idx(&n, SchemaTag::ClsElim, Some(&f("p^c")))];
        assert_eq!(cls_elim.conclusion, Basic::Falsum);
        assert_eq!(cls_elim.premises[0].conclusion, a_cls);
        assert_eq!(cls_elim.premises[1].conclusion, a_neg);

        rule_idx(&n, SchemaTag::ImpInt, Some(&f("~p")));
        rule_idx(&n, SchemaTag::ImpElim, Some(&f("~p")));
        for q in n.vocab() {
            assert!(n.bot_elim_rule(q).is_some());
        }
        // two implication rules, two classical rules, one ex falso per atom
        assert_eq!(n.base().len(), 4 + n.vocab().len());
    }

    #[test]
    fn simulation_base_for_a_bare_atom_is_ex_falso_only() {
        let (_, _, n) = pipeline(&[], &f("p"));
        assert_eq!(n.base().len(), n.vocab().len());
        for i in 0..n.base().len() {
            assert_eq!(n.provenance(i).unwrap().schema, SchemaTag::BotElim);
        }
    }

    #[test]
    fn rendered_bases_round_trip_through_the_parser() {
        let (_, _, n) = pipeline(&[f("p & q")], &f("(p | q)^c"));
        let rendered = n.render();
        assert!(rendered.contains("# schema=cls-int"));
        assert!(rendered.contains("q="));
        let reparsed = parse_base(&rendered).unwrap();
        assert_eq!(reparsed.canon(), n.base().canon());
    }

    #[test]
    fn degrees_follow_the_annotation() {
        assert_eq!(annotation_degree(&f("q")), 0);
        assert_eq!(annotation_degree(&f("q^c")), 2);
        assert_eq!(annotation_degree(&f("q & r")), 1);
        assert_eq!(annotation_degree(&f("(p -> q)^c")), 3);

        let (_, alpha, _) = pipeline(&[], &f("q^c"));
        let a_cls = alpha.atom_of(&f("q^c")).unwrap().clone();
        assert_eq!(degree_of(&alpha, &a_cls).unwrap(), 2);
        assert_eq!(degree_of(&alpha, &Basic::Falsum).unwrap(), 0);
        assert_eq!(
            degree_of(&alpha, &Basic::atom("zz")),
            Err(SimulationError::UnmappedAtom(Basic::atom("zz")))
        );
    }

    /// The classical detour: an introduction discharging the negated twin,
    /// immediately consumed as the major premise of the elimination.
    fn classical_detour() -> (NBase, AlphaMap, AtomicDerivation) {
        let (_, alpha, n) = pipeline(&[], &f("p^c"));
        let a_neg = alpha.atom_of(&f("~p")).unwrap().clone();
        let a_cls = alpha.atom_of(&f("p^c")).unwrap().clone();
        let imp_elim = rule_idx(&n, SchemaTag::ImpElim, Some(&f("~p")));
        let cls_int = rule_idx(&n, SchemaTag::ClsInt, Some(&f("p^c")));
        let cls_elim = rule_idx(&n, SchemaTag::ClsElim, Some(&f("p^c")));
        let body = AtomicDerivation::Apply {
            rule: imp_elim,
            conclusion: Basic::Falsum,
            label: None,
            children: vec![
                AtomicDerivation::Assume {
                    basic: a_neg.clone(),
                    label: Some("u".into()),
                },
                AtomicDerivation::assume(Basic::atom("p")),
            ],
        };
        let intro = AtomicDerivation::Apply {
            rule: cls_int,
            conclusion: a_cls,
            label: Some("u".into()),
            children: vec![body],
        };
        let detour = AtomicDerivation::Apply {
            rule: cls_elim,
            conclusion: Basic::Falsum,
            label: None,
            children: vec![intro, AtomicDerivation::assume(a_neg)],
        };
        (n, alpha, detour)
    }

    #[test]
    fn the_classical_detour_is_one_maximum_formula() {
        let (n, alpha, detour) = classical_detour();
        let redexes = find_redexes(&detour, &n).unwrap();
        assert_eq!(redexes.len(), 1);
        let r = &redexes[0];
        assert_eq!(r.kind, RedexKind::MaximumFormula);
        assert_eq!(r.start, vec![0]);
        assert_eq!(r.elim, Vec::<usize>::new());
        assert_eq!(&r.vertex, alpha.atom_of(&f("p^c")).unwrap());
        assert_eq!(derivation_degree(&detour, &n).unwrap(), 2);
    }

    #[test]
    fn reducing_the_classical_detour_substitutes_and_normalizes_in_one_step() {
        let (n, _, detour) = classical_detour();
        let (before_open, before_concl) = check_derivation(n.base(), &detour).unwrap();
        let r = find_redexes(&detour, &n).unwrap().remove(0);
        let reduced = reduce_once(&detour, &r, &n).unwrap();
        let (after_open, after_concl) = check_derivation(n.base(), &reduced).unwrap();
        assert_eq!(after_concl, before_concl);
        assert!(after_open.is_subset(&before_open));
        assert!(is_normal(&reduced, &n).unwrap());
        assert!(matches!(
            reduce_once(&reduced, &r, &n),
            Err(SimulationError::StaleRedex)
        ));
    }

    #[test]
    fn ex_falso_heads_collapse_through_eliminations() {
        let (_, alpha, n) = pipeline(&[], &f("p & q"));
        let a_and = alpha.atom_of(&f("p & q")).unwrap().clone();
        let head = AtomicDerivation::Apply {
            rule: n.bot_elim_rule(&a_and).unwrap(),
            conclusion: a_and,
            label: None,
            children: vec![AtomicDerivation::assume(Basic::Falsum)],
        };
        let detour = AtomicDerivation::Apply {
            rule: rule_idx(&n, SchemaTag::AndElimL, Some(&f("p & q"))),
            conclusion: Basic::atom("p"),
            label: None,
            children: vec![head],
        };
        let r = find_redexes(&detour, &n).unwrap().remove(0);
        assert_eq!(r.kind, RedexKind::MaximumSegment);
        let reduced = reduce_once(&detour, &r, &n).unwrap();
        let expected = AtomicDerivation::Apply {
            rule: n.bot_elim_rule(&Basic::atom("p")).unwrap(),
            conclusion: Basic::atom("p"),
            label: None,
            children: vec![AtomicDerivation::assume(Basic::Falsum)],
        };
        assert_eq!(reduced, expected);
        assert!(is_normal(&reduced, &n).unwrap());
    }

    /// Conjunction introduced inside both branches of a disjunction
    /// elimination, consumed by a trailing projection.
    fn segment_through_or() -> (NBase, AlphaMap, AtomicDerivation) {
        let goal = f("(p | q) -> (p & q)");
        let (_, alpha, n) = pipeline(&[], &goal);
        let a_or = alpha.atom_of(&f("p | q")).unwrap().clone();
        let a_and = alpha.atom_of(&f("p & q")).unwrap().clone();
        let and_int = rule_idx(&n, SchemaTag::AndInt, Some(&f("p & q")));
        let minor = |bound: &str| AtomicDerivation::Apply {
            rule: and_int,
            conclusion: a_and.clone(),
            label: None,
            children: vec![
                if bound == "p" {
                    AtomicDerivation::Assume {
                        basic: Basic::atom("p"),
                        label: Some("w".into()),
                    }
                } else {
                    AtomicDerivation::assume(Basic::atom("p"))
                },
                if bound == "q" {
                    AtomicDerivation::Assume {
                        basic: Basic::atom("q"),
                        label: Some("w".into()),
                    }
                } else {
                    AtomicDerivation::assume(Basic::atom("q"))
                },
            ],
        };
        let or_elim = AtomicDerivation::Apply {
            rule: n.or_elim_rule(&a_or, &a_and).unwrap(),
            conclusion: a_and.clone(),
            label: Some("w".into()),
            children: vec![
                AtomicDerivation::assume(a_or),
                minor("p"),
                minor("q"),
            ],
        };
        let detour = AtomicDerivation::Apply {
            rule: rule_idx(&n, SchemaTag::AndElimL, Some(&f("p & q"))),
            conclusion: Basic::atom("p"),
            label: None,
            children: vec![or_elim],
        };
        (n, alpha, detour)
    }

    #[test]
    fn a_segment_through_or_elimination_is_detected_with_its_vertex() {
        let (n, alpha, detour) = segment_through_or();
        let redexes = find_redexes(&detour, &n).unwrap();
        assert_eq!(redexes.len(), 1);
        let r = &redexes[0];
        assert_eq!(r.kind, RedexKind::MaximumSegment);
        assert_eq!(&r.vertex, alpha.atom_of(&f("p & q")).unwrap());
        assert_eq!(r.start, vec![0, 1]);
        assert_eq!(r.elim, Vec::<usize>::new());
    }

    #[test]
    fn permuting_then_normalizing_clears_the_segment() {
        let (n, alpha, detour) = segment_through_or();
        let (before_open, _) = check_derivation(n.base(), &detour).unwrap();
        let r = find_redexes(&detour, &n).unwrap().remove(0);
        let permuted = reduce_once(&detour, &r, &n).unwrap();
        // the trailing projection is now duplicated into both branches
        let AtomicDerivation::Apply { rule, children, .. } = &permuted else {
            panic!("permutation yields an application");
        };
        let a_or = alpha.atom_of(&f("p | q")).unwrap().clone();
        assert_eq!(
            *rule,
            n.or_elim_rule(&a_or, &Basic::atom("p")).unwrap()
        );
        assert_eq!(children.len(), 3);
        assert_eq!(find_redexes(&permuted, &n).unwrap().len(), 2);

        let normal = normalize(&detour, &n, Strategy::DegreeDirected).unwrap();
        assert!(is_normal(&normal, &n).unwrap());
        let (after_open, after_concl) = check_derivation(n.base(), &normal).unwrap();
        assert_eq!(after_concl, Basic::atom("p"));
        assert!(after_open.is_subset(&before_open));
    }

    #[test]
    fn leaves_and_plain_derivations_are_normal() {
        let (_, _, n) = pipeline(&[], &f("p^c"));
        let leaf = AtomicDerivation::assume(Basic::atom("p"));
        assert!(is_normal(&leaf, &n).unwrap());
        assert_eq!(subderivation(&leaf, &[]).unwrap(), &leaf);
        assert!(matches!(
            subderivation(&leaf, &[0]),
            Err(SimulationError::BadPath)
        ));
    }

    #[test]
    fn both_strategies_normalize_random_derivations_identically_on_sequents() {
        let (_, _, n) = pipeline(&[f("~~p")], &f("p^c | (p & q)"));
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..60 {
            let d = random_atomic_derivation(&mut rng, n.base(), 4);
            let (open, concl) = check_derivation(n.base(), &d).unwrap();
            for strategy in [Strategy::DegreeDirected, Strategy::LeftmostInnermost] {
                let (nf, trace) = normalize_traced(&d, &n, strategy).unwrap();
                assert!(is_normal(&nf, &n).unwrap());
                let (nf_open, nf_concl) = check_derivation(n.base(), &nf).unwrap();
                assert_eq!(nf_concl, concl);
                assert!(nf_open.is_subset(&open));
                assert!(trace.windows(2).all(|w| w[0] > w[1]));
            }
        }
    }

    #[test]
    fn subderivations_of_normal_derivations_are_normal() {
        let (_, _, n) = pipeline(&[], &f("(p | q) -> (p & q)"));
        let mut rng = StdRng::seed_from_u64(4242);
        for _ in 0..40 {
            let d = random_atomic_derivation(&mut rng, n.base(), 4);
            let normal = normalize(&d, &n, Strategy::DegreeDirected).unwrap();
            let mut stack = vec![normal.clone()];
            while let Some(sub) = stack.pop() {
                // subtrees that mention labels bound further up do not
                // check on their own; the lemma speaks of the others
                if let Ok(redexes) = find_redexes(&sub, &n) {
                    assert!(redexes.is_empty());
                }
                if let AtomicDerivation::Apply { children, .. } = &sub {
                    stack.extend(children.iter().cloned());
                }
            }
        }
    }

    #[test]
    fn generated_bases_are_consistent_both_ways() {
        let (_, _, n) = pipeline(&[], &f("p^c"));
        assert!(consistency_of_n(&n));
        let (_, _, n) = pipeline(&[f("p")], &f("q"));
        assert!(consistency_of_n(&n));
        let (_, _, n) = pipeline(&[f("p & q")], &f("(p | q)^c"));
        assert!(consistency_of_n(&n));
    }

    #[test]
    fn roundtrip_rebuilds_checked_proofs() {
        let cases: Vec<(Vec<Formula>, Formula)> = vec![
            (vec![f("~~p")], f("p^c")),
            (vec![f("p & q")], f("q & p")),
            (vec![], f("p -> p")),
        ];
        for (context, goal) in cases {
            let proof = completeness_roundtrip(&context, &goal).unwrap();
            let (open, concl) = check_nd(&proof).unwrap();
            assert_eq!(concl, goal);
            let allowed: BTreeSet<Formula> = context.iter().cloned().collect();
            assert!(open.is_subset(&allowed), "{open:?} not within {allowed:?}");
        }
    }

    #[test]
    fn roundtrip_handles_inconsistent_contexts_by_ex_falso() {
        let context = vec![f("p"), f("~p")];
        let goal = f("q^c");
        let proof = completeness_roundtrip(&context, &goal).unwrap();
        assert_eq!(proof.kind, RuleKind::BotElim);
        let (open, concl) = check_nd(&proof).unwrap();
        assert_eq!(concl, goal);
        let allowed: BTreeSet<Formula> = context.iter().cloned().collect();
        assert!(open.is_subset(&allowed));
    }

    #[test]
    fn roundtrip_rejects_invalid_sequents() {
        assert_eq!(
            completeness_roundtrip(&[], &f("p")),
            Err(SimulationError::NotDerivable)
        );
    }

    #[test]
    fn strong_satisfaction_tracks_atomic_derivability_over_extensions() {
        let (gs, alpha, n) = pipeline(&[], &f("p^c"));
        let vocab: Vec<String> = n
            .vocab()
            .iter()
            .filter_map(|b| match b {
                Basic::Atom(a) => Some(a.clone()),
                Basic::Falsum => None,
            })
            .collect();
        let mut config = UniverseConfig::new(vocab);
        config.extra_rules = n.base().rules().to_vec();
        let u = Universe::build(config).unwrap();
        let ev = Evaluator::new(&u);
        let empty = BTreeSet::new();
        let mut checked = 0usize;
        for sid in u.base_ids() {
            let s = u.base(sid);
            if !extends(n.base(), s) {
                continue;
            }
            for b in &gs {
                let semantic = ev.strong_sat(sid, &[], b).unwrap();
                let atomic = derives(s, &empty, alpha.atom_of(b).unwrap());
                assert_eq!(semantic, atomic, "disagree at base {sid} on {b}");
                checked += 1;
            }
        }
        assert!(checked >= 40, "too few extension bases exercised: {checked}");
    }
}
