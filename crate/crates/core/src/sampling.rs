//! Deterministic formula enumeration and seeded random generation of
//! formulas, bases, and natural-deduction proofs. Random entry points take
//! an explicit RNG so every caller is reproducible.

use rand::Rng;

use crate::base::{is_consistent, AtomicDerivation, AtomicRule, Base, Premise};
use crate::formula::{Basic, Formula};
use crate::prover::{NDProof, RuleKind};

/// All intuitionistic formulas over the given atoms (plus bot) with at
/// most `max_connectives` connectives, in a fixed order: by connective
/// count, then by left-subtree size, then operands, then operator.
pub fn enumerate_intuitionistic(atoms: &[&str], max_connectives: usize) -> Vec<Formula> {
    let mut layers: Vec<Vec<Formula>> = vec![leaf_layer(atoms)];
    for c in 1..=max_connectives {
        let mut layer = Vec::new();
        push_binary(&layers, c, &mut layer);
        layers.push(layer);
    }
    layers.into_iter().flatten().collect()
}

/// All well-formed ecumenical formulas over the given atoms with at most
/// `max_connectives` connectives (classical basics and wrappers count one
/// connective each).
pub fn enumerate_ecumenical(atoms: &[&str], max_connectives: usize) -> Vec<Formula> {
    let mut layers: Vec<Vec<Formula>> = vec![leaf_layer(atoms)];
    for c in 1..=max_connectives {
        let mut layer = Vec::new();
        if c == 1 {
            for a in atoms {
                layer.push(Formula::atom_c(*a));
            }
            layer.push(Formula::BasicC(Basic::Falsum));
        }
        push_binary(&layers, c, &mut layer);
        for inner in &layers[c - 1] {
            if matches!(
                inner,
                Formula::And(..) | Formula::Or(..) | Formula::Imp(..)
            ) {
                layer.push(Formula::Classical(Box::new(inner.clone())));
            }
        }
        layers.push(layer);
    }
    layers.into_iter().flatten().collect()
}

fn leaf_layer(atoms: &[&str]) -> Vec<Formula> {
    let mut layer: Vec<Formula> = atoms.iter().map(|a| Formula::atom_i(*a)).collect();
    layer.push(Formula::falsum());
    layer
}

fn push_binary(layers: &[Vec<Formula>], c: usize, out: &mut Vec<Formula>) {
    for i in 0..c {
        let j = c - 1 - i;
        for l in &layers[i] {
            for r in &layers[j] {
                out.push(Formula::and(l.clone(), r.clone()));
                out.push(Formula::or(l.clone(), r.clone()));
                out.push(Formula::imp(l.clone(), r.clone()));
            }
        }
    }
}

/// Random formula with at most `budget` connectives. With `ecumenical`
/// the generator also emits classical basics and wrappers.
pub fn random_formula(
    rng: &mut impl Rng,
    atoms: &[&str],
    budget: usize,
    ecumenical: bool,
) -> Formula {
    if budget == 0 || rng.gen_bool(0.35) {
        let leaf = random_leaf(rng, atoms);
        if ecumenical && budget > 0 && rng.gen_bool(0.3) {
            return leaf.classical_version().expect("leaves accept the wrap");
        }
        return leaf;
    }
    if ecumenical && budget >= 2 && rng.gen_bool(0.15) {
        let inner = random_binary(rng, atoms, budget - 1, ecumenical);
        return Formula::Classical(Box::new(inner));
    }
    random_binary(rng, atoms, budget, ecumenical)
}

fn random_leaf(rng: &mut impl Rng, atoms: &[&str]) -> Formula {
    let k = rng.gen_range(0..=atoms.len());
    if k == atoms.len() {
        Formula::falsum()
    } else {
        Formula::atom_i(atoms[k])
    }
}

fn random_binary(rng: &mut impl Rng, atoms: &[&str], budget: usize, ecumenical: bool) -> Formula {
    let split = rng.gen_range(0..budget);
    let l = random_formula(rng, atoms, split, ecumenical);
    let r = random_formula(rng, atoms, budget - 1 - split, ecumenical);
    match rng.gen_range(0..3) {
        0 => Formula::and(l, r),
        1 => Formula::or(l, r),
        _ => Formula::imp(l, r),
    }
}

/// Random consistent base: up to `max_rules` rules over the atoms plus
/// bot, each with at most `max_premises` premises and `max_discharge`
/// discharged hypotheses per premise. Rules that would make the base
/// inconsistent are discarded, so the result is consistent by
/// construction.
pub fn random_base(
    rng: &mut impl Rng,
    atoms: &[&str],
    max_rules: usize,
    max_premises: usize,
    max_discharge: usize,
) -> Base {
    let mut basics: Vec<Basic> = atoms.iter().map(|a| Basic::atom(*a)).collect();
    basics.push(Basic::Falsum);
    let mut base = Base::new();
    let target = rng.gen_range(0..=max_rules);
    for _ in 0..target.saturating_mul(4) {
        if base.len() >= target {
            break;
        }
        let rule = random_rule(rng, &basics, max_premises, max_discharge);
        let mut candidate = base.clone();
        candidate.add_rule(rule);
        if is_consistent(&candidate) {
            base = candidate;
        }
    }
    base
}

fn random_rule(
    rng: &mut impl Rng,
    basics: &[Basic],
    max_premises: usize,
    max_discharge: usize,
) -> AtomicRule {
    let conclusion = basics[rng.gen_range(0..basics.len())].clone();
    let n_premises = rng.gen_range(0..=max_premises);
    let premises = (0..n_premises)
        .map(|_| {
            let pc = basics[rng.gen_range(0..basics.len())].clone();
            let n_discharge = rng.gen_range(0..=max_discharge);
            let discharge: Vec<Basic> = (0..n_discharge)
                .map(|_| basics[rng.gen_range(0..basics.len())].clone())
                .collect();
            Premise::new(discharge, pc)
        })
        .collect();
    AtomicRule::new(premises, conclusion)
}

/// Random derivation over `base`, valid by construction: every node is
/// grown against a rule whose shape it satisfies, and discharged
/// assumptions only ever cite enclosing scopes.
pub fn random_atomic_derivation(
    rng: &mut impl Rng,
    base: &Base,
    max_depth: usize,
) -> AtomicDerivation {
    let mut targets: Vec<Basic> = base.basics().into_iter().collect();
    if targets.is_empty() {
        targets.push(Basic::Falsum);
    }
    let goal = targets[rng.gen_range(0..targets.len())].clone();
    let mut labels = 0usize;
    grow_atomic(rng, base, &goal, max_depth, &mut Vec::new(), &mut labels)
}

fn grow_atomic(
    rng: &mut impl Rng,
    base: &Base,
    goal: &Basic,
    depth: usize,
    scope: &mut Vec<(String, Basic)>,
    labels: &mut usize,
) -> AtomicDerivation {
    let candidates: Vec<usize> = base
        .rules()
        .iter()
        .enumerate()
        .filter(|(_, r)| &r.conclusion == goal)
        .map(|(i, _)| i)
        .collect();
    if depth <= 1 || candidates.is_empty() || rng.gen_bool(0.25) {
        return atomic_leaf(rng, goal, scope);
    }
    let idx = candidates[rng.gen_range(0..candidates.len())];
    let rule = &base.rules()[idx];
    let needs_label = rule.premises.iter().any(|p| !p.discharge.is_empty());
    let label = if needs_label {
        *labels += 1;
        Some(format!("d{labels}"))
    } else {
        None
    };
    let children = rule
        .premises
        .iter()
        .map(|p| {
            let before = scope.len();
            if let Some(l) = &label {
                for b in &p.discharge {
                    scope.push((l.clone(), b.clone()));
                }
            }
            let child = grow_atomic(rng, base, &p.conclusion, depth - 1, scope, labels);
            scope.truncate(before);
            child
        })
        .collect();
    AtomicDerivation::Apply {
        rule: idx,
        conclusion: goal.clone(),
        label,
        children,
    }
}

fn atomic_leaf(rng: &mut impl Rng, goal: &Basic, scope: &[(String, Basic)]) -> AtomicDerivation {
    let matching = scope.iter().rev().find(|(_, b)| b == goal);
    if let Some((l, _)) = matching {
        if rng.gen_bool(0.7) {
            return AtomicDerivation::Assume {
                basic: goal.clone(),
                label: Some(l.clone()),
            };
        }
    }
    AtomicDerivation::assume(goal.clone())
}

/// Random checked natural-deduction proof of depth at most `max_depth`.
/// The tree is grown goal-directed so every node satisfies its rule's
/// schema; labels are globally fresh, so discharges are well-scoped by
/// construction.
pub fn random_proof(rng: &mut impl Rng, atoms: &[&str], max_depth: usize) -> NDProof {
    let goal = random_formula(rng, atoms, 2, true);
    let mut labels = 0usize;
    grow(rng, atoms, &goal, max_depth, &mut Vec::new(), &mut labels)
}

fn fresh_label(labels: &mut usize) -> String {
    *labels += 1;
    format!("h{labels}")
}

fn grow(
    rng: &mut impl Rng,
    atoms: &[&str],
    goal: &Formula,
    depth: usize,
    scope: &mut Vec<(String, Formula)>,
    labels: &mut usize,
) -> NDProof {
    if depth <= 1 {
        return leaf_proof(rng, goal, scope);
    }

    #[derive(Clone, Copy)]
    enum Choice {
        Leaf,
        ImpIntro,
        OrIntroL,
        OrIntroR,
        AndIntro,
        ClassIntro,
        ClassElim,
        AndElim,
        ImpElim,
        BotElim,
        OrElim,
    }
    let mut choices = vec![Choice::Leaf];
    match goal {
        Formula::Imp(..) => choices.extend([Choice::ImpIntro; 3]),
        Formula::Or(..) => choices.extend([Choice::OrIntroL, Choice::OrIntroR]),
        Formula::And(..) => choices.extend([Choice::AndIntro; 2]),
        Formula::BasicC(_) | Formula::Classical(_) => choices.extend([Choice::ClassIntro; 2]),
        Formula::BasicI(_) => {}
    }
    if *goal == Formula::falsum() {
        choices.push(Choice::ClassElim);
    }
    choices.extend([Choice::AndElim, Choice::ImpElim, Choice::BotElim, Choice::OrElim]);

    let side = |rng: &mut _| random_formula(rng, atoms, 1, true);
    match choices[rng.gen_range(0..choices.len())] {
        Choice::Leaf => leaf_proof(rng, goal, scope),
        Choice::ImpIntro => {
            let Formula::Imp(a, b) = goal else { unreachable!() };
            let l = fresh_label(labels);
            scope.push((l.clone(), (**a).clone()));
            let child = grow(rng, atoms, b, depth - 1, scope, labels);
            scope.pop();
            NDProof::node(RuleKind::ImpIntro, goal.clone(), Some(l), vec![child])
        }
        Choice::OrIntroL | Choice::OrIntroR => {
            let Formula::Or(a, b) = goal else { unreachable!() };
            let (kind, sub) = if rng.gen_bool(0.5) {
                (RuleKind::OrIntroL, a)
            } else {
                (RuleKind::OrIntroR, b)
            };
            let child = grow(rng, atoms, sub, depth - 1, scope, labels);
            NDProof::node(kind, goal.clone(), None, vec![child])
        }
        Choice::AndIntro => {
            let Formula::And(a, b) = goal else { unreachable!() };
            let left = grow(rng, atoms, a, depth - 1, scope, labels);
            let right = grow(rng, atoms, b, depth - 1, scope, labels);
            NDProof::node(RuleKind::AndIntro, goal.clone(), None, vec![left, right])
        }
        Choice::ClassIntro => {
            let inner = match goal {
                Formula::BasicC(b) => Formula::BasicI(b.clone()),
                Formula::Classical(inner) => (**inner).clone(),
                _ => unreachable!(),
            };
            let l = fresh_label(labels);
            scope.push((l.clone(), Formula::neg(inner)));
            let child = grow(rng, atoms, &Formula::falsum(), depth - 1, scope, labels);
            scope.pop();
            NDProof::node(RuleKind::ClassIntro, goal.clone(), Some(l), vec![child])
        }
        Choice::ClassElim => {
            let a = random_int_compoundable(rng, atoms);
            let cls = a.classical_version().expect("generated classical-free");
            let major = grow(rng, atoms, &cls, depth - 1, scope, labels);
            let minor = grow(rng, atoms, &Formula::neg(a), depth - 1, scope, labels);
            NDProof::node(RuleKind::ClassElim, goal.clone(), None, vec![major, minor])
        }
        Choice::AndElim => {
            let extra = side(rng);
            if rng.gen_bool(0.5) {
                let child = grow(
                    rng,
                    atoms,
                    &Formula::and(goal.clone(), extra),
                    depth - 1,
                    scope,
                    labels,
                );
                NDProof::node(RuleKind::AndElimL, goal.clone(), None, vec![child])
            } else {
                let child = grow(
                    rng,
                    atoms,
                    &Formula::and(extra, goal.clone()),
                    depth - 1,
                    scope,
                    labels,
                );
                NDProof::node(RuleKind::AndElimR, goal.clone(), None, vec![child])
            }
        }
        Choice::ImpElim => {
            let a = side(rng);
            let major = grow(
                rng,
                atoms,
                &Formula::imp(a.clone(), goal.clone()),
                depth - 1,
                scope,
                labels,
            );
            let minor = grow(rng, atoms, &a, depth - 1, scope, labels);
            NDProof::node(RuleKind::ImpElim, goal.clone(), None, vec![major, minor])
        }
        Choice::BotElim => {
            let child = grow(rng, atoms, &Formula::falsum(), depth - 1, scope, labels);
            NDProof::node(RuleKind::BotElim, goal.clone(), None, vec![child])
        }
        Choice::OrElim => {
            let (c, d) = (side(rng), side(rng));
            let major_goal = Formula::or(c.clone(), d.clone());
            let major = grow(rng, atoms, &major_goal, depth - 1, scope, labels);
            let l = fresh_label(labels);
            scope.push((l.clone(), c));
            let left = grow(rng, atoms, goal, depth - 1, scope, labels);
            scope.pop();
            scope.push((l.clone(), d));
            let right = grow(rng, atoms, goal, depth - 1, scope, labels);
            scope.pop();
            NDProof::node(RuleKind::OrElim, goal.clone(), Some(l), vec![major, left, right])
        }
    }
}

/// Formula that accepts `classical_version`: an atom, bot, or a compound
/// with no classical top.
fn random_int_compoundable(rng: &mut impl Rng, atoms: &[&str]) -> Formula {
    if rng.gen_bool(0.5) {
        random_leaf(rng, atoms)
    } else {
        random_binary(rng, atoms, 1, false)
    }
}

fn leaf_proof(rng: &mut impl Rng, goal: &Formula, scope: &[(String, Formula)]) -> NDProof {
    let matching = scope.iter().rev().find(|(_, f)| f == goal);
    if let Some((l, _)) = matching {
        if rng.gen_bool(0.7) {
            return NDProof::assume_labeled(goal.clone(), l.clone());
        }
    }
    NDProof::assume(goal.clone())
}
