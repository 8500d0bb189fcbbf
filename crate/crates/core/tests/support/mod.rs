//! Shared integration-test support.
//!
//! The Kripke oracle is an independent reference for intuitionistic
//! validity over all models with at most three worlds. It is deliberately
//! naive: enumerate every reflexive-transitive relation, every monotone
//! valuation, and check forcing directly. Nothing here is shared with the
//! decision procedure under test.

use std::collections::BTreeMap;

use bes_core::{Basic, Formula};

/// `up[w]` is the bitmask of worlds reachable from `w` (including `w`);
/// `val[w]` the bitmask of atoms true at `w`.
pub struct KripkeModel {
    pub worlds: usize,
    pub up: Vec<u8>,
    pub val: Vec<u16>,
}

/// All Kripke models over the given atoms with `1..=max_worlds` worlds.
/// `max_worlds` must be at most 7 (world sets are `u8` masks).
pub fn models(atom_count: usize, max_worlds: usize) -> Vec<KripkeModel> {
    assert!(max_worlds <= 7);
    let mut out = Vec::new();
    for n in 1..=max_worlds {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        for rel_bits in 0u32..(1 << pairs.len()) {
            let mut up = vec![0u8; n];
            for w in 0..n {
                up[w] |= 1 << w;
            }
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if rel_bits & (1 << k) != 0 {
                    up[i] |= 1 << j;
                }
            }
            if !is_transitive(&up) {
                continue;
            }
            push_valuations(&up, atom_count, &mut out);
        }
    }
    out
}

fn is_transitive(up: &[u8]) -> bool {
    let n = up.len();
    for i in 0..n {
        for j in 0..n {
            if up[i] & (1 << j) != 0 && up[i] | up[j] != up[i] {
                return false;
            }
        }
    }
    true
}

fn push_valuations(up: &[u8], atom_count: usize, out: &mut Vec<KripkeModel>) {
    let n = up.len();
    let masks = 1u32 << atom_count;
    let mut val = vec![0u16; n];
    loop {
        if monotone(up, &val) {
            out.push(KripkeModel {
                worlds: n,
                up: up.to_vec(),
                val: val.clone(),
            });
        }
        // odometer over per-world atom masks
        let mut w = 0;
        loop {
            if w == n {
                return;
            }
            val[w] += 1;
            if (val[w] as u32) < masks {
                break;
            }
            val[w] = 0;
            w += 1;
        }
    }
}

fn monotone(up: &[u8], val: &[u16]) -> bool {
    let n = up.len();
    for i in 0..n {
        for j in 0..n {
            if up[i] & (1 << j) != 0 && val[i] & !val[j] != 0 {
                return false;
            }
        }
    }
    true
}

/// Bitmask of worlds forcing `f`. Panics on classical constructs: the
/// oracle speaks pure intuitionistic logic.
pub fn forces(m: &KripkeModel, atom_index: &BTreeMap<String, usize>, f: &Formula) -> u8 {
    match f {
        Formula::BasicI(Basic::Falsum) => 0,
        Formula::BasicI(Basic::Atom(a)) => {
            let bit = 1u16 << atom_index[a];
            (0..m.worlds)
                .filter(|&w| m.val[w] & bit != 0)
                .fold(0u8, |acc, w| acc | (1 << w))
        }
        Formula::And(l, r) => forces(m, atom_index, l) & forces(m, atom_index, r),
        Formula::Or(l, r) => forces(m, atom_index, l) | forces(m, atom_index, r),
        Formula::Imp(l, r) => {
            let fl = forces(m, atom_index, l);
            let fr = forces(m, atom_index, r);
            (0..m.worlds)
                .filter(|&w| m.up[w] & fl & !fr == 0)
                .fold(0u8, |acc, w| acc | (1 << w))
        }
        Formula::BasicC(_) | Formula::Classical(_) => {
            panic!("Kripke oracle only evaluates intuitionistic formulas")
        }
    }
}

/// Sequent validity in one model: every world forcing the whole context
/// forces the goal.
pub fn valid_in_model(
    m: &KripkeModel,
    atom_index: &BTreeMap<String, usize>,
    context: &[Formula],
    goal: &Formula,
) -> bool {
    let all = ((1u16 << m.worlds) - 1) as u8;
    let mut ctx_mask = all;
    for f in context {
        ctx_mask &= forces(m, atom_index, f);
    }
    ctx_mask & !forces(m, atom_index, goal) & all == 0
}

pub fn atom_index(atoms: &[String]) -> BTreeMap<String, usize> {
    atoms
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), i))
        .collect()
}

/// Intuitionistic validity over all models with at most three worlds.
/// Sound and, for the small formulas exercised in this suite, complete.
pub fn ipc_valid(context: &[Formula], goal: &Formula) -> bool {
    let mut atoms = goal.atoms();
    for f in context {
        atoms.extend(f.atoms());
    }
    let atoms: Vec<String> = atoms.into_iter().collect();
    let index = atom_index(&atoms);
    models(atoms.len(), 3)
        .iter()
        .all(|m| valid_in_model(m, &index, context, goal))
}
