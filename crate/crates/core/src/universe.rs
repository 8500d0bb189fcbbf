//! Finite universes of bases.
//!
//! Validity quantifies over extensions of a base, which is undecidable over
//! all bases; every quantified judgement here is evaluated inside a finite
//! universe instead. A universe is the set of all consistent subsets of a
//! finite rule pool, ordered by inclusion. Verdicts are universe-relative
//! and reports carry the universe fingerprint.

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use thiserror::Error;

use crate::base::{self, AtomicRule, Base};
use crate::formula::{Basic, Formula};

pub type BaseId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniverseConfig {
    pub vocab: Vec<String>,
    pub max_premises: usize,
    pub max_discharge: usize,
    /// Include the refutation rules `( |- x) => bot` in the pool.
    pub include_bot_conclusions: bool,
    pub extra_rules: Vec<AtomicRule>,
    pub pool_cap: usize,
}

impl UniverseConfig {
    pub fn new<S: Into<String>>(vocab: impl IntoIterator<Item = S>) -> Self {
        UniverseConfig {
            vocab: vocab.into_iter().map(Into::into).collect(),
            max_premises: 1,
            max_discharge: 1,
            include_bot_conclusions: true,
            extra_rules: Vec::new(),
            pool_cap: 16,
        }
    }

    /// Canonical single-line rendering; the fingerprint hashes this.
    pub fn canonical_string(&self) -> String {
        let mut extras: Vec<String> = self
            .extra_rules
            .iter()
            .map(|r| r.to_string())
            .collect();
        extras.sort();
        format!(
            "vocab={};max_premises={};max_discharge={};include_bot={};pool_cap={};extra_rules=[{}]",
            self.vocab.join(","),
            self.max_premises,
            self.max_discharge,
            self.include_bot_conclusions,
            self.pool_cap,
            extras.join(" ; ")
        )
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UniverseError {
    #[error("universe vocab is empty")]
    EmptyVocab,
    #[error("invalid vocab atom `{atom}`")]
    InvalidVocabAtom { atom: String },
    #[error("extra rule mentions `{atom}`, which is outside the vocab")]
    ExtraRuleAtomOutsideVocab { atom: String },
    #[error("rule pool has {size} rules, more than the cap {cap}")]
    PoolTooLarge { size: usize, cap: usize },
    #[error("unknown base id {id}")]
    UnknownBase { id: BaseId },
}

/// Memo key for semantic judgements: base, judgement tag (kind plus
/// evaluator options), context, conclusion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct MemoKey(pub BaseId, pub u8, pub Vec<Formula>, pub Formula);

#[derive(Debug)]
pub struct Universe {
    config: UniverseConfig,
    pool: Vec<AtomicRule>,
    bases: Vec<Base>,
    masks: Vec<u64>,
    canon_index: HashMap<BTreeSet<AtomicRule>, BaseId>,
    at_bot: Vec<Formula>,
    memo: Mutex<HashMap<MemoKey, bool>>,
}

impl Universe {
    /// Enumerates every consistent subset of the rule pool. Base ids are
    /// assigned in subset-bitmask order, so id 0 is always the empty base.
    pub fn build(config: UniverseConfig) -> Result<Universe, UniverseError> {
        if config.vocab.is_empty() {
            return Err(UniverseError::EmptyVocab);
        }
        let mut vocab_atoms: Vec<Basic> = Vec::new();
        for name in &config.vocab {
            match base::parse_basic_token(name) {
                Ok(Basic::Atom(a)) => {
                    let b = Basic::Atom(a);
                    if !vocab_atoms.contains(&b) {
                        vocab_atoms.push(b);
                    }
                }
                _ => {
                    return Err(UniverseError::InvalidVocabAtom {
                        atom: name.clone(),
                    })
                }
            }
        }
        let mut allowed: BTreeSet<Basic> = vocab_atoms.iter().cloned().collect();
        allowed.insert(Basic::Falsum);
        for rule in &config.extra_rules {
            if let Some(bad) = rule.basics().iter().find(|b| !allowed.contains(b)) {
                return Err(UniverseError::ExtraRuleAtomOutsideVocab {
                    atom: bad.to_string(),
                });
            }
        }

        let mut pool_set: Vec<AtomicRule> = Vec::new();
        let mut seen: BTreeSet<AtomicRule> = BTreeSet::new();
        let mut push = |r: AtomicRule, pool_set: &mut Vec<AtomicRule>| {
            if seen.insert(r.canonical()) {
                pool_set.push(r);
            }
        };
        for a in &vocab_atoms {
            push(AtomicRule::axiom(a.clone()), &mut pool_set);
        }
        if config.max_premises >= 1 && config.include_bot_conclusions {
            for a in &vocab_atoms {
                push(
                    AtomicRule::new(
                        vec![crate::base::Premise::plain(a.clone())],
                        Basic::Falsum,
                    ),
                    &mut pool_set,
                );
            }
        }
        for r in &config.extra_rules {
            push(r.clone(), &mut pool_set);
        }
        pool_set.sort_by_key(|r| r.to_string());
        if pool_set.len() > config.pool_cap || pool_set.len() > 20 {
            return Err(UniverseError::PoolTooLarge {
                size: pool_set.len(),
                cap: config.pool_cap.min(20),
            });
        }

        let n = pool_set.len();
        let mut bases = Vec::new();
        let mut masks = Vec::new();
        let mut canon_index = HashMap::new();
        for mask in 0u64..(1u64 << n) {
            let rules = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| pool_set[i].clone());
            let b = Base::from_rules(rules);
            if base::is_consistent(&b) {
                let id = bases.len();
                canon_index.entry(b.canon()).or_insert(id);
                bases.push(b);
                masks.push(mask);
            }
        }

        let mut at_bot: Vec<Formula> = vocab_atoms
            .iter()
            .map(|a| Formula::BasicI(a.clone()))
            .collect();
        at_bot.push(Formula::BasicI(Basic::Falsum));

        Ok(Universe {
            config,
            pool: pool_set,
            bases,
            masks,
            canon_index,
            at_bot,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn config(&self) -> &UniverseConfig {
        &self.config
    }

    pub fn pool(&self) -> &[AtomicRule] {
        &self.pool
    }

    pub fn base_count(&self) -> usize {
        self.bases.len()
    }

    pub fn base(&self, id: BaseId) -> &Base {
        &self.bases[id]
    }

    pub fn base_ids(&self) -> impl Iterator<Item = BaseId> {
        0..self.bases.len()
    }

    /// The basic-sentence layer `At ∪ {bot}` as intuitionistic formulas, in
    /// vocab order with `bot` last.
    pub fn at_bot_formulas(&self) -> &[Formula] {
        &self.at_bot
    }

    pub fn is_extension(&self, small: BaseId, large: BaseId) -> bool {
        self.masks[small] & !self.masks[large] == 0
    }

    /// All bases extending `id`, ascending, including `id` itself.
    pub fn extensions_of(&self, id: BaseId) -> Result<Vec<BaseId>, UniverseError> {
        if id >= self.bases.len() {
            return Err(UniverseError::UnknownBase { id });
        }
        Ok(self
            .base_ids()
            .filter(|&other| self.is_extension(id, other))
            .collect())
    }

    pub fn find_base(&self, b: &Base) -> Option<BaseId> {
        self.canon_index.get(&b.canon()).copied()
    }

    /// FNV-1a over the canonical config string: stable across runs, printed
    /// in every report.
    pub fn fingerprint(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in self.config.canonical_string().bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{h:016x}")
    }

    pub(crate) fn memo_get(&self, key: &MemoKey) -> Option<bool> {
        self.memo.lock().unwrap().get(key).copied()
    }

    pub(crate) fn memo_insert(&self, key: MemoKey, value: bool) {
        self.memo.lock().unwrap().insert(key, value);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::Premise;

    fn u0() -> Universe {
        Universe::build(UniverseConfig::new(["p", "q"])).unwrap()
    }

    #[test]
    fn default_two_atom_universe_has_nine_bases() {
        let u = u0();
        assert_eq!(u.pool().len(), 4);
        assert_eq!(u.base_count(), 9);
        assert!(u.base(0).is_empty());
        // Pool sorts refutation rules before axioms, so id 1 refutes p.
        let refute_p = Base::from_rules([AtomicRule::new(
            vec![Premise::plain(Basic::atom("p"))],
            Basic::Falsum,
        )]);
        assert_eq!(u.find_base(&refute_p), Some(1));
        let both_axioms = Base::from_rules([
            AtomicRule::axiom(Basic::atom("p")),
            AtomicRule::axiom(Basic::atom("q")),
        ]);
        assert_eq!(u.find_base(&both_axioms), Some(8));
    }

    #[test]
    fn extension_order_matches_rule_inclusion() {
        let u = u0();
        assert_eq!(u.extensions_of(0).unwrap().len(), u.base_count());
        let top = u.base_count() - 1;
        assert_eq!(u.extensions_of(top).unwrap(), vec![top]);
        for s in u.base_ids() {
            for s2 in u.base_ids() {
                assert_eq!(
                    u.is_extension(s, s2),
                    base::extends(u.base(s), u.base(s2)),
                    "mask extension test disagrees with rule inclusion for {s} {s2}"
                );
            }
        }
        assert_eq!(
            u.extensions_of(99),
            Err(UniverseError::UnknownBase { id: 99 })
        );
    }

    #[test]
    fn fingerprint_is_stable_and_config_sensitive() {
        let a = u0();
        let b = u0();
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint().len(), 16);
        let other = Universe::build(UniverseConfig::new(["p", "q", "r"])).unwrap();
        assert_ne!(a.fingerprint(), other.fingerprint());
    }

    #[test]
    fn pool_cap_is_enforced() {
        let mut cfg = UniverseConfig::new(["p", "q"]);
        cfg.pool_cap = 3;
        assert_eq!(
            Universe::build(cfg).unwrap_err(),
            UniverseError::PoolTooLarge { size: 4, cap: 3 }
        );
    }

    #[test]
    fn vocab_validation() {
        assert_eq!(
            Universe::build(UniverseConfig::new(Vec::<String>::new())).unwrap_err(),
            UniverseError::EmptyVocab
        );
        assert!(matches!(
            Universe::build(UniverseConfig::new(["bot"])).unwrap_err(),
            UniverseError::InvalidVocabAtom { .. }
        ));
        let mut cfg = UniverseConfig::new(["p"]);
        cfg.extra_rules.push(AtomicRule::axiom(Basic::atom("z")));
        assert!(matches!(
            Universe::build(cfg).unwrap_err(),
            UniverseError::ExtraRuleAtomOutsideVocab { .. }
        ));
    }

    #[test]
    fn at_bot_layer_lists_vocab_then_bot() {
        let u = u0();
        let names: Vec<String> = u.at_bot_formulas().iter().map(|f| f.to_string()).collect();
        assert_eq!(names, vec!["p^i", "q^i", "bot"]);
    }
}
