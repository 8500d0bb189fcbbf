//! Acceptance gates. One test per criterion; each prints a single
//! pass/fail verdict line and pins its budgets and sample sizes as
//! constants next to the checks.

mod support;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use bes_core::base::{bot_complete, check_derivation, derives, extends, is_consistent};
use bes_core::formula::{Basic, Formula};
use bes_core::prover::{check_nd, decide_ipc, decide_strong, soundness_spotcheck, SequentGoal};
use bes_core::sampling::{
    enumerate_ecumenical, enumerate_intuitionistic, random_atomic_derivation, random_base,
    random_proof,
};
use bes_core::semantics::{weak_valid, Evaluator};
use bes_core::simulation::{
    build_n, completeness_roundtrip, consistency_of_n, derivation_degree, gamma_star, is_normal,
    make_alpha, normalize_traced, reduce_phase, Strategy,
};
use bes_core::suite::theorem_suite;
use bes_core::universe::{Universe, UniverseConfig};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use support::{atom_index, ipc_valid, models, valid_in_model};

fn f(s: &str) -> Formula {
    Formula::parse(s).expect("formula")
}

fn u0() -> Universe {
    Universe::build(UniverseConfig::new(["p", "q"])).expect("default universe")
}

/// Collects check outcomes for one criterion and prints its verdict line.
struct Gate {
    number: usize,
    name: &'static str,
    checked: usize,
    failed: usize,
    samples: Vec<String>,
}

impl Gate {
    fn new(number: usize, name: &'static str) -> Self {
        Gate {
            number,
            name,
            checked: 0,
            failed: 0,
            samples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.samples.len() < 5 {
                self.samples.push(describe());
            }
        }
    }

    fn finish(self, detail: &str) {
        if self.failed == 0 {
            println!(
                "criterion {} ({}): PASS - {} checks, {}",
                self.number, self.name, self.checked, detail
            );
        } else {
            println!(
                "criterion {} ({}): FAIL - {}/{} checks failed",
                self.number, self.name, self.failed, self.checked
            );
            panic!(
                "criterion {} ({}) failed, first failures:\n{}",
                self.number,
                self.name,
                self.samples.join("\n")
            );
        }
    }
}

#[test]
fn criterion_1_theorem_suite_passes() {
    const BUDGET: Duration = Duration::from_secs(30);
    let mut gate = Gate::new(1, "theorem suite");
    let started = Instant::now();
    let items = theorem_suite(&u0()).expect("suite runs in the default universe");
    let elapsed = started.elapsed();
    gate.check(items.len() == 21, || {
        format!("expected 21 items, got {}", items.len())
    });
    for item in &items {
        gate.check(item.passed, || item.to_string());
    }
    gate.check(elapsed <= BUDGET, || {
        format!("suite took {elapsed:?}, budget {BUDGET:?}")
    });
    gate.finish(&format!("{} items in {elapsed:.2?}", items.len()));
}

#[test]
fn criterion_2_strong_rejects_what_weak_accepts() {
    let mut gate = Gate::new(2, "strong vs weak verdicts");
    let u = u0();
    let em = f("p^c | ~p");
    let weak = weak_valid(&u, &[], &em).expect("weak evaluation");
    gate.check(weak, || format!("{em} should be weakly valid by default"));
    gate.check(!decide_strong(&[], &em), || {
        format!("{em} should be strongly refuted")
    });
    gate.check(decide_strong(&[], &f("((p -> q) -> p) -> p^c")), || {
        "ecumenical Peirce law rejected".to_string()
    });
    for src in ["p", "p & q", "p -> q", "p | q"] {
        let a = f(src);
        let cls = a.classical_version().expect("intuitionistic operand");
        let dn = Formula::neg(Formula::neg(a));
        for (l, r) in [(cls.clone(), dn.clone()), (dn, cls)] {
            let direction = Formula::imp(l, r);
            gate.check(decide_strong(&[], &direction), || {
                format!("{direction} rejected")
            });
        }
    }
    gate.finish("excluded-middle split, Peirce, four biconditionals");
}

#[test]
fn criterion_3_decider_matches_the_kripke_oracle() {
    const BUDGET: Duration = Duration::from_secs(120);
    const FORMULA_COUNT: usize = 11_451;
    let mut gate = Gate::new(3, "decider vs Kripke oracle");
    let started = Instant::now();
    let formulas = enumerate_intuitionistic(&["p", "q"], 3);
    gate.check(formulas.len() == FORMULA_COUNT, || {
        format!("expected {FORMULA_COUNT} formulas, got {}", formulas.len())
    });
    // One model table serves the whole sweep; ipc_valid would rebuild it
    // for every formula.
    let atoms = ["p".to_string(), "q".to_string()];
    let index = atom_index(&atoms);
    let table = models(2, 3);
    for goal in &formulas {
        let want = table.iter().all(|m| valid_in_model(m, &index, &[], goal));
        let got = decide_ipc(&SequentGoal::new(Vec::new(), goal.clone()))
            .expect("intuitionistic input");
        gate.check(got == want, || {
            format!("disagreement on {goal}: decider {got}, oracle {want}")
        });
    }
    let elapsed = started.elapsed();
    gate.check(elapsed <= BUDGET, || {
        format!("sweep took {elapsed:?}, budget {BUDGET:?}")
    });
    gate.finish(&format!(
        "{} formulas against {} models in {elapsed:.2?}",
        formulas.len(),
        table.len()
    ));
}

#[test]
fn criterion_4_random_proofs_are_sound() {
    const PROOFS: usize = 50;
    const MAX_DEPTH: usize = 5;
    let mut gate = Gate::new(4, "random proof soundness");
    let u = u0();
    let mut rng = StdRng::seed_from_u64(37);
    for i in 0..PROOFS {
        let proof = random_proof(&mut rng, &["p", "q"], MAX_DEPTH);
        let (open, conclusion) = match check_nd(&proof) {
            Ok(pair) => pair,
            Err(e) => {
                gate.check(false, || format!("proof {i} failed its own check: {e}"));
                continue;
            }
        };
        let context: Vec<Formula> = open.into_iter().collect();
        gate.check(decide_strong(&context, &conclusion), || {
            format!("proof {i}: {context:?} |- {conclusion} rejected by the decider")
        });
        match soundness_spotcheck(&u, &proof) {
            Ok(sound) => gate.check(sound, || {
                format!("proof {i} fails strong satisfaction at some base")
            }),
            Err(e) => gate.check(false, || format!("proof {i} spot-check error: {e}")),
        }
    }
    gate.finish(&format!("{PROOFS} proofs of depth <= {MAX_DEPTH}"));
}

#[test]
fn criterion_5_curated_sequents_roundtrip() {
    const BUDGET: Duration = Duration::from_secs(60);
    let mut gate = Gate::new(5, "completeness roundtrip");
    let sequents: [(&[&str], &str); 12] = [
        (&["~~p"], "p^c"),
        (&["p"], "p^c"),
        (&[], "((p -> q) -> p) -> p^c"),
        (&["p & q"], "q & p"),
        (&["p | q"], "q | p"),
        (&["p -> q", "p"], "q"),
        (&["p", "q"], "p & q"),
        (&["p & (p -> q)"], "q"),
        (&[], "p -> (q -> p)"),
        (&[], "(p & q) -> (q | p)"),
        (&["p", "~p"], "q^c"),
        (&["~q", "p | q"], "p"),
    ];
    let started = Instant::now();
    for (ctx_src, goal_src) in sequents {
        let context: Vec<Formula> = ctx_src.iter().map(|s| f(s)).collect();
        let goal = f(goal_src);
        let dn_ctx: Vec<Formula> = context.iter().map(Formula::dn_translate).collect();
        gate.check(ipc_valid(&dn_ctx, &goal.dn_translate()), || {
            format!("oracle rejects the translation of {ctx_src:?} |- {goal_src}")
        });
        let proof = match completeness_roundtrip(&context, &goal) {
            Ok(p) => p,
            Err(e) => {
                gate.check(false, || format!("{ctx_src:?} |- {goal_src}: {e}"));
                continue;
            }
        };
        match check_nd(&proof) {
            Ok((open, conclusion)) => {
                gate.check(conclusion == goal, || {
                    format!("{ctx_src:?} |- {goal_src}: rebuilt conclusion is {conclusion}")
                });
                let declared: BTreeSet<Formula> = context.iter().cloned().collect();
                gate.check(open.is_subset(&declared), || {
                    format!("{ctx_src:?} |- {goal_src}: stray open assumptions {open:?}")
                });
            }
            Err(e) => gate.check(false, || {
                format!("{ctx_src:?} |- {goal_src}: rebuilt proof rejected: {e}")
            }),
        }
    }
    let elapsed = started.elapsed();
    gate.check(elapsed <= BUDGET, || {
        format!("roundtrips took {elapsed:?}, budget {BUDGET:?}")
    });
    gate.finish(&format!("{} sequents in {elapsed:.2?}", sequents.len()));
}

#[test]
fn criterion_6_normalization_terminates_and_preserves() {
    const PER_INSTANCE: usize = 260;
    const MAX_DEPTH: usize = 4;
    let mut gate = Gate::new(6, "normalization");
    let instances: [(&[&str], &str); 4] = [
        (&["~~p"], "p^c"),
        (&["p & q", "p -> q"], "(p | q) -> q"),
        (&[], "((p -> q) -> p) -> p^c"),
        (&["p | q"], "(q | p)^c"),
    ];
    let mut rng = StdRng::seed_from_u64(41);
    let mut total = 0usize;
    for (ctx_src, goal_src) in instances {
        let context: Vec<Formula> = ctx_src.iter().map(|s| f(s)).collect();
        let goal = f(goal_src);
        let gs = gamma_star(&context, &goal);
        let alpha = make_alpha(&gs);
        let mut vocab: Vec<Basic> = alpha.atoms().cloned().collect();
        if !vocab.contains(&Basic::Falsum) {
            vocab.push(Basic::Falsum);
        }
        let n = build_n(&gs, &alpha, &vocab).expect("vocabulary covers the mapped formulas");
        gate.check(consistency_of_n(&n), || {
            format!("{ctx_src:?} |- {goal_src}: its named base proves bot")
        });
        for _ in 0..PER_INSTANCE {
            total += 1;
            let pi = random_atomic_derivation(&mut rng, n.base(), MAX_DEPTH);
            let (open0, c0) =
                check_derivation(n.base(), &pi).expect("generated derivations check");
            let d0 = derivation_degree(&pi, &n).expect("degree scan");
            if d0 > 0 {
                match reduce_phase(&pi, &n) {
                    Ok(stepped) => {
                        let d1 = derivation_degree(&stepped, &n).expect("degree scan");
                        gate.check(d1 < d0, || {
                            format!("phase left the degree at {d1} (entered at {d0})")
                        });
                    }
                    Err(e) => gate.check(false, || format!("phase failed: {e}")),
                }
            }
            for strategy in [Strategy::DegreeDirected, Strategy::LeftmostInnermost] {
                let (normal, trace) = match normalize_traced(&pi, &n, strategy) {
                    Ok(out) => out,
                    Err(e) => {
                        gate.check(false, || format!("{strategy} normalization failed: {e}"));
                        continue;
                    }
                };
                match is_normal(&normal, &n) {
                    Ok(done) => gate.check(done, || {
                        format!("{strategy} output still has a redex")
                    }),
                    Err(e) => gate.check(false, || format!("{strategy} redex scan failed: {e}")),
                }
                match check_derivation(n.base(), &normal) {
                    Ok((open1, c1)) => {
                        gate.check(c1 == c0, || {
                            format!("{strategy} moved the conclusion {c0} to {c1}")
                        });
                        gate.check(open1.is_subset(&open0), || {
                            format!("{strategy} grew the open assumptions: {open1:?} from {open0:?}")
                        });
                    }
                    Err(e) => gate.check(false, || {
                        format!("{strategy} output no longer checks: {e}")
                    }),
                }
                gate.check(trace.windows(2).all(|w| w[1] < w[0]), || {
                    format!("{strategy} degree trace is not strictly decreasing: {trace:?}")
                });
            }
        }
    }
    gate.check(total >= 1000, || {
        format!("only {total} derivations exercised")
    });
    gate.finish(&format!(
        "{total} derivations across {} instances, both strategies",
        instances.len()
    ));
}

#[test]
fn criterion_7_completions_are_total_and_persistent() {
    const BASES: usize = 100;
    const ATOM_POOL: [&str; 3] = ["p", "q", "r"];
    let mut gate = Gate::new(7, "completion persistency");
    let mut rng = StdRng::seed_from_u64(43);
    let mut comparisons = 0usize;
    for i in 0..BASES {
        let k = rng.gen_range(1..=ATOM_POOL.len());
        let atoms = &ATOM_POOL[..k];
        let base = random_base(&mut rng, atoms, 4, 2, 1);
        gate.check(is_consistent(&base), || format!("base {i}: sampled base proves bot"));
        let vocab: Vec<Basic> = atoms.iter().map(|a| Basic::atom(*a)).collect();
        let completion = match bot_complete(&base, &vocab) {
            Ok(c) => c,
            Err(e) => {
                gate.check(false, || format!("base {i}: completion failed: {e}"));
                continue;
            }
        };
        gate.check(is_consistent(&completion), || {
            format!("base {i}: completion proves bot")
        });
        gate.check(extends(&base, &completion), || {
            format!("base {i}: completion dropped rules")
        });
        let empty = BTreeSet::new();
        for atom in &vocab {
            let singleton: BTreeSet<Basic> = [atom.clone()].into_iter().collect();
            let decided = derives(&completion, &empty, atom)
                || derives(&completion, &singleton, &Basic::Falsum);
            gate.check(decided, || {
                format!("base {i}: completion leaves {atom} undecided")
            });
        }
        let mut config = UniverseConfig::new(atoms.iter().map(|a| a.to_string()));
        config.extra_rules = completion.rules().to_vec();
        let u = match Universe::build(config) {
            Ok(u) => u,
            Err(e) => {
                gate.check(false, || format!("base {i}: universe rejected: {e}"));
                continue;
            }
        };
        let cid = match u.find_base(&completion) {
            Some(id) => id,
            None => {
                gate.check(false, || {
                    format!("base {i}: completion missing from its own universe")
                });
                continue;
            }
        };
        let ev = Evaluator::new(&u);
        let formulas = enumerate_ecumenical(atoms, 2);
        let exts = u.extensions_of(cid).expect("valid base id");
        for formula in &formulas {
            let here = ev.weak_local(cid, &[], formula).expect("evaluation");
            for &sid in &exts {
                let there = ev.weak_local(sid, &[], formula).expect("evaluation");
                comparisons += 1;
                gate.check(here == there, || {
                    format!("base {i}: {formula} flips between the completion and extension {sid}")
                });
            }
        }
    }
    gate.finish(&format!("{BASES} bases, {comparisons} persistency comparisons"));
}
