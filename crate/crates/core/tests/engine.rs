//! Randomized checks of the atomic derivability engine: saturation
//! verdicts must agree with reconstructed, independently checked
//! derivations, and the completion construction must deliver what its
//! contract promises.

use std::collections::BTreeSet;

use bes_core::base::{
    add_axiom, bot_complete, check_derivation, derive_witness, derives, extends, is_consistent,
};
use bes_core::formula::Basic;
use bes_core::sampling::random_base;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const ATOMS: [&str; 4] = ["p", "q", "r", "s"];

fn random_context(rng: &mut StdRng) -> BTreeSet<Basic> {
    let mut ctx = BTreeSet::new();
    for a in ATOMS {
        if rng.gen_bool(0.3) {
            ctx.insert(Basic::atom(a));
        }
    }
    if rng.gen_bool(0.1) {
        ctx.insert(Basic::Falsum);
    }
    ctx
}

fn random_goal(rng: &mut StdRng) -> Basic {
    if rng.gen_bool(0.2) {
        Basic::Falsum
    } else {
        Basic::atom(ATOMS[rng.gen_range(0..ATOMS.len())])
    }
}

#[test]
fn saturation_agrees_with_checked_witnesses() {
    let mut rng = StdRng::seed_from_u64(41);
    for _ in 0..400 {
        let base = random_base(&mut rng, &ATOMS, 6, 2, 2);
        let ctx = random_context(&mut rng);
        let goal = random_goal(&mut rng);
        let holds = derives(&base, &ctx, &goal);
        match derive_witness(&base, &ctx, &goal) {
            Some(d) => {
                assert!(holds, "witness without derivability for {goal} from {ctx:?}");
                let (open, conclusion) =
                    check_derivation(&base, &d).expect("reconstructed witness checks");
                assert_eq!(conclusion, goal);
                assert!(
                    open.is_subset(&ctx),
                    "witness assumed {open:?} outside {ctx:?}"
                );
            }
            None => assert!(!holds, "derivable {goal} from {ctx:?} but no witness"),
        }
    }
}

#[test]
fn derivability_is_monotone_and_admits_weakening() {
    let mut rng = StdRng::seed_from_u64(43);
    for _ in 0..200 {
        let small = random_base(&mut rng, &ATOMS, 3, 1, 1);
        let big = {
            // Extend by re-adding the small base's rules plus fresh ones,
            // discarding inconsistent attempts.
            let mut b = small.clone();
            let extra = random_base(&mut rng, &ATOMS, 3, 1, 1);
            for rule in extra.rules() {
                let mut candidate = b.clone();
                candidate.add_rule(rule.clone());
                if is_consistent(&candidate) {
                    b = candidate;
                }
            }
            b
        };
        assert!(extends(&small, &big));
        let ctx = random_context(&mut rng);
        let goal = random_goal(&mut rng);
        if derives(&small, &ctx, &goal) {
            assert!(derives(&big, &ctx, &goal), "extension lost {goal}");
            let mut wider = ctx.clone();
            wider.insert(random_goal(&mut rng));
            assert!(derives(&small, &wider, &goal), "weakening lost {goal}");
        }
    }
}

#[test]
fn axiom_extension_consistency_matches_refutability() {
    let mut rng = StdRng::seed_from_u64(47);
    for _ in 0..200 {
        let base = random_base(&mut rng, &ATOMS, 5, 2, 1);
        for a in ATOMS {
            let p = Basic::atom(a);
            let refutes = derives(&base, &BTreeSet::from([p.clone()]), &Basic::Falsum);
            let extended = add_axiom(&base, &p);
            assert!(extends(&base, &extended));
            assert_eq!(is_consistent(&extended), !refutes, "atom {a}");
        }
    }
}

#[test]
fn completion_is_consistent_and_settles_every_atom() {
    let mut rng = StdRng::seed_from_u64(53);
    let vocab: Vec<Basic> = ATOMS.iter().map(|a| Basic::atom(*a)).collect();
    for _ in 0..100 {
        let base = random_base(&mut rng, &ATOMS, 5, 2, 1);
        let completed = bot_complete(&base, &vocab).expect("consistent input");
        assert!(is_consistent(&completed));
        assert!(extends(&base, &completed));
        let empty = BTreeSet::new();
        for p in &vocab {
            let proves = derives(&completed, &empty, p);
            let refutes = derives(&completed, &BTreeSet::from([p.clone()]), &Basic::Falsum);
            assert!(proves || refutes, "completion left {p} unsettled");
        }
    }
}
