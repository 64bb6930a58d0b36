//! Ring-inclusion forcing, 4-qubit instances, and larger odd dimensions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringsynth::circuit::AncillaVerdict;
use ringsynth::lowering::{lower_word, AncillaMode, GateSet};
use ringsynth::synth::*;

#[test]
fn forcing_larger_sets_and_dim16() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    // Forcing larger sets: every set containing the product's ring must synthesize it.
    for _ in 0..40 {
        let src = GateSet::ALL[rng.gen_range(0..6)];
        let n = rng.gen_range(1..=3usize);
        let w = random_word(src, false, 1 << n, rng.gen_range(1..=15), &mut rng);
        let v = w.product();
        for gs in GateSet::ALL {
            if gs.contains_matrix(&v) {
                let r = synthesize(&SynthRequest {
                    matrix: v.clone(),
                    gateset: Some(gs),
                    policy: AncillaPolicy::AllowOne,
                })
                .unwrap_or_else(|e| {
                    panic!("forcing {} on a {} product: {e}", gs.name(), src.name())
                });
                assert!(
                    r.word.apply_to(&v).is_identity(),
                    "forced {} round trip",
                    gs.name()
                );
            }
        }
    }
    // n = 4 word-level synthesis for all sets.
    for gs in GateSet::ALL {
        for _ in 0..5 {
            let w = random_word(gs, false, 16, rng.gen_range(5..=40), &mut rng);
            let v = w.product();
            let r = synthesize(&SynthRequest {
                matrix: v.clone(),
                gateset: Some(gs),
                policy: AncillaPolicy::AllowOne,
            })
            .unwrap();
            assert!(r.word.apply_to(&v).is_identity(), "{} dim16", gs.name());
        }
    }
    // n = 4 one-clean lowering (32-dim evaluation), one per set.
    for gs in GateSet::ALL {
        let w = random_word(gs, false, 16, 4, &mut rng);
        let v = w.product();
        let r = synthesize(&SynthRequest {
            matrix: v.clone(),
            gateset: Some(gs),
            policy: AncillaPolicy::AllowOne,
        })
        .unwrap();
        let c = lower_word(&r.word, gs, AncillaMode::OneClean).unwrap();
        assert!(gs.allows(&c));
        let ev = c.evaluate();
        assert_eq!(ev.verdict, AncillaVerdict::Pass);
        assert_eq!(ev.matrix, v, "{} n=4 lowered", gs.name());
    }
    // Odd dims incl. larger ones.
    for gs in [GateSet::Int, GateSet::Real, GateSet::Imag, GateSet::Gauss] {
        for dim in [9usize, 12, 15] {
            let w = random_word(gs, false, dim, 20, &mut rng);
            let v = w.product();
            let r = synthesize(&SynthRequest {
                matrix: v.clone(),
                gateset: Some(gs),
                policy: AncillaPolicy::AllowOne,
            })
            .unwrap();
            assert!(
                r.word.apply_to(&v).is_identity(),
                "{} dim {}",
                gs.name(),
                dim
            );
        }
    }
}
