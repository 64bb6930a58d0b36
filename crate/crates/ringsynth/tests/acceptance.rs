//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (visible with `--nocapture`). All comparisons are exact
//! (zero tolerance); the stated wall-clock budgets are asserted.
//!
//! Run with `cargo test -p ringsynth --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ringsynth::circuit::AncillaVerdict;
use ringsynth::linalg::{GenKind, Generator, LdeBase};
use ringsynth::lowering::{lower_word, AncillaMode, GateSet};
use ringsynth::selftest;
use ringsynth::synth::{
    random_word, synthesize, AncillaPolicy, SynthError, SynthRequest, SynthResult,
};
use ringsynth::RingMatrix;

fn report(criterion: &str, elapsed: Duration, budget: Duration) {
    let status = if elapsed <= budget {
        "PASS"
    } else {
        "FAIL (over budget)"
    };
    println!(
        "{status} {criterion}: {:.2}s (budget {:.0}s)",
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    assert!(elapsed <= budget, "{criterion} exceeded its time budget");
}

fn synth_auto(v: &RingMatrix) -> SynthResult {
    synthesize(&SynthRequest {
        matrix: v.clone(),
        gateset: None,
        policy: AncillaPolicy::AllowOne,
    })
    .expect("synthesis should succeed")
}

fn assert_strict_descent(r: &SynthResult) {
    for t in &r.trace {
        for w in t.ldes.windows(2) {
            assert!(
                w[1] < w[0],
                "non-strict descent on column {}: {:?}",
                t.column,
                t.ldes
            );
        }
        assert_eq!(
            t.ldes.last(),
            Some(&0),
            "column {} did not reach lde 0",
            t.column
        );
    }
}

/// Criterion 1: synthesis round-trip for 100 seeded random words per gate
/// set (length <= 30) at n in {1, 2, 3}; classification stays within the
/// set's ring and the generator product reproduces the input exactly.
#[test]
fn criterion_1_round_trip_all_gate_sets() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    for gs in GateSet::ALL {
        for i in 0..100usize {
            let n = 1 + i % 3;
            let dim = 1usize << n;
            let len = rng.gen_range(1..=30);
            let word = random_word(gs, false, dim, len, &mut rng);
            let v = word.product();
            assert!(v.is_unitary());
            // The product must stay representable over the gate set's ring;
            // its minimal classification may be that ring or any subring
            // (possibly one from an incomparable branch of the lattice when
            // the matrix lies in an intersection).
            assert!(
                gs.contains_matrix(&v),
                "product escapes the {} ring",
                gs.name()
            );
            let minimal = GateSet::minimal_for(v.classify()).expect("classifiable");
            assert!(
                minimal.contains_matrix(&v),
                "classification of a {} product is unsound",
                gs.name()
            );
            let r = synth_auto(&v);
            assert!(
                r.word.apply_to(&v).is_identity(),
                "round trip failed ({}, n={n})",
                gs.name()
            );
            assert!(r.residual_phase.is_one());
            assert_strict_descent(&r);
        }
    }
    report(
        "criterion 1 (round-trip synthesis, six gate sets)",
        t0.elapsed(),
        Duration::from_secs(60),
    );
}

/// Criterion 2: synth -> lower (one clean ancilla) -> evaluate for 25
/// instances per gate set at n in {2, 3}: exact equality with the input
/// and a passing clean-ancilla verdict.
#[test]
fn criterion_2_lowered_round_trip() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC2);
    for gs in GateSet::ALL {
        for i in 0..25usize {
            let n = 2 + i % 2;
            let dim = 1usize << n;
            let len = rng.gen_range(1..=12);
            let word = random_word(gs, false, dim, len, &mut rng);
            let v = word.product();
            let r = synthesize(&SynthRequest {
                matrix: v.clone(),
                gateset: Some(gs),
                policy: AncillaPolicy::AllowOne,
            })
            .expect("synthesis should succeed");
            let c = lower_word(&r.word, gs, AncillaMode::OneClean).unwrap();
            assert_eq!(c.n_ancilla, 1);
            assert!(gs.allows(&c), "{} emits foreign gates", gs.name());
            let ev = c.evaluate();
            assert_eq!(
                ev.verdict,
                AncillaVerdict::Pass,
                "{} ancilla verdict",
                gs.name()
            );
            assert_eq!(ev.matrix, v, "{} lowered round trip (n={n})", gs.name());
        }
    }
    report(
        "criterion 2 (lowered-circuit round-trip)",
        t0.elapsed(),
        Duration::from_secs(120),
    );
}

/// Criterion 3: ancilla-free corollaries at dimension 16: 25 random det-1
/// words per imag/gauss round-trip under the ancilla-free policy (all
/// emitted generators from the determinant-1 sets), a sample lowered to
/// ancilla-free circuits, and 5 det != 1 instances rejected per set.
#[test]
fn criterion_3_ancilla_free_dim16() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    for gs in [GateSet::Imag, GateSet::Gauss] {
        for i in 0..25usize {
            let len = rng.gen_range(1..=8);
            let word = random_word(gs, true, 16, len, &mut rng);
            let v = word.product();
            let r = synthesize(&SynthRequest {
                matrix: v.clone(),
                gateset: Some(gs),
                policy: AncillaPolicy::AncillaFree,
            })
            .expect("det-1 ancilla-free synthesis should succeed");
            assert!(
                r.word.apply_to(&v).is_identity(),
                "{} af round trip",
                gs.name()
            );
            for g in &r.word.gens {
                assert!(
                    g.embed().det_exact().is_one(),
                    "{} emitted a non-det-1 generator {}",
                    gs.name(),
                    g.serialize()
                );
            }
            // Lower a sample all the way to ancilla-free circuits.
            if i < 2 {
                let c = lower_word(&r.word, gs, AncillaMode::None).unwrap();
                assert_eq!(c.n_ancilla, 0);
                assert!(gs.allows(&c));
                let ev = c.evaluate();
                assert_eq!(ev.matrix, v, "{} af lowered round trip", gs.name());
            }
        }
        // 5 rejected instances with det != 1.
        for k in 0..5usize {
            let word = random_word(gs, true, 16, 4, &mut rng);
            let mut v = word.product();
            // Multiply by a determinant -1 (or i) generator from the
            // ancilla-capable set to spoil the determinant.
            let spoiler = if gs == GateSet::Imag {
                Generator::new(GenKind::F2, vec![1 + k, 7 + k], 16).unwrap()
            } else if k % 2 == 0 {
                Generator::new(GenKind::I4 { pow: 1 }, vec![1 + k], 16).unwrap()
            } else {
                Generator::new(GenKind::X2, vec![2 + k, 9 + k], 16).unwrap()
            };
            spoiler.apply_left(&mut v);
            assert!(!v.det_exact().is_one());
            let err = synthesize(&SynthRequest {
                matrix: v,
                gateset: Some(gs),
                policy: AncillaPolicy::AncillaFree,
            })
            .unwrap_err();
            assert!(
                matches!(err, SynthError::NotAncillaFree(_)),
                "{} rejection",
                gs.name()
            );
        }
    }
    report(
        "criterion 3 (ancilla-free corollaries at dim 16)",
        t0.elapsed(),
        Duration::from_secs(120),
    );
}

/// Criterion 4: exhaustive residue oracles (quotient tables, the
/// sign-flip quadruple rule over {1,3,5,7}^4, and the pair reductions
/// with brute-force prefix search).
#[test]
fn criterion_4_exhaustive_residue_oracles() {
    let t0 = Instant::now();
    let reports = selftest::residue_table_checks();
    for r in &reports {
        assert!(r.pass, "{}: {}", r.name, r.detail);
    }
    assert!(reports.len() >= 12);
    report(
        "criterion 4 (exhaustive residue oracles)",
        t0.elapsed(),
        Duration::from_secs(10),
    );
}

/// Criterion 5: the circuit-identity suite, each displayed identity
/// verified by exact evaluation at the smallest applicable size and one
/// wire larger.
#[test]
fn criterion_5_circuit_identity_suite() {
    let t0 = Instant::now();
    let reports = selftest::circuit_identity_checks();
    for r in &reports {
        assert!(r.pass, "{}: {}", r.name, r.detail);
    }
    assert!(reports.len() >= 40);
    report(
        "criterion 5 (circuit-identity suite)",
        t0.elapsed(),
        Duration::from_secs(30),
    );
}

/// Criterion 6: exponent-parity properties. Odd-dimension super-integral unitaries
/// never have odd least sqrt(2)-exponent, and the set of valid exponents
/// within [lde, lde+4] is exactly the parity class of the lde.
#[test]
fn criterion_6_exponent_parity() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC6);
    // Odd dimensions: no odd lde, ever.
    for dim in [3usize, 5, 7, 9] {
        for _ in 0..25 {
            let len = rng.gen_range(1..=20);
            let word = random_word(GateSet::SupInt, false, dim, len, &mut rng);
            let v = word.product();
            let q = v.lde(LdeBase::Sqrt2OverZ).unwrap();
            assert_eq!(
                q % 2,
                0,
                "odd-dimension unitary with odd exponent at dim {dim}"
            );
        }
    }
    // Parity invariance across representations, even dimensions included.
    for dim in [2usize, 3, 4, 8] {
        for _ in 0..25 {
            let len = rng.gen_range(1..=20);
            let word = random_word(GateSet::SupInt, false, dim, len, &mut rng);
            let v = word.product();
            let q = v.lde(LdeBase::Sqrt2OverZ).unwrap();
            for d in 0..=4u32 {
                assert_eq!(
                    v.is_exponent_for(LdeBase::Sqrt2OverZ, q + d),
                    d % 2 == 0,
                    "exponent validity at lde+{d} (dim {dim})"
                );
            }
        }
    }
    // The super-Gaussian analogue.
    for _ in 0..25 {
        let len = rng.gen_range(1..=20);
        let word = random_word(GateSet::SupGauss, false, 4, len, &mut rng);
        let v = word.product();
        let q = v.lde(LdeBase::Sqrt2OverZi).unwrap();
        for d in 0..=4u32 {
            assert_eq!(v.is_exponent_for(LdeBase::Sqrt2OverZi, q + d), d % 2 == 0);
        }
    }
    report(
        "criterion 6 (exponent parity)",
        t0.elapsed(),
        Duration::from_secs(60),
    );
}

/// Criterion 7: strict descent. Every synthesis trace decreases the
/// relevant lde strictly per reduction pass until 0.
#[test]
fn criterion_7_strict_descent() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC7);
    let mut passes = 0usize;
    for gs in GateSet::ALL {
        for _ in 0..20 {
            let n = rng.gen_range(1..=3usize);
            let len = rng.gen_range(1..=25);
            let word = random_word(gs, false, 1 << n, len, &mut rng);
            let v = word.product();
            let r = synth_auto(&v);
            assert_strict_descent(&r);
            passes += r.trace.iter().map(|t| t.ldes.len()).sum::<usize>();
        }
    }
    // Ancilla-free traces descend strictly too.
    for gs in [GateSet::Imag, GateSet::Gauss] {
        for _ in 0..5 {
            let word = random_word(gs, true, 16, 5, &mut rng);
            let v = word.product();
            let r = synthesize(&SynthRequest {
                matrix: v,
                gateset: Some(gs),
                policy: AncillaPolicy::AncillaFree,
            })
            .unwrap();
            assert_strict_descent(&r);
        }
    }
    assert!(passes > 0);
    report(
        "criterion 7 (strict lde descent)",
        t0.elapsed(),
        Duration::from_secs(60),
    );
}
