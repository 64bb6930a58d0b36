//! Ancilla-free two-level constructions at five qubits: exercises the
//! deeper control-group splits of every recursion.

use ringsynth::circuit::AncillaVerdict;
use ringsynth::linalg::{GenKind, Generator};
use ringsynth::lowering::{lower_generator, AncillaMode, GateSet};

fn check(kind: GenKind, levels: &[usize], gs: GateSet) {
    let g = Generator::new(kind, levels.to_vec(), 32).unwrap();
    let c = lower_generator(&g, gs, AncillaMode::None).unwrap();
    assert!(gs.allows(&c));
    let ev = c.evaluate();
    assert_eq!(ev.verdict, AncillaVerdict::Pass);
    assert_eq!(ev.matrix, g.embed(), "{} at n=5", g.serialize());
}

#[test]
fn imag_det1_kinds_at_five_qubits() {
    check(GenKind::Xz2, &[31, 32], GateSet::Imag);
    check(GenKind::Zx2, &[7, 20], GateSet::Imag);
    check(GenKind::Fz2, &[31, 32], GateSet::Imag);
    check(GenKind::Zf2, &[3, 26], GateSet::Imag);
    check(GenKind::Z2, &[1, 9, 2, 27], GateSet::Imag);
}

#[test]
fn gauss_det1_kinds_at_five_qubits() {
    check(GenKind::Iz2 { pow: 3 }, &[31, 32], GateSet::Gauss);
    check(GenKind::Ix2, &[5, 18], GateSet::Gauss);
    check(GenKind::Wsh2, &[31, 32], GateSet::Gauss);
    check(GenKind::Whs2, &[2, 13], GateSet::Gauss);
}
