//! Gate-level circuit IR, exact evaluation semantics, and the text format.
//!
//! This module is the verification oracle for everything upstream: circuits
//! evaluate to exact [`RingMatrix`] values (including the global phase), and
//! ancilla wires are checked against the clean/dirty contracts basis state
//! by basis state.
//!
//! Wire 1 is the most significant bit of basis-state indexing, so `CX` on
//! wires `(1, 2)` is the block matrix `I_2 (+) X`. Ancilla wires always come
//! after the data wires.

use std::fmt;

use thiserror::Error;

use crate::linalg::RingMatrix;
use crate::rings::RingScalar;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("line {0}: unknown gate `{1}`")]
    UnknownGate(usize, String),
    #[error("line {0}: {1}")]
    Syntax(usize, String),
    #[error("gate {0} expects {1} wires, got {2}")]
    Arity(&'static str, usize, usize),
    #[error("gate wires must be distinct and within 1..={0}")]
    BadWires(usize),
}

/// Named gates of the circuit text format. Controls come before targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateName {
    X,
    Cx,
    Ccx,
    H,
    Ch,
    S,
    Sdg,
    T,
    Tdg,
    F,
    Fdg,
    Wh,
    Whdg,
    Z,
}

impl GateName {
    pub fn text(self) -> &'static str {
        match self {
            GateName::X => "X",
            GateName::Cx => "CX",
            GateName::Ccx => "CCX",
            GateName::H => "H",
            GateName::Ch => "CH",
            GateName::S => "S",
            GateName::Sdg => "Sdg",
            GateName::T => "T",
            GateName::Tdg => "Tdg",
            GateName::F => "F",
            GateName::Fdg => "Fdg",
            GateName::Wh => "WH",
            GateName::Whdg => "WHdg",
            GateName::Z => "Z",
        }
    }

    pub fn from_text(s: &str) -> Option<Self> {
        Some(match s {
            "X" => GateName::X,
            "CX" => GateName::Cx,
            "CCX" => GateName::Ccx,
            "H" => GateName::H,
            "CH" => GateName::Ch,
            "S" => GateName::S,
            "Sdg" => GateName::Sdg,
            "T" => GateName::T,
            "Tdg" => GateName::Tdg,
            "F" => GateName::F,
            "Fdg" => GateName::Fdg,
            "WH" => GateName::Wh,
            "WHdg" => GateName::Whdg,
            "Z" => GateName::Z,
            _ => return None,
        })
    }

    pub fn arity(self) -> usize {
        match self {
            GateName::Cx | GateName::Ch => 2,
            GateName::Ccx => 3,
            _ => 1,
        }
    }

    /// Number of leading control wires.
    pub fn controls(self) -> usize {
        match self {
            GateName::Cx | GateName::Ch => 1,
            GateName::Ccx => 2,
            _ => 0,
        }
    }

    /// The 2x2 kernel applied to the target wire.
    pub fn kernel(self) -> [[RingScalar; 2]; 2] {
        let zero = RingScalar::zero;
        let one = RingScalar::one;
        match self {
            GateName::X | GateName::Cx | GateName::Ccx => [[zero(), one()], [one(), zero()]],
            GateName::H | GateName::Ch => {
                let h = RingScalar::inv_sqrt2();
                [[h.clone(), h.clone()], [h.clone(), -h]]
            }
            GateName::S => [[one(), zero()], [zero(), RingScalar::i()]],
            GateName::Sdg => [[one(), zero()], [zero(), -RingScalar::i()]],
            GateName::T => [[one(), zero()], [zero(), RingScalar::omega()]],
            GateName::Tdg => [[one(), zero()], [zero(), RingScalar::omega_pow(-1)]],
            GateName::Z => [[one(), zero()], [zero(), -one()]],
            GateName::F => {
                let half = RingScalar::half();
                let a = (RingScalar::one() + RingScalar::i_sqrt2()) * half.clone();
                let b = (-RingScalar::one() + RingScalar::i_sqrt2()) * half.clone();
                [[a, half.clone()], [half, b]]
            }
            GateName::Fdg => {
                // F^dag = F^7; entries conjugate of F since F is symmetric.
                let half = RingScalar::half();
                let a = (RingScalar::one() - RingScalar::i_sqrt2()) * half.clone();
                let b = (-RingScalar::one() - RingScalar::i_sqrt2()) * half.clone();
                [[a, half.clone()], [half, b]]
            }
            GateName::Wh => {
                let wh = RingScalar::omega() * RingScalar::inv_sqrt2();
                [[wh.clone(), wh.clone()], [wh.clone(), -wh]]
            }
            GateName::Whdg => {
                let wh = RingScalar::omega_pow(-1) * RingScalar::inv_sqrt2();
                [[wh.clone(), wh.clone()], [wh.clone(), -wh]]
            }
        }
    }

    /// Whether the kernel is a plain permutation of the target basis.
    fn is_x_like(self) -> bool {
        matches!(self, GateName::X | GateName::Cx | GateName::Ccx)
    }

    /// Whether the kernel is diagonal.
    fn is_diagonal(self) -> bool {
        matches!(
            self,
            GateName::S | GateName::Sdg | GateName::T | GateName::Tdg | GateName::Z
        )
    }
}

/// A gate instance: name plus 1-based wire indices, controls first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub name: GateName,
    pub wires: Vec<usize>,
}

impl Gate {
    pub fn new(name: GateName, wires: Vec<usize>) -> Result<Self, CircuitError> {
        if wires.len() != name.arity() {
            return Err(CircuitError::Arity(name.text(), name.arity(), wires.len()));
        }
        let mut sorted = wires.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != wires.len() || wires.contains(&0) {
            return Err(CircuitError::BadWires(usize::MAX));
        }
        Ok(Gate { name, wires })
    }

    pub fn target(&self) -> usize {
        *self.wires.last().unwrap()
    }

    pub fn control_wires(&self) -> &[usize] {
        &self.wires[..self.name.controls()]
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name.text())?;
        for w in &self.wires {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

/// Clean/dirty tag for the ancilla block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AncillaKind {
    Clean,
    Dirty,
}

impl AncillaKind {
    fn text(self) -> &'static str {
        match self {
            AncillaKind::Clean => "clean",
            AncillaKind::Dirty => "dirty",
        }
    }
}

/// A gate list over `n_data` data wires and `n_ancilla` trailing ancilla
/// wires, with an exact global-phase accumulator (a power of `w`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub n_data: usize,
    pub n_ancilla: usize,
    pub ancilla_kind: AncillaKind,
    pub phase: RingScalar,
    pub gates: Vec<Gate>,
}

/// Result of evaluating a circuit: the exact operator on the data wires and
/// the ancilla-contract verdict.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub matrix: RingMatrix,
    pub verdict: AncillaVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AncillaVerdict {
    Pass,
    /// The contract failed on the given 1-based basis column; the offending
    /// row index is reported for diagnostics.
    Fail {
        column: usize,
        row: usize,
    },
}

impl Circuit {
    pub fn new(n_data: usize) -> Self {
        Circuit {
            n_data,
            n_ancilla: 0,
            ancilla_kind: AncillaKind::Clean,
            phase: RingScalar::one(),
            gates: Vec::new(),
        }
    }

    pub fn with_ancilla(n_data: usize, n_ancilla: usize, kind: AncillaKind) -> Self {
        Circuit {
            n_data,
            n_ancilla,
            ancilla_kind: kind,
            phase: RingScalar::one(),
            gates: Vec::new(),
        }
    }

    pub fn total_wires(&self) -> usize {
        self.n_data + self.n_ancilla
    }

    pub fn push(&mut self, gate: Gate) {
        debug_assert!(gate.wires.iter().all(|&w| w <= self.total_wires()));
        self.gates.push(gate);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Concatenate another circuit's gates (same wire layout).
    pub fn extend(&mut self, other: &Circuit) {
        assert_eq!(self.total_wires(), other.total_wires());
        self.gates.extend(other.gates.iter().cloned());
        self.phase = self.phase.clone() * other.phase.clone();
    }

    /// The adjoint circuit at the IR level: gates reversed with each gate
    /// replaced by its named inverse.
    pub fn dagger(&self) -> Circuit {
        let mut out = self.clone();
        out.phase = self.phase.conj();
        out.gates = self
            .gates
            .iter()
            .rev()
            .map(|g| {
                let name = match g.name {
                    GateName::S => GateName::Sdg,
                    GateName::Sdg => GateName::S,
                    GateName::T => GateName::Tdg,
                    GateName::Tdg => GateName::T,
                    GateName::F => GateName::Fdg,
                    GateName::Fdg => GateName::F,
                    GateName::Wh => GateName::Whdg,
                    GateName::Whdg => GateName::Wh,
                    other => other,
                };
                Gate {
                    name,
                    wires: g.wires.clone(),
                }
            })
            .collect();
        out
    }

    /// The exact `2^w x 2^w` operator over all wires, including the phase.
    pub fn full_matrix(&self) -> RingMatrix {
        let w = self.total_wires();
        let mut u = RingMatrix::identity(1 << w);
        for g in &self.gates {
            apply_gate_left(g, w, &mut u);
        }
        if !self.phase.is_one() {
            u = u.scale(&self.phase);
        }
        u
    }

    /// Evaluate the circuit: extract the operator on the data wires and
    /// check the ancilla contract.
    pub fn evaluate(&self) -> Evaluation {
        let u = self.full_matrix();
        let n = self.n_data;
        let m = self.n_ancilla;
        if m == 0 {
            return Evaluation {
                matrix: u,
                verdict: AncillaVerdict::Pass,
            };
        }
        let dim_data = 1usize << n;
        let blk = 1usize << m;
        let mut w = RingMatrix::zero(dim_data, dim_data);
        for psi in 0..dim_data {
            for phi in 0..dim_data {
                w.set(
                    psi + 1,
                    phi + 1,
                    u.get(psi * blk + 1, phi * blk + 1).clone(),
                );
            }
        }
        let verdict = match self.ancilla_kind {
            AncillaKind::Clean => {
                // D |psi>|0> = (W |psi>)|0>: columns with ancilla 0 must have
                // support only on rows with ancilla 0.
                let mut verdict = AncillaVerdict::Pass;
                'outer: for phi in 0..dim_data {
                    let col = phi * blk + 1;
                    for row in 1..=u.rows() {
                        if (row - 1) % blk != 0 && !u.get(row, col).is_zero() {
                            verdict = AncillaVerdict::Fail { column: col, row };
                            break 'outer;
                        }
                    }
                }
                verdict
            }
            AncillaKind::Dirty => {
                // D = W (x) I exactly.
                let mut verdict = AncillaVerdict::Pass;
                'outer: for phi in 0..dim_data {
                    for b in 0..blk {
                        let col = phi * blk + b + 1;
                        for row in 1..=u.rows() {
                            let expect = if (row - 1) % blk == b {
                                w.get((row - 1) / blk + 1, phi + 1).clone()
                            } else {
                                RingScalar::zero()
                            };
                            if u.get(row, col) != &expect {
                                verdict = AncillaVerdict::Fail { column: col, row };
                                break 'outer;
                            }
                        }
                    }
                }
                verdict
            }
        };
        Evaluation { matrix: w, verdict }
    }

    // --- text format -----------------------------------------------------------

    pub fn serialize(&self) -> String {
        let mut out = format!("qubits {}\n", self.n_data);
        out.push_str(&format!(
            "ancillas {} {}\n",
            self.n_ancilla,
            self.ancilla_kind.text()
        ));
        if !self.phase.is_one() {
            let num = self.phase.num();
            out.push_str(&format!("phase {}/rt2^{}\n", num, self.phase.denom_exp()));
        }
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, CircuitError> {
        let mut n_data: Option<usize> = None;
        let mut n_ancilla = 0usize;
        let mut ancilla_kind = AncillaKind::Clean;
        let mut phase = RingScalar::one();
        let mut gates = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut toks = line.split_whitespace();
            let head = toks.next().unwrap();
            match head {
                "qubits" => {
                    let v = toks
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| CircuitError::Syntax(lineno, "bad qubit count".into()))?;
                    n_data = Some(v);
                }
                "ancillas" => {
                    n_ancilla = toks
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| CircuitError::Syntax(lineno, "bad ancilla count".into()))?;
                    ancilla_kind = match toks.next() {
                        Some("clean") | None => AncillaKind::Clean,
                        Some("dirty") => AncillaKind::Dirty,
                        Some(other) => {
                            return Err(CircuitError::Syntax(
                                lineno,
                                format!("expected clean|dirty, got `{other}`"),
                            ))
                        }
                    };
                }
                "phase" => {
                    let t = toks.next().ok_or_else(|| {
                        CircuitError::Syntax(lineno, "missing phase value".into())
                    })?;
                    phase = RingScalar::parse(t)
                        .map_err(|e| CircuitError::Syntax(lineno, e.to_string()))?;
                }
                name => {
                    let gname = GateName::from_text(name)
                        .ok_or_else(|| CircuitError::UnknownGate(lineno, name.to_string()))?;
                    let wires: Vec<usize> = toks
                        .map(|t| {
                            t.parse::<usize>().map_err(|_| {
                                CircuitError::Syntax(lineno, format!("bad wire `{t}`"))
                            })
                        })
                        .collect::<Result<_, _>>()?;
                    let total = n_data.unwrap_or(0) + n_ancilla;
                    let g = Gate::new(gname, wires)?;
                    if g.wires.iter().any(|&w| w > total) {
                        return Err(CircuitError::Syntax(
                            lineno,
                            format!("wire index out of range 1..={total}"),
                        ));
                    }
                    gates.push(g);
                }
            }
        }
        let n_data =
            n_data.ok_or_else(|| CircuitError::Syntax(0, "missing `qubits` header".into()))?;
        Ok(Circuit {
            n_data,
            n_ancilla,
            ancilla_kind,
            phase,
            gates,
        })
    }
}

/// The exact `2^total x 2^total` matrix of a single gate.
pub fn gate_matrix(g: &Gate, total_wires: usize) -> RingMatrix {
    assert!(
        g.wires.iter().all(|&w| w <= total_wires),
        "gate wires exceed wire count"
    );
    let mut u = RingMatrix::identity(1 << total_wires);
    apply_gate_left(g, total_wires, &mut u);
    u
}

/// Apply `gate` to `u` from the left (`u <- M_gate * u`) over `w` wires.
fn apply_gate_left(gate: &Gate, w: usize, u: &mut RingMatrix) {
    let dim = 1usize << w;
    let tmask = 1usize << (w - gate.target());
    let cmask: usize = gate
        .control_wires()
        .iter()
        .map(|&c| 1usize << (w - c))
        .sum();
    let cols = u.cols();
    if gate.name.is_x_like() {
        for s0 in 0..dim {
            if s0 & tmask == 0 && s0 & cmask == cmask {
                let s1 = s0 | tmask;
                for c in 1..=cols {
                    let a = u.get(s0 + 1, c).clone();
                    let b = u.get(s1 + 1, c).clone();
                    u.set(s0 + 1, c, b);
                    u.set(s1 + 1, c, a);
                }
            }
        }
        return;
    }
    let k = gate.name.kernel();
    if gate.name.is_diagonal() {
        let d = k[1][1].clone();
        for s in 0..dim {
            if s & tmask != 0 && s & cmask == cmask {
                for c in 1..=cols {
                    if !u.get(s + 1, c).is_zero() {
                        let v = u.get(s + 1, c) * &d;
                        u.set(s + 1, c, v);
                    }
                }
            }
        }
        return;
    }
    for s0 in 0..dim {
        if s0 & tmask == 0 && s0 & cmask == cmask {
            let s1 = s0 | tmask;
            for c in 1..=cols {
                let a = u.get(s0 + 1, c).clone();
                let b = u.get(s1 + 1, c).clone();
                u.set(s0 + 1, c, &k[0][0] * &a + &k[0][1] * &b);
                u.set(s1 + 1, c, &k[1][0] * &a + &k[1][1] * &b);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{mat_f, mat_h};

    fn g(name: GateName, wires: &[usize]) -> Gate {
        Gate::new(name, wires.to_vec()).unwrap()
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(2);
        let ev = c.evaluate();
        assert!(ev.matrix.is_identity());
        assert_eq!(ev.verdict, AncillaVerdict::Pass);
    }

    #[test]
    fn h_squared_is_identity() {
        let mut c = Circuit::new(1);
        c.push(g(GateName::H, &[1]));
        c.push(g(GateName::H, &[1]));
        assert!(c.evaluate().matrix.is_identity());
    }

    #[test]
    fn cx_is_block_identity_x() {
        let mut c = Circuit::new(2);
        c.push(g(GateName::Cx, &[1, 2]));
        let m = c.evaluate().matrix;
        let mut expect = RingMatrix::identity(4);
        expect.set(3, 3, RingScalar::zero());
        expect.set(4, 4, RingScalar::zero());
        expect.set(3, 4, RingScalar::one());
        expect.set(4, 3, RingScalar::one());
        assert_eq!(m, expect);
    }

    #[test]
    fn f_gate_matrix_and_f_squared() {
        let mut c = Circuit::new(1);
        c.push(g(GateName::F, &[1]));
        assert_eq!(c.evaluate().matrix, mat_f());

        // F^2 = iH
        c.push(g(GateName::F, &[1]));
        let ih = mat_h().scale(&RingScalar::i());
        assert_eq!(c.evaluate().matrix, ih);
    }

    #[test]
    fn matsumoto_amano_form_of_f() {
        // F = S H T S H T S H S * w^-1, gates applied right to left.
        let mut c = Circuit::new(1);
        for name in [
            GateName::S,
            GateName::H,
            GateName::S,
            GateName::T,
            GateName::H,
            GateName::S,
            GateName::T,
            GateName::H,
            GateName::S,
        ] {
            c.push(g(name, &[1]));
        }
        c.phase = RingScalar::omega_pow(-1);
        assert_eq!(c.evaluate().matrix, mat_f());
    }

    #[test]
    fn omega_is_shshsh() {
        let mut c = Circuit::new(1);
        for name in [
            GateName::S,
            GateName::H,
            GateName::S,
            GateName::H,
            GateName::S,
            GateName::H,
        ] {
            c.push(g(name, &[1]));
        }
        // As a matrix product this is S*H*S*H*S*H... applied right-to-left;
        // the palindrome makes the order immaterial.
        let expect = RingMatrix::identity(2).scale(&RingScalar::omega());
        assert_eq!(c.evaluate().matrix, expect);
    }

    #[test]
    fn clean_ancilla_contract() {
        // CX(1 -> 2) with wire 2 a clean ancilla: |x>|0> -> |x>|x>, which
        // violates the clean contract for x = 1.
        let mut c = Circuit::with_ancilla(1, 1, AncillaKind::Clean);
        c.push(g(GateName::Cx, &[1, 2]));
        let ev = c.evaluate();
        assert_ne!(ev.verdict, AncillaVerdict::Pass);

        // CX then CX restores the ancilla.
        c.push(g(GateName::Cx, &[1, 2]));
        let ev = c.evaluate();
        assert_eq!(ev.verdict, AncillaVerdict::Pass);
        assert!(ev.matrix.is_identity());
    }

    #[test]
    fn dirty_ancilla_contract() {
        // X on the data wire ignores the ancilla entirely: dirty-safe.
        let mut c = Circuit::with_ancilla(1, 1, AncillaKind::Dirty);
        c.push(g(GateName::X, &[1]));
        let ev = c.evaluate();
        assert_eq!(ev.verdict, AncillaVerdict::Pass);

        // CX(1 -> 2) acts on the ancilla: not dirty-safe.
        let mut c = Circuit::with_ancilla(1, 1, AncillaKind::Dirty);
        c.push(g(GateName::Cx, &[1, 2]));
        assert_ne!(c.evaluate().verdict, AncillaVerdict::Pass);
    }

    #[test]
    fn evaluation_is_multiplicative_over_concatenation() {
        let mut c1 = Circuit::new(2);
        c1.push(g(GateName::H, &[1]));
        c1.push(g(GateName::Cx, &[1, 2]));
        let mut c2 = Circuit::new(2);
        c2.push(g(GateName::S, &[2]));
        c2.push(g(GateName::Ch, &[2, 1]));
        let mut cat = c1.clone();
        cat.extend(&c2);
        assert_eq!(
            cat.evaluate().matrix,
            c2.evaluate().matrix.mul(&c1.evaluate().matrix)
        );
    }

    #[test]
    fn dagger_inverts() {
        let mut c = Circuit::new(2);
        c.push(g(GateName::Wh, &[1]));
        c.push(g(GateName::Cx, &[1, 2]));
        c.push(g(GateName::T, &[2]));
        c.push(g(GateName::F, &[2]));
        c.phase = RingScalar::omega_pow(3);
        let mut cat = c.clone();
        cat.extend(&c.dagger());
        assert!(cat.evaluate().matrix.is_identity());
    }

    #[test]
    fn all_gate_matrices_are_unitary() {
        for name in [
            GateName::X,
            GateName::H,
            GateName::S,
            GateName::Sdg,
            GateName::T,
            GateName::Tdg,
            GateName::F,
            GateName::Fdg,
            GateName::Wh,
            GateName::Whdg,
            GateName::Z,
        ] {
            let mut c = Circuit::new(1);
            c.push(g(name, &[1]));
            assert!(
                c.evaluate().matrix.is_unitary(),
                "{} not unitary",
                name.text()
            );
        }
        for name in [GateName::Cx, GateName::Ch] {
            let mut c = Circuit::new(2);
            c.push(g(name, &[1, 2]));
            assert!(c.evaluate().matrix.is_unitary());
        }
        let mut c = Circuit::new(3);
        c.push(g(GateName::Ccx, &[1, 2, 3]));
        assert!(c.evaluate().matrix.is_unitary());
    }

    #[test]
    fn parse_and_serialize_round_trip() {
        let text =
            "qubits 2\nancillas 1 clean\nphase (0,1,0,0)/rt2^0\nH 1\nCX 1 2\nCCX 1 2 3\nWHdg 2\n";
        let c = Circuit::parse(text).unwrap();
        let text2 = c.serialize();
        let c2 = Circuit::parse(&text2).unwrap();
        assert_eq!(c, c2);
        assert_eq!(text2, c2.serialize());
        assert_eq!(c.evaluate().matrix, c2.evaluate().matrix);
    }

    #[test]
    fn parse_errors() {
        let err = Circuit::parse("qubits 1\nQ 1\n").unwrap_err();
        assert_eq!(err, CircuitError::UnknownGate(2, "Q".into()));
        assert!(Circuit::parse("H 1\n").is_err());
        assert!(Circuit::parse("qubits 1\nCX 1 1\n").is_err());
        assert!(Circuit::parse("qubits 1\nH 2\n").is_err());
    }

    #[test]
    fn hundred_gate_random_round_trip() {
        // Serialization is deterministic: a parse of the canonical text
        // reproduces it byte for byte.
        let names = [
            GateName::X,
            GateName::H,
            GateName::S,
            GateName::Sdg,
            GateName::T,
            GateName::Tdg,
            GateName::F,
            GateName::Fdg,
            GateName::Wh,
            GateName::Whdg,
            GateName::Z,
            GateName::Cx,
            GateName::Ch,
            GateName::Ccx,
        ];
        let mut c = Circuit::with_ancilla(3, 1, AncillaKind::Clean);
        c.phase = RingScalar::omega_pow(5);
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..100 {
            let name = names[(next() % names.len() as u64) as usize];
            let mut wires: Vec<usize> = (1..=4).collect();
            for i in (1..4).rev() {
                let j = (next() % (i as u64 + 1)) as usize;
                wires.swap(i, j);
            }
            wires.truncate(name.arity());
            c.push(Gate::new(name, wires).unwrap());
        }
        let text = c.serialize();
        let c2 = Circuit::parse(&text).unwrap();
        assert_eq!(c, c2);
        assert_eq!(text, c2.serialize());
        assert_eq!(c.evaluate().matrix, c2.evaluate().matrix);
    }

    #[test]
    fn simple_circuit_parses() {
        let c = Circuit::parse("qubits 1\nH 1\n").unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.evaluate().matrix, mat_h());
    }
}

#[cfg(test)]
mod gate_matrix_tests {
    use super::*;
    use crate::linalg::{mat_f, mat_h};

    #[test]
    fn gate_matrix_examples() {
        // F on one wire equals the F kernel.
        let f = Gate::new(GateName::F, vec![1]).unwrap();
        assert_eq!(gate_matrix(&f, 1), mat_f());

        // CX on wires (1 -> 2) of 2 is I_2 (+) X.
        let cx = Gate::new(GateName::Cx, vec![1, 2]).unwrap();
        let m = gate_matrix(&cx, 2);
        let mut want = RingMatrix::identity(4);
        want.set(3, 3, RingScalar::zero());
        want.set(4, 4, RingScalar::zero());
        want.set(3, 4, RingScalar::one());
        want.set(4, 3, RingScalar::one());
        assert_eq!(m, want);

        // CH = I_2 (+) H.
        let ch = Gate::new(GateName::Ch, vec![1, 2]).unwrap();
        let m = gate_matrix(&ch, 2);
        let h = mat_h();
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(m.get(3 + r, 3 + c), h.get(r + 1, c + 1));
            }
        }
    }
}
