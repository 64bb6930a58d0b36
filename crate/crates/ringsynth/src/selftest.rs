//! Exhaustive residue tables and the circuit-identity suite.
//!
//! These checks are deliberately independent of the synthesis and lowering
//! code paths they validate: residue tables are enumerated from first
//! principles, and each displayed circuit identity is transcribed here
//! directly and compared against an independently built operator matrix.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::circuit::{AncillaKind, AncillaVerdict, Circuit, Gate, GateName};
use crate::linalg::{GenKind, Generator, RingMatrix};
use crate::lowering::{lower_generator, mcx_dirty, AncillaMode, GateSet};
use crate::rings::{congruent, residue, residue_facts, Modulus, RingInt, RingScalar};
use crate::synth::{reduce_pair_gaussian, reduce_pair_imaginary, reduce_quadruple_integral};

/// One named check outcome.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckReport {
    fn ok(name: &str) -> Self {
        CheckReport {
            name: name.to_string(),
            pass: true,
            detail: String::new(),
        }
    }

    fn fail(name: &str, detail: String) -> Self {
        CheckReport {
            name: name.to_string(),
            pass: false,
            detail,
        }
    }

    fn from(name: &str, result: Result<(), String>) -> Self {
        match result {
            Ok(()) => CheckReport::ok(name),
            Err(d) => CheckReport::fail(name, d),
        }
    }
}

// ---------------------------------------------------------------------------
// Residue tables and reduction properties
// ---------------------------------------------------------------------------

fn check_quotient_table(modulus: Modulus, expected: usize) -> Result<(), String> {
    let reps = modulus.representatives();
    if reps.len() != expected {
        return Err(format!("expected {expected} classes, found {}", reps.len()));
    }
    // Representatives are pairwise incongruent.
    for (i, a) in reps.iter().enumerate() {
        for b in reps.iter().skip(i + 1) {
            if congruent(a, b, modulus).map_err(|e| e.to_string())? {
                return Err(format!("representatives {a} and {b} are congruent"));
            }
        }
    }
    // Every small element reduces soundly to one of them.
    for x in -4i64..=4 {
        for y in -4i64..=4 {
            let candidate = match modulus {
                Modulus::TwoInZsqrt2 => {
                    RingInt::from_int(x) + RingInt::from_int(y) * RingInt::sqrt2()
                }
                Modulus::TwoInZisqrt2 | Modulus::TwoISqrt2 => {
                    RingInt::from_int(x) + RingInt::from_int(y) * RingInt::i_sqrt2()
                }
                Modulus::TwoInZi | Modulus::OnePlusI => {
                    RingInt::from_int(x) + RingInt::from_int(y) * RingInt::i()
                }
                Modulus::FourInZ => RingInt::from_int(x),
            };
            let r = residue(&candidate, modulus).map_err(|e| e.to_string())?;
            if !reps.contains(&r.rep) {
                return Err(format!(
                    "{candidate} reduced to foreign representative {}",
                    r.rep
                ));
            }
            let diff = candidate - r.rep;
            if diff.exact_div(&modulus.element()).is_none() {
                return Err(format!("unsound reduction at x={x}, y={y}"));
            }
        }
    }
    Ok(())
}

fn check_norm_classes() -> Result<(), String> {
    // In Z[irt2]/(2): u^dag u is 0 or 1, and norm-1 elements land in
    // {1, 3, 1+irt2, 3+irt2} modulo 2 irt2 -- checked over all 8 classes.
    for rep in Modulus::TwoISqrt2.representatives() {
        let f = residue_facts(&rep).map_err(|e| e.to_string())?;
        let n = f.norm_mod_two.ok_or("missing norm")?;
        if n > 1 {
            return Err(format!("{rep} has norm {n} mod 2"));
        }
        if n == 1 && f.in_admissible_unreal_set != Some(true) {
            return Err(format!("odd-norm class {rep} outside the admissible set"));
        }
    }
    // Sign rule: u = 3 iff -u = 1; u = 3+irt2 iff -u = 1+irt2.
    let one = RingInt::one();
    let three = RingInt::from_int(3);
    let one_i = RingInt::one() + RingInt::i_sqrt2();
    let three_i = RingInt::from_int(3) + RingInt::i_sqrt2();
    for rep in Modulus::TwoISqrt2.representatives() {
        let neg = residue(&-rep.clone(), Modulus::TwoISqrt2)
            .map_err(|e| e.to_string())?
            .rep;
        if (rep == three) != (neg == one) || (rep == three_i) != (neg == one_i) {
            return Err(format!("sign rule fails at class {rep}"));
        }
    }
    Ok(())
}

fn check_gaussian_unit_classes() -> Result<(), String> {
    // In Z[i]/(2): u^2 = 1 implies u = 1 or i, and u = i iff iu = 1.
    for rep in Modulus::TwoInZi.representatives() {
        let sq = rep.clone() * rep.clone();
        let sq_is_one =
            congruent(&sq, &RingInt::one(), Modulus::TwoInZi).map_err(|e| e.to_string())?;
        let is_unit = rep == RingInt::one() || rep == RingInt::i();
        if sq_is_one != is_unit {
            return Err(format!("square rule fails at class {rep}"));
        }
        let iu = RingInt::i() * rep.clone();
        let iu_is_one =
            congruent(&iu, &RingInt::one(), Modulus::TwoInZi).map_err(|e| e.to_string())?;
        if (rep == RingInt::i()) != iu_is_one {
            return Err(format!("iu rule fails at class {rep}"));
        }
    }
    Ok(())
}

fn check_integral_quadruple_rule() -> Result<(), String> {
    // All residue patterns mod 8 in {1,3,5,7}^4: the chosen sign flips make
    // every H (x) H image entry even.
    let hh = crate::linalg::mat_hh();
    for a in [1i64, 3, 5, 7] {
        for b in [1i64, 3, 5, 7] {
            for c in [1i64, 3, 5, 7] {
                for d in [1i64, 3, 5, 7] {
                    let u = [
                        BigInt::from(a),
                        BigInt::from(b),
                        BigInt::from(c),
                        BigInt::from(d),
                    ];
                    let flips = reduce_quadruple_integral(&u).map_err(|e| e.to_string())?;
                    let signed: Vec<RingScalar> = u
                        .iter()
                        .zip(flips.iter())
                        .map(|(x, &f)| {
                            let v = RingScalar::from_int(x.clone());
                            if f {
                                -v
                            } else {
                                v
                            }
                        })
                        .collect();
                    for r in 1..=4 {
                        let mut acc = RingScalar::zero();
                        for k in 1..=4 {
                            acc = acc + hh.get(r, k) * &signed[k - 1];
                        }
                        let v = acc.num().as_int().ok_or("non-integer image")?;
                        if acc.denom_exp() != 0 || v.is_odd() {
                            return Err(format!("odd image row {r} for ({a},{b},{c},{d})"));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_real_pair_rule() -> Result<(), String> {
    // Pairs congruent mod 2 in Z[sqrt2]: both H-image entries divisible by
    // sqrt(2). Enumerated over small lifts of all congruent class pairs.
    let divisible = |v: &RingScalar| (v.clone() * RingScalar::inv_sqrt2()).in_z_sqrt2();
    for x1 in -2i64..=3 {
        for y1 in -2i64..=3 {
            for dx in [-2i64, 0, 2] {
                for dy in [-2i64, 0, 2] {
                    let u1 =
                        RingScalar::from_int(x1) + RingScalar::from_int(y1) * RingScalar::sqrt2();
                    let u2 = RingScalar::from_int(x1 + dx)
                        + RingScalar::from_int(y1 + dy) * RingScalar::sqrt2();
                    let h = crate::linalg::mat_h();
                    let a = h.get(1, 1) * &u1 + h.get(1, 2) * &u2;
                    let b = h.get(2, 1) * &u1 + h.get(2, 2) * &u2;
                    if !divisible(&a) || !divisible(&b) {
                        return Err(format!("H image not divisible for ({u1}, {u2})"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_unreal_pair_rule() -> Result<(), String> {
    // All pairs of odd-norm lifts over Z[irt2] (x odd): the brute-force
    // prefix search succeeds and both images are divisible by i sqrt(2).
    let mut lifts = Vec::new();
    for x in [-3i64, -1, 1, 3, 5] {
        for y in -2i64..=2 {
            lifts.push(RingScalar::from_int(x) + RingScalar::from_int(y) * RingScalar::i_sqrt2());
        }
    }
    let divisible =
        |v: &RingScalar| (v.clone() * RingScalar::i_sqrt2() * RingScalar::half()).in_z_isqrt2();
    for u1 in &lifts {
        for u2 in &lifts {
            let (_, (a, b)) = reduce_pair_imaginary(u1, u2).map_err(|e| e.to_string())?;
            if !divisible(&a) || !divisible(&b) {
                return Err(format!("images not divisible for ({u1}, {u2})"));
            }
        }
    }
    Ok(())
}

fn check_gaussian_pair_rule() -> Result<(), String> {
    // All pairs of odd-square lifts over Z[i] (x + y odd): normalization
    // exponents exist and the wH image is divisible by 1 + i.
    let mut lifts = Vec::new();
    for x in -2i64..=3 {
        for y in -2i64..=3 {
            if (x + y).rem_euclid(2) == 1 {
                lifts.push(RingScalar::from_int(x) + RingScalar::from_int(y) * RingScalar::i());
            }
        }
    }
    for u1 in &lifts {
        for u2 in &lifts {
            // reduce_pair_gaussian asserts divisibility internally.
            reduce_pair_gaussian(u1, u2).map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

/// The exhaustive residue-table and reduction-property suite.
pub fn residue_table_checks() -> Vec<CheckReport> {
    vec![
        CheckReport::from(
            "quotient table Z[sqrt2]/(2)",
            check_quotient_table(Modulus::TwoInZsqrt2, 4),
        ),
        CheckReport::from(
            "quotient table Z[irt2]/(2)",
            check_quotient_table(Modulus::TwoInZisqrt2, 4),
        ),
        CheckReport::from(
            "quotient table Z[irt2]/(2irt2)",
            check_quotient_table(Modulus::TwoISqrt2, 8),
        ),
        CheckReport::from(
            "quotient table Z[i]/(2)",
            check_quotient_table(Modulus::TwoInZi, 4),
        ),
        CheckReport::from(
            "quotient table Z/(4)",
            check_quotient_table(Modulus::FourInZ, 4),
        ),
        CheckReport::from(
            "quotient table Z[i]/(1+i)",
            check_quotient_table(Modulus::OnePlusI, 2),
        ),
        CheckReport::from("norm classes mod 2irt2", check_norm_classes()),
        CheckReport::from("unit classes in Z[i]/(2)", check_gaussian_unit_classes()),
        CheckReport::from(
            "integral quadruple rule over {1,3,5,7}^4",
            check_integral_quadruple_rule(),
        ),
        CheckReport::from(
            "real pair reduction over congruent lifts",
            check_real_pair_rule(),
        ),
        CheckReport::from(
            "unreal pair reduction with prefix search",
            check_unreal_pair_rule(),
        ),
        CheckReport::from(
            "gaussian pair reduction over odd lifts",
            check_gaussian_pair_rule(),
        ),
    ]
}

// ---------------------------------------------------------------------------
// Circuit identities
// ---------------------------------------------------------------------------

fn g(name: GateName, wires: &[usize]) -> Gate {
    Gate::new(name, wires.to_vec()).expect("valid gate")
}

/// A controlled single-qubit kernel as an exact matrix over `total` wires,
/// built independently of the circuit evaluator.
fn controlled_matrix(
    total: usize,
    controls: &[usize],
    target: usize,
    kernel: &RingMatrix,
) -> RingMatrix {
    let dim = 1usize << total;
    let tmask = 1usize << (total - target);
    let cmask: usize = controls.iter().map(|&c| 1usize << (total - c)).sum();
    let mut m = RingMatrix::identity(dim);
    for s0 in 0..dim {
        if s0 & tmask == 0 && s0 & cmask == cmask {
            let s1 = s0 | tmask;
            m.set(s0 + 1, s0 + 1, kernel.get(1, 1).clone());
            m.set(s0 + 1, s1 + 1, kernel.get(1, 2).clone());
            m.set(s1 + 1, s0 + 1, kernel.get(2, 1).clone());
            m.set(s1 + 1, s1 + 1, kernel.get(2, 2).clone());
        }
    }
    m
}

fn kernel_1q(name: GateName) -> RingMatrix {
    let k = name.kernel();
    RingMatrix::new(
        2,
        2,
        vec![
            k[0][0].clone(),
            k[0][1].clone(),
            k[1][0].clone(),
            k[1][1].clone(),
        ],
    )
}

fn eval_gates(
    n_data: usize,
    n_anc: usize,
    kind: AncillaKind,
    gates: Vec<Gate>,
) -> (RingMatrix, AncillaVerdict) {
    let mut c = Circuit::with_ancilla(n_data, n_anc, kind);
    c.gates = gates;
    let ev = c.evaluate();
    (ev.matrix, ev.verdict)
}

fn expect_eq(
    name: &str,
    got: &RingMatrix,
    want: &RingMatrix,
    verdict: AncillaVerdict,
) -> Result<(), String> {
    if verdict != AncillaVerdict::Pass {
        return Err(format!("{name}: ancilla contract violated ({verdict:?})"));
    }
    if got != want {
        return Err(format!("{name}: operator mismatch"));
    }
    Ok(())
}

fn check_f_squared(extra: usize) -> Result<(), String> {
    let n = 1 + extra;
    let gates = vec![g(GateName::F, &[1]), g(GateName::F, &[1])];
    let (got, v) = eval_gates(n, 0, AncillaKind::Clean, gates);
    let mut want = controlled_matrix(n, &[], 1, &kernel_1q(GateName::H));
    want = want.scale(&RingScalar::i());
    expect_eq("F^2 = iH", &got, &want, v)
}

fn check_f_normal_form(extra: usize) -> Result<(), String> {
    let n = 1 + extra;
    let mut c = Circuit::new(n);
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
    let want = controlled_matrix(n, &[], 1, &kernel_1q(GateName::F));
    let ev = c.evaluate();
    expect_eq("F = SHTSHTSHS w^-1", &ev.matrix, &want, ev.verdict)
}

fn check_omega_is_shshsh(extra: usize) -> Result<(), String> {
    let n = 1 + extra;
    let gates = [
        GateName::S,
        GateName::H,
        GateName::S,
        GateName::H,
        GateName::S,
        GateName::H,
    ]
    .iter()
    .map(|&nm| g(nm, &[1]))
    .collect();
    let (got, v) = eval_gates(n, 0, AncillaKind::Clean, gates);
    let want = RingMatrix::identity(1 << n).scale(&RingScalar::omega());
    expect_eq("w = SHSHSH", &got, &want, v)
}

fn check_ix_identity(extra: usize) -> Result<(), String> {
    let n = 1 + extra;
    let gates = vec![
        g(GateName::Wh, &[1]),
        g(GateName::S, &[1]),
        g(GateName::S, &[1]),
        g(GateName::Wh, &[1]),
    ];
    let (got, v) = eval_gates(n, 0, AncillaKind::Clean, gates);
    let want = controlled_matrix(n, &[], 1, &kernel_1q(GateName::X)).scale(&RingScalar::i());
    expect_eq("iX = (wH) S^2 (wH)", &got, &want, v)
}

fn check_int_cz_display(extra: usize) -> Result<(), String> {
    // CZ(1 -> 2) with wire 3 dirty: HH(2,3), CX(1->2), HH(2,3).
    let n = 3 + extra;
    let gates = vec![
        g(GateName::H, &[2]),
        g(GateName::H, &[3]),
        g(GateName::Cx, &[1, 2]),
        g(GateName::H, &[2]),
        g(GateName::H, &[3]),
    ];
    let (got, v) = eval_gates(2, n - 2, AncillaKind::Dirty, gates);
    let want = controlled_matrix(2, &[1], 2, &kernel_1q(GateName::Z));
    expect_eq("CZ over {X,CX,CCX,HH}", &got, &want, v)
}

fn check_int_chh_display(extra: usize) -> Result<(), String> {
    // C(H x H)(1; 2,3) with wire 4 dirty.
    let n = 4 + extra;
    let gates = vec![
        g(GateName::H, &[3]),
        g(GateName::H, &[4]),
        g(GateName::Cx, &[3, 2]),
        g(GateName::Ccx, &[1, 2, 3]),
        g(GateName::Cx, &[3, 2]),
        g(GateName::H, &[3]),
        g(GateName::H, &[4]),
        g(GateName::Cx, &[3, 2]),
        g(GateName::Ccx, &[1, 2, 3]),
        g(GateName::Cx, &[3, 2]),
    ];
    let (got, v) = eval_gates(3, n - 3, AncillaKind::Dirty, gates);
    // want: C(HxH) over 3 wires.
    let hh = crate::linalg::mat_hh();
    let mut want = RingMatrix::identity(8);
    for r in 0..4 {
        for c in 0..4 {
            want.set(4 + r + 1, 4 + c + 1, hh.get(r + 1, c + 1).clone());
        }
    }
    expect_eq("C(HxH) over {X,CX,CCX,HH}", &got, &want, v)
}

fn cs_gates(c: usize, t: usize, d: usize) -> Vec<Gate> {
    vec![
        g(GateName::Ccx, &[c, t, d]),
        g(GateName::Sdg, &[d]),
        g(GateName::Wh, &[d]),
        g(GateName::Ccx, &[c, t, d]),
        g(GateName::Whdg, &[d]),
        g(GateName::Ccx, &[c, t, d]),
        g(GateName::S, &[d]),
    ]
}

fn check_gauss_cs_display(extra: usize) -> Result<(), String> {
    let n = 3 + extra;
    let (got, v) = eval_gates(2, n - 2, AncillaKind::Dirty, cs_gates(1, 2, 3));
    let want = controlled_matrix(2, &[1], 2, &kernel_1q(GateName::S));
    expect_eq("CS over {X,CX,CCX,wH,S}", &got, &want, v)
}

fn check_gauss_cwh_display(extra: usize) -> Result<(), String> {
    let n = 3 + extra;
    let mut gates = cs_gates(1, 2, 3);
    gates.push(g(GateName::Wh, &[2]));
    gates.extend(cs_gates(1, 2, 3));
    gates.push(g(GateName::Whdg, &[2]));
    gates.extend(cs_gates(1, 2, 3));
    let (got, v) = eval_gates(2, n - 2, AncillaKind::Dirty, gates);
    let want = controlled_matrix(2, &[1], 2, &kernel_1q(GateName::Wh));
    expect_eq("C(wH) over {X,CX,CCX,wH,S}", &got, &want, v)
}

fn check_unreal_cz_display(extra: usize) -> Result<(), String> {
    let n = 2 + extra;
    let mut gates = vec![
        g(GateName::F, &[2]),
        g(GateName::F, &[2]),
        g(GateName::Cx, &[1, 2]),
    ];
    for _ in 0..6 {
        gates.push(g(GateName::F, &[2]));
    }
    let (got, v) = eval_gates(n, 0, AncillaKind::Clean, gates);
    let want = controlled_matrix(n, &[1], 2, &kernel_1q(GateName::Z));
    expect_eq("CZ = F^2 CX F^6", &got, &want, v)
}

fn check_unreal_cf_display(extra: usize) -> Result<(), String> {
    // CF via CX, CZ, X, Z, X, F, CX, Z, X, F, X with IR-level Z gates.
    let n = 2 + extra;
    let cz = |gs: &mut Vec<Gate>| {
        gs.push(g(GateName::F, &[2]));
        gs.push(g(GateName::F, &[2]));
        gs.push(g(GateName::Cx, &[1, 2]));
        for _ in 0..6 {
            gs.push(g(GateName::F, &[2]));
        }
    };
    let mut gates = vec![g(GateName::Cx, &[1, 2])];
    cz(&mut gates);
    gates.push(g(GateName::X, &[2]));
    gates.push(g(GateName::Z, &[2]));
    gates.push(g(GateName::X, &[2]));
    gates.push(g(GateName::F, &[2]));
    gates.push(g(GateName::Cx, &[1, 2]));
    gates.push(g(GateName::Z, &[2]));
    gates.push(g(GateName::X, &[2]));
    gates.push(g(GateName::F, &[2]));
    gates.push(g(GateName::X, &[2]));
    let (got, v) = eval_gates(n, 0, AncillaKind::Clean, gates);
    let want = controlled_matrix(n, &[1], 2, &kernel_1q(GateName::F));
    expect_eq("CF construction", &got, &want, v)
}

fn check_two_level_z_dirty(gs: GateSet, extra: usize) -> Result<(), String> {
    // Fully-controlled Z with a dirty ancilla: conjugate MCX by the
    // Hadamard analogue of the set.
    let n = 3 + extra;
    let controls: Vec<usize> = (1..n - 1).collect();
    let t = n - 1;
    let d = n;
    let mut gates = Vec::new();
    match gs {
        GateSet::Imag => {
            gates.push(g(GateName::F, &[t]));
            gates.push(g(GateName::F, &[t]));
        }
        GateSet::Gauss => gates.push(g(GateName::Wh, &[t])),
        _ => unreachable!(),
    }
    let mcx = mcx_dirty(&controls, t, d, n).map_err(|e| e.to_string())?;
    gates.extend(mcx.gates.clone());
    match gs {
        GateSet::Imag => {
            for _ in 0..6 {
                gates.push(g(GateName::F, &[t]));
            }
        }
        GateSet::Gauss => gates.push(g(GateName::Whdg, &[t])),
        _ => unreachable!(),
    }
    let (got, v) = eval_gates(n - 1, 1, AncillaKind::Dirty, gates);
    let want = controlled_matrix(n - 1, &controls, t, &kernel_1q(GateName::Z));
    expect_eq("two-level Z with dirty ancilla", &got, &want, v)
}

fn check_two_level_zxf_dirty(extra: usize) -> Result<(), String> {
    // X(t) ZXF(t) MCX ZXF(t) X(t) with ZXF = Z * X * F as single-qubit
    // gates.
    let n = 3 + extra;
    let controls: Vec<usize> = (1..n - 1).collect();
    let t = n - 1;
    let d = n;
    let zxf = |gs: &mut Vec<Gate>| {
        gs.push(g(GateName::F, &[t]));
        gs.push(g(GateName::X, &[t]));
        gs.push(g(GateName::Z, &[t]));
    };
    let mut gates = vec![g(GateName::X, &[t])];
    zxf(&mut gates);
    gates.extend(
        mcx_dirty(&controls, t, d, n)
            .map_err(|e| e.to_string())?
            .gates,
    );
    zxf(&mut gates);
    gates.push(g(GateName::X, &[t]));
    let (got, v) = eval_gates(n - 1, 1, AncillaKind::Dirty, gates);
    // want: controlled ZXF
    let f = kernel_1q(GateName::F);
    let zx = GenKind::Zx2.kernel();
    let zxf_kernel = zx.mul(&f);
    let want = controlled_matrix(n - 1, &controls, t, &zxf_kernel);
    expect_eq("two-level ZXF with dirty ancilla", &got, &want, v)
}

fn check_two_level_s_two_dirty(extra: usize) -> Result<(), String> {
    // Fully-controlled S with two dirty wires: MCX(U -> w1), CS(w1 -> t, d=w2),
    // MCX(U -> w1), CS^dag(w1 -> t, d=w2), MCZ(U + w1 -> t, d=w2).
    let k = 1 + extra; // controls
    let n = k + 3;
    let controls: Vec<usize> = (1..=k).collect();
    let w1 = k + 1;
    let w2 = k + 2;
    let t = n;
    let mut gates = Vec::new();
    gates.extend(
        mcx_dirty(&controls, w1, w2, n)
            .map_err(|e| e.to_string())?
            .gates,
    );
    gates.extend(cs_gates(w1, t, w2));
    gates.extend(
        mcx_dirty(&controls, w1, w2, n)
            .map_err(|e| e.to_string())?
            .gates,
    );
    // CS^dag = dagger of cs_gates
    for gate in cs_gates(w1, t, w2).iter().rev() {
        let name = match gate.name {
            GateName::S => GateName::Sdg,
            GateName::Sdg => GateName::S,
            GateName::Wh => GateName::Whdg,
            GateName::Whdg => GateName::Wh,
            other => other,
        };
        gates.push(Gate::new(name, gate.wires.clone()).unwrap());
    }
    // MCZ over the gauss set: wH(t) MCX (wH)^dag(t)
    let mut zc: Vec<usize> = controls.clone();
    zc.push(w1);
    gates.push(g(GateName::Wh, &[t]));
    gates.extend(mcx_dirty(&zc, t, w2, n).map_err(|e| e.to_string())?.gates);
    gates.push(g(GateName::Whdg, &[t]));
    // Reorder wires so the dirty pair (w1, w2) sits at the end: build the
    // expected operator on all wires instead and compare as dirty-extended.
    let mut c = Circuit::new(n);
    c.gates = gates;
    let got = c.evaluate().matrix;
    let want_small = controlled_matrix(n, &controls, t, &kernel_1q(GateName::S));
    if got != want_small {
        return Err("two-level S with two dirty wires: mismatch".into());
    }
    Ok(())
}

fn check_lowered_generator(
    name: &str,
    kind: GenKind,
    levels: &[usize],
    dim: usize,
    gs: GateSet,
    mode: AncillaMode,
) -> Result<(), String> {
    let gen = Generator::new(kind, levels.to_vec(), dim).map_err(|e| e.to_string())?;
    let c = lower_generator(&gen, gs, mode).map_err(|e| e.to_string())?;
    if !gs.allows(&c) {
        return Err(format!("{name}: circuit leaves the gate set"));
    }
    let ev = c.evaluate();
    if ev.verdict != AncillaVerdict::Pass {
        return Err(format!("{name}: ancilla contract violated"));
    }
    if ev.matrix != gen.embed() {
        return Err(format!("{name}: operator mismatch"));
    }
    Ok(())
}

fn check_control_extend_chh() -> Result<(), String> {
    // C^3 (H x H) at 5 data wires + 1 clean ancilla: the sandwich extends
    // the singly-controlled H x H template (which itself needs one dirty
    // wire, available among the controls).
    use crate::lowering::control_extend;
    let template = vec![
        g(GateName::H, &[5]),
        g(GateName::H, &[1]),
        g(GateName::Cx, &[5, 4]),
        g(GateName::Ccx, &[7, 4, 5]), // wire 7 is the control placeholder
        g(GateName::Cx, &[5, 4]),
        g(GateName::H, &[5]),
        g(GateName::H, &[1]),
        g(GateName::Cx, &[5, 4]),
        g(GateName::Ccx, &[7, 4, 5]),
        g(GateName::Cx, &[5, 4]),
    ];
    let gates = control_extend(&template, 7, &[1, 2, 3], 6, 4).map_err(|e| e.to_string())?;
    let (got, v) = eval_gates(5, 1, AncillaKind::Clean, gates);
    let hh = crate::linalg::mat_hh();
    let mut want = RingMatrix::identity(32);
    for r in 0..4 {
        for c in 0..4 {
            want.set(28 + r + 1, 28 + c + 1, hh.get(r + 1, c + 1).clone());
        }
    }
    expect_eq("C^3(HxH) by control extension", &got, &want, v)
}

fn check_mcx_k4() -> Result<(), String> {
    // k = 4 controls at 6 wires: the 64 x 64 evaluation equals C^4 X (x) I.
    let c = mcx_dirty(&[1, 2, 3, 4], 5, 6, 6).map_err(|e| e.to_string())?;
    let mut full = Circuit::with_ancilla(5, 1, AncillaKind::Dirty);
    full.gates = c.gates;
    let ev = full.evaluate();
    let want = controlled_matrix(5, &[1, 2, 3, 4], 5, &kernel_1q(GateName::X));
    expect_eq(
        "C^4 X with one dirty ancilla",
        &ev.matrix,
        &want,
        ev.verdict,
    )
}

/// The circuit-identity suite: every displayed identity at its smallest
/// wire count and with one extra idle wire.
pub fn circuit_identity_checks() -> Vec<CheckReport> {
    let mut out = Vec::new();
    for extra in [0usize, 1] {
        let sfx = if extra == 0 { "" } else { " (+1 wire)" };
        out.push(CheckReport::from(
            &format!("F^2 = iH{sfx}"),
            check_f_squared(extra),
        ));
        out.push(CheckReport::from(
            &format!("F = SHTSHTSHS w^-1{sfx}"),
            check_f_normal_form(extra),
        ));
        out.push(CheckReport::from(
            &format!("w = SHSHSH{sfx}"),
            check_omega_is_shshsh(extra),
        ));
        out.push(CheckReport::from(
            &format!("iX = (wH)S^2(wH){sfx}"),
            check_ix_identity(extra),
        ));
        out.push(CheckReport::from(
            &format!("CZ over int set{sfx}"),
            check_int_cz_display(extra),
        ));
        out.push(CheckReport::from(
            &format!("C(HxH) over int set{sfx}"),
            check_int_chh_display(extra),
        ));
        out.push(CheckReport::from(
            &format!("CS over gauss set{sfx}"),
            check_gauss_cs_display(extra),
        ));
        out.push(CheckReport::from(
            &format!("C(wH) over gauss set{sfx}"),
            check_gauss_cwh_display(extra),
        ));
        out.push(CheckReport::from(
            &format!("CZ over imag set{sfx}"),
            check_unreal_cz_display(extra),
        ));
        out.push(CheckReport::from(
            &format!("CF over imag set{sfx}"),
            check_unreal_cf_display(extra),
        ));
        out.push(CheckReport::from(
            &format!("two-level Z dirty, imag{sfx}"),
            check_two_level_z_dirty(GateSet::Imag, extra),
        ));
        out.push(CheckReport::from(
            &format!("two-level Z dirty, gauss{sfx}"),
            check_two_level_z_dirty(GateSet::Gauss, extra),
        ));
        out.push(CheckReport::from(
            &format!("two-level ZXF dirty{sfx}"),
            check_two_level_zxf_dirty(extra),
        ));
        out.push(CheckReport::from(
            &format!("two-level S, two dirty{sfx}"),
            check_two_level_s_two_dirty(extra),
        ));
        // Ancilla-free two-level constructions at n = 3 and 4 (fully
        // controlled placement at the last two levels).
        let n = 3 + extra;
        let dim = 1usize << n;
        for (nm, kind) in [
            ("XZ", GenKind::Xz2),
            ("ZX", GenKind::Zx2),
            ("FZ", GenKind::Fz2),
            ("ZF", GenKind::Zf2),
        ] {
            out.push(CheckReport::from(
                &format!("ancilla-free two-level {nm} at n={n}"),
                check_lowered_generator(
                    nm,
                    kind,
                    &[dim - 1, dim],
                    dim,
                    GateSet::Imag,
                    AncillaMode::None,
                ),
            ));
        }
        for (nm, kind) in [
            ("iZ", GenKind::Iz2 { pow: 1 }),
            ("iX", GenKind::Ix2),
            ("wSH", GenKind::Wsh2),
            ("wHS", GenKind::Whs2),
        ] {
            out.push(CheckReport::from(
                &format!("ancilla-free two-level {nm} at n={n}"),
                check_lowered_generator(
                    nm,
                    kind,
                    &[dim - 1, dim],
                    dim,
                    GateSet::Gauss,
                    AncillaMode::None,
                ),
            ));
        }
        // iX and iZ at the small sizes with their direct forms.
        let small = 1 + extra;
        let sdim = 1usize << small;
        out.push(CheckReport::from(
            &format!("two-level iX at n={small}"),
            check_lowered_generator(
                "iX",
                GenKind::Ix2,
                &[sdim - 1, sdim],
                sdim,
                GateSet::Gauss,
                AncillaMode::None,
            ),
        ));
        out.push(CheckReport::from(
            &format!("two-level iZ at n={small}"),
            check_lowered_generator(
                "iZ",
                GenKind::Iz2 { pow: 1 },
                &[sdim - 1, sdim],
                sdim,
                GateSet::Gauss,
                AncillaMode::None,
            ),
        ));
    }
    out.push(CheckReport::from(
        "C^4 X with dirty ancilla at 6 wires",
        check_mcx_k4(),
    ));
    out.push(CheckReport::from(
        "C^3(HxH) by control extension at 5+1 wires",
        check_control_extend_chh(),
    ));
    out
}

/// Run both suites.
pub fn run_all() -> Vec<CheckReport> {
    let mut out = residue_table_checks();
    out.extend(circuit_identity_checks());
    out
}
