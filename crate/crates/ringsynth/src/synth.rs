//! Exact synthesis: decompose a unitary over one of the four subrings (or
//! the two super forms) into a word of multi-level generators whose product
//! reduces it to the identity.
//!
//! All five algorithms share the same shape: reduce column `j` to `e_j` by
//! driving its least denominator exponent to zero, pairing or quadrupling
//! the entries whose residues obstruct division by the base, then recurse
//! on the trailing submatrix. Everything is asserted as it goes: residue
//! counts, divisibility after each pair, and strict descent of the exponent
//! per pass.

use num_bigint::BigInt;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::linalg::{GenKind, Generator, GeneratorWord, LdeBase, LinalgError, RingMatrix};
use crate::lowering::GateSet;
use crate::rings::{RingScalar, RingTag};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SynthError {
    #[error("input matrix is not unitary")]
    NotUnitary,
    #[error("unsupported ring {0}: full Clifford+T synthesis is out of scope")]
    UnsupportedRing(RingTag),
    #[error("matrix ring {matrix} is not contained in the {forced} gate set's ring {ring}")]
    RingMismatch {
        matrix: RingTag,
        forced: &'static str,
        ring: RingTag,
    },
    #[error("not ancilla-free representable: {0}")]
    NotAncillaFree(String),
    #[error("ancilla-free synthesis is only available for the imag and gauss gate sets")]
    AncillaFreeUnsupported,
    #[error("internal contradiction, input not unitary: {0}")]
    Internal(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Ancilla discipline requested for the eventual circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AncillaPolicy {
    AllowOne,
    AncillaFree,
}

/// A synthesis request: the unitary, an optional forced gate set (otherwise
/// the minimal set from classification is used), and the ancilla policy.
#[derive(Debug, Clone)]
pub struct SynthRequest {
    pub matrix: RingMatrix,
    pub gateset: Option<GateSet>,
    pub policy: AncillaPolicy,
}

/// Per-column record of the least denominator exponents observed at the top
/// of each reduction pass, ending in 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnTrace {
    pub column: usize,
    pub ldes: Vec<u32>,
}

/// The outcome of a synthesis run.
///
/// `word.product() * input = I` exactly; `certificate` is that recomputed
/// product-times-input, kept as evidence. `residual_phase` is always 1 on
/// the in-scope paths.
#[derive(Debug, Clone)]
pub struct SynthResult {
    pub word: GeneratorWord,
    pub gateset: GateSet,
    pub residual_phase: RingScalar,
    pub certificate: RingMatrix,
    pub trace: Vec<ColumnTrace>,
}

// ---------------------------------------------------------------------------
// Reducer: shared state for the column algorithms
// ---------------------------------------------------------------------------

struct Reducer {
    m: RingMatrix,
    ops: Vec<Generator>,
    trace: Vec<ColumnTrace>,
}

impl Reducer {
    fn new(m: RingMatrix) -> Self {
        Reducer {
            m,
            ops: Vec::new(),
            trace: Vec::new(),
        }
    }

    fn dim(&self) -> usize {
        self.m.rows()
    }

    fn emit(&mut self, kind: GenKind, levels: Vec<usize>) -> Result<(), SynthError> {
        let g = Generator::new(kind, levels, self.dim())?;
        g.apply_left(&mut self.m);
        self.ops.push(g);
        Ok(())
    }

    fn column_lde(&self, j: usize, base: LdeBase) -> Result<u32, SynthError> {
        let col = RingMatrix::new(self.dim(), 1, self.m.column(j));
        Ok(col.lde(base)?)
    }

    /// Scaled integer numerators of column `j` at exponent `q`:
    /// `u = base^q * v`, returned entry-wise.
    fn scaled_column(&self, j: usize, base: LdeBase, q: u32) -> Vec<RingScalar> {
        let b = base.element();
        self.m
            .column(j)
            .into_iter()
            .map(|mut e| {
                for _ in 0..q {
                    e = e * b.clone();
                }
                e
            })
            .collect()
    }

    /// Base case of every column reduction: the column is a unit multiple of a
    /// standard basis vector. Returns `(index, unit)`.
    fn locate_unit_column(&self, j: usize) -> Result<(usize, RingScalar), SynthError> {
        let col = self.m.column(j);
        let mut found = None;
        for (idx, e) in col.iter().enumerate() {
            if !e.is_zero() {
                if found.is_some() {
                    return Err(SynthError::Internal(format!(
                        "column {j} at exponent 0 is not a basis vector"
                    )));
                }
                found = Some((idx + 1, e.clone()));
            }
        }
        found.ok_or_else(|| SynthError::Internal(format!("column {j} is zero")))
    }

    fn finish(self, gateset: GateSet, input: &RingMatrix) -> Result<SynthResult, SynthError> {
        if !self.m.is_identity() {
            return Err(SynthError::Internal(
                "reduction did not reach the identity".into(),
            ));
        }
        let mut word = GeneratorWord::new(input.rows());
        word.gens = self.ops.into_iter().rev().collect();
        let certificate = word.apply_to(input);
        if !certificate.is_identity() {
            return Err(SynthError::Internal(
                "certificate product is not the identity".into(),
            ));
        }
        Ok(SynthResult {
            word,
            gateset,
            residual_phase: RingScalar::one(),
            certificate,
            trace: self.trace,
        })
    }
}

fn unit_as_int(e: &RingScalar) -> Result<BigInt, SynthError> {
    e.num()
        .as_int()
        .filter(|_| e.denom_exp() == 0)
        .ok_or_else(|| SynthError::Internal(format!("expected an integer unit, got {e}")))
}

// ---------------------------------------------------------------------------
// Integral case: generators (-1)_[a], X_[a,b], (HxH)_[a,b,c,d]
// ---------------------------------------------------------------------------

/// Choose sign exponents so that `(-1)^(m_k) u_k = 1 (mod 4)` and report
/// them; preconditions `u_k^2 = 1 (mod 4)` (i.e. `u_k` odd).
pub fn reduce_quadruple_integral(u: &[BigInt; 4]) -> Result<[bool; 4], SynthError> {
    let four = BigInt::from(4);
    let mut m = [false; 4];
    for (flip, x) in m.iter_mut().zip(u.iter()) {
        let r = x.mod_floor(&four);
        *flip = match u32::try_from(&r).unwrap_or(0) {
            1 => false,
            3 => true,
            _ => {
                return Err(SynthError::Internal(format!(
                    "quadruple entry {x} is even; precondition u^2 = 1 (mod 4) violated"
                )))
            }
        };
    }
    Ok(m)
}

fn reduce_column_integral(red: &mut Reducer, j: usize) -> Result<(), SynthError> {
    let mut trace = ColumnTrace {
        column: j,
        ldes: Vec::new(),
    };
    loop {
        let q = red.column_lde(j, LdeBase::TwoOverZ)?;
        if let Some(&prev) = trace.ldes.last() {
            if q >= prev {
                return Err(SynthError::Internal(format!(
                    "lde did not strictly decrease on column {j}: {prev} -> {q}"
                )));
            }
        }
        trace.ldes.push(q);
        if q == 0 {
            break;
        }
        let u: Vec<BigInt> = red
            .scaled_column(j, LdeBase::TwoOverZ, q)
            .iter()
            .map(unit_as_int)
            .collect::<Result<_, _>>()?;
        let odd: Vec<usize> = (0..u.len())
            .filter(|&i| u[i].is_odd())
            .map(|i| i + 1)
            .collect();
        if odd.is_empty() || !odd.len().is_multiple_of(4) {
            return Err(SynthError::Internal(format!(
                "odd-entry count {} on column {j} is not a positive multiple of 4",
                odd.len()
            )));
        }
        for chunk in odd.chunks(4) {
            let vals = [
                u[chunk[0] - 1].clone(),
                u[chunk[1] - 1].clone(),
                u[chunk[2] - 1].clone(),
                u[chunk[3] - 1].clone(),
            ];
            let flips = reduce_quadruple_integral(&vals)?;
            for (&idx, &flip) in chunk.iter().zip(flips.iter()) {
                if flip {
                    red.emit(GenKind::Neg1, vec![idx])?;
                }
            }
            red.emit(GenKind::Hh4, chunk.to_vec())?;
        }
    }
    // lde 0: the column is +/- e_j'.
    let (jp, unit) = red.locate_unit_column(j)?;
    if unit_as_int(&unit)? == BigInt::from(-1) {
        red.emit(GenKind::Neg1, vec![jp])?;
    }
    if jp != j {
        red.emit(GenKind::X2, vec![j, jp])?;
    }
    red.trace.push(trace);
    Ok(())
}

fn synth_integral_into(red: &mut Reducer) -> Result<(), SynthError> {
    for j in 1..=red.dim() {
        reduce_column_integral(red, j)?;
    }
    Ok(())
}

fn synth_superintegral_into(red: &mut Reducer) -> Result<(), SynthError> {
    let q = red.m.lde(LdeBase::Sqrt2OverZ)?;
    if q % 2 == 1 {
        if red.dim() % 2 == 1 {
            return Err(SynthError::Internal(
                "odd dimension with odd sqrt(2)-denominator exponent".into(),
            ));
        }
        red.emit(GenKind::GlobalIH, vec![])?;
        let q2 = red.m.lde(LdeBase::Sqrt2OverZ)?;
        if q2 % 2 == 1 {
            return Err(SynthError::Internal("exponent parity did not flip".into()));
        }
    }
    synth_integral_into(red)
}

// ---------------------------------------------------------------------------
// Real case: generators (-1)_[a], X_[a,b], H_[a,b]
// ---------------------------------------------------------------------------

fn quad_real_coords(e: &RingScalar) -> Result<(BigInt, BigInt), SynthError> {
    if e.denom_exp() != 0 {
        return Err(SynthError::Internal(format!(
            "expected Z[sqrt2] element, got {e}"
        )));
    }
    e.num()
        .as_quad_real()
        .ok_or_else(|| SynthError::Internal(format!("expected Z[sqrt2] element, got {e}")))
}

/// Apply `H` to a pair of `Z[sqrt(2)]` entries congruent mod 2; both
/// resulting entries are divisible by `sqrt(2)`.
pub fn reduce_pair_real(
    u1: &RingScalar,
    u2: &RingScalar,
) -> Result<(RingScalar, RingScalar), SynthError> {
    let (x1, y1) = quad_real_coords(u1)?;
    let (x2, y2) = quad_real_coords(u2)?;
    if (x1 - x2).is_odd() || (y1 - y2).is_odd() {
        return Err(SynthError::Internal(format!(
            "pair ({u1}, {u2}) is not congruent mod 2"
        )));
    }
    let h = GenKind::H2.kernel();
    let a = h.get(1, 1) * u1 + h.get(1, 2) * u2;
    let b = h.get(2, 1) * u1 + h.get(2, 2) * u2;
    for v in [&a, &b] {
        if !(v.clone() * RingScalar::inv_sqrt2()).in_z_sqrt2() {
            return Err(SynthError::Internal(format!(
                "H image of ({u1}, {u2}) not divisible"
            )));
        }
    }
    Ok((a, b))
}

fn reduce_column_real(red: &mut Reducer, j: usize) -> Result<(), SynthError> {
    let mut trace = ColumnTrace {
        column: j,
        ldes: Vec::new(),
    };
    loop {
        let q = red.column_lde(j, LdeBase::Sqrt2OverZsqrt2)?;
        if let Some(&prev) = trace.ldes.last() {
            if q >= prev {
                return Err(SynthError::Internal(format!(
                    "lde did not strictly decrease on column {j}: {prev} -> {q}"
                )));
            }
        }
        trace.ldes.push(q);
        if q == 0 {
            break;
        }
        let u = red.scaled_column(j, LdeBase::Sqrt2OverZsqrt2, q);
        // Classes mod 2 with odd rational part: 1 (y even) and 1+sqrt2 (y odd).
        let mut class_one = Vec::new();
        let mut class_one_rt2 = Vec::new();
        for (i, e) in u.iter().enumerate() {
            let (x, y) = quad_real_coords(e)?;
            if x.is_odd() {
                if y.is_even() {
                    class_one.push(i + 1);
                } else {
                    class_one_rt2.push(i + 1);
                }
            }
        }
        if class_one.len() % 2 != 0 || class_one_rt2.len() % 2 != 0 {
            return Err(SynthError::Internal(format!(
                "residue classes on column {j} do not have even counts"
            )));
        }
        if class_one.is_empty() && class_one_rt2.is_empty() {
            return Err(SynthError::Internal(format!(
                "lde {q} > 0 on column {j} but no odd entries"
            )));
        }
        for class in [class_one, class_one_rt2] {
            for pair in class.chunks(2) {
                red.emit(GenKind::H2, pair.to_vec())?;
            }
        }
    }
    let (jp, unit) = red.locate_unit_column(j)?;
    if unit_as_int(&unit)? == BigInt::from(-1) {
        red.emit(GenKind::Neg1, vec![jp])?;
    }
    if jp != j {
        red.emit(GenKind::X2, vec![j, jp])?;
    }
    red.trace.push(trace);
    Ok(())
}

fn synth_real_into(red: &mut Reducer) -> Result<(), SynthError> {
    for j in 1..=red.dim() {
        reduce_column_real(red, j)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Imaginary case: generators (-1)_[a], X_[a,b], F_[a,b]
// ---------------------------------------------------------------------------

fn divisible_by_isqrt2(e: &RingScalar) -> bool {
    if e.is_zero() {
        return true;
    }
    if e.denom_exp() != 0 {
        return false;
    }
    match e.num().as_quad_imag() {
        Some((x, _)) => x.is_even(),
        None => false,
    }
}

fn is_odd_norm_isqrt2(e: &RingScalar) -> Result<bool, SynthError> {
    if e.denom_exp() != 0 {
        return Err(SynthError::Internal(format!(
            "expected Z[isqrt2] element, got {e}"
        )));
    }
    let (x, _) = e
        .num()
        .as_quad_imag()
        .ok_or_else(|| SynthError::Internal(format!("expected Z[isqrt2] element, got {e}")))?;
    Ok(x.is_odd())
}

/// Apply `F^m0 (-1)_[1]^m1 (-1)_[2]^m2 X^m3` to an exact pair.
fn apply_unreal_prefix(
    u1: &RingScalar,
    u2: &RingScalar,
    m: (u8, bool, bool, bool),
) -> (RingScalar, RingScalar) {
    let (m0, m1, m2, m3) = m;
    let (mut a, mut b) = if m3 {
        (u2.clone(), u1.clone())
    } else {
        (u1.clone(), u2.clone())
    };
    if m1 {
        a = -a;
    }
    if m2 {
        b = -b;
    }
    let f = GenKind::F2.kernel();
    for _ in 0..m0 {
        let na = f.get(1, 1) * &a + f.get(1, 2) * &b;
        let nb = f.get(2, 1) * &a + f.get(2, 2) * &b;
        a = na;
        b = nb;
    }
    (a, b)
}

/// A prefix `F^m0 (-1)_[1]^m1 (-1)_[2]^m2 X^m3` chosen by the pair reduction.
pub type UnrealPrefix = (u8, bool, bool, bool);

/// Find the lexicographically least `(m0, m1, m2, m3)` in
/// `{0..3} x {0,1}^3` such that the prefixed `F`-image of `(u1, u2)` has
/// both components divisible by `i*sqrt(2)`; preconditions
/// `u^dag u = 1 (mod 2)` for both entries.
pub fn reduce_pair_imaginary(
    u1: &RingScalar,
    u2: &RingScalar,
) -> Result<(UnrealPrefix, (RingScalar, RingScalar)), SynthError> {
    for m0 in 0..4u8 {
        for m1 in [false, true] {
            for m2 in [false, true] {
                for m3 in [false, true] {
                    let (a, b) = apply_unreal_prefix(u1, u2, (m0, m1, m2, m3));
                    if divisible_by_isqrt2(&a) && divisible_by_isqrt2(&b) {
                        return Ok(((m0, m1, m2, m3), (a, b)));
                    }
                }
            }
        }
    }
    Err(SynthError::Internal(format!(
        "no prefix reduces the pair ({u1}, {u2})"
    )))
}

fn reduce_column_imaginary(
    red: &mut Reducer,
    j: usize,
    ancilla_free: bool,
) -> Result<(), SynthError> {
    let mut trace = ColumnTrace {
        column: j,
        ldes: Vec::new(),
    };
    loop {
        let q = red.column_lde(j, LdeBase::ISqrt2)?;
        if let Some(&prev) = trace.ldes.last() {
            if q >= prev {
                return Err(SynthError::Internal(format!(
                    "lde did not strictly decrease on column {j}: {prev} -> {q}"
                )));
            }
        }
        trace.ldes.push(q);
        if q == 0 {
            break;
        }
        let u = red.scaled_column(j, LdeBase::ISqrt2, q);
        let mut odd = Vec::new();
        for (i, e) in u.iter().enumerate() {
            if is_odd_norm_isqrt2(e)? {
                odd.push(i + 1);
            }
        }
        if odd.is_empty() || odd.len() % 2 != 0 {
            return Err(SynthError::Internal(format!(
                "odd-norm count {} on column {j} is not a positive even number",
                odd.len()
            )));
        }
        for pair in odd.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            let (m, _) = reduce_pair_imaginary(&u[a - 1], &u[b - 1])?;
            if ancilla_free {
                emit_unreal_substitution(red, a, b, m)?;
            } else {
                let (m0, m1, m2, m3) = m;
                if m3 {
                    red.emit(GenKind::X2, vec![a, b])?;
                }
                if m2 {
                    red.emit(GenKind::Neg1, vec![b])?;
                }
                if m1 {
                    red.emit(GenKind::Neg1, vec![a])?;
                }
                for _ in 0..m0 {
                    red.emit(GenKind::F2, vec![a, b])?;
                }
            }
            // Both touched entries must now be divisible.
            let col = red.m.column(j);
            let base = LdeBase::ISqrt2.element();
            for &idx in pair {
                let mut e = col[idx - 1].clone();
                for _ in 0..q {
                    e = e * base.clone();
                }
                if !divisible_by_isqrt2(&e) {
                    return Err(SynthError::Internal(format!(
                        "entry {idx} not divisible after pair reduction on column {j}"
                    )));
                }
            }
        }
    }
    let (jp, unit) = red.locate_unit_column(j)?;
    if ancilla_free {
        // Defer signs: move the unit to position j with a ZX two-level op.
        if jp != j {
            red.emit(GenKind::Zx2, vec![j, jp])?;
        }
    } else {
        if unit_as_int(&unit)? == BigInt::from(-1) {
            red.emit(GenKind::Neg1, vec![jp])?;
        }
        if jp != j {
            red.emit(GenKind::X2, vec![j, jp])?;
        }
    }
    red.trace.push(trace);
    Ok(())
}

/// Determinant-1 substitution for `F^m0 (-1)^m1 (-1)^m2 X^m3`, emitted in
/// application order over `{XZ, ZX, FZ, ZF}` two-level generators. The
/// replacement equals the original up to a diagonal sign, which cannot
/// affect divisibility.
fn emit_unreal_substitution(
    red: &mut Reducer,
    a: usize,
    b: usize,
    m: (u8, bool, bool, bool),
) -> Result<(), SynthError> {
    let (m0, m1, m2, m3) = m;
    let seq: &[GenKind] = match (m0, m1, m2, m3) {
        (2, false, false, false) => &[GenKind::Zf2, GenKind::Fz2],
        (1, false, false, false) => &[GenKind::Xz2, GenKind::Xz2, GenKind::Zf2],
        (1, true, false, false) => &[GenKind::Xz2, GenKind::Xz2, GenKind::Fz2],
        (1, false, true, false) => &[GenKind::Fz2],
        (1, true, true, false) => &[GenKind::Xz2, GenKind::Xz2, GenKind::Zf2],
        (1, false, false, true) => &[GenKind::Zx2, GenKind::Fz2],
        (1, true, false, true) => &[GenKind::Xz2, GenKind::Zf2],
        (1, false, true, true) => &[GenKind::Zx2, GenKind::Zf2],
        (1, true, true, true) => &[GenKind::Xz2, GenKind::Fz2],
        other => {
            return Err(SynthError::Internal(format!(
                "no determinant-1 substitution for prefix {other:?}"
            )))
        }
    };
    for kind in seq {
        red.emit(*kind, vec![a, b])?;
    }
    Ok(())
}

fn synth_imaginary_into(red: &mut Reducer, ancilla_free: bool) -> Result<(), SynthError> {
    for j in 1..=red.dim() {
        reduce_column_imaginary(red, j, ancilla_free)?;
    }
    if ancilla_free {
        // The matrix is now diag(+/-1) with evenly many -1 (det 1): clear
        // the signs in pairs with four-level I (x) Z operators.
        let n = red.dim();
        let neg: Vec<usize> = (1..=n)
            .filter(|&r| {
                unit_as_int(red.m.get(r, r))
                    .map(|v| v == BigInt::from(-1))
                    .unwrap_or(false)
            })
            .collect();
        if !neg.len().is_multiple_of(2) {
            return Err(SynthError::Internal(
                "odd number of -1 diagonal entries on a det-1 input".into(),
            ));
        }
        for pair in neg.chunks(2) {
            let (p, qq) = (pair[0], pair[1]);
            let mut fill = (1..=n).filter(|x| *x != p && *x != qq);
            let f1 = fill
                .next()
                .ok_or_else(|| SynthError::Internal("dimension < 4".into()))?;
            let f2 = fill
                .next()
                .ok_or_else(|| SynthError::Internal("dimension < 4".into()))?;
            red.emit(GenKind::Z2, vec![f1, p, f2, qq])?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Gaussian case: generators i_[a], X_[a,b], (wH)_[a,b]
// ---------------------------------------------------------------------------

fn gauss_coords(e: &RingScalar) -> Result<(BigInt, BigInt), SynthError> {
    if e.denom_exp() != 0 {
        return Err(SynthError::Internal(format!(
            "expected Z[i] element, got {e}"
        )));
    }
    e.num()
        .as_gauss()
        .ok_or_else(|| SynthError::Internal(format!("expected Z[i] element, got {e}")))
}

fn divisible_by_one_plus_i(e: &RingScalar) -> bool {
    if e.is_zero() {
        return true;
    }
    if e.denom_exp() != 0 {
        return false;
    }
    match e.num().as_gauss() {
        Some((x, y)) => (x + y).is_even(),
        None => false,
    }
}

/// The normalization exponents `(m1, m2)` of a Gaussian pair reduction.
pub type GaussExponents = (u8, u8);

/// Normalize a pair of odd-square `Z[i]` entries with the least `i`-powers
/// making each congruent to 1 mod 2, then apply `wH`; both images are
/// divisible by `1 + i`.
pub fn reduce_pair_gaussian(
    u1: &RingScalar,
    u2: &RingScalar,
) -> Result<(GaussExponents, (RingScalar, RingScalar)), SynthError> {
    let exp_of = |u: &RingScalar| -> Result<u8, SynthError> {
        for m in 0..4u8 {
            let v = RingScalar::omega_pow(2 * m as i64) * u.clone();
            let (x, y) = gauss_coords(&v)?;
            if x.is_odd() && y.is_even() {
                return Ok(m);
            }
        }
        Err(SynthError::Internal(format!(
            "{u} has no unit normalization mod 2"
        )))
    };
    let m1 = exp_of(u1)?;
    let m2 = exp_of(u2)?;
    let w1 = RingScalar::omega_pow(2 * m1 as i64) * u1.clone();
    let w2 = RingScalar::omega_pow(2 * m2 as i64) * u2.clone();
    let wh = GenKind::Wh2.kernel();
    let a = wh.get(1, 1) * &w1 + wh.get(1, 2) * &w2;
    let b = wh.get(2, 1) * &w1 + wh.get(2, 2) * &w2;
    if !divisible_by_one_plus_i(&a) || !divisible_by_one_plus_i(&b) {
        return Err(SynthError::Internal(format!(
            "wH image of normalized pair ({u1}, {u2}) is not divisible by 1+i"
        )));
    }
    Ok(((m1, m2), (a, b)))
}

fn unit_gauss_exponent(e: &RingScalar) -> Result<u8, SynthError> {
    // e is a unit of Z[i]: 1, i, -1, -i = i^m.
    for m in 0..4u8 {
        if *e == RingScalar::omega_pow(2 * m as i64) {
            return Ok(m);
        }
    }
    Err(SynthError::Internal(format!(
        "expected a Z[i] unit, got {e}"
    )))
}

fn reduce_column_gaussian(
    red: &mut Reducer,
    j: usize,
    ancilla_free: bool,
) -> Result<(), SynthError> {
    let mut trace = ColumnTrace {
        column: j,
        ldes: Vec::new(),
    };
    loop {
        let q = red.column_lde(j, LdeBase::OnePlusI)?;
        if let Some(&prev) = trace.ldes.last() {
            if q >= prev {
                return Err(SynthError::Internal(format!(
                    "lde did not strictly decrease on column {j}: {prev} -> {q}"
                )));
            }
        }
        trace.ldes.push(q);
        if q == 0 {
            break;
        }
        let u = red.scaled_column(j, LdeBase::OnePlusI, q);
        let mut odd = Vec::new();
        for (i, e) in u.iter().enumerate() {
            let (x, y) = gauss_coords(e)?;
            if (x + y).is_odd() {
                odd.push(i + 1);
            }
        }
        if odd.is_empty() || odd.len() % 2 != 0 {
            return Err(SynthError::Internal(format!(
                "odd-square count {} on column {j} is not a positive even number",
                odd.len()
            )));
        }
        for pair in odd.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            let ((m1, m2), _) = reduce_pair_gaussian(&u[a - 1], &u[b - 1])?;
            if ancilla_free {
                // Determinant-1 substitution for wH i^m1 i^m2 (classes only
                // depend on m mod 2 here, since -1 = 1 mod 2).
                match (m1 % 2 == 1, m2 % 2 == 1) {
                    (false, false) => red.emit(GenKind::Wsh2, vec![a, b])?,
                    (false, true) => red.emit(GenKind::Whs2, vec![a, b])?,
                    (true, false) => {
                        red.emit(GenKind::Iz2 { pow: 1 }, vec![a, b])?;
                        red.emit(GenKind::Whs2, vec![a, b])?;
                    }
                    (true, true) => {
                        red.emit(GenKind::Iz2 { pow: 1 }, vec![a, b])?;
                        red.emit(GenKind::Wsh2, vec![a, b])?;
                    }
                }
            } else {
                if m1 > 0 {
                    red.emit(GenKind::I4 { pow: m1 }, vec![a])?;
                }
                if m2 > 0 {
                    red.emit(GenKind::I4 { pow: m2 }, vec![b])?;
                }
                red.emit(GenKind::Wh2, vec![a, b])?;
            }
            let col = red.m.column(j);
            let base = LdeBase::OnePlusI.element();
            for &idx in pair {
                let mut e = col[idx - 1].clone();
                for _ in 0..q {
                    e = e * base.clone();
                }
                if !divisible_by_one_plus_i(&e) {
                    return Err(SynthError::Internal(format!(
                        "entry {idx} not divisible after pair reduction on column {j}"
                    )));
                }
            }
        }
    }
    let (jp, unit) = red.locate_unit_column(j)?;
    if ancilla_free {
        if jp != j {
            red.emit(GenKind::Ix2, vec![j, jp])?;
        }
    } else {
        let m = unit_gauss_exponent(&unit)?;
        if m > 0 {
            red.emit(GenKind::I4 { pow: (4 - m) % 4 }, vec![jp])?;
        }
        if jp != j {
            red.emit(GenKind::X2, vec![j, jp])?;
        }
    }
    red.trace.push(trace);
    Ok(())
}

fn synth_gaussian_into(red: &mut Reducer, ancilla_free: bool) -> Result<(), SynthError> {
    for j in 1..=red.dim() {
        reduce_column_gaussian(red, j, ancilla_free)?;
    }
    if ancilla_free {
        // Matrix is diag(i^m_r) with product 1: telescope the phases onto
        // the last entry with two-level iZ operators. Each step clears
        // entry r and accumulates its phase into entry r+1.
        let n = red.dim();
        for r in 1..n {
            let c = unit_gauss_exponent(red.m.get(r, r))?;
            let pow = (4 - c) % 4;
            if pow > 0 {
                red.emit(GenKind::Iz2 { pow }, vec![r, r + 1])?;
            }
        }
        let last = unit_gauss_exponent(red.m.get(n, n))?;
        if last != 0 {
            return Err(SynthError::Internal(
                "residual phase after iZ telescoping on a det-1 input".into(),
            ));
        }
    }
    Ok(())
}

fn synth_supergaussian_into(red: &mut Reducer) -> Result<(), SynthError> {
    let q = red.m.lde(LdeBase::Sqrt2OverZi)?;
    if q % 2 == 1 {
        red.emit(GenKind::GlobalOmega, vec![])?;
    }
    synth_gaussian_into(red, false)
}

// ---------------------------------------------------------------------------
// Per-case entry points
// ---------------------------------------------------------------------------

fn run_case(
    v: &RingMatrix,
    gs: GateSet,
    f: impl FnOnce(&mut Reducer) -> Result<(), SynthError>,
) -> Result<SynthResult, SynthError> {
    if !v.is_unitary() {
        return Err(SynthError::NotUnitary);
    }
    if !gs.contains_matrix(v) {
        return Err(SynthError::RingMismatch {
            matrix: v.classify(),
            forced: gs.name(),
            ring: gs.ring(),
        });
    }
    let mut red = Reducer::new(v.clone());
    f(&mut red)?;
    red.finish(gs, v)
}

/// Synthesis over `D` with generators `(-1)_[a]`, `X_[a,b]`, `(HxH)_[a,b,c,d]`.
pub fn synth_integral(v: &RingMatrix) -> Result<SynthResult, SynthError> {
    run_case(v, GateSet::Int, synth_integral_into)
}

/// Super-integral synthesis (`W / sqrt(2)^q`, `W` over `Z`); an odd
/// exponent prepends the block-diagonal `I (x) H` generator.
pub fn synth_superintegral(v: &RingMatrix) -> Result<SynthResult, SynthError> {
    run_case(v, GateSet::SupInt, synth_superintegral_into)
}

/// Synthesis over `D[sqrt(2)]` with generators `(-1)_[a]`, `X_[a,b]`, `H_[a,b]`.
pub fn synth_real(v: &RingMatrix) -> Result<SynthResult, SynthError> {
    run_case(v, GateSet::Real, synth_real_into)
}

/// Synthesis over `D[i*sqrt(2)]` with generators `(-1)_[a]`, `X_[a,b]`, `F_[a,b]`.
pub fn synth_imaginary(v: &RingMatrix) -> Result<SynthResult, SynthError> {
    run_case(v, GateSet::Imag, |red| synth_imaginary_into(red, false))
}

/// Ancilla-free imaginary synthesis over the determinant-1 generators
/// `{XZ, ZX, FZ, ZF, I(x)Z}`. Requires `det V = 1` at dimension >= 16; the
/// requirement is dropped below that, falling back to the regular set.
pub fn synth_imaginary_ancillafree(v: &RingMatrix) -> Result<SynthResult, SynthError> {
    if v.rows() >= ANCILLA_FREE_DET_DIM {
        if !v.is_unitary() {
            return Err(SynthError::NotUnitary);
        }
        let det = v.det_exact();
        if !det.is_one() {
            return Err(SynthError::NotAncillaFree(format!(
                "det = {det} but ancilla-free circuits on >= 4 qubits require det 1"
            )));
        }
        run_case(v, GateSet::Imag, |red| synth_imaginary_into(red, true))
    } else {
        synth_imaginary(v)
    }
}

/// Synthesis over `D[i]` with generators `i_[a]`, `X_[a,b]`, `(wH)_[a,b]`.
pub fn synth_gaussian(v: &RingMatrix) -> Result<SynthResult, SynthError> {
    run_case(v, GateSet::Gauss, |red| synth_gaussian_into(red, false))
}

/// Ancilla-free Gaussian synthesis over `{iZ, iX, wSH, wHS}`; same
/// determinant-1 rule as the imaginary case.
pub fn synth_gaussian_ancillafree(v: &RingMatrix) -> Result<SynthResult, SynthError> {
    if v.rows() >= ANCILLA_FREE_DET_DIM {
        if !v.is_unitary() {
            return Err(SynthError::NotUnitary);
        }
        let det = v.det_exact();
        if !det.is_one() {
            return Err(SynthError::NotAncillaFree(format!(
                "det = {det} but ancilla-free circuits on >= 4 qubits require det 1"
            )));
        }
        run_case(v, GateSet::Gauss, |red| synth_gaussian_into(red, true))
    } else {
        synth_gaussian(v)
    }
}

/// Super-Gaussian synthesis (`W / sqrt(2)^q`, `W` over `Z[i]`); an odd
/// exponent prepends the global phase `w`.
pub fn synth_supergaussian(v: &RingMatrix) -> Result<SynthResult, SynthError> {
    run_case(v, GateSet::SupGauss, synth_supergaussian_into)
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

/// Dimension threshold above which ancilla-free synthesis requires
/// determinant 1 (4 qubits).
pub const ANCILLA_FREE_DET_DIM: usize = 16;

/// Run exact synthesis for a request. The returned word satisfies
/// `word.product() * V = I` exactly.
pub fn synthesize(req: &SynthRequest) -> Result<SynthResult, SynthError> {
    let v = &req.matrix;
    if !v.is_unitary() {
        return Err(SynthError::NotUnitary);
    }
    let tag = v.classify();
    let gs = match req.gateset {
        Some(gs) => {
            if !gs.contains_matrix(v) {
                return Err(SynthError::RingMismatch {
                    matrix: tag,
                    forced: gs.name(),
                    ring: gs.ring(),
                });
            }
            gs
        }
        None => GateSet::minimal_for(tag).ok_or(SynthError::UnsupportedRing(tag))?,
    };
    match (gs, req.policy) {
        (GateSet::Int, AncillaPolicy::AllowOne) => synth_integral(v),
        (GateSet::SupInt, AncillaPolicy::AllowOne) => synth_superintegral(v),
        (GateSet::Real, AncillaPolicy::AllowOne) => synth_real(v),
        (GateSet::Imag, AncillaPolicy::AllowOne) => synth_imaginary(v),
        (GateSet::Gauss, AncillaPolicy::AllowOne) => synth_gaussian(v),
        (GateSet::SupGauss, AncillaPolicy::AllowOne) => synth_supergaussian(v),
        (GateSet::Imag, AncillaPolicy::AncillaFree) => synth_imaginary_ancillafree(v),
        (GateSet::Gauss, AncillaPolicy::AncillaFree) => synth_gaussian_ancillafree(v),
        (_, AncillaPolicy::AncillaFree) => Err(SynthError::AncillaFreeUnsupported),
    }
}

// ---------------------------------------------------------------------------
// Random words (deterministic under a seeded RNG)
// ---------------------------------------------------------------------------

/// The generator kinds of a gate set (`ancilla_free` selects the
/// determinant-1 sets for imag/gauss).
pub fn generator_kinds(gs: GateSet, ancilla_free: bool, dim: usize) -> Vec<GenKind> {
    let mut kinds: Vec<GenKind> = match (gs, ancilla_free) {
        (GateSet::Int, _) | (GateSet::SupInt, _) => vec![GenKind::Neg1, GenKind::X2, GenKind::Hh4],
        (GateSet::Real, _) => vec![GenKind::Neg1, GenKind::X2, GenKind::H2],
        (GateSet::Imag, false) => vec![GenKind::Neg1, GenKind::X2, GenKind::F2],
        (GateSet::Imag, true) => {
            vec![
                GenKind::Xz2,
                GenKind::Zx2,
                GenKind::Fz2,
                GenKind::Zf2,
                GenKind::Z2,
            ]
        }
        (GateSet::Gauss, false) | (GateSet::SupGauss, false) => {
            vec![GenKind::I4 { pow: 1 }, GenKind::X2, GenKind::Wh2]
        }
        (GateSet::Gauss, true) | (GateSet::SupGauss, true) => {
            vec![
                GenKind::Iz2 { pow: 1 },
                GenKind::Ix2,
                GenKind::Wsh2,
                GenKind::Whs2,
            ]
        }
    };
    if gs == GateSet::SupInt && dim.is_multiple_of(2) && !ancilla_free {
        kinds.push(GenKind::GlobalIH);
    }
    if gs == GateSet::SupGauss && !ancilla_free {
        kinds.push(GenKind::GlobalOmega);
    }
    kinds.retain(|k| k.arity() <= dim);
    kinds
}

/// A random generator word over the gate set, deterministic for a fixed RNG.
pub fn random_word(
    gs: GateSet,
    ancilla_free: bool,
    dim: usize,
    len: usize,
    rng: &mut impl Rng,
) -> GeneratorWord {
    let kinds = generator_kinds(gs, ancilla_free, dim);
    let mut word = GeneratorWord::new(dim);
    let mut indices: Vec<usize> = (1..=dim).collect();
    for _ in 0..len {
        let mut kind = *kinds.choose(rng).unwrap();
        kind = match kind {
            GenKind::I4 { .. } => GenKind::I4 {
                pow: rng.gen_range(1..=3),
            },
            GenKind::Iz2 { .. } => GenKind::Iz2 {
                pow: rng.gen_range(1..=3),
            },
            other => other,
        };
        let (shuffled, _) = indices.partial_shuffle(rng, kind.arity());
        let mut levels = shuffled.to_vec();
        levels.sort_unstable();
        word.gens
            .push(Generator::new(kind, levels, dim).expect("valid random generator"));
    }
    word
}


#[cfg(test)]
mod pair_real_tests {
    use super::*;

    #[test]
    fn reduce_pair_real_examples() {
        let one = RingScalar::one();
        let (a, b) = reduce_pair_real(&one, &one).unwrap();
        assert_eq!(a, RingScalar::sqrt2());
        assert!(b.is_zero());

        let x = RingScalar::one() + RingScalar::sqrt2();
        let (a, b) = reduce_pair_real(&x, &x).unwrap();
        assert_eq!(a, RingScalar::sqrt2() + RingScalar::from_int(2));
        assert!(b.is_zero());

        // Incongruent pair is rejected.
        assert!(reduce_pair_real(&one, &RingScalar::sqrt2()).is_err());
    }

    #[test]
    fn controlled_h_synthesizes_over_real() {
        // CH = I_2 (+) H classifies as real (mixed sqrt2 parities).
        let h = crate::linalg::mat_h();
        let mut ch = RingMatrix::identity(4);
        for r in 0..2 {
            for c in 0..2 {
                ch.set(3 + r, 3 + c, h.get(r + 1, c + 1).clone());
            }
        }
        let r = synthesize(&SynthRequest {
            matrix: ch.clone(),
            gateset: None,
            policy: AncillaPolicy::AllowOne,
        })
        .unwrap();
        assert_eq!(r.gateset, GateSet::Real);
        assert!(r.word.apply_to(&ch).is_identity());
    }

    #[test]
    fn per_case_entry_points_round_trip() {
        use crate::linalg::{mat_f, mat_h, mat_hh};
        for (r, v) in [
            (synth_integral(&mat_hh()), mat_hh()),
            (synth_superintegral(&mat_h()), mat_h()),
            (synth_real(&mat_h()), mat_h()),
            (synth_imaginary(&mat_f()), mat_f()),
            (synth_supergaussian(&mat_h()), mat_h()),
        ] {
            let r = r.unwrap();
            assert!(r.word.apply_to(&v).is_identity());
        }
        let wh = GenKind::Wh2.kernel();
        let r = synth_gaussian(&wh).unwrap();
        assert!(r.word.apply_to(&wh).is_identity());
        // Ring guards on the per-case entry points.
        assert!(matches!(
            synth_integral(&mat_h()),
            Err(SynthError::RingMismatch { .. })
        ));
        assert!(matches!(
            synth_gaussian(&mat_f()),
            Err(SynthError::RingMismatch { .. })
        ));
    }
}
