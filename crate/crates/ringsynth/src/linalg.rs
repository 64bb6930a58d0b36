//! Exact dense matrices over `D[w]`, multi-level operators, denominator
//! exponents, determinants, and ring classification of unitaries.
//!
//! Indices are 1-based throughout, matching `[n] = {1, ..., n}`.

use std::fmt;

use thiserror::Error;

use crate::rings::{RingInt, RingScalar, RingTag};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid multi-level operator: {0}")]
    BadGenerator(String),
    #[error("entry at ({0},{1}) is outside the required ring")]
    OutsideRing(usize, usize),
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("matrix parse error: {0}")]
    Parse(String),
}

// ---------------------------------------------------------------------------
// RingMatrix
// ---------------------------------------------------------------------------

/// A dense matrix of [`RingScalar`] with exact arithmetic, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RingScalar>,
}

impl RingMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<RingScalar>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        RingMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        RingMatrix {
            rows,
            cols,
            entries: vec![RingScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RingMatrix::zero(n, n);
        for j in 1..=n {
            m.set(j, j, RingScalar::one());
        }
        m
    }

    /// Standard basis column `e_j` (1-based) of dimension `n`.
    pub fn basis_column(n: usize, j: usize) -> Self {
        let mut m = RingMatrix::zero(n, 1);
        m.set(j, 1, RingScalar::one());
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// 1-based access.
    pub fn get(&self, r: usize, c: usize) -> &RingScalar {
        &self.entries[(r - 1) * self.cols + (c - 1)]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RingScalar) {
        self.entries[(r - 1) * self.cols + (c - 1)] = v;
    }

    pub fn entries(&self) -> &[RingScalar] {
        &self.entries
    }

    pub fn column(&self, c: usize) -> Vec<RingScalar> {
        (1..=self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn mul(&self, rhs: &RingMatrix) -> RingMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in mul");
        let mut out = RingMatrix::zero(self.rows, rhs.cols);
        for i in 1..=self.rows {
            for k in 1..=self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 1..=rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, cur + a * b);
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> RingMatrix {
        let mut out = RingMatrix::zero(self.cols, self.rows);
        for r in 1..=self.rows {
            for c in 1..=self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn scale(&self, s: &RingScalar) -> RingMatrix {
        RingMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == RingMatrix::identity(self.rows)
    }

    /// Exact unitarity check: `M^dag * M = I`.
    pub fn is_unitary(&self) -> bool {
        self.rows == self.cols && self.dagger().mul(self).is_identity()
    }

    /// Kronecker product.
    pub fn kron(&self, rhs: &RingMatrix) -> RingMatrix {
        let mut out = RingMatrix::zero(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 1..=self.rows {
            for j in 1..=self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 1..=rhs.rows {
                    for l in 1..=rhs.cols {
                        out.set(
                            (i - 1) * rhs.rows + k,
                            (j - 1) * rhs.cols + l,
                            a * rhs.get(k, l),
                        );
                    }
                }
            }
        }
        out
    }

    // --- denominator exponents ------------------------------------------------

    /// The least `p`-denominator exponent of the matrix relative to the given
    /// base, per [`LdeBase`]. The zero matrix has exponent 0 by convention.
    ///
    /// Errors if some entry lies outside the matching dyadic extension.
    pub fn lde(&self, base: LdeBase) -> Result<u32, LinalgError> {
        let mut q = 0u32;
        for r in 1..=self.rows {
            for c in 1..=self.cols {
                let e = self.get(r, c);
                if !base.in_dyadic_ring(e) {
                    return Err(LinalgError::OutsideRing(r, c));
                }
                q = q.max(base.scalar_lde(e));
            }
        }
        Ok(q)
    }

    /// Whether `base^q * M` has all entries in the base's integer ring.
    pub fn is_exponent_for(&self, base: LdeBase, q: u32) -> bool {
        self.entries.iter().all(|e| base.is_exponent(e, q))
    }

    // --- determinant ------------------------------------------------------------

    /// Exact determinant by fraction-free (Bareiss) elimination over `Z[w]`
    /// with `sqrt(2)`-power bookkeeping.
    pub fn det_exact(&self) -> RingScalar {
        assert_eq!(self.rows, self.cols, "determinant requires a square matrix");
        let n = self.rows;
        if n == 0 {
            return RingScalar::one();
        }
        // Scale to an integer matrix over Z[w].
        let kmax = self
            .entries
            .iter()
            .map(|e| e.denom_exp())
            .max()
            .unwrap_or(0);
        let mut a: Vec<Vec<RingInt>> = (1..=n)
            .map(|r| (1..=n).map(|c| self.get(r, c).num_at_exp(kmax)).collect())
            .collect();
        // det(M) = det(A) / sqrt(2)^(n * kmax)
        let mut sign = false;
        let mut prev = RingInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = !sign;
                    }
                    None => return RingScalar::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[k][k].clone() * a[i][j].clone() - a[i][k].clone() * a[k][j].clone();
                    a[i][j] = num
                        .exact_div(&prev)
                        .expect("Bareiss division is exact over an integral domain");
                }
                a[i][k] = RingInt::zero();
            }
            prev = a[k][k].clone();
        }
        let mut det = a[n - 1][n - 1].clone();
        if sign {
            det = -det;
        }
        RingScalar::new(det, (n as u32) * kmax)
    }

    // --- classification ----------------------------------------------------------

    /// The minimal matrix-level ring tag: one of `D`, `Z_over_sqrt2`,
    /// `Dsqrt2`, `Disqrt2`, `Di`, `Zi_over_sqrt2`, `Domega`.
    ///
    /// The super-integral and super-Gaussian forms require a single exponent
    /// valid for every entry simultaneously, so mixed parities (e.g. `CH`)
    /// fall through to the quadratic extensions.
    pub fn classify(&self) -> RingTag {
        let all = |f: fn(&RingScalar) -> bool| self.entries.iter().all(f);
        if all(RingScalar::in_d) {
            RingTag::D
        } else if self.superintegral_exponent().is_some() {
            RingTag::ZOverSqrt2
        } else if all(RingScalar::in_d_sqrt2) {
            RingTag::Dsqrt2
        } else if all(RingScalar::in_d_isqrt2) {
            RingTag::Disqrt2
        } else if all(RingScalar::in_d_i) {
            RingTag::Di
        } else if self.supergaussian_exponent().is_some() {
            RingTag::ZiOverSqrt2
        } else {
            RingTag::Domega
        }
    }

    /// The least `q` with `sqrt(2)^q * M` over `Z`, if one exists.
    pub fn superintegral_exponent(&self) -> Option<u32> {
        self.common_exponent(LdeBase::Sqrt2OverZ)
    }

    /// The least `q` with `sqrt(2)^q * M` over `Z[i]`, if one exists.
    pub fn supergaussian_exponent(&self) -> Option<u32> {
        self.common_exponent(LdeBase::Sqrt2OverZi)
    }

    fn common_exponent(&self, base: LdeBase) -> Option<u32> {
        if self.entries.iter().all(|e| base.in_dyadic_ring(e)) {
            let q = self.lde(base).ok()?;
            // A per-entry least exponent may still fail globally when the
            // parities clash, so confirm it.
            if self.is_exponent_for(base, q) {
                Some(q)
            } else {
                None
            }
        } else {
            None
        }
    }

    // --- text format -----------------------------------------------------------

    /// Serialize in the matrix text format: `dim r c` then `r` rows of `c`
    /// scalar tokens.
    pub fn serialize(&self) -> String {
        let mut out = format!("dim {} {}\n", self.rows, self.cols);
        for r in 1..=self.rows {
            let row: Vec<String> = (1..=self.cols)
                .map(|c| self.get(r, c).to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, LinalgError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| LinalgError::Parse("empty matrix file".into()))?;
        let mut it = header.split_whitespace();
        if it.next() != Some("dim") {
            return Err(LinalgError::Parse(format!(
                "expected `dim r c`, got `{header}`"
            )));
        }
        let rows: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| LinalgError::Parse("bad row count".into()))?;
        let cols: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| LinalgError::Parse("bad column count".into()))?;
        let mut entries = Vec::with_capacity(rows * cols);
        for (seen, line) in lines.enumerate() {
            if seen >= rows {
                return Err(LinalgError::Parse("too many rows".into()));
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != cols {
                return Err(LinalgError::Parse(format!(
                    "row {} has {} entries, expected {}",
                    seen + 1,
                    toks.len(),
                    cols
                )));
            }
            for t in toks {
                entries.push(RingScalar::parse(t).map_err(|e| LinalgError::Parse(e.to_string()))?);
            }
        }
        if entries.len() != rows * cols {
            return Err(LinalgError::Parse("missing rows".into()));
        }
        Ok(RingMatrix::new(rows, cols, entries))
    }
}

impl fmt::Display for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

// ---------------------------------------------------------------------------
// Denominator-exponent bases
// ---------------------------------------------------------------------------

/// A base `p` together with the integer ring `R` the exponent is relative
/// to, as used by the five synthesis settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LdeBase {
    /// Base 2 relative to `Z`; entries must lie in `D`.
    TwoOverZ,
    /// Base `sqrt(2)` relative to `Z` (super-integral form).
    Sqrt2OverZ,
    /// Base `sqrt(2)` relative to `Z[sqrt(2)]`; entries in `D[sqrt(2)]`.
    Sqrt2OverZsqrt2,
    /// Base `i*sqrt(2)` relative to `Z[i*sqrt(2)]`; entries in `D[i*sqrt(2)]`.
    ISqrt2,
    /// Base `1+i` relative to `Z[i]`; entries in `D[i]`.
    OnePlusI,
    /// Base `sqrt(2)` relative to `Z[i]` (super-Gaussian form).
    Sqrt2OverZi,
}

impl LdeBase {
    /// The base as a ring element.
    pub fn element(self) -> RingScalar {
        match self {
            LdeBase::TwoOverZ => RingScalar::from_int(2),
            LdeBase::Sqrt2OverZ | LdeBase::Sqrt2OverZsqrt2 | LdeBase::Sqrt2OverZi => {
                RingScalar::sqrt2()
            }
            LdeBase::ISqrt2 => RingScalar::i_sqrt2(),
            LdeBase::OnePlusI => RingScalar::one() + RingScalar::i(),
        }
    }

    /// Whether `x` lies in the dyadic extension this base applies to.
    pub fn in_dyadic_ring(self, x: &RingScalar) -> bool {
        match self {
            LdeBase::TwoOverZ => x.in_d(),
            LdeBase::Sqrt2OverZ => x.in_superintegral(),
            LdeBase::Sqrt2OverZsqrt2 => x.in_d_sqrt2(),
            LdeBase::ISqrt2 => x.in_d_isqrt2(),
            LdeBase::OnePlusI => x.in_d_i(),
            LdeBase::Sqrt2OverZi => x.in_supergaussian(),
        }
    }

    /// Whether `x` lies in the base's integer ring.
    pub fn in_integer_ring(self, x: &RingScalar) -> bool {
        match self {
            LdeBase::TwoOverZ | LdeBase::Sqrt2OverZ => x.in_z(),
            LdeBase::Sqrt2OverZsqrt2 => x.in_z_sqrt2(),
            LdeBase::ISqrt2 => x.in_z_isqrt2(),
            LdeBase::OnePlusI | LdeBase::Sqrt2OverZi => x.in_zi(),
        }
    }

    /// Whether `q` is a valid exponent for `x`: `base^q * x` integral.
    pub fn is_exponent(self, x: &RingScalar, q: u32) -> bool {
        let mut y = x.clone();
        let b = self.element();
        for _ in 0..q {
            y = y * b.clone();
        }
        self.in_integer_ring(&y)
    }

    /// The least exponent for a single scalar already known to lie in the
    /// dyadic extension. Bounded by `2k + 2` where `k` is the normalized
    /// `sqrt(2)` exponent.
    pub fn scalar_lde(self, x: &RingScalar) -> u32 {
        if x.is_zero() {
            return 0;
        }
        let bound = 2 * x.denom_exp() + 2;
        let b = self.element();
        let mut y = x.clone();
        for q in 0..=bound {
            if self.in_integer_ring(&y) {
                return q;
            }
            y = y * b.clone();
        }
        unreachable!("lde search exceeded bound for {x}")
    }
}

// ---------------------------------------------------------------------------
// Multi-level operators (generators)
// ---------------------------------------------------------------------------

/// The kind of a symbolic multi-level operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    /// `(-1)_[a]`: one level.
    Neg1,
    /// Two-level `X`.
    X2,
    /// Two-level `H`.
    H2,
    /// Two-level `F`.
    F2,
    /// Two-level `wH`.
    Wh2,
    /// Four-level `H (x) H`.
    Hh4,
    /// `i^pow` at one level.
    I4 { pow: u8 },
    /// Two-level `(iZ)^pow`.
    Iz2 { pow: u8 },
    /// Two-level `iX`.
    Ix2,
    /// Two-level `XZ`.
    Xz2,
    /// Two-level `ZX`.
    Zx2,
    /// Two-level `FZ`.
    Fz2,
    /// Two-level `ZF`.
    Zf2,
    /// Two-level `wSH`.
    Wsh2,
    /// Two-level `wHS`.
    Whs2,
    /// Four-level `I (x) Z`: flips the sign of the 2nd and 4th levels.
    Z2,
    /// `I_(n/2) (x) H` (block-diagonal `H` on consecutive pairs); n even.
    GlobalIH,
    /// `w * I_n`.
    GlobalOmega,
}

impl GenKind {
    /// Number of level indices this kind carries.
    pub fn arity(self) -> usize {
        match self {
            GenKind::Neg1 | GenKind::I4 { .. } => 1,
            GenKind::X2
            | GenKind::H2
            | GenKind::F2
            | GenKind::Wh2
            | GenKind::Iz2 { .. }
            | GenKind::Ix2
            | GenKind::Xz2
            | GenKind::Zx2
            | GenKind::Fz2
            | GenKind::Zf2
            | GenKind::Wsh2
            | GenKind::Whs2 => 2,
            GenKind::Hh4 | GenKind::Z2 => 4,
            GenKind::GlobalIH | GenKind::GlobalOmega => 0,
        }
    }

    /// The kernel matrix acting on the levels (not defined for the global
    /// kinds, whose embedding depends on the dimension).
    pub fn kernel(self) -> RingMatrix {
        let one = RingScalar::one;
        let zero = RingScalar::zero;
        let i = RingScalar::i;
        match self {
            GenKind::Neg1 => RingMatrix::new(1, 1, vec![-one()]),
            GenKind::I4 { pow } => {
                RingMatrix::new(1, 1, vec![RingScalar::omega_pow(2 * pow as i64)])
            }
            GenKind::X2 => RingMatrix::new(2, 2, vec![zero(), one(), one(), zero()]),
            GenKind::H2 => {
                let h = RingScalar::inv_sqrt2();
                RingMatrix::new(2, 2, vec![h.clone(), h.clone(), h.clone(), -h])
            }
            GenKind::F2 => {
                let half = RingScalar::half();
                let a = (RingScalar::one() + RingScalar::i_sqrt2()) * half.clone();
                let b = (-RingScalar::one() + RingScalar::i_sqrt2()) * half.clone();
                RingMatrix::new(2, 2, vec![a, half.clone(), half, b])
            }
            GenKind::Wh2 => {
                let wh = RingScalar::omega() * RingScalar::inv_sqrt2();
                RingMatrix::new(2, 2, vec![wh.clone(), wh.clone(), wh.clone(), -wh])
            }
            GenKind::Hh4 => {
                let h = GenKind::H2.kernel();
                h.kron(&h)
            }
            GenKind::Iz2 { pow } => {
                let ip = RingScalar::omega_pow(2 * pow as i64);
                let mip = RingScalar::omega_pow(-2 * (pow as i64));
                RingMatrix::new(2, 2, vec![ip, zero(), zero(), mip])
            }
            GenKind::Ix2 => RingMatrix::new(2, 2, vec![zero(), i(), i(), zero()]),
            GenKind::Xz2 => RingMatrix::new(2, 2, vec![zero(), -one(), one(), zero()]),
            GenKind::Zx2 => RingMatrix::new(2, 2, vec![zero(), one(), -one(), zero()]),
            GenKind::Fz2 => {
                // F * Z: negate the second column of F.
                let f = GenKind::F2.kernel();
                RingMatrix::new(
                    2,
                    2,
                    vec![
                        f.get(1, 1).clone(),
                        -f.get(1, 2).clone(),
                        f.get(2, 1).clone(),
                        -f.get(2, 2).clone(),
                    ],
                )
            }
            GenKind::Zf2 => {
                // Z * F: negate the second row of F.
                let f = GenKind::F2.kernel();
                RingMatrix::new(
                    2,
                    2,
                    vec![
                        f.get(1, 1).clone(),
                        f.get(1, 2).clone(),
                        -f.get(2, 1).clone(),
                        -f.get(2, 2).clone(),
                    ],
                )
            }
            GenKind::Wsh2 => {
                // w * S * H = (w/sqrt2) [[1, 1], [i, -i]]
                let w = RingScalar::omega() * RingScalar::inv_sqrt2();
                RingMatrix::new(
                    2,
                    2,
                    vec![w.clone(), w.clone(), w.clone() * i(), -(w * i())],
                )
            }
            GenKind::Whs2 => {
                // (wH) * S = (w/sqrt2) [[1, i], [1, -i]]
                let w = RingScalar::omega() * RingScalar::inv_sqrt2();
                RingMatrix::new(
                    2,
                    2,
                    vec![w.clone(), w.clone() * i(), w.clone(), -(w * i())],
                )
            }
            GenKind::Z2 => {
                let mut m = RingMatrix::identity(4);
                m.set(2, 2, -one());
                m.set(4, 4, -one());
                m
            }
            GenKind::GlobalIH | GenKind::GlobalOmega => {
                panic!("global kinds have no fixed kernel; use Generator::embed")
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GenKind::Neg1 => "NEG1",
            GenKind::X2 => "X2",
            GenKind::H2 => "H2",
            GenKind::F2 => "F2",
            GenKind::Wh2 => "WH2",
            GenKind::Hh4 => "HH4",
            GenKind::I4 { .. } => "I4",
            GenKind::Iz2 { .. } => "IZ2",
            GenKind::Ix2 => "IX2",
            GenKind::Xz2 => "XZ2",
            GenKind::Zx2 => "ZX2",
            GenKind::Fz2 => "FZ2",
            GenKind::Zf2 => "ZF2",
            GenKind::Wsh2 => "WSH2",
            GenKind::Whs2 => "WHS2",
            GenKind::Z2 => "Z2",
            GenKind::GlobalIH => "GLOBAL_IH",
            GenKind::GlobalOmega => "GLOBAL_OMEGA",
        }
    }
}

/// One symbolic multi-level operator at dimension `dim` (1-based levels).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub kind: GenKind,
    pub levels: Vec<usize>,
    pub dim: usize,
}

impl Generator {
    pub fn new(kind: GenKind, levels: Vec<usize>, dim: usize) -> Result<Self, LinalgError> {
        if levels.len() != kind.arity() {
            return Err(LinalgError::BadGenerator(format!(
                "{} expects {} levels, got {}",
                kind.name(),
                kind.arity(),
                levels.len()
            )));
        }
        let mut seen = levels.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != levels.len() {
            return Err(LinalgError::BadGenerator(
                "level indices must be distinct".into(),
            ));
        }
        if levels.iter().any(|&a| a == 0 || a > dim) {
            return Err(LinalgError::BadGenerator(format!(
                "level index out of range 1..={dim}"
            )));
        }
        if kind == GenKind::GlobalIH && !dim.is_multiple_of(2) {
            return Err(LinalgError::BadGenerator(
                "GLOBAL_IH requires even dimension".into(),
            ));
        }
        Ok(Generator { kind, levels, dim })
    }

    /// Embed into the full `dim x dim` matrix: identity except on the level
    /// rows/columns, which carry the kernel.
    pub fn embed(&self) -> RingMatrix {
        match self.kind {
            GenKind::GlobalIH => {
                let mut m = RingMatrix::zero(self.dim, self.dim);
                let h = GenKind::H2.kernel();
                for b in 0..self.dim / 2 {
                    for r in 0..2 {
                        for c in 0..2 {
                            m.set(2 * b + r + 1, 2 * b + c + 1, h.get(r + 1, c + 1).clone());
                        }
                    }
                }
                m
            }
            GenKind::GlobalOmega => RingMatrix::identity(self.dim).scale(&RingScalar::omega()),
            _ => {
                let kernel = self.kind.kernel();
                let mut m = RingMatrix::identity(self.dim);
                for (r, &lr) in self.levels.iter().enumerate() {
                    for (c, &lc) in self.levels.iter().enumerate() {
                        m.set(lr, lc, kernel.get(r + 1, c + 1).clone());
                    }
                }
                m
            }
        }
    }

    /// Apply this operator to a matrix from the left, in place, touching
    /// only the level rows. Equivalent to `embed().mul(m)` but O(levels * cols).
    pub fn apply_left(&self, m: &mut RingMatrix) {
        assert_eq!(m.rows(), self.dim, "generator/matrix dimension mismatch");
        match self.kind {
            GenKind::GlobalIH => {
                let h = RingScalar::inv_sqrt2();
                for b in 0..self.dim / 2 {
                    for c in 1..=m.cols() {
                        let x = m.get(2 * b + 1, c).clone();
                        let y = m.get(2 * b + 2, c).clone();
                        m.set(2 * b + 1, c, (x.clone() + y.clone()) * h.clone());
                        m.set(2 * b + 2, c, (x - y) * h.clone());
                    }
                }
            }
            GenKind::GlobalOmega => {
                let w = RingScalar::omega();
                for r in 1..=m.rows() {
                    for c in 1..=m.cols() {
                        let v = m.get(r, c) * &w;
                        m.set(r, c, v);
                    }
                }
            }
            _ => {
                let kernel = self.kind.kernel();
                let k = self.levels.len();
                for c in 1..=m.cols() {
                    let old: Vec<RingScalar> =
                        self.levels.iter().map(|&l| m.get(l, c).clone()).collect();
                    if old.iter().all(|o| o.is_zero()) {
                        continue;
                    }
                    for r in 0..k {
                        let mut acc = RingScalar::zero();
                        for (j, o) in old.iter().enumerate() {
                            if !o.is_zero() {
                                acc = acc + kernel.get(r + 1, j + 1) * o;
                            }
                        }
                        m.set(self.levels[r], c, acc);
                    }
                }
            }
        }
    }

    /// Serialize one generator line of the word text format.
    pub fn serialize(&self) -> String {
        let mut s = self.kind.name().to_string();
        for l in &self.levels {
            s.push(' ');
            s.push_str(&l.to_string());
        }
        match self.kind {
            GenKind::I4 { pow } | GenKind::Iz2 { pow } => {
                s.push_str(&format!(" ^{pow}"));
            }
            _ => {}
        }
        s
    }
}

// ---------------------------------------------------------------------------
// Generator words
// ---------------------------------------------------------------------------

/// An ordered list of multi-level operators with a common dimension.
///
/// The product is `G_1 * G_2 * ... * G_l` as written, so the *last* element
/// acts first when the word is applied to a matrix or vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorWord {
    pub dim: usize,
    pub gens: Vec<Generator>,
}

impl GeneratorWord {
    pub fn new(dim: usize) -> Self {
        GeneratorWord {
            dim,
            gens: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// The exact product `G_1 * ... * G_l`.
    pub fn product(&self) -> RingMatrix {
        self.apply_to(&RingMatrix::identity(self.dim))
    }

    /// `product() * m` without materializing embeddings.
    pub fn apply_to(&self, m: &RingMatrix) -> RingMatrix {
        let mut out = m.clone();
        for g in self.gens.iter().rev() {
            g.apply_left(&mut out);
        }
        out
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("gens dim={}\n", self.dim);
        for g in &self.gens {
            out.push_str(&g.serialize());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, LinalgError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| LinalgError::Parse("empty word file".into()))?;
        let dim: usize = header
            .trim()
            .strip_prefix("gens dim=")
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| LinalgError::Parse(format!("expected `gens dim=N`, got `{header}`")))?;
        let mut word = GeneratorWord::new(dim);
        for (lineno, line) in lines.enumerate() {
            let mut levels = Vec::new();
            let mut pow: Option<u8> = None;
            let mut toks = line.split_whitespace();
            let name = toks.next().unwrap();
            for t in toks {
                if let Some(p) = t.strip_prefix('^') {
                    pow = Some(p.parse().map_err(|_| {
                        LinalgError::Parse(format!("line {}: bad exponent `{t}`", lineno + 2))
                    })?);
                } else {
                    levels.push(t.parse().map_err(|_| {
                        LinalgError::Parse(format!("line {}: bad level `{t}`", lineno + 2))
                    })?);
                }
            }
            let kind = match name {
                "NEG1" => GenKind::Neg1,
                "X2" => GenKind::X2,
                "H2" => GenKind::H2,
                "F2" => GenKind::F2,
                "WH2" => GenKind::Wh2,
                "HH4" => GenKind::Hh4,
                "I4" => GenKind::I4 {
                    pow: pow.unwrap_or(1) % 4,
                },
                "IZ2" => GenKind::Iz2 {
                    pow: pow.unwrap_or(1) % 4,
                },
                "IX2" => GenKind::Ix2,
                "XZ2" => GenKind::Xz2,
                "ZX2" => GenKind::Zx2,
                "FZ2" => GenKind::Fz2,
                "ZF2" => GenKind::Zf2,
                "WSH2" => GenKind::Wsh2,
                "WHS2" => GenKind::Whs2,
                "Z2" => GenKind::Z2,
                "GLOBAL_IH" => GenKind::GlobalIH,
                "GLOBAL_OMEGA" => GenKind::GlobalOmega,
                other => {
                    return Err(LinalgError::Parse(format!(
                        "line {}: unknown generator `{other}`",
                        lineno + 2
                    )))
                }
            };
            word.gens.push(
                Generator::new(kind, levels, dim).map_err(|e| LinalgError::Parse(e.to_string()))?,
            );
        }
        Ok(word)
    }
}

/// `H` as a 2x2 matrix.
pub fn mat_h() -> RingMatrix {
    GenKind::H2.kernel()
}

/// `F` as a 2x2 matrix.
pub fn mat_f() -> RingMatrix {
    GenKind::F2.kernel()
}

/// `H (x) H` as a 4x4 matrix.
pub fn mat_hh() -> RingMatrix {
    GenKind::Hh4.kernel()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn embed_examples() {
        // X_[1,3] at n = 3 swaps components 1 and 3.
        let g = Generator::new(GenKind::X2, vec![1, 3], 3).unwrap();
        let m = g.embed();
        let mut expect = RingMatrix::zero(3, 3);
        expect.set(1, 3, RingScalar::one());
        expect.set(3, 1, RingScalar::one());
        expect.set(2, 2, RingScalar::one());
        assert_eq!(m, expect);

        // (H x H)_[1,2,3,4] at n = 4 is H x H itself.
        let g = Generator::new(GenKind::Hh4, vec![1, 2, 3, 4], 4).unwrap();
        assert_eq!(g.embed(), mat_hh());

        // Two-level embedding puts kernel entries at the level positions.
        let g = Generator::new(GenKind::F2, vec![1, 3], 3).unwrap();
        let m = g.embed();
        let f = mat_f();
        assert_eq!(m.get(1, 1), f.get(1, 1));
        assert_eq!(m.get(1, 3), f.get(1, 2));
        assert_eq!(m.get(3, 1), f.get(2, 1));
        assert_eq!(m.get(3, 3), f.get(2, 2));
        assert_eq!(m.get(2, 2), &RingScalar::one());
    }

    #[test]
    fn embed_extract_round_trip() {
        let g = Generator::new(GenKind::Wh2, vec![2, 4], 5).unwrap();
        let m = g.embed();
        let kernel = GenKind::Wh2.kernel();
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(m.get(g.levels[r], g.levels[c]), kernel.get(r + 1, c + 1));
            }
        }
        assert!(m.is_unitary());
    }

    #[test]
    fn generator_validation() {
        assert!(Generator::new(GenKind::X2, vec![1, 1], 3).is_err());
        assert!(Generator::new(GenKind::X2, vec![1], 3).is_err());
        assert!(Generator::new(GenKind::X2, vec![1, 4], 3).is_err());
    }

    #[test]
    fn lde_examples() {
        assert_eq!(mat_hh().lde(LdeBase::TwoOverZ).unwrap(), 1);
        assert_eq!(mat_h().lde(LdeBase::Sqrt2OverZsqrt2).unwrap(), 1);
        assert_eq!(mat_h().lde(LdeBase::Sqrt2OverZ).unwrap(), 1);

        // (1+i)/2 has (1+i)-lde 1: (1+i)^2/2 = i.
        let x = (RingScalar::one() + RingScalar::i()) * RingScalar::half();
        let m = RingMatrix::new(1, 1, vec![x]);
        assert_eq!(m.lde(LdeBase::OnePlusI).unwrap(), 1);

        // Outside-ring error.
        let m = RingMatrix::new(1, 1, vec![RingScalar::omega()]);
        assert!(m.lde(LdeBase::TwoOverZ).is_err());
    }

    #[test]
    fn lde_minimality() {
        for (m, base) in [
            (mat_hh(), LdeBase::TwoOverZ),
            (mat_h(), LdeBase::Sqrt2OverZsqrt2),
            (mat_f(), LdeBase::ISqrt2),
        ] {
            let q = m.lde(base).unwrap();
            assert!(m.is_exponent_for(base, q));
            assert!(q == 0 || !m.is_exponent_for(base, q - 1));
        }
    }

    #[test]
    fn unitary_and_products() {
        assert!(mat_f().is_unitary());
        assert!(mat_h().mul(&mat_h()).is_identity());
        // dagger(S) = diag(1, -i)
        let s = RingMatrix::new(
            2,
            2,
            vec![
                RingScalar::one(),
                RingScalar::zero(),
                RingScalar::zero(),
                RingScalar::i(),
            ],
        );
        let sd = s.dagger();
        assert_eq!(sd.get(2, 2), &(-RingScalar::i()));
    }

    #[test]
    fn det_examples() {
        assert_eq!(mat_h().det_exact(), -RingScalar::one());
        assert_eq!(mat_f().det_exact(), -RingScalar::one());

        // CCX as an 8x8 permutation with a single transposition.
        let g = Generator::new(GenKind::X2, vec![7, 8], 8).unwrap();
        assert_eq!(g.embed().det_exact(), -RingScalar::one());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(mat_hh().classify(), RingTag::D);
        assert_eq!(mat_h().classify(), RingTag::ZOverSqrt2);
        assert_eq!(mat_f().classify(), RingTag::Disqrt2);

        // CH has mixed sqrt(2)-parities, so it is real but not super-integral.
        let h = mat_h();
        let mut ch = RingMatrix::identity(4);
        for r in 0..2 {
            for c in 0..2 {
                ch.set(3 + r, 3 + c, h.get(r + 1, c + 1).clone());
            }
        }
        assert_eq!(ch.classify(), RingTag::Dsqrt2);

        // A permutation matrix resolves to the meet, D.
        let p = Generator::new(GenKind::X2, vec![1, 2], 4).unwrap().embed();
        assert_eq!(p.classify(), RingTag::D);

        // w * I_2 is super-Gaussian.
        let w = RingMatrix::identity(2).scale(&RingScalar::omega());
        assert_eq!(w.classify(), RingTag::ZiOverSqrt2);

        // T = diag(1, w) has mixed parities: full Domega.
        let t = RingMatrix::new(
            2,
            2,
            vec![
                RingScalar::one(),
                RingScalar::zero(),
                RingScalar::zero(),
                RingScalar::omega(),
            ],
        );
        assert_eq!(t.classify(), RingTag::Domega);
    }

    #[test]
    fn word_format_round_trip() {
        let mut w = GeneratorWord::new(16);
        w.gens
            .push(Generator::new(GenKind::Hh4, vec![1, 2, 3, 4], 16).unwrap());
        w.gens
            .push(Generator::new(GenKind::Neg1, vec![5], 16).unwrap());
        w.gens
            .push(Generator::new(GenKind::I4 { pow: 2 }, vec![3], 16).unwrap());
        w.gens
            .push(Generator::new(GenKind::Iz2 { pow: 3 }, vec![1, 16], 16).unwrap());
        w.gens
            .push(Generator::new(GenKind::GlobalIH, vec![], 16).unwrap());
        let text = w.serialize();
        let w2 = GeneratorWord::parse(&text).unwrap();
        assert_eq!(w, w2);
        assert_eq!(text, w2.serialize());
    }

    #[test]
    fn matrix_format_round_trip() {
        let m = mat_f();
        let text = m.serialize();
        let m2 = RingMatrix::parse(&text).unwrap();
        assert_eq!(m, m2);
        assert_eq!(text, m2.serialize());
    }

    #[test]
    fn apply_left_matches_embed() {
        for kind in [GenKind::Hh4, GenKind::Z2] {
            let g = Generator::new(kind, vec![1, 3, 4, 6], 6).unwrap();
            let mut m = RingMatrix::identity(6);
            g.apply_left(&mut m);
            assert_eq!(m, g.embed());
        }
        let g = Generator::new(GenKind::GlobalIH, vec![], 6).unwrap();
        let mut m = RingMatrix::identity(6);
        g.apply_left(&mut m);
        assert_eq!(m, g.embed());
    }

    #[test]
    fn global_ih_is_block_diag_h() {
        let g = Generator::new(GenKind::GlobalIH, vec![], 4).unwrap();
        let m = g.embed();
        let expect = RingMatrix::identity(2).kron(&mat_h());
        assert_eq!(m, expect);
        assert!(Generator::new(GenKind::GlobalIH, vec![], 3).is_err());
    }

    #[test]
    fn sqrt2_exponent_parity_is_invariant() {
        // For nonzero super-integral matrices, valid exponents in
        // [lde, lde+4] are exactly lde, lde+2, lde+4.
        for m in [mat_h(), RingMatrix::identity(3), mat_h().kron(&mat_h())] {
            let q = m.lde(LdeBase::Sqrt2OverZ).unwrap();
            for d in 0..=4u32 {
                let valid = m.is_exponent_for(LdeBase::Sqrt2OverZ, q + d);
                assert_eq!(valid, d % 2 == 0, "exponent {} validity mismatch", q + d);
            }
        }
    }

    #[test]
    fn all_kernels_are_unitary_over_domega() {
        for kind in [
            GenKind::Neg1,
            GenKind::X2,
            GenKind::H2,
            GenKind::F2,
            GenKind::Wh2,
            GenKind::Hh4,
            GenKind::I4 { pow: 1 },
            GenKind::Iz2 { pow: 1 },
            GenKind::Ix2,
            GenKind::Xz2,
            GenKind::Zx2,
            GenKind::Fz2,
            GenKind::Zf2,
            GenKind::Wsh2,
            GenKind::Whs2,
            GenKind::Z2,
        ] {
            assert!(
                kind.kernel().is_unitary(),
                "{} kernel not unitary",
                kind.name()
            );
        }
    }

    fn arb_unit_scalar() -> impl Strategy<Value = RingScalar> {
        (0i64..8).prop_map(RingScalar::omega_pow)
    }

    proptest! {
        #[test]
        fn det_is_multiplicative(seed in proptest::collection::vec(arb_unit_scalar(), 6),
                                 swaps in proptest::collection::vec((0usize..3, 0usize..3), 0..4)) {
            // Two small exact matrices built from monomial factors, so the
            // determinants stay unit-sized and Bareiss stays fast.
            let mut a = RingMatrix::zero(3, 3);
            let mut b = RingMatrix::zero(3, 3);
            for j in 0..3 {
                a.set(j + 1, j + 1, seed[j].clone());
                b.set(j + 1, j + 1, seed[3 + j].clone());
            }
            let mut perm = RingMatrix::identity(3);
            for (x, y) in swaps {
                if x != y {
                    let g = Generator::new(GenKind::X2, vec![x + 1, y + 1], 3).unwrap();
                    g.apply_left(&mut perm);
                }
            }
            let a = a.mul(&perm);
            prop_assert_eq!(a.mul(&b).det_exact(), a.det_exact() * b.det_exact());
        }

        #[test]
        fn classify_is_monotone_under_generators(kind in 0usize..4) {
            // Multiplying by a generator from a gate set never escapes the
            // gate set's ring.
            let dim = 4usize;
            let (g, tag) = match kind {
                0 => (Generator::new(GenKind::Hh4, vec![1, 2, 3, 4], dim).unwrap(), RingTag::D),
                1 => (Generator::new(GenKind::H2, vec![1, 3], dim).unwrap(), RingTag::Dsqrt2),
                2 => (Generator::new(GenKind::F2, vec![2, 4], dim).unwrap(), RingTag::Disqrt2),
                _ => (Generator::new(GenKind::Wh2, vec![1, 4], dim).unwrap(), RingTag::Di),
            };
            let mut m = g.embed();
            for _ in 0..3 {
                g.apply_left(&mut m);
                prop_assert!(m.classify().leq(tag));
            }
        }
    }
}
