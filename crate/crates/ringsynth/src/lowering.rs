//! Lowering of generator words to gate-level circuits over the six
//! restricted gate sets.
//!
//! Every construction here bottoms out in the declared gates of the target
//! set (plus, for the `Int` set, the convention that `H` gates always come
//! in adjacent pairs realizing `H (x) H`). Multi-level operators are placed
//! by routing their level indices to the top block with `X`/`CX` circuits
//! (or two-level `X` transpositions), applying a fully-controlled kernel
//! there, and unrouting. Fully-controlled kernels use the clean-ancilla
//! sandwich (multi-controlled `X` onto the ancilla, the singly-controlled
//! kernel from the ancilla, multi-controlled `X` back); the ancilla-free
//! mode uses the determinant-1 two-level constructions instead.

use thiserror::Error;

use crate::circuit::{AncillaKind, Circuit, Gate, GateName};
use crate::linalg::{GenKind, Generator, GeneratorWord, RingMatrix};
use crate::rings::RingTag;

/// The six restricted gate sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateSet {
    /// `{X, CX, CCX, H(x)H}` -- unitaries over `D`.
    Int,
    /// `{X, CX, CCX, H}` -- unitaries of the form `W / sqrt(2)^q`, `W` over `Z`.
    SupInt,
    /// `{X, CX, CCX, H, CH}` -- unitaries over `D[sqrt(2)]`.
    Real,
    /// `{X, CX, CCX, F}` -- unitaries over `D[i*sqrt(2)]`.
    Imag,
    /// `{X, CX, CCX, wH, S}` -- unitaries over `D[i]`.
    Gauss,
    /// `{X, CX, CCX, H, S}` -- `W / sqrt(2)^q`, `W` over `Z[i]`.
    SupGauss,
}

/// Ancilla discipline for lowering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AncillaMode {
    /// One clean ancilla, always the highest-index wire.
    OneClean,
    /// No ancilla at all.
    None,
}

impl GateSet {
    pub const ALL: [GateSet; 6] = [
        GateSet::Int,
        GateSet::SupInt,
        GateSet::Real,
        GateSet::Imag,
        GateSet::Gauss,
        GateSet::SupGauss,
    ];

    /// The ring characterizing this gate set's unitaries.
    pub fn ring(self) -> RingTag {
        match self {
            GateSet::Int => RingTag::D,
            GateSet::SupInt => RingTag::ZOverSqrt2,
            GateSet::Real => RingTag::Dsqrt2,
            GateSet::Imag => RingTag::Disqrt2,
            GateSet::Gauss => RingTag::Di,
            GateSet::SupGauss => RingTag::ZiOverSqrt2,
        }
    }

    /// The minimal gate set for a matrix classification, if any.
    pub fn minimal_for(tag: RingTag) -> Option<GateSet> {
        match tag {
            RingTag::D => Some(GateSet::Int),
            RingTag::ZOverSqrt2 => Some(GateSet::SupInt),
            RingTag::Dsqrt2 => Some(GateSet::Real),
            RingTag::Disqrt2 => Some(GateSet::Imag),
            RingTag::Di => Some(GateSet::Gauss),
            RingTag::ZiOverSqrt2 => Some(GateSet::SupGauss),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateSet::Int => "int",
            GateSet::SupInt => "supint",
            GateSet::Real => "real",
            GateSet::Imag => "imag",
            GateSet::Gauss => "gauss",
            GateSet::SupGauss => "supgauss",
        }
    }

    /// The generating gates, for display.
    pub fn gates_text(self) -> &'static str {
        match self {
            GateSet::Int => "{X,CX,CCX,HH}",
            GateSet::SupInt => "{X,CX,CCX,H}",
            GateSet::Real => "{X,CX,CCX,H,CH}",
            GateSet::Imag => "{X,CX,CCX,F}",
            GateSet::Gauss => "{X,CX,CCX,wH,S}",
            GateSet::SupGauss => "{X,CX,CCX,H,S}",
        }
    }

    pub fn from_flag(s: &str) -> Option<GateSet> {
        Some(match s {
            "int" => GateSet::Int,
            "supint" => GateSet::SupInt,
            "real" => GateSet::Real,
            "imag" => GateSet::Imag,
            "gauss" => GateSet::Gauss,
            "supgauss" => GateSet::SupGauss,
            _ => return None,
        })
    }

    /// Whether every entry of the matrix lies in this gate set's ring
    /// (with a single common exponent for the super forms). This is the
    /// right test for forcing a gate set: a matrix may belong to several
    /// incomparable rings at once.
    pub fn contains_matrix(self, m: &RingMatrix) -> bool {
        match self {
            GateSet::Int => m.entries().iter().all(|e| e.in_d()),
            GateSet::SupInt => m.superintegral_exponent().is_some(),
            GateSet::Real => m.entries().iter().all(|e| e.in_d_sqrt2()),
            GateSet::Imag => m.entries().iter().all(|e| e.in_d_isqrt2()),
            GateSet::Gauss => m.entries().iter().all(|e| e.in_d_i()),
            GateSet::SupGauss => m.supergaussian_exponent().is_some(),
        }
    }

    /// Gate names this set's lowered circuits may contain.
    pub fn native_gates(self) -> &'static [GateName] {
        match self {
            GateSet::Int | GateSet::SupInt => {
                &[GateName::X, GateName::Cx, GateName::Ccx, GateName::H]
            }
            GateSet::Real => &[
                GateName::X,
                GateName::Cx,
                GateName::Ccx,
                GateName::H,
                GateName::Ch,
            ],
            GateSet::Imag => &[GateName::X, GateName::Cx, GateName::Ccx, GateName::F],
            GateSet::Gauss => &[
                GateName::X,
                GateName::Cx,
                GateName::Ccx,
                GateName::Wh,
                GateName::S,
            ],
            GateSet::SupGauss => &[
                GateName::X,
                GateName::Cx,
                GateName::Ccx,
                GateName::H,
                GateName::S,
            ],
        }
    }

    /// Check gate membership: every gate must be native, and for `Int` the
    /// `H` gates must come in adjacent pairs on distinct wires.
    pub fn allows(self, c: &Circuit) -> bool {
        if !c
            .gates
            .iter()
            .all(|g| self.native_gates().contains(&g.name))
        {
            return false;
        }
        if self == GateSet::Int {
            let mut i = 0;
            while i < c.gates.len() {
                if c.gates[i].name == GateName::H {
                    if i + 1 >= c.gates.len()
                        || c.gates[i + 1].name != GateName::H
                        || c.gates[i + 1].wires == c.gates[i].wires
                    {
                        return false;
                    }
                    i += 2;
                } else {
                    i += 1;
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LoweringError {
    #[error("dimension {0} is not a power of two")]
    DimensionNotPowerOfTwo(usize),
    #[error("generator {gen} is outside the {gs} gate set's ring")]
    OutsideRing { gen: String, gs: &'static str },
    #[error("unsupported combination: {gen} over {gs} at n={n} {detail}")]
    Unsupported {
        gen: String,
        gs: &'static str,
        n: usize,
        detail: String,
    },
    #[error("a dirty ancilla is required for a multi-controlled X with {0} controls")]
    NeedDirtyAncilla(usize),
}

fn log2_exact(dim: usize) -> Result<usize, LoweringError> {
    if dim.is_power_of_two() && dim >= 2 {
        Ok(dim.trailing_zeros() as usize)
    } else {
        Err(LoweringError::DimensionNotPowerOfTwo(dim))
    }
}

// ---------------------------------------------------------------------------
// Gate emission helpers
// ---------------------------------------------------------------------------

/// Gate-list builder working over `n` data wires plus an optional clean
/// ancilla wire (always index `n + 1`).
struct Lowerer {
    gs: GateSet,
    n: usize,
    ancilla: Option<usize>,
    gates: Vec<Gate>,
}

impl Lowerer {
    fn new(gs: GateSet, n: usize, mode: AncillaMode) -> Self {
        let ancilla = match mode {
            AncillaMode::OneClean => Some(n + 1),
            AncillaMode::None => None,
        };
        Lowerer {
            gs,
            n,
            ancilla,
            gates: Vec::new(),
        }
    }

    fn push(&mut self, name: GateName, wires: &[usize]) {
        self.gates
            .push(Gate::new(name, wires.to_vec()).expect("valid gate"));
    }

    fn x(&mut self, w: usize) {
        self.push(GateName::X, &[w]);
    }

    fn cx(&mut self, c: usize, t: usize) {
        self.push(GateName::Cx, &[c, t]);
    }

    fn ccx(&mut self, c1: usize, c2: usize, t: usize) {
        self.push(GateName::Ccx, &[c1, c2, t]);
    }

    fn h(&mut self, w: usize) {
        self.push(GateName::H, &[w]);
    }

    fn s_pow(&mut self, w: usize, m: u32) {
        for _ in 0..(m % 4) {
            self.push(GateName::S, &[w]);
        }
    }

    fn f_pow(&mut self, w: usize, m: u32) {
        for _ in 0..(m % 8) {
            self.push(GateName::F, &[w]);
        }
    }

    /// `wH` (or its expansion `SHSHS` over the super-Gaussian set).
    fn wh(&mut self, w: usize) {
        match self.gs {
            GateSet::SupGauss => {
                for name in [
                    GateName::S,
                    GateName::H,
                    GateName::S,
                    GateName::H,
                    GateName::S,
                ] {
                    self.push(name, &[w]);
                }
            }
            _ => self.push(GateName::Wh, &[w]),
        }
    }

    /// `(wH)^dag = w^-1 H`.
    fn wh_dg(&mut self, w: usize) {
        match self.gs {
            GateSet::SupGauss => {
                // (SHSHS)^dag = S^3 H S^3 H S^3
                for _ in 0..3 {
                    self.push(GateName::S, &[w]);
                }
                self.push(GateName::H, &[w]);
                for _ in 0..3 {
                    self.push(GateName::S, &[w]);
                }
                self.push(GateName::H, &[w]);
                for _ in 0..3 {
                    self.push(GateName::S, &[w]);
                }
            }
            _ => {
                for _ in 0..7 {
                    self.push(GateName::Wh, &[w]);
                }
            }
        }
    }

    /// An adjacent `H` pair on two distinct wires (the `H (x) H` gate).
    fn hh(&mut self, a: usize, b: usize) {
        self.h(a);
        self.h(b);
    }

    /// Single-qubit `Z` over the current set. For `Int`, a spare wire must
    /// carry the second half of the `H (x) H` pair; it is otherwise
    /// untouched.
    fn z_on(&mut self, t: usize, spare: Option<usize>) -> Result<(), LoweringError> {
        match self.gs {
            GateSet::Int | GateSet::SupInt => {
                let p = spare.ok_or(LoweringError::NeedDirtyAncilla(0))?;
                self.hh(t, p);
                self.x(t);
                self.hh(t, p);
            }
            GateSet::Real => {
                self.h(t);
                self.x(t);
                self.h(t);
            }
            GateSet::Imag => {
                // Z = F^6 X F^2 as an operator.
                self.f_pow(t, 2);
                self.x(t);
                self.f_pow(t, 6);
            }
            GateSet::Gauss | GateSet::SupGauss => self.s_pow(t, 2),
        }
        Ok(())
    }

    /// Single-qubit `ZXF` (the involution `Z * X * F`), imag set only.
    fn zxf(&mut self, t: usize) -> Result<(), LoweringError> {
        self.push(GateName::F, &[t]);
        self.x(t);
        self.z_on(t, None)
    }

    // --- multi-controlled X with one dirty ancilla -------------------------------

    /// `C^k X`: native for `k <= 2`, otherwise the recursive splitting that
    /// uses a single dirty ancilla.
    fn mcx(
        &mut self,
        controls: &[usize],
        t: usize,
        dirty: Option<usize>,
    ) -> Result<(), LoweringError> {
        match controls.len() {
            0 => self.x(t),
            1 => self.cx(controls[0], t),
            2 => self.ccx(controls[0], controls[1], t),
            m => {
                let d = dirty.ok_or(LoweringError::NeedDirtyAncilla(m))?;
                debug_assert!(!controls.contains(&d) && d != t);
                let half = m.div_ceil(2);
                let (a, b) = controls.split_at(half);
                let mut bd: Vec<usize> = b.to_vec();
                bd.push(d);
                // a -> d may use t as dirty; b+d -> t may use a[0].
                for _ in 0..2 {
                    self.mcx(a, d, Some(t))?;
                    self.mcx(&bd, t, Some(a[0]))?;
                }
            }
        }
        Ok(())
    }

    /// Pattern-controlled X: controls with explicit polarities.
    fn mcx_pattern(
        &mut self,
        pattern: &[(usize, bool)],
        t: usize,
        dirty: Option<usize>,
    ) -> Result<(), LoweringError> {
        for &(w, pol) in pattern {
            if !pol {
                self.x(w);
            }
        }
        let controls: Vec<usize> = pattern.iter().map(|&(w, _)| w).collect();
        self.mcx(&controls, t, dirty)?;
        for &(w, pol) in pattern {
            if !pol {
                self.x(w);
            }
        }
        Ok(())
    }

    // --- routing ------------------------------------------------------------------

    /// Route two basis states (0-based) so that `a` lands on the state with
    /// all wires 1 except some target wire `t`, and `b` lands on all-ones.
    /// Returns the route gates (emitted by the caller) and `t`.
    fn plan_pair_route(&self, a: usize, b: usize) -> (Vec<Gate>, usize) {
        let n = self.n;
        let bit = |s: usize, w: usize| (s >> (n - w)) & 1;
        let mut gates = Vec::new();
        let mut alpha = a;
        let mut beta = b;
        // Highest-index wire where they differ.
        let t = (1..=n)
            .rev()
            .find(|&w| bit(alpha, w) != bit(beta, w))
            .expect("distinct states");
        let tmask = 1usize << (n - t);
        if bit(alpha, t) == 1 {
            gates.push(Gate::new(GateName::X, vec![t]).unwrap());
            alpha ^= tmask;
            beta ^= tmask;
        }
        for w in 1..=n {
            if w != t && bit(alpha, w) != bit(beta, w) {
                gates.push(Gate::new(GateName::Cx, vec![t, w]).unwrap());
                // Only beta has wire t set.
                beta ^= 1usize << (n - w);
            }
        }
        for w in 1..=n {
            if w != t && bit(alpha, w) == 0 {
                gates.push(Gate::new(GateName::X, vec![w]).unwrap());
                alpha ^= 1usize << (n - w);
                beta ^= 1usize << (n - w);
            }
        }
        debug_assert_eq!(alpha, ((1usize << n) - 1) ^ tmask);
        debug_assert_eq!(beta, (1usize << n) - 1);
        (gates, t)
    }

    fn emit_gates(&mut self, gates: &[Gate]) {
        self.gates.extend_from_slice(gates);
    }

    fn emit_gates_rev(&mut self, gates: &[Gate]) {
        // Route circuits consist of self-inverse gates; reversing the order
        // inverts the product.
        for g in gates.iter().rev() {
            self.gates.push(g.clone());
        }
    }

    /// Two-level `X` transposition between basis states `x` and `y`
    /// (0-based), as a Gray-code conjugation chain of pattern-controlled
    /// `X` gates.
    fn two_level_x(
        &mut self,
        x: usize,
        y: usize,
        dirty: Option<usize>,
    ) -> Result<(), LoweringError> {
        let n = self.n;
        let bit = |s: usize, w: usize| (s >> (n - w)) & 1;
        let diff: Vec<usize> = (1..=n).filter(|&w| bit(x, w) != bit(y, w)).collect();
        // Gray path x = g0, ..., gm = y.
        let mut path = vec![x];
        let mut cur = x;
        for &w in &diff {
            cur ^= 1usize << (n - w);
            path.push(cur);
        }
        // (x y) = C1 ... C(m-1) M C(m-1) ... C1 with Ci and M adjacent
        // transpositions along the path.
        let emit_adjacent = |lw: &mut Self, u: usize, v: usize| -> Result<(), LoweringError> {
            let w = (1..=n)
                .find(|&w| bit(u, w) != bit(v, w))
                .expect("adjacent states");
            let pattern: Vec<(usize, bool)> = (1..=n)
                .filter(|&s| s != w)
                .map(|s| (s, bit(u, s) == 1))
                .collect();
            lw.mcx_pattern(&pattern, w, dirty)
        };
        for i in 0..path.len() - 2 {
            emit_adjacent(self, path[i], path[i + 1])?;
        }
        emit_adjacent(self, path[path.len() - 2], path[path.len() - 1])?;
        for i in (0..path.len() - 2).rev() {
            emit_adjacent(self, path[i], path[i + 1])?;
        }
        Ok(())
    }

    /// Route four basis states onto the top block: state `k` lands on the
    /// state with all control wires 1 and the two lowest wires carrying `k`
    /// in binary. Returns the gates; the caller emits and un-emits them.
    fn plan_quad_route(
        &mut self,
        states: [usize; 4],
        dirty: Option<usize>,
    ) -> Result<Vec<Gate>, LoweringError> {
        let n = self.n;
        let saved = std::mem::take(&mut self.gates);
        let mut cur = states;
        let top = (1usize << n) - 1;
        for k in 0..4usize {
            let target = top ^ (3 - k); // wires n-1, n carry k in binary
            let from = cur[k];
            if from != target {
                self.two_level_x(from, target, dirty)?;
                for c in cur.iter_mut().skip(k + 1) {
                    if *c == target {
                        *c = from;
                    }
                }
                cur[k] = target;
            }
        }
        let gates = std::mem::replace(&mut self.gates, saved);
        Ok(gates)
    }

    // --- fully-controlled kernels -------------------------------------------------

    /// `Z` on `t` controlled by `controls` (all-ones polarity), conjugating
    /// a multi-controlled `X` by the set's Hadamard analogue.
    fn fc_z(
        &mut self,
        controls: &[usize],
        t: usize,
        dirty: Option<usize>,
    ) -> Result<(), LoweringError> {
        match self.gs {
            GateSet::Int | GateSet::SupInt => {
                let p = dirty.ok_or(LoweringError::NeedDirtyAncilla(controls.len()))?;
                self.hh(t, p);
                self.mcx(controls, t, Some(p))?;
                self.hh(t, p);
            }
            GateSet::Real | GateSet::SupGauss => {
                self.h(t);
                self.mcx(controls, t, dirty)?;
                self.h(t);
            }
            GateSet::Imag => {
                self.f_pow(t, 2);
                self.mcx(controls, t, dirty)?;
                self.f_pow(t, 6);
            }
            GateSet::Gauss => {
                self.wh(t);
                self.mcx(controls, t, dirty)?;
                self.wh_dg(t);
            }
        }
        Ok(())
    }

    /// Singly-controlled `S` using one dirty wire: `S` and `wH` gates on the
    /// dirty wire conjugated by three doubly-controlled `X` gates. The gate
    /// sequence applies a global phase `i` on the fired block, independent
    /// of the dirty wire's state.
    fn cs(&mut self, c: usize, t: usize, d: usize) -> Result<(), LoweringError> {
        self.ccx(c, t, d);
        self.s_pow(d, 3);
        self.wh(d);
        self.ccx(c, t, d);
        self.wh_dg(d);
        self.ccx(c, t, d);
        self.s_pow(d, 1);
        Ok(())
    }

    fn cs_dg(&mut self, c: usize, t: usize, d: usize) -> Result<(), LoweringError> {
        self.s_pow(d, 3);
        self.ccx(c, t, d);
        self.wh(d);
        self.ccx(c, t, d);
        self.wh_dg(d);
        self.s_pow(d, 1);
        self.ccx(c, t, d);
        Ok(())
    }

    /// Singly-controlled `wH` from three controlled `S` and bare `wH`.
    fn cwh(&mut self, c: usize, t: usize, d: usize) -> Result<(), LoweringError> {
        self.cs(c, t, d)?;
        self.wh(t);
        self.cs(c, t, d)?;
        self.wh_dg(t);
        self.cs(c, t, d)
    }

    /// Singly-controlled `F`, ancilla-free on two wires.
    fn cf(&mut self, c: usize, t: usize) -> Result<(), LoweringError> {
        self.cx(c, t);
        // CZ over the imag set
        self.f_pow(t, 2);
        self.cx(c, t);
        self.f_pow(t, 6);
        // X Z X F
        self.x(t);
        self.z_on(t, None)?;
        self.x(t);
        self.push(GateName::F, &[t]);
        self.cx(c, t);
        self.z_on(t, None)?;
        self.x(t);
        self.push(GateName::F, &[t]);
        self.x(t);
        Ok(())
    }

    fn cf_pow(&mut self, c: usize, t: usize, m: u32) -> Result<(), LoweringError> {
        for _ in 0..(m % 8) {
            self.cf(c, t)?;
        }
        Ok(())
    }

    /// The clean-ancilla sandwich: `C^k W` from a `CW` emitter, using the
    /// clean ancilla when there are two or more controls.
    fn sandwich<FW, CW>(
        &mut self,
        controls: &[usize],
        t: usize,
        plain: FW,
        controlled: CW,
    ) -> Result<(), LoweringError>
    where
        FW: Fn(&mut Self) -> Result<(), LoweringError>,
        CW: Fn(&mut Self, usize, Option<usize>) -> Result<(), LoweringError>,
    {
        match controls.len() {
            0 => plain(self),
            1 => controlled(self, controls[0], self.ancilla),
            _ => {
                let anc = self
                    .ancilla
                    .ok_or(LoweringError::NeedDirtyAncilla(controls.len()))?;
                self.mcx(controls, anc, Some(t))?;
                controlled(self, anc, Some(controls[0]))?;
                self.mcx(controls, anc, Some(t))?;
                Ok(())
            }
        }
    }

    // --- ancilla-free determinant-1 kernels -----------------------------------------

    /// Fully-controlled `ZX` (ancilla-free): `X` controlled by all but one
    /// control, interleaved with controlled `F^2` / `F^6` from the remaining
    /// control.
    fn fc_zx(&mut self, controls: &[usize], t: usize) -> Result<(), LoweringError> {
        match controls.split_last() {
            None => {
                self.x(t);
                self.z_on(t, None)?;
            }
            Some((&u, rest)) => {
                self.mcx(rest, t, Some(u))?;
                self.cf_pow(u, t, 2)?;
                self.mcx(rest, t, Some(u))?;
                self.cf_pow(u, t, 6)?;
            }
        }
        Ok(())
    }

    /// Fully-controlled `XZ` (ancilla-free): the adjoint ordering of
    /// [`Self::fc_zx`].
    fn fc_xz(&mut self, controls: &[usize], t: usize) -> Result<(), LoweringError> {
        match controls.split_last() {
            None => {
                self.z_on(t, None)?;
                self.x(t);
            }
            Some((&u, rest)) => {
                self.cf_pow(u, t, 2)?;
                self.mcx(rest, t, Some(u))?;
                self.cf_pow(u, t, 6)?;
                self.mcx(rest, t, Some(u))?;
            }
        }
        Ok(())
    }

    /// `ZXF` on `t` controlled by `controls`, usable with the given dirty
    /// wire for the inner multi-controlled X.
    fn mc_zxf(
        &mut self,
        controls: &[usize],
        t: usize,
        dirty: Option<usize>,
    ) -> Result<(), LoweringError> {
        self.x(t);
        self.zxf(t)?;
        self.mcx(controls, t, dirty)?;
        self.zxf(t)?;
        self.x(t);
        Ok(())
    }

    /// Fully-controlled `ZF` (ancilla-free, `n >= 3` handled via the split
    /// construction; 0 and 1 controls are direct).
    fn fc_zf(&mut self, controls: &[usize], t: usize) -> Result<(), LoweringError> {
        match controls.len() {
            0 => {
                self.push(GateName::F, &[t]);
                self.z_on(t, None)?;
            }
            1 => {
                let u = controls[0];
                self.cf(u, t)?;
                self.f_pow(t, 2);
                self.cx(u, t);
                self.f_pow(t, 6);
            }
            _ => {
                // Lower group: the last two controls (so the inner
                // multi-controlled X stays native); upper group: the rest.
                let split = controls.len() - 2.min(controls.len() - 1);
                let (upper, lower) = controls.split_at(split);
                let v = *controls.last().unwrap();
                let dirty = Some(upper.first().copied().unwrap_or(t));
                self.mcx(upper, t, Some(v))?;
                self.mc_zxf(lower, t, dirty)?;
                self.mcx(upper, t, Some(v))?;
                self.mc_zxf(lower, t, dirty)?;
                // Z on v controlled by all other controls; t is free.
                let others: Vec<usize> = controls.iter().copied().filter(|&w| w != v).collect();
                self.fc_z(&others, v, Some(t))?;
            }
        }
        Ok(())
    }

    /// Fully-controlled `FZ` (ancilla-free).
    fn fc_fz(&mut self, controls: &[usize], t: usize) -> Result<(), LoweringError> {
        match controls.len() {
            0 => {
                self.z_on(t, None)?;
                self.push(GateName::F, &[t]);
            }
            1 => {
                let u = controls[0];
                self.f_pow(t, 2);
                self.cx(u, t);
                self.f_pow(t, 6);
                self.cf(u, t)?;
            }
            _ => {
                let split = controls.len() - 2.min(controls.len() - 1);
                let (upper, lower) = controls.split_at(split);
                let dirty = Some(upper.first().copied().unwrap_or(t));
                self.f_pow(t, 2);
                self.mc_zxf(lower, t, dirty)?;
                self.mcx(upper, t, Some(*controls.last().unwrap()))?;
                self.mc_zxf(lower, t, dirty)?;
                self.mcx(upper, t, Some(*controls.last().unwrap()))?;
                self.fc_xz(controls, t)?;
                self.f_pow(t, 6);
            }
        }
        Ok(())
    }

    /// Fully-controlled `iX` (ancilla-free recursion).
    fn fc_ix(&mut self, controls: &[usize], t: usize) -> Result<(), LoweringError> {
        match controls.len() {
            0 => {
                self.wh(t);
                self.s_pow(t, 2);
                self.wh(t);
            }
            1 => {
                self.s_pow(controls[0], 1);
                self.cx(controls[0], t);
            }
            _ => {
                let (u, lower) = (controls[0], &controls[1..]);
                self.wh(t);
                self.cs_dg(u, t, lower[0])?;
                self.fc_ix(lower, t)?;
                self.cs(u, t, lower[0])?;
                self.fc_neg_ix(lower, t)?;
                self.wh_dg(t);
            }
        }
        Ok(())
    }

    /// Fully-controlled `-iX = (iX)^dag`.
    fn fc_neg_ix(&mut self, controls: &[usize], t: usize) -> Result<(), LoweringError> {
        match controls.len() {
            0 => {
                // -iX = S^3 X S^3 as an operator.
                self.s_pow(t, 3);
                self.x(t);
                self.s_pow(t, 3);
            }
            1 => {
                self.s_pow(controls[0], 3);
                self.cx(controls[0], t);
            }
            _ => {
                // dagger of fc_ix: reverse with each block inverted.
                let (u, lower) = (controls[0], &controls[1..]);
                self.wh(t);
                self.fc_ix(lower, t)?;
                self.cs_dg(u, t, lower[0])?;
                self.fc_neg_ix(lower, t)?;
                self.cs(u, t, lower[0])?;
                self.wh_dg(t);
            }
        }
        Ok(())
    }

    /// Fully-controlled `(iZ)^m` (ancilla-free): conjugate `(iX)^m` by `wH`.
    fn fc_iz(&mut self, controls: &[usize], t: usize, m: u32) -> Result<(), LoweringError> {
        if controls.is_empty() {
            // iZ = X S X S^3 as an operator; repeat m times.
            for _ in 0..(m % 4) {
                self.s_pow(t, 3);
                self.x(t);
                self.s_pow(t, 1);
                self.x(t);
            }
            return Ok(());
        }
        self.wh(t);
        for _ in 0..(m % 4) {
            self.fc_ix(controls, t)?;
        }
        self.wh_dg(t);
        Ok(())
    }

    /// Fully-controlled `wSH` (ancilla-free for 0 or >= 2 controls; a single
    /// control needs a dirty wire).
    fn fc_wsh(
        &mut self,
        controls: &[usize],
        t: usize,
        spare: Option<usize>,
    ) -> Result<(), LoweringError> {
        match controls.len() {
            0 => {
                self.wh(t);
                self.s_pow(t, 1);
            }
            1 => {
                let c = controls[0];
                let d = spare.ok_or(LoweringError::NeedDirtyAncilla(1))?;
                self.cs(c, t, d)?;
                self.wh(t);
                self.cs(c, t, d)?;
                self.wh_dg(t);
                // CZ tail
                self.wh(t);
                self.cx(c, t);
                self.wh_dg(t);
            }
            _ => {
                let (upper, ulast) = controls.split_at(controls.len() - 1);
                let u = ulast[0];
                self.fc_wsh_dg(upper, t, Some(u))?;
                self.cs_dg(u, t, upper[0])?;
                self.fc_wsh(upper, t, Some(u))?;
                self.cs(u, t, upper[0])?;
                self.fc_iz(controls, t, 1)?;
            }
        }
        Ok(())
    }

    /// Fully-controlled `(wSH)^dag`.
    fn fc_wsh_dg(
        &mut self,
        controls: &[usize],
        t: usize,
        spare: Option<usize>,
    ) -> Result<(), LoweringError> {
        match controls.len() {
            0 => {
                self.s_pow(t, 3);
                self.wh_dg(t);
            }
            1 => {
                let c = controls[0];
                let d = spare.ok_or(LoweringError::NeedDirtyAncilla(1))?;
                // dagger of the 1-control fc_wsh body.
                self.wh(t);
                self.cx(c, t);
                self.wh_dg(t);
                self.wh(t);
                self.cs_dg(c, t, d)?;
                self.wh_dg(t);
                self.cs_dg(c, t, d)?;
            }
            _ => {
                let (upper, ulast) = controls.split_at(controls.len() - 1);
                let u = ulast[0];
                self.fc_iz(controls, t, 3)?;
                self.cs_dg(u, t, upper[0])?;
                self.fc_wsh_dg(upper, t, Some(u))?;
                self.cs(u, t, upper[0])?;
                self.fc_wsh(upper, t, Some(u))?;
            }
        }
        Ok(())
    }

    /// Fully-controlled `wHS` (ancilla-free): conjugate `wSH` by `wH` and
    /// controlled phases per the appendix identity.
    fn fc_whs(
        &mut self,
        controls: &[usize],
        t: usize,
        spare: Option<usize>,
    ) -> Result<(), LoweringError> {
        match controls.len() {
            0 => {
                self.s_pow(t, 1);
                self.wh(t);
            }
            1 => {
                let c = controls[0];
                let d = spare.ok_or(LoweringError::NeedDirtyAncilla(1))?;
                // CZ head, then the controlled wH body.
                self.wh(t);
                self.cx(c, t);
                self.wh_dg(t);
                self.wh(t);
                self.cs(c, t, d)?;
                self.wh_dg(t);
                self.cs(c, t, d)?;
            }
            _ => {
                let (upper, ulast) = controls.split_at(controls.len() - 1);
                let u = ulast[0];
                self.wh(t);
                self.fc_wsh_dg(upper, t, Some(u))?;
                self.cs_dg(u, t, upper[0])?;
                self.fc_wsh(upper, t, Some(u))?;
                self.cs(u, t, upper[0])?;
                self.fc_iz(controls, t, 1)?;
                self.wh_dg(t);
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Public lowering API
// ---------------------------------------------------------------------------

/// Which gate sets may carry a generator kind.
fn kind_allowed(kind: GenKind, gs: GateSet) -> bool {
    use GateSet::*;
    match kind {
        GenKind::Neg1 | GenKind::X2 => true,
        GenKind::Hh4 => matches!(gs, Int | SupInt | Real | SupGauss),
        GenKind::H2 => matches!(gs, Real),
        GenKind::F2 | GenKind::Fz2 | GenKind::Zf2 => matches!(gs, Imag),
        GenKind::Wh2 | GenKind::Wsh2 | GenKind::Whs2 => matches!(gs, Gauss | SupGauss),
        GenKind::I4 { .. } | GenKind::Iz2 { .. } | GenKind::Ix2 => matches!(gs, Gauss | SupGauss),
        GenKind::Xz2 | GenKind::Zx2 | GenKind::Z2 => matches!(gs, Imag | Gauss | SupGauss),
        GenKind::GlobalIH => matches!(gs, SupInt | Real | SupGauss),
        GenKind::GlobalOmega => matches!(gs, SupGauss),
    }
}

/// Lower a single multi-level generator to a circuit over the gate set.
///
/// In `OneClean` mode the circuit has one trailing clean ancilla wire; in
/// `None` mode it has no ancilla and is only defined for the combinations
/// covered by the ancilla-free constructions.
pub fn lower_generator(
    g: &Generator,
    gs: GateSet,
    mode: AncillaMode,
) -> Result<Circuit, LoweringError> {
    let n = log2_exact(g.dim)?;
    if !kind_allowed(g.kind, gs) {
        return Err(LoweringError::OutsideRing {
            gen: g.serialize(),
            gs: gs.name(),
        });
    }
    let mut lw = Lowerer::new(gs, n, mode);
    let unsupported = |lw: &Lowerer, detail: &str| LoweringError::Unsupported {
        gen: g.serialize(),
        gs: gs.name(),
        n: lw.n,
        detail: detail.to_string(),
    };
    match g.kind {
        GenKind::Neg1 | GenKind::I4 { .. } => {
            let state = g.levels[0] - 1;
            let t = n;
            let bit = |w: usize| (state >> (n - w)) & 1;
            let pattern: Vec<(usize, bool)> = (1..=n - 1).map(|w| (w, bit(w) == 1)).collect();
            let controls: Vec<usize> = pattern.iter().map(|&(w, _)| w).collect();
            for &(w, pol) in &pattern {
                if !pol {
                    lw.x(w);
                }
            }
            let twrap = bit(t) == 0;
            if twrap {
                lw.x(t);
            }
            let res = match g.kind {
                GenKind::Neg1 => lw.fc_z(&controls, t, lw.ancilla),
                GenKind::I4 { pow } => {
                    let m = u32::from(pow) % 4;
                    if controls.is_empty() {
                        lw.s_pow(t, m);
                        Ok(())
                    } else {
                        lw.sandwich(
                            &controls,
                            t,
                            |l| {
                                l.s_pow(t, m);
                                Ok(())
                            },
                            |l, c, d| {
                                let d = d.ok_or(LoweringError::NeedDirtyAncilla(1))?;
                                for _ in 0..m {
                                    l.cs(c, t, d)?;
                                }
                                Ok(())
                            },
                        )
                    }
                }
                _ => unreachable!(),
            };
            res.map_err(|e| match e {
                LoweringError::NeedDirtyAncilla(_) => unsupported(&lw, "needs an ancilla"),
                other => other,
            })?;
            if twrap {
                lw.x(t);
            }
            for &(w, pol) in &pattern {
                if !pol {
                    lw.x(w);
                }
            }
        }
        GenKind::Hh4 => {
            if n < 2 {
                return Err(unsupported(&lw, "needs at least 2 qubits"));
            }
            let states = [
                g.levels[0] - 1,
                g.levels[1] - 1,
                g.levels[2] - 1,
                g.levels[3] - 1,
            ];
            if mode == AncillaMode::None && n > 2 {
                return Err(unsupported(&lw, "controlled HxH needs a dirty wire"));
            }
            let route = lw.plan_quad_route(states, lw.ancilla)?;
            let (t1, t2) = (n - 1, n);
            let controls: Vec<usize> = (1..=n - 2).collect();
            lw.emit_gates(&route);
            lw.sandwich(
                &controls,
                t2,
                |l| {
                    l.hh(t1, t2);
                    Ok(())
                },
                |l, c, d| {
                    let d = d.ok_or(LoweringError::NeedDirtyAncilla(1))?;
                    // controlled H (x) H with one dirty wire
                    l.hh(t2, d);
                    l.cx(t2, t1);
                    l.ccx(c, t1, t2);
                    l.cx(t2, t1);
                    l.hh(t2, d);
                    l.cx(t2, t1);
                    l.ccx(c, t1, t2);
                    l.cx(t2, t1);
                    Ok(())
                },
            )?;
            lw.emit_gates_rev(&route);
        }
        GenKind::X2
        | GenKind::H2
        | GenKind::F2
        | GenKind::Wh2
        | GenKind::Xz2
        | GenKind::Zx2
        | GenKind::Fz2
        | GenKind::Zf2
        | GenKind::Iz2 { .. }
        | GenKind::Ix2
        | GenKind::Wsh2
        | GenKind::Whs2 => {
            let (route, t) = lw.plan_pair_route(g.levels[0] - 1, g.levels[1] - 1);
            let controls: Vec<usize> = (1..=n).filter(|&w| w != t).collect();
            lw.emit_gates(&route);
            lower_two_level_kernel(&mut lw, g, mode, &controls, t).map_err(|e| match e {
                LoweringError::NeedDirtyAncilla(_) => unsupported(&lw, "needs an ancilla"),
                other => other,
            })?;
            lw.emit_gates_rev(&route);
        }
        GenKind::Z2 => {
            // Four-level I (x) Z: -1 at levels 2 and 4; realized as the
            // square of a two-level XZ (imag) or iZ (gauss) at those levels.
            let (p, q) = (g.levels[1], g.levels[3]);
            let sub_kind = match gs {
                GateSet::Imag => GenKind::Xz2,
                GateSet::Gauss | GateSet::SupGauss => GenKind::Iz2 { pow: 2 },
                _ => {
                    return Err(LoweringError::OutsideRing {
                        gen: g.serialize(),
                        gs: gs.name(),
                    })
                }
            };
            match sub_kind {
                GenKind::Xz2 => {
                    let sub = Generator::new(GenKind::Xz2, vec![p, q], g.dim).unwrap();
                    let c1 = lower_generator(&sub, gs, mode)?;
                    let mut gates = c1.gates.clone();
                    gates.extend(c1.gates.iter().cloned());
                    lw.gates = gates;
                }
                GenKind::Iz2 { .. } => {
                    let sub = Generator::new(GenKind::Iz2 { pow: 2 }, vec![p, q], g.dim).unwrap();
                    let c1 = lower_generator(&sub, gs, mode)?;
                    lw.gates = c1.gates;
                }
                _ => unreachable!(),
            }
        }
        GenKind::GlobalIH => {
            lw.h(n);
        }
        GenKind::GlobalOmega => {
            // w = SHSHSH exactly.
            for name in [
                GateName::S,
                GateName::H,
                GateName::S,
                GateName::H,
                GateName::S,
                GateName::H,
            ] {
                lw.push(name, &[n]);
            }
        }
    }
    let gates = simplify_gates(lw.gates);
    let mut c = match mode {
        AncillaMode::OneClean => Circuit::with_ancilla(n, 1, AncillaKind::Clean),
        AncillaMode::None => Circuit::new(n),
    };
    c.gates = gates;
    Ok(c)
}

/// The fully-controlled kernel dispatch for two-level kinds, after routing.
fn lower_two_level_kernel(
    lw: &mut Lowerer,
    g: &Generator,
    mode: AncillaMode,
    controls: &[usize],
    t: usize,
) -> Result<(), LoweringError> {
    let need_anc = |lw: &Lowerer| -> Result<usize, LoweringError> {
        lw.ancilla.ok_or(LoweringError::NeedDirtyAncilla(1))
    };
    match g.kind {
        GenKind::X2 => {
            if mode == AncillaMode::None && controls.len() >= 3 {
                return Err(LoweringError::NeedDirtyAncilla(controls.len()));
            }
            lw.mcx(controls, t, lw.ancilla)?;
        }
        GenKind::H2 => {
            lw.sandwich(
                controls,
                t,
                |l| {
                    l.h(t);
                    Ok(())
                },
                |l, c, _| {
                    l.push(GateName::Ch, &[c, t]);
                    Ok(())
                },
            )?;
        }
        GenKind::F2 => match (mode, controls.len()) {
            (_, 0) => lw.push(GateName::F, &[t]),
            (_, 1) => lw.cf(controls[0], t)?,
            (AncillaMode::OneClean, _) => {
                let anc = need_anc(lw)?;
                lw.mcx(controls, anc, Some(t))?;
                lw.cf(anc, t)?;
                lw.mcx(controls, anc, Some(t))?;
            }
            (AncillaMode::None, k) => {
                // F = XZ * ZXF: both fully-controlled pieces are
                // ancilla-free while the inner MCX stays native.
                if k >= 3 {
                    return Err(LoweringError::NeedDirtyAncilla(k));
                }
                lw.mc_zxf(controls, t, None)?;
                lw.fc_xz(controls, t)?;
            }
        },
        GenKind::Wh2 => match (mode, controls.len()) {
            (_, 0) => lw.wh(t),
            (AncillaMode::OneClean, 1) => {
                let anc = need_anc(lw)?;
                lw.cwh(controls[0], t, anc)?;
            }
            (AncillaMode::OneClean, _) => {
                let anc = need_anc(lw)?;
                lw.mcx(controls, anc, Some(t))?;
                lw.cwh(anc, t, controls[0])?;
                lw.mcx(controls, anc, Some(t))?;
            }
            (AncillaMode::None, _) => return Err(LoweringError::NeedDirtyAncilla(1)),
        },
        GenKind::Xz2 => lw.fc_xz(controls, t)?,
        GenKind::Zx2 => lw.fc_zx(controls, t)?,
        GenKind::Fz2 => lw.fc_fz(controls, t)?,
        GenKind::Zf2 => lw.fc_zf(controls, t)?,
        GenKind::Iz2 { pow } => lw.fc_iz(controls, t, u32::from(pow))?,
        GenKind::Ix2 => lw.fc_ix(controls, t)?,
        GenKind::Wsh2 => {
            if controls.len() == 1 && mode == AncillaMode::None {
                return Err(LoweringError::NeedDirtyAncilla(1));
            }
            lw.fc_wsh(controls, t, lw.ancilla)?;
        }
        GenKind::Whs2 => {
            if controls.len() == 1 && mode == AncillaMode::None {
                return Err(LoweringError::NeedDirtyAncilla(1));
            }
            lw.fc_whs(controls, t, lw.ancilla)?;
        }
        _ => unreachable!("not a two-level kind"),
    }
    Ok(())
}

/// Lower a whole generator word.
///
/// The word `G_1 ... G_l` produced by synthesis reduces the input to the
/// identity, so the circuit for the synthesized unitary applies the
/// *adjoints* in word order: the result evaluates to `(G_1 ... G_l)^dag`.
pub fn lower_word(
    word: &GeneratorWord,
    gs: GateSet,
    mode: AncillaMode,
) -> Result<Circuit, LoweringError> {
    let n = log2_exact(word.dim)?;
    let mut out = match mode {
        AncillaMode::OneClean => Circuit::with_ancilla(n, 1, AncillaKind::Clean),
        AncillaMode::None => Circuit::new(n),
    };
    for g in &word.gens {
        let cg = lower_generator(g, gs, mode)?;
        let inv = dagger_gates(&cg.gates);
        out.gates.extend(inv);
    }
    out.gates = simplify_gates(out.gates);
    Ok(out)
}

/// Lower a permutation matrix to `{X, CX, CCX}` with at most one dirty
/// ancilla (present in `OneClean` mode as the trailing wire).
pub fn lower_permutation(p: &RingMatrix, mode: AncillaMode) -> Result<Circuit, LoweringError> {
    let dim = p.rows();
    let n = log2_exact(dim)?;
    // Read off the permutation; reject anything else.
    let mut perm = vec![0usize; dim];
    for c in 1..=dim {
        let mut image = None;
        for r in 1..=dim {
            let e = p.get(r, c);
            if e.is_zero() {
                continue;
            }
            if !e.is_one() || image.is_some() {
                return Err(LoweringError::Unsupported {
                    gen: "permutation".into(),
                    gs: "classical",
                    n,
                    detail: "matrix is not a 0/1 permutation".into(),
                });
            }
            image = Some(r);
        }
        perm[c - 1] = image.ok_or(LoweringError::Unsupported {
            gen: "permutation".into(),
            gs: "classical",
            n,
            detail: "zero column".into(),
        })? - 1;
    }
    let mut lw = Lowerer::new(GateSet::Int, n, mode);
    if mode == AncillaMode::None && n > 3 {
        return Err(LoweringError::NeedDirtyAncilla(n - 1));
    }
    // Sort by transpositions; each two-level X follows a Gray chain.
    let mut cur = perm;
    for j in 0..dim {
        if cur[j] != j {
            let src = (j..dim).find(|&k| cur[k] == j).expect("permutation");
            lw.two_level_x(cur[j], j, lw.ancilla)?;
            cur.swap(j, src);
        }
    }
    let gates: Vec<Gate> = simplify_gates(lw.gates).into_iter().rev().collect();
    let mut c = match mode {
        AncillaMode::OneClean => Circuit::with_ancilla(n, 1, AncillaKind::Dirty),
        AncillaMode::None => Circuit::new(n),
    };
    c.gates = gates;
    Ok(c)
}

/// `C^k X` on explicit wires with one dirty ancilla, as a standalone
/// circuit over `total` wires (the ancilla is only used when `k >= 3`).
pub fn mcx_dirty(
    controls: &[usize],
    target: usize,
    dirty: usize,
    total: usize,
) -> Result<Circuit, LoweringError> {
    let mut lw = Lowerer::new(GateSet::Int, total, AncillaMode::None);
    lw.mcx(controls, target, Some(dirty))?;
    let mut c = Circuit::new(total);
    c.gates = simplify_gates(lw.gates);
    Ok(c)
}

/// Extend a singly-controlled template to many controls with the clean
/// ancilla sandwich. `template` must be a gate list whose control wire is
/// `template_control`; the returned gates apply `MCX(controls -> ancilla)`,
/// the template re-controlled from the ancilla, and `MCX` again.
pub fn control_extend(
    template: &[Gate],
    template_control: usize,
    controls: &[usize],
    ancilla: usize,
    mcx_dirty_wire: usize,
) -> Result<Vec<Gate>, LoweringError> {
    if controls.len() == 1 {
        let c = controls[0];
        return Ok(template
            .iter()
            .map(|g| {
                let wires = g
                    .wires
                    .iter()
                    .map(|&w| if w == template_control { c } else { w })
                    .collect();
                Gate::new(g.name, wires).expect("valid relabeled gate")
            })
            .collect());
    }
    let mut lw = Lowerer::new(GateSet::Int, ancilla, AncillaMode::None);
    lw.mcx(controls, ancilla, Some(mcx_dirty_wire))?;
    for g in template {
        let wires: Vec<usize> = g
            .wires
            .iter()
            .map(|&w| if w == template_control { ancilla } else { w })
            .collect();
        lw.gates
            .push(Gate::new(g.name, wires).expect("valid relabeled gate"));
    }
    lw.mcx(controls, ancilla, Some(mcx_dirty_wire))?;
    Ok(lw.gates)
}

/// Native inverse of a lowered gate list: reverse order, expanding each
/// non-involutive gate to its power (`S^3`, `F^7`, `(wH)^7`).
pub fn dagger_gates(gates: &[Gate]) -> Vec<Gate> {
    let mut out = Vec::with_capacity(gates.len());
    for g in gates.iter().rev() {
        match g.name {
            GateName::X
            | GateName::Cx
            | GateName::Ccx
            | GateName::H
            | GateName::Ch
            | GateName::Z => out.push(g.clone()),
            GateName::S => {
                for _ in 0..3 {
                    out.push(g.clone());
                }
            }
            GateName::F => {
                for _ in 0..7 {
                    out.push(g.clone());
                }
            }
            GateName::Wh => {
                for _ in 0..7 {
                    out.push(g.clone());
                }
            }
            GateName::Sdg | GateName::Fdg | GateName::Whdg | GateName::T | GateName::Tdg => {
                unreachable!("lowered circuits only contain native gates")
            }
        }
    }
    out
}

/// Cancel runs of identical gates whose order divides the run length
/// (`X`, `H`, `CX`, `CCX`, `CH` have order 2; `S` order 4; `F`, `WH`
/// order 8). Exact identities only; never reorders gates.
pub fn simplify_gates(gates: Vec<Gate>) -> Vec<Gate> {
    fn order(name: GateName) -> usize {
        match name {
            GateName::X
            | GateName::H
            | GateName::Cx
            | GateName::Ccx
            | GateName::Ch
            | GateName::Z => 2,
            GateName::S | GateName::Sdg => 4,
            GateName::F
            | GateName::Fdg
            | GateName::Wh
            | GateName::Whdg
            | GateName::T
            | GateName::Tdg => 8,
        }
    }
    let mut out: Vec<Gate> = Vec::with_capacity(gates.len());
    for g in gates {
        out.push(g);
        loop {
            let len = out.len();
            let ord = order(out[len - 1].name);
            if len < ord {
                break;
            }
            let tail = &out[len - ord..];
            if tail
                .iter()
                .all(|t| t.name == tail[0].name && t.wires == tail[0].wires)
            {
                out.truncate(len - ord);
                if out.is_empty() {
                    break;
                }
            } else {
                break;
            }
        }
    }
    out
}
