//! Exact arithmetic in `Z[w]` and `D[w]`, where `w = exp(i*pi/4)`.
//!
//! Every element of every subring is stored in the `w`-basis: a [`RingInt`]
//! is `c0 + c1*w + c2*w^2 + c3*w^3` with arbitrary-precision integer
//! coefficients, and a [`RingScalar`] is a `RingInt` divided by a power of
//! `sqrt(2)`. Subrings are predicates on this universal representation, not
//! separate types, so there is a single arithmetic core and membership tests
//! are cheap coefficient checks.
//!
//! Useful identities: `w^2 = i`, `w - w^3 = sqrt(2)`, `w + w^3 = i*sqrt(2)`,
//! and `w^4 = -1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

/// Errors produced by ring-level operations.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("element {0} is not in the base ring of modulus {1}")]
    OutsideBaseRing(String, &'static str),
    #[error("scalar parse error: {0}")]
    Parse(String),
}

// ---------------------------------------------------------------------------
// RingInt
// ---------------------------------------------------------------------------

/// A cyclotomic integer of degree 8: `c0 + c1*w + c2*w^2 + c3*w^3`.
///
/// The representation is canonical: `w^4 = -1` has been applied, so two
/// values are equal as complex numbers iff their coefficient quadruples are
/// equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingInt {
    c: [BigInt; 4],
}

impl RingInt {
    pub fn new(
        c0: impl Into<BigInt>,
        c1: impl Into<BigInt>,
        c2: impl Into<BigInt>,
        c3: impl Into<BigInt>,
    ) -> Self {
        RingInt {
            c: [c0.into(), c1.into(), c2.into(), c3.into()],
        }
    }

    pub fn zero() -> Self {
        RingInt::new(0, 0, 0, 0)
    }

    pub fn one() -> Self {
        RingInt::new(1, 0, 0, 0)
    }

    /// The generator `w = exp(i*pi/4)`.
    pub fn omega() -> Self {
        RingInt::new(0, 1, 0, 0)
    }

    /// The imaginary unit `i = w^2`.
    pub fn i() -> Self {
        RingInt::new(0, 0, 1, 0)
    }

    /// `sqrt(2) = w - w^3`.
    pub fn sqrt2() -> Self {
        RingInt::new(0, 1, 0, -1)
    }

    /// `i*sqrt(2) = w + w^3`.
    pub fn i_sqrt2() -> Self {
        RingInt::new(0, 1, 0, 1)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        RingInt::new(n, 0, 0, 0)
    }

    /// `w^m` for any integer exponent (`w^8 = 1`).
    pub fn omega_pow(m: i64) -> Self {
        let m = m.rem_euclid(8) as usize;
        let mut c = [
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
        ];
        if m < 4 {
            c[m] = BigInt::one();
        } else {
            c[m - 4] = -BigInt::one();
        }
        RingInt { c }
    }

    pub fn coeffs(&self) -> &[BigInt; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// Complex conjugation: `(c0, c1, c2, c3) -> (c0, -c3, -c2, -c1)`.
    pub fn conj(&self) -> Self {
        RingInt {
            c: [
                self.c[0].clone(),
                -self.c[3].clone(),
                -self.c[2].clone(),
                -self.c[1].clone(),
            ],
        }
    }

    /// The Galois automorphism `w -> w^3`; it sends `sqrt(2) -> -sqrt(2)`
    /// and `i -> -i`, fixing `i*sqrt(2)`. Used for exact division via the
    /// rational norm.
    pub fn galois3(&self) -> Self {
        RingInt {
            c: [
                self.c[0].clone(),
                self.c[3].clone(),
                -self.c[2].clone(),
                self.c[1].clone(),
            ],
        }
    }

    /// Rational norm: the product of all four Galois conjugates, as an
    /// ordinary integer.
    pub fn norm(&self) -> BigInt {
        // N(u) = u * s3(u) * s5(u) * s7(u) with s7 = conj, s5 = s3 . s7.
        let p = self.clone() * self.galois3();
        let q = p.conj(); // s7(p) = s7(u) * s5(u) since s7 . s3 = s5
        let n = p * q;
        debug_assert!(n.c[1].is_zero() && n.c[2].is_zero() && n.c[3].is_zero());
        n.c[0].clone()
    }

    /// Exact division in `Z[w]`: returns `self / d` when `d` divides `self`.
    pub fn exact_div(&self, d: &RingInt) -> Option<RingInt> {
        if d.is_zero() {
            return None;
        }
        let n = d.norm();
        // numerator = self * s3(d) * s5(d) * s7(d)
        let s3 = d.galois3();
        let s7 = d.conj();
        let s5 = s3.conj();
        let num = self.clone() * s3 * s5 * s7;
        let mut out = [
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
        ];
        for (o, x) in out.iter_mut().zip(num.c.iter()) {
            let (q, r) = x.div_rem(&n);
            if !r.is_zero() {
                return None;
            }
            *o = q;
        }
        Some(RingInt { c: out })
    }

    /// Multiplication by `sqrt(2)`, computed coefficient-wise.
    pub fn mul_sqrt2(&self) -> Self {
        let [c0, c1, c2, c3] = &self.c;
        RingInt {
            c: [c1 - c3, c0 + c2, c1 + c3, c2 - c0],
        }
    }

    /// `self / sqrt(2)` when the quotient stays in `Z[w]`.
    ///
    /// Since `a / sqrt(2) = a * sqrt(2) / 2`, the quotient exists iff all
    /// four coefficients of `a * sqrt(2)` are even.
    pub fn div_sqrt2(&self) -> Option<Self> {
        let m = self.mul_sqrt2();
        if m.c.iter().all(|x| x.is_even()) {
            Some(RingInt {
                c: m.c.map(|x| x / 2),
            })
        } else {
            None
        }
    }

    pub fn divisible_by_sqrt2(&self) -> bool {
        // All coefficients of a*sqrt(2) even iff c0 = c2 and c1 = c3 mod 2.
        (&self.c[0] - &self.c[2]).is_even() && (&self.c[1] - &self.c[3]).is_even()
    }

    /// Real part as an exact element (`(u + u^dag)/2` times 2, kept integral):
    /// returns `u + u^dag`.
    pub fn twice_re(&self) -> RingInt {
        self.clone() + self.conj()
    }

    /// Decompose as an ordinary integer, if possible.
    pub fn as_int(&self) -> Option<BigInt> {
        if self.c[1].is_zero() && self.c[2].is_zero() && self.c[3].is_zero() {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// Decompose as `x + y*i` in `Z[i]`, if possible.
    pub fn as_gauss(&self) -> Option<(BigInt, BigInt)> {
        if self.c[1].is_zero() && self.c[3].is_zero() {
            Some((self.c[0].clone(), self.c[2].clone()))
        } else {
            None
        }
    }

    /// Decompose as `x + y*sqrt(2)` in `Z[sqrt(2)]`, if possible.
    pub fn as_quad_real(&self) -> Option<(BigInt, BigInt)> {
        if self.c[2].is_zero() && self.c[1] == -self.c[3].clone() {
            Some((self.c[0].clone(), self.c[1].clone()))
        } else {
            None
        }
    }

    /// Decompose as `x + y*i*sqrt(2)` in `Z[i*sqrt(2)]`, if possible.
    pub fn as_quad_imag(&self) -> Option<(BigInt, BigInt)> {
        if self.c[2].is_zero() && self.c[1] == self.c[3] {
            Some((self.c[0].clone(), self.c[1].clone()))
        } else {
            None
        }
    }
}

impl Add for RingInt {
    type Output = RingInt;
    fn add(self, rhs: RingInt) -> RingInt {
        let [a0, a1, a2, a3] = self.c;
        let [b0, b1, b2, b3] = rhs.c;
        RingInt {
            c: [a0 + b0, a1 + b1, a2 + b2, a3 + b3],
        }
    }
}

impl Sub for RingInt {
    type Output = RingInt;
    fn sub(self, rhs: RingInt) -> RingInt {
        self + (-rhs)
    }
}

impl Neg for RingInt {
    type Output = RingInt;
    fn neg(self) -> RingInt {
        RingInt {
            c: self.c.map(|x| -x),
        }
    }
}

impl Mul for RingInt {
    type Output = RingInt;
    fn mul(self, rhs: RingInt) -> RingInt {
        let mut out = [
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
        ];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = i + j;
                let term = a * b;
                if k < 4 {
                    out[k] += term;
                } else {
                    out[k - 4] -= term; // w^4 = -1
                }
            }
        }
        RingInt { c: out }
    }
}

impl<'a> Mul<&'a RingInt> for &'a RingInt {
    type Output = RingInt;
    fn mul(self, rhs: &'a RingInt) -> RingInt {
        self.clone() * rhs.clone()
    }
}

impl fmt::Display for RingInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.c[0], self.c[1], self.c[2], self.c[3]
        )
    }
}

// ---------------------------------------------------------------------------
// RingScalar
// ---------------------------------------------------------------------------

/// An element of `D[w]`: `num / sqrt(2)^k`, kept normalized so that either
/// `k = 0` or `num` is not divisible by `sqrt(2)` in `Z[w]`.
///
/// Equality on the normalized form is decidable and agrees with equality of
/// the represented complex numbers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingScalar {
    num: RingInt,
    k: u32,
}

impl RingScalar {
    pub fn new(num: RingInt, k: u32) -> Self {
        let mut s = RingScalar { num, k };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.k = 0;
            return;
        }
        while self.k > 0 {
            match self.num.div_sqrt2() {
                Some(q) => {
                    self.num = q;
                    self.k -= 1;
                }
                None => break,
            }
        }
    }

    pub fn zero() -> Self {
        RingScalar {
            num: RingInt::zero(),
            k: 0,
        }
    }

    pub fn one() -> Self {
        RingScalar {
            num: RingInt::one(),
            k: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        RingScalar {
            num: RingInt::from_int(n),
            k: 0,
        }
    }

    pub fn from_ringint(num: RingInt) -> Self {
        RingScalar { num, k: 0 }
    }

    pub fn i() -> Self {
        RingScalar {
            num: RingInt::i(),
            k: 0,
        }
    }

    pub fn omega() -> Self {
        RingScalar {
            num: RingInt::omega(),
            k: 0,
        }
    }

    pub fn omega_pow(m: i64) -> Self {
        RingScalar {
            num: RingInt::omega_pow(m),
            k: 0,
        }
    }

    pub fn sqrt2() -> Self {
        RingScalar {
            num: RingInt::sqrt2(),
            k: 0,
        }
    }

    pub fn i_sqrt2() -> Self {
        RingScalar {
            num: RingInt::i_sqrt2(),
            k: 0,
        }
    }

    /// `1 / sqrt(2)`.
    pub fn inv_sqrt2() -> Self {
        RingScalar {
            num: RingInt::one(),
            k: 1,
        }
    }

    /// `1 / 2`.
    pub fn half() -> Self {
        RingScalar {
            num: RingInt::one(),
            k: 2,
        }
    }

    /// `1 / sqrt(2)^k`.
    pub fn inv_sqrt2_pow(k: u32) -> Self {
        RingScalar::new(RingInt::one(), k)
    }

    pub fn num(&self) -> &RingInt {
        &self.num
    }

    /// The normalized `sqrt(2)`-denominator exponent.
    pub fn denom_exp(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.k == 0 && self.num == RingInt::one()
    }

    pub fn conj(&self) -> Self {
        RingScalar {
            num: self.num.conj(),
            k: self.k,
        }
    }

    /// Multiply by `sqrt(2)^p` for a signed exponent `p`.
    pub fn mul_sqrt2_pow(&self, p: i64) -> Self {
        if p >= 0 {
            let mut num = self.num.clone();
            for _ in 0..p {
                num = num.mul_sqrt2();
            }
            RingScalar::new(num, self.k)
        } else {
            RingScalar::new(self.num.clone(), self.k + (-p) as u32)
        }
    }

    /// The numerator after scaling to a common exponent `k_target >= self.k`.
    pub fn num_at_exp(&self, k_target: u32) -> RingInt {
        debug_assert!(k_target >= self.k);
        let mut num = self.num.clone();
        for _ in 0..(k_target - self.k) {
            num = num.mul_sqrt2();
        }
        num
    }

    /// Exact real part `(x + x^dag)/2`.
    pub fn re(&self) -> RingScalar {
        (self.clone() + self.conj()) * RingScalar::half()
    }

    /// Exact `(x - x^dag)/(2i)`: the coefficient of `i` in `x = a + b*i`.
    pub fn im_over_i(&self) -> RingScalar {
        let minus_i = RingScalar {
            num: -RingInt::i(),
            k: 0,
        };
        (self.clone() - self.conj()) * RingScalar::half() * minus_i
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    // --- subring membership -------------------------------------------------

    pub fn in_z(&self) -> bool {
        self.k == 0 && self.num.as_int().is_some()
    }

    pub fn in_zi(&self) -> bool {
        self.k == 0 && self.num.as_gauss().is_some()
    }

    pub fn in_z_sqrt2(&self) -> bool {
        self.k == 0 && self.num.as_quad_real().is_some()
    }

    pub fn in_z_isqrt2(&self) -> bool {
        self.k == 0 && self.num.as_quad_imag().is_some()
    }

    pub fn in_z_omega(&self) -> bool {
        self.k == 0
    }

    /// Membership in `D` (dyadic rationals). In normalized form a dyadic
    /// value always has an even exponent, so the coefficient test suffices.
    pub fn in_d(&self) -> bool {
        let c = self.num.coeffs();
        c[1].is_zero()
            && c[2].is_zero()
            && c[3].is_zero()
            && (self.k.is_multiple_of(2) || self.num.is_zero())
    }

    /// Membership in `D[sqrt(2)]`, the real elements of `D[w]`.
    pub fn in_d_sqrt2(&self) -> bool {
        self.is_real()
    }

    /// Membership in `D[i*sqrt(2)]`: `a + b*i*sqrt(2)` with dyadic `a`, `b`.
    pub fn in_d_isqrt2(&self) -> bool {
        let a = self.re();
        if !a.in_d() {
            return false;
        }
        // b = (x - x^dag) / (2 i sqrt(2)) = (x - x^dag)/2 * (-i sqrt(2))/2
        let y = (self.clone() - self.conj()) * RingScalar::half();
        let b =
            y * RingScalar {
                num: -RingInt::i_sqrt2(),
                k: 0,
            } * RingScalar::half();
        b.in_d()
    }

    /// Membership in `D[i]`: `a + b*i` with dyadic `a`, `b`.
    pub fn in_d_i(&self) -> bool {
        self.re().in_d() && self.im_over_i().in_d()
    }

    /// Membership in the super-integral set `{ u / sqrt(2)^q : u in Z }`,
    /// i.e. `D` together with `sqrt(2) * D`.
    pub fn in_superintegral(&self) -> bool {
        self.in_d() || (self.clone() * RingScalar::sqrt2() * RingScalar::half()).in_d()
    }

    /// Membership in the super-Gaussian set `{ u / sqrt(2)^q : u in Z[i] }`.
    pub fn in_supergaussian(&self) -> bool {
        self.in_d_i() || (self.clone() * RingScalar::sqrt2() * RingScalar::half()).in_d_i()
    }

    /// The minimal ring of the inclusion lattice containing this value.
    ///
    /// Integer rings take precedence over the dyadic ones, and the
    /// super-integral / super-Gaussian sets slot between `D` (resp. `D[i]`)
    /// and `D[sqrt(2)]` (resp. `D[w]`).
    pub fn membership(&self) -> RingTag {
        if self.in_z() {
            RingTag::Z
        } else if self.in_zi() {
            RingTag::Zi
        } else if self.in_z_sqrt2() {
            RingTag::Zsqrt2
        } else if self.in_z_isqrt2() {
            RingTag::Zisqrt2
        } else if self.in_z_omega() {
            RingTag::Zomega
        } else if self.in_d() {
            RingTag::D
        } else if self.in_superintegral() {
            RingTag::ZOverSqrt2
        } else if self.in_d_sqrt2() {
            RingTag::Dsqrt2
        } else if self.in_d_isqrt2() {
            RingTag::Disqrt2
        } else if self.in_d_i() {
            RingTag::Di
        } else if self.in_supergaussian() {
            RingTag::ZiOverSqrt2
        } else {
            RingTag::Domega
        }
    }

    // --- text format ---------------------------------------------------------

    /// Parse the scalar text format `(c0,c1,c2,c3)[/rt2^k]` plus the
    /// shorthands `n`, `a/b` (b a power of two), `i`, `w`, `rt2`, `irt2`,
    /// each optionally negated.
    pub fn parse(text: &str) -> Result<Self, RingError> {
        let t = text.trim();
        let (neg, t) = match t.strip_prefix('-') {
            Some(rest) if !rest.starts_with(|c: char| c.is_ascii_digit()) => (true, rest),
            _ => (false, t),
        };
        let v = Self::parse_unsigned(t)?;
        Ok(if neg { -v } else { v })
    }

    fn parse_unsigned(t: &str) -> Result<Self, RingError> {
        match t {
            "i" => return Ok(RingScalar::i()),
            "w" => return Ok(RingScalar::omega()),
            "rt2" => return Ok(RingScalar::sqrt2()),
            "irt2" => return Ok(RingScalar::i_sqrt2()),
            _ => {}
        }
        if let Some(body) = t.strip_prefix('(') {
            let (tuple, rest) = body
                .split_once(')')
                .ok_or_else(|| RingError::Parse(format!("missing ')' in `{t}`")))?;
            let parts: Vec<&str> = tuple.split(',').collect();
            if parts.len() != 4 {
                return Err(RingError::Parse(format!(
                    "expected 4 coefficients in `{t}`"
                )));
            }
            let mut c = [
                BigInt::zero(),
                BigInt::zero(),
                BigInt::zero(),
                BigInt::zero(),
            ];
            for (slot, p) in c.iter_mut().zip(parts.iter()) {
                *slot = p
                    .trim()
                    .parse::<BigInt>()
                    .map_err(|e| RingError::Parse(format!("bad coefficient `{p}`: {e}")))?;
            }
            let k = if rest.is_empty() {
                0
            } else if let Some(exp) = rest.strip_prefix("/rt2^") {
                exp.parse::<u32>()
                    .map_err(|e| RingError::Parse(format!("bad exponent `{exp}`: {e}")))?
            } else {
                return Err(RingError::Parse(format!("unexpected suffix `{rest}`")));
            };
            return Ok(RingScalar::new(RingInt { c }, k));
        }
        if let Some((a, b)) = t.split_once('/') {
            let num = a
                .parse::<BigInt>()
                .map_err(|e| RingError::Parse(format!("bad numerator `{a}`: {e}")))?;
            let den = b
                .parse::<BigInt>()
                .map_err(|e| RingError::Parse(format!("bad denominator `{b}`: {e}")))?;
            let mut d = den.clone();
            let mut m = 0u32;
            while d.is_even() && d > BigInt::one() {
                d /= 2;
                m += 1;
            }
            if !d.is_one() || den < BigInt::one() {
                return Err(RingError::Parse(format!(
                    "denominator `{b}` is not a power of 2"
                )));
            }
            return Ok(RingScalar::new(RingInt::from_int(num), 2 * m));
        }
        t.parse::<BigInt>()
            .map(RingScalar::from_int)
            .map_err(|e| RingError::Parse(format!("bad scalar `{t}`: {e}")))
    }
}

impl Add for RingScalar {
    type Output = RingScalar;
    fn add(self, rhs: RingScalar) -> RingScalar {
        let k = self.k.max(rhs.k);
        RingScalar::new(self.num_at_exp(k) + rhs.num_at_exp(k), k)
    }
}

impl Sub for RingScalar {
    type Output = RingScalar;
    fn sub(self, rhs: RingScalar) -> RingScalar {
        self + (-rhs)
    }
}

impl Neg for RingScalar {
    type Output = RingScalar;
    fn neg(self) -> RingScalar {
        RingScalar {
            num: -self.num,
            k: self.k,
        }
    }
}

impl Mul for RingScalar {
    type Output = RingScalar;
    fn mul(self, rhs: RingScalar) -> RingScalar {
        RingScalar::new(self.num * rhs.num, self.k + rhs.k)
    }
}

impl<'a> Mul<&'a RingScalar> for &'a RingScalar {
    type Output = RingScalar;
    fn mul(self, rhs: &'a RingScalar) -> RingScalar {
        self.clone() * rhs.clone()
    }
}

impl fmt::Display for RingScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/rt2^{}", self.num, self.k)
        }
    }
}

// ---------------------------------------------------------------------------
// RingTag: the inclusion lattice
// ---------------------------------------------------------------------------

/// A node of the subring inclusion lattice.
///
/// `ZOverSqrt2` and `ZiOverSqrt2` denote the super-integral and
/// super-Gaussian forms `W / sqrt(2)^q` with `W` over `Z` resp. `Z[i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingTag {
    Z,
    Zsqrt2,
    Zisqrt2,
    Zi,
    Zomega,
    D,
    Dsqrt2,
    Disqrt2,
    Di,
    Domega,
    ZOverSqrt2,
    ZiOverSqrt2,
}

impl RingTag {
    /// Set inclusion on the lattice: `self <= other` iff every element of
    /// `self` lies in `other`.
    pub fn leq(self, other: RingTag) -> bool {
        use RingTag::*;
        if self == other || other == Domega {
            return true;
        }
        match self {
            Z => true,
            Zsqrt2 => matches!(other, Zomega | Dsqrt2),
            Zisqrt2 => matches!(other, Zomega | Disqrt2),
            Zi => matches!(other, Zomega | Di | ZiOverSqrt2),
            Zomega => false,
            D => matches!(other, Dsqrt2 | Disqrt2 | Di | ZOverSqrt2 | ZiOverSqrt2),
            ZOverSqrt2 => matches!(other, Dsqrt2 | ZiOverSqrt2),
            ZiOverSqrt2 => false,
            Dsqrt2 => false,
            Disqrt2 => false,
            Di => matches!(other, ZiOverSqrt2),
            Domega => false,
        }
    }

    pub fn name(self) -> &'static str {
        use RingTag::*;
        match self {
            Z => "Z",
            Zsqrt2 => "Zsqrt2",
            Zisqrt2 => "Zisqrt2",
            Zi => "Zi",
            Zomega => "Zomega",
            D => "D",
            Dsqrt2 => "Dsqrt2",
            Disqrt2 => "Disqrt2",
            Di => "Di",
            Domega => "Domega",
            ZOverSqrt2 => "Z_over_sqrt2",
            ZiOverSqrt2 => "Zi_over_sqrt2",
        }
    }
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

// ---------------------------------------------------------------------------
// Residues
// ---------------------------------------------------------------------------

/// A modulus together with its base ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modulus {
    /// `2` in `Z[sqrt(2)]`; 4 classes `{0, 1, sqrt2, 1+sqrt2}`.
    TwoInZsqrt2,
    /// `2` in `Z[i*sqrt(2)]`; 4 classes `{0, 1, irt2, 1+irt2}`.
    TwoInZisqrt2,
    /// `2*i*sqrt(2)` in `Z[i*sqrt(2)]`; 8 classes `{x + y*irt2 : x mod 4, y mod 2}`.
    TwoISqrt2,
    /// `2` in `Z[i]`; 4 classes `{0, 1, i, 1+i}`.
    TwoInZi,
    /// `4` in `Z`; classes `{0, 1, 2, 3}`.
    FourInZ,
    /// `1+i` in `Z[i]`; classes `{0, 1}`.
    OnePlusI,
}

impl Modulus {
    pub fn name(self) -> &'static str {
        match self {
            Modulus::TwoInZsqrt2 => "2 in Z[sqrt2]",
            Modulus::TwoInZisqrt2 => "2 in Z[isqrt2]",
            Modulus::TwoISqrt2 => "2isqrt2 in Z[isqrt2]",
            Modulus::TwoInZi => "2 in Z[i]",
            Modulus::FourInZ => "4 in Z",
            Modulus::OnePlusI => "1+i in Z[i]",
        }
    }

    /// The modulus as a ring element.
    pub fn element(self) -> RingInt {
        match self {
            Modulus::TwoInZsqrt2 | Modulus::TwoInZisqrt2 | Modulus::TwoInZi => RingInt::from_int(2),
            Modulus::TwoISqrt2 => RingInt::from_int(2) * RingInt::i_sqrt2(),
            Modulus::FourInZ => RingInt::from_int(4),
            Modulus::OnePlusI => RingInt::one() + RingInt::i(),
        }
    }

    /// All canonical representatives, in a fixed enumeration order.
    pub fn representatives(self) -> Vec<RingInt> {
        let pairs: Vec<(i64, i64)> = match self {
            Modulus::TwoInZsqrt2 | Modulus::TwoInZisqrt2 | Modulus::TwoInZi => {
                vec![(0, 0), (1, 0), (0, 1), (1, 1)]
            }
            Modulus::TwoISqrt2 => (0..2).flat_map(|y| (0..4).map(move |x| (x, y))).collect(),
            Modulus::FourInZ => (0..4).map(|x| (x, 0)).collect(),
            Modulus::OnePlusI => vec![(0, 0), (1, 0)],
        };
        pairs
            .into_iter()
            .map(|(x, y)| self.make(BigInt::from(x), BigInt::from(y)))
            .collect()
    }

    fn make(self, x: BigInt, y: BigInt) -> RingInt {
        match self {
            Modulus::TwoInZsqrt2 => RingInt::from_int(x) + RingInt::from_int(y) * RingInt::sqrt2(),
            Modulus::TwoInZisqrt2 | Modulus::TwoISqrt2 => {
                RingInt::from_int(x) + RingInt::from_int(y) * RingInt::i_sqrt2()
            }
            Modulus::TwoInZi | Modulus::OnePlusI => {
                RingInt::from_int(x) + RingInt::from_int(y) * RingInt::i()
            }
            Modulus::FourInZ => RingInt::from_int(x),
        }
    }
}

/// A canonical residue: the representative of an element's class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residue {
    pub modulus: Modulus,
    pub rep: RingInt,
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.rep, self.modulus.name())
    }
}

fn mod_pos(x: &BigInt, m: i64) -> BigInt {
    x.mod_floor(&BigInt::from(m))
}

/// Reduce `a` to its canonical representative modulo the given modulus.
///
/// The reduction is coefficient-wise in the base ring's natural basis:
/// mod 2 reduces both coordinates mod 2; mod `2*i*sqrt(2)` reduces the
/// rational part mod 4 and the radical part mod 2; mod `1+i` classes are
/// decided by the parity of `x + y`.
pub fn residue(a: &RingInt, modulus: Modulus) -> Result<Residue, RingError> {
    let rep = match modulus {
        Modulus::TwoInZsqrt2 => {
            let (x, y) = a
                .as_quad_real()
                .ok_or_else(|| RingError::OutsideBaseRing(a.to_string(), modulus.name()))?;
            modulus.make(mod_pos(&x, 2), mod_pos(&y, 2))
        }
        Modulus::TwoInZisqrt2 => {
            let (x, y) = a
                .as_quad_imag()
                .ok_or_else(|| RingError::OutsideBaseRing(a.to_string(), modulus.name()))?;
            modulus.make(mod_pos(&x, 2), mod_pos(&y, 2))
        }
        Modulus::TwoISqrt2 => {
            let (x, y) = a
                .as_quad_imag()
                .ok_or_else(|| RingError::OutsideBaseRing(a.to_string(), modulus.name()))?;
            modulus.make(mod_pos(&x, 4), mod_pos(&y, 2))
        }
        Modulus::TwoInZi => {
            let (x, y) = a
                .as_gauss()
                .ok_or_else(|| RingError::OutsideBaseRing(a.to_string(), modulus.name()))?;
            modulus.make(mod_pos(&x, 2), mod_pos(&y, 2))
        }
        Modulus::FourInZ => {
            let x = a
                .as_int()
                .ok_or_else(|| RingError::OutsideBaseRing(a.to_string(), modulus.name()))?;
            modulus.make(mod_pos(&x, 4), BigInt::zero())
        }
        Modulus::OnePlusI => {
            let (x, y) = a
                .as_gauss()
                .ok_or_else(|| RingError::OutsideBaseRing(a.to_string(), modulus.name()))?;
            modulus.make(mod_pos(&(x + y), 2), BigInt::zero())
        }
    };
    Ok(Residue { modulus, rep })
}

/// `a = b (mod m)` in the base ring of `m`.
pub fn congruent(a: &RingInt, b: &RingInt, modulus: Modulus) -> Result<bool, RingError> {
    Ok(residue(a, modulus)? == residue(b, modulus)?)
}

/// Residue predicates used by the synthesis reductions.
#[derive(Debug, Clone)]
pub struct ResidueFacts {
    /// `u^dag * u mod 2` in the element's quadratic ring, when defined.
    pub norm_mod_two: Option<u8>,
    /// The class of `u` modulo `2*i*sqrt(2)` (for `u` in `Z[i*sqrt(2)]`).
    pub class_mod_two_isqrt2: Option<Residue>,
    /// Whether that class lies in the admissible set `{1, 3, 1+irt2, 3+irt2}`.
    pub in_admissible_unreal_set: Option<bool>,
    /// For `u` in `Z[i]`: `Some(m)` with the least `m` such that
    /// `i^m * u = 1 (mod 2)`, when `u^2 = 1 (mod 2)`.
    pub gaussian_unit_exponent: Option<u8>,
}

/// Report the residue predicates of the synthesis reductions for `u`.
///
/// `u` must lie in `Z[i*sqrt(2)]` or `Z[i]` (elements of `Z` qualify for
/// both and both reports are filled in).
pub fn residue_facts(u: &RingInt) -> Result<ResidueFacts, RingError> {
    let mut facts = ResidueFacts {
        norm_mod_two: None,
        class_mod_two_isqrt2: None,
        in_admissible_unreal_set: None,
        gaussian_unit_exponent: None,
    };
    let norm = u.conj() * u.clone();
    if let Some((x, y)) = u.as_quad_imag() {
        let _ = (x, y);
        let n = norm
            .as_int()
            .expect("norm of a Z[isqrt2] element is rational");
        facts.norm_mod_two = Some(mod_pos(&n, 2).try_into().unwrap_or(0));
        let class = residue(u, Modulus::TwoISqrt2)?;
        let admissible: Vec<RingInt> = [(1, 0), (3, 0), (1, 1), (3, 1)]
            .iter()
            .map(|&(x, y)| Modulus::TwoISqrt2.make(BigInt::from(x), BigInt::from(y)))
            .collect();
        facts.in_admissible_unreal_set = Some(admissible.contains(&class.rep));
        facts.class_mod_two_isqrt2 = Some(class);
    }
    if let Some((_, _)) = u.as_gauss() {
        let n = norm.as_int().expect("norm of a Z[i] element is rational");
        if facts.norm_mod_two.is_none() {
            facts.norm_mod_two = Some(mod_pos(&n, 2).try_into().unwrap_or(0));
        }
        let sq = u.clone() * u.clone();
        if congruent(&sq, &RingInt::one(), Modulus::TwoInZi)? {
            for m in 0..4u8 {
                let v = RingInt::omega_pow(2 * m as i64) * u.clone();
                if congruent(&v, &RingInt::one(), Modulus::TwoInZi)? {
                    facts.gaussian_unit_exponent = Some(m);
                    break;
                }
            }
        }
    }
    if facts.norm_mod_two.is_none() {
        return Err(RingError::OutsideBaseRing(
            u.to_string(),
            "Z[isqrt2] or Z[i]",
        ));
    }
    Ok(facts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ri(c0: i64, c1: i64, c2: i64, c3: i64) -> RingInt {
        RingInt::new(c0, c1, c2, c3)
    }

    #[test]
    fn omega_times_omega_cubed_is_minus_one() {
        assert_eq!(RingInt::omega() * RingInt::omega_pow(3), ri(-1, 0, 0, 0));
    }

    #[test]
    fn one_plus_omega_times_one_minus_omega() {
        let a = RingInt::one() + RingInt::omega();
        let b = RingInt::one() - RingInt::omega();
        assert_eq!(a * b, ri(1, 0, -1, 0)); // 1 - i
    }

    #[test]
    fn sqrt2_squared_is_two() {
        assert_eq!(RingInt::sqrt2() * RingInt::sqrt2(), ri(2, 0, 0, 0));
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(RingInt::i().conj(), -RingInt::i());
        assert_eq!(RingInt::sqrt2().conj(), RingInt::sqrt2());
        assert_eq!(RingInt::omega().conj(), -RingInt::omega_pow(3));
    }

    #[test]
    fn div_sqrt2_examples() {
        assert_eq!(ri(2, 0, 0, 0).div_sqrt2(), Some(RingInt::sqrt2()));
        // (1 + i) / sqrt(2) = w, since w * sqrt(2) = 1 + i
        assert_eq!(RingInt::omega() * RingInt::sqrt2(), ri(1, 0, 1, 0));
        assert_eq!(ri(1, 0, 1, 0).div_sqrt2(), Some(RingInt::omega()));
        assert_eq!(RingInt::one().div_sqrt2(), None);
    }

    #[test]
    fn scalar_normalization() {
        let inv = RingScalar::inv_sqrt2();
        let sum = inv.clone() + inv;
        assert_eq!(sum, RingScalar::sqrt2());
        assert_eq!(sum.denom_exp(), 0);

        let prod = RingScalar::inv_sqrt2() * RingScalar::inv_sqrt2();
        assert_eq!(prod, RingScalar::half());
        assert_eq!(prod.denom_exp(), 2);
    }

    #[test]
    fn membership_examples() {
        assert_eq!(RingScalar::omega().membership(), RingTag::Zomega);
        assert_eq!(RingScalar::half().membership(), RingTag::D);
        assert_eq!(RingScalar::i_sqrt2().membership(), RingTag::Zisqrt2);
        assert_eq!(RingScalar::inv_sqrt2().membership(), RingTag::ZOverSqrt2);
        // i/sqrt(2) = (i*sqrt2)/2 already lies in D[isqrt2]
        assert_eq!(
            (RingScalar::i() * RingScalar::inv_sqrt2()).membership(),
            RingTag::Disqrt2
        );
        // w/2 = (1+i)/sqrt(2)^3 is super-Gaussian and in no smaller ring
        assert_eq!(
            (RingScalar::omega() * RingScalar::half()).membership(),
            RingTag::ZiOverSqrt2
        );
        assert_eq!(
            (RingScalar::one() + RingScalar::sqrt2()).membership(),
            RingTag::Zsqrt2
        );
        assert_eq!(
            ((RingScalar::one() + RingScalar::sqrt2()) * RingScalar::half()).membership(),
            RingTag::Dsqrt2
        );
        assert_eq!(
            ((RingScalar::one() + RingScalar::i_sqrt2()) * RingScalar::half()).membership(),
            RingTag::Disqrt2
        );
        assert_eq!(
            ((RingScalar::one() + RingScalar::i()) * RingScalar::half()).membership(),
            RingTag::Di
        );
    }

    #[test]
    fn lattice_order_is_consistent_with_membership() {
        // omega = (1+i)/sqrt(2) is in none of the four proper subrings.
        let w = RingScalar::omega();
        assert!(!w.in_d_i());
        assert!(!w.in_d_sqrt2());
        assert!(!w.in_d_isqrt2());
        assert!(!w.in_superintegral());
    }

    #[test]
    fn residue_examples() {
        // 3 + 2*sqrt(2) = 1 (mod 2) in Z[sqrt2]
        let a = RingInt::from_int(3) + RingInt::from_int(2) * RingInt::sqrt2();
        assert_eq!(
            residue(&a, Modulus::TwoInZsqrt2).unwrap().rep,
            RingInt::one()
        );

        // 5 + 3*irt2 = 1 + irt2 (mod 2 irt2)
        let b = RingInt::from_int(5) + RingInt::from_int(3) * RingInt::i_sqrt2();
        assert_eq!(
            residue(&b, Modulus::TwoISqrt2).unwrap().rep,
            RingInt::one() + RingInt::i_sqrt2()
        );

        // -1 = 3 (mod 2 irt2)
        let c = -RingInt::one();
        assert_eq!(
            residue(&c, Modulus::TwoISqrt2).unwrap().rep,
            RingInt::from_int(3)
        );

        // domain error
        assert!(residue(&RingInt::omega(), Modulus::FourInZ).is_err());
    }

    #[test]
    fn residue_facts_examples() {
        // u = 1 + irt2: u^dag u = 3 = 1 (mod 2)
        let u = RingInt::one() + RingInt::i_sqrt2();
        assert_eq!((u.conj() * u.clone()).as_int().unwrap(), BigInt::from(3));
        let f = residue_facts(&u).unwrap();
        assert_eq!(f.norm_mod_two, Some(1));
        assert_eq!(f.in_admissible_unreal_set, Some(true));

        // u = i in Z[i]: i*u = -1 = 1 (mod 2), least exponent 1
        let f = residue_facts(&RingInt::i()).unwrap();
        assert_eq!(f.gaussian_unit_exponent, Some(1));

        // u = 2 in Z[isqrt2]: u^dag u = 4 = 0 (mod 2)
        let f = residue_facts(&RingInt::from_int(2)).unwrap();
        assert_eq!(f.norm_mod_two, Some(0));
    }

    #[test]
    fn prop2_exhaustive_over_residue_classes() {
        // For all 8 classes of Z[irt2]/(2 irt2): norm mod 2 is 0 or 1, and
        // classes with norm 1 land in the admissible set.
        for rep in Modulus::TwoISqrt2.representatives() {
            let f = residue_facts(&rep).unwrap();
            let n = f.norm_mod_two.unwrap();
            assert!(n == 0 || n == 1);
            if n == 1 {
                assert_eq!(f.in_admissible_unreal_set, Some(true));
            }
        }
        // Sign rule: u = 3 iff -u = 1, and u = 3 + irt2 iff -u = 1 + irt2.
        for rep in Modulus::TwoISqrt2.representatives() {
            let neg = residue(&-rep.clone(), Modulus::TwoISqrt2).unwrap().rep;
            let is3 = rep == RingInt::from_int(3);
            let neg_is1 = neg == RingInt::one();
            assert_eq!(is3, neg_is1);
            let is3i = rep == RingInt::from_int(3) + RingInt::i_sqrt2();
            let neg_is1i = neg == RingInt::one() + RingInt::i_sqrt2();
            assert_eq!(is3i, neg_is1i);
        }
    }

    #[test]
    fn prop3_exhaustive_over_zi_mod_two() {
        // Over the 4 classes of Z[i]/(2): u^2 = 1 implies u = 1 or i.
        for rep in Modulus::TwoInZi.representatives() {
            let sq = rep.clone() * rep.clone();
            if congruent(&sq, &RingInt::one(), Modulus::TwoInZi).unwrap() {
                assert!(rep == RingInt::one() || rep == RingInt::i());
            }
        }
    }

    #[test]
    fn scalar_format_round_trip() {
        for text in [
            "(1,0,-1,0)",
            "(3,-2,5,7)/rt2^3",
            "0",
            "-4",
            "1/2",
            "-3/8",
            "i",
            "w",
            "rt2",
            "irt2",
            "-i",
        ] {
            let v = RingScalar::parse(text).unwrap();
            let v2 = RingScalar::parse(&v.to_string()).unwrap();
            assert_eq!(v, v2);
        }
        assert_eq!(RingScalar::parse("1/2").unwrap(), RingScalar::half());
        assert_eq!(RingScalar::parse("i").unwrap(), RingScalar::i());
        assert!(RingScalar::parse("1/3").is_err());
        assert!(RingScalar::parse("(1,2,3)").is_err());
    }

    fn arb_ringint() -> impl Strategy<Value = RingInt> {
        (-50i64..50, -50i64..50, -50i64..50, -50i64..50).prop_map(|(a, b, c, d)| ri(a, b, c, d))
    }

    fn arb_scalar() -> impl Strategy<Value = RingScalar> {
        (arb_ringint(), 0u32..6).prop_map(|(n, k)| RingScalar::new(n, k))
    }

    proptest! {
        #[test]
        fn add_sub_cancel(a in arb_ringint(), b in arb_ringint()) {
            prop_assert_eq!((a.clone() + b.clone()) - b, a);
        }

        #[test]
        fn conj_is_ring_homomorphism(a in arb_ringint(), b in arb_ringint()) {
            prop_assert_eq!((a.clone() * b.clone()).conj(), a.conj() * b.conj());
            prop_assert_eq!(a.conj().conj(), a);
        }

        #[test]
        fn sqrt2_divide_round_trip(a in arb_ringint()) {
            prop_assert_eq!(a.mul_sqrt2().div_sqrt2(), Some(a.clone()));
            prop_assert_eq!(RingScalar::from_ringint(a.clone()) * RingScalar::sqrt2(),
                            RingScalar::from_ringint(a.mul_sqrt2()));
        }

        #[test]
        fn scalar_mul_identity(x in arb_scalar()) {
            prop_assert_eq!(RingScalar::one() * x.clone(), x);
        }

        #[test]
        fn scalar_distributive(x in arb_scalar(), y in arb_scalar(), z in arb_scalar()) {
            prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y + x * z);
        }

        #[test]
        fn display_parse_round_trip(x in arb_scalar()) {
            let text = x.to_string();
            prop_assert_eq!(RingScalar::parse(&text).unwrap(), x);
        }

        #[test]
        fn residue_soundness(a in arb_ringint(), which in 0usize..6) {
            let modulus = [Modulus::TwoInZsqrt2, Modulus::TwoInZisqrt2, Modulus::TwoISqrt2,
                           Modulus::TwoInZi, Modulus::FourInZ, Modulus::OnePlusI][which];
            // Project a into the base ring first.
            let a = match modulus {
                Modulus::TwoInZsqrt2 => RingInt::from_int(a.coeffs()[0].clone()) + RingInt::from_int(a.coeffs()[1].clone()) * RingInt::sqrt2(),
                Modulus::TwoInZisqrt2 | Modulus::TwoISqrt2 => RingInt::from_int(a.coeffs()[0].clone()) + RingInt::from_int(a.coeffs()[1].clone()) * RingInt::i_sqrt2(),
                Modulus::TwoInZi | Modulus::OnePlusI => RingInt::from_int(a.coeffs()[0].clone()) + RingInt::from_int(a.coeffs()[1].clone()) * RingInt::i(),
                Modulus::FourInZ => RingInt::from_int(a.coeffs()[0].clone()),
            };
            let r = residue(&a, modulus).unwrap();
            // a - rep must be exactly divisible by the modulus.
            let diff = a - r.rep;
            prop_assert!(diff.exact_div(&modulus.element()).is_some());
        }

        #[test]
        fn membership_minimality(x in arb_scalar()) {
            // The reported tag contains x, and no strictly smaller tag does.
            let tag = x.membership();
            let contains = |t: RingTag, v: &RingScalar| -> bool {
                match t {
                    RingTag::Z => v.in_z(),
                    RingTag::Zsqrt2 => v.in_z_sqrt2(),
                    RingTag::Zisqrt2 => v.in_z_isqrt2(),
                    RingTag::Zi => v.in_zi(),
                    RingTag::Zomega => v.in_z_omega(),
                    RingTag::D => v.in_d(),
                    RingTag::Dsqrt2 => v.in_d_sqrt2(),
                    RingTag::Disqrt2 => v.in_d_isqrt2(),
                    RingTag::Di => v.in_d_i(),
                    RingTag::Domega => true,
                    RingTag::ZOverSqrt2 => v.in_superintegral(),
                    RingTag::ZiOverSqrt2 => v.in_supergaussian(),
                }
            };
            prop_assert!(contains(tag, &x));
            for t in [RingTag::Z, RingTag::Zsqrt2, RingTag::Zisqrt2, RingTag::Zi, RingTag::Zomega,
                      RingTag::D, RingTag::Dsqrt2, RingTag::Disqrt2, RingTag::Di,
                      RingTag::ZOverSqrt2, RingTag::ZiOverSqrt2, RingTag::Domega] {
                if t.leq(tag) && t != tag {
                    prop_assert!(!contains(t, &x), "tag {} also contains {} but is below {}", t, x, tag);
                }
            }
        }
    }
}
