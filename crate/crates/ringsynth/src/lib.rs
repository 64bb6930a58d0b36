//! Exact synthesis toolkit for restricted Clifford+T circuits.
//!
//! Unitary matrices over the subrings `Z[1/2]`, `Z[1/sqrt(2)]`,
//! `Z[1/isqrt(2)]` and `Z[1/2, i]` of the cyclotomic ring `Z[1/sqrt(2), i]`
//! correspond to circuits over restricted but universal gate sets built from
//! `{X, CX, CCX}` plus a Hadamard analogue and an optional phase gate. This
//! crate provides:
//!
//! - [`rings`]: exact arithmetic in `Z[w]` and its dyadic extensions,
//!   subring membership over the full inclusion lattice, and residues;
//! - [`linalg`]: exact dense matrices, multi-level operators, denominator
//!   exponents, determinants, and matrix-level ring classification;
//! - [`synth`]: the exact synthesis algorithms that decompose a unitary into
//!   a word of multi-level generators, including the ancilla-free
//!   determinant-1 variants;
//! - [`lowering`]: translation of generator words into gate-level circuits
//!   over the six gate sets, using at most one clean ancilla (or none);
//! - [`circuit`]: the gate-level IR with exact evaluation semantics and a
//!   text format, used as the verification oracle for everything upstream;
//! - [`selftest`]: exhaustive residue tables and circuit-identity
//!   checks shared by the test suite and the `selftest` CLI command.
//!
//! All arithmetic is exact; there is no floating point anywhere in the crate.
//!
//! # Quick start
//!
//! Classify a unitary, synthesize it, lower the word to a circuit with one
//! clean ancilla, and verify by exact evaluation:
//!
//! ```
//! use ringsynth::lowering::{lower_word, AncillaMode, GateSet};
//! use ringsynth::synth::{synthesize, AncillaPolicy, SynthRequest};
//! use ringsynth::{AncillaVerdict, RingMatrix, RingTag};
//!
//! // H (x) H, entered through the matrix text format.
//! let v = RingMatrix::parse(
//!     "dim 4 4\n\
//!      1/2 1/2 1/2 1/2\n\
//!      1/2 -1/2 1/2 -1/2\n\
//!      1/2 1/2 -1/2 -1/2\n\
//!      1/2 -1/2 -1/2 1/2\n",
//! )
//! .unwrap();
//! assert_eq!(v.classify(), RingTag::D);
//!
//! let result = synthesize(&SynthRequest {
//!     matrix: v.clone(),
//!     gateset: None, // minimal set from classification
//!     policy: AncillaPolicy::AllowOne,
//! })
//! .unwrap();
//! assert!(result.word.apply_to(&v).is_identity());
//!
//! let circuit = lower_word(&result.word, GateSet::Int, AncillaMode::OneClean).unwrap();
//! let ev = circuit.evaluate();
//! assert_eq!(ev.verdict, AncillaVerdict::Pass);
//! assert_eq!(ev.matrix, v);
//! ```

pub mod circuit;
pub mod linalg;
pub mod lowering;
pub mod rings;
pub mod selftest;
pub mod synth;

pub use circuit::{AncillaKind, AncillaVerdict, Circuit, Gate, GateName};
pub use linalg::{GenKind, Generator, GeneratorWord, LdeBase, RingMatrix};
pub use lowering::{AncillaMode, GateSet};
pub use rings::{Modulus, Residue, RingInt, RingScalar, RingTag};
pub use synth::{synthesize, AncillaPolicy, SynthRequest, SynthResult};
