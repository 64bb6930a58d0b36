//! Command-line front end for the exact-synthesis toolkit.
//!
//! Exit codes: 0 success, 1 file or parse error, 2 non-unitary input,
//! 3 unsupported ring or ancilla-free infeasibility, 4 verification
//! mismatch.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::exit;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ringsynth::circuit::AncillaVerdict;
use ringsynth::lowering::{lower_word, AncillaMode, GateSet};
use ringsynth::synth::{random_word, synthesize, AncillaPolicy, SynthError, SynthRequest};
use ringsynth::{Circuit, GeneratorWord, RingMatrix, RingScalar};

#[derive(Parser)]
#[command(
    name = "ringsynth",
    version,
    about = "Exact synthesis for restricted Clifford+T circuits"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a unitary matrix: minimal ring and applicable gate set.
    Classify {
        /// Matrix file (text format: `dim r c` header then scalar rows).
        matrix: PathBuf,
    },
    /// Synthesize a unitary into a generator word.
    Synth {
        matrix: PathBuf,
        /// Target gate set: auto|int|supint|real|imag|gauss|supgauss.
        #[arg(long, default_value = "auto")]
        gateset: String,
        /// Ancilla policy: one|none.
        #[arg(long, default_value = "one")]
        ancilla: String,
        /// Output word file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower a generator word to a gate-level circuit.
    Lower {
        word: PathBuf,
        /// Target gate set: int|supint|real|imag|gauss|supgauss.
        #[arg(long)]
        gateset: String,
        /// Ancilla mode: one|none.
        #[arg(long, default_value = "one")]
        ancilla: String,
        /// Output circuit file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a circuit exactly and compare against a matrix.
    Verify { circuit: PathBuf, matrix: PathBuf },
    /// Write the matrix of a random generator word (deterministic per seed).
    Random {
        /// Gate set: int|supint|real|imag|gauss|supgauss.
        #[arg(long)]
        gateset: String,
        /// Number of qubits (dimension 2^n).
        #[arg(long)]
        n: usize,
        /// Word length.
        #[arg(long)]
        len: usize,
        /// RNG seed; falls back to RINGSYNTH_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Draw from the determinant-1 generator set (imag/gauss only).
        #[arg(long)]
        det1: bool,
        /// Output matrix file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the exhaustive residue-table and circuit-identity suites.
    Selftest,
}

fn fail(code: i32, msg: String) -> ! {
    eprintln!("error: {msg}");
    exit(code);
}

fn read_file(path: &Path) -> String {
    match fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => fail(1, format!("cannot read {}: {e}", path.display())),
    }
}

fn write_out(out: Option<PathBuf>, text: &str) {
    match out {
        Some(path) => {
            if let Err(e) = fs::write(&path, text) {
                fail(1, format!("cannot write {}: {e}", path.display()));
            }
        }
        None => print!("{text}"),
    }
}

fn parse_matrix(path: &Path) -> RingMatrix {
    match RingMatrix::parse(&read_file(path)) {
        Ok(m) => m,
        Err(e) => fail(1, format!("{}: {e}", path.display())),
    }
}

fn parse_gateset(s: &str) -> GateSet {
    GateSet::from_flag(s).unwrap_or_else(|| {
        fail(
            1,
            format!("unknown gate set `{s}` (expected int|supint|real|imag|gauss|supgauss)"),
        )
    })
}

fn parse_ancilla_policy(s: &str) -> AncillaPolicy {
    match s {
        "one" => AncillaPolicy::AllowOne,
        "none" => AncillaPolicy::AncillaFree,
        other => fail(
            1,
            format!("unknown ancilla policy `{other}` (expected one|none)"),
        ),
    }
}

fn parse_ancilla_mode(s: &str) -> AncillaMode {
    match s {
        "one" => AncillaMode::OneClean,
        "none" => AncillaMode::None,
        other => fail(
            1,
            format!("unknown ancilla mode `{other}` (expected one|none)"),
        ),
    }
}

fn synth_exit_code(e: &SynthError) -> i32 {
    match e {
        SynthError::NotUnitary => 2,
        SynthError::UnsupportedRing(_)
        | SynthError::RingMismatch { .. }
        | SynthError::NotAncillaFree(_)
        | SynthError::AncillaFreeUnsupported => 3,
        _ => 1,
    }
}

fn cmd_classify(path: &Path) {
    let m = parse_matrix(path);
    if !m.is_unitary() {
        // Report the first offending entry of M^dag M for diagnosis.
        let p = m.dagger().mul(&m);
        for r in 1..=p.rows() {
            for c in 1..=p.cols() {
                let want = if r == c {
                    RingScalar::one()
                } else {
                    RingScalar::zero()
                };
                if p.get(r, c) != &want {
                    fail(
                        2,
                        format!(
                            "matrix is not unitary: (M^dag M)[{r},{c}] = {}",
                            p.get(r, c)
                        ),
                    );
                }
            }
        }
        fail(2, "matrix is not unitary".into());
    }
    let tag = m.classify();
    match GateSet::minimal_for(tag) {
        Some(gs) => println!("{}  gateset={}", tag, gs.gates_text()),
        None => println!("{}  unsupported for synthesis", tag),
    }
}

fn cmd_synth(path: &Path, gateset: &str, ancilla: &str, out: Option<PathBuf>) {
    let matrix = parse_matrix(path);
    let gs = if gateset == "auto" {
        None
    } else {
        Some(parse_gateset(gateset))
    };
    let policy = parse_ancilla_policy(ancilla);
    let req = SynthRequest {
        matrix,
        gateset: gs,
        policy,
    };
    match synthesize(&req) {
        Ok(res) => {
            eprintln!("gateset: {}", res.gateset.name());
            eprintln!("word length: {}", res.word.len());
            for t in &res.trace {
                let steps: Vec<String> = t.ldes.iter().map(|q| q.to_string()).collect();
                eprintln!("column {}: lde {}", t.column, steps.join(" -> "));
            }
            write_out(out, &res.word.serialize());
        }
        Err(e) => fail(synth_exit_code(&e), e.to_string()),
    }
}

fn cmd_lower(path: &Path, gateset: &str, ancilla: &str, out: Option<PathBuf>) {
    let word = match GeneratorWord::parse(&read_file(path)) {
        Ok(w) => w,
        Err(e) => fail(1, format!("{}: {e}", path.display())),
    };
    let gs = parse_gateset(gateset);
    let mode = parse_ancilla_mode(ancilla);
    match lower_word(&word, gs, mode) {
        Ok(c) => {
            eprintln!("gates: {}", c.len());
            write_out(out, &c.serialize());
        }
        Err(e) => fail(3, e.to_string()),
    }
}

fn cmd_verify(circuit_path: &Path, matrix_path: &Path) {
    let circuit = match Circuit::parse(&read_file(circuit_path)) {
        Ok(c) => c,
        Err(e) => fail(1, format!("{}: {e}", circuit_path.display())),
    };
    let matrix = parse_matrix(matrix_path);
    let ev = circuit.evaluate();
    if let AncillaVerdict::Fail { column, row } = ev.verdict {
        fail(
            4,
            format!("ancilla contract violated at basis column {column}, row {row}"),
        );
    }
    if ev.matrix.rows() != matrix.rows() || ev.matrix.cols() != matrix.cols() {
        fail(
            4,
            format!(
                "dimension mismatch: circuit acts on {} components, matrix has {}",
                ev.matrix.rows(),
                matrix.rows()
            ),
        );
    }
    for r in 1..=matrix.rows() {
        for c in 1..=matrix.cols() {
            if ev.matrix.get(r, c) != matrix.get(r, c) {
                fail(
                    4,
                    format!(
                        "mismatch at entry ({r},{c}): circuit gives {}, matrix has {}",
                        ev.matrix.get(r, c),
                        matrix.get(r, c)
                    ),
                );
            }
        }
    }
    println!("pass");
}

fn cmd_random(
    gateset: &str,
    n: usize,
    len: usize,
    seed: Option<u64>,
    det1: bool,
    out: Option<PathBuf>,
) {
    let gs = parse_gateset(gateset);
    if det1 && !matches!(gs, GateSet::Imag | GateSet::Gauss) {
        fail(1, "--det1 requires --gateset imag or gauss".into());
    }
    let seed = seed
        .or_else(|| {
            std::env::var("RINGSYNTH_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 1usize << n;
    let word = random_word(gs, det1, dim, len, &mut rng);
    let matrix = word.product();
    write_out(out, &matrix.serialize());
}

fn cmd_selftest() -> i32 {
    let reports = ringsynth::selftest::run_all();
    let mut failures = 0;
    for r in &reports {
        if r.pass {
            println!("PASS {}", r.name);
        } else {
            println!("FAIL {} ({})", r.name, r.detail);
            failures += 1;
        }
    }
    println!("{} checks, {} failures", reports.len(), failures);
    i32::from(failures > 0)
}

fn main() {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Classify { matrix } => cmd_classify(&matrix),
        Cmd::Synth {
            matrix,
            gateset,
            ancilla,
            out,
        } => cmd_synth(&matrix, &gateset, &ancilla, out),
        Cmd::Lower {
            word,
            gateset,
            ancilla,
            out,
        } => cmd_lower(&word, &gateset, &ancilla, out),
        Cmd::Verify { circuit, matrix } => cmd_verify(&circuit, &matrix),
        Cmd::Random {
            gateset,
            n,
            len,
            seed,
            det1,
            out,
        } => cmd_random(&gateset, n, len, seed, det1, out),
        Cmd::Selftest => exit(cmd_selftest()),
    }
}
