//! Pauli strings in symplectic form and their conjugation through the
//! Clifford gates used by the measurement and decoding networks.
//!
//! A string is `i^k · ⊗_q σ_q` with `σ_q ∈ {I, X, Y, Z}` (Y the Hermitian
//! Pauli matrix). Wire `q` lives in bit `q` of the `x`/`z` masks.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::circuit::{Circuit, Op};
use crate::error::{Error, Result};
use crate::gates::{Gate, GateKind};
use crate::statevector::StateVector;
use crate::unitary::{c, Matrix, Unitary};

pub const MAX_PAULI_QUBITS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(ch: char) -> Option<Self> {
        match ch.to_ascii_uppercase() {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }

    pub fn matrix(self) -> Matrix {
        let o = c(0., 0.);
        let entries = match self {
            Letter::I => [c(1., 0.), o, o, c(1., 0.)],
            Letter::X => [o, c(1., 0.), c(1., 0.), o],
            Letter::Y => [o, c(0., -1.), c(0., 1.), o],
            Letter::Z => [c(1., 0.), o, o, c(-1., 0.)],
        };
        Matrix::from_row_slice(2, 2, &entries)
    }

    /// Library gate with this letter's matrix (`None` for identity).
    pub fn gate(self) -> Option<Gate> {
        match self {
            Letter::I => None,
            Letter::X => Some(Gate::x()),
            Letter::Y => Some(Gate::y()),
            Letter::Z => Some(Gate::z()),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Exponent `g` with `σ(x1,z1)·σ(x2,z2) = i^g · σ(x1⊕x2, z1⊕z2)`.
fn product_exponent(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2, z2) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    num_qubits: usize,
    x: u64,
    z: u64,
    /// Global phase is `i^phase`.
    phase: u8,
}

/// A one-bit Clifford given by the images of X and Z.
#[derive(Clone, Copy, Debug)]
struct OneBitRule {
    x_image: (Letter, u8),
    z_image: (Letter, u8),
}

const R_RULE: OneBitRule = OneBitRule {
    x_image: (Letter::Z, 0),
    z_image: (Letter::X, 0),
};
const RPRIME_RULE: OneBitRule = OneBitRule {
    x_image: (Letter::X, 0),
    z_image: (Letter::Y, 0),
};
const RPRIME_DAG_RULE: OneBitRule = OneBitRule {
    x_image: (Letter::X, 0),
    z_image: (Letter::Y, 2),
};
const X_RULE: OneBitRule = OneBitRule {
    x_image: (Letter::X, 0),
    z_image: (Letter::Z, 2),
};
const Y_RULE: OneBitRule = OneBitRule {
    x_image: (Letter::X, 2),
    z_image: (Letter::Z, 2),
};
const Z_RULE: OneBitRule = OneBitRule {
    x_image: (Letter::X, 2),
    z_image: (Letter::Z, 0),
};

/// The two one-bit basis changes of the measurement rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisChange {
    /// Interchanges X and Z; Y picks up a sign.
    R,
    /// X fixed, Y → −Z, Z → Y.
    RPrime,
}

impl PauliString {
    pub fn identity(num_qubits: usize) -> Result<Self> {
        if num_qubits > MAX_PAULI_QUBITS {
            return Err(Error::TooManyPauliQubits {
                got: num_qubits,
                max: MAX_PAULI_QUBITS,
            });
        }
        Ok(Self {
            num_qubits,
            x: 0,
            z: 0,
            phase: 0,
        })
    }

    /// `phase_exponent` counts powers of i.
    pub fn from_letters(phase_exponent: u8, letters: &[Letter]) -> Result<Self> {
        let mut p = Self::identity(letters.len())?;
        for (q, l) in letters.iter().enumerate() {
            p.set(q, *l);
        }
        p.phase = phase_exponent % 4;
        Ok(p)
    }

    /// Dense letter string such as `"XXZIZ"`.
    pub fn from_dense(letters: &str) -> Result<Self> {
        let ls: Option<Vec<Letter>> = letters.chars().map(Letter::from_char).collect();
        Self::from_letters(0, &ls.ok_or_else(|| Error::InvalidPauli(letters.into()))?)
    }

    pub fn single(num_qubits: usize, letter: Letter, qubit: usize) -> Result<Self> {
        let mut p = Self::identity(num_qubits)?;
        if qubit >= num_qubits {
            return Err(Error::WireOutOfRange {
                wire: qubit,
                num_qubits,
            });
        }
        p.set(qubit, letter);
        Ok(p)
    }

    /// Parses the wire-indexed syntax (`"-i X0 Z3"`) on a register of
    /// `num_qubits` qubits.
    pub fn parse_with_len(text: &str, num_qubits: usize) -> Result<Self> {
        let bad = || Error::InvalidPauli(text.trim().into());
        let (phase, body) = split_phase(text.trim());
        let tokens = body.split_whitespace();
        let mut p = Self::identity(num_qubits)?;
        let mut seen = 0u64;
        let mut any = false;
        for tok in tokens {
            any = true;
            if tok == "I" {
                continue;
            }
            let mut chars = tok.chars();
            let letter = chars.next().and_then(Letter::from_char).ok_or_else(bad)?;
            let qubit: usize = chars.as_str().parse().map_err(|_| bad())?;
            if qubit >= num_qubits {
                return Err(Error::WireOutOfRange {
                    wire: qubit,
                    num_qubits,
                });
            }
            if seen >> qubit & 1 == 1 {
                return Err(bad());
            }
            seen |= 1 << qubit;
            p.set(qubit, letter);
        }
        if !any && phase == 0 && !body.is_empty() {
            return Err(bad());
        }
        p.phase = phase;
        Ok(p)
    }

    /// Largest wire index mentioned in the wire-indexed syntax, if any.
    pub fn max_wire_in(text: &str) -> Option<usize> {
        split_phase(text.trim())
            .1
            .split_whitespace()
            .filter_map(|t| t.get(1..).and_then(|d| d.parse::<usize>().ok()))
            .max()
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        Letter::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.num_qubits).map(|q| self.letter(q)).collect()
    }

    fn set(&mut self, qubit: usize, letter: Letter) {
        let (x, z) = letter.bits();
        let mask = 1u64 << qubit;
        self.x = (self.x & !mask) | if x { mask } else { 0 };
        self.z = (self.z & !mask) | if z { mask } else { 0 };
    }

    /// Global phase as a power of i.
    pub fn phase_exponent(&self) -> u8 {
        self.phase
    }

    pub fn phase(&self) -> Complex64 {
        [c(1., 0.), c(0., 1.), c(-1., 0.), c(0., -1.)][self.phase as usize]
    }

    pub fn with_phase(mut self, exponent: u8) -> Self {
        self.phase = exponent % 4;
        self
    }

    pub fn negated(self) -> Self {
        let ph = self.phase + 2;
        self.with_phase(ph)
    }

    /// Hermitian strings carry phase ±1.
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    /// `+1` or `-1` for Hermitian strings.
    pub fn sign(&self) -> Option<i8> {
        match self.phase {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.num_qubits)
            .filter(|&q| (self.x | self.z) >> q & 1 == 1)
            .collect()
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// `(x | z)` as a 128-bit symplectic row.
    pub(crate) fn symplectic_row(&self) -> u128 {
        self.x as u128 | (self.z as u128) << 64
    }

    /// Letters only, e.g. `"X0 X1 Z2 Z4"` (identity prints as `"I"`).
    pub fn letter_string(&self) -> String {
        let parts: Vec<String> = self
            .support()
            .iter()
            .map(|&q| format!("{}{}", self.letter(q), q))
            .collect();
        if parts.is_empty() {
            "I".into()
        } else {
            parts.join(" ")
        }
    }

    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::LengthMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(())
    }

    /// Operator product `self · other` with exact phase.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_len(other)?;
        let mut g: i32 = self.phase as i32 + other.phase as i32;
        for q in 0..self.num_qubits {
            g += product_exponent(
                self.x >> q & 1 == 1,
                self.z >> q & 1 == 1,
                other.x >> q & 1 == 1,
                other.z >> q & 1 == 1,
            );
        }
        Ok(PauliString {
            num_qubits: self.num_qubits,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: g.rem_euclid(4) as u8,
        })
    }

    /// True iff the positions with distinct non-identity letters are even
    /// in number.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_len(other)?;
        Ok(((self.x & other.z) ^ (self.z & other.x))
            .count_ones()
            .is_multiple_of(2))
    }

    fn check_wire(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::WireOutOfRange {
                wire: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// `U_XOR · P · U_XOR†` for an XOR from `source` to `target`.
    pub fn conjugate_by_xor(&self, source: usize, target: usize) -> Result<PauliString> {
        self.check_wire(source)?;
        self.check_wire(target)?;
        if source == target {
            return Err(Error::DuplicateWire(source));
        }
        let bit = |m: u64, q: usize| m >> q & 1 == 1;
        let (xs, zs, xt, zt) = (
            bit(self.x, source),
            bit(self.z, source),
            bit(self.x, target),
            bit(self.z, target),
        );
        let mut out = *self;
        if xs && zt && (xt == zs) {
            out.phase = (out.phase + 2) % 4;
        }
        if xs {
            out.x ^= 1 << target;
        }
        if zt {
            out.z ^= 1 << source;
        }
        Ok(out)
    }

    fn conjugate_by_rule(&self, qubit: usize, rule: OneBitRule) -> Result<PauliString> {
        self.check_wire(qubit)?;
        let image = match self.letter(qubit) {
            Letter::I => return Ok(*self),
            Letter::X => rule.x_image,
            Letter::Z => rule.z_image,
            Letter::Y => {
                // Y = i·X·Z
                let (lx, px) = rule.x_image;
                let (lz, pz) = rule.z_image;
                let (bx, bz) = (lx.bits(), lz.bits());
                let g = product_exponent(bx.0, bx.1, bz.0, bz.1);
                let letter = Letter::from_bits(bx.0 ^ bz.0, bx.1 ^ bz.1);
                (letter, (1 + px as i32 + pz as i32 + g).rem_euclid(4) as u8)
            }
        };
        let mut out = *self;
        out.set(qubit, image.0);
        out.phase = (out.phase + image.1) % 4;
        Ok(out)
    }

    /// Conjugation by the one-bit basis change `R` or `R′` on `qubit`.
    pub fn conjugate_by_onebit(&self, qubit: usize, which: BasisChange) -> Result<PauliString> {
        match which {
            BasisChange::R => self.conjugate_by_rule(qubit, R_RULE),
            BasisChange::RPrime => self.conjugate_by_rule(qubit, RPRIME_RULE),
        }
    }

    /// Conjugation by a library gate, for the gates that have a rule.
    pub fn conjugate_by_gate(&self, gate: &Gate, wires: &[usize]) -> Result<PauliString> {
        let unsupported = || Error::UnsupportedGate(gate.to_string());
        if gate.arity() != wires.len() {
            return Err(Error::ArityMismatch {
                expected: gate.arity(),
                got: wires.len(),
            });
        }
        let rule = match (gate.kind(), gate.is_dagger()) {
            (GateKind::Xor, _) => return self.conjugate_by_xor(wires[0], wires[1]),
            (GateKind::PhaseXor, _) => {
                let h = self.conjugate_by_rule(wires[1], R_RULE)?;
                let x = h.conjugate_by_xor(wires[0], wires[1])?;
                return x.conjugate_by_rule(wires[1], R_RULE);
            }
            (GateKind::R | GateKind::Hadamard, _) => R_RULE,
            (GateKind::RPrime, false) => RPRIME_RULE,
            (GateKind::RPrime, true) => RPRIME_DAG_RULE,
            (GateKind::X, _) => X_RULE,
            (GateKind::Y, _) => Y_RULE,
            (GateKind::Z, _) => Z_RULE,
            _ => return Err(unsupported()),
        };
        self.conjugate_by_rule(wires[0], rule)
    }

    /// `U_c · P · U_c†`, applying per-gate rules left to right.
    pub fn conjugate_through(&self, circuit: &Circuit) -> Result<PauliString> {
        if circuit.num_wires() != self.num_qubits {
            return Err(Error::LengthMismatch {
                left: self.num_qubits,
                right: circuit.num_wires(),
            });
        }
        let mut p = *self;
        for op in circuit.ops() {
            match op {
                Op::Gate(g) => p = p.conjugate_by_gate(&g.gate, &g.wires)?,
                Op::Measure { .. } => return Err(Error::UnsupportedGate("measure".into())),
                Op::Conditional { .. } => return Err(Error::UnsupportedGate("cond".into())),
            }
        }
        Ok(p)
    }

    /// Dense `2^n × 2^n` matrix (qubit 0 most significant).
    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::from_element(1, 1, self.phase());
        for q in 0..self.num_qubits {
            m = m.kronecker(&self.letter(q).matrix());
        }
        m
    }

    pub fn to_unitary(&self) -> Unitary {
        Unitary::from_matrix_unchecked(self.to_matrix())
    }

    /// `P|ψ⟩`, computed basis state by basis state.
    pub fn apply_to(&self, state: &StateVector) -> Result<StateVector> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::LengthMismatch {
                left: self.num_qubits,
                right: state.num_qubits(),
            });
        }
        let n = self.num_qubits;
        let to_index_mask = |m: u64| {
            (0..n)
                .filter(|q| m >> q & 1 == 1)
                .map(|q| 1usize << (n - 1 - q))
                .sum::<usize>()
        };
        let (xm, zm) = (to_index_mask(self.x), to_index_mask(self.z));
        let y_count = (self.x & self.z).count_ones() as u8;
        let base =
            [c(1., 0.), c(0., 1.), c(-1., 0.), c(0., -1.)][((self.phase + y_count) % 4) as usize];
        let amps = state.amplitudes();
        let mut out = vec![c(0., 0.); amps.len()];
        for (i, a) in amps.iter().enumerate() {
            let sign = if (i & zm).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            out[i ^ xm] = a * base * sign;
        }
        StateVector::from_amplitudes(out)
    }

    /// `Some(±1)` when `P|ψ⟩ = ±|ψ⟩` within 1e-9, otherwise `None`.
    pub fn eigenvalue_on(&self, state: &StateVector) -> Result<Option<i8>> {
        let image = self.apply_to(state)?;
        let close = |sign: f64| {
            image
                .amplitudes()
                .iter()
                .zip(state.amplitudes())
                .all(|(a, b)| (a - b * sign).norm() < 1e-9)
        };
        Ok(if close(1.0) {
            Some(1)
        } else if close(-1.0) {
            Some(-1)
        } else {
            None
        })
    }
}

/// Eigenvalue of `p` on `state` if `state` is a ±1 eigenvector.
pub fn is_stabilizer_of(p: &PauliString, state: &StateVector) -> Result<Option<i8>> {
    p.eigenvalue_on(state)
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["", "i ", "-", "-i "][self.phase as usize];
        if self.phase == 2 {
            write!(f, "- {}", self.letter_string())
        } else {
            write!(f, "{prefix}{}", self.letter_string())
        }
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Register size is one past the largest wire index mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let n = Self::max_wire_in(s).map_or(1, |m| m + 1);
        Self::parse_with_len(s, n)
    }
}

/// Splits a leading `+`, `-`, `i`, `+i`, `-i`, `+1` or `-1`, attached to
/// the first letter or not, from the rest.
fn split_phase(text: &str) -> (u8, &str) {
    for (prefix, ph) in [
        ("+i", 1),
        ("-i", 3),
        ("+1", 0),
        ("-1", 2),
        ("+", 0),
        ("-", 2),
        ("i", 1),
    ] {
        if let Some(rest) = text.strip_prefix(prefix) {
            if rest.is_empty()
                || rest.starts_with(|c: char| c.is_whitespace() || "IXYZ".contains(c))
            {
                return (ph, rest.trim_start());
            }
        }
    }
    (0, text)
}

/// GF(2) rank of symplectic rows.
pub(crate) fn gf2_rank(mut rows: Vec<u128>) -> usize {
    let mut rank = 0;
    for bit in 0..128 {
        let mask = 1u128 << bit;
        if let Some(pivot) = (rank..rows.len()).find(|&i| rows[i] & mask != 0) {
            rows.swap(rank, pivot);
            let p = rows[rank];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && *r & mask != 0 {
                    *r ^= p;
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Mutually commuting, independent, Hermitian Pauli strings on one register.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    num_qubits: usize,
    generators: Vec<PauliString>,
    labels: Vec<String>,
}

impl GeneratorSet {
    pub fn new(num_qubits: usize, generators: Vec<PauliString>) -> Result<Self> {
        let labels = (0..generators.len()).map(|i| format!("g{i}")).collect();
        Self::with_labels(num_qubits, generators, labels)
    }

    pub fn with_labels(
        num_qubits: usize,
        generators: Vec<PauliString>,
        labels: Vec<String>,
    ) -> Result<Self> {
        if labels.len() != generators.len() {
            return Err(Error::DimensionMismatch {
                left: labels.len(),
                right: generators.len(),
            });
        }
        for (i, g) in generators.iter().enumerate() {
            if g.num_qubits() != num_qubits {
                return Err(Error::LengthMismatch {
                    left: num_qubits,
                    right: g.num_qubits(),
                });
            }
            if !g.is_hermitian() {
                return Err(Error::NonHermitianGenerator(i));
            }
            for (j, h) in generators.iter().enumerate().take(i) {
                if !g.commutes(h)? {
                    return Err(Error::NonCommuting(j, i));
                }
            }
        }
        if gf2_rank(generators.iter().map(PauliString::symplectic_row).collect())
            != generators.len()
        {
            return Err(Error::DependentGenerators);
        }
        Ok(Self {
            num_qubits,
            generators,
            labels,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Number of encoded qubits, `n − (number of generators)`.
    pub fn logical_qubits(&self) -> usize {
        self.num_qubits - self.generators.len()
    }
}
