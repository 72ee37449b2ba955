//! The five-qubit perfect code: codewords, generators, single-qubit error
//! injection, syndrome lookup, the ancilla-based restoration network and
//! the synthesized decoder.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{Circuit, Condition, RunOptions};
use crate::error::{Error, Result};
use crate::pauli::{GeneratorSet, Letter, PauliString};
use crate::statevector::StateVector;
use crate::synthesis::{append_measurement, synth_decoder, Decoder};
use crate::unitary::c;

pub const NUM_QUBITS: usize = 5;

/// Generator labels in measurement order.
pub const GENERATOR_LABELS: [&str; 4] = ["M3", "M4", "M0", "M1"];

const GENERATORS: [&str; 4] = ["X0 X1 Z2 Z4", "X1 X2 Z3 Z0", "X2 X3 Z4 Z1", "X3 X4 Z0 Z2"];

const ZERO_PLUS: [&str; 6] = ["00000", "11000", "01100", "00110", "00011", "10001"];
const ZERO_MINUS: [&str; 10] = [
    "10100", "01010", "00101", "10010", "01001", "11110", "01111", "10111", "11011", "11101",
];
const ONE_PLUS: [&str; 6] = ["11111", "00111", "10011", "11001", "11100", "01110"];
const ONE_MINUS: [&str; 10] = [
    "01011", "10101", "11010", "01101", "10110", "00001", "10000", "01000", "00100", "00010",
];

/// `a|0⟩_L + b|1⟩_L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogicalQubit {
    pub a: Complex64,
    pub b: Complex64,
}

impl LogicalQubit {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let norm_sqr = a.norm_sqr() + b.norm_sqr();
        if !norm_sqr.is_finite() {
            return Err(Error::NonFinite);
        }
        if (norm_sqr - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { a, b })
    }

    pub fn zero() -> Self {
        Self {
            a: c(1., 0.),
            b: c(0., 0.),
        }
    }

    pub fn one() -> Self {
        Self {
            a: c(0., 0.),
            b: c(1., 0.),
        }
    }

    /// The bare one-qubit state `a|0⟩ + b|1⟩`.
    pub fn bare(&self) -> StateVector {
        StateVector::from_amplitudes(vec![self.a, self.b]).expect("normalized by construction")
    }

    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
        let (a, b) = crate::random::random_qubit(rng);
        Self { a, b }
    }
}

/// Generator eigenvalue bits ordered (M3, M4, M0, M1); 1 ↔ eigenvalue −1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Syndrome(pub [bool; 4]);

impl Syndrome {
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let arr: [bool; 4] = bits.try_into().map_err(|_| Error::LengthMismatch {
            left: 4,
            right: bits.len(),
        })?;
        Ok(Self(arr))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|b| !b)
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.0 {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

fn codeword(plus: &[&str], minus: &[&str]) -> StateVector {
    let mut amps = vec![c(0., 0.); 1 << NUM_QUBITS];
    for (labels, sign) in [(plus, 0.25), (minus, -0.25)] {
        for l in labels {
            amps[usize::from_str_radix(l, 2).expect("binary label")] = c(sign, 0.);
        }
    }
    StateVector::from_amplitudes(amps).expect("16 terms of magnitude 1/4")
}

/// `(|0⟩_L, |1⟩_L)`.
pub fn logical_states() -> (StateVector, StateVector) {
    (
        codeword(&ZERO_PLUS, &ZERO_MINUS),
        codeword(&ONE_PLUS, &ONE_MINUS),
    )
}

/// The four stabilizer generators, labelled M3, M4, M0, M1.
pub fn generators() -> GeneratorSet {
    let gens = GENERATORS
        .iter()
        .map(|g| PauliString::parse_with_len(g, NUM_QUBITS).expect("valid literal"))
        .collect();
    GeneratorSet::with_labels(
        NUM_QUBITS,
        gens,
        GENERATOR_LABELS.iter().map(|s| s.to_string()).collect(),
    )
    .expect("commuting, independent generators")
}

pub fn encode(q: &LogicalQubit) -> Result<StateVector> {
    let q = LogicalQubit::new(q.a, q.b)?;
    let (zero, one) = logical_states();
    let amps = zero
        .amplitudes()
        .iter()
        .zip(one.amplitudes())
        .map(|(z, o)| q.a * z + q.b * o)
        .collect();
    StateVector::from_amplitudes(amps)
}

pub fn inject_error(state: &StateVector, letter: Letter, qubit: usize) -> Result<StateVector> {
    PauliString::single(state.num_qubits(), letter, qubit)?.apply_to(state)
}

/// Eigenvalue bits of the generators on `state`; `None` if `state` is not
/// a joint eigenstate.
pub fn measure_syndrome_dense(state: &StateVector) -> Result<Option<Syndrome>> {
    let mut bits = [false; 4];
    for (b, g) in bits.iter_mut().zip(generators().generators()) {
        match g.eigenvalue_on(state)? {
            Some(e) => *b = e < 0,
            None => return Ok(None),
        }
    }
    Ok(Some(Syndrome(bits)))
}

/// Every single-qubit Pauli error (and no error) with its syndrome, found by
/// applying the error to `|0⟩_L` and reading the generator eigenvalues.
pub fn syndrome_table() -> Result<BTreeMap<Syndrome, Option<(Letter, usize)>>> {
    let (zero, _) = logical_states();
    let mut table = BTreeMap::new();
    table.insert(Syndrome::default(), None);
    for q in 0..NUM_QUBITS {
        for letter in [Letter::X, Letter::Y, Letter::Z] {
            let s = measure_syndrome_dense(&inject_error(&zero, letter, q)?)?.ok_or_else(|| {
                Error::Numerical("corrupted codeword is not a generator eigenstate".into())
            })?;
            if table.insert(s, Some((letter, q))).is_some() {
                return Err(Error::Numerical(format!("syndrome {s} is not unique")));
            }
        }
    }
    Ok(table)
}

/// Nine wires: data 0–4 and ancillas 5–8 holding M3, M4, M0, M1. Each
/// generator is measured non-demolition into its own ancilla, then the
/// syndrome selects a one-bit Pauli correction.
pub fn restoration_network() -> Result<Circuit> {
    let mut circ = Circuit::new(NUM_QUBITS + 4);
    let gens = generators();
    for (i, (g, label)) in gens.generators().iter().zip(gens.labels()).enumerate() {
        append_measurement(&mut circ, g, NUM_QUBITS + i, label)?;
    }
    for (syn, fix) in syndrome_table()? {
        let Some((letter, q)) = fix else { continue };
        let conds = GENERATOR_LABELS
            .iter()
            .zip(syn.0)
            .map(|(l, b)| Condition {
                slot: l.to_string(),
                value: b,
            })
            .collect();
        circ.conditional(conds, letter.gate().expect("non-identity"), &[q])?;
    }
    Ok(circ)
}

#[derive(Clone, Debug)]
pub struct Restoration {
    pub data: StateVector,
    pub syndrome: Syndrome,
}

/// Runs the restoration network on a five-qubit data state with fresh
/// ancillas.
pub fn restore(data: &StateVector, seed: u64) -> Result<Restoration> {
    restore_with(&restoration_network()?, data, seed)
}

pub fn restore_with(network: &Circuit, data: &StateVector, seed: u64) -> Result<Restoration> {
    let input = data.tensor(&StateVector::basis_state(4, 0)?)?;
    let out = network.run(&input, &RunOptions::seeded(seed))?;
    let bits: Vec<bool> = GENERATOR_LABELS
        .iter()
        .map(|l| {
            out.bit(l)
                .ok_or_else(|| Error::UndefinedSlot(l.to_string()))
        })
        .collect::<Result<_>>()?;
    let (data, _) = out
        .state
        .conditional_state(&(0..NUM_QUBITS).collect::<Vec<_>>())?;
    Ok(Restoration {
        data,
        syndrome: Syndrome::from_bits(&bits)?,
    })
}

/// Synthesized decoder with its logical frame fixed so that the inverted
/// core re-creates the codewords above.
pub fn decoder() -> Result<Decoder> {
    let (zero, one) = logical_states();
    synth_decoder(&generators())?.with_frame(&[zero, one])
}
