//! Non-demolition measurement circuits for Pauli operators and decoding
//! networks for stabilizer codes, synthesized by tracking how the generators
//! evolve under each stage of basis changes and XORs.

use serde::Serialize;

use crate::circuit::{Circuit, Condition, RunOptions};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::pauli::{GeneratorSet, Letter, PauliString};
use crate::statevector::StateVector;
use crate::unitary::{c, Matrix, Unitary, EQ_TOL};

/// One-bit gates that turn every X/Y site of `p` into Z (R for X, R′ for Y).
pub fn basis_change_circuit(p: &PauliString, num_wires: usize) -> Result<Circuit> {
    let mut circ = Circuit::new(num_wires);
    for q in p.support() {
        match p.letter(q) {
            Letter::X => {
                circ.add(Gate::r(), &[q])?;
            }
            Letter::Y => {
                circ.add(Gate::r_prime(), &[q])?;
            }
            _ => {}
        }
    }
    Ok(circ)
}

/// Appends a non-demolition measurement of `p` (acting on wires
/// `0..p.num_qubits()`) using `ancilla`, which must start in `|0⟩`. The
/// recorded bit is 0 for eigenvalue +1 and 1 for −1.
pub fn append_measurement(
    circuit: &mut Circuit,
    p: &PauliString,
    ancilla: usize,
    slot: &str,
) -> Result<()> {
    if p.is_identity() {
        return Err(Error::IdentityOperator);
    }
    if !p.is_hermitian() {
        return Err(Error::InvalidPauli(p.to_string()));
    }
    if p.num_qubits() > circuit.num_wires()
        || ancilla < p.num_qubits()
        || ancilla >= circuit.num_wires()
    {
        return Err(Error::WireOutOfRange {
            wire: ancilla,
            num_qubits: circuit.num_wires(),
        });
    }
    let change = basis_change_circuit(p, p.num_qubits())?;
    let z_form = p.conjugate_through(&change)?;
    let flip = z_form.sign() != Some(1);
    circuit.append(&widen(&change, circuit.num_wires())?)?;
    for q in p.support() {
        circuit.add(Gate::xor(), &[q, ancilla])?;
    }
    circuit.append(&widen(&change.invert()?, circuit.num_wires())?)?;
    if flip {
        circuit.add(Gate::x(), &[ancilla])?;
    }
    circuit.measure(ancilla, slot)?;
    Ok(())
}

fn widen(c: &Circuit, num_wires: usize) -> Result<Circuit> {
    let mut out = Circuit::new(num_wires);
    out.append_mapped(c, &(0..c.num_wires()).collect::<Vec<_>>())?;
    Ok(out)
}

/// Circuit on `n + 1` wires measuring `p` into slot `"m"` via ancilla `n`.
pub fn synth_measurement(p: &PauliString) -> Result<Circuit> {
    let mut circ = Circuit::new(p.num_qubits() + 1);
    append_measurement(&mut circ, p, p.num_qubits(), "m")?;
    Ok(circ)
}

/// One decoding stage and the generator lists it produced.
#[derive(Clone, Debug)]
pub struct SynthesisStage {
    /// Basis changes, XORs and an optional sign fix, on all wires.
    pub circuit: Circuit,
    /// Index into the incoming list of the generator that was simplified.
    pub selected: usize,
    pub measured_wire: usize,
    pub slot: String,
    /// Incoming list after the basis changes.
    pub after_basis_change: Vec<PauliString>,
    /// Incoming list after the whole stage; the selected entry is `Z` on
    /// the measured wire.
    pub after_collapse: Vec<PauliString>,
    /// What is left for the next stage, free of the measured wire.
    pub remaining: Vec<PauliString>,
}

#[derive(Clone, Debug, Default)]
pub struct SynthesisTrace {
    pub stages: Vec<SynthesisStage>,
}

/// JSON view of a trace: letter strings per list.
#[derive(Clone, Debug, Serialize)]
pub struct StageSummary {
    pub measured_wire: usize,
    pub slot: String,
    pub gates: Vec<String>,
    pub after_basis_change: Vec<String>,
    pub after_collapse: Vec<String>,
    pub remaining: Vec<String>,
}

impl SynthesisTrace {
    pub fn summary(&self) -> Vec<StageSummary> {
        let strs = |ps: &[PauliString]| ps.iter().map(|p| p.to_string()).collect();
        self.stages
            .iter()
            .map(|s| StageSummary {
                measured_wire: s.measured_wire,
                slot: s.slot.clone(),
                gates: s.circuit.ops().iter().map(|o| o.to_string()).collect(),
                after_basis_change: strs(&s.after_basis_change),
                after_collapse: strs(&s.after_collapse),
                remaining: strs(&s.remaining),
            })
            .collect()
    }

    pub fn measured_wires(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.measured_wire).collect()
    }
}

/// A measured wire and the set of original generators whose product it
/// measures: raw bit = XOR of the syndrome bits listed in `generators`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScheduleEntry {
    pub wire: usize,
    pub slot: String,
    pub generators: Vec<usize>,
}

/// A single-qubit Pauli error: letter and wire.
pub type PauliError = (Letter, usize);

/// Raw measured bits (schedule order) mapped to the gate that restores the
/// bare qubit.
#[derive(Clone, Debug)]
pub struct Correction {
    pub raw_bits: Vec<bool>,
    pub gate: Gate,
    /// Single-qubit errors `(letter, wire)` producing these bits.
    pub errors: Vec<PauliError>,
}

impl Correction {
    /// True when the bits call for no action on the bare qubit.
    pub fn is_identity(&self) -> bool {
        let m = self.gate.matrix();
        m.max_entry_diff(&Unitary::identity(m.num_qubits()))
            .is_ok_and(|d| d < EQ_TOL)
    }
}

#[derive(Clone, Debug)]
pub struct Decoder {
    pub generators: GeneratorSet,
    pub trace: SynthesisTrace,
    pub schedule: Vec<ScheduleEntry>,
    pub bare_wires: Vec<usize>,
    /// Rotation on the bare wire fixing the logical basis, if set.
    pub frame: Option<Unitary>,
    pub corrections: Vec<Correction>,
    /// Single-qubit errors sharing raw bits with an earlier error that
    /// needs a different correction; the code cannot fix these.
    pub uncorrectable: Vec<PauliError>,
}

#[derive(Clone, Debug)]
pub struct DecodeResult {
    /// State of the bare wire(s).
    pub bare: StateVector,
    /// Bits as measured, in schedule order.
    pub raw_bits: Vec<bool>,
    /// Generator eigenvalue bits (1 ↔ −1), in generator order.
    pub syndrome: Vec<bool>,
}

fn select_generator(ops: &[PauliString]) -> usize {
    let max_wire = |p: &PauliString| *p.support().last().expect("non-identity generator");
    (0..ops.len())
        .min_by_key(|&i| (std::cmp::Reverse(max_wire(&ops[i])), ops[i].weight(), i))
        .expect("non-empty list")
}

/// Synthesizes the decoding network stage by stage. Each stage rotates one
/// generator to an all-Z string, XORs its support onto its highest wire,
/// measures that wire, and multiplies the measured operator out of every
/// remaining generator.
pub fn synth_decoder(g: &GeneratorSet) -> Result<Decoder> {
    let n = g.num_qubits();
    let mut ops: Vec<PauliString> = g.generators().to_vec();
    let mut masks: Vec<u64> = (0..ops.len()).map(|i| 1u64 << i).collect();
    let mut trace = SynthesisTrace::default();
    let mut schedule = Vec::new();
    while !ops.is_empty() {
        let sel = select_generator(&ops);
        let target = ops[sel];
        let change = basis_change_circuit(&target, n)?;
        let after_basis_change: Vec<PauliString> = ops
            .iter()
            .map(|p| p.conjugate_through(&change))
            .collect::<Result<_>>()?;
        let support = target.support();
        let wire = *support.last().expect("non-identity generator");
        let mut stage = change.clone();
        for &q in &support[..support.len() - 1] {
            stage.add(Gate::xor(), &[q, wire])?;
        }
        if target.conjugate_through(&stage)?.sign() != Some(1) {
            stage.add(Gate::x(), &[wire])?;
        }
        let after_collapse: Vec<PauliString> = ops
            .iter()
            .map(|p| p.conjugate_through(&stage))
            .collect::<Result<_>>()?;
        let measured = after_collapse[sel];
        debug_assert_eq!(measured, PauliString::single(n, Letter::Z, wire)?);
        let mut remaining = Vec::new();
        let mut remaining_masks = Vec::new();
        for (i, p) in after_collapse.iter().enumerate() {
            if i == sel {
                continue;
            }
            let (mut p, mut m) = (*p, masks[i]);
            match p.letter(wire) {
                Letter::I => {}
                Letter::Z => {
                    p = p.multiply(&measured)?;
                    m ^= masks[sel];
                }
                _ => return Err(Error::NonCommuting(sel, i)),
            }
            remaining.push(p);
            remaining_masks.push(m);
        }
        let slot = format!("s{wire}");
        schedule.push(ScheduleEntry {
            wire,
            slot: slot.clone(),
            generators: (0..g.len()).filter(|i| masks[sel] >> i & 1 == 1).collect(),
        });
        trace.stages.push(SynthesisStage {
            circuit: stage,
            selected: sel,
            measured_wire: wire,
            slot,
            after_basis_change,
            after_collapse,
            remaining: remaining.clone(),
        });
        ops = remaining;
        masks = remaining_masks;
    }
    let measured: Vec<usize> = schedule.iter().map(|s| s.wire).collect();
    let bare_wires = (0..n).filter(|w| !measured.contains(w)).collect();
    let mut decoder = Decoder {
        generators: g.clone(),
        trace,
        schedule,
        bare_wires,
        frame: None,
        corrections: Vec::new(),
        uncorrectable: Vec::new(),
    };
    (decoder.corrections, decoder.uncorrectable) = decoder.build_corrections()?;
    Ok(decoder)
}

impl Decoder {
    /// All stage gates in order, without measurements or frame.
    pub fn stages_circuit(&self) -> Result<Circuit> {
        let mut c = Circuit::new(self.generators.num_qubits());
        for s in &self.trace.stages {
            c.append(&s.circuit)?;
        }
        Ok(c)
    }

    /// Stage gates followed by the frame rotation: maps the code space onto
    /// the bare wire with every measured wire in `|0⟩`.
    pub fn core(&self) -> Result<Circuit> {
        let mut c = self.stages_circuit()?;
        if let Some(f) = &self.frame {
            c.add_tagged(Gate::u(f.clone())?, &self.bare_wires, "frame")?;
        }
        Ok(c)
    }

    /// Encoding network: the inverted core, with the measured wires as
    /// prepared `|0⟩` inputs.
    pub fn encoder(&self) -> Result<Circuit> {
        self.core()?.invert()
    }

    /// Full decoding network: stages with their measurements, frame, then the
    /// syndrome-conditioned corrections on the bare wire.
    pub fn circuit(&self) -> Result<Circuit> {
        let mut c = Circuit::new(self.generators.num_qubits());
        for s in &self.trace.stages {
            c.append(&s.circuit)?;
            c.measure(s.measured_wire, &s.slot)?;
        }
        if let Some(f) = &self.frame {
            c.add_tagged(Gate::u(f.clone())?, &self.bare_wires, "frame")?;
        }
        for corr in self.corrections.iter().filter(|c| !c.is_identity()) {
            let conds = self
                .schedule
                .iter()
                .zip(&corr.raw_bits)
                .map(|(s, &b)| Condition {
                    slot: s.slot.clone(),
                    value: b,
                })
                .collect();
            c.conditional(conds, corr.gate.clone(), &self.bare_wires)?;
        }
        Ok(c)
    }

    /// Fixes the logical basis: after decoding, `logical[j]` leaves the bare
    /// wire in `|j⟩`. Only single-bare-qubit codes are supported.
    pub fn with_frame(mut self, logical: &[StateVector]) -> Result<Self> {
        if self.bare_wires.len() != 1 || logical.len() != 2 {
            return Err(Error::Unsupported(
                "frame needs exactly one bare qubit".into(),
            ));
        }
        let n = self.generators.num_qubits();
        let bare = self.bare_wires[0];
        let stages = self.stages_circuit()?.to_unitary()?;
        let mut m = Matrix::zeros(2, 2);
        for (l, psi) in logical.iter().enumerate() {
            let out = psi.apply_unitary(&stages, &(0..n).collect::<Vec<_>>())?;
            for j in 0..2 {
                m[(j, l)] = out.amplitude(j << (n - 1 - bare));
            }
        }
        let m = Unitary::new(m)?;
        self.frame = Some(m.adjoint());
        (self.corrections, self.uncorrectable) = self.build_corrections()?;
        Ok(self)
    }

    fn build_corrections(&self) -> Result<(Vec<Correction>, Vec<PauliError>)> {
        let n = self.generators.num_qubits();
        if self.bare_wires.len() != 1 {
            return Ok((Vec::new(), Vec::new()));
        }
        let bare = self.bare_wires[0];
        let stages = self.stages_circuit()?;
        let frame = self.frame.clone().unwrap_or_else(|| Unitary::identity(1));
        let mut out = vec![Correction {
            raw_bits: vec![false; self.schedule.len()],
            gate: Gate::u(Unitary::identity(1))?,
            errors: Vec::new(),
        }];
        let mut uncorrectable = Vec::new();
        for wire in 0..n {
            for letter in [Letter::X, Letter::Y, Letter::Z] {
                let e = PauliString::single(n, letter, wire)?.conjugate_through(&stages)?;
                let raw_bits: Vec<bool> = self
                    .schedule
                    .iter()
                    .map(|s| matches!(e.letter(s.wire), Letter::X | Letter::Y))
                    .collect();
                let q = e.letter(bare);
                let fix = frame
                    .mul(&Unitary::from_matrix_unchecked(q.matrix()))?
                    .mul(&frame.adjoint())?;
                match out.iter_mut().find(|c| c.raw_bits == raw_bits) {
                    Some(existing) => {
                        if existing
                            .gate
                            .matrix()
                            .equal_up_to_global_phase(&fix, 1e-9)?
                            .is_some()
                        {
                            existing.errors.push((letter, wire));
                        } else {
                            uncorrectable.push((letter, wire));
                        }
                    }
                    None => out.push(Correction {
                        raw_bits,
                        gate: named_or_u(&fix)?,
                        errors: vec![(letter, wire)],
                    }),
                }
            }
        }
        out.retain(|c| c.raw_bits.iter().any(|&b| b));
        Ok((out, uncorrectable))
    }

    /// Recovers the original generator syndrome from the raw bits.
    pub fn syndrome_from_raw(&self, raw: &[bool]) -> Result<Vec<bool>> {
        let m = self.generators.len();
        if raw.len() != self.schedule.len() {
            return Err(Error::LengthMismatch {
                left: raw.len(),
                right: self.schedule.len(),
            });
        }
        // Rows: mask | rhs bit at position m.
        let mut rows: Vec<u128> = self
            .schedule
            .iter()
            .zip(raw)
            .map(|(s, &b)| {
                s.generators.iter().fold(0u128, |acc, &i| acc | 1 << i) | (b as u128) << m
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m {
            let Some(p) = (r..rows.len()).find(|&i| rows[i] >> col & 1 == 1) else {
                continue;
            };
            rows.swap(r, p);
            let pr = rows[r];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && *row >> col & 1 == 1 {
                    *row ^= pr;
                }
            }
            pivots.push(col);
            r += 1;
        }
        if pivots.len() != m {
            return Err(Error::DependentGenerators);
        }
        let mut syndrome = vec![false; m];
        for (row, &col) in rows.iter().zip(&pivots) {
            syndrome[col] = row >> m & 1 == 1;
        }
        Ok(syndrome)
    }

    /// Runs the decoding network on `state` and returns the bare qubit and
    /// syndrome.
    pub fn decode(&self, state: &StateVector, seed: u64) -> Result<DecodeResult> {
        let out = self.circuit()?.run(state, &RunOptions::seeded(seed))?;
        let raw_bits: Vec<bool> = self
            .schedule
            .iter()
            .map(|s| {
                out.bit(&s.slot)
                    .ok_or_else(|| Error::UndefinedSlot(s.slot.clone()))
            })
            .collect::<Result<_>>()?;
        let syndrome = self.syndrome_from_raw(&raw_bits)?;
        let (bare, _) = out.state.conditional_state(&self.bare_wires)?;
        Ok(DecodeResult {
            bare,
            raw_bits,
            syndrome,
        })
    }

    /// XOR gates across all stages.
    pub fn xor_count(&self) -> usize {
        self.trace
            .stages
            .iter()
            .map(|s| s.circuit.xor_count())
            .sum()
    }
}

/// `X`, `Y` or `Z` if `u` equals one up to phase, otherwise a generic gate.
fn named_or_u(u: &Unitary) -> Result<Gate> {
    for g in [Gate::x(), Gate::y(), Gate::z()] {
        if g.matrix().equal_up_to_global_phase(u, 1e-9)?.is_some() {
            return Ok(g);
        }
    }
    if u.max_entry_diff(&Unitary::identity(1))? < EQ_TOL {
        return Gate::u(Unitary::identity(1));
    }
    // Strip the global phase of the first nonzero entry so printed
    // parameters stay canonical.
    let m = u.matrix();
    let lead = m
        .iter()
        .find(|z| z.norm() > 1e-8)
        .copied()
        .unwrap_or(c(1., 0.));
    Gate::u(u.scaled(lead.conj() / lead.norm()))
}
