//! Value-type circuits: gate applications, measurements into named classical
//! slots, and gates conditioned on measured slots.

use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::statevector::{apply_in_place, check_register, check_wires, StateVector};
use crate::unitary::Unitary;

#[derive(Clone, Debug, PartialEq)]
pub struct GateOp {
    pub gate: Gate,
    pub wires: Vec<usize>,
    pub tag: Option<String>,
}

impl GateOp {
    pub fn new(gate: Gate, wires: &[usize]) -> Result<Self> {
        if gate.arity() != wires.len() {
            return Err(Error::ArityMismatch {
                expected: gate.arity(),
                got: wires.len(),
            });
        }
        check_wires(wires, usize::MAX)?;
        Ok(Self {
            gate,
            wires: wires.to_vec(),
            tag: None,
        })
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(tag.into());
        self
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gate)?;
        for w in &self.wires {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

/// `slot = value` requirement of a conditional gate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub slot: String,
    pub value: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Op {
    Gate(GateOp),
    Measure {
        wire: usize,
        slot: String,
    },
    /// Applies `op` only when every condition matches the recorded bits.
    Conditional {
        conditions: Vec<Condition>,
        op: GateOp,
    },
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Gate(g) => write!(f, "{g}"),
            Op::Measure { wire, slot } => write!(f, "measure {wire} {slot}"),
            Op::Conditional { conditions, op } => {
                write!(f, "cond ")?;
                for (i, cnd) in conditions.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}={}", cnd.slot, cnd.value as u8)?;
                }
                write!(f, " {op}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    /// Outcomes to force, by slot name. Unlisted slots are sampled.
    pub forced: BTreeMap<String, bool>,
}

impl RunOptions {
    pub fn seeded(seed: u64) -> Self {
        Self {
            seed,
            forced: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub state: StateVector,
    /// Classical bits in measurement order.
    pub bits: Vec<(String, bool)>,
    /// Pre-measurement probability of each recorded outcome.
    pub probabilities: Vec<f64>,
}

impl RunResult {
    pub fn bit(&self, slot: &str) -> Option<bool> {
        self.bits.iter().find(|(s, _)| s == slot).map(|(_, b)| *b)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_wires: usize,
    ops: Vec<Op>,
}

impl Circuit {
    pub fn new(num_wires: usize) -> Self {
        Self {
            num_wires,
            ops: Vec::new(),
        }
    }

    pub fn num_wires(&self) -> usize {
        self.num_wires
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    fn has_slot(&self, slot: &str) -> bool {
        self.ops
            .iter()
            .any(|op| matches!(op, Op::Measure { slot: s, .. } if s == slot))
    }

    pub fn push_op(&mut self, op: GateOp) -> Result<&mut Self> {
        check_wires(&op.wires, self.num_wires)?;
        self.ops.push(Op::Gate(op));
        Ok(self)
    }

    pub fn add(&mut self, gate: Gate, wires: &[usize]) -> Result<&mut Self> {
        self.push_op(GateOp::new(gate, wires)?)
    }

    pub fn add_tagged(&mut self, gate: Gate, wires: &[usize], tag: &str) -> Result<&mut Self> {
        self.push_op(GateOp::new(gate, wires)?.with_tag(tag))
    }

    pub fn measure(&mut self, wire: usize, slot: &str) -> Result<&mut Self> {
        check_wires(&[wire], self.num_wires)?;
        if self.has_slot(slot) {
            return Err(Error::DuplicateSlot(slot.into()));
        }
        self.ops.push(Op::Measure {
            wire,
            slot: slot.into(),
        });
        Ok(self)
    }

    pub fn conditional(
        &mut self,
        conditions: Vec<Condition>,
        gate: Gate,
        wires: &[usize],
    ) -> Result<&mut Self> {
        let op = GateOp::new(gate, wires)?;
        check_wires(&op.wires, self.num_wires)?;
        for cnd in &conditions {
            if !self.has_slot(&cnd.slot) {
                return Err(Error::UndefinedSlot(cnd.slot.clone()));
            }
        }
        self.ops.push(Op::Conditional { conditions, op });
        Ok(self)
    }

    /// Appends `other`'s ops (same wire count) after this circuit's.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        self.append_mapped(other, &(0..other.num_wires).collect::<Vec<_>>())
    }

    /// Appends `other` with its wire `i` relabelled to `wire_map[i]`.
    pub fn append_mapped(&mut self, other: &Circuit, wire_map: &[usize]) -> Result<&mut Self> {
        if wire_map.len() != other.num_wires {
            return Err(Error::DimensionMismatch {
                left: wire_map.len(),
                right: other.num_wires,
            });
        }
        check_wires(wire_map, self.num_wires)?;
        let remap = |op: &GateOp| GateOp {
            gate: op.gate.clone(),
            wires: op.wires.iter().map(|&w| wire_map[w]).collect(),
            tag: op.tag.clone(),
        };
        for op in &other.ops {
            match op {
                Op::Gate(g) => {
                    self.push_op(remap(g))?;
                }
                Op::Measure { wire, slot } => {
                    self.measure(wire_map[*wire], slot)?;
                }
                Op::Conditional { conditions, op } => {
                    let g = remap(op);
                    self.conditional(conditions.clone(), g.gate, &g.wires)?;
                }
            }
        }
        Ok(self)
    }

    pub fn then(&self, other: &Circuit) -> Result<Circuit> {
        let mut out = self.clone();
        out.append(other)?;
        Ok(out)
    }

    pub fn has_measurements(&self) -> bool {
        self.ops.iter().any(|op| !matches!(op, Op::Gate(_)))
    }

    pub fn measurements(&self) -> Vec<(usize, &str)> {
        self.ops
            .iter()
            .filter_map(|op| match op {
                Op::Measure { wire, slot } => Some((*wire, slot.as_str())),
                _ => None,
            })
            .collect()
    }

    /// Unconditional gate ops in order.
    pub fn gate_ops(&self) -> impl Iterator<Item = &GateOp> {
        self.ops.iter().filter_map(|op| match op {
            Op::Gate(g) => Some(g),
            _ => None,
        })
    }

    /// Copy of the circuit with measurements and conditional ops dropped.
    pub fn without_measurements(&self) -> Circuit {
        Circuit {
            num_wires: self.num_wires,
            ops: self
                .ops
                .iter()
                .filter(|op| matches!(op, Op::Gate(_)))
                .cloned()
                .collect(),
        }
    }

    pub fn xor_count(&self) -> usize {
        self.gate_ops().filter(|g| g.gate.is_xor()).count()
    }

    pub fn one_bit_count(&self) -> usize {
        self.gate_ops().filter(|g| g.gate.arity() == 1).count()
    }

    /// Wire pairs of maximal runs of consecutive two-wire gates acting on the
    /// same (unordered) pair; one-bit gates do not break a run.
    pub fn two_bit_blocks(&self) -> Vec<(usize, usize)> {
        let mut blocks: Vec<(usize, usize)> = Vec::new();
        for g in self.gate_ops().filter(|g| g.wires.len() == 2) {
            let pair = (g.wires[0].min(g.wires[1]), g.wires[0].max(g.wires[1]));
            if blocks.last() != Some(&pair) {
                blocks.push(pair);
            }
        }
        blocks
    }

    /// Product of all gate embeddings, in order.
    pub fn to_unitary(&self) -> Result<Unitary> {
        if self.has_measurements() {
            return Err(Error::MeasurementPresent);
        }
        check_register(self.num_wires)?;
        let mut m = Unitary::identity(self.num_wires).into_matrix();
        let dim = m.nrows();
        for g in self.gate_ops() {
            let u = g.gate.matrix();
            for col in m.as_mut_slice().chunks_mut(dim) {
                apply_in_place(col, self.num_wires, u.matrix(), &g.wires);
            }
        }
        Ok(Unitary::from_matrix_unchecked(m))
    }

    /// Reversed op order with each gate replaced by its adjoint.
    pub fn invert(&self) -> Result<Circuit> {
        if self.has_measurements() {
            return Err(Error::MeasurementPresent);
        }
        let ops = self
            .ops
            .iter()
            .rev()
            .map(|op| match op {
                Op::Gate(g) => Op::Gate(GateOp {
                    gate: g.gate.adjoint(),
                    wires: g.wires.clone(),
                    tag: g.tag.clone(),
                }),
                _ => unreachable!(),
            })
            .collect();
        Ok(Circuit {
            num_wires: self.num_wires,
            ops,
        })
    }

    /// Simulates the circuit. Measurements use one ChaCha8 stream seeded by
    /// `opts.seed`, unless the slot's outcome is forced.
    pub fn run(&self, input: &StateVector, opts: &RunOptions) -> Result<RunResult> {
        if input.num_qubits() != self.num_wires {
            return Err(Error::DimensionMismatch {
                left: input.num_qubits(),
                right: self.num_wires,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut state = input.clone();
        let mut bits: Vec<(String, bool)> = Vec::new();
        let mut probabilities = Vec::new();
        for op in &self.ops {
            match op {
                Op::Gate(g) => {
                    let u = g.gate.matrix();
                    apply_in_place(state.amps_mut(), self.num_wires, u.matrix(), &g.wires);
                }
                Op::Measure { wire, slot } => {
                    let m = state.measure_with(*wire, opts.forced.get(slot).copied(), &mut rng)?;
                    state = m.state;
                    bits.push((slot.clone(), m.outcome));
                    probabilities.push(m.probability);
                }
                Op::Conditional { conditions, op } => {
                    let fire = conditions.iter().all(|cnd| {
                        bits.iter().find(|(s, _)| *s == cnd.slot).map(|(_, b)| *b)
                            == Some(cnd.value)
                    });
                    if fire {
                        let u = op.gate.matrix();
                        apply_in_place(state.amps_mut(), self.num_wires, u.matrix(), &op.wires);
                    }
                }
            }
        }
        Ok(RunResult {
            state,
            bits,
            probabilities,
        })
    }
}

impl fmt::Display for Circuit {
    /// One op per line, in the text-format syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unitary::EQ_TOL;

    #[test]
    fn empty_and_double_xor_are_identity() {
        assert_eq!(Circuit::new(2).to_unitary().unwrap(), Unitary::identity(2));
        let mut c = Circuit::new(2);
        c.add(Gate::xor(), &[0, 1])
            .unwrap()
            .add(Gate::xor(), &[0, 1])
            .unwrap();
        assert!(
            c.to_unitary()
                .unwrap()
                .max_entry_diff(&Unitary::identity(2))
                .unwrap()
                < EQ_TOL
        );
    }

    #[test]
    fn invert_reverses_and_adjoints() {
        let mut c = Circuit::new(2);
        c.add(Gate::hadamard(), &[0])
            .unwrap()
            .add(Gate::xor(), &[0, 1])
            .unwrap();
        let inv = c.invert().unwrap();
        let mut expected = Circuit::new(2);
        expected
            .add(Gate::xor(), &[0, 1])
            .unwrap()
            .add(Gate::hadamard(), &[0])
            .unwrap();
        assert_eq!(inv, expected);
        let mut x = Circuit::new(2);
        x.add(Gate::xor(), &[0, 1]).unwrap();
        assert_eq!(x.invert().unwrap(), x);
    }

    #[test]
    fn measurement_gate_circuit() {
        let mut c = Circuit::new(2);
        c.add(Gate::xor(), &[0, 1])
            .unwrap()
            .measure(1, "m")
            .unwrap();
        let out = c
            .run(
                &StateVector::from_label("10").unwrap(),
                &RunOptions::default(),
            )
            .unwrap();
        assert_eq!(out.state, StateVector::from_label("11").unwrap());
        assert_eq!(out.bit("m"), Some(true));
        assert!(matches!(c.to_unitary(), Err(Error::MeasurementPresent)));
        assert!(matches!(c.invert(), Err(Error::MeasurementPresent)));
    }

    #[test]
    fn slot_rules() {
        let mut c = Circuit::new(2);
        c.measure(0, "a").unwrap();
        assert_eq!(
            c.measure(1, "a").unwrap_err(),
            Error::DuplicateSlot("a".into())
        );
        let err = c
            .conditional(
                vec![Condition {
                    slot: "b".into(),
                    value: true,
                }],
                Gate::x(),
                &[1],
            )
            .unwrap_err();
        assert_eq!(err, Error::UndefinedSlot("b".into()));
    }

    #[test]
    fn conditional_gate_fires_on_match() {
        let mut c = Circuit::new(2);
        c.measure(0, "a").unwrap();
        c.conditional(
            vec![Condition {
                slot: "a".into(),
                value: true,
            }],
            Gate::x(),
            &[1],
        )
        .unwrap();
        let out = c
            .run(
                &StateVector::from_label("10").unwrap(),
                &RunOptions::default(),
            )
            .unwrap();
        assert_eq!(out.state, StateVector::from_label("11").unwrap());
        let out = c
            .run(
                &StateVector::from_label("00").unwrap(),
                &RunOptions::default(),
            )
            .unwrap();
        assert_eq!(out.state, StateVector::from_label("00").unwrap());
    }

    #[test]
    fn wire_and_arity_validation() {
        let mut c = Circuit::new(2);
        assert!(matches!(
            c.add(Gate::xor(), &[0, 2]),
            Err(Error::WireOutOfRange { .. })
        ));
        assert!(matches!(
            c.add(Gate::xor(), &[1, 1]),
            Err(Error::DuplicateWire(1))
        ));
        assert!(matches!(
            c.add(Gate::xor(), &[1]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn blocks_merge_consecutive_pairs() {
        let mut c = Circuit::new(3);
        c.add(Gate::xor(), &[1, 2]).unwrap();
        c.add(Gate::x(), &[0]).unwrap();
        c.add(Gate::xor(), &[2, 1]).unwrap();
        c.add(Gate::xor(), &[0, 1]).unwrap();
        assert_eq!(c.two_bit_blocks(), vec![(1, 2), (0, 1)]);
    }
}
