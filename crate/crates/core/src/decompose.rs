//! Constructions of controlled gates from XORs and one-bit gates, each
//! checked against the dense target matrix.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::FRAC_PI_4;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates::{Gate, GateKind};
use crate::unitary::{c, Unitary, EQ_TOL};

/// Default candidate budget for [`toffoli_network`].
pub const TOFFOLI_SEARCH_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub name: String,
    pub circuit: Circuit,
    pub target: Unitary,
    pub two_bit_op_count: usize,
    pub one_bit_gate_count: usize,
    pub xor_count: usize,
    /// Max entry deviation from `target` after global-phase alignment.
    pub max_entry_error: f64,
    /// λ with `circuit ≈ λ·target`.
    pub phase: Complex64,
    /// Basis index whose diagonal entry is flipped relative to Toffoli
    /// (relative-phase constructions only).
    pub flagged_state: Option<usize>,
}

/// Flat, serializable view of a report.
#[derive(Clone, Debug, Serialize)]
pub struct ReportSummary {
    pub name: String,
    pub num_wires: usize,
    pub gates: Vec<String>,
    pub blocks: Vec<(usize, usize)>,
    pub two_bit_op_count: usize,
    pub one_bit_gate_count: usize,
    pub xor_count: usize,
    pub max_entry_error: f64,
    pub phase: [f64; 2],
    pub flagged_state: Option<String>,
}

impl DecompositionReport {
    fn build(name: &str, circuit: Circuit, target: Unitary) -> Result<Self> {
        let actual = circuit.to_unitary()?;
        let phase = actual.global_phase_against(&target)?;
        let max_entry_error = actual.max_entry_diff(&target.scaled(phase))?;
        Ok(Self {
            name: name.into(),
            two_bit_op_count: circuit.two_bit_blocks().len(),
            one_bit_gate_count: circuit.one_bit_count(),
            xor_count: circuit.xor_count(),
            circuit,
            target,
            max_entry_error,
            phase,
            flagged_state: None,
        })
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_entry_error < tol
    }

    pub fn summary(&self) -> ReportSummary {
        let n = self.circuit.num_wires();
        ReportSummary {
            name: self.name.clone(),
            num_wires: n,
            gates: self.circuit.ops().iter().map(|op| op.to_string()).collect(),
            blocks: self.circuit.two_bit_blocks(),
            two_bit_op_count: self.two_bit_op_count,
            one_bit_gate_count: self.one_bit_gate_count,
            xor_count: self.xor_count,
            max_entry_error: self.max_entry_error,
            phase: [self.phase.re, self.phase.im],
            flagged_state: self.flagged_state.map(|i| format!("{i:0n$b}")),
        }
    }
}

/// Toffoli matrix with the diagonal entry at `index` negated.
pub fn relative_phase_toffoli(index: usize) -> Unitary {
    let mut m = Gate::toffoli().matrix().into_matrix();
    m[(index, index)] = -m[(index, index)];
    Unitary::from_matrix_unchecked(m)
}

/// Three-wire Deutsch gate from two XORs and three controlled-V gates with
/// `V² = u`. Wires 0 and 1 control, wire 2 is the target.
pub fn sleator_weinfurter(u: &Unitary) -> Result<DecompositionReport> {
    let circuit = sleator_weinfurter_circuit(u)?;
    DecompositionReport::build(
        "sleator-weinfurter",
        circuit,
        Gate::deutsch(u.clone())?.matrix(),
    )
}

fn sleator_weinfurter_circuit(u: &Unitary) -> Result<Circuit> {
    if u.num_qubits() != 1 {
        return Err(Error::InvalidParams {
            gate: "DEUTSCH".into(),
            reason: "expected a 2x2 unitary".into(),
        });
    }
    let v = u.principal_sqrt()?;
    let cv = Gate::controlled_v(v)?;
    let mut circuit = Circuit::new(3);
    circuit
        .add(cv.clone(), &[1, 2])?
        .add(Gate::xor(), &[0, 1])?
        .add(cv.adjoint(), &[1, 2])?
        .add(Gate::xor(), &[0, 1])?
        .add(cv, &[0, 2])?;
    Ok(circuit)
}

/// Z-Y-Z Euler angles `(α, β, γ, δ)` with `v = e^{iα}·Rz(β)·Ry(γ)·Rz(δ)`.
pub fn zyz_angles(v: &Unitary) -> (f64, f64, f64, f64) {
    let m = v.matrix();
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let alpha = det.arg() / 2.0;
    let w = Complex64::from_polar(1.0, -alpha);
    let (a, b) = (m[(0, 0)] * w, m[(1, 0)] * w);
    let gamma = 2.0 * b.norm().atan2(a.norm());
    let sum = -2.0 * a.arg();
    let diff = 2.0 * b.arg();
    (alpha, (sum + diff) / 2.0, gamma, (sum - diff) / 2.0)
}

/// Controlled-V on (control 0, target 1) as `C, XOR, B, XOR, A` on the
/// target followed by a phase `E` on the control.
pub fn controlled_v_abc(v: &Unitary) -> Result<DecompositionReport> {
    let circuit = controlled_v_abc_circuit(v)?;
    DecompositionReport::build(
        "controlled-v-abc",
        circuit,
        Gate::controlled_v(v.clone())?.matrix(),
    )
}

fn controlled_v_abc_circuit(v: &Unitary) -> Result<Circuit> {
    if v.num_qubits() != 1 {
        return Err(Error::InvalidParams {
            gate: "CONTROLLED_V".into(),
            reason: "expected a 2x2 unitary".into(),
        });
    }
    let (alpha, beta, gamma, delta) = zyz_angles(v);
    let prod = |gs: &[Gate]| -> Result<Gate> {
        let mut m = Unitary::identity(1);
        for g in gs {
            m = m.mul(&g.matrix())?;
        }
        Gate::u(m)
    };
    let a = prod(&[Gate::rz(beta), Gate::ry(gamma / 2.0)])?;
    let b = prod(&[Gate::ry(-gamma / 2.0), Gate::rz(-(delta + beta) / 2.0)])?;
    let cc = prod(&[Gate::rz((delta - beta) / 2.0)])?;
    let mut circuit = Circuit::new(2);
    circuit
        .add_tagged(cc, &[1], "C")?
        .add(Gate::xor(), &[0, 1])?
        .add_tagged(b, &[1], "B")?
        .add(Gate::xor(), &[0, 1])?
        .add_tagged(a, &[1], "A")?
        .add_tagged(Gate::phase(alpha), &[0], "E")?;
    Ok(circuit)
}

/// The Sleator–Weinfurter circuit with every controlled-V expanded into
/// XORs and one-bit gates.
pub fn deutsch_chain(u: &Unitary) -> Result<DecompositionReport> {
    let sw = sleator_weinfurter_circuit(u)?;
    let mut circuit = Circuit::new(3);
    for op in sw.gate_ops() {
        match op.gate.kind() {
            GateKind::ControlledV(v) => {
                circuit.append_mapped(&controlled_v_abc_circuit(v)?, &op.wires)?;
            }
            _ => {
                circuit.add(op.gate.clone(), &op.wires)?;
            }
        }
    }
    DecompositionReport::build("deutsch-chain", circuit, Gate::deutsch(u.clone())?.matrix())
}

type M2 = Matrix2<Complex64>;

fn m2(g: &Gate) -> M2 {
    let m = g.matrix();
    M2::new(m.entry(0, 0), m.entry(0, 1), m.entry(1, 0), m.entry(1, 1))
}

/// `Some(λ)` if `m = λ·target` with `|λ| = 1`.
fn proportional(m: &M2, target: &M2) -> Option<Complex64> {
    let (r, col) = if target[(0, 0)].norm() > 0.5 {
        (0, 0)
    } else {
        (0, 1)
    };
    let lambda = m[(r, col)] / target[(r, col)];
    if (lambda.norm() - 1.0).abs() > 1e-9 {
        return None;
    }
    ((m - target * lambda).iter().all(|z| z.norm() < 1e-9)).then_some(lambda)
}

fn eq3_gates() -> Vec<Option<Gate>> {
    let base = [GateKind::F, GateKind::G, GateKind::Hgate, GateKind::J].map(Gate::fixed);
    let mut out = vec![None];
    out.extend(base.iter().cloned().map(Some));
    out.extend(base.iter().map(|g| Some(g.adjoint())));
    out
}

/// Toffoli from 6 XORs and at most 8 one-bit gates drawn from F, G, Hgate,
/// J and their inverses, grouped as five two-bit blocks on wire pairs
/// (1,2), (0,2), (0,1), (1,2), (0,2).
pub fn toffoli_network() -> Result<DecompositionReport> {
    toffoli_network_with_budget(TOFFOLI_SEARCH_BUDGET)
}

/// Searches target-wire gate placements around the four target XORs in
/// canonical order, then solves for diagonal control-wire gates that cancel
/// the accumulated control-dependent phases. Fails with
/// [`Error::SearchExhausted`] when `budget` candidates have been tried.
pub fn toffoli_network_with_budget(budget: u64) -> Result<DecompositionReport> {
    let slots = eq3_gates();
    let mats: Vec<M2> = slots
        .iter()
        .map(|g| g.as_ref().map_or_else(M2::identity, m2))
        .collect();
    let diag: Vec<Option<Gate>> = slots
        .iter()
        .filter(|g| {
            g.as_ref()
                .is_none_or(|g| matches!(g.kind(), GateKind::Hgate | GateKind::J))
        })
        .cloned()
        .collect();
    let diag_phases: Vec<[Complex64; 2]> = diag
        .iter()
        .map(|g| {
            g.as_ref().map_or([c(1., 0.); 2], |g| {
                let m = m2(g);
                [m[(0, 0)], m[(1, 1)]]
            })
        })
        .collect();
    let not = m2(&Gate::x());
    let id = M2::identity();
    let k = slots.len();
    let total = (k as u64).pow(5);
    let mut tried = 0u64;
    // B3 orientation: (source, target) of its XOR pair.
    for &(s3, t3) in &[(0usize, 1usize), (1, 0)] {
        for code in 0..total {
            if tried >= budget {
                return Err(Error::SearchExhausted {
                    candidates: tried,
                    budget,
                });
            }
            tried += 1;
            let mut idx = [0usize; 5];
            let mut rest = code;
            for i in (0..5).rev() {
                idx[i] = (rest % k as u64) as usize;
                rest /= k as u64;
            }
            let one_bit = idx.iter().filter(|&&i| i != 0).count();
            if one_bit > 8 {
                continue;
            }
            // Target evolution for controls (x0, x1): X^x1 from B1 and B4,
            // X^x0 from B2 and B5.
            let mut lambdas = [c(0., 0.); 4];
            let mut ok = true;
            for (x, lambda) in lambdas.iter_mut().enumerate() {
                let (x0, x1) = (x >> 1 & 1, x & 1);
                let xp = |b: usize| if b == 1 { not } else { id };
                let m = mats[idx[4]]
                    * xp(x0)
                    * mats[idx[3]]
                    * xp(x1)
                    * mats[idx[2]]
                    * xp(x0)
                    * mats[idx[1]]
                    * xp(x1)
                    * mats[idx[0]];
                let want = if x == 3 { not } else { id };
                match proportional(&m, &want) {
                    Some(l) => *lambda = l,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            // Control phases a(x_s3)·b(x_t3)·c(x0⊕x1) must undo λ exactly.
            let nd = diag.len();
            for ia in 0..nd {
                for ib in 0..nd {
                    for ic in 0..nd {
                        let extra = [ia, ib, ic].iter().filter(|&&i| i != 0).count();
                        if one_bit + extra > 8 {
                            continue;
                        }
                        let fits = (0..4).all(|x| {
                            let bits = [x >> 1 & 1, x & 1];
                            let d = diag_phases[ia][bits[s3]]
                                * diag_phases[ib][bits[t3]]
                                * diag_phases[ic][bits[0] ^ bits[1]];
                            (d * lambdas[x] - 1.0).norm() < 1e-9
                        });
                        if fits {
                            let circuit = assemble_toffoli(
                                &slots,
                                idx,
                                (s3, t3),
                                [&diag[ia], &diag[ib], &diag[ic]],
                            )?;
                            let report = DecompositionReport::build(
                                "toffoli-network",
                                circuit,
                                Gate::toffoli().matrix(),
                            )?;
                            if report.passes(EQ_TOL) && (report.phase - 1.0).norm() < EQ_TOL {
                                return Ok(report);
                            }
                        }
                    }
                }
            }
        }
    }
    Err(Error::SearchExhausted {
        candidates: tried,
        budget,
    })
}

fn assemble_toffoli(
    slots: &[Option<Gate>],
    idx: [usize; 5],
    (s3, t3): (usize, usize),
    [a, b, cg]: [&Option<Gate>; 3],
) -> Result<Circuit> {
    let mut circ = Circuit::new(3);
    let one = |circ: &mut Circuit, g: &Option<Gate>, w: usize| -> Result<()> {
        if let Some(g) = g {
            circ.add(g.clone(), &[w])?;
        }
        Ok(())
    };
    // B1 (1-2)
    one(&mut circ, &slots[idx[0]], 2)?;
    if s3 == 1 {
        one(&mut circ, a, 1)?;
    }
    circ.add(Gate::xor(), &[1, 2])?;
    one(&mut circ, &slots[idx[1]], 2)?;
    // B2 (0-2)
    if s3 == 0 {
        one(&mut circ, a, 0)?;
    }
    circ.add(Gate::xor(), &[0, 2])?;
    one(&mut circ, &slots[idx[2]], 2)?;
    // B3 (0-1)
    one(&mut circ, b, t3)?;
    circ.add(Gate::xor(), &[s3, t3])?;
    one(&mut circ, cg, t3)?;
    circ.add(Gate::xor(), &[s3, t3])?;
    // B4 (1-2)
    circ.add(Gate::xor(), &[1, 2])?;
    one(&mut circ, &slots[idx[3]], 2)?;
    // B5 (0-2)
    circ.add(Gate::xor(), &[0, 2])?;
    one(&mut circ, &slots[idx[4]], 2)?;
    Ok(circ)
}

/// Signs of the four `RY(±π/4)` rotations on the target, in time order.
const MARGOLUS_PATTERNS: [[f64; 4]; 2] = [[1., 1., -1., -1.], [-1., -1., 1., 1.]];

fn margolus_circuit(signs: [f64; 4], controls: (usize, usize)) -> Result<Circuit> {
    let (p, q) = controls;
    let mut circ = Circuit::new(3);
    circ.add(Gate::ry(signs[0] * FRAC_PI_4), &[2])?
        .add(Gate::xor(), &[q, 2])?
        .add(Gate::ry(signs[1] * FRAC_PI_4), &[2])?
        .add(Gate::xor(), &[p, 2])?
        .add(Gate::ry(signs[2] * FRAC_PI_4), &[2])?
        .add(Gate::xor(), &[q, 2])?
        .add(Gate::ry(signs[3] * FRAC_PI_4), &[2])?;
    Ok(circ)
}

/// The single diagonal index where `u` differs from Toffoli by a sign, if
/// that is the only difference.
pub fn flagged_diagonal(u: &Unitary) -> Option<usize> {
    let t = Gate::toffoli().matrix();
    let mut flagged = None;
    for r in 0..8 {
        for col in 0..8 {
            let (a, b) = (u.entry(r, col), t.entry(r, col));
            if (a - b).norm() < EQ_TOL {
                continue;
            }
            if r == col && (a + b).norm() < EQ_TOL && flagged.is_none() {
                flagged = Some(r);
            } else {
                return None;
            }
        }
    }
    flagged
}

/// Toffoli up to one flipped diagonal sign, from three XORs and four
/// `RY(±π/4)` rotations on the target. Prefers the variant that flags
/// `|100⟩`.
pub fn margolus_network() -> Result<DecompositionReport> {
    let mut fallback = None;
    for signs in MARGOLUS_PATTERNS {
        for controls in [(0, 1), (1, 0)] {
            let circuit = margolus_circuit(signs, controls)?;
            let Some(flag) = flagged_diagonal(&circuit.to_unitary()?) else {
                continue;
            };
            let mut report =
                DecompositionReport::build("margolus", circuit, relative_phase_toffoli(flag))?;
            report.flagged_state = Some(flag);
            if flag == 0b100 {
                return Ok(report);
            }
            fallback.get_or_insert(report);
        }
    }
    fallback.ok_or_else(|| Error::Numerical("no relative-phase Toffoli found".into()))
}

/// Two relative-phase Toffolis in sequence; the flipped signs cancel and
/// the composite is the identity.
pub fn paired_margolus_cancellation() -> Result<DecompositionReport> {
    let single = margolus_network()?;
    let circuit = single.circuit.then(&single.circuit)?;
    let mut report = DecompositionReport::build("margolus-pair", circuit, Unitary::identity(3))?;
    report.flagged_state = None;
    Ok(report)
}
