//! The GHZ state `(|000⟩ − |111⟩)/√2` and Mermin's four commuting operators,
//! checked as eigenvalue equations, by non-demolition measurement and by
//! per-particle ("demolishing") sampling.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use itertools::Itertools;
use serde::Serialize;

use crate::circuit::{Circuit, RunOptions};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::pauli::{Letter, PauliString};
use crate::statevector::{OutcomeMode, StateVector};
use crate::synthesis::append_measurement;
use crate::unitary::c;

pub const MERMIN_OPERATORS: [&str; 4] = ["X0 Y1 Y2", "Y0 X1 Y2", "Y0 Y1 X2", "X0 X1 X2"];
pub const ASSERTED_EIGENVALUES: [i8; 4] = [1, 1, 1, -1];

pub fn ghz_state() -> StateVector {
    let mut amps = vec![c(0., 0.); 8];
    amps[0] = c(FRAC_1_SQRT_2, 0.);
    amps[7] = c(-FRAC_1_SQRT_2, 0.);
    StateVector::from_amplitudes(amps).expect("normalized")
}

/// One rotation and two XORs, acting on `|000⟩`.
pub fn ghz_circuit() -> Circuit {
    let mut circ = Circuit::new(3);
    circ.add(Gate::ry(-FRAC_PI_2), &[0])
        .and_then(|c| c.add(Gate::xor(), &[0, 1]))
        .and_then(|c| c.add(Gate::xor(), &[0, 2]))
        .expect("valid wires");
    circ
}

#[derive(Clone, Debug)]
pub struct MerminSet {
    pub operators: [PauliString; 4],
    pub asserted_eigenvalues: [i8; 4],
}

pub fn mermin_set() -> MerminSet {
    MerminSet {
        operators: MERMIN_OPERATORS
            .map(|s| PauliString::parse_with_len(s, 3).expect("valid literal")),
        asserted_eigenvalues: ASSERTED_EIGENVALUES,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MerminReport {
    pub operators: Vec<String>,
    pub eigenvalues: Vec<Option<i8>>,
    pub asserted_eigenvalues: Vec<i8>,
    pub eigenvalues_match: bool,
    pub all_commute: bool,
    /// `op4 = −op1·op2·op3`.
    pub redundancy_holds: bool,
    /// Product of the four quantum eigenvalues.
    pub measured_product: i8,
    /// Product of the four operators' values under any preset ±1
    /// assignment to the six one-particle observables (always the same).
    pub hidden_variable_product: i8,
    pub contradiction: bool,
}

fn eigen_product(eigs: &[Option<i8>]) -> Option<i8> {
    eigs.iter().try_fold(1i8, |acc, e| e.map(|e| acc * e))
}

pub fn mermin_check() -> Result<MerminReport> {
    let set = mermin_set();
    let psi = ghz_state();
    let eigenvalues: Vec<Option<i8>> = set
        .operators
        .iter()
        .map(|p| p.eigenvalue_on(&psi))
        .collect::<Result<_>>()?;
    let mut all_commute = true;
    for (a, b) in set.operators.iter().tuple_combinations() {
        all_commute &= a.commutes(b)?;
    }
    let [o1, o2, o3, o4] = &set.operators;
    let redundancy_holds = o1.multiply(o2)?.multiply(o3)?.negated() == *o4;
    let measured_product =
        eigen_product(&eigenvalues).ok_or_else(|| Error::Numerical("not an eigenstate".into()))?;
    let hidden = hidden_variable_products(&set);
    let hidden_variable_product = if hidden.iter().all(|&p| p == hidden[0]) {
        hidden[0]
    } else {
        0
    };
    Ok(MerminReport {
        operators: set.operators.iter().map(|p| p.to_string()).collect(),
        eigenvalues_match: eigenvalues
            .iter()
            .zip(set.asserted_eigenvalues)
            .all(|(e, a)| *e == Some(a)),
        eigenvalues,
        asserted_eigenvalues: set.asserted_eigenvalues.to_vec(),
        all_commute,
        redundancy_holds,
        measured_product,
        hidden_variable_product,
        contradiction: hidden_variable_product != 0 && measured_product != hidden_variable_product,
    })
}

/// Product of the four operators for each of the 64 preset assignments of
/// ±1 to (σx, σy) on every particle.
pub fn hidden_variable_products(set: &MerminSet) -> Vec<i8> {
    (0u32..64)
        .map(|assign| {
            let value = |letter: Letter, q: usize| {
                let bit = match letter {
                    Letter::X => assign >> (2 * q) & 1,
                    _ => assign >> (2 * q + 1) & 1,
                };
                if bit == 1 {
                    -1i8
                } else {
                    1
                }
            };
            set.operators
                .iter()
                .map(|p| (0..3).map(|q| value(p.letter(q), q)).product::<i8>())
                .product()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct NonDemolitionReport {
    /// Ancilla bits in operator order; 1 ↔ eigenvalue −1.
    pub bits: Vec<bool>,
    pub fidelity: f64,
    /// All 24 measurement orders gave the same bits and fidelity.
    pub order_independent: bool,
    pub orders_checked: usize,
}

fn nondemolition_run(order: &[usize], seed: u64) -> Result<(Vec<bool>, f64)> {
    let set = mermin_set();
    let mut circ = Circuit::new(7);
    for &i in order {
        append_measurement(&mut circ, &set.operators[i], 3 + i, &format!("op{}", i + 1))?;
    }
    let psi = ghz_state();
    let input = psi.tensor(&StateVector::basis_state(4, 0)?)?;
    let out = circ.run(&input, &RunOptions::seeded(seed))?;
    let bits = (0..4)
        .map(|i| {
            out.bit(&format!("op{}", i + 1))
                .ok_or_else(|| Error::UndefinedSlot(format!("op{}", i + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    let (data, _) = out.state.conditional_state(&[0, 1, 2])?;
    Ok((bits, data.fidelity(&psi)?))
}

/// Measures all four operators on Ψ_GHZ through ancillas, in every order.
pub fn ghz_nondemolition_suite(seed: u64) -> Result<NonDemolitionReport> {
    let (bits, fidelity) = nondemolition_run(&[0, 1, 2, 3], seed)?;
    let mut order_independent = true;
    let mut orders_checked = 0;
    for order in (0..4).permutations(4) {
        let (b, f) = nondemolition_run(&order, seed)?;
        order_independent &= b == bits && (f - fidelity).abs() < 1e-10;
        orders_checked += 1;
    }
    Ok(NonDemolitionReport {
        bits,
        fidelity,
        order_independent,
        orders_checked,
    })
}

/// One demolishing run: rotate each particle so its letter becomes Z,
/// measure all three, and multiply the ±1 readings.
pub fn demolishing_product(op: &PauliString, seed: u64) -> Result<i8> {
    let mut state = ghz_state();
    let mut product = 1i8;
    for q in 0..3 {
        let (gate, sign) = match op.letter(q) {
            Letter::X => (Some(Gate::r()), 1),
            Letter::Y => (Some(Gate::r_prime()), -1),
            Letter::Z => (None, 1),
            Letter::I => continue,
        };
        if let Some(g) = gate {
            state = state.apply_unitary(&g.matrix(), &[q])?;
        }
        let m = state.measure(
            q,
            OutcomeMode::Seeded(seed.wrapping_mul(3).wrapping_add(q as u64)),
        )?;
        state = m.state;
        product *= sign * if m.outcome { -1 } else { 1 };
    }
    Ok(product)
}

#[derive(Clone, Debug, Serialize)]
pub struct DemolishingReport {
    pub runs: usize,
    /// Runs whose sampled product disagreed with the asserted eigenvalue,
    /// per operator.
    pub mismatches: Vec<usize>,
}

pub fn demolishing_suite(runs: usize, base_seed: u64) -> Result<DemolishingReport> {
    let set = mermin_set();
    let mut mismatches = vec![0; 4];
    for (i, op) in set.operators.iter().enumerate() {
        for r in 0..runs {
            if demolishing_product(op, base_seed.wrapping_add(r as u64))?
                != set.asserted_eigenvalues[i]
            {
                mismatches[i] += 1;
            }
        }
    }
    Ok(DemolishingReport { runs, mismatches })
}
