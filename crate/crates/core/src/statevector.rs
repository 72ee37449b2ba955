//! Dense n-qubit statevectors.
//!
//! Basis index `i` encodes the ket |q0 q1 … q(n−1)⟩ with qubit 0 as the most
//! significant bit, so for two qubits index 2 is |10⟩.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::unitary::{c, Amplitude, Matrix, Unitary};

pub const DEFAULT_MAX_QUBITS: usize = 12;
pub const NORM_TOL: f64 = 1e-10;

/// Register cap, overridable through `QGK_MAX_QUBITS`.
pub fn max_qubits() -> usize {
    std::env::var("QGK_MAX_QUBITS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_QUBITS)
}

pub(crate) fn check_register(num_qubits: usize) -> Result<()> {
    let cap = max_qubits();
    if num_qubits > cap {
        return Err(Error::RegisterTooLarge { num_qubits, cap });
    }
    Ok(())
}

pub(crate) fn check_wires(wires: &[usize], num_qubits: usize) -> Result<()> {
    for (i, &w) in wires.iter().enumerate() {
        if w >= num_qubits {
            return Err(Error::WireOutOfRange {
                wire: w,
                num_qubits,
            });
        }
        if wires[..i].contains(&w) {
            return Err(Error::DuplicateWire(w));
        }
    }
    Ok(())
}

#[inline]
pub(crate) fn bit_of(index: usize, wire: usize, num_qubits: usize) -> bool {
    (index >> (num_qubits - 1 - wire)) & 1 == 1
}

/// Applies the `2^k × 2^k` matrix `u` to `wires` of the amplitude slice,
/// in place. `wires[0]` is the most significant bit of `u`'s local index.
pub(crate) fn apply_in_place(
    amps: &mut [Complex64],
    num_qubits: usize,
    u: &Matrix,
    wires: &[usize],
) {
    let k = wires.len();
    let local_dim = 1usize << k;
    let offsets: Vec<usize> = (0..local_dim)
        .map(|l| {
            wires
                .iter()
                .enumerate()
                .filter(|(j, _)| (l >> (k - 1 - j)) & 1 == 1)
                .map(|(_, &w)| 1usize << (num_qubits - 1 - w))
                .sum()
        })
        .collect();
    let mask: usize = offsets[local_dim - 1];
    let mut gathered = vec![Complex64::new(0.0, 0.0); local_dim];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for (g, off) in gathered.iter_mut().zip(&offsets) {
            *g = amps[base + off];
        }
        for (r, off) in offsets.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (col, g) in gathered.iter().enumerate() {
                acc += u[(r, col)] * g;
            }
            amps[base + off] = acc;
        }
    }
}

/// Result of a single-qubit projective measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub outcome: bool,
    /// Pre-measurement probability of `outcome`.
    pub probability: f64,
    pub state: StateVector,
}

/// How a measurement outcome is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutcomeMode {
    Forced(bool),
    /// Born-rule sampling from a ChaCha8 generator seeded with this value.
    Seeded(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Amplitude>,
}

impl StateVector {
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        check_register(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::BasisIndexOutOfRange { index, num_qubits });
        }
        let mut amps = vec![c(0.0, 0.0); dim];
        amps[index] = c(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Parses a ket label such as `"0110"` (qubit 0 first).
    pub fn from_label(label: &str) -> Result<Self> {
        let mut index = 0usize;
        for ch in label.chars() {
            index = (index << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::Unsupported(format!("invalid basis label `{label}`"))),
                };
        }
        if label.is_empty() {
            return Err(Error::Unsupported("empty basis label".into()));
        }
        Self::basis_state(label.len(), index)
    }

    /// Takes ownership of amplitudes that must already be normalized.
    pub fn from_amplitudes(amps: Vec<Amplitude>) -> Result<Self> {
        let num_qubits =
            crate::unitary::log2_exact(amps.len()).ok_or(Error::NotPowerOfTwo(amps.len()))?;
        check_register(num_qubits)?;
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sqr: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { num_qubits, amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amps: Vec<Amplitude>) -> Result<Self> {
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm_sqr: norm * norm,
            });
        }
        amps.iter_mut().for_each(|z| *z /= norm);
        Self::from_amplitudes(amps)
    }

    /// Haar-random state (normalized complex Gaussian vector).
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        check_register(num_qubits)?;
        let amps = (0..1usize << num_qubits)
            .map(|_| crate::random::gaussian_complex(rng))
            .collect();
        Self::normalized(amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Amplitude {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn tensor(&self, rhs: &StateVector) -> Result<StateVector> {
        check_register(self.num_qubits + rhs.num_qubits)?;
        let mut amps = Vec::with_capacity(self.dim() * rhs.dim());
        for a in &self.amps {
            for b in &rhs.amps {
                amps.push(a * b);
            }
        }
        Ok(Self {
            num_qubits: self.num_qubits + rhs.num_qubits,
            amps,
        })
    }

    /// Applies `u` to `wires` (identity elsewhere).
    pub fn apply_unitary(&self, u: &Unitary, wires: &[usize]) -> Result<StateVector> {
        if u.num_qubits() != wires.len() {
            return Err(Error::ArityMismatch {
                expected: u.num_qubits(),
                got: wires.len(),
            });
        }
        check_wires(wires, self.num_qubits)?;
        let mut out = self.clone();
        apply_in_place(&mut out.amps, self.num_qubits, u.matrix(), wires);
        Ok(out)
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Amplitude] {
        &mut self.amps
    }

    pub fn probability_of_one(&self, qubit: usize) -> Result<f64> {
        check_wires(&[qubit], self.num_qubits)?;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| bit_of(*i, qubit, self.num_qubits))
            .map(|(_, z)| z.norm_sqr())
            .sum())
    }

    pub fn measure(&self, qubit: usize, mode: OutcomeMode) -> Result<Measurement> {
        match mode {
            OutcomeMode::Forced(outcome) => {
                self.measure_with(qubit, Some(outcome), &mut ChaCha8Rng::seed_from_u64(0))
            }
            OutcomeMode::Seeded(seed) => {
                self.measure_with(qubit, None, &mut ChaCha8Rng::seed_from_u64(seed))
            }
        }
    }

    /// Measures `qubit` in the computational basis. A forced outcome needs
    /// probability above 1e-12; otherwise one uniform draw from `rng` picks
    /// the outcome by the Born rule.
    pub fn measure_with<R: Rng + ?Sized>(
        &self,
        qubit: usize,
        forced: Option<bool>,
        rng: &mut R,
    ) -> Result<Measurement> {
        let p1 = self.probability_of_one(qubit)?;
        let outcome = match forced {
            Some(o) => o,
            None => rng.random::<f64>() < p1,
        };
        let probability = if outcome { p1 } else { 1.0 - p1 };
        if probability <= 1e-12 {
            return Err(Error::ImpossibleOutcome {
                qubit,
                outcome,
                probability,
            });
        }
        let scale = 1.0 / probability.sqrt();
        let n = self.num_qubits;
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, z)| {
                if bit_of(i, qubit, n) == outcome {
                    z * scale
                } else {
                    c(0.0, 0.0)
                }
            })
            .collect();
        Ok(Measurement {
            outcome,
            probability,
            state: Self {
                num_qubits: n,
                amps,
            },
        })
    }

    /// Reduced density matrix on `subset` (ordered as given).
    pub fn reduced_density_matrix(&self, subset: &[usize]) -> Result<Matrix> {
        check_wires(subset, self.num_qubits)?;
        let n = self.num_qubits;
        let rest: Vec<usize> = (0..n).filter(|w| !subset.contains(w)).collect();
        let k = subset.len();
        let sub_dim = 1usize << k;
        let rest_dim = 1usize << rest.len();
        // psi as a sub_dim × rest_dim matrix
        let mut psi = DMatrix::<Complex64>::zeros(sub_dim, rest_dim);
        for (i, z) in self.amps.iter().enumerate() {
            let row = subset
                .iter()
                .fold(0usize, |acc, &w| (acc << 1) | bit_of(i, w, n) as usize);
            let col = rest
                .iter()
                .fold(0usize, |acc, &w| (acc << 1) | bit_of(i, w, n) as usize);
            psi[(row, col)] = *z;
        }
        Ok(&psi * psi.adjoint())
    }

    /// Von Neumann entropy (bits) of the reduced state on `subset`.
    pub fn entanglement_entropy(&self, subset: &[usize]) -> Result<f64> {
        if subset.is_empty() || subset.len() >= self.num_qubits {
            return Err(Error::InvalidSubset);
        }
        let rho = self.reduced_density_matrix(subset)?;
        let eig = rho.symmetric_eigen();
        Ok(eig
            .eigenvalues
            .iter()
            .filter(|&&p| p > 1e-15)
            .map(|&p| -p * p.log2())
            .sum::<f64>()
            .max(0.0))
    }

    /// State of `keep` conditioned on the most probable basis configuration
    /// of the remaining wires. Returns the conditional state and the weight of
    /// that configuration (1 when the other wires are in a definite basis state).
    pub fn conditional_state(&self, keep: &[usize]) -> Result<(StateVector, f64)> {
        check_wires(keep, self.num_qubits)?;
        let n = self.num_qubits;
        let rest: Vec<usize> = (0..n).filter(|w| !keep.contains(w)).collect();
        let rest_dim = 1usize << rest.len();
        let mut weights = vec![0.0f64; rest_dim];
        let col_of = |i: usize| {
            rest.iter()
                .fold(0usize, |acc, &w| (acc << 1) | bit_of(i, w, n) as usize)
        };
        for (i, z) in self.amps.iter().enumerate() {
            weights[col_of(i)] += z.norm_sqr();
        }
        let (best, weight) = weights
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, -1.0),
                |acc, (i, w)| if w > acc.1 { (i, w) } else { acc },
            );
        let mut amps = vec![c(0.0, 0.0); 1usize << keep.len()];
        for (i, z) in self.amps.iter().enumerate() {
            if col_of(i) == best {
                let row = keep
                    .iter()
                    .fold(0usize, |acc, &w| (acc << 1) | bit_of(i, w, n) as usize);
                amps[row] = *z;
            }
        }
        Ok((Self::normalized(amps)?, weight))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn xor() -> Unitary {
        Unitary::from_real_rows(
            4,
            &[
                1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.,
            ],
        )
        .unwrap()
    }

    fn bell() -> StateVector {
        StateVector::from_amplitudes(vec![
            c(FRAC_1_SQRT_2, 0.),
            c(0., 0.),
            c(0., 0.),
            c(FRAC_1_SQRT_2, 0.),
        ])
        .unwrap()
    }

    #[test]
    fn basis_state_indexing() {
        let s = StateVector::basis_state(2, 2).unwrap();
        assert_eq!(s, StateVector::from_label("10").unwrap());
        assert_eq!(s.amplitude(2), c(1., 0.));
        assert!(matches!(
            StateVector::basis_state(2, 4),
            Err(Error::BasisIndexOutOfRange {
                index: 4,
                num_qubits: 2
            })
        ));
        let zero5 = StateVector::basis_state(5, 0).unwrap();
        assert_eq!(zero5.dim(), 32);
        assert_eq!(zero5.amplitude(0), c(1., 0.));
    }

    #[test]
    fn xor_truth_table() {
        let out = StateVector::from_label("10")
            .unwrap()
            .apply_unitary(&xor(), &[0, 1])
            .unwrap();
        assert_eq!(out, StateVector::from_label("11").unwrap());
    }

    #[test]
    fn xor_on_superposition_swaps_last_two_amplitudes() {
        let amps = vec![c(0.1, 0.2), c(0.3, -0.1), c(-0.5, 0.4), c(0.2, 0.6)];
        let s = StateVector::normalized(amps).unwrap();
        let out = s.apply_unitary(&xor(), &[0, 1]).unwrap();
        let (a, b) = (s.amplitudes(), out.amplitudes());
        assert_eq!((b[0], b[1], b[2], b[3]), (a[0], a[1], a[3], a[2]));
    }

    #[test]
    fn swapped_wires_reverse_source_and_target() {
        // XOR on wires [1, 0]: qubit 1 is the source.
        let out = StateVector::from_label("01")
            .unwrap()
            .apply_unitary(&xor(), &[1, 0])
            .unwrap();
        assert_eq!(out, StateVector::from_label("11").unwrap());
    }

    #[test]
    fn rejects_bad_wires() {
        let s = StateVector::basis_state(2, 0).unwrap();
        assert_eq!(
            s.apply_unitary(&xor(), &[0, 0]).unwrap_err(),
            Error::DuplicateWire(0)
        );
        assert!(matches!(
            s.apply_unitary(&xor(), &[0, 2]),
            Err(Error::WireOutOfRange { wire: 2, .. })
        ));
        assert!(matches!(
            s.apply_unitary(&xor(), &[0]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn measurement_of_eigenstate_and_bell() {
        let s = StateVector::from_label("11").unwrap();
        let m = s.measure(1, OutcomeMode::Seeded(7)).unwrap();
        assert!(m.outcome);
        assert!((m.probability - 1.0).abs() < 1e-12);
        assert_eq!(m.state, s);

        let m = bell().measure(1, OutcomeMode::Forced(false)).unwrap();
        assert!(!m.outcome);
        assert!((m.probability - 0.5).abs() < 1e-12);
        assert!(
            (m.state
                .fidelity(&StateVector::from_label("00").unwrap())
                .unwrap()
                - 1.0)
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn forcing_impossible_outcome_fails() {
        let s = StateVector::from_label("00").unwrap();
        assert!(matches!(
            s.measure(0, OutcomeMode::Forced(true)),
            Err(Error::ImpossibleOutcome { .. })
        ));
    }

    #[test]
    fn seeded_measurement_is_deterministic() {
        let a = bell().measure(0, OutcomeMode::Seeded(42)).unwrap();
        let b = bell().measure(0, OutcomeMode::Seeded(42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn entropy_of_product_and_bell() {
        assert!(
            StateVector::from_label("00")
                .unwrap()
                .entanglement_entropy(&[0])
                .unwrap()
                .abs()
                < 1e-12
        );
        assert!((bell().entanglement_entropy(&[0]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(bell().entanglement_entropy(&[]), Err(Error::InvalidSubset));
        assert_eq!(
            bell().entanglement_entropy(&[0, 1]),
            Err(Error::InvalidSubset)
        );
    }

    #[test]
    fn register_cap_applies() {
        assert!(matches!(
            StateVector::basis_state(40, 0),
            Err(Error::RegisterTooLarge { .. })
        ));
    }
}
