use proptest::prelude::*;
use qgk_core::gates::GATE_NAMES;
use qgk_core::random::random_u2;
use qgk_core::{max_entry_diff, Circuit, Gate, Letter, PauliString, StateVector, Unitary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_gate(r: &mut ChaCha8Rng) -> Gate {
    let name = GATE_NAMES[r.random_range(0..GATE_NAMES.len())];
    let params: Vec<f64> = match name {
        "RY" | "RZ" | "PHASE" => vec![r.random_range(-4.0..4.0)],
        "DEUTSCH" | "CONTROLLED_V" | "U" => {
            let u = random_u2(r);
            (0..4)
                .flat_map(|i| {
                    let z = u.entry(i / 2, i % 2);
                    [z.re, z.im]
                })
                .collect()
        }
        _ => vec![],
    };
    Gate::from_spec(name, &params, r.random_bool(0.5)).unwrap()
}

fn random_wires(r: &mut ChaCha8Rng, k: usize, n: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = r.random_range(i..n);
        all.swap(i, j);
    }
    all.truncate(k);
    all
}

fn random_pauli(r: &mut ChaCha8Rng, n: usize) -> PauliString {
    let letters: Vec<Letter> = (0..n)
        .map(|_| [Letter::I, Letter::X, Letter::Y, Letter::Z][r.random_range(0..4)])
        .collect();
    PauliString::from_letters(r.random_range(0..4), &letters).unwrap()
}

fn random_clifford(r: &mut ChaCha8Rng, n: usize, len: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for _ in 0..len {
        match r.random_range(0..6) {
            0 if n > 1 => {
                let w = random_wires(r, 2, n);
                c.add(Gate::xor(), &w).unwrap();
            }
            1 => {
                c.add(Gate::r(), &[r.random_range(0..n)]).unwrap();
            }
            2 => {
                c.add(Gate::r_prime(), &[r.random_range(0..n)]).unwrap();
            }
            3 => {
                c.add(Gate::r_prime().adjoint(), &[r.random_range(0..n)])
                    .unwrap();
            }
            4 => {
                c.add(Gate::hadamard(), &[r.random_range(0..n)]).unwrap();
            }
            _ => {
                let g = [Gate::x(), Gate::y(), Gate::z()][r.random_range(0..3)].clone();
                c.add(g, &[r.random_range(0..n)]).unwrap();
            }
        }
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn norm_preserved_by_every_gate(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = 4;
        let psi = StateVector::random(n, &mut r).unwrap();
        let g = random_gate(&mut r);
        let wires = random_wires(&mut r, g.arity(), n);
        let out = psi.apply_unitary(&g.matrix(), &wires).unwrap();
        prop_assert!((out.norm_sqr().sqrt() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn composition_matches_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let psi = StateVector::random(3, &mut r).unwrap();
        let (a, b) = (random_u2(&mut r).kron(&random_u2(&mut r)), random_u2(&mut r).kron(&random_u2(&mut r)));
        let w = random_wires(&mut r, 2, 3);
        let seq = psi.apply_unitary(&a, &w).unwrap().apply_unitary(&b, &w).unwrap();
        let once = psi.apply_unitary(&b.mul(&a).unwrap(), &w).unwrap();
        for (x, y) in seq.amplitudes().iter().zip(once.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn global_phase_equivalence_laws(seed in any::<u64>(), t1 in -3.0f64..3.0, t2 in -3.0f64..3.0) {
        let mut r = rng(seed);
        let u = random_u2(&mut r).kron(&random_u2(&mut r));
        let v = u.scaled(num_complex::Complex64::from_polar(1.0, t1));
        let w = v.scaled(num_complex::Complex64::from_polar(1.0, t2));
        let tol = 1e-9;
        prop_assert!(u.equal_up_to_global_phase(&u, tol).unwrap().is_some());
        let uv = u.equal_up_to_global_phase(&v, tol).unwrap();
        let vu = v.equal_up_to_global_phase(&u, tol).unwrap();
        prop_assert!(uv.is_some() && vu.is_some());
        prop_assert!((uv.unwrap() * vu.unwrap() - 1.0).norm() < 1e-9);
        prop_assert!(v.equal_up_to_global_phase(&w, tol).unwrap().is_some());
        prop_assert!(u.equal_up_to_global_phase(&w, 2.0 * tol).unwrap().is_some());
        let other = random_u2(&mut r).kron(&random_u2(&mut r));
        prop_assert!(u.equal_up_to_global_phase(&other, tol).unwrap().is_none());
    }

    #[test]
    fn conjugation_round_trip(seed in any::<u64>(), n in 1usize..6, len in 0usize..20) {
        let mut r = rng(seed);
        let c = random_clifford(&mut r, n, len);
        let p = random_pauli(&mut r, n);
        let there = p.conjugate_through(&c).unwrap();
        prop_assert_eq!(there.conjugate_through(&c.invert().unwrap()).unwrap(), p);
    }

    #[test]
    fn conjugation_matches_dense(seed in any::<u64>(), n in 1usize..5, len in 0usize..12) {
        let mut r = rng(seed);
        let c = random_clifford(&mut r, n, len);
        let p = random_pauli(&mut r, n);
        let u = c.to_unitary().unwrap();
        let dense = u.matrix() * p.to_matrix() * u.adjoint().matrix();
        prop_assert!(max_entry_diff(&p.conjugate_through(&c).unwrap().to_matrix(), &dense) < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn commutes_agrees_with_dense(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let (p, q) = (random_pauli(&mut r, n), random_pauli(&mut r, n));
        let (a, b) = (p.to_matrix(), q.to_matrix());
        let comm = (&a * &b - &b * &a).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(!(1e-10..=0.1).contains(&comm));
        prop_assert_eq!(p.commutes(&q).unwrap(), comm < 1e-10);
    }
}

#[test]
fn swapping_xor_wires_swaps_roles() {
    let psi = StateVector::random(2, &mut rng(5)).unwrap();
    let swap = Unitary::from_real_rows(
        4,
        &[
            1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 1.,
        ],
    )
    .unwrap();
    let xor = Gate::xor().matrix();
    let permuted = swap.mul(&xor).unwrap().mul(&swap).unwrap();
    let a = psi.apply_unitary(&xor, &[1, 0]).unwrap();
    let b = psi.apply_unitary(&permuted, &[0, 1]).unwrap();
    assert!(a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .all(|(x, y)| (x - y).norm() < 1e-12));
}
