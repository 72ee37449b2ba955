use qgk_core::five_qubit::{
    decoder, encode, inject_error, logical_states, syndrome_table, LogicalQubit,
};
use qgk_core::StateVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn letters(ps: &[qgk_core::PauliString]) -> Vec<String> {
    ps.iter().map(|p| p.letter_string()).collect()
}

#[test]
fn trace_follows_operator_lists() {
    let d = decoder().unwrap();
    let st = &d.trace.stages;
    assert_eq!(d.trace.measured_wires(), vec![4, 3, 2, 1]);
    assert_eq!(
        letters(&st[0].after_basis_change),
        ["Z0 Z1 Z2 Z4", "X0 Z1 X2 Z3", "X1 X2 X3 Z4", "X0 Z2 X3 X4"]
    );
    assert_eq!(
        letters(&st[0].after_collapse),
        ["Z4", "X0 Z1 X2 Z3", "Z0 Y1 Y2 X3 Z4", "X0 Z2 X3"]
    );
    assert_eq!(
        letters(&st[0].remaining),
        ["X0 Z1 X2 Z3", "Z0 Y1 Y2 X3", "X0 Z2 X3"]
    );
    assert_eq!(letters(&st[1].remaining), ["Z0 Z1 X2", "Y0 Y1 X2"]);
    assert_eq!(letters(&st[2].remaining), ["X0 X1"]);
    assert_eq!(st[3].circuit.xor_count(), 1);
    assert_eq!(st[3].circuit.one_bit_count(), 2);
    assert_eq!(d.bare_wires, vec![0]);
    assert!(d.xor_count() <= 2 * 25);
}

#[test]
fn encoder_reproduces_codewords() {
    let d = decoder().unwrap();
    let enc = d.encoder().unwrap().to_unitary().unwrap();
    let (zero, one) = logical_states();
    for (bare, word) in [(0usize, zero), (1, one)] {
        let out = StateVector::basis_state(5, bare << 4)
            .unwrap()
            .apply_unitary(&enc, &[0, 1, 2, 3, 4])
            .unwrap();
        for (a, b) in out.amplitudes().iter().zip(word.amplitudes()) {
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
    }
}

#[test]
fn decode_recovers_every_single_error() {
    let d = decoder().unwrap();
    let table = syndrome_table().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let q = LogicalQubit::random(&mut rng);
        let clean = encode(&q).unwrap();
        for (syn, err) in &table {
            let s = match err {
                Some((l, w)) => inject_error(&clean, *l, *w).unwrap(),
                None => clean.clone(),
            };
            let r = d.decode(&s, 3).unwrap();
            assert!(r.bare.fidelity(&q.bare()).unwrap() > 1.0 - 1e-10, "{err:?}");
            assert_eq!(r.syndrome, syn.0.to_vec(), "{err:?}");
        }
    }
    assert!(d.uncorrectable.is_empty());
    assert_eq!(d.corrections.len(), 15);
}
