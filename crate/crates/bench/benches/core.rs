use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qgk_core::decompose::{margolus_network, sleator_weinfurter, toffoli_network};
use qgk_core::five_qubit::{self, encode, inject_error, restore, LogicalQubit};
use qgk_core::{synth_decoder, Circuit, Gate, Letter, PauliString, RunOptions, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gate_application(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply");
    for n in [4usize, 8, 12] {
        let mut circ = Circuit::new(n);
        for q in 0..n {
            circ.add(Gate::hadamard(), &[q]).unwrap();
        }
        for q in 0..n - 1 {
            circ.add(Gate::xor(), &[q, q + 1]).unwrap();
        }
        circ.add(Gate::toffoli(), &[0, 1, n - 1]).unwrap();
        let state = StateVector::basis_state(n, 0).unwrap();
        let opts = RunOptions::default();
        group.bench_with_input(BenchmarkId::new("layer", n), &n, |b, _| {
            b.iter(|| circ.run(black_box(&state), &opts).unwrap())
        });
    }
    group.finish();
}

fn constructions(c: &mut Criterion) {
    c.bench_function("toffoli_network_search", |b| {
        b.iter(|| toffoli_network().unwrap())
    });
    c.bench_function("margolus_network", |b| {
        b.iter(|| margolus_network().unwrap())
    });
    c.bench_function("sleator_weinfurter", |b| {
        b.iter(|| sleator_weinfurter(&Gate::x().matrix()).unwrap())
    });
}

fn pauli_conjugation(c: &mut Criterion) {
    let p: PauliString = "X0 Y3 Z7 X11".parse().unwrap();
    let mut circ = Circuit::new(12);
    for q in 0..11 {
        circ.add(Gate::xor(), &[q, q + 1]).unwrap();
        circ.add(Gate::r(), &[q]).unwrap();
    }
    c.bench_function("pauli_through_clifford", |b| {
        b.iter(|| black_box(&p).conjugate_through(&circ).unwrap())
    });
}

fn five_qubit_code(c: &mut Criterion) {
    let q = LogicalQubit::random(&mut ChaCha8Rng::seed_from_u64(1));
    let corrupted = inject_error(&encode(&q).unwrap(), Letter::Y, 2).unwrap();
    c.bench_function("restore_y2", |b| {
        b.iter(|| restore(black_box(&corrupted), 7).unwrap())
    });
    let gens = five_qubit::generators();
    c.bench_function("synth_decoder", |b| {
        b.iter(|| synth_decoder(black_box(&gens)).unwrap())
    });
    let decoder = five_qubit::decoder().unwrap();
    c.bench_function("decode_y2", |b| {
        b.iter(|| decoder.decode(black_box(&corrupted), 7).unwrap())
    });
}

criterion_group!(
    benches,
    gate_application,
    constructions,
    pauli_conjugation,
    five_qubit_code
);
criterion_main!(benches);
