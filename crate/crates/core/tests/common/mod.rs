#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use qss_core::statevec::{PureState, QubitLabel, UnitaryMatrix};

/// Random normalized state over 1..=max distinct labels.
pub fn arb_state(max: usize) -> impl Strategy<Value = PureState> {
    (1..=max)
        .prop_flat_map(|n| {
            (
                Just(QubitLabel::ALL.to_vec()).prop_shuffle(),
                prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n),
            )
        })
        .prop_filter_map("zero vector", |(labels, raw)| {
            let n = raw.len().trailing_zeros() as usize;
            let norm = raw.iter().map(|(r, i)| r * r + i * i).sum::<f64>().sqrt();
            if norm < 1e-3 {
                return None;
            }
            let amps = raw.iter().map(|(r, i)| Complex64::new(r / norm, i / norm)).collect();
            PureState::from_amplitudes(&labels[..n], amps).ok()
        })
}

#[derive(Debug, Clone)]
pub enum Gate {
    H(usize),
    X(usize),
    Cnot(usize, usize),
    /// Single-qubit rotation from Euler angles.
    Rot(usize, f64, f64, f64),
    Split(usize, usize, usize),
}

pub fn arb_gate() -> impl Strategy<Value = Gate> {
    prop_oneof![
        (0usize..8).prop_map(Gate::H),
        (0usize..8).prop_map(Gate::X),
        (0usize..8, 0usize..8).prop_map(|(a, b)| Gate::Cnot(a, b)),
        (0usize..8, -3.2f64..3.2, -3.2f64..3.2, -3.2f64..3.2)
            .prop_map(|(t, a, b, c)| Gate::Rot(t, a, b, c)),
        (0usize..8, 0usize..8, 0usize..8).prop_map(|(a, b, c)| Gate::Split(a, b, c)),
    ]
}

pub fn rotation(theta: f64, phi: f64, lambda: f64) -> UnitaryMatrix {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let e = |x: f64| Complex64::from_polar(1.0, x);
    UnitaryMatrix::new(
        2,
        vec![
            Complex64::new(c, 0.0),
            -e(lambda) * s,
            e(phi) * s,
            e(phi + lambda) * c,
        ],
    )
    .expect("rotation is unitary")
}

/// Applies `gate` with label indices taken modulo the register size.
/// Gates that would need more distinct qubits than exist are skipped.
pub fn apply(state: &PureState, gate: &Gate) -> PureState {
    let labels = state.labels();
    let n = labels.len();
    let pick = |i: usize| labels[i % n];
    match *gate {
        Gate::H(t) => state.apply_hadamard(pick(t)).unwrap(),
        Gate::X(t) => state.apply_x(pick(t)).unwrap(),
        Gate::Cnot(c, t) if c % n != t % n => state.apply_cnot(pick(c), pick(t)).unwrap(),
        Gate::Rot(t, a, b, c) => state.apply_unitary(&[pick(t)], &rotation(a, b, c)).unwrap(),
        Gate::Split(a, b, c) if n >= 3 && a % n != b % n && b % n != c % n && a % n != c % n => {
            let u = qss_core::attack::SplitUnitary::new();
            state.apply_unitary(&[pick(a), pick(b), pick(c)], u.matrix()).unwrap()
        }
        _ => state.clone(),
    }
}

/// Same as [`apply`] but resolves indices against a fixed label list, so a
/// circuit means the same thing on a reordered register.
pub fn apply_on(state: &PureState, order: &[QubitLabel], gate: &Gate) -> PureState {
    let reordered = state.reorder(order).unwrap();
    let out = apply(&reordered, gate);
    out.reorder(state.labels()).unwrap()
}
