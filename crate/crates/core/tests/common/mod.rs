#![allow(dead_code)]

use proptest::prelude::*;
use qchiplet::gates::Polarity;
use qchiplet::qpr::{Assignment, QprGate, QprOp};
use qchiplet::{Circuit, GatePlacement};

/// One random gate: kind selector, qubit-choice seed, a parameter in [0, 1].
pub type OpSpec = (u8, u64, f64);

pub fn op_specs(max_len: usize) -> impl Strategy<Value = Vec<OpSpec>> {
    prop::collection::vec((0u8..6, any::<u64>(), 0.0f64..=1.0), 0..=max_len)
}

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

/// `k` distinct qubits out of `n`, chosen by `seed`.
fn pick(n: usize, k: usize, mut seed: u64) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let i = (seed % pool.len() as u64) as usize;
        seed = (seed / pool.len() as u64) ^ seed.rotate_left(17);
        out.push(pool.swap_remove(i));
    }
    out
}

/// Symbolic ops from the QPR gate set {H, X, Z, CX, CCX, AMP}; AMP symbols
/// are `s{i}` and bound in the returned assignment.
pub fn qpr_ops(n: usize, specs: &[OpSpec]) -> (Vec<QprOp>, Assignment) {
    let names = labels(n);
    let mut ops = Vec::new();
    let mut assignment = Assignment::new();
    for (i, &(kind, seed, param)) in specs.iter().enumerate() {
        let want = match kind {
            3 => 2,
            4 => 3,
            _ => 1,
        };
        if want > n {
            continue;
        }
        let qs = pick(n, want, seed);
        let pol = |bit: u64| if seed >> (40 + bit) & 1 == 1 { Polarity::Negative } else { Polarity::Positive };
        let target = names[qs[0]].as_str();
        let op = match kind {
            0 => QprOp::h(target),
            1 => QprOp::x(target),
            2 => QprOp::z(target),
            3 => QprOp::x(target).when(&names[qs[1]], Polarity::Positive),
            4 => QprOp::x(target).when(&names[qs[1]], pol(0)).when(&names[qs[2]], pol(1)),
            _ => {
                let sym = format!("s{i}");
                assignment.insert(sym.clone(), param);
                let mut op = QprOp::new(QprGate::Amp(sym), target);
                if n > 1 && seed >> 50 & 1 == 1 {
                    op = op.when(&names[qs.get(1).copied().unwrap_or((qs[0] + 1) % n)], pol(2));
                }
                op
            }
        };
        ops.push(op);
    }
    (ops, assignment)
}

/// Numeric circuit over `n` qubits for the same ops.
pub fn circuit_for(n: usize, ops: &[QprOp], assignment: &Assignment) -> Circuit {
    let names = labels(n);
    let mut circ = Circuit::new(n);
    for op in ops {
        circ.push(op.to_placement(&names, assignment).unwrap()).unwrap();
    }
    circ
}

/// Random numeric circuit that also uses R and RY.
pub fn random_circuit(n: usize, specs: &[OpSpec]) -> Circuit {
    let (ops, assignment) = qpr_ops(n, specs);
    let names = labels(n);
    let mut circ = Circuit::new(n);
    for (op, &(kind, seed, param)) in ops.iter().zip(specs) {
        let p = op.to_placement(&names, &assignment).unwrap();
        let p = match (kind, seed % 3) {
            (0, 1) => GatePlacement::named("R", &[param * 6.0], p.targets().to_vec(), p.controls().to_vec(), n).unwrap(),
            (0, 2) => GatePlacement::named("RY", &[param * 6.0], p.targets().to_vec(), p.controls().to_vec(), n).unwrap(),
            _ => p,
        };
        circ.push(p).unwrap();
    }
    circ
}
