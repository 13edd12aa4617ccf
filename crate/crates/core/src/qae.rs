//! Quantum amplitude estimation on top of the chiplet machinery.
//!
//! Register layout for `m` evaluation qubits and an `n_state`-qubit state
//! register: positions `0..m` hold the evaluation register, positions
//! `m..m + n_state` the state register. The evaluation qubit controlling
//! `Q^(2^j)` sits at position `m - 1 - j`, so it is bit `j` of the measured
//! integer `y` and the inverse QFT can be the plain conjugate DFT matrix.

use std::f64::consts::PI;

use crate::circuit::{merge, power, simulate, Chiplet, Circuit, CircuitLayer, SimulationMode, CHIPLET_TOL};
use crate::error::{Error, Result};
use crate::gates::{gate_matrix, register_dim, Control, Gate, GatePlacement, GateSource};
use crate::histogram::Histogram;
use crate::linalg::{self, c, max_dim, ComplexMatrix, StateVector, C64};

/// Grover operator `Q = A · M000 · A^† · M_F` for the "good" states with
/// `flag = 1`.
///
/// `M000 = I - 2|0..0><0..0|` and `M_F` flips the phase of basis states whose
/// flag qubit is 0, so `Q` rotates by `+-2θ` where `sin²θ` is the probability
/// of measuring the flag as 1 in `A|0..0>`.
pub fn grover_q(a: &Chiplet, flag: usize) -> Result<Chiplet> {
    grover_q_marking(a, flag, 0)
}

/// As [`grover_q`], with `M_F` flipping states whose flag bit equals `flipped`.
/// `flipped = 1` yields `-Q`.
pub fn grover_q_marking(a: &Chiplet, flag: usize, flipped: u8) -> Result<Chiplet> {
    let n = a.n();
    if flag >= n {
        return Err(Error::Config(format!("flag qubit {flag} outside a {n}-qubit A")));
    }
    let defect = linalg::unitarity_defect(a.matrix());
    if defect > CHIPLET_TOL {
        return Err(Error::Validation(format!("A is not unitary (defect {defect:.3e})")));
    }
    let dim = a.matrix().rows();
    let flag_bit = n - 1 - flag;
    let mark: Vec<C64> = (0..dim)
        .map(|i| if (i >> flag_bit & 1) as u8 == flipped { c(-1.0, 0.0) } else { c(1.0, 0.0) })
        .collect();
    let mut zero_reflect = vec![c(1.0, 0.0); dim];
    zero_reflect[0] = c(-1.0, 0.0);

    let am = scale_columns(a.matrix(), &zero_reflect);
    let adag_mf = scale_columns(&a.matrix().dagger(), &mark);
    let q = linalg::matmul(&am, &adag_mf)?;
    Ok(Chiplet::trusted("Q".into(), n, q, vec![format!("A={}", a.name()), format!("flag={flag}")]))
}

fn scale_columns(m: &ComplexMatrix, d: &[C64]) -> ComplexMatrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        for (j, &dj) in d.iter().enumerate() {
            out.set(i, j, m.get(i, j) * dj);
        }
    }
    out
}

/// Gate-level `Q` over the state register: `M_F`, `A^†`, `M000`, `A` in input order.
pub fn grover_circuit(a: &Circuit, flag: usize) -> Result<Circuit> {
    let n = a.n();
    if flag >= n {
        return Err(Error::Config(format!("flag qubit {flag} outside a {n}-qubit A")));
    }
    let x = gate_matrix("X", &[])?;
    let z = gate_matrix("Z", &[])?;
    let mut q = Circuit::named(n, "Q");
    // M_F: -Z on the flag, written as X Z X
    for g in [&x, &z, &x] {
        q.push(GatePlacement::single(g.clone(), flag, n)?)?;
    }
    q.extend(&a.inverse())?;
    // M000: X Z X on the last qubit, Z conditioned on every other qubit being 0
    let t = n - 1;
    let zero_controls: Vec<Control> = (0..t).map(Control::off).collect();
    q.push(GatePlacement::single(x.clone(), t, n)?)?;
    q.push(GatePlacement::new(z, vec![t], zero_controls, n)?)?;
    q.push(GatePlacement::single(x, t, n)?)?;
    q.extend(a)?;
    Ok(q)
}

fn dft(m: usize, sign: f64) -> Result<ComplexMatrix> {
    let n = register_dim(m)?;
    let scale = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, n, |j, k| {
        let phase = sign * 2.0 * PI * ((j * k) % n) as f64 / n as f64;
        C64::from_polar(scale, phase)
    })
}

/// `(1/sqrt(N)) e^{-2πi jk/N}` for `N = 2^m`.
pub fn inverse_qft(m: usize) -> Result<ComplexMatrix> {
    dft(m, -1.0)
}

/// `(1/sqrt(N)) e^{+2πi jk/N}`.
pub fn qft(m: usize) -> Result<ComplexMatrix> {
    dft(m, 1.0)
}

/// Gate-level QFT on qubits `offset..offset + m` of an `n`-qubit register:
/// Hadamards, controlled `R(2π/2^k)` and a final bit-reversal with CX swaps.
pub fn qft_circuit(m: usize, offset: usize, n: usize) -> Result<Circuit> {
    if m == 0 || offset + m > n {
        return Err(Error::Config(format!("QFT on {m} qubits at {offset} does not fit {n} qubits")));
    }
    let mut circ = Circuit::named(n, "QFT");
    for j in 0..m {
        circ.push(GatePlacement::named("H", &[], vec![offset + j], vec![], n)?)?;
        for k in 2..=(m - j) {
            let theta = 2.0 * PI / f64::from(1u32 << k);
            let ctl = Control::on(offset + j + k - 1);
            circ.push(GatePlacement::named("R", &[theta], vec![offset + j], vec![ctl], n)?)?;
        }
    }
    for i in 0..m / 2 {
        let (a, b) = (offset + i, offset + m - 1 - i);
        for (ctl, tgt) in [(a, b), (b, a), (a, b)] {
            circ.push(GatePlacement::named("X", &[], vec![tgt], vec![Control::on(ctl)], n)?)?;
        }
    }
    Ok(circ)
}

pub fn inverse_qft_circuit(m: usize, offset: usize, n: usize) -> Result<Circuit> {
    let mut inv = qft_circuit(m, offset, n)?.inverse();
    inv.set_name("IQFT");
    Ok(inv)
}

/// How the controlled powers of `Q` are laid out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QaeExpansion {
    /// One `controlled(Q^(2^j))` block per evaluation qubit, powers by squaring.
    MergedPowers,
    /// `2^j` copies of the merged `controlled(Q)` block.
    RepeatedChiplet,
    /// `2^j` copies of the gate-level `Q`, every gate controlled; gate-level
    /// inverse QFT. Nothing is pre-merged.
    GateLevel,
}

#[derive(Clone, Debug)]
pub struct QaeConfig {
    /// State preparation over the state register.
    pub a_circuit: Circuit,
    /// Flag qubit inside the state register; "good" states have it set to 1.
    pub flag: usize,
    /// Number of evaluation qubits.
    pub m: usize,
    /// 0 means exact probabilities only.
    pub shots: u64,
    pub seed: u64,
    pub expansion: QaeExpansion,
    /// `None` picks full-matrix when the whole register fits the cap.
    pub mode: Option<SimulationMode>,
}

impl QaeConfig {
    pub fn new(a_circuit: Circuit, flag: usize, m: usize) -> Self {
        Self { a_circuit, flag, m, shots: 0, seed: 0, expansion: QaeExpansion::MergedPowers, mode: None }
    }

    /// Single-qubit `A = AMP(a)` whose only qubit is the flag.
    pub fn from_amplitude(a: f64, m: usize) -> Result<Self> {
        let mut circ = Circuit::named(1, "A");
        circ.push(GatePlacement::named("AMP", &[a], vec![0], vec![], 1)?)?;
        Ok(Self::new(circ, 0, m))
    }

    pub fn n_state(&self) -> usize {
        self.a_circuit.n()
    }

    pub fn total_qubits(&self) -> usize {
        self.m + self.n_state()
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Config("at least one evaluation qubit is required".into()));
        }
        if self.n_state() == 0 {
            return Err(Error::Config("the state register needs at least one qubit".into()));
        }
        if self.flag >= self.n_state() {
            return Err(Error::Config(format!("flag {} outside a {}-qubit state register", self.flag, self.n_state())));
        }
        if self.m >= 31 {
            return Err(Error::Config(format!("{} evaluation qubits is too many", self.m)));
        }
        Ok(())
    }
}

/// Benchmark workload: `n_total - m` state qubits, Hadamards and a CX chain on
/// the non-flag qubits, then `AMP(a)` on the flag (the last state qubit).
pub fn qae_workload(n_total: usize, m: usize, a: f64) -> Result<QaeConfig> {
    let n_state = n_total
        .checked_sub(m)
        .filter(|&s| s >= 1)
        .ok_or_else(|| Error::Config(format!("{n_total} qubits cannot hold {m} evaluation qubits plus a state register")))?;
    let flag = n_state - 1;
    let mut circ = Circuit::named(n_state, "A");
    for q in 0..flag {
        circ.push(GatePlacement::named("H", &[], vec![q], vec![], n_state)?)?;
    }
    for q in 1..flag {
        circ.push(GatePlacement::named("X", &[], vec![q], vec![Control::on(q - 1)], n_state)?)?;
    }
    circ.push(GatePlacement::named("AMP", &[a], vec![flag], vec![], n_state)?)?;
    Ok(QaeConfig::new(circ, flag, m))
}

#[derive(Clone, Debug)]
pub struct QaeCircuit {
    pub circuit: Circuit,
    pub m: usize,
    pub n_state: usize,
    /// Applications of `Q` represented by the circuit, `2^m - 1`.
    pub q_applications: u64,
}

/// Applications of `Q` carried by chiplet placements (a `Q^k` block counts k).
pub fn count_q_applications(circuit: &Circuit) -> u64 {
    circuit
        .placements()
        .filter_map(|p| match p.gate().source() {
            GateSource::Chiplet { base, power } if base == "Q" => Some(*power),
            _ => None,
        })
        .sum()
}

/// Position of the evaluation qubit that controls `Q^(2^j)`.
pub fn eval_position(m: usize, j: usize) -> usize {
    m - 1 - j
}

/// Assemble the full circuit. Layer 0 holds only the evaluation Hadamards.
pub fn build_qae(cfg: &QaeConfig) -> Result<QaeCircuit> {
    cfg.validate()?;
    let (m, ns) = (cfg.m, cfg.n_state());
    let n = m + ns;
    let state_map: Vec<usize> = (m..n).collect();

    let mut circ = Circuit::named(n, "QAE");
    let hadamards = (0..m)
        .map(|q| GatePlacement::named("H", &[], vec![q], vec![], n))
        .collect::<Result<Vec<_>>>()?;
    circ.push_layer(CircuitLayer::from_placements(n, hadamards)?)?;
    circ.extend(&cfg.a_circuit.remap(&state_map, n)?)?;

    let q_gate_level = match cfg.expansion {
        QaeExpansion::GateLevel => Some(grover_circuit(&cfg.a_circuit, cfg.flag)?.remap(&state_map, n)?),
        _ => None,
    };
    let q_chiplet = match cfg.expansion {
        QaeExpansion::GateLevel => None,
        _ => Some(grover_q(&merge(&cfg.a_circuit)?, cfg.flag)?),
    };

    let mut q_applications = 0u64;
    for j in 0..m {
        let ctl = Control::on(eval_position(m, j));
        let reps = 1u64 << j;
        q_applications += reps;
        match (cfg.expansion, &q_chiplet, &q_gate_level) {
            (QaeExpansion::MergedPowers, Some(q), _) => {
                let qk = power(q, reps)?;
                circ.push(GatePlacement::new(qk.as_gate(), state_map.clone(), vec![ctl], n)?)?;
            }
            (QaeExpansion::RepeatedChiplet, Some(q), _) => {
                for _ in 0..reps {
                    circ.push(GatePlacement::new(q.as_gate(), state_map.clone(), vec![ctl], n)?)?;
                }
            }
            (QaeExpansion::GateLevel, _, Some(qc)) => {
                let controlled = qc.controlled_by(ctl)?;
                for _ in 0..reps {
                    circ.extend(&controlled)?;
                }
            }
            _ => unreachable!("Q prepared for every expansion"),
        }
    }

    if cfg.expansion == QaeExpansion::GateLevel {
        circ.extend(&inverse_qft_circuit(m, 0, n)?)?;
    } else {
        let iqft = Gate::from_unitary(
            "IQFT",
            std::sync::Arc::new(inverse_qft(m)?),
            GateSource::Chiplet { base: "IQFT".into(), power: 1 },
        );
        circ.push(GatePlacement::new(iqft, (0..m).collect(), vec![], n)?)?;
    }
    Ok(QaeCircuit { circuit: circ, m, n_state: ns, q_applications })
}

#[derive(Clone, Debug)]
pub struct QaeResult {
    /// Over the `m`-bit outcome `y`; exact probabilities plus samples when
    /// `shots > 0`.
    pub histogram: Histogram,
    pub estimate: f64,
    pub peak_outcome: usize,
    pub q_applications: u64,
    pub mode: SimulationMode,
}

pub fn default_mode(total_qubits: usize) -> SimulationMode {
    if total_qubits < usize::BITS as usize - 1 && (1usize << total_qubits) <= max_dim() {
        SimulationMode::FullMatrix
    } else {
        SimulationMode::StateUpdate
    }
}

/// Simulate from `|0..0>`, read the evaluation register and decode the peak.
/// With shots the peak is taken from the sampled counts.
pub fn run_qae(cfg: &QaeConfig) -> Result<QaeResult> {
    let built = build_qae(cfg)?;
    let n = cfg.total_qubits();
    let mode = cfg.mode.unwrap_or_else(|| default_mode(n));
    let v0 = StateVector::basis(n, 0)?;
    let out = simulate(&built.circuit, &v0, mode)?;
    let mut histogram = Histogram::marginal_leading(&out, cfg.m)?;
    if cfg.shots > 0 {
        histogram = histogram.sample(cfg.shots, cfg.seed)?;
    }
    let peak = histogram.peak();
    Ok(QaeResult {
        estimate: decode_amplitude(peak, cfg.m)?,
        peak_outcome: peak,
        histogram,
        q_applications: built.q_applications,
        mode,
    })
}

/// `sin²(π y / 2^m)`.
pub fn decode_amplitude(y: usize, m: usize) -> Result<f64> {
    if m >= usize::BITS as usize || y >= 1usize << m {
        return Err(Error::Range(format!("outcome {y} outside 0..2^{m}")));
    }
    Ok((PI * y as f64 / (1u64 << m) as f64).sin().powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::merge;
    use crate::linalg::is_unitary;

    fn amp_chiplet(s: f64) -> Chiplet {
        Chiplet::new("A", gate_matrix("AMP", &[s]).unwrap().matrix().clone(), vec![]).unwrap()
    }

    #[test]
    fn q_is_unitary() {
        let q = grover_q(&amp_chiplet(0.3), 0).unwrap();
        assert!(is_unitary(q.matrix(), 1e-9).unwrap());
    }

    #[test]
    fn q_fixes_zero_when_s_is_zero() {
        let q = grover_q(&amp_chiplet(0.0), 0).unwrap();
        let v = q.apply(&StateVector::basis(1, 0).unwrap()).unwrap();
        assert!((v.amplitudes()[0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn q_rejects_non_unitary_a() {
        let shear = ComplexMatrix::from_real(2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        let fake = Chiplet::trusted("A".into(), 1, shear, vec![]);
        assert!(matches!(grover_q(&fake, 0), Err(Error::Validation(_))));
    }

    #[test]
    fn flag_one_variant_is_negated() {
        let a = amp_chiplet(0.2);
        let q0 = grover_q(&a, 0).unwrap();
        let q1 = grover_q_marking(&a, 0, 1).unwrap();
        assert!(q1.matrix().approx_eq(&q0.matrix().scale(c(-1.0, 0.0)), 1e-14));
    }

    #[test]
    fn gate_level_q_matches_matrix_q() {
        let cfg = qae_workload(7, 3, 0.3).unwrap();
        let gl = merge(&grover_circuit(&cfg.a_circuit, cfg.flag).unwrap()).unwrap();
        let mq = grover_q(&merge(&cfg.a_circuit).unwrap(), cfg.flag).unwrap();
        assert!(gl.matrix().approx_eq(mq.matrix(), 1e-12));
    }

    #[test]
    fn iqft_small_cases() {
        let h = gate_matrix("H", &[]).unwrap();
        assert!(inverse_qft(1).unwrap().approx_eq(h.matrix(), 1e-15));
        for m in 1..=4 {
            let gl = merge(&inverse_qft_circuit(m, 0, m).unwrap()).unwrap();
            assert!(gl.matrix().approx_eq(&inverse_qft(m).unwrap(), 1e-12), "m = {m}");
        }
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_amplitude(0, 3).unwrap(), 0.0);
        assert!((decode_amplitude(4, 3).unwrap() - 1.0).abs() < 1e-15);
        assert!((decode_amplitude(2, 3).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(decode_amplitude(8, 3), Err(Error::Range(_))));
    }

    #[test]
    fn structure_and_counts() {
        let mut cfg = QaeConfig::from_amplitude(0.5, 3).unwrap();
        cfg.expansion = QaeExpansion::RepeatedChiplet;
        let built = build_qae(&cfg).unwrap();
        assert_eq!(built.q_applications, 7);
        assert_eq!(count_q_applications(&built.circuit), 7);
        assert_eq!(
            built.circuit.placements().filter(|p| p.gate().name() == "Q").count(),
            7
        );
        cfg.expansion = QaeExpansion::MergedPowers;
        assert_eq!(count_q_applications(&build_qae(&cfg).unwrap().circuit), 7);

        // m = 1: H layer, A, one controlled Q, then the 1-qubit IQFT (= H)
        let one = build_qae(&QaeConfig::from_amplitude(0.5, 1).unwrap()).unwrap();
        let names: Vec<&str> = one.circuit.placements().map(|p| p.gate().name()).collect();
        assert_eq!(names, ["H", "AMP", "Q^1", "IQFT"]);
    }

    #[test]
    fn config_errors() {
        let mut cfg = QaeConfig::from_amplitude(0.5, 0).unwrap();
        assert!(matches!(build_qae(&cfg), Err(Error::Config(_))));
        cfg.m = 2;
        cfg.flag = 3;
        assert!(matches!(run_qae(&cfg), Err(Error::Config(_))));
        assert!(qae_workload(3, 3, 0.5).is_err());
    }

    #[test]
    fn zero_amplitude_gives_zero() {
        let r = run_qae(&QaeConfig::from_amplitude(0.0, 3).unwrap()).unwrap();
        assert_eq!(r.peak_outcome, 0);
        assert!((r.histogram.probabilities()[0] - 1.0).abs() < 1e-9);
        assert_eq!(r.estimate, 0.0);
    }
}
