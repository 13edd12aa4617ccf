//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use qchiplet::gates::{embed, Control, Polarity};
use qchiplet::qae::{count_q_applications, qae_workload};
use qchiplet::qpr::{apply_all, Assignment, Monomial, QprGate, SymPoly};
use qchiplet::{
    build_qae, eval_qpr, grover_q, init_qpr, inverse_qft, is_unitary, matmul, merge, power, probability, qft, run_qae,
    simulate, Circuit, ComplexMatrix, GatePlacement, QaeConfig, QaeExpansion, QprOp, SimulationMode, StateVector, C64,
};
use qchiplet_cli::document::CircuitDocument;
use qchiplet_cli::{compile, parse_circuit, simulate_document, to_json, Strategy};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, Option<Duration>, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn qchiplet(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qchiplet")).args(args).env_remove("QCHIPLET_MAX_DIM").output().unwrap()
}

// ---------------------------------------------------------------- 1

/// Plain 8x8 arrays for H@A, H@B, then CX B->C; qubit A is the high bit.
fn hh_cx_oracle() -> [f64; 8] {
    let bit = |i: usize, q: usize| (i >> (2 - q)) & 1;
    let h = |r: usize, c: usize| if r & c == 1 { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 };
    let mut m1 = [[0.0; 8]; 8];
    let mut m2 = [[0.0; 8]; 8];
    for r in 0..8 {
        for c in 0..8 {
            if bit(r, 2) == bit(c, 2) {
                m1[r][c] = h(bit(r, 0), bit(c, 0)) * h(bit(r, 1), bit(c, 1));
            }
            let flipped = c ^ bit(c, 1);
            m2[r][c] = if r == flipped { 1.0 } else { 0.0 };
        }
    }
    let mut out = [0.0; 8];
    for r in 0..8 {
        for k in 0..8 {
            out[r] += m2[r][k] * m1[k][0];
        }
    }
    out
}

fn criterion_1() -> Check {
    let oracle = hh_cx_oracle();
    for (i, v) in oracle.iter().enumerate() {
        let want = if [0, 3, 4, 7].contains(&i) { 0.5 } else { 0.0 };
        ensure((v - want).abs() <= 1e-15, || format!("oracle entry {i} = {v}"))?;
    }
    let doc = compile(&parse_circuit(&std::fs::read_to_string(fixture("hh_cx.json")).unwrap()).unwrap()).unwrap();
    let mut worst: f64 = 0.0;
    for s in [Strategy::Merged, Strategy::Naive, Strategy::StateUpdate] {
        let out = simulate_document(&doc, s).map_err(|e| e.to_string())?;
        for (a, o) in out.amplitudes().iter().zip(&oracle) {
            worst = worst.max((a - C64::new(*o, 0.0)).norm());
        }
    }
    ensure(worst <= 1e-12, || format!("max abs error {worst:e}"))?;
    Ok(format!("max abs error {worst:.1e} over merged/naive/state-update"))
}

// ---------------------------------------------------------------- 2

fn branch_sum_ops() -> Vec<QprOp> {
    vec![
        QprOp::h("C"),
        QprOp::amp("g", "B").when("C", Polarity::Negative),
        QprOp::amp("h", "B").when("C", Polarity::Positive),
        QprOp::h("C"),
        QprOp::x("L").when("B", Polarity::Positive).when("C", Polarity::Negative),
    ]
}

fn numeric_circuit(labels: &[String], ops: &[QprOp], a: &Assignment) -> Circuit {
    let mut c = Circuit::new(labels.len());
    for op in ops {
        c.push(op.to_placement(labels, a).unwrap()).unwrap();
    }
    c
}

fn criterion_2() -> Check {
    let labels: Vec<String> = ["B", "C", "L"].iter().map(|s| s.to_string()).collect();
    let ops = branch_sum_ops();
    let p = apply_all(&init_qpr(&labels).unwrap(), &ops).map_err(|e| e.to_string())?;
    let pr = probability(&p, &[("L", 1)]).map_err(|e| e.to_string())?;

    let got: Vec<(Vec<(String, i32)>, C64)> =
        pr.numerator.terms().map(|(m, c)| (m.iter().map(|(s, e)| (s.to_string(), e)).collect(), c)).collect();
    let mut want = vec![
        (vec![("g".to_string(), 2)], C64::new(1.0, 0.0)),
        (vec![("h".to_string(), 2)], C64::new(1.0, 0.0)),
        (vec![("g".to_string(), 1), ("h".to_string(), 1)], C64::new(2.0, 0.0)),
    ];
    let mut got_sorted = got.clone();
    got_sorted.sort_by(|a, b| format!("{:?}", a.0).cmp(&format!("{:?}", b.0)));
    want.sort_by(|a, b| format!("{:?}", a.0).cmp(&format!("{:?}", b.0)));
    ensure(got_sorted == want, || format!("numerator terms {got:?}"))?;
    ensure(pr.numerator.to_string() == "g + h + 2·sqrt(g)·sqrt(h)", || format!("rendered {}", pr.numerator))?;

    let addition = SymPoly::from_terms([(Monomial::power("g", 2), C64::new(1.0, 0.0)), (Monomial::power("h", 2), C64::new(1.0, 0.0))]);
    ensure(pr.numerator != addition, || "numerator equals plain g + h".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut pairs = vec![(0.25, 0.25), (0.1, 0.7)];
    pairs.extend((0..3).map(|_| (rng.random::<f64>(), rng.random::<f64>())));
    let mut worst: f64 = 0.0;
    for (g, h) in pairs {
        let a = Assignment::from([("g".to_string(), g), ("h".to_string(), h)]);
        let symbolic = pr.eval(&a).map_err(|e| e.to_string())?;
        let out = simulate(&numeric_circuit(&labels, &ops, &a), &StateVector::basis(3, 0).unwrap(), SimulationMode::FullMatrix)
            .map_err(|e| e.to_string())?;
        let matrix: f64 = out.probabilities().iter().enumerate().filter(|(i, _)| i & 1 == 1).map(|(_, p)| p).sum();
        worst = worst.max((symbolic - matrix).abs());
    }
    ensure(worst <= 1e-9, || format!("symbolic vs matrix P(L=1) differ by {worst:e}"))?;
    Ok(format!("numerator `{}`, != g + h, numeric max error {worst:.1e}", pr.numerator))
}

// ---------------------------------------------------------------- 3

fn random_qpr_program(rng: &mut ChaCha8Rng, n: usize, len: usize) -> (Vec<QprOp>, Assignment) {
    let labels: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut ops = Vec::new();
    let mut a = Assignment::new();
    for i in 0..len {
        let kind = rng.random_range(0..6);
        let need = match kind {
            3 => 2,
            4 => 3,
            _ => 1,
        };
        let kind = if need > n { 0 } else { kind };
        let q: Vec<usize> = sample(rng, n, need.min(n)).into_vec();
        let t = labels[q[0]].as_str();
        let op = match kind {
            0 => QprOp::h(t),
            1 => QprOp::x(t),
            2 => QprOp::z(t),
            3 => QprOp::cx(&labels[q[1]], t),
            4 => {
                let pol = |b: bool| if b { Polarity::Positive } else { Polarity::Negative };
                QprOp::x(t).when(&labels[q[1]], pol(rng.random_bool(0.5))).when(&labels[q[2]], pol(rng.random_bool(0.5)))
            }
            _ => {
                let sym = format!("s{i}");
                a.insert(sym.clone(), rng.random::<f64>());
                QprOp::new(QprGate::Amp(sym), t)
            }
        };
        ops.push(op);
    }
    (ops, a)
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(1..=6);
        let len = rng.random_range(1..=14);
        let (ops, a) = random_qpr_program(&mut rng, n, len);
        let labels: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
        let p = apply_all(&init_qpr(&labels).unwrap(), &ops).map_err(|e| e.to_string())?;
        let symbolic = eval_qpr(&p, &a).and_then(|v| v.normalize()).map_err(|e| e.to_string())?;
        let matrix = simulate(&numeric_circuit(&labels, &ops, &a), &StateVector::basis(n, 0).unwrap(), SimulationMode::FullMatrix)
            .map_err(|e| e.to_string())?;
        worst = worst.max(symbolic.max_abs_diff(&matrix));
    }
    ensure(worst <= 1e-9, || format!("max abs difference {worst:e}"))?;
    Ok(format!("100 circuits, max abs difference {worst:.1e}"))
}

// ---------------------------------------------------------------- 4

fn criterion_4() -> Check {
    let mut worst_id: f64 = 0.0;
    let mut worst_dft: f64 = 0.0;
    for m in 1..=8usize {
        let n = 1usize << m;
        let iq = inverse_qft(m).map_err(|e| e.to_string())?;
        let prod = matmul(&iq, &qft(m).unwrap()).unwrap();
        worst_id = worst_id.max(prod.max_abs_diff(&ComplexMatrix::identity(n).unwrap()));
        let s = 1.0 / (n as f64).sqrt();
        for j in 0..n {
            for k in 0..n {
                let ang = -2.0 * PI * ((j * k) % n) as f64 / n as f64;
                worst_dft = worst_dft.max((iq.get(j, k) - C64::new(ang.cos() * s, ang.sin() * s)).norm());
            }
        }
    }
    ensure(worst_id <= 1e-10, || format!("inverse_qft*qft differs from I by {worst_id:e}"))?;
    ensure(worst_dft <= 1e-12, || format!("inverse_qft differs from conjugate DFT by {worst_dft:e}"))?;
    Ok(format!("identity error {worst_id:.1e}, DFT error {worst_dft:.1e}"))
}

// ---------------------------------------------------------------- 5

/// Outcomes predicted from the eigenphases of the 2x2 Grover operator for
/// A = AMP(a), built here from its definition.
fn grover_2x2_peaks(a: f64, m: usize) -> Vec<usize> {
    let (c, s) = ((1.0 - a).sqrt(), a.sqrt());
    let amp = [[c, -s], [s, c]];
    let amp_t = [[c, s], [-s, c]];
    let reflect = [[-1.0, 0.0], [0.0, 1.0]]; // I - 2|0><0|, and the flag=0 phase flip
    let mul = |x: [[f64; 2]; 2], y: [[f64; 2]; 2]| {
        let mut z = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                z[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
            }
        }
        z
    };
    let q = mul(mul(mul(amp, reflect), amp_t), reflect);
    let det = q[0][0] * q[1][1] - q[0][1] * q[1][0];
    assert!((det - 1.0).abs() < 1e-12);
    // eigenvalues exp(+-i phi) with 2 cos(phi) = trace
    let phi = ((q[0][0] + q[1][1]) / 2.0).clamp(-1.0, 1.0).acos();
    let size = 1usize << m;
    let y = (phi / (2.0 * PI) * size as f64).round() as usize % size;
    let mut peaks = vec![y, (size - y) % size];
    peaks.dedup();
    peaks
}

fn criterion_5() -> Check {
    let mut notes = Vec::new();
    for (a, m, want) in [(0.5, 3usize, vec![2usize, 6]), ((PI / 8.0).sin().powi(2), 3, vec![1, 7])] {
        let peaks = grover_2x2_peaks(a, m);
        ensure(peaks == want, || format!("2x2 oracle predicts {peaks:?} for a={a}"))?;
        for expansion in [QaeExpansion::MergedPowers, QaeExpansion::RepeatedChiplet, QaeExpansion::GateLevel] {
            let mut cfg = QaeConfig::from_amplitude(a, m).map_err(|e| e.to_string())?;
            cfg.expansion = expansion;
            let r = run_qae(&cfg).map_err(|e| e.to_string())?;
            let mass: f64 = peaks.iter().map(|&y| r.histogram.probabilities()[y]).sum();
            ensure((mass - 1.0).abs() <= 1e-9, || format!("a={a} {expansion:?}: mass on {peaks:?} is {mass}"))?;
            ensure((r.estimate - a).abs() <= 1e-9, || format!("a={a}: estimate {}", r.estimate))?;
            ensure(r.q_applications == 7, || format!("{} Q applications", r.q_applications))?;
            let built = build_qae(&cfg).map_err(|e| e.to_string())?;
            if expansion != QaeExpansion::GateLevel {
                let structural = count_q_applications(&built.circuit);
                ensure(structural == 7, || format!("{expansion:?}: circuit carries {structural} Q applications"))?;
            }
        }
        notes.push(format!("a={a:.4} -> {peaks:?}"));
    }
    Ok(format!("{}, 7 Q applications", notes.join(", ")))
}

// ---------------------------------------------------------------- 6

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
    let amps = (0..1usize << n).map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    StateVector::from_amplitudes(amps).unwrap().normalize().unwrap()
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for n_state in [1usize, 4, 7, 10] {
        let cfg = qae_workload(n_state + 1, 1, 0.3).map_err(|e| e.to_string())?;
        let q = grover_q(&merge(&cfg.a_circuit).unwrap(), cfg.flag).map_err(|e| e.to_string())?;
        let v = random_state(&mut rng, n_state);
        let mut repeated = v.clone();
        for k in 1..=4u64 {
            repeated = q.apply(&repeated).unwrap();
            if k == 2 || k == 4 {
                let merged = power(&q, k).unwrap().apply(&v).unwrap();
                worst = worst.max(merged.max_abs_diff(&repeated));
            }
        }
        if n_state <= 7 {
            // controlled-Q^2 block vs two controlled-Q blocks
            let n = n_state + 1;
            let targets: Vec<usize> = (1..n).collect();
            let w = random_state(&mut rng, n);
            let block = GatePlacement::new(power(&q, 2).unwrap().as_gate(), targets.clone(), vec![Control::on(0)], n).unwrap();
            let single = GatePlacement::new(q.as_gate(), targets, vec![Control::on(0)], n).unwrap();
            let once = qchiplet::apply(&embed(&block).unwrap(), &w).unwrap();
            let e = embed(&single).unwrap();
            let twice = qchiplet::apply(&e, &qchiplet::apply(&e, &w).unwrap()).unwrap();
            worst = worst.max(once.max_abs_diff(&twice));
        }
    }
    ensure(worst <= 1e-9, || format!("merged powers differ from repetition by {worst:e}"))?;

    let out = qchiplet(&["bench", "--from", "10", "--to", "10", "-m", "3", "--repetitions", "3", "--strategy", "merged,naive", "--output", "json"]);
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let row = |s: &str| v["rows"].as_array().unwrap().iter().find(|r| r["strategy"] == s).cloned().unwrap();
    let (merged, naive) = (row("merged"), row("naive"));
    let q_apps = merged["q_applications"].as_u64().unwrap();
    ensure(q_apps >= 4, || format!("only {q_apps} Q applications"))?;
    let (tm, tn) = (merged["min_seconds"].as_f64().unwrap(), naive["min_seconds"].as_f64().unwrap());
    ensure(tm <= tn, || format!("merged {tm:.4}s slower than naive {tn:.4}s"))?;
    Ok(format!("power error {worst:.1e}; n=10, {q_apps} Q applications: merged {tm:.4}s <= naive {tn:.4}s (min of 3)"))
}

// ---------------------------------------------------------------- 7

fn criterion_7() -> Check {
    let mut cfg = qae_workload(12, 4, 0.3).map_err(|e| e.to_string())?;
    cfg.mode = Some(SimulationMode::StateUpdate);
    let t = Instant::now();
    let r = run_qae(&cfg).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let total: f64 = r.histogram.probabilities().iter().sum();
    ensure((total - 1.0).abs() <= 1e-9, || format!("probabilities sum to {total}"))?;
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!("12 qubits (m=4, {} Q applications) in {:.3}s, total probability {total:.12}", r.q_applications, elapsed.as_secs_f64()))
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Check {
    let args = ["qae", "--amplitude", "0.3", "-m", "4", "--shots", "100000", "--seed", "8675309", "--output", "json"];
    let first = qchiplet(&args);
    let second = qchiplet(&args);
    ensure(first.status.success(), || String::from_utf8_lossy(&first.stderr).into_owned())?;
    ensure(first.stdout == second.stdout, || "repeated invocation differs".into())?;
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).map_err(|e| e.to_string())?;
    ensure(v["seed"] == 8675309 && v["rng"].is_string(), || "seed/rng not recorded".into())?;
    let probs: Vec<f64> = serde_json::from_value(v["probabilities"].clone()).unwrap();
    let counts: Vec<u64> = serde_json::from_value(v["counts"].clone()).unwrap();
    ensure(counts.iter().sum::<u64>() == 100000, || "counts do not sum to shots".into())?;
    let freqs: Vec<f64> = counts.iter().map(|&c| c as f64 / 1e5).collect();
    let tv = qchiplet::total_variation(&probs, &freqs);
    ensure(tv <= 0.05, || format!("total variation {tv}"))?;
    Ok(format!("TV {tv:.5} at 1e5 shots, seed 8675309, repeat bit-identical"))
}

// ---------------------------------------------------------------- 9

fn random_circuit(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Circuit {
    let (ops, a) = random_qpr_program(rng, n, len);
    let labels: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut c = numeric_circuit(&labels, &ops, &a);
    let t = rng.random_range(0..n);
    c.push(GatePlacement::named("RY", &[rng.random::<f64>() * 6.0], vec![t], vec![], n).unwrap()).unwrap();
    c
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0usize;

    for _ in 0..50 {
        let n = rng.random_range(1..=5);
        let c = random_circuit(&mut rng, n, 12);
        let ch = merge(&c).map_err(|e| e.to_string())?;
        ensure(is_unitary(ch.matrix(), 1e-9).unwrap(), || "merged circuit not unitary".into())?;
        let v = random_state(&mut rng, n);
        for mode in [SimulationMode::FullMatrix, SimulationMode::StateUpdate] {
            let out = simulate(&c, &v, mode).unwrap();
            ensure((out.norm() - 1.0).abs() <= 1e-10, || format!("norm drifted to {}", out.norm()))?;
        }
        checked += 1;
    }

    for n in 2..=4usize {
        let id = ComplexMatrix::identity(1 << n).unwrap();
        for t in 0..n {
            for c1 in (0..n).filter(|&q| q != t) {
                let cx = embed(&GatePlacement::named("CX", &[], vec![c1, t], vec![], n).unwrap()).unwrap();
                ensure(matmul(&cx, &cx).unwrap().approx_eq(&id, 1e-15), || "CX^2 != I".into())?;
                for c2 in (0..n).filter(|&q| q != t && q != c1) {
                    for (p1, p2) in [(Polarity::Positive, Polarity::Negative), (Polarity::Negative, Polarity::Negative)] {
                        let ctl = vec![Control { qubit: c1, polarity: p1 }, Control { qubit: c2, polarity: p2 }];
                        let m = embed(&GatePlacement::named("X", &[], vec![t], ctl.clone(), n).unwrap()).unwrap();
                        for col in 0..1usize << n {
                            let active = ctl.iter().all(|c| (col >> (n - 1 - c.qubit) & 1) == c.polarity.active_bit());
                            let row = if active { col ^ (1 << (n - 1 - t)) } else { col };
                            ensure(m.get(row, col) == C64::new(1.0, 0.0), || format!("polarity case col {col}"))?;
                        }
                        checked += 1;
                    }
                }
            }
        }
    }

    for _ in 0..30 {
        let n = rng.random_range(1..=4);
        let (ops, a) = random_qpr_program(&mut rng, n, 8);
        let labels: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
        let p = apply_all(&init_qpr(&labels).unwrap(), &ops).unwrap();
        let t = labels[rng.random_range(0..n)].clone();
        let twice = apply_all(&p, &[QprOp::h(&t), QprOp::h(&t)]).unwrap();
        ensure(twice == qchiplet::collect(&p.scale(C64::new(2.0, 0.0))), || "H twice != 2x".into())?;
        let whole = probability(&p, &[]).unwrap();
        ensure(whole.numerator == whole.denominator, || "total probability is not 1".into())?;
        let total: f64 = (0..2u8).map(|b| probability(&p, &[(labels[0].as_str(), b)]).unwrap().eval(&a).unwrap()).sum();
        ensure((total - 1.0).abs() <= 1e-9, || format!("probabilities sum to {total}"))?;
        checked += 1;
    }

    for name in ["hh_cx.json", "chiplet_power.json", "qae_and.json"] {
        let doc: CircuitDocument = parse_circuit(&std::fs::read_to_string(fixture(name)).unwrap()).map_err(|e| e.to_string())?;
        ensure(parse_circuit(&to_json(&doc)).unwrap() == doc, || format!("{name} does not round-trip"))?;
        checked += 1;
    }
    Ok(format!("{checked} spot checks; full property suites run as separate test targets"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("three-qubit H,H,CX fixture", Some(Duration::from_secs(1)), criterion_1),
        ("QPR error detection", Some(Duration::from_secs(1)), criterion_2),
        ("cross-engine equivalence", Some(Duration::from_secs(30)), criterion_3),
        ("QFT identity", Some(Duration::from_secs(5)), criterion_4),
        ("QAE exact-phase fixtures", Some(Duration::from_secs(10)), criterion_5),
        ("merged-chiplet equivalence and benefit", None, criterion_6),
        ("desk-scale capacity", Some(Duration::from_secs(120)), criterion_7),
        ("histogram fidelity", None, criterion_8),
        ("property spot checks", None, criterion_9),
    ];
    let mut failures = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let elapsed = t.elapsed();
        let result = match (result, budget) {
            (Ok(_), Some(b)) if elapsed > *b => Err(format!("took {:.3}s, budget {}s", elapsed.as_secs_f64(), b.as_secs())),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("criterion {} PASS {name}: {detail} [{:.3}s]", i + 1, elapsed.as_secs_f64()),
            Err(why) => {
                failures += 1;
                println!("criterion {} FAIL {name}: {why} [{:.3}s]", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
