//! Quantum polynomial representation.
//!
//! A state is a sum of product terms such as `sqrt(g)·B1·C0·L0`: each term
//! carries one bit per labeled qubit and a symbolic coefficient. Gates act by
//! substituting the target variable, e.g. Hadamard sends `A0 -> A0 + A1` and
//! `A1 -> A0 - A1`. By default the `1/sqrt(2)` Hadamard factor is left out;
//! [`QprPolynomial::with_normalized_hadamard`] puts it back.

mod symbolic;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

pub use symbolic::{
    complement_of, lookup, Assignment, Monomial, SymPoly, SymbolicCoefficient, COMPLEMENT_SUFFIX, ZERO_SCALAR,
};
use symbolic::{format_term, join_signed};

use crate::error::{Error, Result};
use crate::gates::{Control, GatePlacement, Polarity};
use crate::linalg::{c, StateVector, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct QprTerm {
    pub coeff: SymbolicCoefficient,
    /// One bit per qubit, in the polynomial's declaration order.
    pub basis: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QprPolynomial {
    qubits: Vec<String>,
    terms: Vec<QprTerm>,
    normalized: bool,
}

/// `init_qpr(labels)`: the all-zero state with coefficient 1.
pub fn init_qpr<S: AsRef<str>>(labels: &[S]) -> Result<QprPolynomial> {
    QprPolynomial::new(labels)
}

impl QprPolynomial {
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Label("at least one qubit label is required".into()));
        }
        let qubits: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, q) in qubits.iter().enumerate() {
            if q.is_empty() || !q.chars().all(|ch| ch.is_alphanumeric() || ch == '_') {
                return Err(Error::Label(format!("invalid qubit label `{q}`")));
            }
            if qubits[..i].contains(q) {
                return Err(Error::Label(format!("duplicate qubit label `{q}`")));
            }
        }
        let basis = vec![0; qubits.len()];
        Ok(Self { qubits, terms: vec![QprTerm { coeff: SymbolicCoefficient::constant(1.0), basis }], normalized: false })
    }

    /// Keep the `1/sqrt(2)` factor in Hadamard substitutions from now on.
    pub fn with_normalized_hadamard(mut self, on: bool) -> Self {
        self.normalized = on;
        self
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn qubits(&self) -> &[String] {
        &self.qubits
    }

    pub fn terms(&self) -> &[QprTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.qubits
            .iter()
            .position(|q| q == label)
            .ok_or_else(|| Error::Label(format!("unknown qubit `{label}`")))
    }

    /// Concatenate terms (uncollected). Both sides must share the qubit list.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.qubits != other.qubits {
            return Err(Error::Label("polynomials over different qubits".into()));
        }
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    pub fn scale(&self, k: C64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff.scalar *= k;
        }
        out
    }

    /// Coefficient sums per full basis assignment, in basis order.
    pub fn amplitudes(&self) -> BTreeMap<Vec<u8>, SymPoly> {
        let mut groups: BTreeMap<Vec<u8>, Vec<(Monomial, C64)>> = BTreeMap::new();
        for t in &self.terms {
            groups.entry(t.basis.clone()).or_default().push((t.coeff.monomial.clone(), t.coeff.scalar));
        }
        groups
            .into_iter()
            .map(|(b, ts)| (b, SymPoly::from_terms(ts)))
            .filter(|(_, p)| !p.is_zero())
            .collect()
    }

    /// Symbols appearing anywhere in the polynomial.
    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> =
            self.terms.iter().flat_map(|t| t.coeff.monomial.symbols().map(str::to_string)).collect();
        out.sort();
        out.dedup();
        out
    }

    fn render_basis(&self, basis: &[u8]) -> String {
        self.qubits.iter().zip(basis).map(|(q, b)| format!("{q}{b}")).collect::<Vec<_>>().join("·")
    }
}

/// Merge like terms, drop zeros and sort canonically.
pub fn collect(p: &QprPolynomial) -> QprPolynomial {
    let terms = p
        .amplitudes()
        .into_iter()
        .flat_map(|(basis, poly)| {
            poly.terms()
                .map(|(m, s)| QprTerm { coeff: SymbolicCoefficient::new(s, m.clone()), basis: basis.clone() })
                .collect::<Vec<_>>()
        })
        .collect();
    QprPolynomial { qubits: p.qubits.clone(), terms, normalized: p.normalized }
}

impl fmt::Display for QprPolynomial {
    /// Terms sharing a basis are grouped: `(sqrt(g)+sqrt(h))·B1·C0·L1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let groups = self.amplitudes();
        if groups.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = groups
            .iter()
            .map(|(basis, poly)| {
                let basis = self.render_basis(basis);
                let summands: Vec<String> = poly.terms().map(|(m, s)| format_term(s, m)).collect();
                match summands.as_slice() {
                    [one] if one == "1" => basis,
                    [one] if one == "-1" => format!("-{basis}"),
                    [one] => format!("{one}·{basis}"),
                    many => format!("({})·{basis}", join_signed(many, "+", "-")),
                }
            })
            .collect();
        f.write_str(&join_signed(&parts, " + ", " - "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QprGate {
    H,
    X,
    Z,
    /// Amplitude loading with a symbolic probability.
    Amp(String),
}

/// A symbolic gate on one target with optional polarity controls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QprOp {
    pub gate: QprGate,
    pub target: String,
    pub controls: Vec<(String, Polarity)>,
}

impl QprOp {
    pub fn new(gate: QprGate, target: impl Into<String>) -> Self {
        Self { gate, target: target.into(), controls: Vec::new() }
    }

    pub fn h(target: &str) -> Self {
        Self::new(QprGate::H, target)
    }

    pub fn x(target: &str) -> Self {
        Self::new(QprGate::X, target)
    }

    pub fn z(target: &str) -> Self {
        Self::new(QprGate::Z, target)
    }

    pub fn amp(symbol: &str, target: &str) -> Self {
        Self::new(QprGate::Amp(symbol.to_string()), target)
    }

    pub fn cx(control: &str, target: &str) -> Self {
        Self::x(target).when(control, Polarity::Positive)
    }

    pub fn ccx(c1: &str, c2: &str, target: &str) -> Self {
        Self::x(target).when(c1, Polarity::Positive).when(c2, Polarity::Positive)
    }

    pub fn when(mut self, label: &str, polarity: Polarity) -> Self {
        self.controls.push((label.to_string(), polarity));
        self
    }

    /// Numeric gate placement over `qubits`, binding AMP symbols from `assignment`.
    pub fn to_placement(&self, qubits: &[String], assignment: &Assignment) -> Result<GatePlacement> {
        let idx = |l: &str| {
            qubits.iter().position(|q| q == l).ok_or_else(|| Error::Label(format!("unknown qubit `{l}`")))
        };
        let (name, params) = match &self.gate {
            QprGate::H => ("H", vec![]),
            QprGate::X => ("X", vec![]),
            QprGate::Z => ("Z", vec![]),
            QprGate::Amp(s) => ("AMP", vec![lookup(assignment, s)?]),
        };
        let controls = self
            .controls
            .iter()
            .map(|(l, pol)| Ok(Control { qubit: idx(l)?, polarity: *pol }))
            .collect::<Result<Vec<_>>>()?;
        GatePlacement::named(name, &params, vec![idx(&self.target)?], controls, qubits.len())
    }
}

fn substitution(gate: &QprGate, bit: u8, normalized: bool) -> Vec<(u8, SymbolicCoefficient)> {
    let one = |x: f64| SymbolicCoefficient::constant(x);
    match gate {
        QprGate::H => {
            let k = if normalized { FRAC_1_SQRT_2 } else { 1.0 };
            let sign = if bit == 0 { 1.0 } else { -1.0 };
            vec![(0, one(k)), (1, one(sign * k))]
        }
        QprGate::X => vec![(1 - bit, one(1.0))],
        QprGate::Z => vec![(bit, one(if bit == 0 { 1.0 } else { -1.0 }))],
        QprGate::Amp(s) => {
            let root = Monomial::sqrt(s);
            let co_root = Monomial::sqrt(&complement_of(s));
            let term = |x: f64, m: &Monomial| SymbolicCoefficient::new(c(x, 0.0), m.clone());
            if bit == 0 {
                vec![(0, term(1.0, &co_root)), (1, term(1.0, &root))]
            } else {
                vec![(0, term(-1.0, &root)), (1, term(1.0, &co_root))]
            }
        }
    }
}

/// Apply one symbolic gate by substitution; the result is collected.
pub fn apply_qpr(p: &QprPolynomial, op: &QprOp) -> Result<QprPolynomial> {
    let target = p.index_of(&op.target)?;
    let mut controls = Vec::with_capacity(op.controls.len());
    for (label, pol) in &op.controls {
        let i = p.index_of(label)?;
        if i == target || controls.iter().any(|&(j, _)| j == i) {
            return Err(Error::Label(format!("qubit `{label}` used twice in one operation")));
        }
        controls.push((i, pol.active_bit() as u8));
    }
    let mut terms = Vec::with_capacity(p.terms.len() * 2);
    for t in &p.terms {
        if controls.iter().any(|&(i, want)| t.basis[i] != want) {
            terms.push(t.clone());
            continue;
        }
        for (bit, factor) in substitution(&op.gate, t.basis[target], p.normalized) {
            let mut basis = t.basis.clone();
            basis[target] = bit;
            terms.push(QprTerm { coeff: t.coeff.mul(&factor), basis });
        }
    }
    Ok(collect(&QprPolynomial { qubits: p.qubits.clone(), terms, normalized: p.normalized }))
}

/// Apply a sequence of operations.
pub fn apply_all(p: &QprPolynomial, ops: &[QprOp]) -> Result<QprPolynomial> {
    ops.iter().try_fold(p.clone(), |acc, op| apply_qpr(&acc, op))
}

/// Symbolic measurement probability as a ratio of two polynomials.
///
/// `numerator` sums `|coefficient|^2` over bases matching the condition;
/// `denominator` is the same sum over every basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityExpr {
    pub numerator: SymPoly,
    pub denominator: SymPoly,
}

impl ProbabilityExpr {
    pub fn eval(&self, assignment: &Assignment) -> Result<f64> {
        let den = self.denominator.eval(assignment)?.re;
        if den == 0.0 {
            return Err(Error::DegenerateState("total probability evaluates to zero".into()));
        }
        Ok(self.numerator.eval(assignment)?.re / den)
    }

    /// The normalized value when both sides are free of symbols.
    pub fn as_constant(&self) -> Option<f64> {
        Some(self.numerator.as_constant()?.re / self.denominator.as_constant()?.re)
    }
}

/// `p(condition)`, e.g. `[("L", 1)]`.
pub fn probability(p: &QprPolynomial, condition: &[(&str, u8)]) -> Result<ProbabilityExpr> {
    let cond = condition
        .iter()
        .map(|&(l, b)| {
            if b > 1 {
                return Err(Error::Label(format!("bit value {b} for `{l}` is not 0 or 1")));
            }
            Ok((p.index_of(l)?, b))
        })
        .collect::<Result<Vec<_>>>()?;
    let groups = p.amplitudes();
    if groups.is_empty() {
        return Err(Error::DegenerateState("empty polynomial has no probabilities".into()));
    }
    let mut numerator = SymPoly::zero();
    let mut denominator = SymPoly::zero();
    for (basis, amp) in &groups {
        let sq = amp.mul(&amp.conj());
        if cond.iter().all(|&(i, b)| basis[i] == b) {
            numerator = numerator.add(&sq);
        }
        denominator = denominator.add(&sq);
    }
    Ok(ProbabilityExpr { numerator, denominator })
}

/// Numeric state vector (qubit 0 most significant), unnormalized.
pub fn eval_qpr(p: &QprPolynomial, assignment: &Assignment) -> Result<StateVector> {
    let n = p.qubits.len();
    let mut amps = vec![C64::default(); 1usize << n];
    for t in &p.terms {
        let index = t.basis.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        amps[index] += t.coeff.eval(assignment)?;
    }
    StateVector::from_amplitudes(amps)
}
