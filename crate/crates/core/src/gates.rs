//! Canonical gate matrices and their embedding into n-qubit operators.
//!
//! Qubit 0 is the most significant bit of a basis index, so the operator for
//! `H` on qubits 0 and 1 of a 3-qubit register is literally `H ⊗ H ⊗ I`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{self, c, check_dim, ComplexMatrix, C64};

/// Gate names accepted by [`gate_matrix`].
pub const GATE_NAMES: &[&str] = &["X", "Z", "H", "CX", "CCX", "R", "RY", "AMP"];

/// Where a gate's matrix came from.
#[derive(Clone, Debug, PartialEq)]
pub enum GateSource {
    /// One of the named gates in [`GATE_NAMES`] (or the adjoint of one).
    Library,
    /// A pre-merged chiplet raised to `power`.
    Chiplet { base: String, power: u64 },
}

#[derive(Clone, PartialEq)]
pub struct Gate {
    name: String,
    params: Vec<f64>,
    matrix: Arc<ComplexMatrix>,
    source: GateSource,
}

impl Gate {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn source(&self) -> &GateSource {
        &self.source
    }

    pub fn arity(&self) -> usize {
        self.matrix.rows().trailing_zeros() as usize
    }

    /// Wrap an already validated unitary (chiplets go through here).
    pub(crate) fn from_unitary(name: impl Into<String>, matrix: Arc<ComplexMatrix>, source: GateSource) -> Self {
        Self { name: name.into(), params: Vec::new(), matrix, source }
    }

    /// The adjoint gate. Named gates keep a readable name.
    pub fn dagger(&self) -> Gate {
        let (name, params) = match self.name.as_str() {
            "X" | "Z" | "H" | "CX" | "CCX" => (self.name.clone(), self.params.clone()),
            "R" | "RY" => (self.name.clone(), self.params.iter().map(|t| -t).collect()),
            other => match other.strip_suffix('†') {
                Some(base) => (base.to_string(), self.params.clone()),
                None => (format!("{other}†"), self.params.clone()),
            },
        };
        Gate { name, params, matrix: Arc::new(self.matrix.dagger()), source: self.source.clone() }
    }
}

impl fmt::Debug for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.params.is_empty() {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}{:?}", self.name, self.params)
        }
    }
}

/// Look up a named gate.
///
/// `R(θ)` is the phase gate `diag(1, e^{iθ})`, `RY(θ)` the real Y rotation and
/// `AMP(s)` the amplitude-loading rotation `|0> -> sqrt(1-s)|0> + sqrt(s)|1>`
/// with second column `(-sqrt(s), sqrt(1-s))`.
pub fn gate_matrix(name: &str, params: &[f64]) -> Result<Gate> {
    let upper = name.to_ascii_uppercase();
    let expected = match upper.as_str() {
        "X" | "Z" | "H" | "CX" | "CCX" => 0,
        "R" | "RY" | "AMP" => 1,
        _ => return Err(Error::UnknownGate(name.to_string())),
    };
    if params.len() != expected {
        return Err(Error::Parameter(format!(
            "{upper} takes {expected} parameter(s), got {}",
            params.len()
        )));
    }
    if let Some(p) = params.iter().find(|p| !p.is_finite()) {
        return Err(Error::Parameter(format!("{upper} parameter {p} is not finite")));
    }
    let matrix = match upper.as_str() {
        "X" => ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]),
        "Z" => ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]),
        "H" => ComplexMatrix::from_real(2, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2]),
        "CX" => controlled(&pauli_x()),
        "CCX" => controlled(&controlled(&pauli_x())?),
        "R" => ComplexMatrix::diagonal(&[c(1.0, 0.0), C64::from_polar(1.0, params[0])]),
        "RY" => {
            let (s, co) = (params[0] / 2.0).sin_cos();
            ComplexMatrix::from_real(2, &[co, -s, s, co])
        }
        "AMP" => {
            let s = params[0];
            if !(0.0..=1.0).contains(&s) {
                return Err(Error::Parameter(format!("AMP amplitude {s} is outside [0, 1]")));
            }
            let (a, b) = ((1.0 - s).sqrt(), s.sqrt());
            ComplexMatrix::from_real(2, &[a, -b, b, a])
        }
        _ => unreachable!(),
    }?;
    Ok(Gate { name: upper, params: params.to_vec(), matrix: Arc::new(matrix), source: GateSource::Library })
}

fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2")
}

/// `diag(I, u)`: identity when the (new, most significant) control is 0.
pub fn controlled(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    if u.qubit_count().is_none() {
        return Err(Error::Shape(format!("controlled() needs a 2^k square matrix, got {}x{}", u.rows(), u.cols())));
    }
    let d = u.rows();
    let mut out = ComplexMatrix::identity(2 * d)?;
    for i in 0..d {
        for j in 0..d {
            out.set(d + i, d + j, u.get(i, j));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// Active when the control qubit is 1.
    Positive,
    /// Active when the control qubit is 0.
    Negative,
}

impl Polarity {
    pub fn active_bit(self) -> usize {
        match self {
            Polarity::Positive => 1,
            Polarity::Negative => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self { qubit, polarity: Polarity::Positive }
    }

    pub fn off(qubit: usize) -> Self {
        Self { qubit, polarity: Polarity::Negative }
    }
}

/// A gate bound to target and control qubits of an `n`-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct GatePlacement {
    gate: Gate,
    targets: Vec<usize>,
    controls: Vec<Control>,
    n: usize,
}

impl GatePlacement {
    pub fn new(gate: Gate, targets: Vec<usize>, controls: Vec<Control>, n: usize) -> Result<Self> {
        if targets.len() != gate.arity() {
            return Err(Error::Placement(format!(
                "{} acts on {} qubit(s) but {} target(s) were given",
                gate.name(),
                gate.arity(),
                targets.len()
            )));
        }
        let mut seen = vec![false; n];
        for q in targets.iter().copied().chain(controls.iter().map(|c| c.qubit)) {
            if q >= n {
                return Err(Error::Placement(format!("qubit {q} out of range for {n} qubits")));
            }
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::Placement(format!("qubit {q} used twice in one {} placement", gate.name())));
            }
        }
        Ok(Self { gate, targets, controls, n })
    }

    /// Single-target gate without controls.
    pub fn single(gate: Gate, target: usize, n: usize) -> Result<Self> {
        Self::new(gate, vec![target], Vec::new(), n)
    }

    /// Shorthand for a named gate.
    pub fn named(name: &str, params: &[f64], targets: Vec<usize>, controls: Vec<Control>, n: usize) -> Result<Self> {
        Self::new(gate_matrix(name, params)?, targets, controls, n)
    }

    pub fn gate(&self) -> &Gate {
        &self.gate
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Every qubit touched (targets then controls).
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets.iter().copied().chain(self.controls.iter().map(|c| c.qubit))
    }

    pub fn with_control(&self, control: Control) -> Result<Self> {
        let mut controls = self.controls.clone();
        controls.push(control);
        Self::new(self.gate.clone(), self.targets.clone(), controls, self.n)
    }

    pub fn dagger(&self) -> Self {
        Self { gate: self.gate.dagger(), ..self.clone() }
    }

    /// Re-home the placement into a larger register by mapping each qubit.
    pub fn remap(&self, map: &[usize], n: usize) -> Result<Self> {
        let get = |q: usize| {
            map.get(q).copied().ok_or_else(|| Error::Placement(format!("qubit {q} has no mapping")))
        };
        let targets = self.targets.iter().map(|&q| get(q)).collect::<Result<_>>()?;
        let controls = self
            .controls
            .iter()
            .map(|c| Ok(Control { qubit: get(c.qubit)?, polarity: c.polarity }))
            .collect::<Result<_>>()?;
        Self::new(self.gate.clone(), targets, controls, n)
    }

    pub(crate) fn bit_of(&self, qubit: usize) -> usize {
        self.n - 1 - qubit
    }

    /// Mask and required value of the control bits.
    pub(crate) fn control_mask(&self) -> (usize, usize) {
        self.controls.iter().fold((0, 0), |(mask, value), c| {
            let bit = 1 << self.bit_of(c.qubit);
            (mask | bit, value | (c.polarity.active_bit() * bit))
        })
    }

    /// Scatter a gate-local index (first target most significant) to register bits.
    pub(crate) fn scatter(&self, local: usize) -> usize {
        let k = self.targets.len();
        self.targets
            .iter()
            .enumerate()
            .filter(|(t, _)| local >> (k - 1 - t) & 1 == 1)
            .fold(0, |acc, (_, &q)| acc | 1 << self.bit_of(q))
    }

    pub(crate) fn gather(&self, index: usize) -> usize {
        self.targets.iter().fold(0, |acc, &q| (acc << 1) | (index >> self.bit_of(q) & 1))
    }

    pub(crate) fn target_mask(&self) -> usize {
        self.targets.iter().fold(0, |acc, &q| acc | 1 << self.bit_of(q))
    }
}

pub(crate) fn register_dim(n: usize) -> Result<usize> {
    if n >= usize::BITS as usize - 1 {
        return Err(Error::DimensionLimit { requested: usize::MAX, cap: linalg::max_dim() });
    }
    let dim = 1usize << n;
    check_dim(dim)?;
    Ok(dim)
}

/// The full `2^n x 2^n` operator of a placement.
///
/// Columns whose control bits do not match act as identity; the rest get the
/// gate applied to the target bits. Built by direct index mapping; see
/// [`embed_kron`] for the literal projector/Kronecker construction.
pub fn embed(p: &GatePlacement) -> Result<ComplexMatrix> {
    let dim = register_dim(p.n)?;
    let mut out = ComplexMatrix::zeros(dim, dim)?;
    let (cmask, cval) = p.control_mask();
    let tmask = p.target_mask();
    let g = p.gate.matrix();
    let k = 1usize << p.targets.len();
    for col in 0..dim {
        if col & cmask != cval {
            out.set(col, col, c(1.0, 0.0));
            continue;
        }
        let base = col & !tmask;
        let t_in = p.gather(col);
        for t_out in 0..k {
            out.set(base | p.scatter(t_out), col, g.get(t_out, t_in));
        }
    }
    Ok(out)
}

/// The kron-and-dot construction of [`embed`]:
/// `I + Σ (G - I)[r, c] · ⊗_q F_q`, where `F_q` is `|pol><pol|` on a control,
/// the matrix unit `|r_t><c_t|` on target `t` and `I` on every other qubit.
///
/// Every term is a chain of 2x2 Kronecker products, so this is only meant for
/// the small named gates (arity ≤ 3); it serves as an independent check.
pub fn embed_kron(p: &GatePlacement) -> Result<ComplexMatrix> {
    if p.targets.len() > 3 {
        return Err(Error::Shape(format!("embed_kron supports up to 3 targets, got {}", p.targets.len())));
    }
    let dim = register_dim(p.n)?;
    let k = 1usize << p.targets.len();
    let g = p.gate.matrix();
    let unit = |r: usize, col: usize| {
        let mut m = ComplexMatrix::zeros(2, 2).expect("2x2");
        m.set(r, col, c(1.0, 0.0));
        m
    };
    let eye = ComplexMatrix::identity(2)?;
    let mut out = ComplexMatrix::identity(dim)?;
    for r in 0..k {
        for col in 0..k {
            let coeff = g.get(r, col) - if r == col { c(1.0, 0.0) } else { C64::default() };
            if coeff.norm() == 0.0 {
                continue;
            }
            let mut term: Option<ComplexMatrix> = None;
            for q in 0..p.n {
                let factor = if let Some(t) = p.targets.iter().position(|&x| x == q) {
                    let shift = p.targets.len() - 1 - t;
                    unit(r >> shift & 1, col >> shift & 1)
                } else if let Some(ctl) = p.controls.iter().find(|ctl| ctl.qubit == q) {
                    let b = ctl.polarity.active_bit();
                    unit(b, b)
                } else {
                    eye.clone()
                };
                term = Some(match term {
                    None => factor,
                    Some(t) => linalg::kron(&t, &factor)?,
                });
            }
            let term = term.expect("n >= 1");
            for (i, z) in term.entries().iter().enumerate() {
                if z.norm() != 0.0 {
                    let (row, cc) = (i / dim, i % dim);
                    out.set(row, cc, out.get(row, cc) + coeff * z);
                }
            }
        }
    }
    Ok(out)
}
