//! Circuits as layers of gate placements, pre-merged chiplets and simulation.
//!
//! Building a [`Circuit`] only records placements (each holds a `2^k x 2^k`
//! gate matrix for a k-qubit gate), so construction cost is linear in the gate
//! count. Exponential work happens in [`layer_matrix`], [`merge`] and
//! [`simulate`].

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gates::{embed, register_dim, Control, Gate, GatePlacement, GateSource};
use crate::linalg::{self, ComplexMatrix, StateVector, C64};

/// Unitarity tolerance for merged blocks.
pub const CHIPLET_TOL: f64 = 1e-9;

/// Placements acting on pairwise-disjoint qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitLayer {
    n: usize,
    placements: Vec<GatePlacement>,
}

impl CircuitLayer {
    pub fn new(n: usize) -> Self {
        Self { n, placements: Vec::new() }
    }

    pub fn from_placements(n: usize, placements: impl IntoIterator<Item = GatePlacement>) -> Result<Self> {
        let mut layer = Self::new(n);
        for p in placements {
            layer.push(p)?;
        }
        Ok(layer)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn placements(&self) -> &[GatePlacement] {
        &self.placements
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    fn overlaps(&self, p: &GatePlacement) -> Option<usize> {
        p.qubits().find(|q| self.placements.iter().any(|other| other.qubits().any(|o| o == *q)))
    }

    pub fn push(&mut self, p: GatePlacement) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::Placement(format!("placement over {} qubits in a {}-qubit layer", p.n(), self.n)));
        }
        if let Some(q) = self.overlaps(&p) {
            return Err(Error::Placement(format!("qubit {q} already used in this layer")));
        }
        self.placements.push(p);
        Ok(())
    }
}

/// Operator of one layer; the empty layer is the identity.
pub fn layer_matrix(layer: &CircuitLayer) -> Result<ComplexMatrix> {
    let mut acc: Option<ComplexMatrix> = None;
    for p in &layer.placements {
        let m = embed(p)?;
        acc = Some(match acc {
            None => m,
            Some(a) => linalg::matmul(&m, &a)?,
        });
    }
    match acc {
        Some(m) => Ok(m),
        None => ComplexMatrix::identity(register_dim(layer.n)?),
    }
}

/// Ordered layers over `n` qubits, input side first.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n: usize,
    name: Option<String>,
    layers: Vec<CircuitLayer>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Self { n, name: None, layers: Vec::new() }
    }

    pub fn named(n: usize, name: impl Into<String>) -> Self {
        Self { n, name: Some(name.into()), layers: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = Some(name.into());
    }

    pub fn layers(&self) -> &[CircuitLayer] {
        &self.layers
    }

    pub fn placements(&self) -> impl Iterator<Item = &GatePlacement> {
        self.layers.iter().flat_map(|l| l.placements.iter())
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(|l| l.placements.len()).sum()
    }

    /// Append a placement, packing it into the last layer when it is disjoint
    /// from everything there (disjoint operators commute).
    pub fn push(&mut self, p: GatePlacement) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::Placement(format!("placement over {} qubits in a {}-qubit circuit", p.n(), self.n)));
        }
        match self.layers.last_mut() {
            Some(last) if last.overlaps(&p).is_none() => last.push(p),
            _ => {
                self.layers.push(CircuitLayer::from_placements(self.n, [p])?);
                Ok(())
            }
        }
    }

    pub fn push_layer(&mut self, layer: CircuitLayer) -> Result<()> {
        if layer.n != self.n {
            return Err(Error::Placement(format!("{}-qubit layer in a {}-qubit circuit", layer.n, self.n)));
        }
        self.layers.push(layer);
        Ok(())
    }

    /// Append all layers of `other` (same width) after this circuit.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        other.layers.iter().try_for_each(|l| self.push_layer(l.clone()))
    }

    /// Reversed layers with every placement daggered.
    pub fn inverse(&self) -> Circuit {
        let layers = self
            .layers
            .iter()
            .rev()
            .map(|l| CircuitLayer { n: l.n, placements: l.placements.iter().map(GatePlacement::dagger).collect() })
            .collect();
        Circuit { n: self.n, name: self.name.as_ref().map(|s| format!("{s}†")), layers }
    }

    /// The same circuit with `control` added to every placement.
    pub fn controlled_by(&self, control: Control) -> Result<Circuit> {
        let mut out = Circuit { n: self.n, name: self.name.clone(), layers: Vec::new() };
        for p in self.placements() {
            out.push(p.with_control(control)?)?;
        }
        Ok(out)
    }

    /// Re-home into an `n`-qubit register, qubit `i` going to `map[i]`.
    pub fn remap(&self, map: &[usize], n: usize) -> Result<Circuit> {
        let mut out = Circuit { n, name: self.name.clone(), layers: Vec::new() };
        for layer in &self.layers {
            let placements = layer.placements.iter().map(|p| p.remap(map, n)).collect::<Result<Vec<_>>>()?;
            out.push_layer(CircuitLayer::from_placements(n, placements)?)?;
        }
        Ok(out)
    }
}

/// A named, pre-merged unitary block over `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Chiplet {
    name: String,
    base: String,
    power: u64,
    n: usize,
    matrix: Arc<ComplexMatrix>,
    provenance: Vec<String>,
}

impl Chiplet {
    /// Wrap a user-supplied matrix; checks shape and unitarity (1e-9).
    pub fn new(name: impl Into<String>, matrix: ComplexMatrix, provenance: Vec<String>) -> Result<Self> {
        let name = name.into();
        let n = matrix.qubit_count().ok_or_else(|| {
            Error::Shape(format!("chiplet `{name}` must be 2^k square, got {}x{}", matrix.rows(), matrix.cols()))
        })?;
        let defect = linalg::unitarity_defect(&matrix);
        if defect > CHIPLET_TOL {
            return Err(Error::Validation(format!("chiplet `{name}` is not unitary (defect {defect:.3e})")));
        }
        Ok(Self::trusted(name, n, matrix, provenance))
    }

    /// For products of already validated unitaries.
    pub(crate) fn trusted(name: String, n: usize, matrix: ComplexMatrix, provenance: Vec<String>) -> Self {
        Self { base: name.clone(), name, power: 1, n, matrix: Arc::new(matrix), provenance }
    }

    pub fn identity(name: impl Into<String>, n: usize) -> Result<Self> {
        Ok(Self::trusted(name.into(), n, ComplexMatrix::identity(register_dim(n)?)?, Vec::new()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Name of the block this chiplet is a power of (itself when `power == 1`).
    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn power(&self) -> u64 {
        self.power
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        let name = name.into();
        Self { base: name.clone(), name, power: 1, ..self.clone() }
    }

    pub fn dagger(&self) -> Self {
        Self {
            name: format!("{}†", self.name),
            base: format!("{}†", self.base),
            matrix: Arc::new(self.matrix.dagger()),
            ..self.clone()
        }
    }

    pub fn as_gate(&self) -> Gate {
        Gate::from_unitary(
            self.name.clone(),
            Arc::clone(&self.matrix),
            GateSource::Chiplet { base: self.base.clone(), power: self.power },
        )
    }

    /// Apply the merged matrix to a state.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        linalg::apply(&self.matrix, v)
    }
}

/// Pre-merge a circuit: `layer_matrix(last) * ... * layer_matrix(first)`.
pub fn merge(c: &Circuit) -> Result<Chiplet> {
    let dim = register_dim(c.n)?;
    let mut acc = ComplexMatrix::identity(dim)?;
    let mut provenance = Vec::with_capacity(c.layers.len());
    for (i, layer) in c.layers.iter().enumerate() {
        acc = linalg::matmul(&layer_matrix(layer)?, &acc)?;
        let names: Vec<String> = layer.placements.iter().map(|p| format!("{:?}", p.gate())).collect();
        provenance.push(format!("layer {i}: {}", names.join(" ")));
    }
    Ok(Chiplet::trusted(c.name.clone().unwrap_or_else(|| "merged".into()), c.n, acc, provenance))
}

/// `ch^k` by repeated squaring; `k = 0` gives the identity.
pub fn power(ch: &Chiplet, k: u64) -> Result<Chiplet> {
    let mut result: Option<ComplexMatrix> = None;
    let mut square = (*ch.matrix).clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => square.clone(),
                Some(r) => linalg::matmul(&square, &r)?,
            });
        }
        e >>= 1;
        if e > 0 {
            square = linalg::matmul(&square, &square)?;
        }
    }
    let matrix = match result {
        Some(m) => m,
        None => ComplexMatrix::identity(ch.matrix.rows())?,
    };
    let total = ch.power.saturating_mul(k);
    Ok(Chiplet {
        name: format!("{}^{}", ch.base, total),
        base: ch.base.clone(),
        power: total,
        n: ch.n,
        matrix: Arc::new(matrix),
        provenance: vec![format!("{}^{k}", ch.name)],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimulationMode {
    /// Materialize each layer's `2^n x 2^n` operator and apply it (kron-and-dot).
    FullMatrix,
    /// Apply each placement directly to the state vector.
    StateUpdate,
}

pub fn simulate(c: &Circuit, v0: &StateVector, mode: SimulationMode) -> Result<StateVector> {
    if v0.dim() != 1usize.checked_shl(c.n as u32).unwrap_or(0) {
        return Err(Error::Shape(format!("{}-qubit circuit cannot act on a state of dimension {}", c.n, v0.dim())));
    }
    match mode {
        SimulationMode::FullMatrix => {
            register_dim(c.n)?;
            c.layers.iter().try_fold(v0.clone(), |v, layer| linalg::apply(&layer_matrix(layer)?, &v))
        }
        SimulationMode::StateUpdate => {
            let mut v = v0.clone();
            let was_normalized = v.is_normalized();
            for p in c.placements() {
                apply_placement(p, v.amplitudes_mut());
            }
            v.refresh_flag(was_normalized);
            Ok(v)
        }
    }
}

/// In-place update of `amps` by one placement, without forming `2^n` operators.
pub(crate) fn apply_placement(p: &GatePlacement, amps: &mut [C64]) {
    let g = p.gate().matrix();
    let k = g.rows();
    let tmask = p.target_mask();
    let (cmask, cval) = p.control_mask();
    let offsets: Vec<usize> = (0..k).map(|t| p.scatter(t)).collect();
    let mut buf = vec![C64::default(); k];
    for base in 0..amps.len() {
        if base & tmask != 0 || base & cmask != cval {
            continue;
        }
        for (b, &off) in buf.iter_mut().zip(&offsets) {
            *b = amps[base | off];
        }
        for (r, &off) in offsets.iter().enumerate() {
            amps[base | off] = g.row(r).iter().zip(&buf).map(|(x, y)| x * y).sum();
        }
    }
}

/// Named chiplets available for reuse.
#[derive(Clone, Debug, Default)]
pub struct ChipletLibrary {
    entries: BTreeMap<String, Chiplet>,
}

impl ChipletLibrary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, ch: Chiplet) -> Result<()> {
        if self.entries.contains_key(ch.name()) {
            return Err(Error::Library(format!("chiplet `{}` is already registered", ch.name())));
        }
        self.entries.insert(ch.name().to_string(), ch);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&Chiplet> {
        self.entries.get(name).ok_or_else(|| Error::Library(format!("no chiplet named `{name}`")))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Place chiplet `name` on `targets` of an `n`-qubit register; each control
    /// turns it into `controlled(chiplet)`.
    pub fn instantiate(&self, name: &str, targets: Vec<usize>, controls: Vec<Control>, n: usize) -> Result<GatePlacement> {
        GatePlacement::new(self.get(name)?.as_gate(), targets, controls, n)
    }
}
