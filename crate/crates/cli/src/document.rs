//! JSON circuit files.
//!
//! A document names its qubits, optionally defines chiplets (from a gate
//! program or an explicit unitary) and lists the program to run:
//!
//! ```json
//! {
//!   "version": 1,
//!   "qubits": ["A", "B", "C"],
//!   "program": [
//!     {"gate": "H", "targets": ["A"]},
//!     {"gate": "H", "targets": ["B"]},
//!     {"gate": "CX", "targets": ["B", "C"]}
//!   ]
//! }
//! ```

use std::collections::{BTreeMap, HashSet};

use qchiplet::gates::GATE_NAMES;
use qchiplet::{merge, power, Chiplet, Circuit, ComplexMatrix, Control, GatePlacement, Polarity, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const DOCUMENT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitDocument {
    pub version: u32,
    pub qubits: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chiplets: Vec<ChipletDef>,
    pub program: Vec<Operation>,
    /// Bitstring over `qubits`, e.g. `"010"`. Defaults to all zeros.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qae: Option<QaeSection>,
}

/// A named block over its own local qubit labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChipletDef {
    pub name: String,
    pub qubits: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub program: Option<Vec<Operation>>,
    /// Rows of `[re, im]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

/// One program step: either a library gate or a chiplet reference.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Operation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chiplet: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
    pub targets: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub controls: Vec<ControlSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlSpec {
    pub qubit: String,
    #[serde(default)]
    pub polarity: PolarityName,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolarityName {
    #[default]
    Positive,
    Negative,
}

impl From<PolarityName> for Polarity {
    fn from(p: PolarityName) -> Self {
        match p {
            PolarityName::Positive => Polarity::Positive,
            PolarityName::Negative => Polarity::Negative,
        }
    }
}

/// Marks the program as an amplitude-estimation `A` with a flag qubit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QaeSection {
    pub flag: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

impl Operation {
    pub fn gate(name: &str, targets: &[&str]) -> Self {
        Self { gate: Some(name.into()), targets: targets.iter().map(|s| s.to_string()).collect(), ..Self::default() }
    }

    pub fn chiplet(name: &str, targets: &[&str]) -> Self {
        Self { chiplet: Some(name.into()), targets: targets.iter().map(|s| s.to_string()).collect(), ..Self::default() }
    }

    pub fn with_params(mut self, params: &[f64]) -> Self {
        self.params = params.to_vec();
        self
    }

    pub fn with_control(mut self, qubit: &str, polarity: PolarityName) -> Self {
        self.controls.push(ControlSpec { qubit: qubit.into(), polarity });
        self
    }

    pub fn with_power(mut self, k: u64) -> Self {
        self.power = Some(k);
        self
    }
}

/// A validated document lowered to circuits.
#[derive(Clone, Debug)]
pub struct CompiledDocument {
    pub labels: Vec<String>,
    /// Chiplet references kept as single pre-merged blocks.
    pub blocks: Circuit,
    /// Chiplet references expanded to library gates; explicit-matrix
    /// chiplets stay as blocks since they have no gate form.
    pub gates: Circuit,
    pub initial: usize,
    pub chiplets: BTreeMap<String, Chiplet>,
}

impl CompiledDocument {
    pub fn n(&self) -> usize {
        self.labels.len()
    }
}

struct Entry {
    chiplet: Chiplet,
    expansion: Option<Circuit>,
}

/// Parse and validate JSON text.
pub fn parse_circuit(text: &str) -> CliResult<CircuitDocument> {
    let doc: CircuitDocument = serde_json::from_str(text)
        .map_err(|e| CliError::invalid(format!("line {}, column {}", e.line(), e.column()), e))?;
    compile(&doc)?;
    Ok(doc)
}

pub fn to_json(doc: &CircuitDocument) -> String {
    serde_json::to_string_pretty(doc).expect("documents always serialize")
}

fn check_labels(labels: &[String], path: &str) -> CliResult<()> {
    if labels.is_empty() {
        return Err(CliError::invalid(path, "at least one qubit is required"));
    }
    let mut seen = HashSet::new();
    for (i, l) in labels.iter().enumerate() {
        if l.is_empty() || !l.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(CliError::invalid(format!("{path}[{i}]"), format!("invalid qubit label {l:?}")));
        }
        if !seen.insert(l) {
            return Err(CliError::invalid(format!("{path}[{i}]"), format!("qubit label {l:?} collides with an earlier one")));
        }
    }
    Ok(())
}

fn resolve(labels: &[String], label: &str, path: String) -> CliResult<usize> {
    labels.iter().position(|l| l == label).ok_or_else(|| CliError::invalid(path, format!("unknown qubit {label:?}")))
}

fn core_at(path: &str, e: qchiplet::Error) -> CliError {
    match e {
        qchiplet::Error::DimensionLimit { .. } => e.into(),
        other => CliError::invalid(path, other),
    }
}

pub fn compile(doc: &CircuitDocument) -> CliResult<CompiledDocument> {
    if doc.version != DOCUMENT_VERSION {
        return Err(CliError::invalid("version", format!("unsupported version {} (expected {DOCUMENT_VERSION})", doc.version)));
    }
    check_labels(&doc.qubits, "qubits")?;
    let all_names: HashSet<&str> = doc.chiplets.iter().map(|c| c.name.as_str()).collect();
    let mut entries: BTreeMap<String, Entry> = BTreeMap::new();

    for (ci, def) in doc.chiplets.iter().enumerate() {
        let path = format!("chiplets[{ci}]");
        if def.name.is_empty() || GATE_NAMES.iter().any(|g| g.eq_ignore_ascii_case(&def.name)) {
            return Err(CliError::invalid(format!("{path}.name"), format!("{:?} is not a usable chiplet name", def.name)));
        }
        if entries.contains_key(&def.name) {
            return Err(CliError::invalid(format!("{path}.name"), format!("chiplet {:?} is defined twice", def.name)));
        }
        check_labels(&def.qubits, &format!("{path}.qubits"))?;
        let k = def.qubits.len();
        let entry = match (&def.program, &def.matrix) {
            (Some(ops), None) => {
                let ctx = Scope { labels: &def.qubits, entries: &entries, all_names: &all_names, current: Some(&def.name) };
                let (mut blocks, gates) = ctx.program(ops, &format!("{path}.program"))?;
                blocks.set_name(def.name.clone());
                let chiplet = merge(&blocks).map_err(|e| core_at(&path, e))?;
                Entry { chiplet, expansion: Some(gates) }
            }
            (None, Some(rows)) => {
                let dim = 1usize << k;
                if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                    return Err(CliError::invalid(format!("{path}.matrix"), format!("expected a {dim}x{dim} matrix for {k} qubits")));
                }
                let data = rows.iter().flatten().map(|[re, im]| C64::new(*re, *im)).collect();
                let m = ComplexMatrix::from_vec(dim, dim, data).map_err(|e| core_at(&format!("{path}.matrix"), e))?;
                let chiplet = Chiplet::new(def.name.clone(), m, vec!["matrix".into()])
                    .map_err(|e| core_at(&format!("{path}.matrix"), e))?;
                Entry { chiplet, expansion: None }
            }
            _ => return Err(CliError::invalid(&path, "a chiplet needs exactly one of `program` or `matrix`")),
        };
        entries.insert(def.name.clone(), entry);
    }

    let ctx = Scope { labels: &doc.qubits, entries: &entries, all_names: &all_names, current: None };
    let (blocks, gates) = ctx.program(&doc.program, "program")?;

    let n = doc.qubits.len();
    let initial = match &doc.initial_state {
        None => 0,
        Some(s) => {
            if s.len() != n || !s.chars().all(|c| c == '0' || c == '1') {
                return Err(CliError::invalid("initial_state", format!("expected a {n}-character bitstring, got {s:?}")));
            }
            usize::from_str_radix(s, 2).map_err(|e| CliError::invalid("initial_state", e))?
        }
    };
    if let Some(q) = &doc.qae {
        resolve(&doc.qubits, &q.flag, "qae.flag".into())?;
        if q.m == Some(0) {
            return Err(CliError::invalid("qae.m", "at least one evaluation qubit is required"));
        }
    }

    Ok(CompiledDocument {
        labels: doc.qubits.clone(),
        blocks,
        gates,
        initial,
        chiplets: entries.into_iter().map(|(k, e)| (k, e.chiplet)).collect(),
    })
}

struct Scope<'a> {
    labels: &'a [String],
    entries: &'a BTreeMap<String, Entry>,
    all_names: &'a HashSet<&'a str>,
    current: Option<&'a str>,
}

impl Scope<'_> {
    fn program(&self, ops: &[Operation], prefix: &str) -> CliResult<(Circuit, Circuit)> {
        let n = self.labels.len();
        let mut blocks = Circuit::new(n);
        let mut gates = Circuit::new(n);
        for (i, op) in ops.iter().enumerate() {
            let path = format!("{prefix}[{i}]");
            let targets = op
                .targets
                .iter()
                .enumerate()
                .map(|(k, t)| resolve(self.labels, t, format!("{path}.targets[{k}]")))
                .collect::<CliResult<Vec<_>>>()?;
            let controls = op
                .controls
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let qubit = resolve(self.labels, &c.qubit, format!("{path}.controls[{k}].qubit"))?;
                    Ok(Control { qubit, polarity: c.polarity.into() })
                })
                .collect::<CliResult<Vec<_>>>()?;

            match (&op.gate, &op.chiplet) {
                (Some(name), None) => {
                    if op.power.is_some() {
                        return Err(CliError::invalid(format!("{path}.power"), "`power` applies to chiplet references only"));
                    }
                    let upper = name.to_ascii_uppercase();
                    // CX/CCX with a single target and explicit controls is plain X
                    let name = match (upper.as_str(), targets.len()) {
                        ("CX" | "CCX", 1) => "X",
                        _ => name.as_str(),
                    };
                    let p = GatePlacement::named(name, &op.params, targets, controls, n).map_err(|e| core_at(&path, e))?;
                    blocks.push(p.clone()).map_err(|e| core_at(&path, e))?;
                    gates.push(p).map_err(|e| core_at(&path, e))?;
                }
                (None, Some(name)) => {
                    let entry = self.lookup(name, &format!("{path}.chiplet"))?;
                    let k = op.power.unwrap_or(1);
                    if k == 0 {
                        return Err(CliError::invalid(format!("{path}.power"), "power must be at least 1"));
                    }
                    if !op.params.is_empty() {
                        return Err(CliError::invalid(format!("{path}.params"), "chiplet references take no parameters"));
                    }
                    if targets.len() != entry.chiplet.n() {
                        return Err(CliError::invalid(
                            format!("{path}.targets"),
                            format!("chiplet {name:?} acts on {} qubits, got {}", entry.chiplet.n(), targets.len()),
                        ));
                    }
                    let block = power(&entry.chiplet, k).map_err(|e| core_at(&path, e))?;
                    let p = GatePlacement::new(block.as_gate(), targets.clone(), controls.clone(), n).map_err(|e| core_at(&path, e))?;
                    blocks.push(p.clone()).map_err(|e| core_at(&path, e))?;
                    match &entry.expansion {
                        Some(local) => {
                            let mut body = local.remap(&targets, n).map_err(|e| core_at(&path, e))?;
                            for &c in &controls {
                                body = body.controlled_by(c).map_err(|e| core_at(&path, e))?;
                            }
                            for _ in 0..k {
                                gates.extend(&body).map_err(|e| core_at(&path, e))?;
                            }
                        }
                        None => gates.push(p).map_err(|e| core_at(&path, e))?,
                    }
                }
                _ => return Err(CliError::invalid(&path, "an operation needs exactly one of `gate` or `chiplet`")),
            }
        }
        Ok((blocks, gates))
    }

    fn lookup(&self, name: &str, path: &str) -> CliResult<&Entry> {
        if let Some(e) = self.entries.get(name) {
            return Ok(e);
        }
        let msg = if self.current == Some(name) {
            format!("chiplet {name:?} references itself")
        } else if self.all_names.contains(name) {
            format!("chiplet {name:?} is used before its definition")
        } else {
            format!("undefined chiplet {name:?}")
        };
        Err(CliError::invalid(path, msg))
    }
}
