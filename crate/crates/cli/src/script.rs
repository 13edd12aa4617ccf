//! Line-oriented QPR scripts.
//!
//! ```text
//! # comment
//! init B C L
//! apply H C
//! apply AMP(g) B if C=0
//! apply AMP(h) B if C=1
//! apply H C
//! apply X L if B=1 C=0
//! show V1
//! probability L=1
//! probability L=1 at g=0.25 h=0.25
//! ```
//!
//! Directives: `init`, `normalize on|off`, `apply`, `collect`, `print`,
//! `show NAME`, `probability COND... [at SYM=VALUE...]`.

use qchiplet::qpr::{apply_qpr, collect, init_qpr, probability, Assignment, QprGate, QprOp};
use qchiplet::{Polarity, QprPolynomial};

use crate::error::{CliError, CliResult};

struct Line<'a> {
    number: usize,
    directive: &'a str,
    args: Vec<&'a str>,
}

impl Line<'_> {
    fn err(&self, msg: impl std::fmt::Display) -> CliError {
        CliError::invalid(format!("line {}", self.number), format!("{}: {msg}", self.directive))
    }
}

/// Run a script and return its printed output, one entry per line.
pub fn run_script(text: &str) -> CliResult<Vec<String>> {
    let mut out = Vec::new();
    let mut state: Option<QprPolynomial> = None;
    let mut normalized = false;

    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let directive = words.next().unwrap_or_default();
        let line = Line { number: i + 1, directive, args: words.collect() };

        match directive {
            "init" => {
                if state.is_some() {
                    return Err(line.err("the register is already initialized"));
                }
                let p = init_qpr(&line.args).map_err(|e| line.err(e))?;
                state = Some(p.with_normalized_hadamard(normalized));
            }
            "normalize" => {
                normalized = match line.args.as_slice() {
                    ["on"] => true,
                    ["off"] => false,
                    _ => return Err(line.err("expected `on` or `off`")),
                };
                state = state.map(|p| p.with_normalized_hadamard(normalized));
            }
            _ => {
                let p = state.as_ref().ok_or_else(|| line.err("`init` must come first"))?;
                match directive {
                    "apply" => {
                        let op = parse_apply(&line)?;
                        state = Some(apply_qpr(p, &op).map_err(|e| line.err(e))?);
                    }
                    "collect" => {
                        no_args(&line)?;
                        state = Some(collect(p));
                    }
                    "print" => {
                        no_args(&line)?;
                        out.push(p.to_string());
                    }
                    "show" => match line.args.as_slice() {
                        [name] => out.push(format!("{name} = {p}")),
                        _ => return Err(line.err("expected one name")),
                    },
                    "probability" => out.extend(report_probability(&line, p)?),
                    other => return Err(line.err(format!("unknown directive `{other}`"))),
                }
            }
        }
    }
    Ok(out)
}

fn no_args(line: &Line) -> CliResult<()> {
    if line.args.is_empty() {
        Ok(())
    } else {
        Err(line.err("takes no arguments"))
    }
}

fn parse_condition<'a>(line: &Line, word: &'a str) -> CliResult<(&'a str, u8)> {
    match word.split_once('=') {
        Some((label, "0")) if !label.is_empty() => Ok((label, 0)),
        Some((label, "1")) if !label.is_empty() => Ok((label, 1)),
        _ => Err(line.err(format!("expected LABEL=0 or LABEL=1, got `{word}`"))),
    }
}

fn parse_apply(line: &Line) -> CliResult<QprOp> {
    let (gate_word, rest) = line.args.split_first().ok_or_else(|| line.err("missing gate"))?;
    let (operands, conditions) = match rest.iter().position(|w| *w == "if") {
        Some(k) => (&rest[..k], &rest[k + 1..]),
        None => (rest, &[][..]),
    };
    if operands.is_empty() {
        return Err(line.err("missing target"));
    }
    let upper = gate_word.to_ascii_uppercase();
    let (gate, arity) = match upper.as_str() {
        "H" => (QprGate::H, 1),
        "X" => (QprGate::X, 1),
        "Z" => (QprGate::Z, 1),
        "CX" => (QprGate::X, 2),
        "CCX" => (QprGate::X, 3),
        _ => match upper.strip_prefix("AMP(").and_then(|s| s.strip_suffix(')')) {
            Some(_) => {
                let sym = &gate_word[4..gate_word.len() - 1];
                if sym.is_empty() || !sym.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(line.err(format!("invalid symbol `{sym}`")));
                }
                (QprGate::Amp(sym.to_string()), 1)
            }
            None => return Err(line.err(format!("unknown gate `{gate_word}`"))),
        },
    };
    if operands.len() != arity {
        return Err(line.err(format!("{gate_word} takes {arity} qubit(s), got {}", operands.len())));
    }
    let mut op = QprOp::new(gate, operands[arity - 1]);
    for c in &operands[..arity - 1] {
        op = op.when(c, Polarity::Positive);
    }
    if rest.contains(&"if") && conditions.is_empty() {
        return Err(line.err("`if` needs at least one condition"));
    }
    for w in conditions {
        let (label, bit) = parse_condition(line, w)?;
        op = op.when(label, if bit == 1 { Polarity::Positive } else { Polarity::Negative });
    }
    Ok(op)
}

fn report_probability(line: &Line, p: &QprPolynomial) -> CliResult<Vec<String>> {
    let (conds, values) = match line.args.iter().position(|w| *w == "at") {
        Some(k) => (&line.args[..k], &line.args[k + 1..]),
        None => (&line.args[..], &[][..]),
    };
    let cond = conds.iter().map(|w| parse_condition(line, w)).collect::<CliResult<Vec<_>>>()?;
    let mut assignment = Assignment::new();
    for w in values {
        let (sym, v) = w.split_once('=').ok_or_else(|| line.err(format!("expected SYMBOL=VALUE, got `{w}`")))?;
        let v: f64 = v.parse().map_err(|_| line.err(format!("`{v}` is not a number")))?;
        assignment.insert(sym.to_string(), v);
    }

    let expr = probability(p, &cond).map_err(|e| line.err(e))?;
    let name = format!("p({})", conds.join(","));
    let mut out = vec![format!("{name} numerator: {}", expr.numerator), format!("{name} denominator: {}", expr.denominator)];
    if let Some(v) = expr.as_constant() {
        out.push(format!("{name} = {v}"));
    } else if !assignment.is_empty() {
        let v = expr.eval(&assignment).map_err(|e| line.err(e))?;
        let at: Vec<String> = assignment.iter().map(|(k, x)| format!("{k}={x}")).collect();
        out.push(format!("{name} = {v} at {}", at.join(", ")));
    }
    Ok(out)
}
