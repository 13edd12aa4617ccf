//! Monomials with half-integer exponents and sums of them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::linalg::{c, C64};

/// Scalars below this modulus are dropped when collecting.
pub const ZERO_SCALAR: f64 = 1e-14;

/// Symbol values used by numeric evaluation.
pub type Assignment = BTreeMap<String, f64>;

/// Suffix of the complement symbol: `AMP(g)` introduces `sqrt(g)` and `sqrt(gbar)`.
pub const COMPLEMENT_SUFFIX: &str = "bar";

pub fn complement_of(symbol: &str) -> String {
    format!("{symbol}{COMPLEMENT_SUFFIX}")
}

/// Look up `symbol`, falling back to `1 - base` for an unbound `basebar`.
pub fn lookup(assignment: &Assignment, symbol: &str) -> Result<f64> {
    let value = match assignment.get(symbol) {
        Some(&v) => v,
        None => match symbol.strip_suffix(COMPLEMENT_SUFFIX).and_then(|b| assignment.get(b)) {
            Some(&b) => 1.0 - b,
            None => return Err(Error::Assignment(symbol.to_string())),
        },
    };
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::Range(format!("symbol `{symbol}` = {value} is outside [0, 1]")));
    }
    Ok(value)
}

/// Product of symbols raised to half-integer powers, stored in half units
/// (`1` is a square root). Zero exponents never appear.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: BTreeMap<String, i32>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    /// `symbol^(half_units / 2)`.
    pub fn power(symbol: &str, half_units: i32) -> Self {
        let mut m = Self::one();
        if half_units != 0 {
            m.exponents.insert(symbol.to_string(), half_units);
        }
        m
    }

    pub fn sqrt(symbol: &str) -> Self {
        Self::power(symbol, 1)
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Exponent of `symbol` as a real number (`0.5` for a square root).
    pub fn exponent(&self, symbol: &str) -> f64 {
        self.exponents.get(symbol).map_or(0.0, |&e| f64::from(e) / 2.0)
    }

    /// `(symbol, half-unit exponent)` pairs in name order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, i32)> {
        self.exponents.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.exponents.keys().map(String::as_str)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut exponents = self.exponents.clone();
        for (k, &v) in &other.exponents {
            let e = exponents.entry(k.clone()).or_insert(0);
            *e += v;
            if *e == 0 {
                exponents.remove(k);
            }
        }
        Self { exponents }
    }

    pub fn eval(&self, assignment: &Assignment) -> Result<f64> {
        self.exponents.iter().try_fold(1.0, |acc, (sym, &e)| {
            let v = lookup(assignment, sym)?;
            Ok(acc * if e % 2 == 0 { v.powi(e / 2) } else { v.powf(f64::from(e) / 2.0) })
        })
    }
}

/// Fewer symbols first, then symbol names and exponents lexicographically.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exponents
            .len()
            .cmp(&other.exponents.len())
            .then_with(|| self.exponents.iter().cmp(other.exponents.iter()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|(s, &e)| match e {
                1 => format!("sqrt({s})"),
                2 => s.clone(),
                e if e % 2 == 0 => format!("{s}^{}", e / 2),
                e => format!("{s}^({e}/2)"),
            })
            .collect();
        f.write_str(&parts.join("·"))
    }
}

/// `scalar · monomial`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicCoefficient {
    pub scalar: C64,
    pub monomial: Monomial,
}

impl SymbolicCoefficient {
    pub fn new(scalar: C64, monomial: Monomial) -> Self {
        Self { scalar, monomial }
    }

    pub fn constant(value: f64) -> Self {
        Self::new(c(value, 0.0), Monomial::one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.scalar * other.scalar, self.monomial.mul(&other.monomial))
    }

    pub fn eval(&self, assignment: &Assignment) -> Result<C64> {
        Ok(self.scalar * self.monomial.eval(assignment)?)
    }
}

/// Display rounding: 12 decimals, trailing zeros dropped.
pub(crate) fn round_display(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 { 0.0 } else { r }
}

pub(crate) fn format_real(x: f64) -> String {
    let x = round_display(x);
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

/// One signed summand, e.g. `2·sqrt(g)` or `-h`. Complex scalars are bracketed.
pub(crate) fn format_term(scalar: C64, monomial: &Monomial) -> String {
    let mut out = String::new();
    let scalar = C64::new(round_display(scalar.re), round_display(scalar.im));
    if scalar.im == 0.0 {
        let r = scalar.re;
        match (r.abs() == 1.0, monomial.is_one()) {
            (true, false) => {
                if r < 0.0 {
                    out.push('-');
                }
            }
            _ => {
                out.push_str(&format_real(r));
                if !monomial.is_one() {
                    out.push('·');
                }
            }
        }
    } else {
        let _ = write!(out, "({}{:+}i)", format_real(scalar.re), scalar.im);
        if !monomial.is_one() {
            out.push('·');
        }
    }
    if !monomial.is_one() {
        let _ = write!(out, "{monomial}");
    }
    out
}

/// Join signed summands with `sep_plus`/`sep_minus` (leading sign kept on the first).
pub(crate) fn join_signed(parts: &[String], sep_plus: &str, sep_minus: &str) -> String {
    let mut out = String::new();
    for (i, p) in parts.iter().enumerate() {
        match (i, p.strip_prefix('-')) {
            (0, _) => out.push_str(p),
            (_, Some(rest)) => {
                out.push_str(sep_minus);
                out.push_str(rest);
            }
            (_, None) => {
                out.push_str(sep_plus);
                out.push_str(p);
            }
        }
    }
    out
}

/// Collected sum of monomials with complex scalars, in canonical order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SymPoly {
    terms: BTreeMap<Monomial, C64>,
}

impl SymPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(value: f64) -> Self {
        Self::from_terms([(Monomial::one(), c(value, 0.0))])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C64)>) -> Self {
        let mut p = Self::zero();
        for (m, s) in terms {
            p.add_term(m, s);
        }
        p.prune();
        p
    }

    fn add_term(&mut self, m: Monomial, s: C64) {
        *self.terms.entry(m).or_default() += s;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, s| s.norm() >= ZERO_SCALAR);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, C64)> {
        self.terms.iter().map(|(m, &s)| (m, s))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Scalar attached to `m` (zero when absent).
    pub fn coefficient(&self, m: &Monomial) -> C64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    /// The value when the polynomial has no symbols.
    pub fn as_constant(&self) -> Option<C64> {
        match self.terms.len() {
            0 => Some(C64::default()),
            1 => self.terms.get(&Monomial::one()).copied(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms().chain(other.terms()).map(|(m, s)| (m.clone(), s)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, sa) in self.terms() {
            for (b, sb) in other.terms() {
                out.add_term(a.mul(b), sa * sb);
            }
        }
        out.prune();
        out
    }

    /// Conjugates scalars only; symbols are real.
    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(m, s)| (m.clone(), s.conj())).collect() }
    }

    pub fn eval(&self, assignment: &Assignment) -> Result<C64> {
        self.terms().try_fold(C64::default(), |acc, (m, s)| Ok(acc + s * m.eval(assignment)?))
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms().map(|(m, s)| format_term(s, m)).collect();
        f.write_str(&join_signed(&parts, " + ", " - "))
    }
}
