//! Outcome tables: exact probabilities and seeded multinomial samples.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::StateVector;

/// Recorded with every sampled histogram so runs can be reproduced.
pub const RNG_ALGORITHM: &str = "chacha8-weighted-index-v1";

/// Probabilities must sum to one within this tolerance.
pub const PROBABILITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    width: usize,
    probabilities: Vec<f64>,
    counts: Option<Vec<u64>>,
    shots: u64,
    seed: u64,
}

impl Histogram {
    /// Exact table over `2^width` outcomes, in ascending basis order.
    pub fn exact(width: usize, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.len() != 1usize << width {
            return Err(Error::Shape(format!(
                "{} probabilities for {width}-bit outcomes",
                probabilities.len()
            )));
        }
        if let Some(p) = probabilities.iter().find(|p| !(-1e-12..=1.0 + 1e-12).contains(*p)) {
            return Err(Error::Range(format!("probability {p} outside [0, 1]")));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return Err(Error::DegenerateState(format!("probabilities sum to {total}")));
        }
        Ok(Self { width, probabilities, counts: None, shots: 0, seed: 0 })
    }

    pub fn from_state(v: &StateVector) -> Result<Self> {
        Self::exact(v.qubit_count(), v.probabilities())
    }

    /// Marginal over the leading `width` qubits of `v`.
    pub fn marginal_leading(v: &StateVector, width: usize) -> Result<Self> {
        let rest = v.qubit_count().checked_sub(width).ok_or_else(|| {
            Error::Shape(format!("cannot take {width} leading qubits of a {}-qubit state", v.qubit_count()))
        })?;
        let mut probs = vec![0.0; 1 << width];
        for (i, a) in v.amplitudes().iter().enumerate() {
            probs[i >> rest] += a.norm_sqr();
        }
        Self::exact(width, probs)
    }

    /// Draw `shots` outcomes from the exact table with a seeded ChaCha8 stream.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<Self> {
        let mut counts = vec![0u64; self.probabilities.len()];
        if shots > 0 {
            let weights: Vec<f64> = self.probabilities.iter().map(|p| p.max(0.0)).collect();
            let dist = WeightedIndex::new(&weights).map_err(|e| Error::DegenerateState(e.to_string()))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..shots {
                counts[dist.sample(&mut rng)] += 1;
            }
        }
        Ok(Self { counts: Some(counts), shots, seed, ..self.clone() })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn counts(&self) -> Option<&[u64]> {
        self.counts.as_deref()
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn label(&self, outcome: usize) -> String {
        format!("{outcome:0w$b}", w = self.width)
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.probabilities.len()).map(|i| self.label(i)).collect()
    }

    /// Relative frequencies of the sample, if any.
    pub fn frequencies(&self) -> Option<Vec<f64>> {
        let counts = self.counts.as_ref()?;
        let shots = self.shots.max(1) as f64;
        Some(counts.iter().map(|&c| c as f64 / shots).collect())
    }

    /// Most likely outcome of the sample when present, else of the exact
    /// table. Ties (within 1e-12) go to the smaller outcome.
    pub fn peak(&self) -> usize {
        let dist = self.frequencies().unwrap_or_else(|| self.probabilities.clone());
        let max = dist.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        dist.iter().position(|&p| p >= max - 1e-12).unwrap_or(0)
    }
}

/// Half the L1 distance between two distributions of equal length.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "distributions over different supports");
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
