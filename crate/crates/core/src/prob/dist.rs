//! Alphabets, distributions, channels and cost functions.

use crate::error::{Error, Result};
use std::collections::HashSet;
use std::sync::Arc;

/// Tolerance on total mass of distributions and channel rows.
pub const PROB_TOLERANCE: f64 = 1e-12;

const RENORMALIZE_ABOVE: f64 = 1e-15;

/// A finite, labelled alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    name: Arc<str>,
    labels: Arc<[String]>,
}

impl Alphabet {
    pub fn new(name: impl Into<String>, labels: Vec<String>) -> Result<Self> {
        let name = name.into();
        if labels.is_empty() {
            return Err(Error::Structural(format!("alphabet `{name}` is empty")));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::Structural(format!("alphabet `{name}` repeats label `{l}`")));
            }
        }
        Ok(Self {
            name: name.into(),
            labels: labels.into(),
        })
    }

    /// Alphabet with labels `0..size`.
    pub fn indexed(name: impl Into<String>, size: usize) -> Result<Self> {
        Self::new(name, (0..size).map(|i| i.to_string()).collect())
    }

    /// Cartesian product, first factor major. Labels are joined with `,`.
    pub fn product(name: impl Into<String>, first: &Alphabet, second: &Alphabet) -> Self {
        let labels: Vec<String> = first
            .labels
            .iter()
            .flat_map(|a| second.labels.iter().map(move |b| format!("{a},{b}")))
            .collect();
        Self {
            name: Arc::from(name.into()),
            labels: labels.into(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Self {
            name: Arc::from(name.into()),
            labels: Arc::clone(&self.labels),
        }
    }
}

/// Validates a probability vector, renormalizing when the sum is within
/// tolerance of one.
pub(crate) fn validate_pmf(name: &str, row: Option<usize>, mass: &mut [f64]) -> Result<()> {
    let bad = |reason: String| Error::InvalidDistribution {
        name: name.to_string(),
        row,
        reason,
    };
    for (i, &m) in mass.iter().enumerate() {
        if !m.is_finite() || m < 0.0 {
            return Err(bad(format!("entry {i} = {m} is not a nonnegative number")));
        }
    }
    let total: f64 = mass.iter().sum();
    if (total - 1.0).abs() > PROB_TOLERANCE {
        return Err(bad(format!("entries sum to {total}, expected 1")));
    }
    // a few ulps of summation error are left alone so reloading a
    // normalized vector is bit-stable
    if (total - 1.0).abs() > RENORMALIZE_ABOVE {
        mass.iter_mut().for_each(|m| *m /= total);
    }
    Ok(())
}

/// Probability mass function over an alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    alphabet: Alphabet,
    mass: Vec<f64>,
}

impl Distribution {
    pub fn new(alphabet: Alphabet, mut mass: Vec<f64>) -> Result<Self> {
        if mass.len() != alphabet.size() {
            return Err(Error::Structural(format!(
                "distribution over `{}` has {} entries for {} symbols",
                alphabet.name(),
                mass.len(),
                alphabet.size()
            )));
        }
        validate_pmf(alphabet.name(), None, &mut mass)?;
        Ok(Self { alphabet, mass })
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let n = alphabet.size();
        Self {
            alphabet,
            mass: vec![1.0 / n as f64; n],
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn entropy(&self) -> f64 {
        self.mass.iter().map(|&p| super::scalar::xlog2x_neg(p)).sum()
    }
}

/// Row-stochastic matrix from an input alphabet to an output alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    input: Alphabet,
    output: Alphabet,
    matrix: Vec<f64>,
}

impl Channel {
    pub fn new(input: Alphabet, output: Alphabet, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != input.size() {
            return Err(Error::Structural(format!(
                "channel `{}` has {} rows for {} input symbols",
                output.name(),
                rows.len(),
                input.size()
            )));
        }
        let mut matrix = Vec::with_capacity(input.size() * output.size());
        for (r, mut row) in rows.into_iter().enumerate() {
            if row.len() != output.size() {
                return Err(Error::Structural(format!(
                    "channel `{}` row {r} has {} entries for {} output symbols",
                    output.name(),
                    row.len(),
                    output.size()
                )));
            }
            validate_pmf(output.name(), Some(r), &mut row)?;
            matrix.extend(row);
        }
        Ok(Self { input, output, matrix })
    }

    /// Builds a channel from a flat row-major matrix without copying rows.
    pub fn from_flat(input: Alphabet, output: Alphabet, mut matrix: Vec<f64>) -> Result<Self> {
        let (n, m) = (input.size(), output.size());
        if matrix.len() != n * m {
            return Err(Error::Structural(format!(
                "channel `{}` needs {} entries, got {}",
                output.name(),
                n * m,
                matrix.len()
            )));
        }
        for r in 0..n {
            validate_pmf(output.name(), Some(r), &mut matrix[r * m..(r + 1) * m])?;
        }
        Ok(Self { input, output, matrix })
    }

    /// Flat row-major matrix taken as is; rows must already be stochastic.
    pub(crate) fn from_flat_unchecked(input: Alphabet, output: Alphabet, matrix: Vec<f64>) -> Self {
        debug_assert_eq!(matrix.len(), input.size() * output.size());
        Self { input, output, matrix }
    }

    /// Channel whose output is a deterministic function of the input.
    pub fn deterministic(input: Alphabet, output: Alphabet, map: &[usize]) -> Result<Self> {
        if map.len() != input.size() || map.iter().any(|&j| j >= output.size()) {
            return Err(Error::Structural(format!(
                "deterministic map into `{}` does not fit the alphabets",
                output.name()
            )));
        }
        let m = output.size();
        let mut matrix = vec![0.0; input.size() * m];
        for (i, &j) in map.iter().enumerate() {
            matrix[i * m + j] = 1.0;
        }
        Ok(Self { input, output, matrix })
    }

    /// Binary symmetric channel with the given crossover.
    pub fn bsc(input: Alphabet, output: Alphabet, crossover: f64) -> Result<Self> {
        if input.size() != 2 || output.size() != 2 {
            return Err(Error::Structural("a BSC needs binary alphabets".into()));
        }
        let q = crossover;
        Self::new(input, output, vec![vec![1.0 - q, q], vec![q, 1.0 - q]])
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.output.size() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let m = self.output.size();
        &self.matrix[i * m..(i + 1) * m]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.matrix.chunks_exact(self.output.size())
    }
}

/// Nonnegative per-action cost `Γ(a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostFunction {
    actions: Alphabet,
    cost: Vec<f64>,
}

impl CostFunction {
    pub fn new(actions: Alphabet, cost: Vec<f64>) -> Result<Self> {
        if cost.len() != actions.size() {
            return Err(Error::Structural(format!(
                "cost vector has {} entries for {} actions",
                cost.len(),
                actions.size()
            )));
        }
        if let Some((i, c)) = cost.iter().enumerate().find(|(_, c)| !c.is_finite() || **c < 0.0) {
            return Err(Error::InvalidDistribution {
                name: "cost".into(),
                row: None,
                reason: format!("entry {i} = {c} is not a finite nonnegative cost"),
            });
        }
        Ok(Self { actions, cost })
    }

    pub fn actions(&self) -> &Alphabet {
        &self.actions
    }

    pub fn values(&self) -> &[f64] {
        &self.cost
    }

    pub fn of(&self, a: usize) -> f64 {
        self.cost[a]
    }

    /// `Σ_a P(a) Γ(a)`.
    pub fn expectation(&self, pa: &[f64]) -> f64 {
        pa.iter().zip(&self.cost).map(|(p, c)| p * c).sum()
    }

    pub fn min_cost(&self) -> f64 {
        self.cost.iter().copied().fold(f64::INFINITY, f64::min)
    }
}
