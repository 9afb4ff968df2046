use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::Exponent;
use crate::{Error, Result};

/// A weight functional `Λ(β) = Σ λ_i β_i` with positive integer weights.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct PositiveLinearForm {
    weights: Vec<u64>,
}

impl PositiveLinearForm {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidForm("no weights given".into()));
        }
        if let Some(i) = weights.iter().position(|&w| w == 0) {
            return Err(Error::InvalidForm(format!("weight {} is zero", i + 1)));
        }
        Ok(PositiveLinearForm { weights })
    }

    /// The standard degree form `|β|`.
    pub fn degree(n: usize) -> Self {
        PositiveLinearForm {
            weights: vec![1; n],
        }
    }

    /// `Σ_{i≤k} β_i + l·Σ_{j>k} β_j`, the forms used to look for product diagrams.
    pub fn split(n: usize, k: usize, l: u64) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
        }
        Self::new((0..n).map(|i| if i < k { 1 } else { l }).collect())
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn is_degree(&self) -> bool {
        self.weights.iter().all(|&w| w == 1)
    }

    pub fn max_weight(&self) -> u64 {
        self.weights.iter().copied().max().unwrap_or(1)
    }

    pub fn weight(&self, beta: &Exponent) -> u64 {
        debug_assert_eq!(beta.len(), self.weights.len());
        beta.entries()
            .iter()
            .zip(&self.weights)
            .map(|(&b, &w)| u64::from(b) * w)
            .sum()
    }
}

impl TryFrom<Vec<u64>> for PositiveLinearForm {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<PositiveLinearForm> for Vec<u64> {
    fn from(f: PositiveLinearForm) -> Self {
        f.weights
    }
}

/// How exponents of equal weight are ordered.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieBreak {
    /// Compare `(Λ(β), β_1, …, β_n)` lexicographically.
    Forward,
    /// Compare `(Λ(β), β_n, …, β_1)` lexicographically.
    Reverse,
}

/// The total order on `N^n` induced by a positive linear form.
///
/// Smaller means "more initial": `0` is the minimum and the initial exponent
/// of a series is the minimum of its support.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct LocalOrder {
    pub form: PositiveLinearForm,
    pub tiebreak: TieBreak,
}

impl LocalOrder {
    pub fn new(form: PositiveLinearForm, tiebreak: TieBreak) -> Self {
        LocalOrder { form, tiebreak }
    }

    pub fn degree(n: usize, tiebreak: TieBreak) -> Self {
        LocalOrder::new(PositiveLinearForm::degree(n), tiebreak)
    }

    pub fn nvars(&self) -> usize {
        self.form.nvars()
    }

    pub fn weight(&self, beta: &Exponent) -> u64 {
        self.form.weight(beta)
    }

    /// Compare two exponents of the right length. Callers that cannot
    /// guarantee the lengths should use [`LocalOrder::compare_exponents`].
    pub fn cmp(&self, a: &Exponent, b: &Exponent) -> Ordering {
        self.weight(a).cmp(&self.weight(b)).then_with(|| {
            let (a, b) = (a.entries(), b.entries());
            match self.tiebreak {
                TieBreak::Forward => a.cmp(b),
                TieBreak::Reverse => a.iter().rev().cmp(b.iter().rev()),
            }
        })
    }

    pub fn compare_exponents(&self, a: &Exponent, b: &Exponent) -> Result<Ordering> {
        for e in [a, b] {
            if e.len() != self.nvars() {
                return Err(Error::DimensionMismatch {
                    expected: self.nvars(),
                    found: e.len(),
                });
            }
        }
        Ok(self.cmp(a, b))
    }
}

/// A jet order `μ` relative to a local order; jets live modulo the monomials
/// of weight `≥ μ + 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct JetContext {
    pub order: LocalOrder,
    pub mu: u64,
}

impl JetContext {
    pub fn new(order: LocalOrder, mu: u64) -> Self {
        JetContext { order, mu }
    }

    /// Whether `x^β` survives truncation.
    pub fn keeps(&self, beta: &Exponent) -> bool {
        self.order.weight(beta) <= self.mu
    }
}
