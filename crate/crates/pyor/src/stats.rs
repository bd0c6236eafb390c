//! Partition statistics of a sample.
//!
//! Everything downstream (posterior draws, the EPPF likelihood, the bias
//! term) is a function of the sample only through the distinct values in
//! order of appearance, their multiplicities `N_{n,j}`, and the occupancy
//! counts `Z_{n,l} = #{j : N_{n,j} ≥ l}`.

use std::collections::HashMap;

use crate::functional::Functional;
use crate::{Error, Result};

/// A raw sample. Values must be finite and there must be at least one.
#[derive(Clone, Debug)]
pub struct Dataset {
    values: Vec<f64>,
}

impl Dataset {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("dataset must be nonempty".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("dataset value {bad} is not finite")));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // enforced nonempty at construction
    }

    /// `ℙ_n f = n⁻¹ Σ f(X_i)`.
    pub fn empirical(&self, f: &Functional) -> f64 {
        let sum: f64 = self.values.iter().map(|&x| f.evaluate(x)).sum();
        sum / self.values.len() as f64
    }

    /// Parses a one-column CSV; a non-numeric first line is taken as a header.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let field = line.split(',').next().unwrap_or("").trim();
            if field.is_empty() {
                continue;
            }
            match field.parse::<f64>() {
                Ok(v) => values.push(v),
                Err(_) if i == 0 => {} // header
                Err(e) => return Err(Error::Csv(format!("line {}: {e}", i + 1))),
            }
        }
        Self::new(values)
    }

    pub fn from_csv_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Csv(format!("{}: {e}", path.display())))?;
        Self::from_csv_str(&text)
    }
}

/// Sufficient statistics of the induced partition.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionSummary {
    n: usize,
    /// Distinct values in order of first appearance.
    distinct: Vec<f64>,
    /// Multiplicities aligned with `distinct`.
    mult: Vec<usize>,
    /// `occupancy[l-1] = Z_{n,l}` for `l = 1..=max multiplicity`.
    occupancy: Vec<usize>,
}

/// Reduces a sample to its partition summary. Values are compared by exact
/// bit equality: the laws in scope produce either integer-valued atoms or
/// almost-surely-distinct continuous draws, so no tolerance matching is
/// needed.
pub fn summarize(data: &Dataset) -> PartitionSummary {
    let mut index: HashMap<u64, usize> = HashMap::with_capacity(data.len() / 2);
    let mut distinct = Vec::new();
    let mut mult: Vec<usize> = Vec::new();
    for &x in data.values() {
        match index.entry(x.to_bits()) {
            std::collections::hash_map::Entry::Occupied(e) => mult[*e.get()] += 1,
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(distinct.len());
                distinct.push(x);
                mult.push(1);
            }
        }
    }
    let max_mult = mult.iter().copied().max().unwrap_or(0);
    let mut occupancy = vec![0usize; max_mult];
    for &m in &mult {
        occupancy[m - 1] += 1; // count of multiplicity exactly m, suffix-summed below
    }
    for l in (0..max_mult.saturating_sub(1)).rev() {
        occupancy[l] += occupancy[l + 1];
    }
    PartitionSummary { n: data.len(), distinct, mult, occupancy }
}

impl PartitionSummary {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `K_n`, the number of distinct values.
    pub fn k(&self) -> usize {
        self.distinct.len()
    }

    pub fn distinct(&self) -> &[f64] {
        &self.distinct
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.mult
    }

    /// `Z_{n,l}` (zero beyond the maximal multiplicity).
    pub fn z(&self, l: usize) -> usize {
        if l == 0 || l > self.occupancy.len() {
            0
        } else {
            self.occupancy[l - 1]
        }
    }

    pub fn max_multiplicity(&self) -> usize {
        self.occupancy.len()
    }

    /// `P̃_n f = K_n⁻¹ Σ_j f(X̃_j)`, the uniform average over distinct values.
    pub fn ptilde(&self, f: &Functional) -> f64 {
        let sum: f64 = self.distinct.iter().map(|&x| f.evaluate(x)).sum();
        sum / self.k() as f64
    }
}
