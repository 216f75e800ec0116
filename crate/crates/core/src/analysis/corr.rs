//! Rank correlations between representations and their corpus residuals.

use std::collections::BTreeMap;

use crate::analysis::rank::RankTable;
use crate::error::{Error, Result};
use crate::model::CharacterId;
use crate::repr::descriptor::ReprDescriptor;
use crate::table::Table;

pub const CORRELATION_COLUMNS: [&str; 3] = ["row", "column", "value"];

/// Pearson correlation of two equally long samples.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    debug_assert_eq!(x.len(), y.len());
    let n = x.len();
    if n < 2 {
        return Err(Error::TooFewCharacters(n));
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman correlation: Pearson correlation of the average ranks.
pub fn spearman(a: &RankTable, b: &RankTable) -> Result<f64> {
    let ra: BTreeMap<&CharacterId, f64> = a.entries.iter().map(|e| (&e.character, e.fractional_rank)).collect();
    let rb: BTreeMap<&CharacterId, f64> = b.entries.iter().map(|e| (&e.character, e.fractional_rank)).collect();
    let mut diff: Vec<String> = ra
        .keys()
        .filter(|c| !rb.contains_key(*c))
        .chain(rb.keys().filter(|c| !ra.contains_key(*c)))
        .map(|c| c.reference())
        .collect();
    if !diff.is_empty() {
        diff.sort();
        return Err(Error::MismatchedCharacters(diff));
    }
    let (x, y): (Vec<f64>, Vec<f64>) = ra.iter().map(|(c, r)| (*r, rb[c])).unzip();
    pearson(&x, &y)
}

/// Square matrix over representation labels. Undefined coefficients
/// (a constant ranking) are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrMatrix {
    pub labels: Vec<ReprDescriptor>,
    pub values: Vec<Vec<f64>>,
}

impl CorrMatrix {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Long format, one row per cell.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&CORRELATION_COLUMNS);
        for (i, row) in self.labels.iter().enumerate() {
            for (j, col) in self.labels.iter().enumerate() {
                t.push(vec![row.to_string(), col.to_string(), self.values[i][j].to_string()]);
            }
        }
        t
    }
}

pub fn correlation_matrix(rankings: &[RankTable]) -> Result<CorrMatrix> {
    let n = rankings.len();
    let mut values = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = match spearman(&rankings[i], &rankings[j]) {
                Ok(v) => v,
                Err(Error::ZeroVariance | Error::TooFewCharacters(_)) => f64::NAN,
                Err(e) => return Err(e),
            };
            values[i][j] = v;
            values[j][i] = v;
        }
    }
    Ok(CorrMatrix {
        labels: rankings.iter().map(|r| r.representation).collect(),
        values,
    })
}

/// Each matrix minus the elementwise corpus mean.
pub fn corpus_residuals(matrices: &[CorrMatrix]) -> Result<Vec<CorrMatrix>> {
    let first = matrices.first().ok_or(Error::EmptyCorpus)?;
    if matrices.iter().any(|m| m.labels != first.labels) {
        return Err(Error::MismatchedLabels);
    }
    let n = first.size();
    let count = matrices.len() as f64;
    let mut mean = vec![vec![0.0; n]; n];
    for m in matrices {
        for (row, values) in mean.iter_mut().zip(&m.values) {
            for (acc, v) in row.iter_mut().zip(values) {
                *acc += v;
            }
        }
    }
    mean.iter_mut().flatten().for_each(|v| *v /= count);
    Ok(matrices
        .iter()
        .map(|m| CorrMatrix {
            labels: m.labels.clone(),
            values: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { 0.0 } else { m.values[i][j] - mean[i][j] })
                        .collect()
                })
                .collect(),
        })
        .collect())
}
