use crate::dataset::IndicatorMatrix;

use super::linalg::{invert, norm_1};
use super::McdaError;

/// Correlation matrices whose 1-norm reciprocal condition number falls below
/// this are treated as singular.
pub const SINGULAR_RCOND: f64 = 1e-12;

/// Pearson correlations between criteria. Symmetric, unit diagonal, entries
/// in [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    names: Vec<String>,
    r: Vec<Vec<f64>>,
}

impl CorrelationMatrix {
    /// Wraps an explicit matrix after checking the correlation invariants.
    pub fn new(names: Vec<String>, r: Vec<Vec<f64>>) -> Result<Self, McdaError> {
        let n = names.len();
        if r.len() != n || r.iter().any(|row| row.len() != n) {
            return Err(McdaError::InvalidCorrelation(format!(
                "expected a {n}x{n} matrix"
            )));
        }
        for i in 0..n {
            if r[i][i] != 1.0 {
                return Err(McdaError::InvalidCorrelation(format!(
                    "diagonal entry {i} is {}",
                    r[i][i]
                )));
            }
            for j in 0..n {
                if r[i][j] != r[j][i] {
                    return Err(McdaError::InvalidCorrelation(format!(
                        "not symmetric at ({i}, {j})"
                    )));
                }
                if !(-1.0..=1.0).contains(&r[i][j]) {
                    return Err(McdaError::InvalidCorrelation(format!(
                        "entry ({i}, {j}) = {} outside [-1, 1]",
                        r[i][j]
                    )));
                }
            }
        }
        Ok(Self { names, r })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.r
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.r[i][j]
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// Reorders rows and columns together.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            names: order.iter().map(|&i| self.names[i].clone()).collect(),
            r: order
                .iter()
                .map(|&i| order.iter().map(|&j| self.r[i][j]).collect())
                .collect(),
        }
    }
}

/// Column means and centred sums of squares, failing on constant columns.
pub(crate) fn column_moments(x: &IndicatorMatrix) -> Result<(Vec<f64>, Vec<f64>), McdaError> {
    let n = x.n_rows() as f64;
    let mut means = Vec::with_capacity(x.n_cols());
    let mut ss = Vec::with_capacity(x.n_cols());
    for (j, c) in x.criteria().iter().enumerate() {
        let col = x.column(j);
        let mean = col.iter().sum::<f64>() / n;
        let s: f64 = col.iter().map(|v| (v - mean) * (v - mean)).sum();
        if !(s > 0.0) {
            return Err(McdaError::ConstantColumn(c.name.clone()));
        }
        means.push(mean);
        ss.push(s);
    }
    Ok((means, ss))
}

pub fn correlation_matrix(x: &IndicatorMatrix) -> Result<CorrelationMatrix, McdaError> {
    if x.n_rows() == 0 || x.n_cols() == 0 {
        return Err(McdaError::EmptyMatrix);
    }
    if x.n_rows() < 3 {
        return Err(McdaError::TooFewRows {
            needed: 3,
            got: x.n_rows(),
        });
    }
    let (means, ss) = column_moments(x)?;
    let p = x.n_cols();
    let mut r = vec![vec![0.0; p]; p];
    for i in 0..p {
        r[i][i] = 1.0;
        for j in i + 1..p {
            let cov: f64 = x
                .rows()
                .iter()
                .map(|row| (row[i] - means[i]) * (row[j] - means[j]))
                .sum();
            let v = (cov / (ss[i] * ss[j]).sqrt()).clamp(-1.0, 1.0);
            r[i][j] = v;
            r[j][i] = v;
        }
    }
    let names = x.criteria().iter().map(|c| c.name.clone()).collect();
    Ok(CorrelationMatrix { names, r })
}

/// Overall Kaiser-Meyer-Olkin measure of sampling adequacy.
///
/// Partial correlations come from the anti-image of `Q = R^-1`:
/// `a_ij^2 = q_ij^2 / (q_ii q_jj)`. A matrix with no off-diagonal
/// correlation scores 0.
pub fn kmo_statistic(r: &CorrelationMatrix) -> Result<f64, McdaError> {
    let p = r.dim();
    let m = r.values();
    let off_pairs =
        || (0..p).flat_map(move |i| (0..p).filter(move |&j| j != i).map(move |j| (i, j)));

    let sum_r2: f64 = off_pairs().map(|(i, j)| m[i][j] * m[i][j]).sum();
    if sum_r2 == 0.0 {
        return Ok(0.0);
    }
    let q = invert(m).ok_or(McdaError::SingularMatrix { rcond: 0.0 })?;
    let rcond = 1.0 / (norm_1(m) * norm_1(&q));
    if !(rcond >= SINGULAR_RCOND) {
        return Err(McdaError::SingularMatrix { rcond });
    }
    let sum_a2: f64 = off_pairs()
        .map(|(i, j)| q[i][j] * q[i][j] / (q[i][i] * q[j][j]))
        .sum();
    Ok((sum_r2 / (sum_r2 + sum_a2)).clamp(0.0, 1.0))
}
