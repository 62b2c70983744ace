use crate::dataset::{IndicatorMatrix, Orientation};

use super::McdaError;

/// Column-wise min-max normalization after orientation alignment: cost
/// columns are flipped to `max - x` first so larger is always better.
/// Constant columns become all zeros. Result is column-major.
pub fn normalize_min_max(x: &IndicatorMatrix) -> Vec<Vec<f64>> {
    (0..x.n_cols())
        .map(|j| {
            let col = x.column(j);
            let max = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let aligned: Vec<f64> = match x.criteria()[j].orientation {
                Orientation::Benefit => col,
                Orientation::Cost => col.iter().map(|v| max - v).collect(),
            };
            let lo = aligned.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = aligned.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let range = hi - lo;
            if range > 0.0 {
                aligned
                    .iter()
                    .map(|v| ((v - lo) / range).clamp(0.0, 1.0))
                    .collect()
            } else {
                vec![0.0; aligned.len()]
            }
        })
        .collect()
}

/// Entropy weight of every criterion; non-negative and summing to 1.
///
/// With `p_ij = x_ij / sum_i x_ij` over the normalized columns,
/// `e_j = -(1 / ln n) sum_i p_ij ln p_ij` and the weight is proportional to
/// `1 - e_j`. An all-zero column counts as uniform (`e_j = 1`). When no
/// criterion carries information the weights are uniform.
pub fn entropy_weights(x: &IndicatorMatrix) -> Result<Vec<f64>, McdaError> {
    if x.n_rows() == 0 || x.n_cols() == 0 {
        return Err(McdaError::EmptyMatrix);
    }
    let n = x.n_rows();
    if n < 2 {
        return Err(McdaError::TooFewRows { needed: 2, got: n });
    }
    let ln_n = (n as f64).ln();
    let divergence: Vec<f64> = normalize_min_max(x)
        .iter()
        .map(|col| {
            let total: f64 = col.iter().sum();
            if !(total > 0.0) {
                return 0.0;
            }
            let h: f64 = col
                .iter()
                .map(|v| v / total)
                .filter(|&p| p > 0.0)
                .map(|p| p * p.ln())
                .sum();
            (1.0 + h / ln_n).max(0.0)
        })
        .collect();
    let sum: f64 = divergence.iter().sum();
    if !(sum > 0.0) {
        let k = divergence.len() as f64;
        return Ok(vec![1.0 / k; divergence.len()]);
    }
    Ok(divergence.iter().map(|d| d / sum).collect())
}
