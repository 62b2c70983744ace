use crate::dataset::{IndicatorMatrix, Orientation};

use super::{rank_scores, CityScore, McdaError, Method};

const WEIGHT_SUM_TOL: f64 = 1e-9;

fn check_weights(x: &IndicatorMatrix, w: &[f64]) -> Result<(), McdaError> {
    if w.len() != x.n_cols() {
        return Err(McdaError::WeightMismatch(format!(
            "{} weights for {} criteria",
            w.len(),
            x.n_cols()
        )));
    }
    if let Some(bad) = w.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(McdaError::WeightMismatch(format!(
            "weight {bad} is negative or not finite"
        )));
    }
    let sum: f64 = w.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(McdaError::WeightMismatch(format!(
            "weights sum to {sum}, expected 1"
        )));
    }
    Ok(())
}

/// Relative closeness `D- / (D+ + D-)` of every row, in row order.
///
/// Columns are vector-normalized (an all-zero column stays zero), scaled by
/// the weights, and compared with the ideal and anti-ideal points chosen per
/// criterion orientation. A row at distance 0 from both scores 0.5.
pub fn topsis_closeness(x: &IndicatorMatrix, w: &[f64]) -> Result<Vec<f64>, McdaError> {
    if x.n_rows() == 0 || x.n_cols() == 0 {
        return Err(McdaError::EmptyMatrix);
    }
    check_weights(x, w)?;
    let (n, p) = (x.n_rows(), x.n_cols());

    let norms: Vec<f64> = (0..p)
        .map(|j| x.rows().iter().map(|r| r[j] * r[j]).sum::<f64>().sqrt())
        .collect();
    let u: Vec<Vec<f64>> = x
        .rows()
        .iter()
        .map(|r| {
            (0..p)
                .map(|j| {
                    if norms[j] > 0.0 {
                        w[j] * (r[j] / norms[j])
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();

    let mut ideal = vec![0.0; p];
    let mut anti = vec![0.0; p];
    for j in 0..p {
        let max = u.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max);
        let min = u.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min);
        (ideal[j], anti[j]) = match x.criteria()[j].orientation {
            Orientation::Benefit => (max, min),
            Orientation::Cost => (min, max),
        };
    }

    let dist = |row: &[f64], target: &[f64]| -> f64 {
        row.iter()
            .zip(target)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    };
    Ok((0..n)
        .map(|i| {
            let d_plus = dist(&u[i], &ideal);
            let d_minus = dist(&u[i], &anti);
            let denom = d_plus + d_minus;
            if denom > 0.0 {
                (d_minus / denom).clamp(0.0, 1.0)
            } else {
                0.5
            }
        })
        .collect())
}

/// TOPSIS closeness ranked descending, city id ascending on ties.
pub fn topsis_rank(x: &IndicatorMatrix, w: &[f64]) -> Result<Vec<CityScore>, McdaError> {
    let c = topsis_closeness(x, w)?;
    Ok(rank_scores(x.city_ids(), &c, Method::EntropyTopsis))
}
