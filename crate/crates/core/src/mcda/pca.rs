use crate::dataset::IndicatorMatrix;

use super::correlation::column_moments;
use super::linalg::symmetric_eigen;
use super::{check_shape, DecisionConfig, McdaError};

/// Eigenvalues down to `-EIGEN_FLOOR` are rounding noise and are clamped to 0.
pub const EIGEN_FLOOR: f64 = 1e-10;

/// Magnitudes this close to the largest count as ties when fixing signs.
const SIGN_TIE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PcaResult {
    pub city_ids: Vec<String>,
    /// Z-scored input (sample standard deviation).
    pub standardized: Vec<Vec<f64>>,
    /// Every eigenvalue of the correlation matrix, descending, clamped at 0.
    pub eigenvalues: Vec<f64>,
    /// Every unit eigenvector, in eigenvalue order, sign-normalized.
    pub loadings: Vec<Vec<f64>>,
    /// The retained prefix of `loadings`.
    pub components: Vec<Vec<f64>>,
    /// Explained ratio of each retained component.
    pub explained_ratio: Vec<f64>,
    /// `standardized` projected onto `components`; one row per city.
    pub scores: Vec<Vec<f64>>,
}

impl PcaResult {
    /// Projects the standardized data onto every loading vector.
    pub fn project_all(&self) -> Vec<Vec<f64>> {
        project(&self.standardized, &self.loadings)
    }

    /// Rebuilds the standardized data from the projections on all loadings.
    pub fn reconstruct(&self) -> Vec<Vec<f64>> {
        let p = self.loadings.len();
        self.project_all()
            .iter()
            .map(|s| {
                (0..p)
                    .map(|j| s.iter().zip(&self.loadings).map(|(sk, v)| sk * v[j]).sum())
                    .collect()
            })
            .collect()
    }
}

fn project(z: &[Vec<f64>], vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    z.iter()
        .map(|row| {
            vectors
                .iter()
                .map(|v| row.iter().zip(v).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect()
}

fn fix_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(lead) = v.iter().find(|x| x.abs() >= max - SIGN_TIE) {
        if *lead < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

pub fn pca_reduce(x: &IndicatorMatrix, cfg: &DecisionConfig) -> Result<PcaResult, McdaError> {
    check_shape(x, 2)?;
    let (n, p) = (x.n_rows(), x.n_cols());
    if n <= p {
        log::warn!("pca on {n} rows x {p} criteria: fewer observations than variables");
    }
    let (means, ss) = column_moments(x)?;
    let sd: Vec<f64> = ss.iter().map(|s| (s / (n - 1) as f64).sqrt()).collect();
    let z: Vec<Vec<f64>> = x
        .rows()
        .iter()
        .map(|row| (0..p).map(|j| (row[j] - means[j]) / sd[j]).collect())
        .collect();

    let mut r = vec![vec![0.0; p]; p];
    for i in 0..p {
        r[i][i] = 1.0;
        for j in i + 1..p {
            let v = z.iter().map(|row| row[i] * row[j]).sum::<f64>() / (n - 1) as f64;
            r[i][j] = v;
            r[j][i] = v;
        }
    }

    let eig = symmetric_eigen(&r).map_err(McdaError::EigenFailure)?;
    let mut eigenvalues = Vec::with_capacity(p);
    for &l in &eig.values {
        if l < -EIGEN_FLOOR {
            return Err(McdaError::EigenFailure(format!(
                "negative eigenvalue {l:e} of a correlation matrix"
            )));
        }
        eigenvalues.push(l.max(0.0));
    }
    let mut loadings = eig.vectors;
    loadings.iter_mut().for_each(|v| fix_sign(v));

    let trace = p as f64;
    let ratios: Vec<f64> = eigenvalues.iter().map(|l| l / trace).collect();
    let mut cumulative = 0.0;
    let mut keep = p;
    for (k, r) in ratios.iter().enumerate() {
        cumulative += r;
        if cumulative >= cfg.pca_variance_target - 1e-12 {
            keep = k + 1;
            break;
        }
    }
    let components = loadings[..keep].to_vec();
    let scores = project(&z, &components);
    Ok(PcaResult {
        city_ids: x.city_ids().to_vec(),
        standardized: z,
        eigenvalues,
        explained_ratio: ratios[..keep].to_vec(),
        components,
        loadings,
        scores,
    })
}

/// Explained-ratio-weighted sum of retained component scores, min-max
/// rescaled to [0, 1]. A constant result maps every city to 0.5.
pub fn pca_composite_score(p: &PcaResult) -> Vec<f64> {
    let raw: Vec<f64> = p
        .scores
        .iter()
        .map(|s| s.iter().zip(&p.explained_ratio).map(|(v, w)| v * w).sum())
        .collect();
    let lo = raw.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    if !(range > 1e-12 * hi.abs().max(lo.abs()).max(1.0)) {
        return vec![0.5; raw.len()];
    }
    raw.iter()
        .map(|v| ((v - lo) / range).clamp(0.0, 1.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Criterion;

    fn matrix(rows: Vec<Vec<f64>>) -> IndicatorMatrix {
        let ids = (0..rows.len()).map(|i| format!("c{i}")).collect();
        let crit = (0..rows[0].len())
            .map(|j| Criterion::benefit(format!("k{j}")))
            .collect();
        IndicatorMatrix::new(ids, crit, rows).unwrap()
    }

    #[test]
    fn single_direction_explains_everything() {
        let x = matrix(
            (0..6)
                .map(|t| vec![t as f64, 3.0 * t as f64 + 2.0])
                .collect(),
        );
        let p = pca_reduce(&x, &DecisionConfig::default()).unwrap();
        assert_eq!(p.components.len(), 1);
        assert!((p.explained_ratio[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_correlated_columns() {
        // r = 0.5 for this fixture
        let x = matrix(vec![vec![1.0, 2.0], vec![2.0, 1.0], vec![3.0, 3.0]]);
        let cfg = DecisionConfig {
            pca_variance_target: 1.0,
            ..Default::default()
        };
        let p = pca_reduce(&x, &cfg).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(p.components.len(), 2);
        for (got, want) in p.components[0].iter().zip([h, h]) {
            assert!((got - want).abs() < 1e-12);
        }
        for (got, want) in p.components[1].iter().zip([h, -h]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((p.explained_ratio[0] - 0.75).abs() < 1e-12);
        assert!((p.explained_ratio[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn constant_column_fails() {
        let x = matrix(vec![vec![1.0, 2.0], vec![2.0, 2.0], vec![3.0, 2.0]]);
        assert_eq!(
            pca_reduce(&x, &DecisionConfig::default()),
            Err(McdaError::ConstantColumn("k1".into()))
        );
    }

    fn result_with_scores(scores: Vec<Vec<f64>>, ratio: Vec<f64>) -> PcaResult {
        PcaResult {
            city_ids: (0..scores.len()).map(|i| format!("c{i}")).collect(),
            standardized: vec![],
            eigenvalues: vec![],
            loadings: vec![],
            components: vec![vec![1.0]; ratio.len()],
            explained_ratio: ratio,
            scores,
        }
    }

    #[test]
    fn composite_single_component_is_rescaled() {
        let p = result_with_scores(vec![vec![-1.0], vec![3.0], vec![1.0]], vec![0.9]);
        assert_eq!(pca_composite_score(&p), [0.0, 1.0, 0.5]);
    }

    #[test]
    fn composite_constant_is_half() {
        let p = result_with_scores(vec![vec![0.0, 0.0]; 4], vec![0.6, 0.3]);
        assert_eq!(pca_composite_score(&p), [0.5; 4]);
    }

    #[test]
    fn composite_three_cities_by_hand() {
        // raw = 0.6*s1 + 0.3*s2: (0.6*1 + 0.3*2, 0.6*-1 + 0.3*0.5, 0.6*0.5 + 0.3*-2)
        //     = (1.2, -0.45, -0.3); range 1.65
        let p = result_with_scores(
            vec![vec![1.0, 2.0], vec![-1.0, 0.5], vec![0.5, -2.0]],
            vec![0.6, 0.3],
        );
        let got = pca_composite_score(&p);
        let want = [1.0, 0.0, 0.15 / 1.65];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-12, "{got:?}");
        }
    }
}
