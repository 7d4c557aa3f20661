use crate::corpus::EntityId;
use crate::error::{Error, Result};
use crate::pools::PoolState;

use super::FeatureVector;

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifierConfig {
    /// L2 penalty on the weights (biases are not penalized).
    pub l2: f64,
    /// Full-batch gradient ascent iterations.
    pub iterations: usize,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            l2: 1.0,
            iterations: 200,
        }
    }
}

/// Multinomial logistic regression over standardized features.
#[derive(Clone, Debug, PartialEq)]
pub struct PromotionModel {
    n_classes: usize,
    n_features: usize,
    weights: Vec<f64>,
    bias: Vec<f64>,
    mean: Vec<f64>,
    scale: Vec<f64>,
}

fn softmax_in_place(z: &mut [f64]) {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in z.iter_mut() {
        *v = (*v - max).exp();
        sum += *v;
    }
    z.iter_mut().for_each(|v| *v /= sum);
}

impl PromotionModel {
    /// Fits by gradient ascent on
    /// `(1/n) [Σ_i ln p(y_i | x_i) − (l2/2) ‖W‖²]`, starting from zero
    /// weights. The step size is the inverse of a bound on the curvature, so
    /// every iteration improves the objective.
    pub fn fit(x: &[Vec<f64>], y: &[usize], n_classes: usize, cfg: &ClassifierConfig) -> Result<Self> {
        if n_classes < 2 {
            return Err(Error::TooFewCategories(n_classes));
        }
        if x.is_empty() || x.len() != y.len() {
            return Err(Error::Config("classifier needs one label per example".into()));
        }
        let n = x.len();
        let d = x[0].len();
        if x.iter().any(|r| r.len() != d) {
            return Err(Error::Config("feature vectors differ in length".into()));
        }
        if let Some(&bad) = y.iter().find(|&&c| c >= n_classes) {
            return Err(Error::Config(format!("label {bad} out of range")));
        }

        let mut mean = vec![0.0; d];
        for r in x {
            mean.iter_mut().zip(r).for_each(|(m, v)| *m += v / n as f64);
        }
        let mut scale = vec![0.0; d];
        for r in x {
            for j in 0..d {
                scale[j] += (r[j] - mean[j]).powi(2) / n as f64;
            }
        }
        for s in &mut scale {
            *s = if *s > 1e-24 { s.sqrt() } else { 1.0 };
        }
        let xs: Vec<Vec<f64>> = x
            .iter()
            .map(|r| (0..d).map(|j| (r[j] - mean[j]) / scale[j]).collect())
            .collect();

        let mean_sq = xs.iter().map(|r| r.iter().map(|v| v * v).sum::<f64>() + 1.0).sum::<f64>() / n as f64;
        let step = 1.0 / (0.5 * mean_sq + cfg.l2 / n as f64);

        let mut model = Self {
            n_classes,
            n_features: d,
            weights: vec![0.0; n_classes * d],
            bias: vec![0.0; n_classes],
            mean,
            scale,
        };
        let mut gw = vec![0.0; n_classes * d];
        let mut gb = vec![0.0; n_classes];
        let mut p = vec![0.0; n_classes];
        for _ in 0..cfg.iterations {
            gw.iter_mut().for_each(|g| *g = 0.0);
            gb.iter_mut().for_each(|g| *g = 0.0);
            for (r, &label) in xs.iter().zip(y) {
                model.scores_standardized(r, &mut p);
                softmax_in_place(&mut p);
                for k in 0..n_classes {
                    let residual = f64::from(u8::from(k == label)) - p[k];
                    gb[k] += residual;
                    for (g, v) in gw[k * d..(k + 1) * d].iter_mut().zip(r) {
                        *g += residual * v;
                    }
                }
            }
            for (w, g) in model.weights.iter_mut().zip(&gw) {
                *w += step * (g - cfg.l2 * *w) / n as f64;
            }
            for (b, g) in model.bias.iter_mut().zip(&gb) {
                *b += step * g / n as f64;
            }
        }
        Ok(model)
    }

    fn scores_standardized(&self, xs: &[f64], out: &mut [f64]) {
        let d = self.n_features;
        for (k, o) in out.iter_mut().enumerate() {
            *o = self.bias[k]
                + self.weights[k * d..(k + 1) * d]
                    .iter()
                    .zip(xs)
                    .map(|(w, v)| w * v)
                    .sum::<f64>();
        }
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    /// Class distribution for a raw (unstandardized) feature vector.
    pub fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        let xs: Vec<f64> = x
            .iter()
            .zip(self.mean.iter().zip(&self.scale))
            .map(|(v, (m, s))| (v - m) / s)
            .collect();
        let mut p = vec![0.0; self.n_classes];
        self.scores_standardized(&xs, &mut p);
        softmax_in_place(&mut p);
        p
    }

    /// Σ ln p(y_i | x_i).
    pub fn log_likelihood(&self, x: &[Vec<f64>], y: &[usize]) -> f64 {
        x.iter()
            .zip(y)
            .map(|(r, &label)| self.predict_proba(r)[label].max(f64::MIN_POSITIVE).ln())
            .sum()
    }
}

/// Fits the promotion classifier on the pooled entities, labelled by their
/// pool. `features` must hold a vector for every pooled entity to train on.
pub fn train_promotion_classifier(
    pools: &PoolState,
    features: &[(EntityId, FeatureVector)],
    cfg: &ClassifierConfig,
) -> Result<PromotionModel> {
    if pools.n_categories() < 2 {
        return Err(Error::TooFewCategories(pools.n_categories()));
    }
    if let Some(c) = (0..pools.n_categories()).find(|&c| pools.entities(c).is_empty()) {
        return Err(Error::EmptyPool(pools.categories()[c].clone()));
    }
    let mut x = Vec::with_capacity(features.len());
    let mut y = Vec::with_capacity(features.len());
    for (e, fv) in features {
        let c = pools
            .entity_owner(*e)
            .ok_or_else(|| Error::Config(format!("training entity {e} is not pooled")))?;
        x.push(fv.0.clone());
        y.push(c);
    }
    PromotionModel::fit(&x, &y, pools.n_categories(), cfg)
}
