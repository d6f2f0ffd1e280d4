use super::weights::stable_sum;
use super::{BoostError, Result, WeightVector};

fn check_lengths(preds: &[u8], labels: &[u8], weights: &WeightVector) -> Result<()> {
    if preds.len() != labels.len() || labels.len() != weights.len() {
        return Err(BoostError::Dimension(format!(
            "{} predictions, {} labels, {} weights",
            preds.len(),
            labels.len(),
            weights.len()
        )));
    }
    Ok(())
}

/// Total weight on rows where `preds` and `labels` disagree.
pub fn weighted_error(preds: &[u8], labels: &[u8], weights: &WeightVector) -> Result<f64> {
    check_lengths(preds, labels, weights)?;
    let wrong: Vec<f64> = preds
        .iter()
        .zip(labels)
        .zip(weights.as_slice())
        .filter(|((p, y), _)| p != y)
        .map(|(_, &w)| w)
        .collect();
    Ok(stable_sum(&wrong).clamp(0.0, 1.0))
}

/// `0.5 * ln((1 - eps) / eps)` with `eps` clamped into `[eps_min, 1 - eps_min]`.
pub fn learner_weight(epsilon: f64, epsilon_min: f64) -> f64 {
    let e = epsilon.clamp(epsilon_min, 1.0 - epsilon_min);
    0.5 * ((1.0 - e) / e).ln()
}

/// Multiplies each weight by `exp(-alpha * y * h)` over `{-1, +1}` labels and renormalizes.
pub fn update_weights(
    weights: &WeightVector,
    preds: &[u8],
    labels: &[u8],
    alpha: f64,
) -> Result<WeightVector> {
    check_lengths(preds, labels, weights)?;
    if !alpha.is_finite() {
        return Err(BoostError::InvalidWeights(format!("alpha {alpha}")));
    }
    let raw = weights
        .as_slice()
        .iter()
        .zip(preds.iter().zip(labels))
        .map(|(&w, (p, y))| {
            if p == y {
                w * (-alpha).exp()
            } else {
                w * alpha.exp()
            }
        })
        .collect();
    WeightVector::from_raw(raw)
}
