use rayon::prelude::*;

use super::cell::{check_layout, forward_cached, StepCache};
use super::{LstmError, LstmParams, Result, SequenceLayout, BLOCK_NAMES};
use crate::boosting::WeightVector;
use crate::dataset::FeatureMatrix;

/// Probabilities are clamped into `[PROB_EPS, 1 - PROB_EPS]` before logs.
pub const PROB_EPS: f64 = 1e-12;

/// Rows per gradient chunk. Chunks are summed in index order, so the result
/// does not depend on the thread count.
const CHUNK: usize = 32;

fn sample_loss(p: f64, y: u8) -> f64 {
    let p = p.clamp(PROB_EPS, 1.0 - PROB_EPS);
    if y == 1 {
        -p.ln()
    } else {
        -(1.0 - p).ln()
    }
}

/// `sum_i w_i * [-y_i ln p_i - (1 - y_i) ln(1 - p_i)]`.
pub fn weighted_loss(probs: &[f64], labels: &[u8], weights: &WeightVector) -> Result<f64> {
    if probs.len() != labels.len() || labels.len() != weights.len() {
        return Err(LstmError::Dimension(format!(
            "{} probabilities, {} labels, {} weights",
            probs.len(),
            labels.len(),
            weights.len()
        )));
    }
    Ok(probs
        .iter()
        .zip(labels)
        .zip(weights.as_slice())
        .map(|((&p, &y), &w)| w * sample_loss(p, y))
        .sum())
}

/// Accumulates `weight * dloss/dparams` of one sample into `grad`; returns the weighted loss.
fn accumulate_sample(
    params: &LstmParams,
    sample: &[f64],
    label: u8,
    weight: f64,
    layout: SequenceLayout,
    caches: &mut Vec<StepCache>,
    grad: &mut LstmParams,
) -> f64 {
    let (hs, d) = (params.hidden, params.input_dim);
    let s = params.stride();
    let p = forward_cached(params, sample, layout, caches);
    let loss = weight * sample_loss(p, label);
    if weight == 0.0 {
        return loss;
    }
    let dlogit = weight * (p - label as f64);
    let zeros = vec![0.0; hs];
    let h_last: &[f64] = caches.last().map_or(&zeros, |c| &c.h);
    grad.b_out += dlogit;
    let mut dh: Vec<f64> = params.w_out.iter().map(|w| dlogit * w).collect();
    for (g, h) in grad.w_out.iter_mut().zip(h_last) {
        *g += dlogit * h;
    }

    let mut dc = vec![0.0; hs];
    let mut da = [vec![0.0; hs], vec![0.0; hs], vec![0.0; hs], vec![0.0; hs]];
    let mut z = vec![0.0; s];
    for t in (0..layout.steps).rev() {
        let cache = &caches[t];
        let (h_prev, c_prev) = if t == 0 {
            (&zeros, &zeros)
        } else {
            (&caches[t - 1].h, &caches[t - 1].c)
        };
        z[..hs].copy_from_slice(h_prev);
        z[hs..].copy_from_slice(&sample[t * d..(t + 1) * d]);

        for r in 0..hs {
            let (f, i, g, o) = (cache.f[r], cache.i[r], cache.g[r], cache.o[r]);
            let tc = cache.c[r].tanh();
            let d_o = dh[r] * tc;
            let dcr = dc[r] + dh[r] * o * (1.0 - tc * tc);
            da[0][r] = dcr * c_prev[r] * f * (1.0 - f);
            da[1][r] = dcr * g * i * (1.0 - i);
            da[2][r] = dcr * i * (1.0 - g * g);
            da[3][r] = d_o * o * (1.0 - o);
            dc[r] = dcr * f;
        }

        let mut dz = vec![0.0; s];
        let gates: [(&[f64], &mut Vec<f64>, &mut Vec<f64>); 4] = [
            (&params.w_f, &mut grad.w_f, &mut grad.b_f),
            (&params.w_i, &mut grad.w_i, &mut grad.b_i),
            (&params.w_c, &mut grad.w_c, &mut grad.b_c),
            (&params.w_o, &mut grad.w_o, &mut grad.b_o),
        ];
        for ((w, gw, gb), dag) in gates.into_iter().zip(&da) {
            for r in 0..hs {
                let a = dag[r];
                gb[r] += a;
                let row = r * s..(r + 1) * s;
                for ((gwk, wk), (zk, dzk)) in gw[row.clone()]
                    .iter_mut()
                    .zip(&w[row])
                    .zip(z.iter().zip(dz.iter_mut()))
                {
                    *gwk += a * zk;
                    *dzk += wk * a;
                }
            }
        }
        dh.copy_from_slice(&dz[..hs]);
    }
    loss
}

/// Weighted loss over `batch` and its exact gradient via backpropagation through time.
pub fn loss_and_gradient(
    params: &LstmParams,
    batch: &FeatureMatrix,
    weights: &WeightVector,
    layout: SequenceLayout,
) -> Result<(f64, LstmParams)> {
    check_layout(params, batch.n_cols(), layout)?;
    if weights.len() != batch.n_rows() {
        return Err(LstmError::Dimension(format!(
            "{} weights for {} rows",
            weights.len(),
            batch.n_rows()
        )));
    }
    let w = weights.as_slice();
    let labels = batch.labels();
    let partials: Vec<(f64, LstmParams)> = (0..batch.n_rows())
        .collect::<Vec<_>>()
        .par_chunks(CHUNK)
        .map(|rows| {
            let mut grad = LstmParams::zeros(params.hidden, params.input_dim);
            let mut caches = Vec::new();
            let mut loss = 0.0;
            for &i in rows {
                loss += accumulate_sample(
                    params,
                    batch.row(i),
                    labels[i],
                    w[i],
                    layout,
                    &mut caches,
                    &mut grad,
                );
            }
            (loss, grad)
        })
        .collect();
    let mut total = LstmParams::zeros(params.hidden, params.input_dim);
    let mut loss = 0.0;
    for (l, g) in &partials {
        loss += l;
        total.add_scaled(g, 1.0);
    }
    for (name, block) in BLOCK_NAMES.iter().zip(total.blocks()) {
        if block.iter().any(|v| !v.is_finite()) {
            return Err(LstmError::NonFiniteGradient(name));
        }
    }
    Ok((loss, total))
}

/// Gradient of [`weighted_loss`] over `batch` with respect to every parameter.
pub fn backward(
    params: &LstmParams,
    batch: &FeatureMatrix,
    weights: &WeightVector,
    layout: SequenceLayout,
) -> Result<LstmParams> {
    loss_and_gradient(params, batch, weights, layout).map(|(_, g)| g)
}
