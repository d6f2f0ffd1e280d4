use super::{sigmoid, LstmError, LstmParams, Result, SequenceLayout};

/// Activations of one time step.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StepCache {
    pub f: Vec<f64>,
    pub i: Vec<f64>,
    /// Candidate cell value (tanh branch).
    pub g: Vec<f64>,
    pub o: Vec<f64>,
    pub c: Vec<f64>,
    pub h: Vec<f64>,
}

impl StepCache {
    fn with_hidden(h: usize) -> Self {
        Self {
            f: vec![0.0; h],
            i: vec![0.0; h],
            g: vec![0.0; h],
            o: vec![0.0; h],
            c: vec![0.0; h],
            h: vec![0.0; h],
        }
    }
}

#[inline]
fn gate_row(w: &[f64], b: f64, z: &[f64]) -> f64 {
    b + w.iter().zip(z).map(|(a, x)| a * x).sum::<f64>()
}

/// Writes one step into `out` given the concatenated input `z = [h_prev, x_t]`.
pub(crate) fn step_into(p: &LstmParams, z: &[f64], c_prev: &[f64], out: &mut StepCache) {
    let s = p.stride();
    for r in 0..p.hidden {
        let row = r * s..(r + 1) * s;
        let f = sigmoid(gate_row(&p.w_f[row.clone()], p.b_f[r], z));
        let i = sigmoid(gate_row(&p.w_i[row.clone()], p.b_i[r], z));
        let g = gate_row(&p.w_c[row.clone()], p.b_c[r], z).tanh();
        let o = sigmoid(gate_row(&p.w_o[row], p.b_o[r], z));
        let c = f * c_prev[r] + i * g;
        out.f[r] = f;
        out.i[r] = i;
        out.g[r] = g;
        out.o[r] = o;
        out.c[r] = c;
        out.h[r] = o * c.tanh();
    }
}

/// One LSTM step. Returns `(h_t, c_t, cache)`.
pub fn cell_step(
    params: &LstmParams,
    x_t: &[f64],
    h_prev: &[f64],
    c_prev: &[f64],
) -> Result<(Vec<f64>, Vec<f64>, StepCache)> {
    let h = params.hidden;
    if x_t.len() != params.input_dim || h_prev.len() != h || c_prev.len() != h {
        return Err(LstmError::Dimension(format!(
            "x {} / h {} / c {} against hidden {h}, input {}",
            x_t.len(),
            h_prev.len(),
            c_prev.len(),
            params.input_dim
        )));
    }
    if x_t
        .iter()
        .chain(h_prev)
        .chain(c_prev)
        .any(|v| !v.is_finite())
    {
        return Err(LstmError::NonFinite("cell input".into()));
    }
    let z: Vec<f64> = h_prev.iter().chain(x_t).copied().collect();
    let mut cache = StepCache::with_hidden(h);
    step_into(params, &z, c_prev, &mut cache);
    if cache.c.iter().chain(&cache.h).any(|v| !v.is_finite()) {
        return Err(LstmError::NonFinite("cell output".into()));
    }
    Ok((cache.h.clone(), cache.c.clone(), cache))
}

/// Runs the sequence and returns the per-step caches plus the output probability.
pub(crate) fn forward_cached(
    params: &LstmParams,
    sample: &[f64],
    layout: SequenceLayout,
    caches: &mut Vec<StepCache>,
) -> f64 {
    let (h, d) = (params.hidden, params.input_dim);
    caches.resize_with(layout.steps, || StepCache::with_hidden(h));
    let mut z = vec![0.0; h + d];
    let zeros = vec![0.0; h];
    for t in 0..layout.steps {
        if t > 0 {
            z[..h].copy_from_slice(&caches[t - 1].h);
        }
        z[h..].copy_from_slice(&sample[t * d..(t + 1) * d]);
        let (done, rest) = caches.split_at_mut(t);
        let c_prev = if t == 0 { &zeros } else { &done[t - 1].c };
        step_into(params, &z, c_prev, &mut rest[0]);
    }
    let h_last: &[f64] = caches.last().map_or(&zeros, |c| &c.h);
    let logit = params.b_out
        + params
            .w_out
            .iter()
            .zip(h_last)
            .map(|(a, b)| a * b)
            .sum::<f64>();
    sigmoid(logit)
}

pub(crate) fn check_layout(
    params: &LstmParams,
    width: usize,
    layout: SequenceLayout,
) -> Result<()> {
    if layout.input_dim != params.input_dim || layout.width() != width {
        return Err(LstmError::Dimension(format!(
            "layout {}x{} vs sample width {width}, params input {}",
            layout.steps, layout.input_dim, params.input_dim
        )));
    }
    Ok(())
}

/// Probability of class 1 for one sample, starting from `h_0 = c_0 = 0`.
pub fn forward(params: &LstmParams, sample: &[f64], layout: SequenceLayout) -> Result<f64> {
    check_layout(params, sample.len(), layout)?;
    let mut caches = Vec::new();
    let p = forward_cached(params, sample, layout, &mut caches);
    if !p.is_finite() {
        return Err(LstmError::NonFinite("forward output".into()));
    }
    Ok(p)
}
