use crate::dataset::FeatureMatrix;

/// Additive per-node statistics (class masses, gradient sums, ...).
pub(crate) trait NodeStats: Copy + Default {
    fn add(&mut self, other: &Self);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Candidate {
    pub feature: usize,
    pub threshold: f64,
    pub cost: f64,
    pub n_left: usize,
}

/// Two costs closer than this (relative) are treated as tied, and the
/// earlier candidate in (feature, threshold) order is kept.
pub(crate) const TIE_TOLERANCE: f64 = 1e-12;

pub(crate) fn improves(cost: f64, best: f64) -> bool {
    cost < best - TIE_TOLERANCE * best.abs().max(1.0)
}

/// Threshold halfway between two consecutive distinct values.
pub(crate) fn midpoint(lo: f64, hi: f64) -> f64 {
    let t = lo + (hi - lo) / 2.0;
    if t > lo && t < hi {
        t
    } else {
        lo
    }
}

/// Exhaustive search over `features` (ascending) and every midpoint between
/// consecutive distinct values at the node. `cost(left, right)` returns the
/// quantity to minimize, or `None` when a side violates a mass constraint.
pub(crate) fn best_split<S, F, C>(
    data: &FeatureMatrix,
    idx: &[usize],
    features: &[usize],
    stat: F,
    min_samples_leaf: usize,
    cost: C,
) -> Option<Candidate>
where
    S: NodeStats,
    F: Fn(usize) -> S,
    C: Fn(&S, &S) -> Option<f64>,
{
    let n = idx.len();
    if n < 2 * min_samples_leaf || n < 2 {
        return None;
    }
    let mut best: Option<Candidate> = None;
    let mut order = idx.to_vec();
    let mut suffix = vec![S::default(); n + 1];
    for &j in features {
        order.sort_by(|&a, &b| data.get(a, j).total_cmp(&data.get(b, j)));
        for k in (0..n).rev() {
            let mut s = suffix[k + 1];
            s.add(&stat(order[k]));
            suffix[k] = s;
        }
        let mut left = S::default();
        for k in 0..n - 1 {
            left.add(&stat(order[k]));
            let (lo, hi) = (data.get(order[k], j), data.get(order[k + 1], j));
            if lo == hi {
                continue;
            }
            let n_left = k + 1;
            if n_left < min_samples_leaf || n - n_left < min_samples_leaf {
                continue;
            }
            let Some(c) = cost(&left, &suffix[k + 1]) else {
                continue;
            };
            if best.is_none_or(|b| improves(c, b.cost)) {
                best = Some(Candidate {
                    feature: j,
                    threshold: midpoint(lo, hi),
                    cost: c,
                    n_left,
                });
            }
        }
    }
    best
}

/// Splits `idx` into (left, right) by `x[feature] <= threshold`, preserving order.
pub(crate) fn partition(
    data: &FeatureMatrix,
    idx: &[usize],
    feature: usize,
    threshold: f64,
) -> (Vec<usize>, Vec<usize>) {
    idx.iter()
        .partition(|&&i| data.get(i, feature) <= threshold)
}
