//! Optimization-status features: the meta-policy's view of a running
//! low-level optimizer.
//!
//! All nine features are dimension-free, so one policy transfers across
//! problem dimensions and suites.

use crate::optimizers::OptimizerState;
use crate::problems::ProblemInstance;

/// Number of state features (the policy's input width).
pub const FEATURE_COUNT: usize = 9;

/// Division guard used throughout feature extraction.
pub const FEATURE_EPS: f64 = 1e-12;

/// The 9-dimensional state vector. Order:
/// 1. progress `t/T`
/// 2. current log-gap rescaled by the initial log-gap
/// 3. population diversity (mean pairwise distance / box diagonal)
/// 4. stagnation fraction (generations since last improvement / T)
/// 5. mean(Y) / (|y0| + ε)
/// 6. std(Y) / (|y0| + ε)
/// 7. (best_y − min current Y) / (y0 + ε)
/// 8. budget fraction used
/// 9. constant 1 bias
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateFeatures(pub [f64; FEATURE_COUNT]);

impl StateFeatures {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Extract features at decision step `t` of `t_max` (post-init generations).
/// Pure function of its inputs; every entry is finite.
pub fn extract_features(
    state: &OptimizerState,
    problem: &ProblemInstance,
    t: usize,
    t_max: usize,
) -> StateFeatures {
    let t_denom = t_max.max(1) as f64;
    let progress = (t as f64 / t_denom).min(1.0);

    let f_opt = problem.f_opt();
    let gap = (state.best_y - f_opt).max(0.0) + FEATURE_EPS;
    let gap0 = (state.y0 - f_opt).max(0.0) + FEATURE_EPS;
    let log_gap = gap.log10() / gap0.log10().abs().max(1.0);

    let diversity = mean_pairwise_distance(&state.x) / problem.box_diagonal().max(FEATURE_EPS);

    let stagnation =
        ((state.generation - state.last_improvement_gen) as f64 / t_denom).clamp(0.0, 1.0);

    let n = state.y.len() as f64;
    let mean_y = state.y.iter().sum::<f64>() / n;
    let var_y = state.y.iter().map(|v| (v - mean_y).powi(2)).sum::<f64>() / n;
    let y0_scale = state.y0.abs() + FEATURE_EPS;
    let mean_feat = mean_y / y0_scale;
    let std_feat = var_y.sqrt() / y0_scale;

    let best_vs_current = (state.best_y - state.current_min()) / (state.y0 + FEATURE_EPS);

    let budget_frac = problem.fes_used() as f64 / problem.max_fes() as f64;

    let raw = [
        progress,
        log_gap,
        diversity,
        stagnation,
        mean_feat,
        std_feat,
        best_vs_current,
        budget_frac,
        1.0,
    ];
    // Finiteness is an invariant of this type; clamp rather than propagate
    // pathological magnitudes into the policy network.
    StateFeatures(raw.map(|v| {
        if v.is_finite() {
            v.clamp(-1e6, 1e6)
        } else {
            0.0
        }
    }))
}

/// Mean Euclidean distance over all unordered population pairs (the raw
/// diversity measure before normalizing by the box diagonal).
pub fn mean_pairwise_distance(x: &[Vec<f64>]) -> f64 {
    let n = x.len();
    if n < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let d2: f64 = x[i]
                .iter()
                .zip(&x[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            total += d2.sqrt();
        }
    }
    total / (n * (n - 1) / 2) as f64
}
