//! Per-generation reward: normalized improvement of the best-so-far value.

/// `r = (prev_best − new_best) / (y0 − f_opt)`.
///
/// With a greedy best-so-far (non-increasing) this lies in `[0, 1]` and
/// telescopes over an episode to `(y0 − final_best)/(y0 − f_opt)`. A
/// degenerate episode whose initial best already equals the optimum yields 0.
pub fn reward(prev_best: f64, new_best: f64, y0: f64, f_opt: f64) -> f64 {
    let denom = y0 - f_opt;
    if !(denom > 0.0) || !denom.is_finite() {
        return 0.0;
    }
    (prev_best - new_best) / denom
}
