//! Differential evolution with an externally supplied per-generation design.
//!
//! This is the optimizer the meta-level configures: each generation takes an
//! [`AlgorithmDesign`] — scale factor `F`, crossover rate `CR`, and one of
//! three mutation strategies — and applies classic binomial-crossover DE with
//! greedy selection.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::optimizers::OptimizerState;
use crate::problems::ProblemInstance;
use crate::Result;

/// Mutation strategies selectable by the meta-level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MutationStrategy {
    Rand1Bin,
    Best1Bin,
    CurrentToBest1Bin,
}

impl MutationStrategy {
    pub const ALL: [MutationStrategy; 3] = [
        MutationStrategy::Rand1Bin,
        MutationStrategy::Best1Bin,
        MutationStrategy::CurrentToBest1Bin,
    ];

    /// Stable index used by the policy's categorical head.
    pub fn index(&self) -> usize {
        match self {
            MutationStrategy::Rand1Bin => 0,
            MutationStrategy::Best1Bin => 1,
            MutationStrategy::CurrentToBest1Bin => 2,
        }
    }

    pub fn from_index(i: usize) -> Result<MutationStrategy> {
        MutationStrategy::ALL
            .get(i)
            .copied()
            .ok_or_else(|| Error::InvalidParameter(format!("strategy index {i} out of range 0..3")))
    }

    pub fn name(&self) -> &'static str {
        match self {
            MutationStrategy::Rand1Bin => "rand/1/bin",
            MutationStrategy::Best1Bin => "best/1/bin",
            MutationStrategy::CurrentToBest1Bin => "current-to-best/1/bin",
        }
    }
}

impl std::fmt::Display for MutationStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One generation's worth of DE configuration — the meta-level action ω.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgorithmDesign {
    pub f: f64,
    pub cr: f64,
    pub strategy: MutationStrategy,
}

impl AlgorithmDesign {
    /// Construct with `F` and `CR` clamped into `[0, 1]`.
    pub fn clamped(f: f64, cr: f64, strategy: MutationStrategy) -> Self {
        AlgorithmDesign {
            f: f.clamp(0.0, 1.0),
            cr: cr.clamp(0.0, 1.0),
            strategy,
        }
    }
}

impl std::fmt::Display for AlgorithmDesign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F={:.3} CR={:.3} {}", self.f, self.cr, self.strategy)
    }
}

/// Draw `k` distinct indices from `0..n`, all different from `exclude`.
pub fn distinct_indices(
    rng: &mut ChaCha8Rng,
    n: usize,
    exclude: usize,
    k: usize,
) -> Vec<usize> {
    debug_assert!(n > k, "need n > k distinct indices plus the excluded one");
    let mut picks: Vec<usize> = Vec::with_capacity(k);
    while picks.len() < k {
        let c = rng.gen_range(0..n);
        if c != exclude && !picks.contains(&c) {
            picks.push(c);
        }
    }
    picks
}

/// The donor vector for individual `i` under the given strategy.
///
/// `picks` supplies three distinct population indices (≠ i); strategies that
/// need fewer use a prefix of it.
pub fn mutant(
    x: &[Vec<f64>],
    best: &[f64],
    i: usize,
    picks: &[usize],
    f: f64,
    strategy: MutationStrategy,
) -> Vec<f64> {
    let dim = x[0].len();
    let mut v = Vec::with_capacity(dim);
    match strategy {
        MutationStrategy::Rand1Bin => {
            let (a, b, c) = (&x[picks[0]], &x[picks[1]], &x[picks[2]]);
            for d in 0..dim {
                v.push(a[d] + f * (b[d] - c[d]));
            }
        }
        MutationStrategy::Best1Bin => {
            let (a, b) = (&x[picks[0]], &x[picks[1]]);
            for d in 0..dim {
                v.push(best[d] + f * (a[d] - b[d]));
            }
        }
        MutationStrategy::CurrentToBest1Bin => {
            let cur = &x[i];
            let (a, b) = (&x[picks[0]], &x[picks[1]]);
            for d in 0..dim {
                v.push(cur[d] + f * (best[d] - cur[d]) + f * (a[d] - b[d]));
            }
        }
    }
    v
}

/// Binomial crossover: coordinate `j_rand` always comes from the mutant, the
/// rest with probability `cr`.
pub fn crossover(
    target: &[f64],
    mutant: &[f64],
    cr: f64,
    j_rand: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    target
        .iter()
        .zip(mutant)
        .enumerate()
        .map(|(j, (t, m))| {
            if j == j_rand || rng.gen::<f64>() < cr {
                *m
            } else {
                *t
            }
        })
        .collect()
}

/// Advance one DE generation under `design`. Consumes exactly `n` evaluations;
/// fails *before* drawing any randomness if the budget cannot cover a full
/// generation.
pub fn de_step(
    state: &mut OptimizerState,
    design: &AlgorithmDesign,
    problem: &mut ProblemInstance,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    let n = state.pop_size();
    let remaining = problem.remaining_budget();
    if remaining < n {
        return Err(Error::BudgetExhausted {
            requested: n,
            remaining,
        });
    }
    let dim = problem.dim();
    let mut trials = Vec::with_capacity(n);
    for i in 0..n {
        let picks = distinct_indices(rng, n, i, 3);
        let donor = mutant(&state.x, &state.best_x, i, &picks, design.f, design.strategy);
        let j_rand = rng.gen_range(0..dim);
        let trial = crossover(&state.x[i], &donor, design.cr, j_rand, rng);
        trials.push(problem.clipped(&trial));
    }
    let trial_y = problem.evaluate(&trials)?;

    let mut new_x = Vec::with_capacity(n);
    let mut new_y = Vec::with_capacity(n);
    for i in 0..n {
        if trial_y[i] <= state.y[i] {
            new_x.push(trials[i].clone());
            new_y.push(trial_y[i]);
        } else {
            new_x.push(state.x[i].clone());
            new_y.push(state.y[i]);
        }
    }
    state.advance(new_x, new_y);
    Ok(())
}
