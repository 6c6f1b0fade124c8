//! SHADE: DE with success-history parameter adaptation, an external archive,
//! and current-to-pbest/1 mutation.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Cauchy, Distribution, Normal};

use crate::error::Error;
use crate::optimizers::de::{crossover, distinct_indices};
use crate::optimizers::{AlgoMemory, OptimizerState};
use crate::problems::ProblemInstance;
use crate::Result;

/// Success-history length.
pub const SHADE_H: usize = 100;
/// p-best fraction for the current-to-pbest/1 mutation.
pub const SHADE_P: f64 = 0.11;

/// Success-history memory cells plus the external archive of replaced parents.
#[derive(Clone, Debug)]
pub struct ShadeMemory {
    pub m_f: Vec<f64>,
    pub m_cr: Vec<f64>,
    /// Next history cell to overwrite.
    pub pos: usize,
    pub archive: Vec<Vec<f64>>,
}

/// A successful replacement in one generation: the parameters that produced it
/// and the fitness improvement it achieved.
#[derive(Clone, Copy, Debug)]
pub struct SuccessEntry {
    pub f: f64,
    pub cr: f64,
    pub delta: f64,
}

impl ShadeMemory {
    pub fn new() -> Self {
        ShadeMemory {
            m_f: vec![0.5; SHADE_H],
            m_cr: vec![0.5; SHADE_H],
            pos: 0,
            archive: Vec::new(),
        }
    }

    /// Write one history cell from this generation's successes: weighted
    /// Lehmer mean for F, weighted arithmetic mean for CR, weights
    /// proportional to fitness improvement. No successes → no change.
    pub fn update_from_successes(&mut self, successes: &[SuccessEntry]) {
        if successes.is_empty() {
            return;
        }
        let total: f64 = successes.iter().map(|s| s.delta).sum();
        if total <= 0.0 {
            return;
        }
        let mut lehmer_num = 0.0;
        let mut lehmer_den = 0.0;
        let mut cr_mean = 0.0;
        for s in successes {
            let w = s.delta / total;
            lehmer_num += w * s.f * s.f;
            lehmer_den += w * s.f;
            cr_mean += w * s.cr;
        }
        self.m_f[self.pos] = lehmer_num / lehmer_den;
        self.m_cr[self.pos] = cr_mean;
        self.pos = (self.pos + 1) % SHADE_H;
    }

    /// Insert a replaced parent, evicting a random member when the archive
    /// would exceed `cap`.
    pub fn push_archive(&mut self, x: Vec<f64>, cap: usize, rng: &mut ChaCha8Rng) {
        self.archive.push(x);
        while self.archive.len() > cap {
            let victim = rng.gen_range(0..self.archive.len());
            self.archive.swap_remove(victim);
        }
    }
}

impl Default for ShadeMemory {
    fn default() -> Self {
        ShadeMemory::new()
    }
}

/// F_i ~ Cauchy(loc, 0.1), truncated to (0, 1]: values above 1 are clamped to
/// 1, non-positive draws are rejected and redrawn.
fn sample_f(loc: f64, rng: &mut ChaCha8Rng) -> f64 {
    let cauchy = Cauchy::new(loc, 0.1).expect("valid Cauchy scale");
    loop {
        let c = cauchy.sample(rng);
        if c > 1.0 {
            return 1.0;
        }
        if c > 0.0 {
            return c;
        }
    }
}

/// Advance one SHADE generation. Installs its memory on first use.
pub fn shade_step(
    state: &mut OptimizerState,
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
    if matches!(state.memory, AlgoMemory::None) {
        state.memory = AlgoMemory::Shade(ShadeMemory::new());
    }
    let AlgoMemory::Shade(mut memory) = std::mem::replace(&mut state.memory, AlgoMemory::None)
    else {
        return Err(Error::InvalidParameter(
            "optimizer state carries non-SHADE memory".into(),
        ));
    };

    let dim = problem.dim();
    let p_num = ((SHADE_P * n as f64).ceil() as usize).max(2).min(n);
    // Indices of the p_num best current individuals.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| state.y[a].total_cmp(&state.y[b]));
    let p_best = &order[..p_num];

    let mut trials = Vec::with_capacity(n);
    let mut params = Vec::with_capacity(n);
    for i in 0..n {
        let k = rng.gen_range(0..SHADE_H);
        let f_i = sample_f(memory.m_f[k], rng);
        let normal = Normal::new(memory.m_cr[k], 0.1).expect("valid Normal sigma");
        let cr_i: f64 = normal.sample(rng).clamp(0.0, 1.0);
        params.push((f_i, cr_i));

        let pb = p_best[rng.gen_range(0..p_num)];
        let r1 = distinct_indices(rng, n, i, 1)[0];
        // r2 ranges over population ∪ archive, distinct from i and r1.
        let pool = n + memory.archive.len();
        let r2 = loop {
            let c = rng.gen_range(0..pool);
            if c != i && c != r1 {
                break c;
            }
        };
        let x_r2 = if r2 < n {
            &state.x[r2]
        } else {
            &memory.archive[r2 - n]
        };

        let xi = &state.x[i];
        let donor: Vec<f64> = (0..dim)
            .map(|d| xi[d] + f_i * (state.x[pb][d] - xi[d]) + f_i * (state.x[r1][d] - x_r2[d]))
            .collect();
        let j_rand = rng.gen_range(0..dim);
        let trial = crossover(xi, &donor, cr_i, j_rand, rng);
        trials.push(problem.clipped(&trial));
    }

    let trial_y = problem.evaluate(&trials)?;

    let mut new_x = Vec::with_capacity(n);
    let mut new_y = Vec::with_capacity(n);
    let mut successes = Vec::new();
    for i in 0..n {
        if trial_y[i] <= state.y[i] {
            if trial_y[i] < state.y[i] {
                let (f_i, cr_i) = params[i];
                successes.push(SuccessEntry {
                    f: f_i,
                    cr: cr_i,
                    delta: state.y[i] - trial_y[i],
                });
                memory.push_archive(state.x[i].clone(), n, rng);
            }
            new_x.push(trials[i].clone());
            new_y.push(trial_y[i]);
        } else {
            new_x.push(state.x[i].clone());
            new_y.push(state.y[i]);
        }
    }
    memory.update_from_successes(&successes);
    state.memory = AlgoMemory::Shade(memory);
    state.advance(new_x, new_y);
    Ok(())
}
