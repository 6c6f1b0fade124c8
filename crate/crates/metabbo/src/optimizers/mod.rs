//! Population-based low-level optimizers.
//!
//! All four optimizers (random search, DE, PSO, SHADE) share one
//! [`OptimizerState`] and one stepping contract: a step consumes exactly `n`
//! evaluations or fails with a budget error *before* touching any state, so
//! partial generations never happen.

pub mod de;
pub mod pso;
pub mod random_search;
pub mod runner;
pub mod shade;

pub use de::{crossover, de_step, distinct_indices, mutant, AlgorithmDesign, MutationStrategy};
pub use pso::{pso_step, PsoMemory, PSO_C1, PSO_C2, PSO_W};
pub use random_search::random_search_step;
pub use runner::{
    run_baseline, run_baseline_thinned, BaselineId, RunObjectives, RunRecord, DEFAULT_DE_DESIGN,
    POPULATION_SIZE,
};
pub use shade::{shade_step, ShadeMemory, SHADE_H, SHADE_P};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::problems::ProblemInstance;
use crate::Result;

/// Mutable per-run state shared by every optimizer.
#[derive(Clone, Debug)]
pub struct OptimizerState {
    /// Current population, `n × dim`, always within bounds.
    pub x: Vec<Vec<f64>>,
    /// Objective value of each current individual.
    pub y: Vec<f64>,
    /// Best point evaluated so far (across all generations).
    pub best_x: Vec<f64>,
    /// Best objective value so far; non-increasing across generations.
    pub best_y: f64,
    /// Best objective value of the initial population.
    pub y0: f64,
    /// Generations completed; 0 right after initialization.
    pub generation: usize,
    /// Generation index at which `best_y` last improved.
    pub last_improvement_gen: usize,
    /// Algorithm-specific extras (SHADE history/archive, PSO velocities).
    pub memory: AlgoMemory,
}

/// Optimizer-specific state carried alongside the population.
#[derive(Clone, Debug)]
pub enum AlgoMemory {
    None,
    Shade(ShadeMemory),
    Pso(PsoMemory),
}

impl OptimizerState {
    /// Install a new generation: replaces the population, bumps the counter,
    /// and maintains the best-so-far bookkeeping.
    pub fn advance(&mut self, x: Vec<Vec<f64>>, y: Vec<f64>) {
        debug_assert_eq!(x.len(), self.x.len(), "population size is fixed per run");
        self.x = x;
        self.y = y;
        self.generation += 1;
        let (idx, min) = argmin(&self.y);
        if min < self.best_y {
            self.best_y = min;
            self.best_x = self.x[idx].clone();
            self.last_improvement_gen = self.generation;
        }
    }

    /// Population size `n`.
    pub fn pop_size(&self) -> usize {
        self.x.len()
    }

    /// Best objective value within the *current* population only.
    pub fn current_min(&self) -> f64 {
        argmin(&self.y).1
    }
}

/// Index and value of the minimum entry (first occurrence wins ties).
pub(crate) fn argmin(y: &[f64]) -> (usize, f64) {
    let mut idx = 0;
    let mut min = y[0];
    for (i, &v) in y.iter().enumerate().skip(1) {
        if v < min {
            idx = i;
            min = v;
        }
    }
    (idx, min)
}

/// Sample a uniform population and evaluate it, consuming `n` evaluations.
pub fn init_population(
    problem: &mut ProblemInstance,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<OptimizerState> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!(
            "population too small for DE: need n ≥ 4, got {n}"
        )));
    }
    let x: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            problem
                .bounds()
                .iter()
                .map(|(lo, hi)| rng.gen_range(*lo..*hi))
                .collect()
        })
        .collect();
    let y = problem.evaluate(&x)?;
    let (idx, best_y) = argmin(&y);
    let best_x = x[idx].clone();
    Ok(OptimizerState {
        x,
        y,
        best_x,
        best_y,
        y0: best_y,
        generation: 0,
        last_improvement_gen: 0,
        memory: AlgoMemory::None,
    })
}
