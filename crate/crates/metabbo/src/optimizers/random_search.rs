//! Uniform random search — the normalization baseline.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::optimizers::OptimizerState;
use crate::problems::ProblemInstance;
use crate::Result;

/// Sample `n` fresh uniform points and evaluate them.
pub fn random_search_step(
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
    state.advance(x, y);
    Ok(())
}
