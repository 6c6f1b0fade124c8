//! Particle swarm optimization with constriction-style constants and
//! per-coordinate velocity clamping.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::optimizers::{AlgoMemory, OptimizerState};
use crate::problems::ProblemInstance;
use crate::Result;

pub const PSO_W: f64 = 0.729;
pub const PSO_C1: f64 = 1.49445;
pub const PSO_C2: f64 = 1.49445;
/// Velocities are clamped to this fraction of the per-coordinate range.
pub const PSO_VMAX_FRACTION: f64 = 0.2;

/// Velocities and per-particle personal bests.
#[derive(Clone, Debug)]
pub struct PsoMemory {
    pub velocities: Vec<Vec<f64>>,
    pub pbest_x: Vec<Vec<f64>>,
    pub pbest_y: Vec<f64>,
}

impl PsoMemory {
    /// Zero velocities; personal bests start at the current population.
    pub fn from_state(state: &OptimizerState) -> Self {
        PsoMemory {
            velocities: vec![vec![0.0; state.x[0].len()]; state.pop_size()],
            pbest_x: state.x.clone(),
            pbest_y: state.y.clone(),
        }
    }
}

/// One coordinate of the velocity update (pre-clamp):
/// `w·v + c1·r1·(pbest − x) + c2·r2·(gbest − x)`.
pub fn velocity_update(
    v: f64,
    x: f64,
    pbest: f64,
    gbest: f64,
    w: f64,
    c1: f64,
    c2: f64,
    r1: f64,
    r2: f64,
) -> f64 {
    w * v + c1 * r1 * (pbest - x) + c2 * r2 * (gbest - x)
}

/// Advance one PSO generation. Installs velocity/personal-best memory on
/// first use.
pub fn pso_step(
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
        state.memory = AlgoMemory::Pso(PsoMemory::from_state(state));
    }
    let AlgoMemory::Pso(mut memory) = std::mem::replace(&mut state.memory, AlgoMemory::None)
    else {
        return Err(Error::InvalidParameter(
            "optimizer state carries non-PSO memory".into(),
        ));
    };

    let vmax: Vec<f64> = problem
        .bounds()
        .iter()
        .map(|(lo, hi)| PSO_VMAX_FRACTION * (hi - lo))
        .collect();
    let gbest = state.best_x.clone();

    let mut new_x = Vec::with_capacity(n);
    for i in 0..n {
        let mut pos = Vec::with_capacity(vmax.len());
        for d in 0..vmax.len() {
            let r1: f64 = rng.gen();
            let r2: f64 = rng.gen();
            let v = velocity_update(
                memory.velocities[i][d],
                state.x[i][d],
                memory.pbest_x[i][d],
                gbest[d],
                PSO_W,
                PSO_C1,
                PSO_C2,
                r1,
                r2,
            )
            .clamp(-vmax[d], vmax[d]);
            memory.velocities[i][d] = v;
            pos.push(state.x[i][d] + v);
        }
        new_x.push(problem.clipped(&pos));
    }

    let new_y = problem.evaluate(&new_x)?;
    for i in 0..n {
        if new_y[i] < memory.pbest_y[i] {
            memory.pbest_y[i] = new_y[i];
            memory.pbest_x[i] = new_x[i].clone();
        }
    }
    state.memory = AlgoMemory::Pso(memory);
    state.advance(new_x, new_y);
    Ok(())
}
