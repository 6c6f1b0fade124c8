//! Full budget-exhausting runs of the baseline optimizers, producing the
//! per-generation logs that feed metadata capture.

use std::time::Instant;

use rand::Rng;

use crate::error::Error;
use crate::optimizers::{
    de_step, init_population, pso_step, random_search_step, shade_step, AlgorithmDesign,
    MutationStrategy,
};
use crate::problems::{MooInstance, ProblemInstance, SuiteProblem};
use crate::seed::rng_from;
use crate::Result;

/// Population size used by every optimizer and the meta-level episodes.
/// Divides the standard budgets evenly, so runs always exhaust their budget.
pub const POPULATION_SIZE: usize = 100;

/// The classic fixed DE configuration used by the plain DE baseline (and as
/// the reference design in meta-learning comparisons).
pub const DEFAULT_DE_DESIGN: AlgorithmDesign = AlgorithmDesign {
    f: 0.5,
    cr: 0.9,
    strategy: MutationStrategy::Rand1Bin,
};

/// Identifier for one of the four baseline optimizers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaselineId {
    Rs,
    De,
    Pso,
    Shade,
}

impl BaselineId {
    pub const ALL: [BaselineId; 4] = [
        BaselineId::Rs,
        BaselineId::De,
        BaselineId::Pso,
        BaselineId::Shade,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BaselineId::Rs => "rs",
            BaselineId::De => "de",
            BaselineId::Pso => "pso",
            BaselineId::Shade => "shade",
        }
    }

    pub fn parse(name: &str) -> Result<BaselineId> {
        let needle = name.trim().to_ascii_lowercase();
        BaselineId::ALL
            .iter()
            .copied()
            .find(|b| b.name() == needle)
            .ok_or_else(|| Error::UnknownAgent(name.to_string()))
    }
}

impl std::fmt::Display for BaselineId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-generation objective log: scalar values for single-objective runs,
/// objective pairs for bi-objective runs.
#[derive(Clone, Debug, PartialEq)]
pub enum RunObjectives {
    Soo(Vec<Vec<f64>>),
    Moo(Vec<Vec<[f64; 2]>>),
}

impl RunObjectives {
    pub fn generations(&self) -> usize {
        match self {
            RunObjectives::Soo(v) => v.len(),
            RunObjectives::Moo(v) => v.len(),
        }
    }
}

/// Everything logged by one run: the per-generation populations and
/// objectives, wall time, and the final best (single-objective only).
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub problem_id: String,
    /// Per generation: the full `n × dim` population, bounds-feasible.
    pub x_log: Vec<Vec<Vec<f64>>>,
    pub y_log: RunObjectives,
    pub wall_time_s: f64,
    pub seed: u64,
    /// Best objective value at budget exhaustion; `None` for bi-objective runs.
    pub final_best: Option<f64>,
}

impl RunRecord {
    /// Recorded generations, including the initial population.
    pub fn generations(&self) -> usize {
        self.x_log.len()
    }
}

/// Run one baseline to budget exhaustion on a fresh problem.
pub fn run_baseline(optimizer: BaselineId, problem: &SuiteProblem, seed: u64) -> Result<RunRecord> {
    run_baseline_thinned(optimizer, problem, seed, 1)
}

/// [`run_baseline`] with log thinning: generation 0 plus every `log_every`-th
/// generation is recorded (`log_every = 1` keeps everything).
pub fn run_baseline_thinned(
    optimizer: BaselineId,
    problem: &SuiteProblem,
    seed: u64,
    log_every: usize,
) -> Result<RunRecord> {
    if log_every == 0 {
        return Err(Error::InvalidParameter("log_every must be ≥ 1".into()));
    }
    match problem {
        SuiteProblem::Soo(p) => run_soo(optimizer, p, seed, log_every),
        SuiteProblem::Moo(p) => match optimizer {
            BaselineId::Rs => run_moo_random_search(p, seed, log_every),
            other => Err(Error::UnsupportedProblemType {
                agent: other.name().into(),
                problem_type: "MOO".into(),
            }),
        },
    }
}

fn require_fresh_soo(p: &ProblemInstance) -> Result<()> {
    if p.fes_used() != 0 {
        return Err(Error::InstanceNotFresh { used: p.fes_used() });
    }
    Ok(())
}

fn run_soo(
    optimizer: BaselineId,
    problem: &ProblemInstance,
    seed: u64,
    log_every: usize,
) -> Result<RunRecord> {
    require_fresh_soo(problem)?;
    let start = Instant::now();
    let mut p = problem.clone();
    let mut rng = rng_from(&[seed]);
    let mut state = init_population(&mut p, POPULATION_SIZE, &mut rng)?;
    let mut x_log = vec![state.x.clone()];
    let mut y_log = vec![state.y.clone()];
    loop {
        let step = match optimizer {
            BaselineId::Rs => random_search_step(&mut state, &mut p, &mut rng),
            BaselineId::De => de_step(&mut state, &DEFAULT_DE_DESIGN, &mut p, &mut rng),
            BaselineId::Pso => pso_step(&mut state, &mut p, &mut rng),
            BaselineId::Shade => shade_step(&mut state, &mut p, &mut rng),
        };
        match step {
            Ok(()) => {
                if state.generation % log_every == 0 {
                    x_log.push(state.x.clone());
                    y_log.push(state.y.clone());
                }
            }
            Err(Error::BudgetExhausted { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(RunRecord {
        problem_id: p.id().to_string(),
        x_log,
        y_log: RunObjectives::Soo(y_log),
        wall_time_s: start.elapsed().as_secs_f64(),
        seed,
        final_best: Some(state.best_y),
    })
}

fn run_moo_random_search(
    problem: &MooInstance,
    seed: u64,
    log_every: usize,
) -> Result<RunRecord> {
    if problem.fes_used() != 0 {
        return Err(Error::InstanceNotFresh {
            used: problem.fes_used(),
        });
    }
    let start = Instant::now();
    let mut p = problem.clone();
    let mut rng = rng_from(&[seed]);
    let bounds = p.bounds();
    let mut x_log = Vec::new();
    let mut y_log = Vec::new();
    let mut generation = 0usize;
    while p.remaining_budget() >= POPULATION_SIZE {
        let x: Vec<Vec<f64>> = (0..POPULATION_SIZE)
            .map(|_| {
                bounds
                    .iter()
                    .map(|(lo, hi)| rng.gen_range(*lo..*hi))
                    .collect()
            })
            .collect();
        let y = p.evaluate(&x)?;
        if generation == 0 || generation % log_every == 0 {
            x_log.push(x);
            y_log.push(y);
        }
        generation += 1;
    }
    Ok(RunRecord {
        problem_id: p.id().to_string(),
        x_log,
        y_log: RunObjectives::Moo(y_log),
        wall_time_s: start.elapsed().as_secs_f64(),
        seed,
        final_best: None,
    })
}
