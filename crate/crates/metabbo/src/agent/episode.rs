//! Episode rollout: a policy (or a fixed design) drives the configurable DE
//! over one problem instance until the budget runs out.

use rand_chacha::ChaCha8Rng;

use crate::agent::features::{extract_features, StateFeatures};
use crate::agent::policy::{policy_forward, ActionMode, MetaPolicy, PolicyAction};
use crate::agent::reward::reward;
use crate::optimizers::{
    de_step, init_population, AlgorithmDesign, RunObjectives, RunRecord, POPULATION_SIZE,
};
use crate::problems::{ProblemInstance, SuiteProblem};
use crate::seed::rng_from;
use crate::Error;
use crate::Result;

/// One decision point: the observed features, the executed design, the raw
/// action it came from, its log-density, and the resulting reward.
#[derive(Clone, Debug)]
pub struct TrajectoryStep {
    pub features: StateFeatures,
    pub design: AlgorithmDesign,
    pub action: PolicyAction,
    pub log_prob: f64,
    pub reward: f64,
}

/// A full episode's decision sequence plus its return.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub steps: Vec<TrajectoryStep>,
    /// Episode return `R = Σ_t r_t`.
    pub ret: f64,
    pub problem_id: String,
    pub seed: u64,
}

impl Trajectory {
    /// Recomputes the return from the stored steps (should always equal
    /// [`Trajectory::ret`]).
    pub fn sum_rewards(&self) -> f64 {
        self.steps.iter().map(|s| s.reward).sum()
    }
}

/// Post-initialization generations in one episode: `⌊max_fes/n⌋ − 1`.
pub fn episode_steps(max_fes: usize) -> usize {
    (max_fes / POPULATION_SIZE).saturating_sub(1)
}

enum Actor<'a> {
    Policy(&'a MetaPolicy, ActionMode),
    Fixed(AlgorithmDesign),
}

impl Actor<'_> {
    fn act(&self, s: &StateFeatures, rng: &mut ChaCha8Rng) -> (AlgorithmDesign, PolicyAction, f64) {
        match self {
            Actor::Policy(policy, mode) => policy_forward(policy, s, *mode, rng),
            Actor::Fixed(design) => {
                // Informational raw coordinates for the log; fixed designs
                // never feed a gradient.
                let action = PolicyAction {
                    f_raw: logit(design.f),
                    cr_raw: logit(design.cr),
                    strategy: design.strategy.index(),
                };
                (*design, action, 0.0)
            }
        }
    }
}

fn logit(p: f64) -> f64 {
    let p = p.clamp(1e-9, 1.0 - 1e-9);
    (p / (1.0 - p)).ln()
}

fn episode_core(
    actor: Actor<'_>,
    problem: &ProblemInstance,
    seed: u64,
) -> Result<(Trajectory, RunRecord)> {
    if problem.fes_used() != 0 {
        return Err(Error::InstanceNotFresh {
            used: problem.fes_used(),
        });
    }
    let start = std::time::Instant::now();
    let mut p = problem.clone();
    let mut rng = rng_from(&[seed]);
    let mut state = init_population(&mut p, POPULATION_SIZE, &mut rng)?;
    let y0 = state.y0;
    let f_opt = p.f_opt();
    let t_total = episode_steps(p.max_fes());

    let mut steps = Vec::with_capacity(t_total);
    let mut x_log = vec![state.x.clone()];
    let mut y_log = vec![state.y.clone()];
    loop {
        let features = extract_features(&state, &p, state.generation, t_total);
        let prev_best = state.best_y;
        let (design, action, log_prob) = actor.act(&features, &mut rng);
        match de_step(&mut state, &design, &mut p, &mut rng) {
            Ok(()) => {
                steps.push(TrajectoryStep {
                    features,
                    design,
                    action,
                    log_prob,
                    reward: reward(prev_best, state.best_y, y0, f_opt),
                });
                x_log.push(state.x.clone());
                y_log.push(state.y.clone());
            }
            // Budget exhaustion is the normal end of an episode. Note the
            // feature extraction and action draw for the unexecutable step
            // have already happened; the draw order up to that point matches
            // a baseline run exactly.
            Err(Error::BudgetExhausted { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    let ret = steps.iter().map(|s| s.reward).sum();
    let trajectory = Trajectory {
        steps,
        ret,
        problem_id: p.id().to_string(),
        seed,
    };
    let record = RunRecord {
        problem_id: p.id().to_string(),
        x_log,
        y_log: RunObjectives::Soo(y_log),
        wall_time_s: start.elapsed().as_secs_f64(),
        seed,
        final_best: Some(state.best_y),
    };
    Ok((trajectory, record))
}

/// Roll out `policy` on a fresh single-objective instance.
///
/// The RNG stream is derived from `seed` alone, so a greedy episode is a pure
/// function of `(θ, problem, seed)`.
pub fn episode(
    policy: &MetaPolicy,
    problem: &ProblemInstance,
    seed: u64,
    mode: ActionMode,
) -> Result<(Trajectory, RunRecord)> {
    episode_core(Actor::Policy(policy, mode), problem, seed)
}

/// Roll out a fixed design through the same machinery. With the same seed this
/// reproduces a plain DE baseline run bit for bit — the policy path adds no
/// RNG draws in fixed/greedy mode.
pub fn episode_fixed(
    design: &AlgorithmDesign,
    problem: &ProblemInstance,
    seed: u64,
) -> Result<(Trajectory, RunRecord)> {
    episode_core(Actor::Fixed(*design), problem, seed)
}

fn soo_of(problem: &SuiteProblem) -> Result<&ProblemInstance> {
    problem.as_soo().ok_or_else(|| Error::UnsupportedProblemType {
        agent: "meta-policy DE".into(),
        problem_type: "MOO".into(),
    })
}

/// Mean greedy-episode return over the `problems × seeds` grid.
///
/// Each (problem, seed) cell runs on `problem.fresh_for_run(seed)`, so noisy
/// instances get independent noise per seed.
pub fn meta_objective(
    policy: &MetaPolicy,
    problems: &[SuiteProblem],
    seeds: &[u64],
) -> Result<f64> {
    grid_mean(problems, seeds, |inst, seed| {
        episode(policy, inst, seed, ActionMode::Greedy).map(|(t, _)| t.ret)
    })
}

/// [`meta_objective`] for a fixed design — the comparison point for trained
/// policies.
pub fn meta_objective_fixed(
    design: &AlgorithmDesign,
    problems: &[SuiteProblem],
    seeds: &[u64],
) -> Result<f64> {
    grid_mean(problems, seeds, |inst, seed| {
        episode_fixed(design, inst, seed).map(|(t, _)| t.ret)
    })
}

fn grid_mean(
    problems: &[SuiteProblem],
    seeds: &[u64],
    mut run: impl FnMut(&ProblemInstance, u64) -> Result<f64>,
) -> Result<f64> {
    if problems.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidParameter(
            "meta-objective needs at least one problem and one seed".into(),
        ));
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for p in problems {
        let inst = soo_of(p)?;
        for &seed in seeds {
            total += run(&inst.fresh_for_run(seed), seed)?;
            count += 1;
        }
    }
    Ok(total / count as f64)
}
