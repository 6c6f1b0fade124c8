//! Vectorized episode environments: a batch of independent (problem, state,
//! RNG) slots stepped in lockstep.
//!
//! Each slot owns everything it mutates, so stepping the batch on a worker
//! pool is bit-identical to stepping it serially — and a batch of one is
//! bit-identical to a plain episode.

use rand_chacha::ChaCha8Rng;

use crate::agent::episode::{episode_steps, Trajectory, TrajectoryStep};
use crate::agent::features::{extract_features, StateFeatures};
use crate::agent::policy::{ActionMode, MetaPolicy, PolicyAction};
use crate::agent::reward::reward;
use crate::error::Error;
use crate::optimizers::{
    de_step, init_population, AlgorithmDesign, OptimizerState, POPULATION_SIZE,
};
use crate::parallel::pool::WorkerPool;
use crate::problems::ProblemInstance;
use crate::seed::rng_from;
use crate::Result;

/// One environment's view of a step: the features after the step, the reward
/// it earned, and whether the budget is now exhausted.
#[derive(Clone, Debug)]
pub struct Transition {
    pub features: StateFeatures,
    pub reward: f64,
    pub done: bool,
}

struct EnvSlot {
    problem: ProblemInstance,
    state: OptimizerState,
    rng: ChaCha8Rng,
    features: StateFeatures,
    t_max: usize,
    done: bool,
}

impl EnvSlot {
    fn new(problem: ProblemInstance, seed: u64) -> Result<EnvSlot> {
        if problem.fes_used() != 0 {
            return Err(Error::InstanceNotFresh {
                used: problem.fes_used(),
            });
        }
        let mut problem = problem;
        let mut rng = rng_from(&[seed]);
        let state = init_population(&mut problem, POPULATION_SIZE, &mut rng)?;
        let t_max = episode_steps(problem.max_fes());
        let features = extract_features(&state, &problem, 0, t_max);
        let done = problem.remaining_budget() < POPULATION_SIZE;
        Ok(EnvSlot {
            problem,
            state,
            rng,
            features,
            t_max,
            done,
        })
    }

    /// Advance one generation. Mirrors a serial episode step exactly: the
    /// budget check inside the optimizer runs before any RNG draw.
    fn step(&mut self, design: &AlgorithmDesign) -> Result<Transition> {
        if self.done {
            return Ok(Transition {
                features: self.features.clone(),
                reward: 0.0,
                done: true,
            });
        }
        let prev_best = self.state.best_y;
        match de_step(&mut self.state, design, &mut self.problem, &mut self.rng) {
            Ok(()) => {
                let r = reward(prev_best, self.state.best_y, self.state.y0, self.problem.f_opt());
                self.features =
                    extract_features(&self.state, &self.problem, self.state.generation, self.t_max);
                // Raise done as soon as no further generation fits the budget,
                // so callers never waste action draws on a dead env.
                self.done = self.problem.remaining_budget() < POPULATION_SIZE;
                Ok(Transition {
                    features: self.features.clone(),
                    reward: r,
                    done: self.done,
                })
            }
            Err(Error::BudgetExhausted { .. }) => {
                self.done = true;
                Ok(Transition {
                    features: self.features.clone(),
                    reward: 0.0,
                    done: true,
                })
            }
            Err(e) => Err(e),
        }
    }
}

pub struct VecEnv {
    slots: Vec<EnvSlot>,
}

impl VecEnv {
    /// Build a batch from fresh `(problem, seed)` pairs. Each slot derives its
    /// own RNG from its seed and initializes its own population, exactly as a
    /// serial episode would.
    pub fn new(tasks: Vec<(ProblemInstance, u64)>) -> Result<VecEnv> {
        if tasks.is_empty() {
            return Err(Error::InvalidParameter(
                "vectorized environment needs at least one slot".into(),
            ));
        }
        let slots = tasks
            .into_iter()
            .map(|(p, seed)| EnvSlot::new(p, seed))
            .collect::<Result<Vec<_>>>()?;
        Ok(VecEnv { slots })
    }

    pub fn batch_size(&self) -> usize {
        self.slots.len()
    }

    /// Current features, ordered by env index.
    pub fn features(&self) -> Vec<StateFeatures> {
        self.slots.iter().map(|s| s.features.clone()).collect()
    }

    pub fn dones(&self) -> Vec<bool> {
        self.slots.iter().map(|s| s.done).collect()
    }

    pub fn all_done(&self) -> bool {
        self.slots.iter().all(|s| s.done)
    }

    /// Draw one action per env from its own RNG stream, in env order.
    /// Finished envs consume no randomness and get a placeholder design.
    pub fn sample_actions(
        &mut self,
        policy: &MetaPolicy,
        mode: ActionMode,
    ) -> Vec<(AlgorithmDesign, PolicyAction, f64)> {
        self.slots
            .iter_mut()
            .map(|slot| {
                if slot.done {
                    let action = PolicyAction {
                        f_raw: 0.0,
                        cr_raw: 0.0,
                        strategy: 0,
                    };
                    (AlgorithmDesign::clamped(0.5, 0.5, crate::optimizers::MutationStrategy::Rand1Bin), action, 0.0)
                } else {
                    crate::agent::policy::policy_forward(policy, &slot.features, mode, &mut slot.rng)
                }
            })
            .collect()
    }

    /// Advance every env one generation with its design. With a pool, slots
    /// are stepped concurrently; the result is bit-identical to serial
    /// stepping because slots share nothing.
    pub fn step(
        &mut self,
        designs: &[AlgorithmDesign],
        pool: Option<&WorkerPool>,
    ) -> Result<Vec<Transition>> {
        if designs.len() != self.slots.len() {
            return Err(Error::InvalidParameter(format!(
                "{} designs for {} envs",
                designs.len(),
                self.slots.len()
            )));
        }
        match pool {
            None => self
                .slots
                .iter_mut()
                .zip(designs)
                .map(|(slot, d)| slot.step(d))
                .collect(),
            Some(pool) => {
                let slots = std::mem::take(&mut self.slots);
                let tasks: Vec<(EnvSlot, AlgorithmDesign)> =
                    slots.into_iter().zip(designs.iter().copied()).collect();
                let outcomes = pool.run_batch(tasks, |(mut slot, design)| {
                    let t = slot.step(&design);
                    (slot, t)
                });
                let mut transitions = Vec::with_capacity(outcomes.len());
                for outcome in outcomes {
                    let (slot, transition) =
                        outcome.map_err(|msg| Error::Inconsistent(format!("env step panicked: {msg}")))?;
                    self.slots.push(slot);
                    transitions.push(transition?);
                }
                Ok(transitions)
            }
        }
    }
}

/// Roll out whole episodes for a batch of `(problem, seed)` tasks and return
/// one trajectory per slot, in slot order.
///
/// This is the episode collector both trainers use; `pool` parallelizes the
/// stepping without changing any result.
pub fn rollout_batch(
    policy: &MetaPolicy,
    mode: ActionMode,
    tasks: Vec<(ProblemInstance, u64)>,
    pool: Option<&WorkerPool>,
) -> Result<Vec<Trajectory>> {
    let ids: Vec<String> = tasks.iter().map(|(p, _)| p.id().to_string()).collect();
    let seeds: Vec<u64> = tasks.iter().map(|(_, s)| *s).collect();
    let mut venv = VecEnv::new(tasks)?;
    let b = venv.batch_size();
    let mut steps: Vec<Vec<TrajectoryStep>> = (0..b).map(|_| Vec::new()).collect();
    while !venv.all_done() {
        let live_before: Vec<bool> = venv.dones().iter().map(|d| !d).collect();
        let features = venv.features();
        let actions = venv.sample_actions(policy, mode);
        let designs: Vec<AlgorithmDesign> = actions.iter().map(|(d, _, _)| *d).collect();
        let transitions = venv.step(&designs, pool)?;
        for i in 0..b {
            if live_before[i] {
                let (design, action, log_prob) = actions[i];
                steps[i].push(TrajectoryStep {
                    features: features[i].clone(),
                    design,
                    action,
                    log_prob,
                    reward: transitions[i].reward,
                });
            }
        }
    }
    Ok(steps
        .into_iter()
        .zip(ids)
        .zip(seeds)
        .map(|((steps, problem_id), seed)| {
            let ret = steps.iter().map(|s| s.reward).sum();
            Trajectory {
                steps,
                ret,
                problem_id,
                seed,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::episode::episode;
    use crate::problems::Family;

    fn sphere(seed: u64, max_fes: usize) -> ProblemInstance {
        ProblemInstance::new(Family::Sphere, 10, seed, 0.0, max_fes).unwrap()
    }

    #[test]
    fn batch_of_one_reproduces_a_plain_episode_exactly() {
        let p = sphere(7, 4_000);
        let policy = MetaPolicy::seeded(3);
        for mode in [ActionMode::Greedy, ActionMode::Sample] {
            let (reference, _) = episode(&policy, &p, 99, mode).unwrap();
            let batch = rollout_batch(&policy, mode, vec![(p.clone(), 99)], None).unwrap();
            assert_eq!(batch.len(), 1);
            let traj = &batch[0];
            assert_eq!(traj.steps.len(), reference.steps.len());
            for (a, b) in traj.steps.iter().zip(&reference.steps) {
                assert_eq!(a.action, b.action);
                assert_eq!(a.design, b.design);
                assert_eq!(a.reward, b.reward);
                assert_eq!(a.features.as_slice(), b.features.as_slice());
            }
            assert_eq!(traj.ret, reference.ret);
        }
    }

    #[test]
    fn pooled_stepping_is_bit_identical_to_serial() {
        let policy = MetaPolicy::seeded(5);
        let tasks: Vec<(ProblemInstance, u64)> = (0..6)
            .map(|i| (sphere(i, 3_000), 1_000 + i))
            .collect();
        let serial = rollout_batch(&policy, ActionMode::Sample, tasks.clone(), None).unwrap();
        let pool = WorkerPool::new(8);
        let pooled = rollout_batch(&policy, ActionMode::Sample, tasks, Some(&pool)).unwrap();
        for (a, b) in serial.iter().zip(&pooled) {
            assert_eq!(a.ret, b.ret);
            assert_eq!(a.steps.len(), b.steps.len());
            for (sa, sb) in a.steps.iter().zip(&b.steps) {
                assert_eq!(sa.action, sb.action);
                assert_eq!(sa.reward, sb.reward);
            }
        }
    }

    #[test]
    fn equal_budgets_finish_at_the_same_step_index() {
        let tasks: Vec<(ProblemInstance, u64)> =
            (0..16).map(|i| (sphere(i, 20_000), 7 + i)).collect();
        let mut venv = VecEnv::new(tasks).unwrap();
        let policy = MetaPolicy::zeros();
        let mut step_index = 0usize;
        let mut done_at: Vec<Option<usize>> = vec![None; 16];
        while !venv.all_done() {
            step_index += 1;
            let designs: Vec<AlgorithmDesign> = venv
                .sample_actions(&policy, ActionMode::Greedy)
                .iter()
                .map(|(d, _, _)| *d)
                .collect();
            let transitions = venv.step(&designs, None).unwrap();
            for (i, t) in transitions.iter().enumerate() {
                if t.done && done_at[i].is_none() {
                    done_at[i] = Some(step_index);
                }
            }
        }
        assert!(done_at.iter().all(|d| *d == Some(199)), "{done_at:?}");
    }

    #[test]
    fn slots_never_share_rng_streams() {
        // Same problem, different seeds → different populations after init.
        let p = sphere(1, 2_000);
        let venv = VecEnv::new(vec![(p.clone(), 1), (p, 2)]).unwrap();
        assert_ne!(
            venv.slots[0].state.x, venv.slots[1].state.x,
            "slots must not mirror each other"
        );
    }

    #[test]
    fn design_count_mismatch_is_rejected() {
        let mut venv = VecEnv::new(vec![(sphere(1, 2_000), 1)]).unwrap();
        let err = venv.step(&[], None).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn used_instances_are_rejected() {
        let mut p = sphere(1, 2_000);
        p.evaluate(&[vec![0.0; 10]]).unwrap();
        assert!(matches!(
            VecEnv::new(vec![(p, 1)]),
            Err(Error::InstanceNotFresh { .. })
        ));
    }
}
