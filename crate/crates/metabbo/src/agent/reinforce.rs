//! Policy-gradient training: REINFORCE with a mean-return baseline over
//! batches of sampled episodes.

use serde::{Deserialize, Serialize};

use crate::agent::episode::meta_objective;
use crate::agent::policy::{ActionMode, MetaPolicy, THETA_LEN};
use crate::agent::signal::{wrap_signal, SignalKind, SignalPayload, UniversalSignal};
use crate::agent::snapshot::Snapshot;
use crate::error::Error;
use crate::parallel::pool::WorkerPool;
use crate::parallel::vec_env::rollout_batch;
use crate::problems::{ProblemInstance, SuiteProblem};
use crate::seed::hash_seeds;
use crate::Result;

const ROLLOUT_STREAM: u64 = 0x726f_6c6c; // "roll"
const EVAL_STREAM: u64 = 0x6576_616c; // "eval"

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RlConfig {
    /// Training epochs G; one gradient update and one snapshot each.
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    /// Sampled episodes per train instance per epoch.
    #[serde(default = "default_episodes_per_instance")]
    pub episodes_per_instance: usize,
    #[serde(default = "default_learning_rate")]
    pub learning_rate: f64,
    /// Vectorized-environment width for episode collection.
    #[serde(default = "default_batch_size")]
    pub batch_size: usize,
    /// Worker threads for episode collection; 0 or 1 runs serially.
    #[serde(default)]
    pub workers: usize,
    /// Root seed for every stream the trainer consumes.
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Greedy evaluation seeds per instance for snapshot train scores.
    #[serde(default = "default_eval_seeds")]
    pub eval_seeds: usize,
}

fn default_epochs() -> usize {
    50
}
fn default_episodes_per_instance() -> usize {
    2
}
fn default_learning_rate() -> f64 {
    0.01
}
fn default_batch_size() -> usize {
    16
}
fn default_seed() -> u64 {
    7
}
fn default_eval_seeds() -> usize {
    1
}

impl Default for RlConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults are complete")
    }
}

impl RlConfig {
    pub fn validate(&self) -> Result<()> {
        if self.episodes_per_instance == 0 {
            return Err(Error::InvalidParameter(
                "episodes_per_instance must be ≥ 1".into(),
            ));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidParameter("batch_size must be ≥ 1".into()));
        }
        if !self.learning_rate.is_finite() || self.learning_rate < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "learning_rate must be finite and ≥ 0, got {}",
                self.learning_rate
            )));
        }
        if self.eval_seeds == 0 {
            return Err(Error::InvalidParameter("eval_seeds must be ≥ 1".into()));
        }
        Ok(())
    }
}

/// The REINFORCE estimator over a trajectory signal:
/// mean over trajectories of `Σ_t ∇log π(ω_t|s_t) · (R − b)`,
/// with `b` the batch mean return.
pub fn reinforce_gradient(policy: &MetaPolicy, signal: &UniversalSignal) -> Result<Vec<f64>> {
    let trajectories = signal.trajectories().ok_or_else(|| {
        Error::Inconsistent("policy-gradient update needs a trajectory signal".into())
    })?;
    let n = trajectories.len() as f64;
    let baseline: f64 = trajectories.iter().map(|t| t.ret).sum::<f64>() / n;
    let mut grad = vec![0.0; THETA_LEN];
    for trajectory in trajectories {
        let advantage = trajectory.ret - baseline;
        if advantage == 0.0 {
            continue;
        }
        for step in &trajectory.steps {
            let (_, g) = policy.log_prob_grad(&step.features, &step.action);
            for (acc, gi) in grad.iter_mut().zip(&g) {
                *acc += advantage * gi / n;
            }
        }
    }
    Ok(grad)
}

/// Apply `θ += lr·grad` unless the gradient contains a non-finite entry, in
/// which case θ is left untouched. Returns whether the update was applied.
pub(crate) fn apply_update(policy: &mut MetaPolicy, grad: &[f64], learning_rate: f64) -> bool {
    if grad.iter().any(|g| !g.is_finite()) {
        return false;
    }
    policy.add_scaled(grad, learning_rate);
    true
}

pub(crate) fn soo_instances(train_set: &[SuiteProblem], who: &str) -> Result<Vec<ProblemInstance>> {
    if train_set.is_empty() {
        return Err(Error::InvalidParameter("empty train set".into()));
    }
    train_set
        .iter()
        .map(|p| {
            p.as_soo().cloned().ok_or_else(|| Error::UnsupportedProblemType {
                agent: who.to_string(),
                problem_type: "MOO".into(),
            })
        })
        .collect()
}

pub(crate) fn eval_seeds(seed: u64, count: usize) -> Vec<u64> {
    (0..count)
        .map(|j| hash_seeds(&[seed, EVAL_STREAM, j as u64]))
        .collect()
}

/// Strictly-increasing cumulative seconds for snapshot sequences.
pub(crate) fn monotone_seconds(elapsed: f64, previous: Option<f64>) -> f64 {
    match previous {
        Some(prev) => elapsed.max(prev + 1e-9),
        None => elapsed.max(1e-9),
    }
}

/// Train with REINFORCE. Emits one snapshot for the initial policy and one
/// per epoch; `on_snapshot` runs as each is created, so interrupted training
/// keeps everything finished so far.
pub fn train_rl(
    initial: &MetaPolicy,
    train_set: &[SuiteProblem],
    config: &RlConfig,
    mut on_snapshot: impl FnMut(&Snapshot) -> Result<()>,
) -> Result<Vec<Snapshot>> {
    config.validate()?;
    let instances = soo_instances(train_set, "policy-gradient trainer")?;
    let eval = eval_seeds(config.seed, config.eval_seeds);
    let pool = (config.workers > 1).then(|| WorkerPool::new(config.workers));

    let start = std::time::Instant::now();
    let mut policy = initial.clone();
    let mut snapshots = Vec::with_capacity(config.epochs + 1);

    let push_snapshot = |epoch: usize,
                             policy: &MetaPolicy,
                             snapshots: &mut Vec<Snapshot>,
                             on_snapshot: &mut dyn FnMut(&Snapshot) -> Result<()>|
     -> Result<()> {
        let score = meta_objective(policy, train_set, &eval)?;
        let seconds = monotone_seconds(
            start.elapsed().as_secs_f64(),
            snapshots.last().map(|s: &Snapshot| s.cumulative_seconds),
        );
        let snapshot = Snapshot::new(epoch, policy.theta().to_vec(), seconds, score);
        on_snapshot(&snapshot)?;
        snapshots.push(snapshot);
        Ok(())
    };

    push_snapshot(0, &policy, &mut snapshots, &mut on_snapshot)?;

    for epoch in 1..=config.epochs {
        // Episode tasks in canonical (instance, episode) order; batching and
        // scheduling cannot reorder the collected signal.
        let mut tasks = Vec::with_capacity(instances.len() * config.episodes_per_instance);
        for (i, inst) in instances.iter().enumerate() {
            for e in 0..config.episodes_per_instance {
                let ep_seed = hash_seeds(&[
                    config.seed,
                    ROLLOUT_STREAM,
                    epoch as u64,
                    i as u64,
                    e as u64,
                ]);
                tasks.push((inst.fresh_for_run(ep_seed), ep_seed));
            }
        }
        let mut trajectories = Vec::with_capacity(tasks.len());
        for chunk in tasks.chunks(config.batch_size) {
            trajectories.extend(rollout_batch(
                &policy,
                ActionMode::Sample,
                chunk.to_vec(),
                pool.as_ref(),
            )?);
        }
        let signal = wrap_signal(
            SignalKind::RlTrajectories,
            SignalPayload::Trajectories(trajectories),
        )?;
        let grad = reinforce_gradient(&policy, &signal)?;
        if !apply_update(&mut policy, &grad, config.learning_rate) {
            log::warn!("epoch {epoch}: non-finite policy gradient, keeping previous parameters");
        }
        push_snapshot(epoch, &policy, &mut snapshots, &mut on_snapshot)?;
    }
    Ok(snapshots)
}
