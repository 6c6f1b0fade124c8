//! Evolution-strategies training: mirrored Gaussian perturbations of θ,
//! rank-normalized fitness, and the standard ES update — no gradients needed.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::agent::episode::meta_objective;
use crate::agent::policy::{MetaPolicy, THETA_LEN};
use crate::agent::reinforce::{eval_seeds, monotone_seconds, soo_instances};
use crate::agent::signal::{wrap_signal, SignalKind, SignalPayload, UniversalSignal};
use crate::agent::snapshot::Snapshot;
use crate::error::Error;
use crate::parallel::pool::WorkerPool;
use crate::problems::SuiteProblem;
use crate::seed::rng_from;
use crate::Result;

const PERTURB_STREAM: u64 = 0x7065_7274; // "pert"

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NeConfig {
    /// ES generations; one update and one snapshot each.
    #[serde(default = "default_generations")]
    pub generations: usize,
    /// Perturbation population λ (even: mirrored pairs).
    #[serde(default = "default_population")]
    pub population: usize,
    /// Perturbation scale σ_es.
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default = "default_learning_rate")]
    pub learning_rate: f64,
    /// Worker threads for fitness evaluation; 0 or 1 runs serially.
    #[serde(default)]
    pub workers: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Greedy evaluation seeds per instance; fixed across generations so
    /// fitness comparisons share randomness.
    #[serde(default = "default_eval_seeds")]
    pub eval_seeds: usize,
}

fn default_generations() -> usize {
    50
}
fn default_population() -> usize {
    16
}
fn default_sigma() -> f64 {
    0.1
}
fn default_learning_rate() -> f64 {
    0.02
}
fn default_seed() -> u64 {
    7
}
fn default_eval_seeds() -> usize {
    1
}

impl Default for NeConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults are complete")
    }
}

impl NeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 || self.population % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "population must be even and ≥ 2 (mirrored sampling), got {}",
                self.population
            )));
        }
        if !self.sigma.is_finite() || self.sigma <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sigma must be finite and > 0, got {}",
                self.sigma
            )));
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

/// Tie-averaged ranks mapped affinely onto [−0.5, 0.5].
///
/// Equal values share the mean of the ranks they span, so an all-equal batch
/// maps to exactly zero everywhere — and adding a constant to every fitness
/// changes nothing.
pub fn rank_normalize(fitness: &[f64]) -> Vec<f64> {
    let n = fitness.len();
    if n <= 1 {
        return vec![0.0; n];
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        fitness[a]
            .partial_cmp(&fitness[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && fitness[order[end + 1]] == fitness[order[start]] {
            end += 1;
        }
        let shared = (start + end) as f64 / 2.0;
        for j in start..=end {
            ranks[order[j]] = shared;
        }
        start = end + 1;
    }
    let span = (n - 1) as f64;
    ranks.into_iter().map(|r| r / span - 0.5).collect()
}

/// One ES update step: `θ += α/(λσ) · Σ_k u_k ε_k` with `u` the
/// rank-normalized fitnesses from the signal and `ε_k` the signed
/// perturbations (mirrored pairs included individually).
pub fn es_update(
    center: &MetaPolicy,
    perturbations: &[Vec<f64>],
    signal: &UniversalSignal,
    sigma: f64,
    learning_rate: f64,
) -> Result<MetaPolicy> {
    let pairs = signal.fitness().ok_or_else(|| {
        Error::Inconsistent("evolution update needs a fitness signal".into())
    })?;
    let lambda = perturbations.len();
    if pairs.len() != lambda {
        return Err(Error::Inconsistent(format!(
            "{} fitness values for {} perturbations",
            pairs.len(),
            lambda
        )));
    }
    let mut fitness = vec![f64::NAN; lambda];
    for &(k, f) in pairs {
        if k >= lambda || !fitness[k].is_nan() {
            return Err(Error::Inconsistent(format!(
                "fitness signal has bad or duplicate perturbation id {k}"
            )));
        }
        fitness[k] = f;
    }
    let weights = rank_normalize(&fitness);
    let mut direction = vec![0.0; THETA_LEN];
    for (eps, &u) in perturbations.iter().zip(&weights) {
        if eps.len() != THETA_LEN {
            return Err(Error::ThetaLength {
                expected: THETA_LEN,
                found: eps.len(),
            });
        }
        if u != 0.0 {
            for (d, e) in direction.iter_mut().zip(eps) {
                *d += u * e;
            }
        }
    }
    let scale = learning_rate / (lambda as f64 * sigma);
    Ok(center.perturbed(&direction, scale))
}

/// Draw λ signed perturbations as mirrored pairs `(+ε, −ε)` from the
/// generation's own RNG stream.
fn sample_mirrored(seed: u64, generation: usize, lambda: usize) -> Vec<Vec<f64>> {
    let mut rng = rng_from(&[seed, PERTURB_STREAM, generation as u64]);
    let mut out = Vec::with_capacity(lambda);
    for _ in 0..lambda / 2 {
        let eps: Vec<f64> = (0..THETA_LEN)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        let neg: Vec<f64> = eps.iter().map(|v| -v).collect();
        out.push(eps);
        out.push(neg);
    }
    out
}

/// Train with mirrored-sampling ES. Snapshot/callback semantics match the
/// policy-gradient trainer: snapshot 0 is the initial policy, then one per
/// generation.
pub fn train_ne(
    initial: &MetaPolicy,
    train_set: &[SuiteProblem],
    config: &NeConfig,
    mut on_snapshot: impl FnMut(&Snapshot) -> Result<()>,
) -> Result<Vec<Snapshot>> {
    config.validate()?;
    soo_instances(train_set, "evolution trainer")?; // validates problem types
    let eval = std::sync::Arc::new(eval_seeds(config.seed, config.eval_seeds));
    let shared_train: std::sync::Arc<Vec<SuiteProblem>> =
        std::sync::Arc::new(train_set.to_vec());
    let pool = (config.workers > 1).then(|| WorkerPool::new(config.workers));

    let start = std::time::Instant::now();
    let mut policy = initial.clone();
    let mut snapshots: Vec<Snapshot> = Vec::with_capacity(config.generations + 1);

    let push_snapshot = |generation: usize,
                             policy: &MetaPolicy,
                             snapshots: &mut Vec<Snapshot>,
                             on_snapshot: &mut dyn FnMut(&Snapshot) -> Result<()>|
     -> Result<()> {
        let score = meta_objective(policy, &shared_train, &eval)?;
        let seconds = monotone_seconds(
            start.elapsed().as_secs_f64(),
            snapshots.last().map(|s| s.cumulative_seconds),
        );
        let snapshot = Snapshot::new(generation, policy.theta().to_vec(), seconds, score);
        on_snapshot(&snapshot)?;
        snapshots.push(snapshot);
        Ok(())
    };

    push_snapshot(0, &policy, &mut snapshots, &mut on_snapshot)?;

    for generation in 1..=config.generations {
        let perturbations = sample_mirrored(config.seed, generation, config.population);
        let candidates: Vec<(usize, MetaPolicy)> = perturbations
            .iter()
            .enumerate()
            .map(|(k, eps)| (k, policy.perturbed(eps, config.sigma)))
            .collect();

        let fitness: Vec<(usize, f64)> = match &pool {
            Some(pool) => {
                let eval = std::sync::Arc::clone(&eval);
                let train = std::sync::Arc::clone(&shared_train);
                pool.run_batch(candidates, move |(k, candidate)| {
                    meta_objective(&candidate, &train, &eval).map(|f| (k, f))
                })
                .into_iter()
                .map(|outcome| {
                    outcome
                        .map_err(|msg| Error::Inconsistent(format!("fitness task panicked: {msg}")))?
                })
                .collect::<Result<Vec<_>>>()?
            }
            None => candidates
                .into_iter()
                .map(|(k, candidate)| {
                    meta_objective(&candidate, &shared_train, &eval).map(|f| (k, f))
                })
                .collect::<Result<Vec<_>>>()?,
        };

        let signal = wrap_signal(SignalKind::NeFitness, SignalPayload::Fitness(fitness))?;
        policy = es_update(
            &policy,
            &perturbations,
            &signal,
            config.sigma,
            config.learning_rate,
        )?;
        push_snapshot(generation, &policy, &mut snapshots, &mut on_snapshot)?;
    }
    Ok(snapshots)
}
