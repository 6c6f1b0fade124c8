//! The meta-policy: a small MLP mapping state features to a DE design.
//!
//! Parameters live in one flat vector `θ` so both trainers can treat the
//! policy as a point in ℝ^1541. The forward pass and the log-density gradient
//! (for REINFORCE) are hand-rolled — no autodiff dependency.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::agent::features::{StateFeatures, FEATURE_COUNT};
use crate::error::Error;
use crate::optimizers::{AlgorithmDesign, MutationStrategy};
use crate::seed::rng_from;
use crate::Result;

/// Layer widths: 9 features → two tanh layers of 32 → 5 outputs
/// (F_raw, CR_raw, three strategy logits).
pub const ARCHITECTURE: [usize; 4] = [FEATURE_COUNT, 32, 32, 5];

/// Standard deviation of the Gaussian exploration noise added to `F_raw` and
/// `CR_raw` in sample mode.
pub const SIGMA_ACTION: f64 = 0.1;

const D_IN: usize = ARCHITECTURE[0];
const HID: usize = ARCHITECTURE[1];
const D_OUT: usize = ARCHITECTURE[3];

const O_W1: usize = 0;
const O_B1: usize = O_W1 + HID * D_IN;
const O_W2: usize = O_B1 + HID;
const O_B2: usize = O_W2 + HID * HID;
const O_W3: usize = O_B2 + HID;
const O_B3: usize = O_W3 + D_OUT * HID;

/// Total parameter count: 9·32 + 32 + 32·32 + 32 + 32·5 + 5 = 1541.
pub const THETA_LEN: usize = O_B3 + D_OUT;

const STREAM_POLICY_INIT: u64 = 0x706f_6c69; // "poli"

/// A sampled meta-action in raw (pre-squash) coordinates, as needed to
/// re-evaluate its log-density under any parameter vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolicyAction {
    pub f_raw: f64,
    pub cr_raw: f64,
    pub strategy: usize,
}

/// Greedy vs. stochastic action selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionMode {
    Greedy,
    Sample,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetaPolicy {
    theta: Vec<f64>,
}

impl MetaPolicy {
    /// All-zero parameters: outputs F = CR = 0.5 and uniform strategy logits.
    pub fn zeros() -> Self {
        MetaPolicy {
            theta: vec![0.0; THETA_LEN],
        }
    }

    /// Seeded random initialization: hidden weights ~ N(0, 1/fan_in), output
    /// weights scaled down 100× so initial designs stay near (0.5, 0.5) with a
    /// near-uniform strategy distribution, and zero biases.
    pub fn seeded(seed: u64) -> Self {
        let mut rng = rng_from(&[seed, STREAM_POLICY_INIT]);
        let mut theta = vec![0.0; THETA_LEN];
        let mut fill = |range: std::ops::Range<usize>, std: f64, rng: &mut ChaCha8Rng| {
            for v in &mut theta[range] {
                let g: f64 = rng.sample(StandardNormal);
                *v = std * g;
            }
        };
        fill(O_W1..O_B1, 1.0 / (D_IN as f64).sqrt(), &mut rng);
        fill(O_W2..O_B2, 1.0 / (HID as f64).sqrt(), &mut rng);
        fill(O_W3..O_B3, 0.01 / (HID as f64).sqrt(), &mut rng);
        MetaPolicy { theta }
    }

    pub fn from_theta(theta: Vec<f64>) -> Result<Self> {
        if theta.len() != THETA_LEN {
            return Err(Error::ThetaLength {
                expected: THETA_LEN,
                found: theta.len(),
            });
        }
        if let Some(bad) = theta.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "policy parameter vector (contains {bad})"
            )));
        }
        Ok(MetaPolicy { theta })
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// `θ ← θ + scale·direction` (length-checked).
    pub fn add_scaled(&mut self, direction: &[f64], scale: f64) {
        assert_eq!(direction.len(), THETA_LEN);
        for (t, d) in self.theta.iter_mut().zip(direction) {
            *t += scale * d;
        }
    }

    /// A copy shifted by `scale·direction`.
    pub fn perturbed(&self, direction: &[f64], scale: f64) -> MetaPolicy {
        let mut p = self.clone();
        p.add_scaled(direction, scale);
        p
    }

    fn layers(&self, s: &[f64]) -> ([f64; HID], [f64; HID], [f64; D_OUT]) {
        let th = &self.theta;
        let mut h1 = [0.0; HID];
        for i in 0..HID {
            let row = &th[O_W1 + i * D_IN..O_W1 + (i + 1) * D_IN];
            let z: f64 = row.iter().zip(s).map(|(w, x)| w * x).sum::<f64>() + th[O_B1 + i];
            h1[i] = z.tanh();
        }
        let mut h2 = [0.0; HID];
        for i in 0..HID {
            let row = &th[O_W2 + i * HID..O_W2 + (i + 1) * HID];
            let z: f64 = row.iter().zip(&h1).map(|(w, x)| w * x).sum::<f64>() + th[O_B2 + i];
            h2[i] = z.tanh();
        }
        let mut out = [0.0; D_OUT];
        for i in 0..D_OUT {
            let row = &th[O_W3 + i * HID..O_W3 + (i + 1) * HID];
            out[i] = row.iter().zip(&h2).map(|(w, x)| w * x).sum::<f64>() + th[O_B3 + i];
        }
        (h1, h2, out)
    }

    /// Raw network outputs `(F_raw, CR_raw, logit₀, logit₁, logit₂)`.
    pub fn forward(&self, s: &StateFeatures) -> [f64; D_OUT] {
        self.layers(s.as_slice()).2
    }

    /// Deterministic design: sigmoid means for F/CR, argmax strategy
    /// (ties break to the lowest index).
    pub fn act_greedy(&self, s: &StateFeatures) -> AlgorithmDesign {
        let out = self.forward(s);
        let mut k = 0;
        for j in 1..3 {
            if out[2 + j] > out[2 + k] {
                k = j;
            }
        }
        AlgorithmDesign::clamped(
            sigmoid(out[0]),
            sigmoid(out[1]),
            MutationStrategy::from_index(k).expect("index < 3"),
        )
    }

    /// Stochastic design: Gaussian noise (σ = [`SIGMA_ACTION`]) on the raw
    /// F/CR heads before the sigmoid, softmax-sampled strategy. Returns the
    /// executed design, the raw action, and its joint log-density.
    pub fn act_sample(
        &self,
        s: &StateFeatures,
        rng: &mut ChaCha8Rng,
    ) -> (AlgorithmDesign, PolicyAction, f64) {
        let out = self.forward(s);
        let gf: f64 = rng.sample(StandardNormal);
        let gcr: f64 = rng.sample(StandardNormal);
        let f_raw = out[0] + SIGMA_ACTION * gf;
        let cr_raw = out[1] + SIGMA_ACTION * gcr;
        let probs = softmax3(&out);
        let u: f64 = rng.gen();
        let mut k = 2; // falls through to the last strategy on rounding
        let mut acc = 0.0;
        for (j, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                k = j;
                break;
            }
        }
        let action = PolicyAction {
            f_raw,
            cr_raw,
            strategy: k,
        };
        let logp = self.log_prob(s, &action);
        let design = AlgorithmDesign::clamped(
            sigmoid(f_raw),
            sigmoid(cr_raw),
            MutationStrategy::from_index(k).expect("index < 3"),
        );
        (design, action, logp)
    }

    /// Joint log-density of a raw action: two Gaussians around the F/CR heads
    /// plus the categorical strategy log-probability.
    pub fn log_prob(&self, s: &StateFeatures, action: &PolicyAction) -> f64 {
        let out = self.forward(s);
        gaussian_logpdf(action.f_raw, out[0])
            + gaussian_logpdf(action.cr_raw, out[1])
            + log_softmax3(&out)[action.strategy]
    }

    /// Log-density and its analytic gradient with respect to `θ`
    /// (hand-rolled backpropagation through the two tanh layers).
    pub fn log_prob_grad(&self, s: &StateFeatures, action: &PolicyAction) -> (f64, Vec<f64>) {
        let x = s.as_slice();
        let (h1, h2, out) = self.layers(x);

        let logp = gaussian_logpdf(action.f_raw, out[0])
            + gaussian_logpdf(action.cr_raw, out[1])
            + log_softmax3(&out)[action.strategy];

        // ∂logp/∂out: Gaussian heads give (x' − μ)/σ²; the categorical head
        // gives onehot − softmax.
        let probs = softmax3(&out);
        let mut d_out = [0.0; D_OUT];
        d_out[0] = (action.f_raw - out[0]) / (SIGMA_ACTION * SIGMA_ACTION);
        d_out[1] = (action.cr_raw - out[1]) / (SIGMA_ACTION * SIGMA_ACTION);
        for j in 0..3 {
            d_out[2 + j] = if j == action.strategy { 1.0 } else { 0.0 } - probs[j];
        }

        let th = &self.theta;
        let mut grad = vec![0.0; THETA_LEN];

        // Output layer.
        for i in 0..D_OUT {
            grad[O_B3 + i] = d_out[i];
            for j in 0..HID {
                grad[O_W3 + i * HID + j] = d_out[i] * h2[j];
            }
        }
        let mut d_h2 = [0.0; HID];
        for j in 0..HID {
            let mut acc = 0.0;
            for i in 0..D_OUT {
                acc += th[O_W3 + i * HID + j] * d_out[i];
            }
            d_h2[j] = acc * (1.0 - h2[j] * h2[j]); // through tanh
        }

        // Second hidden layer.
        for i in 0..HID {
            grad[O_B2 + i] = d_h2[i];
            for j in 0..HID {
                grad[O_W2 + i * HID + j] = d_h2[i] * h1[j];
            }
        }
        let mut d_h1 = [0.0; HID];
        for j in 0..HID {
            let mut acc = 0.0;
            for i in 0..HID {
                acc += th[O_W2 + i * HID + j] * d_h2[i];
            }
            d_h1[j] = acc * (1.0 - h1[j] * h1[j]);
        }

        // First hidden layer.
        for i in 0..HID {
            grad[O_B1 + i] = d_h1[i];
            for j in 0..D_IN {
                grad[O_W1 + i * D_IN + j] = d_h1[i] * x[j];
            }
        }

        (logp, grad)
    }
}

/// Mode-dispatching forward: greedy returns the deterministic design with the
/// log-density its raw action would have; sample draws from the stochastic
/// policy.
pub fn policy_forward(
    policy: &MetaPolicy,
    s: &StateFeatures,
    mode: ActionMode,
    rng: &mut ChaCha8Rng,
) -> (AlgorithmDesign, PolicyAction, f64) {
    match mode {
        ActionMode::Greedy => {
            let out = policy.forward(s);
            let design = policy.act_greedy(s);
            let action = PolicyAction {
                f_raw: out[0],
                cr_raw: out[1],
                strategy: design.strategy.index(),
            };
            let logp = policy.log_prob(s, &action);
            (design, action, logp)
        }
        ActionMode::Sample => policy.act_sample(s, rng),
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn gaussian_logpdf(x: f64, mean: f64) -> f64 {
    let z = (x - mean) / SIGMA_ACTION;
    -0.5 * z * z - SIGMA_ACTION.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln()
}

fn softmax3(out: &[f64; D_OUT]) -> [f64; 3] {
    let logits = &out[2..5];
    let m = logits.iter().cloned().fold(f64::MIN, f64::max);
    let exps = [
        (logits[0] - m).exp(),
        (logits[1] - m).exp(),
        (logits[2] - m).exp(),
    ];
    let sum: f64 = exps.iter().sum();
    [exps[0] / sum, exps[1] / sum, exps[2] / sum]
}

fn log_softmax3(out: &[f64; D_OUT]) -> [f64; 3] {
    let logits = &out[2..5];
    let m = logits.iter().cloned().fold(f64::MIN, f64::max);
    let lse = m + ((logits[0] - m).exp() + (logits[1] - m).exp() + (logits[2] - m).exp()).ln();
    [logits[0] - lse, logits[1] - lse, logits[2] - lse]
}
