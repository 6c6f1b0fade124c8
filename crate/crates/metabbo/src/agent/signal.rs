//! The single data object both trainers consume.
//!
//! Episode collection produces either trajectory batches (policy-gradient
//! training) or perturbation fitness lists (evolutionary training). Wrapping
//! both in one tagged signal keeps the trainers decoupled from the
//! environment: they never touch raw rollout output.

use crate::agent::episode::Trajectory;
use crate::error::Error;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignalKind {
    RlTrajectories,
    NeFitness,
}

impl SignalKind {
    pub fn name(&self) -> &'static str {
        match self {
            SignalKind::RlTrajectories => "rl-trajectories",
            SignalKind::NeFitness => "ne-fitness",
        }
    }
}

#[derive(Clone, Debug)]
pub enum SignalPayload {
    Trajectories(Vec<Trajectory>),
    /// `(perturbation index, fitness)` pairs.
    Fitness(Vec<(usize, f64)>),
}

impl SignalPayload {
    fn kind(&self) -> SignalKind {
        match self {
            SignalPayload::Trajectories(_) => SignalKind::RlTrajectories,
            SignalPayload::Fitness(_) => SignalKind::NeFitness,
        }
    }

    fn len(&self) -> usize {
        match self {
            SignalPayload::Trajectories(t) => t.len(),
            SignalPayload::Fitness(f) => f.len(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct UniversalSignal {
    kind: SignalKind,
    payload: SignalPayload,
}

impl UniversalSignal {
    pub fn kind(&self) -> SignalKind {
        self.kind
    }

    /// Number of payload items (trajectories or fitness pairs).
    pub fn count(&self) -> usize {
        self.payload.len()
    }

    pub fn trajectories(&self) -> Option<&[Trajectory]> {
        match &self.payload {
            SignalPayload::Trajectories(t) => Some(t),
            SignalPayload::Fitness(_) => None,
        }
    }

    pub fn fitness(&self) -> Option<&[(usize, f64)]> {
        match &self.payload {
            SignalPayload::Fitness(f) => Some(f),
            SignalPayload::Trajectories(_) => None,
        }
    }

    pub fn into_payload(self) -> SignalPayload {
        self.payload
    }
}

/// Tag and validate a raw learning signal.
pub fn wrap_signal(kind: SignalKind, payload: SignalPayload) -> Result<UniversalSignal> {
    if payload.len() == 0 {
        return Err(Error::EmptySignal);
    }
    if payload.kind() != kind {
        return Err(Error::SignalKindMismatch {
            declared: kind.name().into(),
            payload: payload.kind().name().into(),
        });
    }
    Ok(UniversalSignal { kind, payload })
}
