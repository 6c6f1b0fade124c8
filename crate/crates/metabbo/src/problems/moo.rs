//! Bi-objective ZDT problem instances.

use crate::error::Error;
use crate::Result;

/// The three supported ZDT variants. All are two-objective minimization
/// problems on the unit box with `f1 ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZdtVariant {
    Zdt1,
    Zdt2,
    Zdt3,
}

impl ZdtVariant {
    pub const ALL: [ZdtVariant; 3] = [ZdtVariant::Zdt1, ZdtVariant::Zdt2, ZdtVariant::Zdt3];

    pub fn name(&self) -> &'static str {
        match self {
            ZdtVariant::Zdt1 => "zdt1",
            ZdtVariant::Zdt2 => "zdt2",
            ZdtVariant::Zdt3 => "zdt3",
        }
    }

    pub fn parse(name: &str) -> Result<ZdtVariant> {
        let needle = name.trim().to_ascii_lowercase();
        ZdtVariant::ALL
            .iter()
            .copied()
            .find(|v| v.name() == needle)
            .ok_or_else(|| Error::UnknownFamily(name.to_string()))
    }
}

/// A budgeted bi-objective instance. Immutable except the evaluation counter.
#[derive(Clone, Debug)]
pub struct MooInstance {
    variant: ZdtVariant,
    dim: usize,
    max_fes: usize,
    fes_used: usize,
    reference_point: [f64; 2],
    ideal_point: [f64; 2],
    id: String,
}

impl MooInstance {
    pub fn new(variant: ZdtVariant, dim: usize, max_fes: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!(
                "ZDT needs dimension ≥ 2, got {dim}"
            )));
        }
        if max_fes == 0 {
            return Err(Error::InvalidParameter(
                "evaluation budget must be ≥ 1".into(),
            ));
        }
        // ZDT3's second objective dips below zero (to ≈ −0.77 on the front),
        // hence the −1 floor in its ideal corner.
        let ideal_point = match variant {
            ZdtVariant::Zdt3 => [0.0, -1.0],
            _ => [0.0, 0.0],
        };
        Ok(MooInstance {
            variant,
            dim,
            max_fes,
            fes_used: 0,
            reference_point: [11.0, 11.0],
            ideal_point,
            id: format!("{}_{}d", variant.name(), dim),
        })
    }

    /// Evaluate a batch of points, consuming one budget unit per row.
    /// Rows are clipped into the unit box first.
    pub fn evaluate(&mut self, xs: &[Vec<f64>]) -> Result<Vec<[f64; 2]>> {
        let n = xs.len();
        let remaining = self.remaining_budget();
        if n > remaining {
            return Err(Error::BudgetExhausted {
                requested: n,
                remaining,
            });
        }
        let out = xs.iter().map(|x| self.raw_value(x)).collect();
        self.fes_used += n;
        Ok(out)
    }

    /// Budget-free objective computation on the clipped point.
    pub fn raw_value(&self, x: &[f64]) -> [f64; 2] {
        let x: Vec<f64> = x.iter().map(|v| v.clamp(0.0, 1.0)).collect();
        let f1 = x[0];
        let tail_mean = x[1..].iter().sum::<f64>() / (self.dim - 1) as f64;
        let g = 1.0 + 9.0 * tail_mean;
        let ratio = f1 / g;
        let h = match self.variant {
            ZdtVariant::Zdt1 => 1.0 - ratio.sqrt(),
            ZdtVariant::Zdt2 => 1.0 - ratio * ratio,
            ZdtVariant::Zdt3 => {
                1.0 - ratio.sqrt() - ratio * (10.0 * std::f64::consts::PI * f1).sin()
            }
        };
        [f1, g * h]
    }

    pub fn fresh_for_run(&self, _run_seed: u64) -> Self {
        let mut p = self.clone();
        p.fes_used = 0;
        p
    }

    pub fn variant(&self) -> ZdtVariant {
        self.variant
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bounds(&self) -> Vec<(f64, f64)> {
        vec![(0.0, 1.0); self.dim]
    }

    pub fn max_fes(&self) -> usize {
        self.max_fes
    }

    pub fn fes_used(&self) -> usize {
        self.fes_used
    }

    pub fn remaining_budget(&self) -> usize {
        self.max_fes - self.fes_used
    }

    pub fn reference_point(&self) -> [f64; 2] {
        self.reference_point
    }

    pub fn ideal_point(&self) -> [f64; 2] {
        self.ideal_point
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub(crate) fn set_id(&mut self, id: String) {
        self.id = id;
    }
}
