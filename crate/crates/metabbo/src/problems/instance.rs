//! Budgeted single-objective problem instances.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Error;
use crate::problems::families::Family;
use crate::problems::rotation::{mat_vec, random_orthogonal};
use crate::seed::rng_from;
use crate::Result;

/// Search box shared by all single-objective families.
pub const SOO_BOUNDS: (f64, f64) = (-5.0, 5.0);

/// Stream tag separating an instance's construction draws from its
/// per-run evaluation-noise draws.
const NOISE_STREAM: u64 = 0x6e6f_6973; // "nois"

/// One concrete optimization problem: a base function composed with a seeded
/// shift and rotation, a per-run evaluation budget, and (optionally) Gaussian
/// observation noise.
///
/// Everything except the evaluation counter and the noise stream is immutable
/// after construction; per-run copies come from [`ProblemInstance::fresh_for_run`].
#[derive(Clone, Debug)]
pub struct ProblemInstance {
    family: Family,
    dim: usize,
    bounds: Vec<(f64, f64)>,
    shift: Vec<f64>,
    rotation: Vec<Vec<f64>>,
    f_opt: f64,
    noise_sigma: f64,
    max_fes: usize,
    fes_used: usize,
    instance_seed: u64,
    id: String,
    noise_rng: ChaCha8Rng,
}

impl ProblemInstance {
    /// Build an instance with a seeded shift (uniform in the inner 80% of the
    /// box) and a seeded rotation. The same arguments always produce a
    /// bit-identical instance.
    pub fn new(
        family: Family,
        dim: usize,
        seed: u64,
        noise_sigma: f64,
        max_fes: usize,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(format!(
                "problem dimension must be ≥ 1, got {dim}"
            )));
        }
        if max_fes == 0 {
            return Err(Error::InvalidParameter(
                "evaluation budget must be ≥ 1".into(),
            ));
        }
        if !(noise_sigma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise sigma must be ≥ 0, got {noise_sigma}"
            )));
        }
        let bounds = vec![SOO_BOUNDS; dim];
        let mut rng = rng_from(&[seed]);
        let shift: Vec<f64> = bounds
            .iter()
            .map(|(lo, hi)| {
                let margin = 0.1 * (hi - lo);
                rng.gen_range(lo + margin..hi - margin)
            })
            .collect();
        let rotation = random_orthogonal(dim, &mut rng);
        Ok(ProblemInstance {
            family,
            dim,
            bounds,
            shift,
            rotation,
            f_opt: 0.0,
            noise_sigma,
            max_fes,
            fes_used: 0,
            instance_seed: seed,
            id: format!("{}_{}d_s{}", family.name(), dim, seed),
            noise_rng: rng_from(&[seed, NOISE_STREAM]),
        })
    }

    /// Test/demo constructor: zero shift, identity rotation, noiseless.
    /// Keeps hand-computed values valid (`f(x) = f_base(x)`).
    pub fn with_identity_transform(family: Family, dim: usize, max_fes: usize) -> Result<Self> {
        let mut p = ProblemInstance::new(family, dim, 0, 0.0, max_fes)?;
        p.shift = vec![0.0; dim];
        p.rotation = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        p.id = format!("{}_{}d_identity", family.name(), dim);
        Ok(p)
    }

    /// Evaluate a batch of points, consuming one budget unit per row.
    ///
    /// Rows are clipped to the bounds before evaluation. Fails without
    /// consuming budget or advancing the noise stream when the batch exceeds
    /// the remaining budget.
    pub fn evaluate(&mut self, xs: &[Vec<f64>]) -> Result<Vec<f64>> {
        let n = xs.len();
        let remaining = self.remaining_budget();
        if n > remaining {
            return Err(Error::BudgetExhausted {
                requested: n,
                remaining,
            });
        }
        let mut out = Vec::with_capacity(n);
        for x in xs {
            let mut y = self.raw_value(x);
            if self.noise_sigma > 0.0 {
                let g: f64 = self.noise_rng.sample(StandardNormal);
                let g2: f64 = self.noise_rng.sample(StandardNormal);
                y = y * (1.0 + self.noise_sigma * g) + self.noise_sigma * g2;
            }
            out.push(y);
        }
        self.fes_used += n;
        Ok(out)
    }

    /// Single-point convenience wrapper around [`ProblemInstance::evaluate`].
    pub fn evaluate_one(&mut self, x: &[f64]) -> Result<f64> {
        Ok(self.evaluate(std::slice::from_ref(&x.to_vec()))?[0])
    }

    /// Noiseless, budget-free view of the objective (used by construction
    /// checks and tests; optimizer code must go through [`ProblemInstance::evaluate`]).
    pub fn raw_value(&self, x: &[f64]) -> f64 {
        let clipped = self.clipped(x);
        let centered: Vec<f64> = clipped
            .iter()
            .zip(&self.shift)
            .map(|(xi, oi)| xi - oi)
            .collect();
        let z = mat_vec(&self.rotation, &centered);
        self.family.base_value(&z) + self.f_opt
    }

    /// Copy of `x` clipped into the bounds, coordinate-wise.
    pub fn clipped(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.bounds)
            .map(|(v, (lo, hi))| v.clamp(*lo, *hi))
            .collect()
    }

    /// Per-run copy: zeroed evaluation counter and a noise stream derived from
    /// `(instance_seed, run_seed)`, so distinct runs see independent noise but
    /// identical landscapes.
    pub fn fresh_for_run(&self, run_seed: u64) -> Self {
        let mut p = self.clone();
        p.fes_used = 0;
        p.noise_rng = rng_from(&[self.instance_seed, NOISE_STREAM, run_seed]);
        p
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn rotation(&self) -> &[Vec<f64>] {
        &self.rotation
    }

    pub fn f_opt(&self) -> f64 {
        self.f_opt
    }

    pub fn noise_sigma(&self) -> f64 {
        self.noise_sigma
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

    pub fn instance_seed(&self) -> u64 {
        self.instance_seed
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Diagonal of the bounding box (used for diversity normalization).
    pub fn box_diagonal(&self) -> f64 {
        self.bounds
            .iter()
            .map(|(lo, hi)| (hi - lo) * (hi - lo))
            .sum::<f64>()
            .sqrt()
    }

    pub(crate) fn set_id(&mut self, id: String) {
        self.id = id;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::rotation::orthogonality_defect;

    #[test]
    fn optimum_at_shift_point_for_all_families() {
        for family in Family::ALL {
            let mut p = ProblemInstance::new(family, 10, 31, 0.0, 100).unwrap();
            let y = p.evaluate_one(&p.shift().to_vec()).unwrap();
            assert!(
                (y - p.f_opt()).abs() < 1e-9,
                "{family}: f(shift) = {y}, f_opt = {}",
                p.f_opt()
            );
        }
    }

    #[test]
    fn construction_is_bit_identical_and_seed_sensitive() {
        let a = ProblemInstance::new(Family::Ackley, 10, 7, 0.0, 100).unwrap();
        let b = ProblemInstance::new(Family::Ackley, 10, 7, 0.0, 100).unwrap();
        assert_eq!(a.shift(), b.shift());
        assert_eq!(a.rotation(), b.rotation());
        let c = ProblemInstance::new(Family::Ackley, 10, 8, 0.0, 100).unwrap();
        assert_ne!(a.shift(), c.shift());
    }

    #[test]
    fn shift_strictly_inside_bounds_and_rotation_orthogonal() {
        for seed in 0..20 {
            let p = ProblemInstance::new(Family::Rastrigin, 10, seed, 0.0, 10).unwrap();
            for (s, (lo, hi)) in p.shift().iter().zip(p.bounds()) {
                assert!(lo < s && s < hi, "shift {s} outside ({lo}, {hi})");
            }
            assert!(orthogonality_defect(p.rotation()) < 1e-9);
        }
    }

    #[test]
    fn identity_transform_matches_hand_values() {
        let mut sphere = ProblemInstance::with_identity_transform(Family::Sphere, 2, 10).unwrap();
        assert_eq!(sphere.evaluate_one(&[3.0, 4.0]).unwrap(), 25.0);
        let mut rast = ProblemInstance::with_identity_transform(Family::Rastrigin, 2, 10).unwrap();
        let y = rast.evaluate_one(&[1.0, 1.0]).unwrap();
        assert!((y - 2.0).abs() < 1e-9);
        let mut ell = ProblemInstance::with_identity_transform(Family::Ellipsoid, 3, 10).unwrap();
        assert_eq!(ell.evaluate_one(&[1.0, 1.0, 1.0]).unwrap(), 1_001_001.0);
    }

    #[test]
    fn budget_boundary_rejected_without_side_effects() {
        let mut p = ProblemInstance::new(Family::Sphere, 3, 5, 0.5, 10).unwrap();
        let batch: Vec<Vec<f64>> = (0..7).map(|i| vec![i as f64 * 0.1; 3]).collect();
        p.evaluate(&batch).unwrap();
        assert_eq!(p.fes_used(), 7);

        // 4 rows requested, 3 remaining → error, counter and noise stream untouched.
        let before = p.clone();
        let err = p.evaluate(&batch[0..4].to_vec()).unwrap_err();
        match err {
            Error::BudgetExhausted {
                requested,
                remaining,
            } => {
                assert_eq!((requested, remaining), (4, 3));
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert_eq!(p.fes_used(), 7);
        let a = p.evaluate(&batch[0..3].to_vec()).unwrap();
        let b = before.clone().evaluate(&batch[0..3].to_vec()).unwrap();
        assert_eq!(a, b, "failed call must not advance the noise stream");
        assert_eq!(p.remaining_budget(), 0);
    }

    #[test]
    fn noiseless_sigma_zero_equals_plain_instance() {
        let mut plain = ProblemInstance::new(Family::Griewank, 5, 11, 0.0, 50).unwrap();
        let mut zero_noise = ProblemInstance::new(Family::Griewank, 5, 11, 0.0, 50).unwrap();
        let xs: Vec<Vec<f64>> = (0..10).map(|i| vec![(i as f64) * 0.3 - 1.5; 5]).collect();
        assert_eq!(
            plain.evaluate(&xs).unwrap(),
            zero_noise.evaluate(&xs).unwrap()
        );
    }

    #[test]
    fn noisy_runs_differ_but_replays_match() {
        let base = ProblemInstance::new(Family::Sphere, 4, 3, 0.05, 50).unwrap();
        let xs: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64 * 0.2; 4]).collect();
        let mut run_a = base.fresh_for_run(1);
        let mut run_a2 = base.fresh_for_run(1);
        let mut run_b = base.fresh_for_run(2);
        let ya = run_a.evaluate(&xs).unwrap();
        assert_eq!(ya, run_a2.evaluate(&xs).unwrap());
        assert_ne!(ya, run_b.evaluate(&xs).unwrap());
    }

    #[test]
    fn out_of_bounds_rows_are_clipped_before_evaluation() {
        let mut p = ProblemInstance::with_identity_transform(Family::Sphere, 2, 10).unwrap();
        let wild = p.evaluate_one(&[50.0, -50.0]).unwrap();
        let edge = p.evaluate_one(&[5.0, -5.0]).unwrap();
        assert_eq!(wild, edge);
    }

    #[test]
    fn sphere_is_rotation_invariant_around_shift() {
        // For Sphere, f depends only on ‖x − o‖, so applying the instance's own
        // rotation to an offset must not change the value.
        let p = ProblemInstance::new(Family::Sphere, 6, 17, 0.0, 10).unwrap();
        let offset: Vec<f64> = (0..6).map(|i| 0.1 * (i as f64 + 1.0)).collect();
        let x_plain: Vec<f64> = p.shift().iter().zip(&offset).map(|(o, d)| o + d).collect();
        let rotated = mat_vec(p.rotation(), &offset);
        let x_rot: Vec<f64> = p.shift().iter().zip(&rotated).map(|(o, d)| o + d).collect();
        let y1 = p.raw_value(&x_plain);
        let y2 = p.raw_value(&x_rot);
        assert!((y1 - y2).abs() < 1e-9 * y1.abs().max(1.0));
    }

    #[test]
    fn invalid_construction_is_rejected() {
        assert!(ProblemInstance::new(Family::Sphere, 0, 1, 0.0, 10).is_err());
        assert!(ProblemInstance::new(Family::Sphere, 2, 1, -0.1, 10).is_err());
        assert!(ProblemInstance::new(Family::Sphere, 2, 1, f64::NAN, 10).is_err());
        assert!(ProblemInstance::new(Family::Sphere, 2, 1, 0.0, 0).is_err());
    }
}
