//! The ten base functions behind synthetic single-objective instances.
//!
//! Each function is defined on the shifted/rotated variable `z = R(x − o)` and
//! satisfies `f_base(0) = 0`, so the composed instance attains its optimum
//! `f_opt` exactly at the shift point `o`.

use crate::error::Error;
use crate::Result;

/// Identifier for one base-function family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Sphere,
    Ellipsoid,
    Rastrigin,
    Rosenbrock,
    Schwefel,
    Ackley,
    Griewank,
    DifferentPowers,
    SharpRidge,
    Katsuura,
}

impl Family {
    /// All families, in the canonical cycling order used by suite builders.
    pub const ALL: [Family; 10] = [
        Family::Sphere,
        Family::Ellipsoid,
        Family::Rastrigin,
        Family::Rosenbrock,
        Family::Schwefel,
        Family::Ackley,
        Family::Griewank,
        Family::DifferentPowers,
        Family::SharpRidge,
        Family::Katsuura,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Sphere => "sphere",
            Family::Ellipsoid => "ellipsoid",
            Family::Rastrigin => "rastrigin",
            Family::Rosenbrock => "rosenbrock",
            Family::Schwefel => "schwefel",
            Family::Ackley => "ackley",
            Family::Griewank => "griewank",
            Family::DifferentPowers => "different-powers",
            Family::SharpRidge => "sharp-ridge",
            Family::Katsuura => "katsuura",
        }
    }

    pub fn parse(name: &str) -> Result<Family> {
        let needle = name.trim().to_ascii_lowercase().replace('_', "-");
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == needle)
            .ok_or_else(|| Error::UnknownFamily(name.to_string()))
    }

    /// Evaluate the base function at `z` (already shifted and rotated).
    pub fn base_value(&self, z: &[f64]) -> f64 {
        let d = z.len();
        match self {
            Family::Sphere => z.iter().map(|v| v * v).sum(),
            Family::Ellipsoid => {
                // Conditioning ladder 10^0 .. 10^6 across coordinates.
                z.iter()
                    .enumerate()
                    .map(|(i, v)| 10f64.powf(6.0 * ladder(i, d)) * v * v)
                    .sum()
            }
            Family::Rastrigin => {
                10.0 * d as f64
                    + z.iter()
                        .map(|v| v * v - 10.0 * (2.0 * std::f64::consts::PI * v).cos())
                        .sum::<f64>()
            }
            Family::Rosenbrock => {
                // Shifted by +1 so the optimum sits at z = 0 rather than z = 1.
                let w: Vec<f64> = z.iter().map(|v| v + 1.0).collect();
                (0..d.saturating_sub(1))
                    .map(|i| {
                        100.0 * (w[i] * w[i] - w[i + 1]).powi(2) + (w[i] - 1.0).powi(2)
                    })
                    .sum()
            }
            Family::Schwefel => {
                // Schwefel's double-sum (problem 1.2): Σ_i (Σ_{j≤i} z_j)².
                let mut acc = 0.0;
                let mut prefix = 0.0;
                for v in z {
                    prefix += v;
                    acc += prefix * prefix;
                }
                acc
            }
            Family::Ackley => {
                let n = d as f64;
                let sq = z.iter().map(|v| v * v).sum::<f64>() / n;
                let cs = z
                    .iter()
                    .map(|v| (2.0 * std::f64::consts::PI * v).cos())
                    .sum::<f64>()
                    / n;
                -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + std::f64::consts::E
            }
            Family::Griewank => {
                let sum = z.iter().map(|v| v * v).sum::<f64>() / 4000.0;
                let prod: f64 = z
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                sum - prod + 1.0
            }
            Family::DifferentPowers => z
                .iter()
                .enumerate()
                .map(|(i, v)| v.abs().powf(2.0 + 4.0 * ladder(i, d)))
                .sum(),
            Family::SharpRidge => {
                let tail = z.iter().skip(1).map(|v| v * v).sum::<f64>();
                z[0] * z[0] + 100.0 * tail.sqrt()
            }
            Family::Katsuura => {
                // Highly rugged product form; 32 dyadic terms per coordinate.
                let n = d as f64;
                let exponent = 10.0 / n.powf(1.2);
                let mut prod = 1.0;
                for (i, v) in z.iter().enumerate() {
                    let mut inner = 0.0;
                    for j in 1..=32u32 {
                        let p = 2f64.powi(j as i32);
                        inner += (p * v - (p * v).round()).abs() / p;
                    }
                    prod *= (1.0 + (i + 1) as f64 * inner).powf(exponent);
                }
                10.0 / (n * n) * prod - 10.0 / (n * n)
            }
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Coordinate position rescaled to [0, 1]: `(i − 1)/(d − 1)` in 1-based terms.
/// Degenerates to 0 for one-dimensional problems.
fn ladder(i: usize, d: usize) -> f64 {
    if d <= 1 {
        0.0
    } else {
        i as f64 / (d - 1) as f64
    }
}
