//! Direct-versus-transformed comparison over a grid of Farey arc points.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::direct::{false_theta_near_cusp, theta_near_cusp};
use super::transform::{false_theta_eval_transformed, theta_eval_transformed};
use super::ArcPoint;
use crate::error::{invalid, Result};
use crate::farey::arcs;

/// Which function the grid compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridTarget {
    Theta,
    FalseTheta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    /// `(r, M, alpha_j)` triples.
    pub configs: Vec<(i64, u64, u64)>,
    /// Farey orders `N`.
    pub orders: Vec<u64>,
    pub k_max: u64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            configs: vec![(1, 2, 1), (5, 4, 1), (3, 4, 2), (5, 3, 2)],
            orders: vec![10, 20],
            k_max: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub r: i64,
    pub m: u64,
    pub alpha: u64,
    pub point: ArcPoint,
    /// `|transformed - direct| / max(|direct|, 1)`.
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub target: GridTarget,
    pub points: usize,
    pub max_rel_err: f64,
    pub worst: Option<GridPoint>,
}

impl GridReport {
    pub fn within(&self, tol: f64) -> bool {
        self.max_rel_err <= tol
    }
}

/// Every `(config, arc point)` of the grid, with `Phi` at both arc ends and at 0.
pub fn grid_points(cfg: &GridConfig) -> Result<Vec<(i64, u64, u64, ArcPoint)>> {
    let mut out = Vec::new();
    for &n in &cfg.orders {
        for arc in arcs(n)? {
            if arc.k > cfg.k_max {
                continue;
            }
            let left = -*arc.theta_left.numer() as f64 / *arc.theta_left.denom() as f64;
            let right = *arc.theta_right.numer() as f64 / *arc.theta_right.denom() as f64;
            for phi in [left, 0.0, right] {
                // The arc ends sit exactly at 1/(k(k + k_j)) < 1/(kN).
                let p = ArcPoint::new(arc.h, arc.k, n, phi)?;
                for &(r, m, alpha) in &cfg.configs {
                    out.push((r, m, alpha, p));
                }
            }
        }
    }
    Ok(out)
}

/// The comparison at every grid point, in [`grid_points`] order.
pub fn transformation_grid_points(target: GridTarget, cfg: &GridConfig) -> Result<Vec<GridPoint>> {
    if cfg.configs.is_empty() || cfg.orders.is_empty() || cfg.k_max == 0 {
        return Err(invalid("the transformation grid is empty"));
    }
    grid_points(cfg)?
        .par_iter()
        .map(|&(r, m, alpha, p)| {
            let z = p.z();
            let (t, d) = match target {
                GridTarget::Theta => (
                    theta_eval_transformed(r, m, alpha, p.h, p.k, z)?.value,
                    theta_near_cusp(r, 2 * m, 2 * alpha, p.h, p.k, z)?.value,
                ),
                GridTarget::FalseTheta => (
                    false_theta_eval_transformed(r, m, alpha, p.h, p.k, z)?.value(),
                    false_theta_near_cusp(r, m, 2 * alpha, p.h, p.k, z)?.value,
                ),
            };
            Ok(GridPoint {
                r,
                m,
                alpha,
                point: p,
                rel_err: (t - d).norm() / d.norm().max(1.0),
            })
        })
        .collect()
}

/// Runs the comparison for `target` over the grid.
pub fn transformation_grid(target: GridTarget, cfg: &GridConfig) -> Result<GridReport> {
    let results = transformation_grid_points(target, cfg)?;
    let worst = results
        .iter()
        .copied()
        .max_by(|a, b| a.rel_err.total_cmp(&b.rel_err));
    Ok(GridReport {
        target,
        points: results.len(),
        max_rel_err: worst.map_or(0.0, |w| w.rel_err),
        worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid() {
        let cfg = GridConfig {
            configs: vec![(1, 2, 1), (5, 3, 2)],
            orders: vec![5],
            k_max: 5,
        };
        let t = transformation_grid(GridTarget::Theta, &cfg).unwrap();
        assert!(t.within(1e-8), "{t:?}");
        let f = transformation_grid(GridTarget::FalseTheta, &cfg).unwrap();
        assert!(f.within(1e-6), "{f:?}");
        // 10 fractions of order 5, three points each, two configs.
        assert_eq!(t.points, 60);
    }

    #[test]
    fn empty_grid_rejected() {
        let cfg = GridConfig {
            configs: vec![],
            ..GridConfig::default()
        };
        assert!(transformation_grid(GridTarget::Theta, &cfg).is_err());
    }
}
