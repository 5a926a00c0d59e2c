//! Boundary Chern integrals ∫_{∂Y} ch(V±) by an integer-valued plaquette
//! method on a meshed sphere.
//!
//! Links along φ carry the exact line integral of the chart coefficient
//! c(θ)dφ; links along θ carry the chart transition e^{−ikφ} when they
//! cross the equatorial seam. Each plaquette contributes the principal
//! argument of its holonomy, taken around the boundary oriented positively
//! with respect to dθ∧dφ (outward normal), so the grand total is 2π times
//! the outward flux integer. ∂Y itself is oriented by the inward normal,
//! which reverses the sign of the boundary integrals.

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{CoreError, Result};
use crate::model::{chart_connections, Chart, ChartConnection, Chirality, MonopoleConfig};

/// Resolution floor below which plaquette integrality is not guaranteed for
/// the charge range the index computations target (|k| ≤ 6).
pub const MIN_THETA: usize = 40;
pub const MIN_PHI: usize = 80;

/// Distance from the ±π branch cut at which a plaquette phase is rejected.
pub const BRANCH_CUT_MARGIN: f64 = 1e-3;

/// Latitude–longitude mesh of the boundary sphere of radius R.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SphereMesh {
    pub n_theta: usize,
    pub n_phi: usize,
    pub radius: f64,
}

impl SphereMesh {
    pub fn new(n_theta: usize, n_phi: usize, radius: f64) -> Result<Self> {
        if n_theta < MIN_THETA || n_phi < MIN_PHI {
            return Err(CoreError::Input(format!(
                "mesh {n_theta}x{n_phi} below the {MIN_THETA}x{MIN_PHI} resolution floor"
            )));
        }
        if radius <= 0.0 || !radius.is_finite() {
            return Err(CoreError::Input("mesh radius must be positive".into()));
        }
        Ok(Self {
            n_theta,
            n_phi,
            radius,
        })
    }

    pub fn theta(&self, i: usize) -> f64 {
        PI * i as f64 / self.n_theta as f64
    }

    pub fn phi(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n_phi as f64
    }

    /// Cell vertex on the sphere.
    pub fn vertex(&self, i: usize, j: usize) -> [f64; 3] {
        let (th, ph) = (self.theta(i), self.phi(j));
        [
            self.radius * th.sin() * ph.cos(),
            self.radius * th.sin() * ph.sin(),
            self.radius * th.cos(),
        ]
    }
}

/// Partition of the diagonal components by the asymptotic sign of −iΦ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenbundleSplit {
    pub plus_components: Vec<usize>,
    pub minus_components: Vec<usize>,
}

/// Component j joins V⁺ iff its mass has the sign selected by the
/// chirality (a_j > 0 for D⁺, a_j < 0 for D⁻).
pub fn split_eigenbundles(cfg: &MonopoleConfig, chirality: Chirality) -> Result<EigenbundleSplit> {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (j, &a) in cfg.mass.values.iter().enumerate() {
        if a == 0.0 {
            return Err(CoreError::InvalidConfig(format!(
                "mass[{j}] = 0 violates the Råde condition"
            )));
        }
        let positive_side = match chirality {
            Chirality::Plus => a > 0.0,
            Chirality::Minus => a < 0.0,
        };
        if positive_side {
            plus.push(j);
        } else {
            minus.push(j);
        }
    }
    Ok(EigenbundleSplit {
        plus_components: plus,
        minus_components: minus,
    })
}

fn chart_for(theta: f64) -> Chart {
    if theta <= PI / 2.0 + 1e-12 {
        Chart::North
    } else {
        Chart::South
    }
}

fn coefficient(charts: &[ChartConnection], theta: f64) -> f64 {
    let which = chart_for(theta);
    charts
        .iter()
        .find(|c| c.chart == which)
        .map(|c| c.coefficient(theta))
        .unwrap_or(0.0)
}

fn charge_of(charts: &[ChartConnection]) -> i64 {
    charts.first().map(|c| c.charge).unwrap_or(0)
}

/// Outward flux integer of a two-chart connection, summed plaquette by
/// plaquette. Exact for |k| ≤ 6 at the resolution floor and stable under
/// mesh refinement.
pub fn plaquette_chern(mesh: &SphereMesh, charts: &[ChartConnection]) -> Result<i64> {
    let k = charge_of(charts);
    let dphi = 2.0 * PI / mesh.n_phi as f64;
    let row_sums: Vec<f64> = (0..mesh.n_theta)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let th_bot = mesh.theta(i);
            let th_top = mesh.theta(i + 1);
            let c_bot = coefficient(charts, th_bot);
            let c_top = coefficient(charts, th_top);
            let crossing = chart_for(th_bot) == Chart::North && chart_for(th_top) == Chart::South;
            let mut acc = 0.0;
            for j in 0..mesh.n_phi {
                // holonomy around the plaquette, positively oriented wrt
                // dθ∧dφ: up the left edge, along the top, down the right,
                // back along the bottom
                let mut phase = (c_top - c_bot) * dphi;
                if crossing {
                    // transition e^{−ikφ} on the two θ-edges
                    let (phi_l, phi_r) = (mesh.phi(j), mesh.phi(j + 1));
                    phase += -(k as f64) * phi_l + (k as f64) * phi_r;
                }
                // principal branch
                let arg = phase.sin().atan2(phase.cos());
                if arg.abs() > PI - BRANCH_CUT_MARGIN {
                    return Err(CoreError::Indeterminate(format!(
                        "plaquette ({i},{j}) phase {arg:.6} too close to ±π; refine the mesh"
                    )));
                }
                acc += arg;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = row_sums.iter().sum::<f64>() / (2.0 * PI);
    let rounded = total.round();
    if (total - rounded).abs() > 1e-6 {
        return Err(CoreError::Indeterminate(format!(
            "plaquette sum {total} is not integer to 1e-6"
        )));
    }
    Ok(rounded as i64)
}

/// ∫_{∂Y} ch of the selected sub-bundle with the inward-normal orientation:
/// minus the sum of the outward flux integers of its components.
pub fn boundary_ch(cfg: &MonopoleConfig, chirality: Chirality, mesh: &SphereMesh) -> Result<i64> {
    let split = split_eigenbundles(cfg, chirality)?;
    let mut total = 0i64;
    for j in split.plus_components {
        let charts = chart_connections(cfg, j);
        total += plaquette_chern(mesh, &charts)?;
    }
    Ok(-total)
}

/// Default boundary mesh used by the index computations.
pub fn default_mesh(cfg: &MonopoleConfig) -> SphereMesh {
    SphereMesh {
        n_theta: MIN_THETA,
        n_phi: MIN_PHI,
        radius: cfg.boundary_radius,
    }
}
