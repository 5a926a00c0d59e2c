//! Configuration data for superposed abelian Dirac monopoles: singular
//! points with integer weight vectors, asymptotic mass data, and the
//! two-chart connections their boundary restrictions induce.
//!
//! All model fields are direct sums of diagonal flat Dirac monopoles plus a
//! constant mass term; the Higgs field of component j at distance R_p from
//! each singular point p is i·(a_j + Σ_p k_{p,j}/(2R_p)).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// The two Dirac operators D± = D_A ± Φ; adjoint to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chirality {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Chirality {
    /// +1 for D⁺, −1 for D⁻.
    pub fn sign(self) -> i64 {
        match self {
            Chirality::Plus => 1,
            Chirality::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Chirality::Plus => Chirality::Minus,
            Chirality::Minus => Chirality::Plus,
        }
    }
}

impl std::fmt::Display for Chirality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Chirality::Plus => "+",
            Chirality::Minus => "-",
        })
    }
}

/// Integer line-bundle degrees (k_i), one per component of the rank-r sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightVector {
    pub entries: Vec<i64>,
}

impl WeightVector {
    pub fn new(entries: Vec<i64>) -> Self {
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// An isolated Dirac-type singularity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub position: [f64; 3],
    pub weights: WeightVector,
}

/// Asymptotic eigenvalues a_j of −iΦ at the boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassData {
    pub values: Vec<f64>,
}

/// Whether the configuration models a closed 3-fold (total weight zero) or
/// a complete one with a boundary sphere carrying mass data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConfigMode {
    #[serde(rename = "compact-model")]
    CompactModel,
    #[serde(rename = "complete-with-boundary")]
    CompleteWithBoundary,
}

/// Full configuration record. The boundary sphere is centered at the
/// origin; configs must be authored accordingly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonopoleConfig {
    pub rank: usize,
    pub mode: ConfigMode,
    pub singularities: Vec<SingularPoint>,
    pub mass: MassData,
    pub boundary_radius: f64,
}

/// One chart of the standard two-chart abelian connection of charge k on a
/// sphere, with coefficient c(θ) multiplying dφ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartConnection {
    pub charge: i64,
    pub chart: Chart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    #[serde(rename = "north")]
    North,
    #[serde(rename = "south")]
    South,
}

impl ChartConnection {
    /// Coefficient of dφ at colatitude θ: north (k/2)(1−cosθ), south
    /// −(k/2)(1+cosθ). The two differ by the transition winding k.
    pub fn coefficient(&self, theta: f64) -> f64 {
        let k = self.charge as f64;
        match self.chart {
            Chart::North => 0.5 * k * (1.0 - theta.cos()),
            Chart::South => -0.5 * k * (1.0 + theta.cos()),
        }
    }
}

/// Outcome of validating one configuration; violations are collected, not
/// thrown.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(CoreError::InvalidConfig(self.violations.join("; ")))
        }
    }
}

impl MonopoleConfig {
    /// Total weight of component j over all singular points: the outward
    /// boundary flux of that component.
    pub fn component_charge(&self, j: usize) -> i64 {
        self.singularities
            .iter()
            .map(|p| p.weights.entries[j])
            .sum()
    }

    pub fn total_weight(&self) -> i64 {
        (0..self.rank).map(|j| self.component_charge(j)).sum()
    }

    /// Σ over all points of the positive weight entries.
    pub fn positive_weight_sum(&self) -> i64 {
        self.singularities
            .iter()
            .flat_map(|p| p.weights.entries.iter())
            .filter(|&&k| k > 0)
            .sum()
    }

    /// Σ over all points of the negative weight entries.
    pub fn negative_weight_sum(&self) -> i64 {
        self.singularities
            .iter()
            .flat_map(|p| p.weights.entries.iter())
            .filter(|&&k| k < 0)
            .sum()
    }

    /// Weight vectors grouped by point, as consumed by the equivariant
    /// fixed-point formula.
    pub fn weights_by_point(&self) -> Vec<Vec<i64>> {
        self.singularities
            .iter()
            .map(|p| p.weights.entries.clone())
            .collect()
    }
}

/// Checks every structural invariant of the configuration and returns the
/// list of violations (empty when valid).
pub fn validate_config(cfg: &MonopoleConfig) -> ValidationReport {
    let mut rep = ValidationReport::default();
    if cfg.rank == 0 {
        rep.violations.push("rank must be positive".into());
        return rep;
    }
    for (i, p) in cfg.singularities.iter().enumerate() {
        if p.weights.len() != cfg.rank {
            rep.violations.push(format!(
                "singularities[{i}]: weight vector length {} ≠ rank {}",
                p.weights.len(),
                cfg.rank
            ));
        }
        if p.position.iter().any(|c| !c.is_finite()) {
            rep.violations
                .push(format!("singularities[{i}]: non-finite position"));
        }
    }
    // coincident points rejected with exact comparison: configs are
    // authored, not measured
    for i in 0..cfg.singularities.len() {
        for j in i + 1..cfg.singularities.len() {
            if cfg.singularities[i].position == cfg.singularities[j].position {
                rep.violations
                    .push(format!("singularities[{i}] and [{j}] coincide"));
            }
        }
    }
    if cfg.mass.values.len() != cfg.rank {
        rep.violations.push(format!(
            "mass: length {} ≠ rank {}",
            cfg.mass.values.len(),
            cfg.rank
        ));
    }
    if cfg.boundary_radius <= 0.0 || !cfg.boundary_radius.is_finite() {
        rep.violations
            .push("boundary_radius must be positive".into());
    } else {
        let max_dist = cfg
            .singularities
            .iter()
            .map(|p| norm3(p.position))
            .fold(0.0f64, f64::max);
        if cfg.boundary_radius <= max_dist {
            rep.violations.push(format!(
                "boundary_radius {} does not enclose all singularities (max distance {max_dist})",
                cfg.boundary_radius
            ));
        }
    }
    match cfg.mode {
        ConfigMode::CompactModel => {
            if cfg
                .singularities
                .iter()
                .all(|p| p.weights.len() == cfg.rank)
            {
                let total = cfg.total_weight();
                if total != 0 {
                    rep.violations
                        .push(format!("total weight {total} ≠ 0 in compact-model mode"));
                }
            }
        }
        ConfigMode::CompleteWithBoundary => {
            for (j, &a) in cfg.mass.values.iter().enumerate() {
                if a == 0.0 || !a.is_finite() {
                    rep.violations.push(format!(
                        "mass[{j}] = {a}: zero mass violates the Råde condition"
                    ));
                }
            }
        }
    }
    rep
}

fn norm3(p: [f64; 3]) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

fn dist3(a: [f64; 3], b: [f64; 3]) -> f64 {
    norm3([a[0] - b[0], a[1] - b[1], a[2] - b[2]])
}

/// Evaluates the Higgs field at x: the diagonal skew-Hermitian matrix
/// i·diag(a_j + Σ_p k_{p,j}/(2·dist(x,p))).
pub fn higgs_sampler(cfg: &MonopoleConfig, x: [f64; 3]) -> Result<Vec<Complex64>> {
    let mut diag = vec![0.0f64; cfg.rank];
    for (j, d) in diag.iter_mut().enumerate() {
        *d = cfg.mass.values[j];
    }
    for p in &cfg.singularities {
        let d = dist3(x, p.position);
        if d == 0.0 {
            return Err(CoreError::Domain(format!(
                "Higgs field evaluated at the singular point {:?}",
                p.position
            )));
        }
        for (j, &k) in p.weights.entries.iter().enumerate() {
            diag[j] += k as f64 / (2.0 * d);
        }
    }
    Ok(diag.into_iter().map(|v| Complex64::new(0.0, v)).collect())
}

/// The standard two-chart connection of total charge d_j = Σ_p k_{p,j} on
/// the boundary sphere of component j.
pub fn chart_connections(cfg: &MonopoleConfig, component: usize) -> Vec<ChartConnection> {
    let charge = cfg.component_charge(component);
    vec![
        ChartConnection {
            charge,
            chart: Chart::North,
        },
        ChartConnection {
            charge,
            chart: Chart::South,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_point_cfg(weights: Vec<i64>, mass: Vec<f64>, mode: ConfigMode) -> MonopoleConfig {
        let rank = weights.len();
        MonopoleConfig {
            rank,
            mode,
            singularities: vec![SingularPoint {
                position: [0.0, 0.0, 0.0],
                weights: WeightVector::new(weights),
            }],
            mass: MassData { values: mass },
            boundary_radius: 1.5,
        }
    }

    #[test]
    fn compact_with_nonzero_total_weight_rejected() {
        let cfg = single_point_cfg(vec![1], vec![0.0], ConfigMode::CompactModel);
        let rep = validate_config(&cfg);
        assert!(!rep.is_ok());
        assert!(rep.violations.iter().any(|v| v.contains("total weight 1")));
    }

    #[test]
    fn compact_balanced_ok() {
        let cfg = single_point_cfg(vec![1, -1], vec![0.0, 0.0], ConfigMode::CompactModel);
        assert!(validate_config(&cfg).is_ok());
    }

    #[test]
    fn zero_mass_rejected_for_rade_configs() {
        let cfg = single_point_cfg(vec![1], vec![0.0], ConfigMode::CompleteWithBoundary);
        let rep = validate_config(&cfg);
        assert!(rep.violations.iter().any(|v| v.contains("Råde condition")));
    }

    #[test]
    fn boundary_must_enclose_singularities() {
        let mut cfg = single_point_cfg(vec![1], vec![1.0], ConfigMode::CompleteWithBoundary);
        cfg.singularities[0].position = [2.0, 0.0, 0.0];
        let rep = validate_config(&cfg);
        assert!(rep.violations.iter().any(|v| v.contains("enclose")));
    }

    #[test]
    fn coincident_points_rejected() {
        let mut cfg = single_point_cfg(vec![1, -1], vec![0.0, 0.0], ConfigMode::CompactModel);
        cfg.singularities.push(cfg.singularities[0].clone());
        let rep = validate_config(&cfg);
        assert!(rep.violations.iter().any(|v| v.contains("coincide")));
    }

    #[test]
    fn higgs_flat_monopole_weight_one() {
        // Φ = i·k/2r at |x| = 1 for a = 0, k = 1
        let cfg = single_point_cfg(vec![1], vec![1.0], ConfigMode::CompleteWithBoundary);
        let mut cfg0 = cfg;
        cfg0.mass.values[0] = 0.0;
        let phi = higgs_sampler(&cfg0, [1.0, 0.0, 0.0]).unwrap();
        assert!((phi[0] - Complex64::new(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn higgs_twisted_and_rank_two() {
        let cfg = single_point_cfg(vec![2], vec![3.0], ConfigMode::CompleteWithBoundary);
        let phi = higgs_sampler(&cfg, [0.0, 1.0, 0.0]).unwrap();
        assert!((phi[0] - Complex64::new(0.0, 4.0)).norm() < 1e-15);

        let cfg2 = single_point_cfg(vec![1, -1], vec![0.0, 0.0], ConfigMode::CompactModel);
        let phi2 = higgs_sampler(&cfg2, [0.0, 0.0, 2.0]).unwrap();
        assert!((phi2[0] - Complex64::new(0.0, 0.25)).norm() < 1e-15);
        assert!((phi2[1] - Complex64::new(0.0, -0.25)).norm() < 1e-15);
    }

    #[test]
    fn higgs_is_diagonal_skew_hermitian() {
        let cfg = single_point_cfg(
            vec![3, -2],
            vec![0.5, -0.5],
            ConfigMode::CompleteWithBoundary,
        );
        let phi = higgs_sampler(&cfg, [0.3, -0.2, 0.9]).unwrap();
        for v in phi {
            assert_eq!(v.re, 0.0);
        }
    }

    #[test]
    fn higgs_rejects_singular_point() {
        let cfg = single_point_cfg(vec![1], vec![1.0], ConfigMode::CompleteWithBoundary);
        assert!(matches!(
            higgs_sampler(&cfg, [0.0, 0.0, 0.0]),
            Err(CoreError::Domain(_))
        ));
    }

    #[test]
    fn higgs_leading_term_bounded_near_singularity() {
        // |−iΦ_jj − Σ k_{p,j}/(2R_p)| stays bounded as R_p → 0
        let mut cfg = single_point_cfg(vec![2], vec![0.7], ConfigMode::CompleteWithBoundary);
        cfg.singularities.push(SingularPoint {
            position: [1.0, 0.0, 0.0],
            weights: WeightVector::new(vec![-1]),
        });
        for radius in [1e-2, 1e-4, 1e-6, 1e-8] {
            let x = [0.0, 0.0, radius];
            let phi = higgs_sampler(&cfg, x).unwrap();
            let leading = 2.0 / (2.0 * radius);
            let rem = (phi[0].im - leading).abs();
            assert!(rem < 2.0, "remainder {rem} at radius {radius}");
        }
    }

    #[test]
    fn chart_charges_add_over_points() {
        let mut cfg = single_point_cfg(vec![1], vec![1.0], ConfigMode::CompleteWithBoundary);
        cfg.singularities.push(SingularPoint {
            position: [0.5, 0.0, 0.0],
            weights: WeightVector::new(vec![1]),
        });
        let charts = chart_connections(&cfg, 0);
        assert_eq!(charts.len(), 2);
        assert!(charts.iter().all(|c| c.charge == 2));
    }

    #[test]
    fn chart_coefficients_vanish_at_their_pole() {
        let c = ChartConnection {
            charge: 3,
            chart: Chart::North,
        };
        assert!(c.coefficient(0.0).abs() < 1e-15);
        let s = ChartConnection {
            charge: 3,
            chart: Chart::South,
        };
        assert!(s.coefficient(std::f64::consts::PI).abs() < 1e-12);
        // transition jump is the winding k at any colatitude
        for theta in [0.3, 1.0, 2.0] {
            assert!((c.coefficient(theta) - s.coefficient(theta) - 3.0).abs() < 1e-12);
        }
    }
}
