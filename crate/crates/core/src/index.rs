//! The index formulas for the two configuration classes and their mutual
//! cross-checks.
//!
//! For a complete-with-boundary configuration the index of D± is computed
//! twice, as ∓(Σ_{k>0} k + ∫ch(V⁺)) and as ±(Σ_{k<0} k + ∫ch(V⁻)); the
//! Stokes pairing between interior weights and boundary degrees makes the
//! two agree, and the implementation treats disagreement as an internal error.
//! For a compact-model configuration the boundary term is absent and the
//! value ∓Σ_{k>0} k is compared against the equivariant fixed-point
//! evaluation. Mode-level shooting indices corroborate the single-monopole
//! values at finite truncation.

use serde::Serialize;

use crate::chern::{boundary_ch, default_mesh, plaquette_chern, SphereMesh};
use crate::equivariant::lefschetz_symbolic;
use crate::error::{CoreError, Result};
use crate::model::{
    chart_connections, validate_config, Chirality, ConfigMode, MassData, MonopoleConfig,
    SingularPoint, WeightVector,
};
use crate::radial::{mode_operator, shooting_index, shooting_r_max, DECAY_TOL};

/// Index value with the two expressions that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct IndexReport {
    pub chirality: Chirality,
    /// The weight sum entering expression 1 (Σ_{k>0} k for D⁺).
    pub weight_term: i64,
    /// The boundary integral entering expression 1 (0 in compact mode).
    pub boundary_term: i64,
    pub total: i64,
    /// Expression-1 total equals expression-2 total (and the equivariant
    /// value in compact mode).
    pub consistency: bool,
    pub mode_verification: Option<ModeSumSummary>,
}

/// Mode-level corroboration of a single-monopole index.
#[derive(Debug, Clone, Serialize)]
pub struct ModeSumSummary {
    pub q_max: u32,
    /// (q, contribution); the q = 0 entry is already weighted by the
    /// angular multiplicities of the harmonic rows.
    pub per_mode: Vec<(u32, i64)>,
    pub mode_sum: i64,
    pub agrees: bool,
}

/// Evaluates the index of D^± for the configuration by both displayed
/// expressions and cross-checks them.
pub fn main_index(cfg: &MonopoleConfig, chirality: Chirality) -> Result<IndexReport> {
    main_index_with_mesh(cfg, chirality, &default_mesh(cfg))
}

pub fn main_index_with_mesh(
    cfg: &MonopoleConfig,
    chirality: Chirality,
    mesh: &SphereMesh,
) -> Result<IndexReport> {
    validate_config(cfg).into_result()?;
    let sign = chirality.sign();
    match cfg.mode {
        ConfigMode::CompactModel => {
            let total = -sign * cfg.positive_weight_sum();
            let equivariant = lefschetz_symbolic(&cfg.weights_by_point(), cfg.rank, chirality)?;
            if equivariant != total {
                return Err(CoreError::Internal(format!(
                    "equivariant value {equivariant} disagrees with the weight sum {total}"
                )));
            }
            Ok(IndexReport {
                chirality,
                weight_term: cfg.positive_weight_sum(),
                boundary_term: 0,
                total,
                consistency: true,
                mode_verification: None,
            })
        }
        ConfigMode::CompleteWithBoundary => {
            // the two sub-bundles are fixed by the mass signs; chirality
            // only flips the overall sign of the formula
            let ch_plus = boundary_ch(cfg, Chirality::Plus, mesh)?;
            let ch_minus = boundary_ch(cfg, Chirality::Minus, mesh)?;
            let expr1 = -sign * (cfg.positive_weight_sum() + ch_plus);
            let expr2 = sign * (cfg.negative_weight_sum() + ch_minus);
            if expr1 != expr2 {
                return Err(CoreError::Internal(format!(
                    "index expressions disagree: {expr1} vs {expr2}"
                )));
            }
            Ok(IndexReport {
                chirality,
                weight_term: cfg.positive_weight_sum(),
                boundary_term: ch_plus,
                total: expr1,
                consistency: true,
                mode_verification: None,
            })
        }
    }
}

/// True iff the total interior weight equals the total outward boundary
/// degree measured by the plaquette method — the compatibility making the
/// two index expressions coincide.
pub fn cross_check(cfg: &MonopoleConfig) -> Result<bool> {
    let mesh = default_mesh(cfg);
    let mut boundary_total = 0i64;
    for j in 0..cfg.rank {
        boundary_total += plaquette_chern(&mesh, &chart_connections(cfg, j))?;
    }
    Ok(boundary_total == cfg.total_weight())
}

/// Variant for deliberately supplied boundary degrees (diagnostics and
/// negative tests).
pub fn cross_check_charges(cfg: &MonopoleConfig, boundary_degrees: &[i64]) -> bool {
    boundary_degrees.iter().sum::<i64>() == cfg.total_weight()
}

/// Single twisted flat monopole of weight k and mass a, enclosed by a unit
/// boundary sphere.
pub fn single_monopole_config(k: i64, a: f64) -> MonopoleConfig {
    MonopoleConfig {
        rank: 1,
        mode: ConfigMode::CompleteWithBoundary,
        singularities: vec![SingularPoint {
            position: [0.0; 3],
            weights: WeightVector::new(vec![k]),
        }],
        mass: MassData { values: vec![a] },
        boundary_radius: 1.0,
    }
}

/// Index of the twisted flat monopole by the boundary formula and,
/// independently, by summing per-mode shooting indices up to q_max. The
/// q = 0 rows are weighted by their angular multiplicities max(±k, 0);
/// nonzero modes carry index 0, so their unmeasured multiplicities cannot
/// affect the total.
pub fn twisted_flat_index(k: i64, a: f64, chirality: Chirality, q_max: u32) -> Result<IndexReport> {
    twisted_flat_index_with_tol(k, a, chirality, q_max, DECAY_TOL)
}

/// As [`twisted_flat_index`], with an explicit decay-classification margin.
pub fn twisted_flat_index_with_tol(
    k: i64,
    a: f64,
    chirality: Chirality,
    q_max: u32,
    tol: f64,
) -> Result<IndexReport> {
    if a == 0.0 {
        return Err(CoreError::Input("mass a must be nonzero".into()));
    }
    let cfg = single_monopole_config(k, a);
    let formula = main_index(&cfg, chirality)?;
    let mut per_mode = Vec::new();
    let mut mode_sum = 0i64;
    let harmonic = shooting_index(
        &mode_operator(k, a, 0, chirality),
        1e-6,
        shooting_r_max(0, a),
        tol,
    )?;
    let mult = [k.max(0), (-k).max(0)];
    let q0: i64 = harmonic
        .row_detail
        .iter()
        .zip(mult)
        .map(|(&(ker, cok), m)| m * (ker as i64 - cok as i64))
        .sum();
    per_mode.push((0, q0));
    mode_sum += q0;
    for q in 1..=q_max {
        let n = (q as i64) * (q as i64) + k.abs() * q as i64;
        let rep = shooting_index(
            &mode_operator(k, a, q, chirality),
            1e-6,
            shooting_r_max(n, a),
            tol,
        )?;
        per_mode.push((q, rep.index));
        mode_sum += rep.index;
    }
    let agrees = mode_sum == formula.total;
    Ok(IndexReport {
        mode_verification: Some(ModeSumSummary {
            q_max,
            per_mode,
            mode_sum,
            agrees,
        }),
        ..formula
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_ak_has_zero_index() {
        let cfg = single_monopole_config(1, 1.0);
        let rep = main_index(&cfg, Chirality::Plus).unwrap();
        assert_eq!(rep.total, 0);
        assert!(rep.consistency);
    }

    #[test]
    fn negative_mass_counts_the_weight() {
        let cfg = single_monopole_config(2, -1.0);
        let rep = main_index(&cfg, Chirality::Plus).unwrap();
        assert_eq!(rep.total, -2);
    }

    #[test]
    fn compact_pair_matches_equivariant() {
        let cfg = MonopoleConfig {
            rank: 1,
            mode: ConfigMode::CompactModel,
            singularities: vec![
                SingularPoint {
                    position: [0.0; 3],
                    weights: WeightVector::new(vec![1]),
                },
                SingularPoint {
                    position: [1.0, 0.0, 0.0],
                    weights: WeightVector::new(vec![-1]),
                },
            ],
            mass: MassData { values: vec![0.0] },
            boundary_radius: 2.0,
        };
        let rep = main_index(&cfg, Chirality::Plus).unwrap();
        assert_eq!(rep.total, -1);
        assert!(rep.consistency);
    }

    #[test]
    fn adjoint_antisymmetry() {
        for (k, a) in [(1i64, 1.0), (2, -0.7), (-3, 1.4)] {
            let cfg = single_monopole_config(k, a);
            let p = main_index(&cfg, Chirality::Plus).unwrap().total;
            let m = main_index(&cfg, Chirality::Minus).unwrap().total;
            assert_eq!(p, -m, "k={k} a={a}");
        }
    }

    #[test]
    fn degenerate_config_has_index_zero() {
        let cfg = MonopoleConfig {
            rank: 2,
            mode: ConfigMode::CompleteWithBoundary,
            singularities: vec![],
            mass: MassData {
                values: vec![1.0, -0.5],
            },
            boundary_radius: 1.0,
        };
        for ch in [Chirality::Plus, Chirality::Minus] {
            assert_eq!(main_index(&cfg, ch).unwrap().total, 0);
        }
    }

    #[test]
    fn cross_check_accepts_own_charts_and_rejects_offset() {
        let cfg = single_monopole_config(3, 1.0);
        assert!(cross_check(&cfg).unwrap());
        assert!(cross_check_charges(&cfg, &[3]));
        assert!(!cross_check_charges(&cfg, &[4]));
        let empty = MonopoleConfig {
            rank: 1,
            mode: ConfigMode::CompleteWithBoundary,
            singularities: vec![],
            mass: MassData { values: vec![1.0] },
            boundary_radius: 1.0,
        };
        assert!(cross_check(&empty).unwrap());
    }

    #[test]
    fn twisted_flat_examples() {
        let rep = twisted_flat_index(3, 2.0, Chirality::Plus, 4).unwrap();
        assert_eq!(rep.total, 0);
        let ms = rep.mode_verification.unwrap();
        assert_eq!(ms.mode_sum, 0);
        assert!(ms.agrees);

        let rep = twisted_flat_index(-1, 2.0, Chirality::Plus, 4).unwrap();
        assert_eq!(rep.total, -1);
        let ms = rep.mode_verification.unwrap();
        assert_eq!(ms.mode_sum, -1);
        assert_eq!(ms.per_mode[0], (0, -1));
        assert!(ms.agrees);

        let a = twisted_flat_index(1, -1.0, Chirality::Minus, 3).unwrap();
        let b = twisted_flat_index(1, -1.0, Chirality::Plus, 3).unwrap();
        assert_eq!(a.total, -b.total);
    }

    #[test]
    fn invalid_config_propagates() {
        let mut cfg = single_monopole_config(1, 0.0);
        cfg.mass.values[0] = 0.0;
        assert!(matches!(
            main_index(&cfg, Chirality::Plus),
            Err(CoreError::InvalidConfig(_))
        ));
    }
}
