//! S¹-equivariant fixed-point index of the compact lift.
//!
//! Every singular point of weight vector (k_i) contributes the character
//! Σ_i z^{k_i} at its fixed point, each auxiliary fixed point contributes
//! the constant character r, and both sit over the common denominator
//! tr_θ(⋀⁻¹T) = 4(1−cosθ)². After cancelling 2(1−cosθ) against the spinor
//! numerator the equivariant index becomes
//!
//!   Ind± = ∓ (2π)⁻¹ ∫ P(e^{iθ}) / (2(1−cosθ)) dθ,
//!   P(z) = Σ_p (Σ_i z^{k_{p,i}} − r),
//!
//! which is evaluated two independent ways: exactly, by dividing z·P(z) by
//! (z−1)² in integer Laurent arithmetic and reading off the constant
//! coefficient, and numerically by midpoint quadrature. Both reproduce the
//! closed form ∓Σ_{k>0} k.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{CoreError, Result};
use crate::model::Chirality;

/// Laurent polynomial with exact integer coefficients.
///
/// No zero coefficients are stored, so `coeffs.is_empty()` means the zero
/// polynomial.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// c·z^e
    pub fn monomial(e: i64, c: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn coeff(&self, e: i64) -> i64 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, e: i64, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert(0);
        *entry = entry.checked_add(c).expect("coefficient overflow");
        if *entry == 0 {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Value at z = 1: the plain coefficient sum.
    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// Value of the formal derivative at z = 1: Σ e·c_e.
    pub fn derivative_at_one(&self) -> i64 {
        self.coeffs.iter().map(|(e, c)| e * c).sum()
    }

    /// Multiply by z^s.
    pub fn shift(&self, s: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + s, *c)).collect(),
        }
    }

    /// Exact division by (z−1)²; returns None when the remainder is nonzero.
    pub fn div_by_z_minus_one_sq(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let emin = self.min_exp().unwrap();
        let emax = self.max_exp().unwrap();
        let deg = (emax - emin) as usize;
        if deg < 2 {
            return None;
        }
        // dense ordinary-polynomial coefficients of z^{-emin}·self
        let mut num: Vec<i64> = vec![0; deg + 1];
        for (e, c) in &self.coeffs {
            num[(e - emin) as usize] = *c;
        }
        // long division by z² − 2z + 1, from the top coefficient down
        let mut quot = vec![0i64; deg - 1];
        for i in (0..=deg - 2).rev() {
            let q = num[i + 2];
            quot[i] = q;
            num[i + 2] = 0;
            num[i + 1] = num[i + 1].checked_add(2 * q)?;
            num[i] = num[i].checked_sub(q)?;
        }
        if num[0] != 0 || num[1] != 0 {
            return None;
        }
        let mut out = Self::zero();
        for (i, c) in quot.into_iter().enumerate() {
            out.add_term(i as i64 + emin, c);
        }
        Some(out)
    }
}

/// Fixed-point class on the compact lift: actual singular points carry the
/// bundle weights, auxiliary points carry the trivial rank-r character.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointClass {
    /// Spinor weights S⁺ = (0,0), S⁻ = (−1,1).
    Singular,
    /// Spinor weights S⁺ = (−1,1), S⁻ = (0,0).
    Auxiliary,
}

/// Weight data attached to one fixed point of the S¹-action.
#[derive(Debug, Clone)]
pub struct FixedPointDatum {
    pub class: FixedPointClass,
    pub bundle_weights: Vec<i64>,
}

impl FixedPointDatum {
    pub fn singular(weights: Vec<i64>) -> Self {
        Self {
            class: FixedPointClass::Singular,
            bundle_weights: weights,
        }
    }

    /// Auxiliary points force all-zero bundle weights of the given rank.
    pub fn auxiliary(rank: usize) -> Self {
        Self {
            class: FixedPointClass::Auxiliary,
            bundle_weights: vec![0; rank],
        }
    }

    /// Spinor S¹-weights (plus-spinor, minus-spinor) at this point.
    pub fn spinor_weights(&self) -> ([i64; 2], [i64; 2]) {
        match self.class {
            FixedPointClass::Singular => ([0, 0], [-1, 1]),
            FixedPointClass::Auxiliary => ([-1, 1], [0, 0]),
        }
    }

    /// tr_θ((S^± ⊗ V)|_p) − tr_θ((S^∓ ⊗ V)|_p), regenerated from the weight
    /// data: the numerator of this point's fixed-point contribution.
    pub fn trace_difference(&self, theta: f64, chirality: Chirality) -> num_complex::Complex64 {
        let z = |w: i64| num_complex::Complex64::from_polar(1.0, w as f64 * theta);
        let (s_plus, s_minus) = self.spinor_weights();
        let spinor = |ws: [i64; 2]| z(ws[0]) + z(ws[1]);
        let bundle: num_complex::Complex64 = self.bundle_weights.iter().map(|&k| z(k)).sum();
        let diff = (spinor(s_plus) - spinor(s_minus)) * bundle;
        match chirality {
            Chirality::Plus => diff,
            Chirality::Minus => -diff,
        }
    }
}

/// Denominator tr_θ(⋀⁻¹T_p) = 4(1−cosθ)² of every fixed point.
pub fn tangent_trace(theta: f64) -> f64 {
    let c = 1.0 - theta.cos();
    4.0 * c * c
}

fn check_constraint(weights_by_point: &[Vec<i64>], rank: usize) -> Result<()> {
    for w in weights_by_point {
        if w.len() != rank {
            return Err(CoreError::InvalidConfig(format!(
                "weight vector length {} does not match rank {rank}",
                w.len()
            )));
        }
    }
    let total: i64 = weights_by_point.iter().flatten().sum();
    if total != 0 {
        return Err(CoreError::InvalidConfig(format!(
            "total weight {total} ≠ 0 violates the Stokes constraint"
        )));
    }
    Ok(())
}

/// Builds P(z) = Σ_p (Σ_i z^{k_{p,i}} − r).
pub fn character_poly(weights_by_point: &[Vec<i64>], rank: usize) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for w in weights_by_point {
        for &k in w {
            p.add_term(k, 1);
        }
        p.add_term(0, -(rank as i64));
    }
    p
}

/// Exact equivariant index: ∓ constant coefficient of z·P(z)/(z−1)².
///
/// Runs entirely in integer arithmetic; the division is exact precisely
/// because the total weight vanishes.
pub fn lefschetz_symbolic(
    weights_by_point: &[Vec<i64>],
    rank: usize,
    chirality: Chirality,
) -> Result<i64> {
    check_constraint(weights_by_point, rank)?;
    let p = character_poly(weights_by_point, rank);
    if p.eval_at_one() != 0 || p.derivative_at_one() != 0 {
        return Err(CoreError::Internal(
            "character polynomial fails P(1)=0 or P'(1)=0 despite zero total weight".into(),
        ));
    }
    let q = p.shift(1).div_by_z_minus_one_sq().ok_or_else(|| {
        CoreError::Internal("z·P(z) is not divisible by (z−1)² despite zero total weight".into())
    })?;
    Ok(-chirality.sign() * q.coeff(0))
}

/// Quadrature route: ±(2π)⁻¹ ∫ [Σ cos(kθ) − r|Z|] / (2(1−cosθ)) dθ by the
/// midpoint rule (nodes avoid θ = 0; the odd imaginary part drops out).
pub fn lefschetz_numeric(
    weights_by_point: &[Vec<i64>],
    rank: usize,
    chirality: Chirality,
    quadrature_n: usize,
) -> Result<f64> {
    check_constraint(weights_by_point, rank)?;
    let n_points = weights_by_point.len() as f64;
    let r = rank as f64;
    let mut acc = 0.0;
    for t in 0..quadrature_n {
        let theta = 2.0 * PI * (t as f64 + 0.5) / quadrature_n as f64;
        let mut num = -r * n_points;
        for w in weights_by_point {
            for &k in w {
                num += (k as f64 * theta).cos();
            }
        }
        acc += num / (2.0 * (1.0 - theta.cos()));
    }
    Ok(chirality.sign() as f64 * acc / quadrature_n as f64)
}

/// The scalar building block (2π)⁻¹ ∫ (1−cos kθ)/(1−cosθ) dθ.
///
/// By (1−cos kθ)/(1−cosθ) = (sin(kθ/2)/sin(θ/2))², the Fejér kernel, the
/// average is exactly |k|.
pub fn fejer_average(k: i64) -> i64 {
    k.abs()
}

/// Closed form ∓Σ_{k>0} k the two evaluation routes must reproduce.
pub fn closed_form(weights_by_point: &[Vec<i64>], chirality: Chirality) -> i64 {
    let positive: i64 = weights_by_point.iter().flatten().filter(|&&k| k > 0).sum();
    -chirality.sign() * positive
}
