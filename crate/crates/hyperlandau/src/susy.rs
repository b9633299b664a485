//! Superpotential, ladder operators and partner potentials, with the
//! algebraic identities (factorization, intertwining, shape invariance)
//! that make the spectrum mapping work.

use thiserror::Error;

use crate::numeric::{NumericError, SampledFunction};

#[derive(Debug, Error)]
pub enum SusyError {
    #[error("superpotential domain error: u = {u} must be > 0")]
    DomainError { u: f64 },
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// W(u) generating both partner potentials. The constant-field form is
/// W(u) = A0 coth u − λ cosech u; custom superpotentials must supply their
/// own analytic derivative.
pub enum Superpotential {
    ConstantField {
        a0: f64,
        lambda: f64,
    },
    Custom {
        w: Box<dyn Fn(f64) -> f64 + Send + Sync>,
        w_prime: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl Superpotential {
    pub fn constant_field(a0: f64, lambda: f64) -> Self {
        Superpotential::ConstantField { a0, lambda }
    }

    pub fn eval(&self, u: f64) -> f64 {
        match self {
            Superpotential::ConstantField { a0, lambda } => {
                superpotential_constant_field(*a0, *lambda, u)
            }
            Superpotential::Custom { w, .. } => w(u),
        }
    }

    /// Analytic derivative W'(u).
    pub fn eval_prime(&self, u: f64) -> f64 {
        match self {
            Superpotential::ConstantField { a0, lambda } => {
                let csch = 1.0 / u.sinh();
                let coth = u.cosh() * csch;
                -a0 * csch * csch + lambda * csch * coth
            }
            Superpotential::Custom { w_prime, .. } => w_prime(u),
        }
    }

    /// u→∞ limit of W², the continuum threshold of both partner potentials.
    pub fn asymptote(&self) -> f64 {
        match self {
            Superpotential::ConstantField { a0, .. } => a0 * a0,
            Superpotential::Custom { w, .. } => {
                let v = w(30.0);
                v * v
            }
        }
    }

    /// Consistency of a custom derivative against central differences,
    /// max over `points` of the O(h²) defect.
    pub fn derivative_defect(&self, points: &[f64], h: f64) -> f64 {
        points
            .iter()
            .map(|&u| {
                let fd = (self.eval(u + h) - self.eval(u - h)) / (2.0 * h);
                (fd - self.eval_prime(u)).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// W(u) = A0 coth u − λ cosech u; tends to A0 as u → ∞ and diverges as
/// (A0 − λ)/u at the apex.
pub fn superpotential_constant_field(a0: f64, lambda: f64, u: f64) -> f64 {
    assert!(u > 0.0, "superpotential evaluated at u = {u} <= 0");
    let csch = 1.0 / u.sinh();
    a0 * u.cosh() * csch - lambda * csch
}

/// The partner pair V₁ = W² − W′, V₂ = W² + W′ as evaluable functions.
pub struct PartnerPotentials<'a> {
    w: &'a Superpotential,
    pub asymptote: f64,
}

impl<'a> PartnerPotentials<'a> {
    pub fn v1(&self, u: f64) -> f64 {
        let w = self.w.eval(u);
        w * w - self.w.eval_prime(u)
    }

    pub fn v2(&self, u: f64) -> f64 {
        let w = self.w.eval(u);
        w * w + self.w.eval_prime(u)
    }
}

pub fn partner_potentials(w: &Superpotential) -> PartnerPotentials<'_> {
    PartnerPotentials {
        asymptote: w.asymptote(),
        w,
    }
}

/// Closed-form V₁ for the constant field:
/// A0² + (A0² + λ² + A0) cosech²u − λ(2A0 + 1) coth u cosech u.
pub fn v1_constant_field(a0: f64, lambda: f64, u: f64) -> f64 {
    let csch = 1.0 / u.sinh();
    let coth = u.cosh() * csch;
    a0 * a0 + (a0 * a0 + lambda * lambda + a0) * csch * csch
        - lambda * (2.0 * a0 + 1.0) * coth * csch
}

/// Closed-form V₂ for the constant field:
/// A0² + (A0² + λ² − A0) cosech²u − λ(2A0 − 1) coth u cosech u.
pub fn v2_constant_field(a0: f64, lambda: f64, u: f64) -> f64 {
    let csch = 1.0 / u.sinh();
    let coth = u.cosh() * csch;
    a0 * a0 + (a0 * a0 + lambda * lambda - a0) * csch * csch
        - lambda * (2.0 * a0 - 1.0) * coth * csch
}

/// V₂(u; A0+1) − V₁(u; A0) − (2A0 + 1); identically zero when the pair is
/// shape invariant.
pub fn shape_invariance_residual(a0: f64, lambda: f64, u: f64) -> f64 {
    v2_constant_field(a0 + 1.0, lambda, u) - v1_constant_field(a0, lambda, u) - (2.0 * a0 + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderDirection {
    /// L⁻ = +∂ᵤ + W
    Lower,
    /// L⁺ = −∂ᵤ + W
    Raise,
}

/// Apply a ladder operator to samples: centered second-order differences in
/// the interior, one-sided second-order stencils at the ends.
pub fn ladder_apply(
    direction: LadderDirection,
    w: &Superpotential,
    f: &SampledFunction,
) -> Result<SampledFunction, NumericError> {
    let deriv = f.derivative()?;
    let sign = match direction {
        LadderDirection::Lower => 1.0,
        LadderDirection::Raise => -1.0,
    };
    let values = f
        .grid
        .nodes()
        .enumerate()
        .map(|(i, u)| sign * deriv.values[i] + w.eval(u) * f.values[i])
        .collect();
    Ok(SampledFunction {
        grid: f.grid,
        values,
    })
}

/// Apply a partner Hamiltonian −∂²ᵤ + V to samples via finite differences.
pub fn hamiltonian_apply<V: Fn(f64) -> f64>(
    potential: V,
    f: &SampledFunction,
) -> Result<SampledFunction, NumericError> {
    let second = f.second_derivative()?;
    let values = f
        .grid
        .nodes()
        .enumerate()
        .map(|(i, u)| -second.values[i] + potential(u) * f.values[i])
        .collect();
    Ok(SampledFunction {
        grid: f.grid,
        values,
    })
}

/// ‖(H₂L⁻ − L⁻H₁)f‖₂ / ‖f‖₂ by finite-difference composition; O(h²) for
/// smooth f supported away from the grid ends.
pub fn intertwining_residual(w: &Superpotential, f: &SampledFunction) -> Result<f64, NumericError> {
    let norm = f.norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    let pots = partner_potentials(w);
    let lf = ladder_apply(LadderDirection::Lower, w, f)?;
    let h2_lf = hamiltonian_apply(|u| pots.v2(u), &lf)?;
    let h1_f = hamiltonian_apply(|u| pots.v1(u), f)?;
    let l_h1f = ladder_apply(LadderDirection::Lower, w, &h1_f)?;
    Ok(h2_lf.sub(&l_h1f)?.norm() / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Grid;
    use approx::assert_relative_eq;

    #[test]
    fn superpotential_known_values() {
        // cosh u = 3: W = (5*3 - 7)/sqrt(8) = 2*sqrt(2)
        let u = (3.0f64 + 2.0 * 2.0f64.sqrt()).ln();
        assert_relative_eq!(
            superpotential_constant_field(5.0, 7.0, u),
            2.0 * 2.0f64.sqrt(),
            max_relative = 1e-13
        );
        // large-u limit
        assert_relative_eq!(
            superpotential_constant_field(5.0, 7.0, 40.0),
            5.0,
            max_relative = 1e-12
        );
        // divergence towards the apex: W ~ (A0 - lambda)/u = -2/u
        let u = 1e-6;
        assert_relative_eq!(
            superpotential_constant_field(5.0, 7.0, u),
            -2.0 / u,
            max_relative = 1e-5
        );
    }

    #[test]
    #[should_panic]
    fn superpotential_rejects_nonpositive_u() {
        superpotential_constant_field(5.0, 7.0, 0.0);
    }

    #[test]
    fn tail_bound_on_superpotential() {
        let (a0, lambda) = (5.0, 7.0);
        for i in 0..40 {
            let u = 5.0 + i as f64 * 0.5;
            let w = superpotential_constant_field(a0, lambda, u);
            assert!((w - a0).abs() <= 2.0 * (lambda + a0) * (-u).exp());
        }
    }

    #[test]
    fn partner_potentials_match_closed_forms() {
        let w = Superpotential::constant_field(5.0, 7.0);
        let pots = partner_potentials(&w);
        assert_eq!(pots.asymptote, 25.0);
        for i in 1..200 {
            let u = i as f64 * 0.05;
            let v1c = v1_constant_field(5.0, 7.0, u);
            let v2c = v2_constant_field(5.0, 7.0, u);
            assert_relative_eq!(pots.v1(u), v1c, max_relative = 1e-12);
            assert_relative_eq!(pots.v2(u), v2c, max_relative = 1e-12);
            // V1 + V2 = 2W²
            let wu = w.eval(u);
            assert_relative_eq!(pots.v1(u) + pots.v2(u), 2.0 * wu * wu, max_relative = 1e-11);
        }
    }

    #[test]
    fn v1_coefficients_fig1() {
        // A0=5, lambda=7: V1 = 25 + 79 cosech²u − 77 coth u cosech u
        let u: f64 = 1.3;
        let csch = 1.0 / u.sinh();
        let coth = u.cosh() * csch;
        assert_relative_eq!(
            v1_constant_field(5.0, 7.0, u),
            25.0 + 79.0 * csch * csch - 77.0 * coth * csch,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            v2_constant_field(5.0, 7.0, u),
            25.0 + 69.0 * csch * csch - 63.0 * coth * csch,
            max_relative = 1e-14
        );
    }

    #[test]
    fn shape_invariance_identity() {
        assert!(shape_invariance_residual(5.0, 7.0, 1.0).abs() <= 1e-11);
        // near the singularity, relative to the diverging scale
        let u = 0.01f64;
        let scale = 1.0 / u.sinh().powi(2);
        assert!(shape_invariance_residual(5.0, 7.0, u).abs() <= 1e-8 * scale);
        assert!(shape_invariance_residual(2.5, 3.5, 2.0).abs() <= 1e-11);
    }

    #[test]
    fn custom_derivative_consistency() {
        let w = Superpotential::Custom {
            w: Box::new(|u: f64| u.tanh()),
            w_prime: Box::new(|u: f64| 1.0 / u.cosh().powi(2)),
        };
        let pts = [0.3, 0.7, 1.5, 3.0];
        assert!(w.derivative_defect(&pts, 1e-4) < 1e-7);
        // an inconsistent pair is caught
        let bad = Superpotential::Custom {
            w: Box::new(|u: f64| u.tanh()),
            w_prime: Box::new(|_| 0.0),
        };
        assert!(bad.derivative_defect(&pts, 1e-4) > 1e-2);
    }

    #[test]
    fn ladder_rejects_tiny_grids() {
        let grid = Grid::new(1.0, 2.0, 16).unwrap();
        let mut f = grid.sample(|u| u);
        f.values.truncate(4);
        f.grid = Grid {
            u_min: 1.0,
            u_max: 2.0,
            count: 4,
            h: 1.0 / 3.0,
        };
        let w = Superpotential::constant_field(5.0, 7.0);
        assert!(matches!(
            ladder_apply(LadderDirection::Lower, &w, &f),
            Err(NumericError::GridTooSmall { .. })
        ));
    }

    #[test]
    fn intertwining_residual_zero_for_zero_input() {
        let grid = Grid::new(0.5, 5.0, 512).unwrap();
        let f = SampledFunction::zeros(grid);
        let w = Superpotential::constant_field(5.0, 7.0);
        assert_eq!(intertwining_residual(&w, &f).unwrap(), 0.0);
    }

    #[test]
    fn intertwining_residual_decays_second_order() {
        // gaussian bump centered mid-grid, zero in the outer region
        let w = Superpotential::constant_field(5.0, 7.0);
        let bump = |u: f64| (-20.0 * (u - 3.0) * (u - 3.0)).exp();
        let mut residuals = Vec::new();
        for count in [751, 1501, 3001, 6001] {
            let grid = Grid::new(1.0, 5.0, count).unwrap();
            let f = grid.sample(bump);
            residuals.push(intertwining_residual(&w, &f).unwrap());
        }
        for pair in residuals.windows(2) {
            assert!(
                pair[1] < pair[0] / 3.0,
                "expected O(h²) decay, got {residuals:?}"
            );
        }
        // at h near 1e-3 the residual is small outright
        assert!(residuals.last().unwrap() < &1e-3, "{residuals:?}");
    }
}
