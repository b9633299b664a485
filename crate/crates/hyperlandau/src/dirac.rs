//! Massive sector: lifts Dirac-Weyl radial solutions to Dirac energies and
//! four-component spinors, with explicit particle/hole branches and the
//! collapse of the ground-state pair to E = ±mc².

use num_complex::Complex64;
use thiserror::Error;

use crate::analytic::RadialEigenpair;
use crate::model::SystemParams;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum DiracError {
    #[error("ratio denominator vanishes at E = {e} (mc² = {mc2})")]
    DegenerateDenominator { e: f64, mc2: f64 },
    #[error("level n = {n} does not admit branch {branch:?}")]
    BranchMismatch { n: u32, branch: EnergyBranch },
    #[error("spinor pair mismatch: both inputs must share (n, lambda) and differ in sign")]
    SpinorMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergySign {
    Plus,
    Minus,
}

impl EnergySign {
    pub fn factor(self) -> f64 {
        match self {
            EnergySign::Plus => 1.0,
            EnergySign::Minus => -1.0,
        }
    }
}

/// The two written forms of the u-dependent frame factor: a unitary
/// rotation e^{−iuσ_y/2} or the hyperbolic e^{−σ_y u/2}. Only the rotation
/// form preserves the spinor norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Frame {
    #[default]
    RotationForm,
    HyperbolicForm,
}

/// E = ±√(c²ħ²ε/R² + m²c⁴). Always outside the open gap (−mc², mc²); the
/// massless limit reduces to the Dirac-Weyl energies with c in v_F's role.
pub fn dirac_energy(epsilon: f64, params: &SystemParams, sign: EnergySign) -> f64 {
    let ch = params.c * params.hbar / params.radius;
    let mc2 = params.mass * params.c * params.c;
    sign.factor() * (ch * ch * epsilon + mc2 * mc2).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioDirection {
    /// χ_p = cħℰ/(E + mc²) · φ_p
    LowerFromUpper,
    /// φ_p = cħℰ/(E − mc²) · χ_p
    UpperFromLower,
}

/// Scalar connecting the two two-spinors of a Dirac solution. `cal_e` is
/// the signed Dirac-Weyl eigenvalue ℰ.
pub fn spinor_ratio(
    e: f64,
    cal_e: f64,
    params: &SystemParams,
    direction: RatioDirection,
) -> Result<f64, DiracError> {
    let mc2 = params.mass * params.c * params.c;
    let denom = match direction {
        RatioDirection::LowerFromUpper => e + mc2,
        RatioDirection::UpperFromLower => e - mc2,
    };
    if denom == 0.0 {
        return Err(DiracError::DegenerateDenominator { e, mc2 });
    }
    Ok(params.c * params.hbar * cal_e / denom)
}

/// A Dirac-Weyl two-spinor solution: radial pair, phases e^{i(λ∓1/2)φ},
/// 1/√sinh u prefactor and the frame factor, with overall constant 1/√2
/// (each radial component is unit-normalized separately).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylSpinor {
    pub sign: EnergySign,
    pub lambda: f64,
    pub radial: RadialEigenpair,
    pub frame: Frame,
}

impl WeylSpinor {
    pub fn new(sign: EnergySign, lambda: f64, radial: RadialEigenpair, frame: Frame) -> Self {
        Self {
            sign,
            lambda,
            radial,
            frame,
        }
    }

    pub fn n(&self) -> u32 {
        self.radial.n
    }

    /// The radial column (±g₁,ₙ(u), i·g₂,ₙ₋₁(u)) without prefactors.
    pub fn radial_column(&self, u: f64) -> [Complex64; 2] {
        let g1 = self.radial.g1.eval(u);
        let g2 = self.radial.g2.map_or(0.0, |g| g.eval(u));
        [
            Complex64::new(self.sign.factor() * g1, 0.0),
            Complex64::new(0.0, g2),
        ]
    }

    /// Full two-spinor at (u, φ).
    pub fn eval(&self, u: f64, phi: f64) -> [Complex64; 2] {
        assert!(u > 0.0, "spinor evaluated at u = {u} <= 0");
        let norm = std::f64::consts::FRAC_1_SQRT_2 / u.sinh().sqrt();
        let col = self.radial_column(u);
        let (up, dn) = (col[0], col[1]);
        let half = 0.5 * u;
        let (f11, f12, f21, f22) = match self.frame {
            // e^{−iuσ_y/2} = [[cos, −sin], [sin, cos]](u/2)
            Frame::RotationForm => {
                let (s, c) = half.sin_cos();
                (
                    Complex64::new(c, 0.0),
                    Complex64::new(-s, 0.0),
                    Complex64::new(s, 0.0),
                    Complex64::new(c, 0.0),
                )
            }
            // e^{−σ_y u/2} = cosh(u/2)·I − sinh(u/2)·σ_y
            Frame::HyperbolicForm => {
                let (sh, ch) = (half.sinh(), half.cosh());
                (
                    Complex64::new(ch, 0.0),
                    Complex64::new(0.0, sh),
                    Complex64::new(0.0, -sh),
                    Complex64::new(ch, 0.0),
                )
            }
        };
        // angular phases are outermost so component magnitudes stay
        // φ-independent
        [
            (f11 * up + f12 * dn) * norm * Complex64::from_polar(1.0, (self.lambda - 0.5) * phi),
            (f21 * up + f22 * dn) * norm * Complex64::from_polar(1.0, (self.lambda + 0.5) * phi),
        ]
    }
}

/// The six solution families of the massive problem: four for each excited
/// level and the two collapsed ground branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyBranch {
    /// (φ_p⁺, +ratio·φ_p⁺) at E₊
    ParticlePlus,
    /// (φ_p⁻, −ratio·φ_p⁻) at E₊
    ParticleMinus,
    /// (+ratio·χ_p⁺, χ_p⁺) at E₋
    HolePlus,
    /// (−ratio·χ_p⁻, χ_p⁻) at E₋
    HoleMinus,
    /// (φ₀, 0) at E = +mc²
    GroundPlus,
    /// (0, φ₀) at E = −mc²
    GroundMinus,
}

impl EnergyBranch {
    pub fn is_ground(self) -> bool {
        matches!(self, EnergyBranch::GroundPlus | EnergyBranch::GroundMinus)
    }
}

/// A four-component solution: energy, branch, and the two two-spinor
/// fields, one of which is a scalar multiple of the other (or zero on the
/// ground branches).
#[derive(Debug, Clone, PartialEq)]
pub struct DiracSolution {
    pub energy: f64,
    pub branch: EnergyBranch,
    /// Scalar connecting the two-spinors (0 on ground branches).
    pub ratio: f64,
    base: WeylSpinor,
    upper_scale: f64,
    lower_scale: f64,
}

impl DiracSolution {
    pub fn upper(&self, u: f64, phi: f64) -> [Complex64; 2] {
        let v = self.base.eval(u, phi);
        [v[0] * self.upper_scale, v[1] * self.upper_scale]
    }

    pub fn lower(&self, u: f64, phi: f64) -> [Complex64; 2] {
        let v = self.base.eval(u, phi);
        [v[0] * self.lower_scale, v[1] * self.lower_scale]
    }

    /// All four components at (u, φ).
    pub fn four_spinor(&self, u: f64, phi: f64) -> [Complex64; 4] {
        let v = self.base.eval(u, phi);
        [
            v[0] * self.upper_scale,
            v[1] * self.upper_scale,
            v[0] * self.lower_scale,
            v[1] * self.lower_scale,
        ]
    }
}

/// Build one Dirac solution from the ± pair of Dirac-Weyl spinors sharing
/// a level. Ground branches exist only at n = 0 and excited branches only
/// at n ≥ 1.
pub fn assemble_dirac_solution(
    weyl_plus: &WeylSpinor,
    weyl_minus: &WeylSpinor,
    params: &SystemParams,
    branch: EnergyBranch,
) -> Result<DiracSolution, DiracError> {
    if weyl_plus.sign != EnergySign::Plus
        || weyl_minus.sign != EnergySign::Minus
        || weyl_plus.n() != weyl_minus.n()
        || weyl_plus.lambda != weyl_minus.lambda
    {
        return Err(DiracError::SpinorMismatch);
    }
    let n = weyl_plus.n();
    if branch.is_ground() != (n == 0) {
        return Err(DiracError::BranchMismatch { n, branch });
    }
    let epsilon = weyl_plus.radial.epsilon;
    let mc2 = params.mass * params.c * params.c;

    if branch.is_ground() {
        let (energy, upper_scale, lower_scale) = match branch {
            EnergyBranch::GroundPlus => (mc2, 1.0, 0.0),
            EnergyBranch::GroundMinus => (-mc2, 0.0, 1.0),
            _ => unreachable!(),
        };
        return Ok(DiracSolution {
            energy,
            branch,
            ratio: 0.0,
            base: *weyl_plus,
            upper_scale,
            lower_scale,
        });
    }

    let cal_e = epsilon.sqrt() / params.radius; // |ℰ| for this level
    let (sign, base) = match branch {
        EnergyBranch::ParticlePlus | EnergyBranch::HolePlus => (1.0, weyl_plus),
        EnergyBranch::ParticleMinus | EnergyBranch::HoleMinus => (-1.0, weyl_minus),
        _ => unreachable!(),
    };
    match branch {
        EnergyBranch::ParticlePlus | EnergyBranch::ParticleMinus => {
            let energy = dirac_energy(epsilon, params, EnergySign::Plus);
            let ratio = spinor_ratio(energy, sign * cal_e, params, RatioDirection::LowerFromUpper)?;
            Ok(DiracSolution {
                energy,
                branch,
                ratio,
                base: *base,
                upper_scale: 1.0,
                lower_scale: ratio,
            })
        }
        EnergyBranch::HolePlus | EnergyBranch::HoleMinus => {
            let energy = dirac_energy(epsilon, params, EnergySign::Minus);
            let ratio = spinor_ratio(energy, sign * cal_e, params, RatioDirection::UpperFromLower)?;
            Ok(DiracSolution {
                energy,
                branch,
                ratio,
                base: *base,
                upper_scale: ratio,
                lower_scale: 1.0,
            })
        }
        _ => unreachable!(),
    }
}

/// All solutions at one level: four for n ≥ 1, two for n = 0.
pub fn enumerate_solutions(
    weyl_plus: &WeylSpinor,
    weyl_minus: &WeylSpinor,
    params: &SystemParams,
) -> Result<Vec<DiracSolution>, DiracError> {
    let branches: &[EnergyBranch] = if weyl_plus.n() == 0 {
        &[EnergyBranch::GroundPlus, EnergyBranch::GroundMinus]
    } else {
        &[
            EnergyBranch::ParticlePlus,
            EnergyBranch::ParticleMinus,
            EnergyBranch::HolePlus,
            EnergyBranch::HoleMinus,
        ]
    };
    branches
        .iter()
        .map(|&b| assemble_dirac_solution(weyl_plus, weyl_minus, params, b))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::radial_eigenpair;
    use approx::assert_relative_eq;

    fn natural() -> SystemParams {
        SystemParams::default()
    }

    fn weyl_pair(n: u32) -> (WeylSpinor, WeylSpinor) {
        let radial = radial_eigenpair(5.0, 7.0, n).unwrap();
        (
            WeylSpinor::new(EnergySign::Plus, 7.0, radial, Frame::RotationForm),
            WeylSpinor::new(EnergySign::Minus, 7.0, radial, Frame::RotationForm),
        )
    }

    #[test]
    fn dirac_energy_examples() {
        let p = natural();
        assert_eq!(dirac_energy(0.0, &p, EnergySign::Plus), 1.0);
        assert_relative_eq!(
            dirac_energy(9.0, &p, EnergySign::Plus),
            10f64.sqrt(),
            max_relative = 1e-14
        );
        let massless = SystemParams {
            mass: 0.0,
            ..natural()
        };
        assert_relative_eq!(
            dirac_energy(24.0, &massless, EnergySign::Minus),
            -24f64.sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn ratio_square_identity() {
        let p = natural();
        let e = 10f64.sqrt();
        let r = spinor_ratio(e, 3.0, &p, RatioDirection::LowerFromUpper).unwrap();
        assert_relative_eq!(r, 3.0 / (10f64.sqrt() + 1.0), max_relative = 1e-14);
        assert_relative_eq!(r * r, (e - 1.0) / (e + 1.0), max_relative = 1e-12);
        // consistency: ratio_down * ratio_up = 1 on shell
        let r_up = spinor_ratio(e, 3.0, &p, RatioDirection::UpperFromLower).unwrap();
        assert_relative_eq!(r * r_up, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn ratio_massless_is_unit() {
        let p = SystemParams {
            mass: 0.0,
            ..natural()
        };
        let r = spinor_ratio(3.0, 3.0, &p, RatioDirection::LowerFromUpper).unwrap();
        assert_eq!(r, 1.0);
        let r = spinor_ratio(3.0, -3.0, &p, RatioDirection::LowerFromUpper).unwrap();
        assert_eq!(r, -1.0);
    }

    #[test]
    fn ratio_zero_mode_and_degenerate_denominator() {
        let p = natural();
        // cal_E = 0 at E = +mc²: lower spinor vanishes
        assert_eq!(
            spinor_ratio(1.0, 0.0, &p, RatioDirection::LowerFromUpper).unwrap(),
            0.0
        );
        assert!(matches!(
            spinor_ratio(-1.0, 0.0, &p, RatioDirection::LowerFromUpper),
            Err(DiracError::DegenerateDenominator { .. })
        ));
        assert!(matches!(
            spinor_ratio(1.0, 0.0, &p, RatioDirection::UpperFromLower),
            Err(DiracError::DegenerateDenominator { .. })
        ));
    }

    #[test]
    fn spinor_periodicity_depends_on_half_oddness() {
        let radial = radial_eigenpair(5.0, 7.5, 1).unwrap();
        let half_odd = WeylSpinor::new(EnergySign::Plus, 7.5, radial, Frame::RotationForm);
        let two_pi = 2.0 * std::f64::consts::PI;
        let a = half_odd.eval(1.0, 0.3);
        let b = half_odd.eval(1.0, 0.3 + two_pi);
        for i in 0..2 {
            assert_relative_eq!(a[i].re, b[i].re, epsilon = 1e-10);
            assert_relative_eq!(a[i].im, b[i].im, epsilon = 1e-10);
        }
        // integer λ picks up a phase of e^{iπ} per component
        let (wp, _) = weyl_pair(1);
        let a = wp.eval(1.0, 0.3);
        let b = wp.eval(1.0, 0.3 + two_pi);
        assert_relative_eq!(a[0].re, -b[0].re, epsilon = 1e-10);
    }

    #[test]
    fn spinor_magnitudes_phi_independent() {
        let (wp, _) = weyl_pair(2);
        let a = wp.eval(1.3, 0.0);
        let b = wp.eval(1.3, 2.1);
        for i in 0..2 {
            assert_relative_eq!(a[i].norm(), b[i].norm(), epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_mode_spinor_single_component() {
        let radial = radial_eigenpair(5.0, 7.0, 0).unwrap();
        let w = WeylSpinor::new(EnergySign::Plus, 7.0, radial, Frame::RotationForm);
        let col = w.radial_column(1.0);
        assert!(col[0].norm() > 0.0);
        assert_eq!(col[1], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn particle_plus_matches_closed_forms() {
        let p = natural();
        let (wp, wm) = weyl_pair(1);
        let s = assemble_dirac_solution(&wp, &wm, &p, EnergyBranch::ParticlePlus).unwrap();
        assert_relative_eq!(s.energy, 10f64.sqrt(), max_relative = 1e-14);
        let expect = ((10f64.sqrt() - 1.0) / (10f64.sqrt() + 1.0)).sqrt();
        assert_relative_eq!(s.ratio, expect, max_relative = 1e-12);
        // lower = ratio * upper pointwise
        let up = s.upper(1.2, 0.7);
        let lo = s.lower(1.2, 0.7);
        for i in 0..2 {
            assert_relative_eq!(lo[i].re, s.ratio * up[i].re, epsilon = 1e-12);
            assert_relative_eq!(lo[i].im, s.ratio * up[i].im, epsilon = 1e-12);
        }
    }

    #[test]
    fn minus_branch_carries_negative_ratio() {
        let p = natural();
        let (wp, wm) = weyl_pair(1);
        let plus = assemble_dirac_solution(&wp, &wm, &p, EnergyBranch::ParticlePlus).unwrap();
        let minus = assemble_dirac_solution(&wp, &wm, &p, EnergyBranch::ParticleMinus).unwrap();
        assert_eq!(minus.energy, plus.energy);
        assert_relative_eq!(minus.ratio, -plus.ratio, max_relative = 1e-12);
    }

    #[test]
    fn ground_collapse() {
        let p = natural();
        let (wp, wm) = weyl_pair(0);
        let sols = enumerate_solutions(&wp, &wm, &p).unwrap();
        assert_eq!(sols.len(), 2);
        assert_eq!(sols[0].energy, 1.0);
        assert_eq!(sols[1].energy, -1.0);
        // one identically-zero two-spinor each
        let lo = sols[0].lower(1.0, 0.0);
        assert_eq!(lo[0], Complex64::new(0.0, 0.0));
        let up = sols[1].upper(1.0, 0.0);
        assert_eq!(up[0], Complex64::new(0.0, 0.0));
        // excited machinery is refused at n = 0 and vice versa
        assert!(matches!(
            assemble_dirac_solution(&wp, &wm, &p, EnergyBranch::ParticlePlus),
            Err(DiracError::BranchMismatch { .. })
        ));
        let (wp1, wm1) = weyl_pair(1);
        assert!(matches!(
            assemble_dirac_solution(&wp1, &wm1, &p, EnergyBranch::GroundPlus),
            Err(DiracError::BranchMismatch { .. })
        ));
    }

    #[test]
    fn branch_count_per_level() {
        let p = natural();
        for n in 0..=4u32 {
            let (wp, wm) = weyl_pair(n);
            let sols = enumerate_solutions(&wp, &wm, &p).unwrap();
            assert_eq!(sols.len(), if n == 0 { 2 } else { 4 });
            for s in &sols {
                assert!(s.energy.abs() >= 1.0 - 1e-12, "energy in the gap");
                // E² = (cħℰ)² + m²c⁴
                let eps = radial_eigenpair(5.0, 7.0, n).unwrap().epsilon;
                assert_relative_eq!(s.energy * s.energy, eps + 1.0, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn massless_reduction() {
        let p = SystemParams {
            mass: 0.0,
            ..natural()
        };
        let (wp, wm) = weyl_pair(1);
        let s = assemble_dirac_solution(&wp, &wm, &p, EnergyBranch::ParticlePlus).unwrap();
        assert_relative_eq!(s.energy, 3.0, max_relative = 1e-14);
        assert_eq!(s.ratio, 1.0);
    }

    #[test]
    fn rotation_frame_preserves_radial_probability() {
        // ∫ (|g1|² + |g2|²) du = 1 with N = 1/√2: check via the assembled
        // spinor by undoing the 1/√sinh u measure factor
        let (wp, _) = weyl_pair(2);
        let f = |u: f64| {
            let v = wp.eval(u, 0.0);
            (v[0].norm_sqr() + v[1].norm_sqr()) * u.sinh()
        };
        let total = crate::numeric::integrate_adaptive(f, 0.0, 30.0, 1e-10);
        assert_relative_eq!(total, 1.0, epsilon = 1e-8);
    }
}
