//! Closed-form spectrum and radial eigenfunctions of the constant-field
//! Landau system: ε_n = A0² − (A0 − n)², Jacobi-polynomial radial pairs
//! (g₁,ₙ, g₂,ₙ₋₁) and their L² normalization.

use thiserror::Error;

use crate::model::max_level;
use crate::numeric::integrate_adaptive;
use crate::susy::superpotential_constant_field;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum AnalyticError {
    #[error("level n = {n} exceeds max admissible level {max}")]
    LevelOutOfRange { n: u32, max: u32 },
    #[error("function is not square-integrable on the requested interval")]
    NotNormalizable,
}

/// ε_n = A0² − (A0 − n)². Strictly increasing in n, always below the
/// continuum threshold A0². Does not depend on λ: every level is
/// infinitely degenerate in the angular momentum.
pub fn epsilon_n(a0: f64, n: u32) -> Result<f64, AnalyticError> {
    let max = max_level(a0);
    if n > max {
        return Err(AnalyticError::LevelOutOfRange { n, max });
    }
    let d = a0 - n as f64;
    Ok(a0 * a0 - d * d)
}

/// Dirac-Weyl energies ±(ħ v_F/R)·√ε_n; the n = 0 zero mode is a single
/// level at 0.
pub fn weyl_energies(
    a0: f64,
    radius: f64,
    v_f: f64,
    hbar: f64,
    n: u32,
) -> Result<(f64, f64), AnalyticError> {
    let eps = epsilon_n(a0, n)?;
    let e = hbar * v_f / radius * eps.sqrt();
    Ok((e, -e))
}

/// Jacobi parameters for one radial component. For this problem they sit
/// outside the classical orthogonality range (b < −1/2, argument > 1), so
/// evaluation is always by the three-term recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub a: f64,
    pub b: f64,
    pub n: u32,
}

impl JacobiParams {
    pub fn eval(&self, w: f64) -> f64 {
        jacobi_eval(self.n, self.a, self.b, w)
    }
}

/// P_n^{(a,b)}(w) by the standard forward three-term recurrence, valid for
/// real a, b and any argument.
pub fn jacobi_eval(n: u32, a: f64, b: f64, w: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut p_prev = 1.0;
    let mut p = (a + 1.0) + (a + b + 2.0) * (w - 1.0) / 2.0;
    for k in 2..=n {
        let k = k as f64;
        let c1 = 2.0 * k * (k + a + b) * (2.0 * k + a + b - 2.0);
        let c2 = (2.0 * k + a + b - 1.0)
            * ((2.0 * k + a + b) * (2.0 * k + a + b - 2.0) * w + a * a - b * b);
        let c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + a + b);
        let p_next = (c2 * p - c3 * p_prev) / c1;
        p_prev = p;
        p = p_next;
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ComponentKind {
    /// Eigenfunction of H₁ at level n.
    G1,
    /// Partner eigenfunction of H₂: the H₁ form with A0 → A0 − 1
    /// (s⁻ → s⁻ + 1, s⁺ → s⁺ − 1).
    G2,
}

/// One radial function N·(w−1)^{·}(w+1)^{·}P_k(w), w = cosh u, as an
/// evaluable value object.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialComponent {
    s_minus: f64,
    s_plus: f64,
    degree: u32,
    kind: ComponentKind,
    /// Signed normalization constant.
    pub norm: f64,
}

impl RadialComponent {
    fn raw(&self, u: f64) -> f64 {
        // w − 1 = 2 sinh²(u/2) and w + 1 = 2 cosh²(u/2) avoid cancellation
        // near the apex.
        let half = 0.5 * u;
        let wm1 = 2.0 * half.sinh() * half.sinh();
        let wp1 = 2.0 * half.cosh() * half.cosh();
        let w = u.cosh();
        let (em, ep, ja, jb) = match self.kind {
            ComponentKind::G1 => (
                0.5 * self.s_minus,
                -0.5 * self.s_plus,
                self.s_minus - 0.5,
                -self.s_plus - 0.5,
            ),
            ComponentKind::G2 => (
                0.5 * (self.s_minus + 1.0),
                -0.5 * (self.s_plus - 1.0),
                self.s_minus + 0.5,
                -self.s_plus + 0.5,
            ),
        };
        wm1.powf(em) * wp1.powf(ep) * jacobi_eval(self.degree, ja, jb, w)
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.norm * self.raw(u)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
}

/// Eigenvalue ε_n with the paired normalized radial functions. `g2` is
/// absent at n = 0 (the zero mode has no partner).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialEigenpair {
    pub n: u32,
    pub epsilon: f64,
    pub g1: RadialComponent,
    pub g2: Option<RadialComponent>,
    /// Quadrature-determined constants; the second is signed so the pair
    /// satisfies L⁻g₁,ₙ = +√ε_n g₂,ₙ₋₁.
    pub norm_constants: (f64, Option<f64>),
}

impl RadialEigenpair {
    /// Quadrature truncation: the slowest tail is e^(−(A0−n)u).
    pub fn u_hi(a0: f64, n: u32) -> f64 {
        (40.0 / (a0 - n as f64)).max(30.0)
    }
}

/// Zero-energy ground state N·(tanh(u/2))^λ·(sinh u)^(−A0), unit L² norm
/// on (0, ∞). Normalizable exactly when A0 > 0 and λ − A0 ≥ 0.
// negated comparison so NaN input is rejected too
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn ground_state(a0: f64, lambda: f64) -> Result<RadialComponent, AnalyticError> {
    if !(a0 > 0.0) || lambda - a0 < 0.0 {
        return Err(AnalyticError::NotNormalizable);
    }
    let mut g = RadialComponent {
        s_minus: lambda - a0,
        s_plus: lambda + a0,
        degree: 0,
        kind: ComponentKind::G1,
        norm: 1.0,
    };
    let u_hi = RadialEigenpair::u_hi(a0, 0);
    let integral = integrate_adaptive(|u| g.raw(u).powi(2), 0.0, u_hi, 1e-12);
    if !(integral.is_finite() && integral > 0.0) {
        return Err(AnalyticError::NotNormalizable);
    }
    g.norm = 1.0 / integral.sqrt();
    Ok(g)
}

/// Radial eigenpair at level n: g₁ from the H₁ closed form, g₂ from the
/// partner form at degree n − 1, both unit-normalized by quadrature, with
/// g₂'s sign fixed so the lowering relation holds with +√ε_n.
// negated comparison so NaN input is rejected too
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn radial_eigenpair(a0: f64, lambda: f64, n: u32) -> Result<RadialEigenpair, AnalyticError> {
    if !(a0 > 0.0) || lambda - a0 < 0.0 {
        return Err(AnalyticError::NotNormalizable);
    }
    let epsilon = epsilon_n(a0, n)?;
    let (s_minus, s_plus) = (lambda - a0, lambda + a0);
    let u_hi = RadialEigenpair::u_hi(a0, n);

    let mut g1 = RadialComponent {
        s_minus,
        s_plus,
        degree: n,
        kind: ComponentKind::G1,
        norm: 1.0,
    };
    let i1 = integrate_adaptive(|u| g1.raw(u).powi(2), 0.0, u_hi, 1e-12);
    if !(i1.is_finite() && i1 > 0.0) {
        return Err(AnalyticError::NotNormalizable);
    }
    g1.norm = 1.0 / i1.sqrt();

    if n == 0 {
        return Ok(RadialEigenpair {
            n,
            epsilon,
            g1,
            g2: None,
            norm_constants: (g1.norm, None),
        });
    }

    let mut g2 = RadialComponent {
        s_minus,
        s_plus,
        degree: n - 1,
        kind: ComponentKind::G2,
        norm: 1.0,
    };
    let i2 = integrate_adaptive(|u| g2.raw(u).powi(2), 0.0, u_hi, 1e-12);
    if !(i2.is_finite() && i2 > 0.0) {
        return Err(AnalyticError::NotNormalizable);
    }
    g2.norm = 1.0 / i2.sqrt();

    // Fix g2's sign against the lowering relation at g2's peak.
    let u_star = (0..600)
        .map(|i| 0.05 + i as f64 * u_hi / 600.0)
        .max_by(|x, y| g2.eval(*x).abs().total_cmp(&g2.eval(*y).abs()))
        .unwrap();
    let h = 1e-5;
    let lowered = (g1.eval(u_star + h) - g1.eval(u_star - h)) / (2.0 * h)
        + superpotential_constant_field(a0, lambda, u_star) * g1.eval(u_star);
    if lowered * g2.eval(u_star) < 0.0 {
        g2.norm = -g2.norm;
    }

    Ok(RadialEigenpair {
        n,
        epsilon,
        g1,
        g2: Some(g2),
        norm_constants: (g1.norm, Some(g2.norm)),
    })
}

/// Unit-L²-normalization constant for `f` on the interval: N with
/// ∫ (N f)² du = 1, by adaptive composite Gauss quadrature. An infinite
/// upper limit is truncated once the tail is confirmed to decay; a
/// non-integrable endpoint or a non-decaying tail is rejected.
// negated comparison so NaN input is rejected too
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn normalize<F>(f: F, interval: (f64, f64)) -> Result<(f64, impl Fn(f64) -> f64), AnalyticError>
where
    F: Fn(f64) -> f64,
{
    let (u_lo, mut u_hi) = interval;
    if u_lo < 0.0 || !(u_hi > u_lo) {
        return Err(AnalyticError::NotNormalizable);
    }
    // endpoint power check at the lower limit: f ~ u^p integrable iff 2p > −1
    if u_lo == 0.0 {
        let (a, b) = (1e-4, 2e-4);
        let (fa, fb) = (f(a).abs(), f(b).abs());
        if fa > 0.0 && fb > 0.0 {
            let p = (fb / fa).ln() / 2f64.ln();
            if 2.0 * p <= -1.0 + 1e-9 {
                return Err(AnalyticError::NotNormalizable);
            }
        }
    }
    if u_hi.is_infinite() {
        let (u1, u2) = (25.0f64.max(u_lo + 1.0), 35.0f64.max(u_lo + 2.0));
        let (f1, f2) = (f(u1).abs(), f(u2).abs());
        if f2 == 0.0 {
            u_hi = u2;
        } else {
            let slope = (f2 / f1.max(1e-300)).ln() / (u2 - u1);
            if slope >= -1e-3 {
                return Err(AnalyticError::NotNormalizable);
            }
            // truncate where the remaining tail mass is negligible
            let extra = (1e-20f64.ln() - 2.0 * f2.ln()) / (2.0 * slope);
            u_hi = (u2 + extra.max(0.0)).min(500.0);
        }
    }
    let integral = integrate_adaptive(|u| f(u) * f(u), u_lo, u_hi, 1e-12);
    if !(integral.is_finite() && integral > 0.0) {
        return Err(AnalyticError::NotNormalizable);
    }
    let constant = 1.0 / integral.sqrt();
    Ok((constant, move |u: f64| constant * f(u)))
}
