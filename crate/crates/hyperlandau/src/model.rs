//! Physical parameters, quantum numbers and their admissibility rules.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Physical constants and geometry. Defaults are natural units
/// (hbar = c = v_F = e = R = 1, mass = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub hbar: f64,
    pub c: f64,
    pub v_f: f64,
    pub e_charge: f64,
    /// Pseudo-radius of the hyperboloid x² + y² − z² = −R².
    pub radius: f64,
    /// Particle mass; exactly 0 selects the Dirac-Weyl (massless) limit.
    pub mass: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            c: 1.0,
            v_f: 1.0,
            e_charge: 1.0,
            radius: 1.0,
            mass: 1.0,
        }
    }
}

impl SystemParams {
    pub fn is_valid(&self) -> bool {
        self.hbar > 0.0
            && self.c > 0.0
            && self.v_f > 0.0
            && self.e_charge > 0.0
            && self.radius > 0.0
            && self.mass >= 0.0
    }
}

/// Dimensionless field intensity A0 of the constant-field vector potential
/// A(u) = −(cħ/eR) A0 coth u.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub a0: f64,
}

impl FieldConfig {
    pub fn new(a0: f64) -> Result<Self, ValidationIssue> {
        if a0 > 0.0 {
            Ok(Self { a0 })
        } else {
            Err(ValidationIssue::NonPositiveA0 { a0 })
        }
    }

    /// B0 = A0 cħ/e; the field value is B = −B0/R².
    pub fn b0(&self, params: &SystemParams) -> f64 {
        self.a0 * params.c * params.hbar / params.e_charge
    }

    pub fn field_value(&self, params: &SystemParams) -> f64 {
        -self.b0(params) / (params.radius * params.radius)
    }
}

/// Angular momentum eigenvalue λ (stored doubled so half-odd values are
/// exact) and level index n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub two_lambda: i64,
    pub n: u32,
}

impl QuantumNumbers {
    pub fn new(two_lambda: i64, n: u32) -> Self {
        Self { two_lambda, n }
    }

    pub fn lambda(&self) -> f64 {
        self.two_lambda as f64 / 2.0
    }

    /// λ is "physical" when it is a half odd integer (two_lambda odd).
    pub fn is_half_odd(&self) -> bool {
        self.two_lambda.rem_euclid(2) == 1
    }
}

/// Largest admissible level index: the integer part of A0, or A0 − 1 when
/// A0 is itself an integer, so the result is always strictly below A0.
pub fn max_level(a0: f64) -> u32 {
    debug_assert!(a0 > 0.0);
    let floor = a0.floor();
    let m = if floor == a0 { floor - 1.0 } else { floor };
    m.max(0.0) as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum ValidationIssue {
    NonPositiveA0 {
        a0: f64,
    },
    /// λ ≤ A0: no normalizable bound states.
    LambdaTooSmall {
        lambda: f64,
        a0: f64,
    },
    LevelOutOfRange {
        n: u32,
        max: u32,
    },
    /// Warning only: λ is not a half odd integer.
    NonHalfOddLambda {
        two_lambda: i64,
    },
    NonPositiveParam {
        name: &'static str,
    },
}

impl ValidationIssue {
    pub fn is_warning(&self) -> bool {
        matches!(self, ValidationIssue::NonHalfOddLambda { .. })
    }
}

impl std::fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValidationIssue::NonPositiveA0 { a0 } => write!(f, "A0 = {a0} must be > 0"),
            ValidationIssue::LambdaTooSmall { lambda, a0 } => {
                write!(f, "lambda = {lambda} must exceed A0 = {a0}")
            }
            ValidationIssue::LevelOutOfRange { n, max } => {
                write!(f, "level n = {n} exceeds max admissible level {max}")
            }
            ValidationIssue::NonHalfOddLambda { two_lambda } => {
                write!(f, "lambda = {}/2 is not a half odd integer", two_lambda)
            }
            ValidationIssue::NonPositiveParam { name } => {
                write!(f, "system parameter {name} must be positive")
            }
        }
    }
}

/// Result of checking a full parameter set against the admissibility rules.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.issues.iter().all(|i| i.is_warning())
    }

    pub fn warnings(&self) -> impl Iterator<Item = &ValidationIssue> {
        self.issues.iter().filter(|i| i.is_warning())
    }

    pub fn errors(&self) -> impl Iterator<Item = &ValidationIssue> {
        self.issues.iter().filter(|i| !i.is_warning())
    }
}

/// Aggregate admissibility check. Failures are returned, not thrown; the
/// half-odd-λ condition is reported at warning severity only.
// negated comparison so NaN input is rejected too
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn validate(
    params: &SystemParams,
    field: &FieldConfig,
    qn: &QuantumNumbers,
) -> ValidationReport {
    let mut issues = Vec::new();
    for (name, v) in [
        ("hbar", params.hbar),
        ("c", params.c),
        ("v_F", params.v_f),
        ("e", params.e_charge),
        ("R", params.radius),
    ] {
        if !(v > 0.0) {
            issues.push(ValidationIssue::NonPositiveParam { name });
        }
    }
    if params.mass < 0.0 {
        issues.push(ValidationIssue::NonPositiveParam { name: "mass" });
    }
    if !(field.a0 > 0.0) {
        issues.push(ValidationIssue::NonPositiveA0 { a0: field.a0 });
    } else {
        let lambda = qn.lambda();
        if lambda <= field.a0 {
            issues.push(ValidationIssue::LambdaTooSmall {
                lambda,
                a0: field.a0,
            });
        }
        let max = max_level(field.a0);
        if qn.n > max {
            issues.push(ValidationIssue::LevelOutOfRange { n: qn.n, max });
        }
    }
    if !qn.is_half_odd() {
        issues.push(ValidationIssue::NonHalfOddLambda {
            two_lambda: qn.two_lambda,
        });
    }
    ValidationReport { issues }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("validation failed: {0:?}")]
    Invalid(Vec<ValidationIssue>),
}

/// Cartesian point on the upper hyperboloid sheet for coordinates (u, φ):
/// x = R sinh u cos φ, y = R sinh u sin φ, z = R cosh u.
pub fn embed(u: f64, phi: f64, radius: f64) -> (f64, f64, f64) {
    let (sh, ch) = (u.sinh(), u.cosh());
    (
        radius * sh * phi.cos(),
        radius * sh * phi.sin(),
        radius * ch,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn max_level_integer_and_fractional() {
        assert_eq!(max_level(5.0), 4);
        assert_eq!(max_level(5.5), 5);
        assert_eq!(max_level(0.5), 0);
        assert_eq!(max_level(1.0), 0);
    }

    #[test]
    fn max_level_always_below_a0() {
        for i in 1..500 {
            let a0 = i as f64 * 0.037;
            assert!((max_level(a0) as f64) < a0, "a0 = {a0}");
        }
    }

    #[test]
    fn validate_fig1_parameters_warn_only() {
        // λ = 7 with A0 = 5: integer λ, accepted with a warning.
        let report = validate(
            &SystemParams::default(),
            &FieldConfig::new(5.0).unwrap(),
            &QuantumNumbers::new(14, 2),
        );
        assert!(report.passed());
        assert_eq!(report.warnings().count(), 1);
        assert!(matches!(
            report.issues[0],
            ValidationIssue::NonHalfOddLambda { .. }
        ));
    }

    #[test]
    fn validate_lambda_too_small() {
        let report = validate(
            &SystemParams::default(),
            &FieldConfig::new(5.0).unwrap(),
            &QuantumNumbers::new(8, 0),
        );
        assert!(!report.passed());
        assert!(report
            .errors()
            .any(|i| matches!(i, ValidationIssue::LambdaTooSmall { .. })));
    }

    #[test]
    fn validate_level_out_of_range() {
        let report = validate(
            &SystemParams::default(),
            &FieldConfig::new(5.0).unwrap(),
            &QuantumNumbers::new(14, 5),
        );
        assert!(!report.passed());
        assert!(report
            .errors()
            .any(|i| matches!(i, ValidationIssue::LevelOutOfRange { n: 5, max: 4 })));
    }

    #[test]
    fn embed_apex_and_known_point() {
        let (x, y, z) = embed(1e-14, 0.0, 1.0);
        assert!(x.abs() < 1e-13 && y.abs() < 1e-13);
        assert_relative_eq!(z, 1.0, max_relative = 1e-12);

        let (x, y, z) = embed(1.0, 0.0, 1.0);
        assert_relative_eq!(x, 1.1752011936438014, max_relative = 1e-14);
        assert_eq!(y, 0.0);
        assert_relative_eq!(z, 1.5430806348152437, max_relative = 1e-14);

        let (x, y, z) = embed(1.0, std::f64::consts::FRAC_PI_2, 2.0);
        assert!(x.abs() < 1e-14);
        assert_relative_eq!(y, 2.0 * 1.1752011936438014, max_relative = 1e-14);
        assert_relative_eq!(z, 2.0 * 1.5430806348152437, max_relative = 1e-14);
    }

    #[test]
    fn half_odd_classification() {
        assert!(QuantumNumbers::new(13, 0).is_half_odd());
        assert!(QuantumNumbers::new(-13, 0).is_half_odd());
        assert!(!QuantumNumbers::new(14, 0).is_half_odd());
    }

    #[test]
    fn field_derived_quantities() {
        let p = SystemParams::default();
        let f = FieldConfig::new(5.0).unwrap();
        assert_eq!(f.b0(&p), 5.0);
        assert_eq!(f.field_value(&p), -5.0);
        assert!(FieldConfig::new(0.0).is_err());
        assert!(FieldConfig::new(-1.0).is_err());
    }
}
