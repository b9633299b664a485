//! Finite-difference oracle: grid types, tridiagonal discretization of the
//! partner Hamiltonians, Sturm-bisection eigensolve, inverse iteration and
//! quadrature. Everything here is independent of the closed forms in
//! [`crate::analytic`] so it can serve as a cross-check.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::susy::Superpotential;

#[derive(Debug, Error)]
pub enum NumericError {
    #[error("grid must satisfy 0 < u_min < u_max and count >= 16")]
    BadGrid,
    #[error("grid spacing h = {h} too coarse for eigensolve (need h <= 0.05)")]
    GridTooCoarse { h: f64 },
    #[error("grid too small: need at least {need} points, got {got}")]
    GridTooSmall { need: usize, got: usize },
    #[error("potential evaluates non-finite at u = {u}")]
    NonFinitePotential { u: f64 },
    #[error("sampled functions live on different grids")]
    GridMismatch,
    #[error("inverse iteration failed to converge")]
    ConvergenceFailure,
}

/// Uniform grid strictly inside (0, ∞).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub u_min: f64,
    pub u_max: f64,
    pub count: usize,
    pub h: f64,
}

impl Grid {
    // negated comparison so NaN input is rejected too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(u_min: f64, u_max: f64, count: usize) -> Result<Self, NumericError> {
        if !(u_min > 0.0) || !(u_max > u_min) || count < 16 {
            return Err(NumericError::BadGrid);
        }
        let h = (u_max - u_min) / (count - 1) as f64;
        Ok(Self {
            u_min,
            u_max,
            count,
            h,
        })
    }

    /// Default eigensolve grid: resolves the 1/u² region near the apex and
    /// the slow e^(−(A0−n)u) tail of the top level.
    pub fn default_for(a0: f64) -> Self {
        let slowest = a0 - crate::model::max_level(a0) as f64;
        let u_max = (40.0 / slowest).max(25.0);
        Grid::new(1e-3, u_max, 8000).expect("default grid is valid")
    }

    /// Accuracy floor for physical eigensolves.
    pub fn require_eigensolve_spacing(&self) -> Result<(), NumericError> {
        if self.h > 0.05 {
            Err(NumericError::GridTooCoarse { h: self.h })
        } else {
            Ok(())
        }
    }

    pub fn node(&self, i: usize) -> f64 {
        self.u_min + i as f64 * self.h
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.node(i))
    }

    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> SampledFunction {
        SampledFunction {
            grid: *self,
            values: self.nodes().map(f).collect(),
        }
    }
}

/// Function samples on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl SampledFunction {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.count],
        }
    }

    /// Continuum L² norm, trapezoid weights.
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Trapezoid inner product ∫ f g du.
    pub fn dot(&self, other: &SampledFunction) -> f64 {
        let n = self.values.len();
        let mut s = 0.0;
        for i in 0..n {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            s += w * self.values[i] * other.values[i];
        }
        s * self.grid.h
    }

    /// First derivative: centered second-order in the interior, one-sided
    /// second-order at the two ends.
    pub fn derivative(&self) -> Result<SampledFunction, NumericError> {
        let n = self.values.len();
        if n < 5 {
            return Err(NumericError::GridTooSmall { need: 5, got: n });
        }
        let h = self.grid.h;
        let v = &self.values;
        let mut d = vec![0.0; n];
        d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
        d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
        for i in 1..n - 1 {
            d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
        }
        Ok(SampledFunction {
            grid: self.grid,
            values: d,
        })
    }

    /// Second derivative: centered in the interior, one-sided second-order
    /// four-point stencils at the ends.
    pub fn second_derivative(&self) -> Result<SampledFunction, NumericError> {
        let n = self.values.len();
        if n < 5 {
            return Err(NumericError::GridTooSmall { need: 5, got: n });
        }
        let h2 = self.grid.h * self.grid.h;
        let v = &self.values;
        let mut d = vec![0.0; n];
        d[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
        d[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / h2;
        for i in 1..n - 1 {
            d[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2;
        }
        Ok(SampledFunction {
            grid: self.grid,
            values: d,
        })
    }

    pub fn scaled(&self, s: f64) -> SampledFunction {
        SampledFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    pub fn sub(&self, other: &SampledFunction) -> Result<SampledFunction, NumericError> {
        if self.grid != other.grid {
            return Err(NumericError::GridMismatch);
        }
        Ok(SampledFunction {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }
}

/// Symmetric tridiagonal matrix −D₂ + diag(V) with Dirichlet ends.
#[derive(Debug, Clone)]
pub struct TridiagonalOperator {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
}

/// 3-point Laplacian plus potential: diagonal[i] = 2/h² + V(u_i),
/// off_diagonal[i] = −1/h².
pub fn discretize<F: Fn(f64) -> f64>(
    potential: F,
    grid: &Grid,
) -> Result<TridiagonalOperator, NumericError> {
    let inv_h2 = 1.0 / (grid.h * grid.h);
    let mut diagonal = Vec::with_capacity(grid.count);
    for u in grid.nodes() {
        let v = potential(u);
        if !v.is_finite() {
            return Err(NumericError::NonFinitePotential { u });
        }
        diagonal.push(2.0 * inv_h2 + v);
    }
    Ok(TridiagonalOperator {
        diagonal,
        off_diagonal: vec![-inv_h2; grid.count - 1],
    })
}

impl TridiagonalOperator {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence via the
    /// signs of the LDLᵀ pivots).
    pub fn count_below(&self, x: f64) -> usize {
        let n = self.dim();
        let guard = 1e-300;
        let mut count = 0;
        let mut q = self.diagonal[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let q_safe = if q.abs() < guard {
                if q >= 0.0 {
                    guard
                } else {
                    -guard
                }
            } else {
                q
            };
            let e = self.off_diagonal[i - 1];
            q = (self.diagonal[i] - x) - e * e / q_safe;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off_diagonal[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off_diagonal[i].abs();
            }
            lo = lo.min(self.diagonal[i] - r);
            hi = hi.max(self.diagonal[i] + r);
        }
        (lo, hi)
    }

    /// Matrix-vector product with Dirichlet ends.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut s = self.diagonal[i] * v[i];
            if i > 0 {
                s += self.off_diagonal[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                s += self.off_diagonal[i] * v[i + 1];
            }
            out[i] = s;
        }
        out
    }
}

/// The `k` smallest eigenvalues, ascending, by per-index Sturm bisection.
/// Each is converged to machine precision relative to the matrix scale.
pub fn lowest_eigenvalues(op: &TridiagonalOperator, k: usize) -> Vec<f64> {
    let k = k.min(op.dim());
    let (lo0, hi0) = op.gershgorin_bounds();
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        // invariant: count_below(lo) <= j < count_below(hi)
        let (mut lo, mut hi) = (lo0, hi0);
        for _ in 0..120 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if op.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out
}

/// Eigenvector by inverse iteration at a converged eigenvalue. The result
/// is unit-L²-normalized (trapezoid weight h) with its first extremum
/// positive.
pub fn eigenvector(
    op: &TridiagonalOperator,
    eigenvalue: f64,
    grid: &Grid,
) -> Result<SampledFunction, NumericError> {
    let n = op.dim();
    if n != grid.count {
        return Err(NumericError::GridMismatch);
    }
    // deterministic, sign-varying start vector
    let mut v: Vec<f64> = (0..n)
        .map(|i| ((i * 2654435761) % 1000) as f64 / 1000.0 - 0.5)
        .collect();
    normalize_euclid(&mut v);
    let mut converged = false;
    for _ in 0..50 {
        let mut w = solve_shifted(op, eigenvalue, &v)?;
        let growth = normalize_euclid(&mut w);
        // residual ||(A - eps) w||
        let mut res = 0.0f64;
        let aw = op.apply(&w);
        for i in 0..n {
            res += (aw[i] - eigenvalue * w[i]).powi(2);
        }
        v = w;
        if res.sqrt() < 1e-8 * op_scale(op) || growth > 1e14 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(NumericError::ConvergenceFailure);
    }
    let mut f = SampledFunction {
        grid: *grid,
        values: v,
    };
    let norm = f.norm();
    if norm == 0.0 {
        return Err(NumericError::ConvergenceFailure);
    }
    let sign = first_extremum_sign(&f.values);
    f = f.scaled(sign / norm);
    Ok(f)
}

fn op_scale(op: &TridiagonalOperator) -> f64 {
    op.diagonal.iter().fold(0.0f64, |m, d| m.max(d.abs()))
}

fn normalize_euclid(v: &mut [f64]) -> f64 {
    let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
    1.0 / n.max(1e-300)
}

fn first_extremum_sign(v: &[f64]) -> f64 {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for i in 1..v.len() - 1 {
        if v[i].abs() > 1e-6 * max && (v[i] - v[i - 1]) * (v[i + 1] - v[i]) <= 0.0 {
            return v[i].signum();
        }
    }
    1.0
}

/// Solve (A − σ)x = b for tridiagonal A by LU with partial pivoting
/// (the near-singular solve is what makes inverse iteration work).
fn solve_shifted(
    op: &TridiagonalOperator,
    sigma: f64,
    b: &[f64],
) -> Result<Vec<f64>, NumericError> {
    let n = op.dim();
    let mut d: Vec<f64> = op.diagonal.iter().map(|v| v - sigma).collect();
    let mut dl = op.off_diagonal.clone(); // becomes the multipliers
    let mut du = op.off_diagonal.clone();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut swapped = vec![false; n.saturating_sub(1)];
    let tiny = 1e-300;

    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            let piv = if d[i] == 0.0 { tiny } else { d[i] };
            let fact = dl[i] / piv;
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
            if i + 2 < n {
                du2[i] = 0.0;
            }
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            let temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] *= -fact;
            }
            swapped[i] = true;
        }
    }

    let mut x = b.to_vec();
    for i in 0..n - 1 {
        if swapped[i] {
            let temp = x[i];
            x[i] = x[i + 1];
            x[i + 1] = temp - dl[i] * x[i];
        } else {
            x[i + 1] -= dl[i] * x[i];
        }
    }
    let safe = |v: f64| if v == 0.0 { tiny } else { v };
    x[n - 1] /= safe(d[n - 1]);
    if n >= 2 {
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / safe(d[n - 2]);
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / safe(d[i]);
    }
    Ok(x)
}

/// Action of the off-diagonal first-order matrix operator on a radial pair
/// (g₁, g₂): returns (L⁺g₂/R, L⁻g₁/R). Applied twice it reproduces the
/// decoupled second-order pair up to O(h²).
pub fn apply_weyl_operator(
    g1: &SampledFunction,
    g2: &SampledFunction,
    w: &Superpotential,
    radius: f64,
) -> Result<(SampledFunction, SampledFunction), NumericError> {
    if g1.grid != g2.grid {
        return Err(NumericError::GridMismatch);
    }
    let upper = crate::susy::ladder_apply(crate::susy::LadderDirection::Raise, w, g2)?;
    let lower = crate::susy::ladder_apply(crate::susy::LadderDirection::Lower, w, g1)?;
    Ok((upper.scaled(1.0 / radius), lower.scaled(1.0 / radius)))
}

/// Trapezoid integral of the samples.
pub fn quadrature(f: &SampledFunction) -> f64 {
    let n = f.values.len();
    let mut s = 0.0;
    for i in 0..n {
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        s += w * f.values[i];
    }
    s * f.grid.h
}

/// Richardson-refined trapezoid: combines the full grid with its
/// every-other-point coarsening, cancelling the O(h²) term. Requires an odd
/// sample count so the coarse grid lands on nodes.
pub fn quadrature_refined(f: &SampledFunction) -> f64 {
    let n = f.values.len();
    if n < 5 || n.is_multiple_of(2) {
        return quadrature(f);
    }
    let fine = quadrature(f);
    let mut coarse = 0.0;
    let m = n.div_ceil(2);
    for j in 0..m {
        let w = if j == 0 || j == m - 1 { 0.5 } else { 1.0 };
        coarse += w * f.values[2 * j];
    }
    coarse *= 2.0 * f.grid.h;
    (4.0 * fine - coarse) / 3.0
}

/// Adaptive composite Gauss-Legendre integration of `f` over [lo, hi]:
/// panel count doubles until two successive estimates agree to `rel_tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64) -> f64 {
    let mut panels = 8;
    let mut prev = gauss_composite(&f, lo, hi, panels);
    for _ in 0..12 {
        panels *= 2;
        let cur = gauss_composite(&f, lo, hi, panels);
        if (cur - prev).abs() <= rel_tol * cur.abs().max(1e-300) {
            return cur;
        }
        prev = cur;
    }
    prev
}

fn gauss_composite<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, panels: usize) -> f64 {
    let (nodes, weights) = gauss_legendre_10();
    let w_panel = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = lo + p as f64 * w_panel;
        let c = a + 0.5 * w_panel;
        let half = 0.5 * w_panel;
        let mut s = 0.0;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            s += w * f(c + half * x);
        }
        total += s * half;
    }
    total
}

// 10-point Gauss-Legendre rule on [-1, 1].
#[allow(clippy::excessive_precision)]
fn gauss_legendre_10() -> ([f64; 10], [f64; 10]) {
    let half = [
        (0.148_874_338_981_631_21, 0.295_524_224_714_752_87),
        (0.433_395_394_129_247_19, 0.269_266_719_309_996_36),
        (0.679_409_568_299_024_41, 0.219_086_362_515_982_04),
        (0.865_063_366_688_984_51, 0.149_451_349_150_580_59),
        (0.973_906_528_517_171_72, 0.066_671_344_308_688_14),
    ];
    let mut nodes = [0.0; 10];
    let mut weights = [0.0; 10];
    for (i, (x, w)) in half.iter().enumerate() {
        nodes[2 * i] = -x;
        nodes[2 * i + 1] = *x;
        weights[2 * i] = *w;
        weights[2 * i + 1] = *w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn discrete_laplacian_spectrum_matches_closed_form() {
        // V = 0: eigenvalues (4/h²) sin²(kπ/(2(n+1)))
        let grid = Grid::new(0.05, 0.05 + 0.05 * 99.0, 100).unwrap();
        let op = discretize(|_| 0.0, &grid).unwrap();
        let n = grid.count;
        let eigs = lowest_eigenvalues(&op, 5);
        for (idx, ev) in eigs.iter().enumerate() {
            let k = (idx + 1) as f64;
            let exact = 4.0 / (grid.h * grid.h)
                * ((k * std::f64::consts::PI / (2.0 * (n as f64 + 1.0))).sin()).powi(2);
            assert_relative_eq!(*ev, exact, epsilon = 1e-10 * (1.0 + exact.abs()));
        }
    }
}
