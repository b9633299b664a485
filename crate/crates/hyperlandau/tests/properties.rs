//! Randomized structural properties: geometry of the embedding, level
//! counting, shape invariance, discrete operator adjointness and
//! polynomial endpoint values.

use hyperlandau::analytic::jacobi_eval;
use hyperlandau::model::{embed, max_level};
use hyperlandau::numeric::Grid;
use hyperlandau::susy::{
    ladder_apply, shape_invariance_residual, v1_constant_field, LadderDirection, Superpotential,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn embedding_stays_on_the_hyperboloid(
        u in 1e-3f64..20.0,
        phi in 0.0f64..(2.0 * std::f64::consts::PI),
        radius in 0.1f64..10.0,
    ) {
        let (x, y, z) = embed(u, phi, radius);
        let defect = (x * x + y * y - z * z + radius * radius).abs();
        // cancellation between sh² and ch² limits accuracy at large u
        prop_assert!(defect <= 1e-10 * radius * radius * u.cosh().powi(2));
        prop_assert!(z > 0.0);
    }

    #[test]
    fn level_count_is_monotone_and_bounded(a0 in 0.05f64..40.0, bump in 0.01f64..5.0) {
        let m = max_level(a0);
        prop_assert!((m as f64) < a0);
        prop_assert!(max_level(a0 + bump) >= m);
    }

    #[test]
    fn shape_invariance_holds_at_random_points(
        a0 in 0.2f64..8.0,
        extra in 0.1f64..6.0,
        u in 0.05f64..10.0,
    ) {
        let lambda = a0 + 1.0 + extra;
        let rel = shape_invariance_residual(a0, lambda, u).abs()
            / (1.0 + v1_constant_field(a0, lambda, u).abs());
        prop_assert!(rel <= 1e-10, "relative residual {rel}");
    }

    #[test]
    fn ladder_operators_are_discrete_adjoints(
        c1 in 2.2f64..3.8,
        c2 in 2.2f64..3.8,
        k1 in 10.0f64..40.0,
        k2 in 10.0f64..40.0,
    ) {
        // <L⁻f, g> = <f, L⁺g> up to O(h²) for functions supported away
        // from the grid ends
        let grid = Grid::new(1.0, 5.0, 2001).unwrap();
        let w = Superpotential::constant_field(5.0, 7.0);
        let f = grid.sample(|u| (-k1 * (u - c1) * (u - c1)).exp());
        let g = grid.sample(|u| (-k2 * (u - c2) * (u - c2)).exp());
        let lhs = ladder_apply(LadderDirection::Lower, &w, &f).unwrap().dot(&g);
        let rhs = f.dot(&ladder_apply(LadderDirection::Raise, &w, &g).unwrap());
        let scale = f.norm() * g.norm();
        prop_assert!((lhs - rhs).abs() <= 1e-5 * scale, "defect {}", (lhs - rhs).abs() / scale);
    }

    #[test]
    fn jacobi_endpoint_value_is_independent_of_second_parameter(
        n in 0u32..8,
        a in -0.45f64..6.0,
        b in -0.45f64..6.0,
        b2 in -0.45f64..6.0,
    ) {
        // P_n^{(a,b)}(1) = (a+1)(a+2)…(a+n)/n!
        let expect = (1..=n).fold(1.0, |p, k| p * (a + k as f64) / k as f64);
        let at_b = jacobi_eval(n, a, b, 1.0);
        let at_b2 = jacobi_eval(n, a, b2, 1.0);
        prop_assert!((at_b - expect).abs() <= 1e-10 * expect.abs().max(1.0));
        prop_assert!((at_b - at_b2).abs() <= 1e-10 * expect.abs().max(1.0));
    }
}
