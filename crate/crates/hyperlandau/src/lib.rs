//! Bound states of massless (Dirac-Weyl) and massive (Dirac) charges on the
//! upper sheet of a two-sheeted hyperboloid in a perpendicular magnetic field.
//!
//! The constant-field problem is a Landau system with a *finite* number of
//! levels. Two independent routes to the spectrum are provided:
//!
//! * [`analytic`] — closed forms from the SUSY factorization of the reduced
//!   radial problem (superpotential, partner potentials, Jacobi-polynomial
//!   eigenfunctions);
//! * [`numeric`] — a finite-difference discretization of the same partner
//!   Hamiltonians solved by Sturm bisection, used as a cross-check that never
//!   touches the closed forms.
//!
//! [`susy`] holds the ladder-operator machinery shared by both, [`dirac`]
//! lifts Dirac-Weyl solutions to the massive four-spinor problem, and
//! [`cli`] drives everything from the command line.

pub mod analytic;
pub mod cli;
pub mod dirac;
pub mod model;
pub mod numeric;
pub mod susy;
