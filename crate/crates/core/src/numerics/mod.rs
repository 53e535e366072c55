//! Internal numerical machinery: quadrature, root bracketing, an adaptive
//! Runge-Kutta stepper, Gauss-Legendre rules and special functions.

pub mod gauss;
pub mod ode;
pub mod quad;
pub mod roots;
pub mod special;
