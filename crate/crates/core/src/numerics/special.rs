//! Special functions.

/// Euler gamma function Γ(x) for real positive arguments.
///
/// Thin wrapper over the libm (musl) implementation, accurate to a few ulp
/// over the range used here (0 < x ≲ 10).
pub fn gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "gamma requires x > 0, got {x}");
    libm::tgamma(x)
}

#[cfg(test)]
mod tests {
    use super::gamma;
    use approx::assert_relative_eq;

    #[test]
    fn integer_values_exact() {
        assert_eq!(gamma(1.0), 1.0);
        assert_eq!(gamma(2.0), 1.0);
        assert_eq!(gamma(3.0), 2.0);
        assert_eq!(gamma(4.0), 6.0);
        assert_eq!(gamma(5.0), 24.0);
    }

    #[test]
    fn half_integer_values() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert_relative_eq!(gamma(0.5), sqrt_pi, max_relative = 1e-14);
        assert_relative_eq!(gamma(1.5), 0.5 * sqrt_pi, max_relative = 1e-14);
        assert_relative_eq!(gamma(2.5), 0.75 * sqrt_pi, max_relative = 1e-14);
    }
}
