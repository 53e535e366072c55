//! Gauss-Legendre quadrature rules of arbitrary order.

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], computed
/// by Newton iteration on the Legendre recurrence. Nodes are ascending.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess for the i-th root (descending order).
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                    let (_, d2) = legendre_with_derivative(n, x);
                    dp = d2;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
            nodes[i] = -x;
            weights[i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Rule mapped onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }
}

/// (P_n(x), P_n'(x)) via the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::GaussLegendre;
    use approx::assert_relative_eq;

    #[test]
    fn five_point_rule_matches_tables() {
        let rule = GaussLegendre::new(5);
        assert_relative_eq!(rule.nodes[4], 0.906_179_845_938_664, max_relative = 1e-13);
        assert_relative_eq!(rule.nodes[3], 0.538_469_310_105_683, max_relative = 1e-13);
        assert_eq!(rule.nodes[2], 0.0);
        assert_relative_eq!(rule.weights[2], 128.0 / 225.0, max_relative = 1e-13);
        assert_relative_eq!(rule.weights[4], 0.236_926_885_056_189, max_relative = 1e-12);
    }

    #[test]
    fn integrates_polynomials_exactly() {
        // n-point rule is exact through degree 2n-1.
        let rule = GaussLegendre::new(8);
        let value: f64 = rule.mapped(0.0, 2.0).map(|(x, w)| w * x.powi(15)).sum();
        assert_relative_eq!(value, 2.0_f64.powi(16) / 16.0, max_relative = 1e-12);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [1, 2, 17, 256] {
            let rule = GaussLegendre::new(n);
            let total: f64 = rule.weights.iter().sum();
            assert_relative_eq!(total, 2.0, max_relative = 1e-13);
        }
    }

    #[test]
    fn high_order_smooth_integrand() {
        let rule = GaussLegendre::new(1024);
        let value: f64 = rule
            .mapped(0.0, 40.0)
            .map(|(x, w)| w * x.powi(3) * (-x).exp())
            .sum();
        assert_relative_eq!(value, 6.0, max_relative = 1e-12);
    }
}
