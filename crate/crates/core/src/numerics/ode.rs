//! Adaptive embedded Runge-Kutta 5(4) stepper (Dormand-Prince pair) for a
//! flattened 2x2 complex matrix state.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type State = [Complex64; 4];

const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

/// 5th-order weights (identical to the last A row: FSAL pair).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];

const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn axpy(y: &State, coeffs: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in coeffs {
        for i in 0..4 {
            out[i] += *c * k[i];
        }
    }
    out
}

/// Integrate `dy/dt = f(t, y)` from `t_grid[0]`, returning the state at every
/// grid time. The grid must be strictly ascending; the first entry maps to
/// `y0` unchanged.
pub fn integrate_grid<F: Fn(f64, &State) -> State>(
    f: F,
    y0: State,
    t_grid: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<Vec<State>> {
    let mut out = Vec::with_capacity(t_grid.len());
    if t_grid.is_empty() {
        return Ok(out);
    }
    out.push(y0);

    let mut t = t_grid[0];
    let mut y = y0;
    let mut h = 1e-4_f64;

    for &target in &t_grid[1..] {
        if target <= t {
            return Err(Error::InvalidParameter {
                name: "t_grid",
                value: target,
                reason: "grid times must be strictly ascending",
            });
        }
        while t < target {
            let h_min = 1e-14 * t.abs().max(1.0);
            let step = h.min(target - t);
            let mut k = [[Complex64::ZERO; 4]; 7];
            k[0] = f(t, &y);
            for stage in 0..6 {
                let coeffs: Vec<(f64, &State)> = (0..=stage)
                    .filter(|&j| A[stage][j] != 0.0)
                    .map(|j| (step * A[stage][j], &k[j]))
                    .collect();
                let y_stage = axpy(&y, &coeffs);
                k[stage + 1] = f(t + C[stage] * step, &y_stage);
            }
            let mut y5 = y;
            let mut y4 = y;
            for i in 0..4 {
                for (j, kj) in k.iter().enumerate() {
                    y5[i] += step * B5[j] * kj[i];
                    y4[i] += step * B4[j] * kj[i];
                }
            }
            let mut err_norm = 0.0_f64;
            for i in 0..4 {
                let scale = atol + rtol * y[i].norm().max(y5[i].norm());
                err_norm = err_norm.max((y5[i] - y4[i]).norm() / scale);
            }
            if err_norm <= 1.0 {
                t += step;
                y = y5;
                let grow = if err_norm == 0.0 {
                    5.0
                } else {
                    (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
                };
                h = (step * grow).max(h_min);
            } else {
                h = step * (0.9 * err_norm.powf(-0.2)).clamp(0.2, 1.0);
                if h < h_min {
                    return Err(Error::IntegrationFailure { t });
                }
            }
        }
        t = target;
        out.push(y);
    }
    Ok(out)
}
