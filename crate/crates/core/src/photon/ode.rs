//! Dormand–Prince 5(4) with embedded error estimate.
//!
//! Fixed-size state; the caller owns the step-size policy so that it can mix
//! per-component error scales with geometric step limits.

/// Butcher tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
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
/// 5th-order weights (same as the last row of A; FSAL).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
/// B5 − B4.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

pub(crate) const SAFETY: f64 = 0.9;
pub(crate) const MIN_FACTOR: f64 = 0.2;
pub(crate) const MAX_FACTOR: f64 = 5.0;

pub(crate) struct Step<const N: usize> {
    pub y: [f64; N],
    pub err: [f64; N],
}

/// One trial step of size `h` from (t, y). The system is autonomous.
pub(crate) fn dopri5_step<const N: usize, F>(f: &F, y: &[f64; N], h: f64) -> Step<N>
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    let mut k = [[0.0; N]; 7];
    k[0] = f(y);
    for stage in 1..7 {
        let mut ys = *y;
        for (prev, a) in A[stage].iter().enumerate().take(stage) {
            if *a != 0.0 {
                for i in 0..N {
                    ys[i] += h * a * k[prev][i];
                }
            }
        }
        debug_assert!(C[stage] > 0.0);
        k[stage] = f(&ys);
    }
    let mut out = *y;
    let mut err = [0.0; N];
    for s in 0..7 {
        for i in 0..N {
            out[i] += h * B5[s] * k[s][i];
            err[i] += h * E[s] * k[s][i];
        }
    }
    Step { y: out, err }
}

/// Standard step-size update from a scaled error norm (≤ 1 accepts).
pub(crate) fn next_step_factor(norm: f64) -> f64 {
    if norm == 0.0 {
        MAX_FACTOR
    } else {
        (SAFETY * norm.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
    }
}
