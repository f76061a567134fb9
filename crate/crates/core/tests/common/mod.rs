//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's numerical paths.
#![allow(dead_code)]

pub const G: f64 = 6.674_30e-11;
pub const C: f64 = 299_792_458.0;
pub const C2: f64 = C * C;
pub const H: f64 = 6.626_070_15e-34;
pub const EV: f64 = 1.602_176_634e-19;
pub const ALPHA: f64 = 7.297_352_569_3e-3;
pub const M_E: f64 = 9.109_383_701_5e-31;

pub const M_EARTH: f64 = 5.9722e24;
pub const R_EARTH: f64 = 6.371e6;
pub const M_SUN: f64 = 1.9885e30;
pub const R_SUN: f64 = 6.957e8;
pub const AU: f64 = 1.495_978_707e11;
pub const G_STANDARD: f64 = 9.80665;
pub const ARCSEC_PER_RAD: f64 = 206_264.806_247_096_36;

/// Composite Simpson rule on [a, b] with `n` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * i as f64);
    }
    sum * h / 3.0
}

/// Deflection of a ray with impact parameter `b` in a spherically symmetric
/// medium, to first order along the straight path:
///
/// α(b) = 2b ∫_b^∞ |n′(r)| dr / (n(r) √(r² − b²))
///
/// evaluated with r = b / sin θ, which maps the range to θ ∈ (0, π/2] and
/// removes the endpoint singularity.
pub fn graded_index_deflection(b: f64, n: impl Fn(f64) -> f64, dn_dr: impl Fn(f64) -> f64) -> f64 {
    let integrand = |theta: f64| {
        if theta == 0.0 {
            return 0.0;
        }
        let r = b / theta.sin();
        dn_dr(r).abs() / (n(r) * theta.sin())
    };
    2.0 * b * simpson(integrand, 0.0, std::f64::consts::FRAC_PI_2, 20_000)
}

/// The same oracle for the point-mass medium n = 1 + GM/(r c²).
pub fn point_mass_deflection(gm: f64, b: f64) -> f64 {
    graded_index_deflection(b, |r| 1.0 + gm / (r * C2), |r| -gm / (r * r * C2))
}

/// Fine-structure binding energy in J, evaluated directly.
pub fn binding_energy(mass: f64, z: f64, n: f64, j_plus_half: f64) -> f64 {
    let a2 = ALPHA * ALPHA;
    a2 * mass * C2 / 2.0 * z * z / (n * n)
        * (1.0 + a2 * z * z / n * (1.0 / j_plus_half - 3.0 / (4.0 * n)))
}
