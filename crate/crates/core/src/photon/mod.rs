//! Photons that gravitate through their energy-equivalent mass.
//!
//! Under this hypothesis a photon of frequency ν carries mass hν/c², its
//! frequency changes by ν·Δφ/c² between two points, and light slows to
//! c′ = c/(1 − φ/c²) inside a potential well. The last relation makes the
//! vacuum around a body a graded-index medium with n = 1 − φ/c², which
//! [`trace_ray`] integrates to obtain the bending of a passing ray.
//!
//! The deflection produced this way is the Newtonian-equivalent value
//! 2GM/(bc²), half the general-relativistic one.

mod ode;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gravity::CelestialBody;
use crate::spectra::{weak_field_ratio, SpectraError};
use crate::units::{Frequency, Length, Mass, Potential, Time, UnitsError, Velocity, CODATA_2018};

pub const ARCSEC_PER_RAD: f64 = 180.0 * 3600.0 / std::f64::consts::PI;

/// Terminating closer than this multiple of the impact parameter leaves a
/// measurable part of the far-field bending unintegrated.
pub const MIN_TERMINATION_FACTOR: f64 = 200.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhotonError {
    #[error("photon frequency must be positive and finite, got {0} Hz")]
    InvalidFrequency(f64),
    #[error(transparent)]
    Field(#[from] SpectraError),
    #[error(transparent)]
    Units(#[from] UnitsError),
    #[error("invalid ray: {0}")]
    InvalidRay(String),
    #[error("relative tolerance {0} outside [1e-12, 1e-6]")]
    Tolerance(f64),
    #[error("ray hit {body}: closest approach {closest_approach_m} m < radius {radius_m} m")]
    Impact {
        body: String,
        closest_approach_m: f64,
        radius_m: f64,
    },
    #[error("integrator failed to converge: {0}")]
    Convergence(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Photon {
    frequency: Frequency,
}

impl Photon {
    pub fn new(frequency: Frequency) -> Result<Self, PhotonError> {
        let nu = frequency.value();
        if !(nu.is_finite() && nu > 0.0) {
            return Err(PhotonError::InvalidFrequency(nu));
        }
        Ok(Self { frequency })
    }

    pub fn frequency(&self) -> Frequency {
        self.frequency
    }
}

/// m_ph = hν/c².
pub fn photon_mass(p: &Photon) -> Mass {
    (p.frequency * CODATA_2018.h()) / CODATA_2018.c_squared()
}

/// Δm′ = m_ph·Δφ/c². Δφ may have either sign.
pub fn photon_mass_change(p: &Photon, delta_phi: Potential) -> Result<Mass, PhotonError> {
    let x = (delta_phi.checked()? / CODATA_2018.c_squared()).value();
    if x.abs() >= 1.0 {
        return Err(SpectraError::StrongField(x.abs()).into());
    }
    Ok(photon_mass(p) * x)
}

/// c′ = c/(1 − φ/c²).
pub fn local_light_speed(phi: Potential) -> Result<Velocity, PhotonError> {
    let x = weak_field_ratio(phi)?;
    Ok(CODATA_2018.c() / (1.0 - x))
}

/// c(1 + φ/c²), the first-order form of [`local_light_speed`].
pub fn linearized_light_speed(phi: Potential) -> Result<Velocity, PhotonError> {
    let x = weak_field_ratio(phi)?;
    Ok(CODATA_2018.c() * (1.0 + x))
}

/// Refractive index c/c′ = 1 − φ/c².
pub fn refractive_index(phi: Potential) -> Result<f64, PhotonError> {
    Ok(1.0 - weak_field_ratio(phi)?)
}

/// Δν = ν(φ₁ − φ₂)/c² for travel from φ₁ to φ₂.
pub fn photon_frequency_shift(
    p: &Photon,
    phi_from: Potential,
    phi_to: Potential,
) -> Result<Frequency, PhotonError> {
    weak_field_ratio(phi_from)?;
    weak_field_ratio(phi_to)?;
    let x = (phi_from - phi_to) / CODATA_2018.c_squared();
    Ok((p.frequency * x).checked()?)
}

/// A body fixed in the ray plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlacedBody {
    pub body: CelestialBody,
    pub position: [f64; 2],
}

impl PlacedBody {
    pub fn at_origin(body: CelestialBody) -> Self {
        Self {
            body,
            position: [0.0, 0.0],
        }
    }
}

/// Initial conditions for a planar ray. Coordinates in metres; the
/// termination circle is centred on the coordinate origin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayPath {
    start: [f64; 2],
    direction: [f64; 2],
    bodies: Vec<PlacedBody>,
    termination_radius: Length,
}

impl RayPath {
    pub fn new(
        start: [f64; 2],
        direction: [f64; 2],
        bodies: Vec<PlacedBody>,
        termination_radius: Length,
    ) -> Result<Self, PhotonError> {
        if !start.iter().chain(&direction).all(|v| v.is_finite()) {
            return Err(PhotonError::InvalidRay(
                "non-finite start or direction".into(),
            ));
        }
        let norm = direction[0].hypot(direction[1]);
        if (norm - 1.0).abs() > 1e-12 {
            return Err(PhotonError::InvalidRay(format!(
                "direction must be a unit vector, |d| = {norm}"
            )));
        }
        for placed in &bodies {
            let d = dist(start, placed.position);
            if d <= placed.body.radius().value() {
                return Err(PhotonError::InvalidRay(format!(
                    "start lies inside {}",
                    placed.body.name()
                )));
            }
        }
        let rt = termination_radius.value();
        if !(rt > 0.0) {
            return Err(PhotonError::InvalidRay(format!(
                "termination radius must be positive, got {rt}"
            )));
        }
        if start[0].hypot(start[1]) > rt * (1.0 + 1e-12) {
            return Err(PhotonError::InvalidRay(
                "start lies outside the termination radius".into(),
            ));
        }
        Ok(Self {
            start,
            direction,
            bodies,
            termination_radius,
        })
    }

    /// A ray travelling in +x that would pass `body` (at the origin) at
    /// distance `impact` on the −y side, started and stopped on a circle of
    /// radius `termination_factor × impact`. Bending is counterclockwise.
    pub fn past_body(
        body: CelestialBody,
        impact: Length,
        termination_factor: f64,
    ) -> Result<Self, PhotonError> {
        let b = impact.value();
        if !(b > 0.0 && b.is_finite()) {
            return Err(PhotonError::InvalidRay(format!(
                "impact parameter must be positive, got {b}"
            )));
        }
        if !(termination_factor >= MIN_TERMINATION_FACTOR) {
            return Err(PhotonError::InvalidRay(format!(
                "termination factor {termination_factor} < {MIN_TERMINATION_FACTOR}"
            )));
        }
        let rt = termination_factor * b;
        let x0 = -(rt * rt - b * b).sqrt();
        Self::new(
            [x0, -b],
            [1.0, 0.0],
            vec![PlacedBody::at_origin(body)],
            Length::new(rt)?,
        )
    }

    /// Mirror image across the x axis.
    pub fn mirrored(&self) -> Self {
        let flip = |v: [f64; 2]| [v[0], -v[1]];
        Self {
            start: flip(self.start),
            direction: flip(self.direction),
            bodies: self
                .bodies
                .iter()
                .map(|p| PlacedBody {
                    body: p.body.clone(),
                    position: flip(p.position),
                })
                .collect(),
            termination_radius: self.termination_radius,
        }
    }

    pub fn start(&self) -> [f64; 2] {
        self.start
    }

    pub fn direction(&self) -> [f64; 2] {
        self.direction
    }

    pub fn bodies(&self) -> &[PlacedBody] {
        &self.bodies
    }

    pub fn termination_radius(&self) -> Length {
        self.termination_radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepControl {
    /// Relative tolerance of the embedded error estimate, in [1e-12, 1e-6].
    pub rel_tol: f64,
    /// Fraction of a body radius a limb-grazing ray may dip below the
    /// surface before the trace reports an impact. The refracted ray passes
    /// closer than its impact parameter by about GM/c².
    pub grazing_tolerance: f64,
    /// Largest step as a fraction of the distance to the nearest body centre.
    pub max_step_fraction: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            grazing_tolerance: 1e-5,
            max_step_fraction: 0.25,
            max_steps: 1_000_000,
        }
    }
}

impl StepControl {
    pub fn with_tolerance(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RayResult {
    /// Counterclockwise rotation of the direction vector, radians.
    pub deflection_angle: f64,
    /// Accumulated local error estimate of the direction, radians.
    pub deflection_error: f64,
    pub transit_time: Time,
    pub straight_line_time: Time,
    pub closest_approach: Length,
    pub steps: usize,
}

impl RayResult {
    pub fn deflection_arcsec(&self) -> f64 {
        self.deflection_angle * ARCSEC_PER_RAD
    }

    pub fn time_excess(&self) -> Time {
        self.transit_time - self.straight_line_time
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Distance from `c` to the segment a–b.
fn segment_distance(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ac = [c[0] - a[0], c[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return dist(a, c);
    }
    let t = ((ac[0] * ab[0] + ac[1] * ab[1]) / len2).clamp(0.0, 1.0);
    dist([a[0] + t * ab[0], a[1] + t * ab[1]], c)
}

struct Medium {
    /// (GM/c², position) per body.
    sources: Vec<(f64, [f64; 2])>,
}

impl Medium {
    fn new(bodies: &[PlacedBody]) -> Self {
        let c2 = CODATA_2018.c_squared().value();
        Self {
            sources: bodies
                .iter()
                .map(|p| (p.body.gm() / c2, p.position))
                .collect(),
        }
    }

    /// n and ∇n at `x`.
    fn index(&self, x: [f64; 2]) -> (f64, [f64; 2]) {
        let mut n = 1.0;
        let mut grad = [0.0, 0.0];
        for &(m, pos) in &self.sources {
            let dx = x[0] - pos[0];
            let dy = x[1] - pos[1];
            let r = dx.hypot(dy);
            n += m / r;
            let g = -m / (r * r * r);
            grad[0] += g * dx;
            grad[1] += g * dy;
        }
        (n, grad)
    }

    /// State [x, y, px, py, t] with p = n·dx/ds, in arc length s.
    fn derivative(&self, y: &[f64; 5]) -> [f64; 5] {
        let (n, grad) = self.index([y[0], y[1]]);
        let c = CODATA_2018.light_speed;
        [y[2] / n, y[3] / n, grad[0], grad[1], n / c]
    }
}

/// Integrates the eikonal ray equation d/ds(n·dx/ds) = ∇n through the
/// medium n = 1 − φ/c² until the ray leaves the termination circle.
pub fn trace_ray(path: &RayPath, control: &StepControl) -> Result<RayResult, PhotonError> {
    let rtol = control.rel_tol;
    if !(1e-12..=1e-6).contains(&rtol) {
        return Err(PhotonError::Tolerance(rtol));
    }
    let medium = Medium::new(&path.bodies);
    let rt = path.termination_radius.value();
    let c = CODATA_2018.light_speed;

    let (n0, _) = medium.index(path.start);
    let mut y = [
        path.start[0],
        path.start[1],
        n0 * path.direction[0],
        n0 * path.direction[1],
        0.0,
    ];

    let nearest_body = |x: [f64; 2]| -> f64 {
        path.bodies
            .iter()
            .map(|p| dist(x, p.position))
            .fold(f64::INFINITY, f64::min)
    };
    let step_limit = |x: [f64; 2]| -> f64 {
        let d = nearest_body(x);
        if d.is_finite() {
            control.max_step_fraction * d
        } else {
            control.max_step_fraction * rt
        }
    };
    // length scale for position errors: the smallest geometric feature
    let length_scale = path
        .bodies
        .iter()
        .map(|p| p.body.radius().value())
        .fold(rt, f64::min);
    let time_scale = length_scale / c;

    let mut closest: Vec<f64> = path
        .bodies
        .iter()
        .map(|p| dist(path.start, p.position))
        .collect();
    let mut closest_origin = path.start[0].hypot(path.start[1]);

    let mut h = 0.01 * step_limit(path.start);
    let mut s = 0.0;
    let mut deflection_error = 0.0;
    let mut steps = 0usize;

    let f = |state: &[f64; 5]| medium.derivative(state);

    loop {
        if steps >= control.max_steps {
            return Err(PhotonError::Convergence(format!(
                "exceeded {} steps",
                control.max_steps
            )));
        }
        let x = [y[0], y[1]];
        h = h.min(step_limit(x));
        if h <= 1e-12 * (s + rt) {
            return Err(PhotonError::Convergence(format!(
                "step size underflow at s = {s} m"
            )));
        }

        let trial = ode::dopri5_step(&f, &y, h);
        let pnorm = y[2].hypot(y[3]).max(trial.y[2].hypot(trial.y[3]));
        let mut norm: f64 = 0.0;
        for (i, err) in trial.err.iter().enumerate() {
            let scale = match i {
                0 | 1 => rtol * y[i].abs().max(trial.y[i].abs()).max(length_scale),
                2 | 3 => rtol * pnorm,
                _ => rtol * y[i].abs().max(trial.y[i].abs()).max(time_scale),
            };
            norm = norm.max((err / scale).abs());
        }
        if !norm.is_finite() {
            h *= ode::MIN_FACTOR;
            continue;
        }
        if norm > 1.0 {
            h *= ode::next_step_factor(norm).min(1.0);
            continue;
        }

        // accepted
        let x_new = [trial.y[0], trial.y[1]];
        for (d, placed) in closest.iter_mut().zip(&path.bodies) {
            *d = d.min(segment_distance(x, x_new, placed.position));
            let radius = placed.body.radius().value();
            if *d < radius * (1.0 - control.grazing_tolerance) {
                return Err(PhotonError::Impact {
                    body: placed.body.name().to_string(),
                    closest_approach_m: *d,
                    radius_m: radius,
                });
            }
        }
        closest_origin = closest_origin.min(segment_distance(x, x_new, [0.0, 0.0]));

        // direction error: component of the p error transverse to p
        let (px, py) = (trial.y[2], trial.y[3]);
        let pn = px.hypot(py);
        deflection_error += ((trial.err[3] * px - trial.err[2] * py) / (pn * pn)).abs();

        y = trial.y;
        s += h;
        steps += 1;
        h *= ode::next_step_factor(norm);

        let r = y[0].hypot(y[1]);
        let outward = y[0] * y[2] + y[1] * y[3] > 0.0;
        if r >= rt && outward {
            break;
        }
    }

    let d_in = path.direction;
    let d_out = [y[2], y[3]];
    let cross = d_in[0] * d_out[1] - d_in[1] * d_out[0];
    let dot = d_in[0] * d_out[0] + d_in[1] * d_out[1];
    let deflection_angle = cross.atan2(dot);
    // angle evaluation itself is good to a few ulp
    let deflection_error =
        deflection_error + 4.0 * f64::EPSILON * deflection_angle.abs().max(1e-300);

    let chord = dist(path.start, [y[0], y[1]]);
    let closest_approach =
        closest
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
            .min(if path.bodies.is_empty() {
                closest_origin
            } else {
                f64::INFINITY
            });

    Ok(RayResult {
        deflection_angle,
        deflection_error,
        transit_time: Time::new(y[4])?,
        straight_line_time: Time::new(chord / c)?,
        closest_approach: Length::new(closest_approach)?,
        steps,
    })
}

/// Traces one ray per impact parameter. Output order follows `impacts`.
pub fn deflection_sweep(
    body: &CelestialBody,
    impacts: &[Length],
    termination_factor: f64,
    control: &StepControl,
) -> Vec<Result<RayResult, PhotonError>> {
    impacts
        .par_iter()
        .map(|b| {
            let path = RayPath::past_body(body.clone(), *b, termination_factor)?;
            trace_ray(&path, control)
        })
        .collect()
}
