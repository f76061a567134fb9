//! Newtonian point-mass potentials.
//!
//! A [`PotentialField`] superposes the exterior potentials of one or more
//! bodies. Field points are described by their radial distance to each body,
//! which is all the scalar formulas need.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::units::{Acceleration, Energy, Length, Mass, Potential, CODATA_2018};

/// Largest a/r accepted by the first-order atomic-scale correction.
pub const ATOMIC_SCALE_LIMIT: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GravityError {
    #[error("invalid body {name:?}: {reason}")]
    InvalidBody { name: String, reason: String },
    #[error("duplicate body name {0:?}")]
    DuplicateBody(String),
    #[error("unknown body {0:?}")]
    UnknownBody(String),
    #[error("potential field has no bodies")]
    EmptyField,
    #[error("field point {point:?} has no distance for body {body:?}")]
    MissingDistance { point: String, body: String },
    #[error("field point {point:?} lies inside {body:?}: r = {r} m < radius {radius} m")]
    InsideBody {
        point: String,
        body: String,
        r: f64,
        radius: f64,
    },
    #[error("atomic scale {a} m is not small against r = {r} m (a/r must be < {limit})")]
    ScaleTooLarge { a: f64, r: f64, limit: f64 },
    #[error("invalid length {0} m")]
    InvalidLength(f64),
    #[error("invalid mass {0} kg")]
    InvalidMass(f64),
    #[error("body registry {path}: {message}")]
    Registry { path: String, message: String },
}

/// A spherical source body.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CelestialBody {
    name: String,
    mass: Mass,
    radius: Length,
}

impl CelestialBody {
    pub fn new(name: impl Into<String>, mass: Mass, radius: Length) -> Result<Self, GravityError> {
        let name = name.into();
        let fail = |reason: &str| GravityError::InvalidBody {
            name: name.clone(),
            reason: reason.to_string(),
        };
        if name.trim().is_empty() {
            return Err(fail("empty name"));
        }
        if !(mass.value() > 0.0) {
            return Err(fail("mass must be positive"));
        }
        if !(radius.value() > 0.0) {
            return Err(fail("radius must be positive"));
        }
        Ok(Self { name, mass, radius })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mass(&self) -> Mass {
        self.mass
    }

    pub fn radius(&self) -> Length {
        self.radius
    }

    /// GM in m³/s².
    pub fn gm(&self) -> f64 {
        CODATA_2018.big_g() * self.mass.value()
    }

    /// -GM/r, without the exterior check.
    pub(crate) fn potential_at(&self, r: f64) -> f64 {
        -self.gm() / r
    }

    pub fn surface_potential(&self) -> Potential {
        Potential::raw(self.potential_at(self.radius.value()))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BodyRecord {
    name: String,
    mass_kg: f64,
    radius_m: f64,
}

/// Named bodies with unique names, in file order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BodyRegistry {
    bodies: Vec<CelestialBody>,
}

impl BodyRegistry {
    pub fn new(bodies: Vec<CelestialBody>) -> Result<Self, GravityError> {
        let mut seen = BTreeMap::new();
        for body in &bodies {
            if seen.insert(body.name().to_string(), ()).is_some() {
                return Err(GravityError::DuplicateBody(body.name().to_string()));
            }
        }
        Ok(Self { bodies })
    }

    /// Parses the `[{name, mass_kg, radius_m}, ...]` format.
    pub fn from_json_str(text: &str, origin: &str) -> Result<Self, GravityError> {
        let records: Vec<BodyRecord> =
            serde_json::from_str(text).map_err(|e| GravityError::Registry {
                path: origin.to_string(),
                message: e.to_string(),
            })?;
        let bodies = records
            .into_iter()
            .map(|r| {
                let mass =
                    Mass::new(r.mass_kg).map_err(|_| GravityError::InvalidMass(r.mass_kg))?;
                let radius =
                    Length::new(r.radius_m).map_err(|_| GravityError::InvalidLength(r.radius_m))?;
                CelestialBody::new(r.name, mass, radius)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(bodies)
    }

    pub fn load(path: &Path) -> Result<Self, GravityError> {
        let text = std::fs::read_to_string(path).map_err(|e| GravityError::Registry {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json_str(&text, &path.display().to_string())
    }

    pub fn get(&self, name: &str) -> Result<&CelestialBody, GravityError> {
        self.bodies
            .iter()
            .find(|b| b.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| GravityError::UnknownBody(name.to_string()))
    }

    pub fn bodies(&self) -> &[CelestialBody] {
        &self.bodies
    }

    /// Builds a field from a subset of the registry, in the order given.
    pub fn field<'a>(
        &self,
        names: impl IntoIterator<Item = &'a str>,
    ) -> Result<PotentialField, GravityError> {
        let bodies = names
            .into_iter()
            .map(|n| self.get(n).cloned())
            .collect::<Result<Vec<_>, _>>()?;
        PotentialField::new(bodies)
    }
}

/// A location given by its radial distance to each body of a field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldPoint {
    label: String,
    distances: Vec<(String, Length)>,
}

impl FieldPoint {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            distances: Vec::new(),
        }
    }

    pub fn with_distance(mut self, body: impl Into<String>, r: Length) -> Self {
        self.distances.push((body.into(), r));
        self
    }

    /// Point at `altitude` above a single body's surface.
    pub fn at_altitude(body: &CelestialBody, altitude: Length) -> Self {
        Self::new(format!("{}+{}m", body.name(), altitude.value()))
            .with_distance(body.name(), body.radius() + altitude)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn distances(&self) -> &[(String, Length)] {
        &self.distances
    }

    pub fn distance_to(&self, body: &str) -> Option<Length> {
        self.distances
            .iter()
            .find(|(name, _)| name.eq_ignore_ascii_case(body))
            .map(|(_, r)| *r)
    }
}

/// Superposition of point-mass potentials. Never empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialField {
    bodies: Vec<CelestialBody>,
}

impl PotentialField {
    pub fn new(bodies: Vec<CelestialBody>) -> Result<Self, GravityError> {
        if bodies.is_empty() {
            return Err(GravityError::EmptyField);
        }
        BodyRegistry::new(bodies.clone())?;
        Ok(Self { bodies })
    }

    pub fn single(body: CelestialBody) -> Self {
        Self { bodies: vec![body] }
    }

    pub fn bodies(&self) -> &[CelestialBody] {
        &self.bodies
    }

    /// Resolves and validates the exterior distance to every body.
    fn radii<'a>(
        &'a self,
        p: &'a FieldPoint,
    ) -> impl Iterator<Item = Result<(&'a CelestialBody, f64), GravityError>> + 'a {
        self.bodies.iter().map(move |body| {
            let r = p
                .distance_to(body.name())
                .ok_or_else(|| GravityError::MissingDistance {
                    point: p.label().to_string(),
                    body: body.name().to_string(),
                })?
                .value();
            if !(r >= body.radius().value()) {
                return Err(GravityError::InsideBody {
                    point: p.label().to_string(),
                    body: body.name().to_string(),
                    r,
                    radius: body.radius().value(),
                });
            }
            Ok((body, r))
        })
    }

    /// φ = Σ −GMᵢ/rᵢ.
    pub fn potential(&self, p: &FieldPoint) -> Result<Potential, GravityError> {
        let mut phi = 0.0;
        for item in self.radii(p) {
            let (body, r) = item?;
            phi += body.potential_at(r);
        }
        Ok(Potential::raw(phi))
    }

    /// φ(p1) − φ(p2).
    pub fn potential_difference(
        &self,
        p1: &FieldPoint,
        p2: &FieldPoint,
    ) -> Result<Potential, GravityError> {
        Ok(self.potential(p1)? - self.potential(p2)?)
    }

    /// Σ GMᵢ/rᵢ², each term along its own body's outward radial axis.
    pub fn gradient(&self, p: &FieldPoint) -> Result<Acceleration, GravityError> {
        let mut g = 0.0;
        for item in self.radii(p) {
            let (body, r) = item?;
            g += body.gm() / (r * r);
        }
        Ok(Acceleration::raw(g))
    }

    /// First-order change of φ across an atomic distance `a`: a·∂φ/∂r.
    pub fn atomic_scale_correction(
        &self,
        p: &FieldPoint,
        a: Length,
    ) -> Result<Potential, GravityError> {
        if !(a.value() >= 0.0) {
            return Err(GravityError::InvalidLength(a.value()));
        }
        for item in self.radii(p) {
            let (_, r) = item?;
            if a.value() / r >= ATOMIC_SCALE_LIMIT {
                return Err(GravityError::ScaleTooLarge {
                    a: a.value(),
                    r,
                    limit: ATOMIC_SCALE_LIMIT,
                });
            }
        }
        Ok(self.gradient(p)? * a)
    }

    /// E_int = m·φ.
    pub fn binding_energy(&self, m: Mass, p: &FieldPoint) -> Result<Energy, GravityError> {
        if !(m.value() >= 0.0) {
            return Err(GravityError::InvalidMass(m.value()));
        }
        Ok(m * self.potential(p)?)
    }
}
