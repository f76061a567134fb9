//! Bound emitters in a gravitational potential.
//!
//! The emitter's effective mass is m(1 + φ/c²). Hydrogen-like levels are
//! evaluated with the fine-structure expansion
//!
//! ```text
//! E = (α² m c² / 2)(Z²/n²)[1 + (α²Z²/n)(1/(j + 1/2) − 3/(4n))]
//! ```
//!
//! truncated after the bracket term. Because E is linear in the mass, every
//! line shifts by the same fraction φ/c².

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::units::{
    energy_to_frequency, Dimensionless, Energy, Frequency, Mass, Potential, UnitsError, CODATA_2018,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("strong-field potential: |φ|/c² = {0} must be < 1")]
    StrongField(f64),
    #[error("potential must be ≤ 0 for an attractive field, got {0} m^2/s^2")]
    RepulsivePotential(f64),
    #[error("invalid quantum state: {0}")]
    InvalidState(String),
    #[error("αZ = {0} is outside the perturbative domain (must be < 1)")]
    NonPerturbative(f64),
    #[error("transition needs a positive photon energy, got {0} J")]
    Ordering(f64),
    #[error("transition between different nuclear charges Z = {0} and Z = {1}")]
    ChargeMismatch(u32, u32),
    #[error("invalid emitter: {0}")]
    InvalidEmitter(String),
    #[error(transparent)]
    Units(#[from] UnitsError),
}

/// Checks φ ≤ 0 and |φ|/c² < 1, returning φ/c².
pub fn weak_field_ratio(phi: Potential) -> Result<f64, SpectraError> {
    let phi = phi.checked()?;
    if phi.value() > 0.0 {
        return Err(SpectraError::RepulsivePotential(phi.value()));
    }
    let x = (phi / CODATA_2018.c_squared()).value();
    if x.abs() >= 1.0 {
        return Err(SpectraError::StrongField(x.abs()));
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmitterKind {
    Electron,
    Nucleon,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Emitter {
    rest_mass: Mass,
    kind: EmitterKind,
}

impl Emitter {
    pub fn new(rest_mass: Mass, kind: EmitterKind) -> Result<Self, SpectraError> {
        if !(rest_mass.value() > 0.0) {
            return Err(SpectraError::InvalidEmitter(format!(
                "rest mass must be positive, got {}",
                rest_mass.value()
            )));
        }
        Ok(Self { rest_mass, kind })
    }

    pub fn electron() -> Self {
        Self {
            rest_mass: CODATA_2018.electron_mass(),
            kind: EmitterKind::Electron,
        }
    }

    pub fn rest_mass(&self) -> Mass {
        self.rest_mass
    }

    pub fn kind(&self) -> EmitterKind {
        self.kind
    }
}

/// Emitter mass reduced by the gravitational mass defect. Only obtainable
/// through [`effective_mass`] or [`EffectiveMass::free`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveMass {
    value: Mass,
    source_potential: Potential,
}

impl EffectiveMass {
    /// φ = 0.
    pub fn free(emitter: &Emitter) -> Self {
        Self {
            value: emitter.rest_mass,
            source_potential: Potential::ZERO,
        }
    }

    pub fn value(&self) -> Mass {
        self.value
    }

    pub fn source_potential(&self) -> Potential {
        self.source_potential
    }
}

pub fn effective_mass(emitter: &Emitter, phi: Potential) -> Result<EffectiveMass, SpectraError> {
    let x = weak_field_ratio(phi)?;
    Ok(EffectiveMass {
        value: emitter.rest_mass * (1.0 + x),
        source_potential: phi,
    })
}

/// Δm = m|φ|/c², computed as m − m_eff so that Δm + m_eff reproduces m.
pub fn mass_defect(emitter: &Emitter, phi: Potential) -> Result<Mass, SpectraError> {
    let eff = effective_mass(emitter, phi)?;
    Ok(emitter.rest_mass - eff.value)
}

/// Angular number j ∈ {1/2, 3/2, ...}, stored as 2j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInteger(u32);

impl HalfInteger {
    pub fn from_twice(twice: u32) -> Result<Self, SpectraError> {
        if twice % 2 == 1 {
            Ok(Self(twice))
        } else {
            Err(SpectraError::InvalidState(format!(
                "j must be a positive half-odd integer, got {twice}/2"
            )))
        }
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// j + 1/2.
    pub fn plus_half(self) -> u32 {
        self.0.div_ceil(2)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.0)
    }
}

/// Accepts `3/2` or `1.5`.
impl FromStr for HalfInteger {
    type Err = SpectraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || SpectraError::InvalidState(format!("cannot parse j from {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            if den.trim() != "2" {
                return Err(bad());
            }
            Self::from_twice(num)
        } else {
            let v: f64 = s.parse().map_err(|_| bad())?;
            let twice = 2.0 * v;
            if twice.fract() != 0.0 || twice < 1.0 || twice > f64::from(u32::MAX) {
                return Err(bad());
            }
            Self::from_twice(twice as u32)
        }
    }
}

/// Quantum numbers (Z, n′, j, n) with n = n′ + j + 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumState {
    z: u32,
    n_prime: u32,
    j: HalfInteger,
    n: u32,
}

impl QuantumState {
    /// From the radial and angular numbers; n follows.
    pub fn new(z: u32, n_prime: u32, j: HalfInteger) -> Result<Self, SpectraError> {
        let n = n_prime
            .checked_add(j.plus_half())
            .ok_or_else(|| SpectraError::InvalidState("n overflows".into()))?;
        Self::validated(z, n_prime, j, n)
    }

    /// From the principal and angular numbers; n′ follows.
    pub fn with_principal(z: u32, n: u32, j: HalfInteger) -> Result<Self, SpectraError> {
        let n_prime = n.checked_sub(j.plus_half()).ok_or_else(|| {
            SpectraError::InvalidState(format!("j + 1/2 = {} exceeds n = {n}", j.plus_half()))
        })?;
        Self::validated(z, n_prime, j, n)
    }

    /// All four numbers given; they must satisfy n = n′ + j + 1/2.
    pub fn try_from_parts(
        z: u32,
        n_prime: u32,
        j: HalfInteger,
        n: u32,
    ) -> Result<Self, SpectraError> {
        if u64::from(n_prime) + u64::from(j.plus_half()) != u64::from(n) {
            return Err(SpectraError::InvalidState(format!(
                "n = {n} but n' + j + 1/2 = {} + {}",
                n_prime,
                j.plus_half()
            )));
        }
        Self::validated(z, n_prime, j, n)
    }

    fn validated(z: u32, n_prime: u32, j: HalfInteger, n: u32) -> Result<Self, SpectraError> {
        if z == 0 {
            return Err(SpectraError::InvalidState("Z must be positive".into()));
        }
        if n == 0 {
            return Err(SpectraError::InvalidState("n must be positive".into()));
        }
        let alpha_z = CODATA_2018.alpha * f64::from(z);
        if alpha_z >= 1.0 {
            return Err(SpectraError::NonPerturbative(alpha_z));
        }
        Ok(Self { z, n_prime, j, n })
    }

    /// Every j allowed for principal number n: n states, j = 1/2 ..= n − 1/2.
    pub fn shell(z: u32, n: u32) -> Result<Vec<Self>, SpectraError> {
        (0..n)
            .map(|k| Self::with_principal(z, n, HalfInteger(2 * k + 1)))
            .collect()
    }

    pub fn z(&self) -> u32 {
        self.z
    }

    pub fn n_prime(&self) -> u32 {
        self.n_prime
    }

    pub fn j(&self) -> HalfInteger {
        self.j
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

impl fmt::Display for QuantumState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Z={} n={} n'={} j={}",
            self.z, self.n, self.n_prime, self.j
        )
    }
}

/// Binding-energy magnitude of `state` for an emitter of mass `m_eff`.
pub fn level_energy(state: &QuantumState, m_eff: &EffectiveMass) -> Result<Energy, SpectraError> {
    let alpha = CODATA_2018.alpha;
    let z = f64::from(state.z);
    if alpha * z >= 1.0 {
        return Err(SpectraError::NonPerturbative(alpha * z));
    }
    let n = f64::from(state.n);
    let j_half = f64::from(state.j.plus_half());

    let rest_energy = m_eff.value * CODATA_2018.c_squared();
    let leading = rest_energy * (alpha * alpha / 2.0 * z * z / (n * n));
    let bracket = 1.0 + (alpha * alpha * z * z / n) * (1.0 / j_half - 3.0 / (4.0 * n));
    Ok((leading * bracket).checked()?)
}

/// ν = (E_b(lower) − E_b(upper))/h for emission from `upper` to `lower`.
pub fn transition_frequency(
    upper: &QuantumState,
    lower: &QuantumState,
    m_eff: &EffectiveMass,
) -> Result<Frequency, SpectraError> {
    if upper.z != lower.z {
        return Err(SpectraError::ChargeMismatch(upper.z, lower.z));
    }
    let photon = level_energy(lower, m_eff)? - level_energy(upper, m_eff)?;
    if !(photon.value() > 0.0) {
        return Err(SpectraError::Ordering(photon.value()));
    }
    Ok(energy_to_frequency(photon)?)
}

/// Where the observed frequency shift originates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShiftModel {
    /// Emitter levels scale with its reduced effective mass.
    EmitterMassDefect,
    /// The photon exchanges energy with the field in flight.
    PhotonInteraction,
    /// Both mechanisms, added.
    DoubleEffect,
}

impl ShiftModel {
    pub const ALL: [ShiftModel; 3] = [
        ShiftModel::EmitterMassDefect,
        ShiftModel::PhotonInteraction,
        ShiftModel::DoubleEffect,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            ShiftModel::EmitterMassDefect => "emitter",
            ShiftModel::PhotonInteraction => "photon",
            ShiftModel::DoubleEffect => "double",
        }
    }
}

impl fmt::Display for ShiftModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ShiftModel::EmitterMassDefect => "EmitterMassDefect",
            ShiftModel::PhotonInteraction => "PhotonInteraction",
            ShiftModel::DoubleEffect => "DoubleEffect",
        };
        f.write_str(s)
    }
}

impl FromStr for ShiftModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "emitter" | "emittermassdefect" | "emitter-mass-defect" => {
                Ok(ShiftModel::EmitterMassDefect)
            }
            "photon" | "photoninteraction" | "photon-interaction" => {
                Ok(ShiftModel::PhotonInteraction)
            }
            "double" | "doubleeffect" | "double-effect" => Ok(ShiftModel::DoubleEffect),
            other => Err(format!(
                "unknown model {other:?} (expected emitter, photon or double)"
            )),
        }
    }
}

/// Predicted Δν/ν for a line emitted at φ_emit and received at φ_obs.
/// Negative values are red shifts.
pub fn fractional_shift(
    model: ShiftModel,
    phi_emit: Potential,
    phi_obs: Potential,
) -> Result<Dimensionless, SpectraError> {
    weak_field_ratio(phi_emit)?;
    weak_field_ratio(phi_obs)?;
    let single = ((phi_emit - phi_obs) / CODATA_2018.c_squared()).checked()?;
    Ok(match model {
        ShiftModel::EmitterMassDefect | ShiftModel::PhotonInteraction => single,
        ShiftModel::DoubleEffect => single + single,
    })
}

/// How nuclear level energies would depend on the radiating nucleon's mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NuclearScaling {
    ProportionalToMass,
    InverselyProportionalToMass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftDirection {
    Red,
    Violet,
    None,
}

pub fn nuclear_shift_sign(
    scaling: NuclearScaling,
    phi_emit: Potential,
    phi_obs: Potential,
) -> Result<ShiftDirection, SpectraError> {
    let shift = fractional_shift(ShiftModel::EmitterMassDefect, phi_emit, phi_obs)?.value();
    let signed = match scaling {
        NuclearScaling::ProportionalToMass => shift,
        NuclearScaling::InverselyProportionalToMass => -shift,
    };
    Ok(if signed < 0.0 {
        ShiftDirection::Red
    } else if signed > 0.0 {
        ShiftDirection::Violet
    } else {
        ShiftDirection::None
    })
}
