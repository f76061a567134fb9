//! Physical constants and dimension-tagged scalars.
//!
//! Every quantity carries a zero-sized dimension marker, so combining a
//! potential with a mass yields an energy and adding a length to a time does
//! not compile. Only the products and quotients the rest of the crate needs
//! are defined; this is not a general dimensional-analysis algebra.
//!
//! Internally everything is SI. Electronvolts appear only at I/O boundaries
//! through [`Energy::from_ev`] and [`Energy::to_ev`].

use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitsError {
    #[error("non-finite {dimension} value: {value}")]
    NonFinite { dimension: &'static str, value: f64 },
    #[error("division by zero {dimension} quantity")]
    DivisionByZero { dimension: &'static str },
}

/// Dimension markers.
pub mod dim {
    pub trait Dimension:
        Copy + Default + std::fmt::Debug + PartialEq + PartialOrd + Send + Sync + 'static
    {
        /// SI unit symbol.
        const UNIT: &'static str;
        const NAME: &'static str;
    }

    macro_rules! dimensions {
        ($($ty:ident => $name:literal, $unit:literal;)*) => {
            $(
                #[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
                pub struct $ty;

                impl Dimension for $ty {
                    const UNIT: &'static str = $unit;
                    const NAME: &'static str = $name;
                }
            )*
        };
    }

    dimensions! {
        Mass => "mass", "kg";
        Length => "length", "m";
        Time => "time", "s";
        Velocity => "velocity", "m/s";
        Acceleration => "acceleration", "m/s^2";
        Energy => "energy", "J";
        Frequency => "frequency", "Hz";
        Potential => "potential", "m^2/s^2";
        Action => "action", "J s";
        Dimensionless => "dimensionless", "1";
    }
}

use dim::Dimension;

/// A finite real value tagged with a physical dimension.
#[derive(Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Quantity<D> {
    value: f64,
    dim: PhantomData<D>,
}

pub type Mass = Quantity<dim::Mass>;
pub type Length = Quantity<dim::Length>;
pub type Time = Quantity<dim::Time>;
pub type Velocity = Quantity<dim::Velocity>;
pub type Acceleration = Quantity<dim::Acceleration>;
pub type Energy = Quantity<dim::Energy>;
pub type Frequency = Quantity<dim::Frequency>;
/// Gravitational potential per unit mass. Negative for attractive sources.
pub type Potential = Quantity<dim::Potential>;
pub type Action = Quantity<dim::Action>;
pub type Dimensionless = Quantity<dim::Dimensionless>;

impl<D: Dimension> Quantity<D> {
    pub const ZERO: Self = Self::raw(0.0);

    /// Checked constructor; rejects NaN and infinities.
    pub fn new(value: f64) -> Result<Self, UnitsError> {
        if value.is_finite() {
            Ok(Self::raw(value))
        } else {
            Err(UnitsError::NonFinite {
                dimension: D::NAME,
                value,
            })
        }
    }

    /// Used for literals and results of arithmetic on already finite values.
    pub(crate) const fn raw(value: f64) -> Self {
        Self {
            value,
            dim: PhantomData,
        }
    }

    pub fn value(self) -> f64 {
        self.value
    }

    pub fn unit(self) -> &'static str {
        D::UNIT
    }

    pub fn dimension_name(self) -> &'static str {
        D::NAME
    }

    pub fn abs(self) -> Self {
        Self::raw(self.value.abs())
    }

    pub fn is_finite(self) -> bool {
        self.value.is_finite()
    }

    /// Re-validates a value produced by arithmetic.
    pub fn checked(self) -> Result<Self, UnitsError> {
        Self::new(self.value)
    }
}

impl<D: Dimension> fmt::Debug for Quantity<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} {}", self.value, D::UNIT)
    }
}

impl<D: Dimension> fmt::Display for Quantity<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.value, f)?;
        write!(f, " {}", D::UNIT)
    }
}

impl<D: Dimension> Serialize for Quantity<D> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.value)
    }
}

impl<'de, D: Dimension> Deserialize<'de> for Quantity<D> {
    fn deserialize<De: Deserializer<'de>>(deserializer: De) -> Result<Self, De::Error> {
        let value = f64::deserialize(deserializer)?;
        Self::new(value).map_err(serde::de::Error::custom)
    }
}

impl<D: Dimension> Add for Quantity<D> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::raw(self.value + rhs.value)
    }
}

impl<D: Dimension> AddAssign for Quantity<D> {
    fn add_assign(&mut self, rhs: Self) {
        self.value += rhs.value;
    }
}

impl<D: Dimension> Sub for Quantity<D> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::raw(self.value - rhs.value)
    }
}

impl<D: Dimension> Neg for Quantity<D> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::raw(-self.value)
    }
}

impl<D: Dimension> Mul<f64> for Quantity<D> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::raw(self.value * rhs)
    }
}

impl<D: Dimension> Mul<Quantity<D>> for f64 {
    type Output = Quantity<D>;
    fn mul(self, rhs: Quantity<D>) -> Quantity<D> {
        Quantity::raw(self * rhs.value)
    }
}

impl<D: Dimension> Div<f64> for Quantity<D> {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        Self::raw(self.value / rhs)
    }
}

impl<D: Dimension> Mul<Dimensionless> for Quantity<D> {
    type Output = Self;
    fn mul(self, rhs: Dimensionless) -> Self {
        Self::raw(self.value * rhs.value)
    }
}

/// Same-dimension quotient. Unchecked; see [`fractional`] for the guarded form.
impl<D: Dimension> Div<Quantity<D>> for Quantity<D> {
    type Output = Dimensionless;
    fn div(self, rhs: Quantity<D>) -> Dimensionless {
        Quantity::raw(self.value / rhs.value)
    }
}

impl<D: Dimension> std::iter::Sum for Quantity<D> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |acc, q| acc + q)
    }
}

macro_rules! impl_mul {
    ($lhs:ident * $rhs:ident => $out:ident) => {
        impl Mul<Quantity<dim::$rhs>> for Quantity<dim::$lhs> {
            type Output = Quantity<dim::$out>;
            fn mul(self, rhs: Quantity<dim::$rhs>) -> Quantity<dim::$out> {
                Quantity::raw(self.value * rhs.value)
            }
        }
    };
}

macro_rules! impl_div {
    ($lhs:ident / $rhs:ident => $out:ident) => {
        impl Div<Quantity<dim::$rhs>> for Quantity<dim::$lhs> {
            type Output = Quantity<dim::$out>;
            fn div(self, rhs: Quantity<dim::$rhs>) -> Quantity<dim::$out> {
                Quantity::raw(self.value / rhs.value)
            }
        }
    };
}

impl_mul!(Velocity * Velocity => Potential);
impl_mul!(Mass * Potential => Energy);
impl_mul!(Potential * Mass => Energy);
impl_div!(Energy / Potential => Mass);
impl_div!(Energy / Mass => Potential);
impl_mul!(Frequency * Action => Energy);
impl_mul!(Action * Frequency => Energy);
impl_div!(Energy / Action => Frequency);
impl_mul!(Acceleration * Length => Potential);
impl_mul!(Length * Acceleration => Potential);
impl_div!(Potential / Length => Acceleration);
impl_div!(Length / Velocity => Time);
impl_mul!(Velocity * Time => Length);
impl_div!(Length / Time => Velocity);

impl Dimensionless {
    pub fn scalar(value: f64) -> Self {
        Self::raw(value)
    }
}

impl Energy {
    pub fn from_ev(ev: f64) -> Result<Self, UnitsError> {
        Self::new(ev * CODATA_2018.ev)
    }

    pub fn to_ev(self) -> f64 {
        self.value / CODATA_2018.ev
    }
}

/// Literal CODATA 2018 values in SI. None is derived from another.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantSet {
    #[serde(rename = "G")]
    pub gravitational: f64,
    #[serde(rename = "c")]
    pub light_speed: f64,
    #[serde(rename = "h")]
    pub planck: f64,
    #[serde(rename = "hbar")]
    pub reduced_planck: f64,
    pub alpha: f64,
    pub m_electron: f64,
    #[serde(rename = "eV")]
    pub ev: f64,
}

pub const CODATA_2018: ConstantSet = ConstantSet {
    gravitational: 6.674_30e-11,
    light_speed: 299_792_458.0,
    planck: 6.626_070_15e-34,
    reduced_planck: 1.054_571_817e-34,
    alpha: 7.297_352_569_3e-3,
    m_electron: 9.109_383_701_5e-31,
    ev: 1.602_176_634e-19,
};

impl ConstantSet {
    pub fn c(&self) -> Velocity {
        Velocity::raw(self.light_speed)
    }

    pub fn c_squared(&self) -> Potential {
        self.c() * self.c()
    }

    pub fn h(&self) -> Action {
        Action::raw(self.planck)
    }

    pub fn electron_mass(&self) -> Mass {
        Mass::raw(self.m_electron)
    }

    /// G in m³ kg⁻¹ s⁻²; has no dedicated dimension, callers combine it with
    /// a mass and a length.
    pub fn big_g(&self) -> f64 {
        self.gravitational
    }

    pub fn all_positive(&self) -> bool {
        [
            self.gravitational,
            self.light_speed,
            self.planck,
            self.reduced_planck,
            self.alpha,
            self.m_electron,
            self.ev,
        ]
        .iter()
        .all(|v| v.is_finite() && *v > 0.0)
    }
}

/// E = hν, solved for ν.
pub fn energy_to_frequency(energy: Energy) -> Result<Frequency, UnitsError> {
    (energy.checked()? / CODATA_2018.h()).checked()
}

pub fn frequency_to_energy(frequency: Frequency) -> Result<Energy, UnitsError> {
    (frequency.checked()? * CODATA_2018.h()).checked()
}

/// Δx/x for two quantities of the same dimension.
pub fn fractional<D: Dimension>(
    delta: Quantity<D>,
    reference: Quantity<D>,
) -> Result<Dimensionless, UnitsError> {
    if reference.value == 0.0 {
        return Err(UnitsError::DivisionByZero { dimension: D::NAME });
    }
    (delta.checked()? / reference.checked()?).checked()
}
