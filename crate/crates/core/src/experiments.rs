//! Redshift measurements and the model comparison harness.
//!
//! Each record stores its result as a ratio to the single-mechanism
//! prediction Δφ/c², with a 1σ uncertainty. A model that predicts k times
//! that shift is tested against ρ/k ± σ/k.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gravity::{BodyRegistry, FieldPoint, GravityError, PotentialField};
use crate::spectra::{fractional_shift, ShiftModel, SpectraError};
use crate::units::Length;

pub const DEFAULT_EXCLUSION_SIGMA: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("{origin}: parse error at line {line}, column {column}: {message}")]
    Parse {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{origin}: record {index} ({name:?}): {message}")]
    Validation {
        origin: String,
        index: usize,
        name: String,
        message: String,
    },
    #[error("cannot read {0}: {1}")]
    Io(String, String),
    #[error("no experiments loaded")]
    EmptyRegistry,
    #[error("exclusion threshold must be positive, got {0}")]
    Threshold(f64),
    #[error(transparent)]
    Gravity(#[from] GravityError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyDistance {
    pub body: String,
    pub r_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Geometry {
    /// Emitter at the base of a vertical tower, observer at its top.
    Tower {
        body: String,
        base_altitude_m: f64,
        height_m: f64,
    },
    TwoPoint {
        emit: Vec<BodyDistance>,
        observe: Vec<BodyDistance>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentRecord {
    pub name: String,
    pub geometry: Geometry,
    /// Measured shift over the single-mechanism prediction.
    pub measured_ratio: f64,
    /// 1σ.
    pub ratio_uncertainty: f64,
    #[serde(default)]
    pub citation: String,
}

/// Emitter and observer positions with the field acting on them.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedGeometry {
    pub field: PotentialField,
    pub emit: FieldPoint,
    pub observe: FieldPoint,
}

fn point_from(label: &str, entries: &[BodyDistance]) -> Result<FieldPoint, GravityError> {
    entries.iter().try_fold(FieldPoint::new(label), |p, e| {
        let r = Length::new(e.r_m).map_err(|_| GravityError::InvalidLength(e.r_m))?;
        Ok(p.with_distance(e.body.as_str(), r))
    })
}

impl Geometry {
    pub fn resolve(&self, bodies: &BodyRegistry) -> Result<ResolvedGeometry, GravityError> {
        match self {
            Geometry::Tower {
                body,
                base_altitude_m,
                height_m,
            } => {
                let b = bodies.get(body)?;
                let base = Length::new(*base_altitude_m)
                    .map_err(|_| GravityError::InvalidLength(*base_altitude_m))?;
                let top = Length::new(base_altitude_m + height_m)
                    .map_err(|_| GravityError::InvalidLength(*height_m))?;
                Ok(ResolvedGeometry {
                    field: PotentialField::single(b.clone()),
                    emit: FieldPoint::at_altitude(b, base),
                    observe: FieldPoint::at_altitude(b, top),
                })
            }
            Geometry::TwoPoint { emit, observe } => {
                let field = bodies.field(emit.iter().map(|e| e.body.as_str()))?;
                let emit = point_from("emit", emit)?;
                let observe = point_from("observe", observe)?;
                // both endpoints must be valid in the same field
                field.potential(&emit)?;
                field.potential(&observe)?;
                Ok(ResolvedGeometry {
                    field,
                    emit,
                    observe,
                })
            }
        }
    }
}

impl ExperimentRecord {
    fn validate(&self, bodies: &BodyRegistry) -> Result<(), String> {
        if self.name.trim().is_empty() {
            return Err("empty name".into());
        }
        if !(self.ratio_uncertainty.is_finite() && self.ratio_uncertainty > 0.0) {
            return Err(format!(
                "ratio_uncertainty must be positive, got {}",
                self.ratio_uncertainty
            ));
        }
        if !self.measured_ratio.is_finite() {
            return Err(format!(
                "measured_ratio must be finite, got {}",
                self.measured_ratio
            ));
        }
        if let Geometry::Tower { height_m, .. } = &self.geometry {
            if !(height_m.is_finite() && *height_m > 0.0) {
                return Err(format!("tower height must be positive, got {height_m}"));
            }
        }
        self.geometry
            .resolve(bodies)
            .map(|_| ())
            .map_err(|e| e.to_string())
    }
}

/// Parses and validates a registry. Whitespace-only input is an empty registry.
pub fn parse_registry(
    text: &str,
    origin: &str,
    bodies: &BodyRegistry,
) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let records: Vec<ExperimentRecord> =
        serde_json::from_str(text).map_err(|e| ExperimentError::Parse {
            origin: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
    for (index, record) in records.iter().enumerate() {
        record
            .validate(bodies)
            .map_err(|message| ExperimentError::Validation {
                origin: origin.to_string(),
                index,
                name: record.name.clone(),
                message,
            })?;
    }
    Ok(records)
}

pub fn load_registry(
    path: &Path,
    bodies: &BodyRegistry,
) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ExperimentError::Io(path.display().to_string(), e.to_string()))?;
    parse_registry(&text, &path.display().to_string(), bodies)
}

/// Predicted Δν/ν of `model` for the record's endpoints (negative = red).
pub fn predict(
    record: &ExperimentRecord,
    model: ShiftModel,
    bodies: &BodyRegistry,
) -> Result<f64, ExperimentError> {
    let g = record.geometry.resolve(bodies)?;
    let phi_emit = g.field.potential(&g.emit)?;
    let phi_obs = g.field.potential(&g.observe)?;
    Ok(fractional_shift(model, phi_emit, phi_obs)?.value())
}

/// How many single-mechanism shifts a model predicts.
fn multiplicity(model: ShiftModel) -> f64 {
    match model {
        ShiftModel::EmitterMassDefect | ShiftModel::PhotonInteraction => 1.0,
        ShiftModel::DoubleEffect => 2.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Excluded { threshold: f64 },
}

impl Verdict {
    pub fn is_excluded(&self) -> bool {
        matches!(self, Verdict::Excluded { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub experiment: String,
    pub model: ShiftModel,
    pub predicted_shift: f64,
    /// Whether the prediction is a red shift (negative).
    pub red: bool,
    pub ratio_measured_over_predicted: f64,
    pub ratio_uncertainty: f64,
    pub sigma_deviation: f64,
    pub verdict: Verdict,
}

pub fn compare(
    record: &ExperimentRecord,
    model: ShiftModel,
    bodies: &BodyRegistry,
    threshold: f64,
) -> Result<ComparisonReport, ExperimentError> {
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(ExperimentError::Threshold(threshold));
    }
    let predicted_shift = predict(record, model, bodies)?;
    let k = multiplicity(model);
    let ratio = record.measured_ratio / k;
    let sigma = record.ratio_uncertainty / k;
    let sigma_deviation = (ratio - 1.0).abs() / sigma;
    let verdict = if sigma_deviation > threshold {
        Verdict::Excluded { threshold }
    } else {
        Verdict::Consistent
    };
    Ok(ComparisonReport {
        experiment: record.name.clone(),
        model,
        predicted_shift,
        red: predicted_shift < 0.0,
        ratio_measured_over_predicted: ratio,
        ratio_uncertainty: sigma,
        sigma_deviation,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictSummary {
    pub threshold: f64,
    pub reports: Vec<ComparisonReport>,
    /// Every single-mechanism comparison is consistent.
    pub single_models_consistent: bool,
    pub double_effect_excluded: bool,
    pub excluded_by: Vec<String>,
}

impl VerdictSummary {
    /// 0 when the single-mechanism models survive and the double effect is
    /// excluded, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.single_models_consistent && self.double_effect_excluded {
            0
        } else {
            1
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<20} {:<18} {:>16} {:>12} {:>12} {:>10}  verdict",
            "experiment", "model", "predicted_dnu/nu", "ratio", "ratio_sigma", "n_sigma"
        );
        for r in &self.reports {
            let verdict = match r.verdict {
                Verdict::Consistent => "Consistent".to_string(),
                Verdict::Excluded { threshold } => format!("Excluded(>{threshold}σ)"),
            };
            let _ = writeln!(
                out,
                "{:<20} {:<18} {:>16.6e} {:>12.6} {:>12.6} {:>10.3}  {}",
                r.experiment,
                r.model.to_string(),
                r.predicted_shift,
                r.ratio_measured_over_predicted,
                r.ratio_uncertainty,
                r.sigma_deviation,
                verdict
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "single-mechanism models consistent: {}",
            if self.single_models_consistent {
                "yes"
            } else {
                "no"
            }
        );
        if self.double_effect_excluded {
            let _ = writeln!(
                out,
                "DoubleEffect: Excluded at {}σ by {}",
                self.threshold,
                self.excluded_by.join(", ")
            );
        } else {
            let _ = writeln!(out, "DoubleEffect: not excluded at {}σ", self.threshold);
        }
        out
    }
}

/// Compares every record against every model.
pub fn double_effect_verdict(
    records: &[ExperimentRecord],
    bodies: &BodyRegistry,
    threshold: f64,
) -> Result<VerdictSummary, ExperimentError> {
    if records.is_empty() {
        return Err(ExperimentError::EmptyRegistry);
    }
    let mut reports = Vec::with_capacity(records.len() * ShiftModel::ALL.len());
    for record in records {
        for model in ShiftModel::ALL {
            reports.push(compare(record, model, bodies, threshold)?);
        }
    }
    let single_models_consistent = reports
        .iter()
        .filter(|r| r.model != ShiftModel::DoubleEffect)
        .all(|r| !r.verdict.is_excluded());
    let excluded_by: Vec<String> = reports
        .iter()
        .filter(|r| r.model == ShiftModel::DoubleEffect && r.verdict.is_excluded())
        .map(|r| r.experiment.clone())
        .collect();
    Ok(VerdictSummary {
        threshold,
        single_models_consistent,
        double_effect_excluded: !excluded_by.is_empty(),
        excluded_by,
        reports,
    })
}
