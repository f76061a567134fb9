//! Shipped registry files and their lookup.
//!
//! `"default"` resolves to `$GRAVSHIFT_DATA_DIR/<file>` when that variable is
//! set and to the copy compiled into the binary otherwise.

use std::path::{Path, PathBuf};

use crate::experiments::{parse_registry, ExperimentError, ExperimentRecord};
use crate::gravity::{BodyRegistry, GravityError};

pub const DATA_DIR_ENV: &str = "GRAVSHIFT_DATA_DIR";
pub const BODIES_FILE: &str = "bodies.json";
pub const EXPERIMENTS_FILE: &str = "experiments.json";

pub const DEFAULT_BODIES_JSON: &str = include_str!("../data/bodies.json");
pub const DEFAULT_EXPERIMENTS_JSON: &str = include_str!("../data/experiments.json");

pub fn default_bodies() -> Result<BodyRegistry, GravityError> {
    BodyRegistry::from_json_str(DEFAULT_BODIES_JSON, "<builtin bodies.json>")
}

pub fn default_experiments(
    bodies: &BodyRegistry,
) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    parse_registry(
        DEFAULT_EXPERIMENTS_JSON,
        "<builtin experiments.json>",
        bodies,
    )
}

/// Where a registry argument points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Builtin,
    File(PathBuf),
}

/// Maps a CLI registry argument to a source. `data_dir` is the value of
/// [`DATA_DIR_ENV`], passed in so callers control the environment.
pub fn resolve(arg: &str, file_name: &str, data_dir: Option<&Path>) -> Source {
    if arg == "default" {
        match data_dir {
            Some(dir) => Source::File(dir.join(file_name)),
            None => Source::Builtin,
        }
    } else {
        Source::File(PathBuf::from(arg))
    }
}

pub fn load_bodies(source: &Source) -> Result<BodyRegistry, GravityError> {
    match source {
        Source::Builtin => default_bodies(),
        Source::File(path) => BodyRegistry::load(path),
    }
}

pub fn load_experiments(
    source: &Source,
    bodies: &BodyRegistry,
) -> Result<Vec<ExperimentRecord>, ExperimentError> {
    match source {
        Source::Builtin => default_experiments(bodies),
        Source::File(path) => crate::experiments::load_registry(path, bodies),
    }
}
