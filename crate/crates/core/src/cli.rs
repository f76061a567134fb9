//! Command-line front end.
//!
//! [`run`] takes argv and writers instead of touching the process so that it
//! can be exercised in tests; `main` only wires it to stdio.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::data::{self, Source};
use crate::experiments::{double_effect_verdict, DEFAULT_EXCLUSION_SIGMA};
use crate::gravity::{BodyRegistry, FieldPoint, PotentialField};
use crate::photon::{deflection_sweep, trace_ray, RayPath, RayResult, StepControl};
use crate::spectra::{
    effective_mass, fractional_shift, level_energy, Emitter, EmitterKind, HalfInteger,
    QuantumState, ShiftModel,
};
use crate::units::{energy_to_frequency, Length, Mass, Potential, CODATA_2018};
use crate::Error;

/// Bohr radius, m.
const BOHR_RADIUS_M: f64 = 5.291_772_109_03e-11;

#[derive(Debug, Parser)]
#[command(
    name = "gravshift",
    version,
    about = "Gravitational redshift models and their comparison with experiment"
)]
struct Cli {
    /// Body registry: "default" or a path to a JSON file.
    #[arg(long, global = true, default_value = "default")]
    bodies: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the physical constants (SI) as JSON.
    Constants,
    /// Potential, radial gradient and atomic-scale correction at field points.
    Potential(PotentialArgs),
    /// Fine-structure levels of a hydrogen-like emitter at its effective mass.
    Spectrum(SpectrumArgs),
    /// Predicted fractional line shift between emitter and observer.
    Shift(ShiftArgs),
    /// Trace a ray past a body through the variable-light-speed medium.
    Photon(PhotonArgs),
    /// Compare every model against the experiment registry.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
struct PotentialArgs {
    /// Field point: "body:ALT_M", "body:r=R_M", or several joined with ','.
    #[arg(long = "point", required = true)]
    points: Vec<String>,
    /// Atomic length scale for the first-order correction, m.
    #[arg(long, default_value_t = BOHR_RADIUS_M)]
    atomic_scale_m: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    /// Nuclear charge.
    #[arg(long, default_value_t = 1)]
    z: u32,
    /// State as "N_PRIME,J", e.g. "0,1/2". Repeatable.
    #[arg(long = "state", conflicts_with = "n_max")]
    states: Vec<String>,
    /// List every state with principal number 1..=N_MAX.
    #[arg(long)]
    n_max: Option<u32>,
    /// Emitter location (same syntax as `potential --point`); free emitter if absent.
    #[arg(long)]
    point: Option<String>,
    /// Emitter rest mass in kg (default: electron).
    #[arg(long)]
    mass_kg: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Args)]
struct ShiftArgs {
    /// emitter, photon or double.
    #[arg(long)]
    model: ShiftModel,
    /// Body for the altitude flags.
    #[arg(long, conflicts_with_all = ["emit", "obs"])]
    body: Option<String>,
    #[arg(long, requires = "body", conflicts_with = "emit_r_m")]
    emit_alt: Option<f64>,
    #[arg(long, requires = "body")]
    emit_r_m: Option<f64>,
    #[arg(long, requires = "body", conflicts_with = "obs_r_m")]
    obs_alt: Option<f64>,
    #[arg(long, requires = "body")]
    obs_r_m: Option<f64>,
    /// Emitter point spec (multi-body form).
    #[arg(long, requires = "obs")]
    emit: Option<String>,
    /// Observer point spec (multi-body form).
    #[arg(long, requires = "emit")]
    obs: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct PhotonArgs {
    #[arg(long, default_value = "sun")]
    body: String,
    /// Impact parameter in metres.
    #[arg(long, conflicts_with_all = ["b_radii", "sweep_radii"])]
    b_m: Option<f64>,
    /// Impact parameter in body radii.
    #[arg(long, conflicts_with = "sweep_radii")]
    b_radii: Option<f64>,
    /// Sweep "START:STOP:COUNT" in body radii, linearly spaced.
    #[arg(long)]
    sweep_radii: Option<String>,
    /// Integrator relative tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Termination radius in impact parameters.
    #[arg(long, default_value_t = 200.0)]
    termination_factor: f64,
    /// json or csv; sweeps default to csv.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Experiment registry: "default" or a path.
    #[arg(long, default_value = "default")]
    registry: String,
    #[arg(long, value_enum, default_value = "text")]
    report: ReportFormat,
    /// Exclusion threshold in standard deviations.
    #[arg(long, default_value_t = DEFAULT_EXCLUSION_SIGMA)]
    threshold: f64,
}

/// A column of a tabular result.
#[derive(Debug, Clone)]
enum Cell {
    Num(f64),
    Text(String),
}

struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(headers: Vec<&'static str>) -> Self {
        Self {
            headers,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn row_json(&self, row: &[Cell]) -> Value {
        let mut obj = Map::new();
        for (h, c) in self.headers.iter().zip(row) {
            let v = match c {
                Cell::Num(x) => serde_json::Number::from_f64(*x)
                    .map(Value::Number)
                    .unwrap_or(Value::Null),
                Cell::Text(s) => Value::String(s.clone()),
            };
            obj.insert((*h).to_string(), v);
        }
        Value::Object(obj)
    }

    /// `single` emits one object instead of an array.
    fn render(&self, format: Format, single: bool) -> Result<String, Error> {
        match format {
            Format::Json => {
                let value = if single && self.rows.len() == 1 {
                    self.row_json(&self.rows[0])
                } else {
                    Value::Array(self.rows.iter().map(|r| self.row_json(r)).collect())
                };
                Ok(serde_json::to_string_pretty(&value)
                    .map_err(|e| Error::Output(e.to_string()))?
                    + "\n")
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Error::Output(e.to_string());
                w.write_record(&self.headers).map_err(io)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(|c| match c {
                        Cell::Num(x) => format!("{x:e}"),
                        Cell::Text(s) => s.clone(),
                    }))
                    .map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Output(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| Error::Output(e.to_string()))
            }
            Format::Text => {
                let cells: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|c| match c {
                                Cell::Num(x) => format!("{x:.10e}"),
                                Cell::Text(s) => s.clone(),
                            })
                            .collect()
                    })
                    .collect();
                let widths: Vec<usize> = self
                    .headers
                    .iter()
                    .enumerate()
                    .map(|(i, h)| {
                        cells
                            .iter()
                            .map(|r| r[i].chars().count())
                            .chain(std::iter::once(h.len()))
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let line = |items: Vec<&str>| {
                    items
                        .iter()
                        .zip(&widths)
                        .map(|(s, w)| format!("{s:>w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                        .trim_end()
                        .to_string()
                };
                let mut out = line(self.headers.clone()) + "\n";
                for r in &cells {
                    out += &line(r.iter().map(String::as_str).collect());
                    out.push('\n');
                }
                Ok(out)
            }
        }
    }
}

/// Parses "earth:22.5", "earth:r=6.4e6" or a comma-joined list of those.
pub fn parse_point(spec: &str, bodies: &BodyRegistry) -> Result<FieldPoint, Error> {
    let bad = |msg: String| Error::Usage(format!("point {spec:?}: {msg}"));
    let mut point = FieldPoint::new(spec);
    let mut any = false;
    for part in spec.split(',') {
        let (name, value) = part
            .split_once(':')
            .ok_or_else(|| bad("expected BODY:ALT_M or BODY:r=R_M".into()))?;
        let body = bodies.get(name.trim())?;
        let value = value.trim();
        let r = if let Some(abs) = value.strip_prefix("r=") {
            abs.trim()
                .parse::<f64>()
                .map_err(|_| bad(format!("bad radius {abs:?}")))?
        } else {
            let alt = value
                .parse::<f64>()
                .map_err(|_| bad(format!("bad altitude {value:?}")))?;
            body.radius().value() + alt
        };
        point = point.with_distance(body.name(), Length::new(r)?);
        any = true;
    }
    if !any {
        return Err(bad("no body".into()));
    }
    Ok(point)
}

/// Field over the bodies named in a point.
fn field_for(point: &FieldPoint, bodies: &BodyRegistry) -> Result<PotentialField, Error> {
    Ok(bodies.field(point.distances().iter().map(|(n, _)| n.as_str()))?)
}

fn parse_state(spec: &str, z: u32) -> Result<QuantumState, Error> {
    let (np, j) = spec
        .split_once(',')
        .ok_or_else(|| Error::Usage(format!("state {spec:?}: expected N_PRIME,J")))?;
    let np: u32 = np
        .trim()
        .parse()
        .map_err(|_| Error::Usage(format!("state {spec:?}: bad n'")))?;
    let j: HalfInteger = j.parse()?;
    Ok(QuantumState::new(z, np, j)?)
}

fn parse_sweep(spec: &str) -> Result<Vec<f64>, Error> {
    let bad = || Error::Usage(format!("sweep {spec:?}: expected START:STOP:COUNT"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if count == 0 || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

fn constants() -> Result<String, Error> {
    Ok(
        serde_json::to_string_pretty(&CODATA_2018).map_err(|e| Error::Output(e.to_string()))?
            + "\n",
    )
}

fn potential(args: &PotentialArgs, bodies: &BodyRegistry) -> Result<String, Error> {
    let c2 = CODATA_2018.c_squared();
    let a = Length::new(args.atomic_scale_m)?;
    let mut table = Table::new(vec![
        "point",
        "phi_m2_s2",
        "phi_over_c2",
        "gradient_m_s2",
        "atomic_correction_m2_s2",
    ]);
    for spec in &args.points {
        let p = parse_point(spec, bodies)?;
        let field = field_for(&p, bodies)?;
        let phi = field.potential(&p)?;
        table.push(vec![
            Cell::Text(spec.clone()),
            Cell::Num(phi.value()),
            Cell::Num((phi / c2).value()),
            Cell::Num(field.gradient(&p)?.value()),
            Cell::Num(field.atomic_scale_correction(&p, a)?.value()),
        ]);
    }
    table.render(args.format, false)
}

fn spectrum(args: &SpectrumArgs, bodies: &BodyRegistry) -> Result<String, Error> {
    let emitter = match args.mass_kg {
        Some(m) => Emitter::new(Mass::new(m)?, EmitterKind::Electron)?,
        None => Emitter::electron(),
    };
    let phi = match &args.point {
        Some(spec) => {
            let p = parse_point(spec, bodies)?;
            field_for(&p, bodies)?.potential(&p)?
        }
        None => Potential::ZERO,
    };
    let states: Vec<QuantumState> = if args.states.is_empty() {
        let n_max = args.n_max.unwrap_or(3);
        if n_max == 0 {
            return Err(Error::Usage("--n-max must be at least 1".into()));
        }
        let mut all = Vec::new();
        for n in 1..=n_max {
            all.extend(QuantumState::shell(args.z, n)?);
        }
        all
    } else {
        args.states
            .iter()
            .map(|s| parse_state(s, args.z))
            .collect::<Result<_, _>>()?
    };

    let free = effective_mass(&emitter, Potential::ZERO)?;
    let bound = effective_mass(&emitter, phi)?;
    let mut table = Table::new(vec!["state", "E_eV", "nu_Hz", "shift_fractional"]);
    for s in &states {
        let e_free = level_energy(s, &free)?;
        let e = level_energy(s, &bound)?;
        table.push(vec![
            Cell::Text(format!("n={} n'={} j={}", s.n(), s.n_prime(), s.j())),
            Cell::Num(e.to_ev()),
            Cell::Num(energy_to_frequency(e)?.value()),
            Cell::Num(((e - e_free) / e_free).value()),
        ]);
    }
    table.render(args.format, false)
}

fn shift(args: &ShiftArgs, bodies: &BodyRegistry) -> Result<String, Error> {
    let (emit, obs) = match (&args.emit, &args.obs, &args.body) {
        (Some(e), Some(o), None) => (parse_point(e, bodies)?, parse_point(o, bodies)?),
        (None, None, Some(name)) => {
            let body = bodies.get(name)?;
            let radial =
                |alt: Option<f64>, r: Option<f64>, which: &str| -> Result<FieldPoint, Error> {
                    let r = match (alt, r) {
                        (_, Some(r)) => r,
                        (Some(alt), None) => body.radius().value() + alt,
                        (None, None) => body.radius().value(),
                    };
                    Ok(FieldPoint::new(which).with_distance(body.name(), Length::new(r)?))
                };
            (
                radial(args.emit_alt, args.emit_r_m, "emit")?,
                radial(args.obs_alt, args.obs_r_m, "obs")?,
            )
        }
        _ => {
            return Err(Error::Usage(
                "give either --body with altitude flags or --emit and --obs".into(),
            ))
        }
    };
    let field = field_for(&emit, bodies)?;
    let phi_emit = field.potential(&emit)?;
    let phi_obs = field.potential(&obs)?;
    let frac = fractional_shift(args.model, phi_emit, phi_obs)?.value();
    let direction = if frac < 0.0 {
        "red"
    } else if frac > 0.0 {
        "violet"
    } else {
        "none"
    };
    let mut table = Table::new(vec![
        "model",
        "phi_emit_m2_s2",
        "phi_obs_m2_s2",
        "delta_phi_m2_s2",
        "fractional_shift",
        "direction",
    ]);
    table.push(vec![
        Cell::Text(args.model.to_string()),
        Cell::Num(phi_emit.value()),
        Cell::Num(phi_obs.value()),
        Cell::Num((phi_emit - phi_obs).value()),
        Cell::Num(frac),
        Cell::Text(direction.into()),
    ]);
    table.render(args.format, true)
}

fn photon_row(b: f64, r: &RayResult) -> Vec<Cell> {
    vec![
        Cell::Num(b),
        Cell::Num(r.deflection_angle),
        Cell::Num(r.deflection_arcsec()),
        Cell::Num(r.transit_time.value()),
        Cell::Num(r.time_excess().value()),
        Cell::Num(r.closest_approach.value()),
    ]
}

fn photon(args: &PhotonArgs, bodies: &BodyRegistry) -> Result<String, Error> {
    let body = bodies.get(&args.body)?.clone();
    let radius = body.radius().value();
    let control = StepControl::with_tolerance(args.tol);
    let mut table = Table::new(vec![
        "impact_parameter_m",
        "deflection_rad",
        "deflection_arcsec",
        "transit_time_s",
        "time_excess_s",
        "closest_approach_m",
    ]);
    if let Some(spec) = &args.sweep_radii {
        let bs: Vec<Length> = parse_sweep(spec)?
            .into_iter()
            .map(|k| Length::new(k * radius))
            .collect::<Result<_, _>>()?;
        let results = deflection_sweep(&body, &bs, args.termination_factor, &control);
        for (b, r) in bs.iter().zip(results) {
            table.push(photon_row(b.value(), &r?));
        }
        table.render(args.format.unwrap_or(Format::Csv), false)
    } else {
        let b = match (args.b_m, args.b_radii) {
            (Some(m), _) => m,
            (None, Some(k)) => k * radius,
            (None, None) => radius,
        };
        let path = RayPath::past_body(body, Length::new(b)?, args.termination_factor)?;
        let r = trace_ray(&path, &control)?;
        table.push(photon_row(b, &r));
        table.render(args.format.unwrap_or(Format::Json), true)
    }
}

fn experiment(
    args: &ExperimentArgs,
    bodies: &BodyRegistry,
    data_dir: Option<&std::path::Path>,
) -> Result<(String, i32), Error> {
    let source = data::resolve(&args.registry, data::EXPERIMENTS_FILE, data_dir);
    let records = data::load_experiments(&source, bodies)?;
    let summary = double_effect_verdict(&records, bodies, args.threshold)?;
    let text = match args.report {
        ReportFormat::Text => summary.to_text(),
        ReportFormat::Json => {
            serde_json::to_string_pretty(&summary).map_err(|e| Error::Output(e.to_string()))? + "\n"
        }
    };
    Ok((text, summary.exit_code()))
}

fn dispatch(cli: &Cli, data_dir: Option<&std::path::Path>) -> Result<(String, i32), Error> {
    let bodies_source: Source = data::resolve(&cli.bodies, data::BODIES_FILE, data_dir);
    let bodies = data::load_bodies(&bodies_source)?;
    match &cli.command {
        Command::Constants => Ok((constants()?, 0)),
        Command::Potential(a) => Ok((potential(a, &bodies)?, 0)),
        Command::Spectrum(a) => Ok((spectrum(a, &bodies)?, 0)),
        Command::Shift(a) => Ok((shift(a, &bodies)?, 0)),
        Command::Photon(a) => Ok((photon(a, &bodies)?, 0)),
        Command::Experiment(a) => experiment(a, &bodies, data_dir),
    }
}

/// Runs one invocation. Returns the process exit code: 0 success, 1 domain
/// error or failed experiment verdict, 2 usage error.
pub fn run<I, T>(
    args: I,
    data_dir: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match dispatch(&cli, data_dir.as_deref()) {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 1;
            }
            code
        }
        Err(Error::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
