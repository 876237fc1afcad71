use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "focus",
    version,
    about = "Focusing analysis for loudspeaker arrays"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gram analysis of a layout at one or more frequencies.
    Analyze(AnalyzeArgs),
    /// Closed-form designs for ideal and super-ideal focusing.
    #[command(subcommand)]
    Design(DesignCommand),
    /// Beamforming-gain map on an arc or a horizontal grid.
    Field(FieldArgs),
    /// Run the built-in self-check suite.
    Verify(VerifyArgs),
    /// List the bundled presets.
    Presets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Monopole,
    PlaneWave,
}

/// Inclusive linear range `START:END:COUNT`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| self.start + i as f64 * step)
            .collect()
    }
}

pub fn parse_range(s: &str) -> Result<Range, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected START:END:COUNT, got '{s}'"));
    }
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}"));
    let start = num(parts[0])?;
    let end = num(parts[1])?;
    let count = parts[2]
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("'{}': {e}", parts[2]))?;
    if !(start.is_finite() && end.is_finite()) {
        return Err("range bounds must be finite".into());
    }
    if count < 2 {
        return Err(format!("range needs at least 2 points, got {count}"));
    }
    if start >= end {
        return Err(format!("range start {start} must be below end {end}"));
    }
    Ok(Range { start, end, count })
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("'{s}': {e}"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Bundled layout (see `focus presets`).
    #[arg(long)]
    pub preset: Option<String>,
    /// Geometry JSON file.
    #[arg(long)]
    pub geometry: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ModelOpts {
    /// Source model; defaults to the preset's own, or monopole for files.
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Plane-wave reference distance in metres (defaults to the farthest point of the layout).
    #[arg(long, value_parser = parse_positive)]
    pub reference_distance: Option<f64>,
    /// Speed of sound, m/s.
    #[arg(long, default_value_t = 343.0, value_parser = parse_positive)]
    pub c: f64,
    /// Radius `a` used to report `μ = ka`, metres.
    #[arg(long, default_value_t = 0.09, value_parser = parse_positive)]
    pub mu_radius: f64,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub model: ModelOpts,
    /// Frequencies in Hz (comma separated).
    #[arg(long = "freq", value_delimiter = ',', value_parser = parse_positive)]
    pub frequencies: Vec<f64>,
    /// Linear frequency sweep in Hz, START:END:COUNT.
    #[arg(long, value_parser = parse_range)]
    pub sweep: Option<Range>,
    /// Linear sweep of μ = ka, START:END:COUNT.
    #[arg(long, value_parser = parse_range)]
    pub mu_sweep: Option<Range>,
    #[arg(long, default_value_t = 1e-9, value_parser = parse_positive)]
    pub ideal_tol: f64,
    #[arg(long, default_value_t = 1e-9, value_parser = parse_positive)]
    pub equal_tol: f64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Speed of sound, m/s.
    #[arg(long, default_value_t = 343.0, value_parser = parse_positive)]
    pub c: f64,
    /// Rebuild the plant under the plane-wave model and confirm super-ideal focusing.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum DesignCommand {
    /// Symmetric two-channel optimal source distribution.
    Osd(OsdArgs),
    /// Two-channel layout with rotated control points.
    Asymmetric(AsymmetricArgs),
    /// Uniform path-length-difference array.
    Upda(UpdaArgs),
    /// Far-field line array with control points at integer offsets.
    Ula(UlaArgs),
    /// Symmetric control-point limits of a far-field line array.
    UlaLimits(UlaLimitsArgs),
}

#[derive(Debug, Args)]
#[group(id = "osd_input", required = true, multiple = false)]
pub struct OsdInput {
    /// Frequency, Hz.
    #[arg(long = "f", value_parser = parse_positive)]
    pub frequency: Option<f64>,
    /// Non-dimensional frequency μ = ka.
    #[arg(long, value_parser = parse_positive)]
    pub mu: Option<f64>,
    /// Full loudspeaker span, degrees; solves for the frequency instead.
    #[arg(long, value_parser = parse_positive)]
    pub span: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OsdArgs {
    #[command(flatten)]
    pub input: OsdInput,
    /// Control-point radius, metres.
    #[arg(long, default_value_t = 0.09, value_parser = parse_positive)]
    pub a: f64,
    #[arg(long, default_value_t = 1)]
    pub n: i64,
    /// Loudspeaker distance used by --verify, metres.
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
    pub r: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct AsymmetricArgs {
    /// Loudspeaker azimuths, degrees.
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [30.0, -30.0], allow_hyphen_values = true)]
    pub sources: Vec<f64>,
    /// Rotation of the control-point pair about the origin, degrees.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub rotation: f64,
    #[arg(long, default_value_t = 0.09, value_parser = parse_positive)]
    pub a: f64,
    #[arg(long, default_value_t = 1)]
    pub n: i64,
    /// Solve for the rotation that focuses at this frequency (Hz) instead.
    #[arg(long = "f", value_parser = parse_positive)]
    pub frequency: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct UpdaArgs {
    #[arg(long = "L")]
    pub l: usize,
    #[arg(long, default_value_t = 0.09, value_parser = parse_positive)]
    pub a: f64,
    /// Outermost loudspeaker angle, degrees.
    #[arg(long, default_value_t = 90.0, value_parser = parse_positive)]
    pub gamma_max: f64,
    #[arg(long, default_value_t = 1)]
    pub n: i64,
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
    pub r: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct UlaArgs {
    #[arg(long = "L")]
    pub l: usize,
    /// Element spacing, metres.
    #[arg(long, value_parser = parse_positive)]
    pub dx: f64,
    /// Frequency, Hz.
    #[arg(long = "f", value_parser = parse_positive)]
    pub frequency: f64,
    /// Control-point offsets μ_i, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub offsets: Vec<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct UlaLimitsArgs {
    #[arg(long = "L")]
    pub l: usize,
    #[arg(long, value_parser = parse_positive)]
    pub dx: f64,
    #[arg(long = "f", value_parser = parse_positive)]
    pub frequency: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub model: ModelOpts,
    /// Frequency in Hz; defaults to the preset's design frequency.
    #[arg(long = "freq", value_parser = parse_positive)]
    pub frequency: Option<f64>,
    /// Index of the control point to focus at.
    #[arg(long)]
    pub focus: Option<usize>,
    /// Arc radius in metres; sample on an arc instead of a grid.
    #[arg(long, value_parser = parse_positive, requires = "angles")]
    pub arc: Option<f64>,
    /// Arc azimuths in degrees, START:END:COUNT.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub angles: Option<Range>,
    /// Half-width of the square grid, metres.
    #[arg(long, default_value_t = 1.2, value_parser = parse_positive)]
    pub extent: f64,
    #[arg(long, default_value_t = 101)]
    pub resolution: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run a reduced number of random cases.
    #[arg(long)]
    pub quick: bool,
    #[arg(long, default_value_t = focusing::verify::DEFAULT_SEED)]
    pub seed: u64,
    /// Offset in radians added to every design angle.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub perturb: f64,
    /// Emit the report as JSON.
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
