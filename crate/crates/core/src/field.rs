//! Beamforming-gain maps over arcs and horizontal-plane grids, with CSV and
//! JSON export.

use std::fmt::Write as _;
use std::io;

use serde::{Deserialize, Serialize};

use crate::acoustics::{gain_between, AcousticModel, SPEED_OF_SOUND};
use crate::error::{Error, Result};
use crate::geometry::{distance, norm3, polar, Point3};
use crate::linalg::C64;

/// Grid points closer than this to a source are skipped.
pub const SOURCE_EXCLUSION: f64 = 1e-6;
/// Lowest value written in the dB column.
pub const DB_FLOOR: f64 = -120.0;

pub const CSV_HEADER: &str = "x,y,z,gain_linear,gain_db";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Grid {
    /// Points at `radius` and the listed azimuths (radians), in input order.
    Arc { radius: f64, angles: Vec<f64> },
    /// `resolution × resolution` square over `[−extent, extent]²` at z = 0,
    /// row-major with y in the outer loop.
    Plane { extent: f64, resolution: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub position: Point3,
    /// `None` when the point coincides with a source.
    pub gain: Option<f64>,
}

impl FieldSample {
    pub fn gain_db(&self) -> Option<f64> {
        self.gain.map(to_db)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMap {
    pub grid: Grid,
    pub focus: Point3,
    pub model: AcousticModel,
    pub wavenumber: f64,
    /// Frequency at the default speed of sound.
    pub frequency_hz: f64,
    /// `k‖x₀‖`.
    pub mu: f64,
    pub samples: Vec<FieldSample>,
}

/// `20 log₁₀ g`, clamped at [`DB_FLOOR`].
pub fn to_db(gain: f64) -> f64 {
    if gain <= 0.0 {
        return DB_FLOOR;
    }
    (20.0 * gain.log10()).max(DB_FLOOR)
}

struct Sampler<'a> {
    model: &'a AcousticModel,
    sources: &'a [Point3],
    g0: Vec<C64>,
}

impl<'a> Sampler<'a> {
    fn new(model: &'a AcousticModel, sources: &'a [Point3], x0: Point3) -> Result<Self> {
        if sources.is_empty() {
            return Err(Error::Dimension("no sources".into()));
        }
        let g0 = model.field_vector(sources, x0)?;
        Ok(Self { model, sources, g0 })
    }

    fn sample(&self, x: Point3) -> Result<FieldSample> {
        if self
            .sources
            .iter()
            .any(|&s| distance(s, x) < SOURCE_EXCLUSION)
        {
            return Ok(FieldSample {
                position: x,
                gain: None,
            });
        }
        let g = self.model.field_vector(self.sources, x)?;
        Ok(FieldSample {
            position: x,
            gain: Some(gain_between(&g, &self.g0)?),
        })
    }
}

fn assemble(grid: Grid, x0: Point3, model: &AcousticModel, samples: Vec<FieldSample>) -> FieldMap {
    let k = model.wavenumber;
    FieldMap {
        grid,
        focus: x0,
        model: *model,
        wavenumber: k.k(),
        frequency_hz: k.frequency(SPEED_OF_SOUND),
        mu: k.k() * norm3(x0),
        samples,
    }
}

/// Gain on an arc of `radius` when focusing at `x0`.
pub fn sample_arc(
    sources: &[Point3],
    model: &AcousticModel,
    x0: Point3,
    radius: f64,
    angles: &[f64],
) -> Result<FieldMap> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "radius must be positive, got {radius}"
        )));
    }
    let sampler = Sampler::new(model, sources, x0)?;
    let samples = angles
        .iter()
        .map(|&a| sampler.sample(polar(radius, a)))
        .collect::<Result<Vec<_>>>()?;
    let grid = Grid::Arc {
        radius,
        angles: angles.to_vec(),
    };
    Ok(assemble(grid, x0, model, samples))
}

fn plane_points(extent: f64, resolution: usize) -> Result<Vec<Point3>> {
    if resolution < 2 {
        return Err(Error::InvalidParameter(format!(
            "resolution must be >= 2, got {resolution}"
        )));
    }
    if !(extent.is_finite() && extent > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "extent must be positive, got {extent}"
        )));
    }
    let step = 2.0 * extent / (resolution - 1) as f64;
    let coord = |i: usize| -extent + i as f64 * step;
    Ok((0..resolution * resolution)
        .map(|idx| [coord(idx % resolution), coord(idx / resolution), 0.0])
        .collect())
}

/// Gain over a horizontal square grid, evaluated on one thread.
pub fn sample_plane_serial(
    sources: &[Point3],
    model: &AcousticModel,
    x0: Point3,
    extent: f64,
    resolution: usize,
) -> Result<FieldMap> {
    let points = plane_points(extent, resolution)?;
    let sampler = Sampler::new(model, sources, x0)?;
    let samples = points
        .into_iter()
        .map(|p| sampler.sample(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(
        Grid::Plane { extent, resolution },
        x0,
        model,
        samples,
    ))
}

/// Gain over a horizontal square grid. Cells are independent and written by
/// index, so the output matches [`sample_plane_serial`] exactly.
#[cfg(feature = "parallel")]
pub fn sample_plane(
    sources: &[Point3],
    model: &AcousticModel,
    x0: Point3,
    extent: f64,
    resolution: usize,
) -> Result<FieldMap> {
    use rayon::prelude::*;

    let points = plane_points(extent, resolution)?;
    let sampler = Sampler::new(model, sources, x0)?;
    let samples = points
        .into_par_iter()
        .map(|p| sampler.sample(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(
        Grid::Plane { extent, resolution },
        x0,
        model,
        samples,
    ))
}

#[cfg(not(feature = "parallel"))]
pub fn sample_plane(
    sources: &[Point3],
    model: &AcousticModel,
    x0: Point3,
    extent: f64,
    resolution: usize,
) -> Result<FieldMap> {
    sample_plane_serial(sources, model, x0, extent, resolution)
}

impl FieldMap {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Largest gain and its index.
    pub fn max_gain(&self) -> Option<(usize, f64)> {
        self.samples
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.gain.map(|g| (i, g)))
            .fold(None, |best, (i, g)| match best {
                Some((_, b)) if b >= g => best,
                _ => Some((i, g)),
            })
    }

    /// Gain of the sample closest to `x`.
    pub fn gain_near(&self, x: Point3) -> Option<f64> {
        self.samples
            .iter()
            .min_by(|a, b| distance(a.position, x).total_cmp(&distance(b.position, x)))
            .and_then(|s| s.gain)
    }

    /// CSV with 17 significant digits; skipped points have empty gain columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.samples.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for s in &self.samples {
            let [x, y, z] = s.position;
            let _ = write!(out, "{x:.16e},{y:.16e},{z:.16e},");
            match s.gain {
                Some(g) => {
                    let _ = writeln!(out, "{g:.16e},{:.16e}", to_db(g));
                }
                None => out.push_str(",\n"),
            }
        }
        out
    }

    pub fn write_csv<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("field map serialises")
    }

    pub fn write_json<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_json().as_bytes())?;
        w.write_all(b"\n")
    }
}
