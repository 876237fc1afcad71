//! Free-field transfer-function models and field-quality functionals.
//!
//! Phase convention: outgoing waves are `e^{-jkR}`. The usual `1/4π`
//! monopole scaling is left out everywhere; every quantity computed from
//! these models is a ratio, so the scale cancels.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance, dot3, norm3, Point3};
use crate::linalg::{dot, hermitian_angle_slices, norm, ComplexMatrix, C64};

/// Speed of sound used by every preset, m/s.
pub const SPEED_OF_SOUND: f64 = 343.0;

/// Source/receiver separations below this are rejected as coincident.
pub const COINCIDENCE_DISTANCE: f64 = 1e-9;

/// Below this the ULA directivity denominator is treated as zero and the
/// series expansion around the removable singularity is used.
const DIRECTIVITY_SERIES_THRESHOLD: f64 = 1e-8;

/// Acoustic wavenumber `k = 2πf/c`, rad/m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Wavenumber(f64);

impl Wavenumber {
    pub fn new(k: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "wavenumber must be positive, got {k}"
            )));
        }
        Ok(Self(k))
    }

    pub fn from_frequency(frequency_hz: f64, speed_of_sound: f64) -> Result<Self> {
        if !(frequency_hz.is_finite() && frequency_hz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "frequency must be positive, got {frequency_hz}"
            )));
        }
        if !(speed_of_sound.is_finite() && speed_of_sound > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "speed of sound must be positive, got {speed_of_sound}"
            )));
        }
        Self::new(2.0 * PI * frequency_hz / speed_of_sound)
    }

    pub fn from_wavelength(wavelength: f64) -> Result<Self> {
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "wavelength must be positive, got {wavelength}"
            )));
        }
        Self::new(2.0 * PI / wavelength)
    }

    /// From the non-dimensional frequency `μ = ka`.
    pub fn from_mu(mu: f64, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "radius must be positive, got {radius}"
            )));
        }
        Self::new(mu / radius)
    }

    pub fn k(self) -> f64 {
        self.0
    }

    pub fn wavelength(self) -> f64 {
        2.0 * PI / self.0
    }

    pub fn frequency(self, speed_of_sound: f64) -> f64 {
        self.0 * speed_of_sound / (2.0 * PI)
    }

    /// Non-dimensional frequency `μ = ka`.
    pub fn mu(self, radius: f64) -> f64 {
        self.0 * radius
    }
}

impl TryFrom<f64> for Wavenumber {
    type Error = Error;
    fn try_from(k: f64) -> Result<Self> {
        Self::new(k)
    }
}

impl From<Wavenumber> for f64 {
    fn from(k: Wavenumber) -> f64 {
        k.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    /// `e^{-jkR}/R` point source in free field.
    Monopole,
    /// Far-field approximation `δ e^{jk n̂·x}` with `δ = e^{-jkR₀}/R₀`.
    PlaneWave { reference_distance: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcousticModel {
    #[serde(flatten)]
    pub kind: ModelKind,
    pub wavenumber: Wavenumber,
}

impl AcousticModel {
    pub fn monopole(k: Wavenumber) -> Self {
        Self {
            kind: ModelKind::Monopole,
            wavenumber: k,
        }
    }

    pub fn plane_wave(k: Wavenumber, reference_distance: f64) -> Result<Self> {
        if !(reference_distance.is_finite() && reference_distance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "reference distance must be positive, got {reference_distance}"
            )));
        }
        Ok(Self {
            kind: ModelKind::PlaneWave { reference_distance },
            wavenumber: k,
        })
    }

    pub fn with_wavenumber(self, k: Wavenumber) -> Self {
        Self {
            kind: self.kind,
            wavenumber: k,
        }
    }

    /// Transfer function from `source` to `receiver`.
    ///
    /// Under the plane-wave model whichever of the two points lies farther
    /// from the origin sets the propagation direction and the nearer one
    /// carries the phase; the approximation is symmetric, so reciprocity holds.
    pub fn transfer(&self, source: Point3, receiver: Point3) -> Result<C64> {
        let k = self.wavenumber;
        match self.kind {
            ModelKind::Monopole => monopole_tf(source, receiver, k),
            ModelKind::PlaneWave { reference_distance } => {
                let (far, near) = if norm3(source) >= norm3(receiver) {
                    (source, receiver)
                } else {
                    (receiver, source)
                };
                let r = norm3(far);
                if r < COINCIDENCE_DISTANCE {
                    return Err(Error::CoincidentPoints { distance: r });
                }
                let dir = [far[0] / r, far[1] / r, far[2] / r];
                plane_wave_tf(dir, near, k, reference_distance)
            }
        }
    }

    /// Transfer functions from every source to `point`: the row `g(x)`.
    pub fn field_vector(&self, sources: &[Point3], point: Point3) -> Result<Vec<C64>> {
        sources.iter().map(|&s| self.transfer(s, point)).collect()
    }
}

/// Free-field monopole `e^{-jkR}/R`, `R = ‖s − x‖`.
pub fn monopole_tf(source: Point3, receiver: Point3, k: Wavenumber) -> Result<C64> {
    let r = distance(source, receiver);
    if r <= COINCIDENCE_DISTANCE {
        return Err(Error::CoincidentPoints { distance: r });
    }
    Ok(C64::from_polar(1.0 / r, -k.k() * r))
}

/// Far-field plane wave `(e^{-jkR}/R) e^{jk n̂·x}` arriving from direction `n̂`.
pub fn plane_wave_tf(direction: Point3, receiver: Point3, k: Wavenumber, r: f64) -> Result<C64> {
    let n = norm3(direction);
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitDirection { norm: n });
    }
    let phase = k.k() * (dot3(direction, receiver) - r);
    Ok(C64::from_polar(1.0 / r, phase))
}

/// An `M × L` plant matrix together with the geometry and model it came from.
#[derive(Debug, Clone, Serialize)]
pub struct PlantMatrix {
    pub matrix: ComplexMatrix,
    pub sources: Vec<Point3>,
    pub points: Vec<Point3>,
    pub model: AcousticModel,
}

impl PlantMatrix {
    pub fn num_points(&self) -> usize {
        self.matrix.rows()
    }

    pub fn num_sources(&self) -> usize {
        self.matrix.cols()
    }
}

/// `G[m][l]` = transfer function from source `l` to control point `m`.
pub fn build_plant(
    model: &AcousticModel,
    sources: &[Point3],
    points: &[Point3],
) -> Result<PlantMatrix> {
    if points.is_empty() || sources.len() < points.len() {
        return Err(Error::Dimension(format!(
            "need L >= M >= 1, got L = {}, M = {}",
            sources.len(),
            points.len()
        )));
    }
    let mut data = Vec::with_capacity(points.len() * sources.len());
    for &x in points {
        for &s in sources {
            data.push(model.transfer(s, x)?);
        }
    }
    Ok(PlantMatrix {
        matrix: ComplexMatrix::new(points.len(), sources.len(), data)?,
        sources: sources.to_vec(),
        points: points.to_vec(),
        model: *model,
    })
}

/// Normalised beamforming gain `|g(x₀)ᴴ g(x)| / (‖g(x)‖ ‖g(x₀)‖)` when
/// focusing at `x0` and observing at `x`.
pub fn beamforming_gain(
    x: Point3,
    x0: Point3,
    model: &AcousticModel,
    sources: &[Point3],
) -> Result<f64> {
    let g = model.field_vector(sources, x)?;
    let g0 = model.field_vector(sources, x0)?;
    gain_between(&g, &g0)
}

pub(crate) fn gain_between(g: &[C64], g0: &[C64]) -> Result<f64> {
    let (n, n0) = (norm(g), norm(g0));
    if n == 0.0 || n0 == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok((dot(g0, g).norm() / (n * n0)).min(1.0))
}

/// Beamforming gain expressed through the Hermitian angle, `cos Θ(x, x₀)`.
pub fn beamforming_gain_from_angle(g: &[C64], g0: &[C64]) -> Result<f64> {
    Ok(hermitian_angle_slices(g, g0)?.cos())
}

/// Far-field ULA directivity
/// `|sin((π/α)(sinθ − sinθ₀)) / (L sin((π/(Lα))(sinθ − sinθ₀)))|`,
/// with `α = Λ/(LΔx)`.
pub fn ula_directivity(theta: f64, theta0: f64, l: usize, alpha: f64) -> f64 {
    debug_assert!(l >= 2 && alpha > 0.0);
    let lf = l as f64;
    let x = PI * (theta.sin() - theta0.sin()) / (lf * alpha);
    let den = x.sin();
    if den.abs() < DIRECTIVITY_SERIES_THRESHOLD {
        // x = zπ + h: |sin(L x)/(L sin x)| = |sin(L h)/(L sin h)| ≈ 1 − (L²−1)h²/6
        let h = x - (x / PI).round() * PI;
        return (1.0 - (lf * lf - 1.0) * h * h / 6.0).abs().min(1.0);
    }
    ((lf * x).sin() / (lf * den)).abs().min(1.0)
}

/// Steering vector of a centred `L`-element line array along the y axis,
/// for a unit plane wave from broadside angle `θ`.
pub fn ula_steering_vector(theta: f64, l: usize, spacing: f64, k: Wavenumber) -> Vec<C64> {
    let centre = (l as f64 - 1.0) / 2.0;
    (0..l)
        .map(|i| C64::from_polar(1.0, k.k() * (i as f64 - centre) * spacing * theta.sin()))
        .collect()
}
