//! Bundled layouts reproducing the worked examples: symmetric two-channel
//! (fig5a–d, fig6), head rotation (fig7a/b), UPDA (fig10a/b) and
//! far-field ULA (fig11, fig12a–c).

use serde::Serialize;

use crate::acoustics::{build_plant, AcousticModel, PlantMatrix, Wavenumber, SPEED_OF_SOUND};
use crate::conditions::{osd_wavelength_for_span, ula_design, ula_symmetric_limits, upda_zeros};
use crate::error::{Error, Result};
use crate::geometry::{build_geometry, norm3, polar, rotate_z, GeometrySpec, Layout};

/// Control-point radius (half the ear spacing), metres.
pub const HEAD_RADIUS: f64 = 0.09;
/// Loudspeaker distance for the two-channel and UPDA layouts, metres.
pub const SOURCE_DISTANCE: f64 = 1.0;
pub const ULA_ELEMENTS: usize = 20;
pub const ULA_SPACING: f64 = 0.012;
/// Frequency of the asymmetric ULA example, Hz.
pub const ULA_FREQUENCY: f64 = 4899.0;

pub const NAMES: [&str; 13] = [
    "fig5a", "fig5b", "fig5c", "fig5d", "fig6", "fig7a", "fig7b", "fig10a", "fig10b", "fig11",
    "fig12a", "fig12b", "fig12c",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelChoice {
    Monopole,
    PlaneWave,
}

#[derive(Debug, Clone, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub description: String,
    pub geometry: GeometrySpec,
    pub model: ModelChoice,
    pub frequency_hz: f64,
    /// Control point the field maps focus at.
    pub focus: usize,
}

impl Preset {
    pub fn layout(&self) -> Result<Layout> {
        build_geometry(&self.geometry)
    }

    pub fn wavenumber(&self) -> Result<Wavenumber> {
        Wavenumber::from_frequency(self.frequency_hz, SPEED_OF_SOUND)
    }

    pub fn acoustic_model(&self) -> Result<AcousticModel> {
        self.model_of_kind(self.model)
    }

    /// Plane-wave models use the farthest point of the layout as `R₀`.
    pub fn model_of_kind(&self, kind: ModelChoice) -> Result<AcousticModel> {
        let k = self.wavenumber()?;
        match kind {
            ModelChoice::Monopole => Ok(AcousticModel::monopole(k)),
            ModelChoice::PlaneWave => {
                let lay = self.layout()?;
                let r = lay
                    .sources
                    .iter()
                    .chain(&lay.points)
                    .map(|&p| norm3(p))
                    .fold(0.0, f64::max);
                AcousticModel::plane_wave(k, r)
            }
        }
    }

    pub fn plant(&self) -> Result<PlantMatrix> {
        let lay = self.layout()?;
        build_plant(&self.acoustic_model()?, &lay.sources, &lay.points)
    }

    pub fn mu(&self) -> Result<f64> {
        Ok(self.wavenumber()?.mu(HEAD_RADIUS))
    }
}

fn osd(name: &'static str, span_deg: f64) -> Result<Preset> {
    let w = osd_wavelength_for_span(span_deg.to_radians(), HEAD_RADIUS, 1)?;
    Ok(Preset {
        name,
        description: format!("symmetric two-channel OSD, span {span_deg}°"),
        geometry: GeometrySpec::TwoChannelSymmetric {
            a: HEAD_RADIUS,
            gamma: (span_deg / 2.0).to_radians(),
            r: SOURCE_DISTANCE,
        },
        model: ModelChoice::Monopole,
        frequency_hz: SPEED_OF_SOUND / w,
        focus: 0,
    })
}

/// Sources at ±30°, control points rotated by `rotation` about the origin.
fn head_rotation(name: &'static str, rotation_deg: f64) -> Preset {
    let rho = rotation_deg.to_radians();
    let span = 30f64.to_radians();
    let x1 = rotate_z([0.0, HEAD_RADIUS, 0.0], rho);
    // Λ = 4‖Δn̂‖ a cos θ with ‖Δn̂‖ = 2 sin 30° = 1 and θ = rotation
    let w = 4.0 * 2.0 * span.sin() * HEAD_RADIUS * rho.cos();
    Preset {
        name,
        description: format!("two-channel, sources at ±30°, head rotated {rotation_deg}°"),
        geometry: GeometrySpec::TwoChannelGeneral {
            sources: vec![polar(SOURCE_DISTANCE, span), polar(SOURCE_DISTANCE, -span)],
            points: vec![x1, [-x1[0], -x1[1], -x1[2]]],
        },
        model: ModelChoice::Monopole,
        frequency_hz: SPEED_OF_SOUND / w,
        focus: 0,
    }
}

fn upda(name: &'static str, l: usize, n: i64) -> Result<Preset> {
    let span = 60f64.to_radians();
    let d = upda_zeros(l, HEAD_RADIUS, span / 2.0, n, SPEED_OF_SOUND)?;
    Ok(Preset {
        name,
        description: format!("symmetric UPDA, L = {l}, span 60°, branch n = {n}"),
        geometry: GeometrySpec::Upda {
            l,
            delta_gamma: span,
            a: HEAD_RADIUS,
            r: SOURCE_DISTANCE,
        },
        model: ModelChoice::Monopole,
        frequency_hz: d.frequency_hz,
        focus: 0,
    })
}

fn ula(name: &'static str, frequency_hz: f64, angles: Vec<f64>, description: String) -> Preset {
    Preset {
        name,
        description,
        geometry: GeometrySpec::Ula {
            l: ULA_ELEMENTS,
            dx: ULA_SPACING,
            control_angles: angles,
            r: 100.0,
        },
        model: ModelChoice::PlaneWave,
        frequency_hz,
        focus: 0,
    }
}

fn ula_offsets(name: &'static str, offsets: &[f64]) -> Result<Preset> {
    let d = ula_design(
        ULA_ELEMENTS,
        ULA_SPACING,
        SPEED_OF_SOUND / ULA_FREQUENCY,
        offsets,
    )?;
    Ok(ula(
        name,
        ULA_FREQUENCY,
        d.angles,
        format!("far-field ULA, L = 20, offsets {offsets:?} at {ULA_FREQUENCY} Hz"),
    ))
}

fn ula_symmetric(name: &'static str, frequency_hz: f64) -> Result<Preset> {
    let lim = ula_symmetric_limits(ULA_ELEMENTS, ULA_SPACING, SPEED_OF_SOUND / frequency_hz)?;
    Ok(ula(
        name,
        frequency_hz,
        lim.angles,
        format!(
            "far-field ULA, L = 20, {} symmetric points at {frequency_hz} Hz",
            lim.m_max
        ),
    ))
}

/// Looks a preset up by name.
pub fn preset(name: &str) -> Result<Preset> {
    match name {
        "fig5a" => osd("fig5a", 11.0),
        "fig5b" => osd("fig5b", 57.0),
        "fig5c" => osd("fig5c", 120.0),
        "fig5d" => osd("fig5d", 180.0),
        "fig6" => {
            let mut p = osd("fig6", 180.0)?;
            p.description =
                "symmetric two-channel, full span, mu = 0.41 (below the OSD limit)".into();
            p.frequency_hz = Wavenumber::from_mu(0.41, HEAD_RADIUS)?.frequency(SPEED_OF_SOUND);
            Ok(p)
        }
        "fig7a" => Ok(head_rotation("fig7a", 30.0)),
        "fig7b" => Ok(head_rotation("fig7b", 70.0)),
        "fig10a" => upda("fig10a", 20, 4),
        "fig10b" => upda("fig10b", 5, 4),
        "fig11" => ula_offsets("fig11", &[-2.0, 0.0, 2.0]),
        "fig12a" => ula_symmetric("fig12a", 1484.0),
        "fig12b" => ula_symmetric("fig12b", 3435.0),
        "fig12c" => ula_symmetric("fig12c", 4899.0),
        other => Err(Error::InvalidParameter(format!(
            "unknown preset '{other}', expected one of {}",
            NAMES.join(", ")
        ))),
    }
}

pub fn all() -> Result<Vec<Preset>> {
    NAMES.iter().map(|n| preset(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{analyze_gram, FocusState, DEFAULT_EQUAL_TOL, DEFAULT_IDEAL_TOL};

    #[test]
    fn every_preset_builds() {
        for p in all().unwrap() {
            let plant = p.plant().unwrap();
            assert!(plant.num_points() >= 2, "{}", p.name);
            assert!(p.frequency_hz > 0.0);
        }
    }

    #[test]
    fn fig5d_is_quarter_pi() {
        assert!(
            (preset("fig5d").unwrap().mu().unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-12
        );
    }

    #[test]
    fn ula_presets_are_super_ideal() {
        for name in ["fig11", "fig12a", "fig12b", "fig12c"] {
            let plant = preset(name).unwrap().plant().unwrap();
            let a = analyze_gram(&plant.matrix, DEFAULT_IDEAL_TOL, DEFAULT_EQUAL_TOL).unwrap();
            assert_eq!(a.state, FocusState::SuperIdeal, "{name}");
        }
    }

    #[test]
    fn symmetric_point_counts() {
        let counts: Vec<usize> = ["fig12a", "fig12b", "fig12c"]
            .iter()
            .map(|n| preset(n).unwrap().layout().unwrap().points.len())
            .collect();
        assert_eq!(counts, [3, 5, 7]);
    }

    #[test]
    fn unknown_name() {
        assert!(preset("fig99").is_err());
    }
}
