//! Browser bindings: OSD field maps, ULA directivity and the UPDA crosstalk
//! identity.

use std::f64::consts::PI;

use focusing::acoustics::{ula_directivity, AcousticModel, Wavenumber, SPEED_OF_SOUND};
use focusing::conditions::{osd_design, ula_design, upda_crosstalk};
use focusing::field::{sample_plane, to_db};
use focusing::geometry::{build_geometry, GeometrySpec};
use wasm_bindgen::prelude::*;

const A: f64 = 0.09;

fn js(e: focusing::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Optimal span in degrees at `μ = ka`, or NaN below the low-frequency limit.
#[wasm_bindgen]
pub fn osd_span_deg(mu: f64) -> Result<f64, JsError> {
    let d = osd_design(2.0 * PI * A / mu, A, 1, SPEED_OF_SOUND).map_err(js)?;
    Ok(d.span().map_or(f64::NAN, f64::to_degrees))
}

/// Gain in dB over a `resolution²` grid of half-width `extent`, row-major
/// from (−extent, −extent), focusing at the left ear. The span follows the
/// OSD rule, clamped to 180° when infeasible. Skipped cells are NaN.
#[wasm_bindgen]
pub fn osd_field_db(
    mu: f64,
    resolution: usize,
    extent: f64,
    plane_wave: bool,
) -> Result<Vec<f64>, JsError> {
    let k = Wavenumber::from_mu(mu, A).map_err(js)?;
    let d = osd_design(k.wavelength(), A, 1, SPEED_OF_SOUND).map_err(js)?;
    let gamma = d.gamma_opt.unwrap_or(PI / 2.0);
    let lay = build_geometry(&GeometrySpec::TwoChannelSymmetric {
        a: A,
        gamma,
        r: 1.0,
    })
    .map_err(js)?;
    let model = if plane_wave {
        AcousticModel::plane_wave(k, 1.0).map_err(js)?
    } else {
        AcousticModel::monopole(k)
    };
    let map = sample_plane(&lay.sources, &model, lay.points[0], extent, resolution).map_err(js)?;
    Ok(map
        .samples
        .iter()
        .map(|s| s.gain.map_or(f64::NAN, to_db))
        .collect())
}

/// Control angles in degrees for a 20-element, 12 mm ULA.
#[wasm_bindgen]
pub fn ula_angles_deg(frequency_hz: f64, offsets: Vec<f64>) -> Result<Vec<f64>, JsError> {
    let d = ula_design(20, 0.012, SPEED_OF_SOUND / frequency_hz, &offsets).map_err(js)?;
    Ok(d.angles.iter().map(|t| t.to_degrees()).collect())
}

/// Directivity over `points` angles in [−90°, 90°] when focusing at each
/// control angle in turn, concatenated per control point.
#[wasm_bindgen]
pub fn ula_directivity_curves(
    frequency_hz: f64,
    offsets: Vec<f64>,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    let d = ula_design(20, 0.012, SPEED_OF_SOUND / frequency_hz, &offsets).map_err(js)?;
    let step = PI / (points.max(2) - 1) as f64;
    let mut out = Vec::with_capacity(points * d.angles.len());
    for &t0 in &d.angles {
        out.extend(
            (0..points).map(|i| ula_directivity(-PI / 2.0 + i as f64 * step, t0, 20, d.alpha)),
        );
    }
    Ok(out)
}

/// UPDA crosstalk `R²g₁₂` against `kη_max ∈ [0, k_eta_max]`, interleaved
/// as (sum form, closed form) pairs.
#[wasm_bindgen]
pub fn upda_crosstalk_curve(l: usize, k_eta_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    let step = k_eta_max / (points.max(2) - 1) as f64;
    let mut out = Vec::with_capacity(2 * points);
    for i in 0..points {
        let c = upda_crosstalk(l, 1.0, i as f64 * step, 1.0).map_err(js)?;
        out.push(c.sum_form);
        out.push(c.closed_form);
    }
    Ok(out)
}
