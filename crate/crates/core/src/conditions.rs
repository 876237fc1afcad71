//! Closed-form conditions for ideal and super-ideal focusing: general and
//! monopole two-channel checks, the optimal source distribution (OSD), the
//! asymmetric two-channel case, the uniform path-length-difference array
//! (UPDA) and the far-field uniform line array (ULA).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::acoustics::ula_steering_vector;
use crate::acoustics::Wavenumber;
use crate::error::{Error, Result};
use crate::geometry::{dot3, norm3, sub3, PathMetrics, Point3};
use crate::linalg::{dot, ComplexMatrix};

/// Lowest-order branch.
pub const DEFAULT_BRANCH: i64 = 1;
/// Tolerance for the general checks and for integer offsets.
pub const CHECK_TOL: f64 = 1e-9;
/// Below this `|cos θ|` the asymmetric system is degenerate (infinite frequency).
const DEGENERATE_COS: f64 = 1e-12;
/// Below this `|sin|` the UPDA closed form is replaced by its limit.
const UPDA_SERIES_THRESHOLD: f64 = 1e-8;

fn odd(n: i64) -> f64 {
    (2 * n - 1) as f64
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

/// Result of a general 2×2 ideal-focusing check.
#[derive(Debug, Clone, Serialize)]
pub struct TwoChannelCheck {
    pub holds: bool,
    /// Distance of `Δφ₁ − Δφ₂` from the nearest odd multiple of π, radians.
    pub phase_defect: f64,
    /// `|Δg₁ − Δg₂| / max(Δg₁, Δg₂)`.
    pub magnitude_defect: f64,
    /// `|g₁₂|`, the focusing crosstalk.
    pub crosstalk: f64,
}

/// Ideal focusing of a general 2×2 plant: `Δφ₁ − Δφ₂ = (2n−1)π` and
/// `Δg₁ = Δg₂`, with `Δg_l = |g₁ₗ||g₂ₗ|` and `Δφ_l = ∠g₁ₗ − ∠g₂ₗ`.
pub fn two_channel_ideal_check(g: &ComplexMatrix, tol: f64) -> Result<TwoChannelCheck> {
    if g.shape() != (2, 2) {
        return Err(Error::Dimension(format!(
            "expected a 2x2 plant, got {:?}",
            g.shape()
        )));
    }
    if g.as_slice().iter().any(|z| z.norm() == 0.0) {
        return Err(Error::InvalidParameter(
            "all four plant entries must be nonzero".into(),
        ));
    }
    let dg: Vec<f64> = (0..2)
        .map(|l| g[(0, l)].norm() * g[(1, l)].norm())
        .collect();
    let dphi: Vec<f64> = (0..2).map(|l| g[(0, l)].arg() - g[(1, l)].arg()).collect();

    let diff = dphi[0] - dphi[1] - PI;
    let phase_defect = (diff - (diff / (2.0 * PI)).round() * 2.0 * PI).abs();
    let magnitude_defect = (dg[0] - dg[1]).abs() / dg[0].max(dg[1]);
    let crosstalk = dot(g.row(1), g.row(0)).norm();
    Ok(TwoChannelCheck {
        holds: phase_defect <= tol && magnitude_defect <= tol,
        phase_defect,
        magnitude_defect,
        crosstalk,
    })
}

/// Result of the free-field monopole two-source check.
#[derive(Debug, Clone, Serialize)]
pub struct MonopoleCheck {
    pub holds: bool,
    /// Branch `n` of the nearest odd multiple `(2n−1)Λ/2`.
    pub branch: i64,
    /// Distance of `η₁ − η₂` from `(2n−1)Λ/2`, metres.
    pub path_defect: f64,
    /// `|ξ₁ − ξ₂| / max(ξ₁, ξ₂)`.
    pub product_defect: f64,
}

/// Monopole ideal focusing: `η₁ − η₂ = (2n−1)Λ/2` and `ξ₁ = ξ₂`.
///
/// The path condition is accepted within `tol · Λ`, the product condition
/// within `tol` relative.
pub fn monopole_ideal_check(
    metrics: &PathMetrics,
    wavelength: f64,
    tol: f64,
) -> Result<MonopoleCheck> {
    if metrics.eta.len() != 2 || metrics.xi.len() != 2 {
        return Err(Error::Dimension(format!(
            "monopole check needs exactly 2 sources, got {}",
            metrics.eta.len()
        )));
    }
    positive("wavelength", wavelength)?;
    let half = wavelength / 2.0;
    let q = (metrics.eta[0] - metrics.eta[1]) / half;
    // nearest odd integer 2n − 1
    let n = ((q + 1.0) / 2.0).round() as i64;
    let path_defect = (q - odd(n)).abs() * half;
    let product_defect = (metrics.xi[0] - metrics.xi[1]).abs() / metrics.xi[0].max(metrics.xi[1]);
    Ok(MonopoleCheck {
        holds: path_defect <= tol * wavelength && product_defect <= tol,
        branch: n,
        path_defect,
        product_defect,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignVariant {
    Osd,
    Asymmetric,
    Upda,
}

/// Output of a two-channel or UPDA design rule.
#[derive(Debug, Clone, Serialize)]
pub struct FocusingDesign {
    pub variant: DesignVariant,
    pub inputs: BTreeMap<&'static str, f64>,
    pub branch: i64,
    pub feasible: bool,
    /// Which constraint failed when infeasible.
    pub violated: Option<String>,
    /// Optimal loudspeaker angle `γ_opt`, radians (OSD only).
    pub gamma_opt: Option<f64>,
    /// Angle between `Δn̂` and `x₁`, radians (asymmetric only).
    pub theta: Option<f64>,
    pub wavelength: f64,
    pub frequency_hz: f64,
    /// `μ = ka` with `a` the control-point radius.
    pub mu: f64,
    /// Longest wavelength at which the layout can focus ideally.
    pub wavelength_low: f64,
}

impl FocusingDesign {
    /// Full loudspeaker span `Δγ = 2|γ_opt|`.
    pub fn span(&self) -> Option<f64> {
        self.gamma_opt.map(|g| 2.0 * g.abs())
    }

    pub fn wavenumber(&self) -> Result<Wavenumber> {
        Wavenumber::from_wavelength(self.wavelength)
    }
}

/// OSD loudspeaker angle `γ_opt = asin((2n−1)Λ/(8a))`.
///
/// Infeasible when `|(2n−1)Λ| > 8a`; the design is still returned, with
/// `gamma_opt = None`.
pub fn osd_design(wavelength: f64, a: f64, n: i64, speed_of_sound: f64) -> Result<FocusingDesign> {
    positive("wavelength", wavelength)?;
    positive("a", a)?;
    positive("speed of sound", speed_of_sound)?;
    let s = odd(n) * wavelength / (8.0 * a);
    let feasible = s.abs() <= 1.0;
    let k = 2.0 * PI / wavelength;
    Ok(FocusingDesign {
        variant: DesignVariant::Osd,
        inputs: BTreeMap::from([
            ("wavelength", wavelength),
            ("a", a),
            ("speed_of_sound", speed_of_sound),
        ]),
        branch: n,
        feasible,
        violated: (!feasible).then(|| {
            format!(
                "|(2n-1) wavelength| = {:.6} m exceeds 8a = {:.6} m",
                (odd(n) * wavelength).abs(),
                8.0 * a
            )
        }),
        gamma_opt: feasible.then(|| s.asin()),
        theta: None,
        wavelength,
        frequency_hz: speed_of_sound / wavelength,
        mu: k * a,
        wavelength_low: 8.0 * a,
    })
}

/// Wavelength at which an OSD pair with span `Δγ` focuses super-ideally:
/// `Λ = 8a sin(Δγ/2) / (2n−1)`.
pub fn osd_wavelength_for_span(span: f64, a: f64, n: i64) -> Result<f64> {
    positive("a", a)?;
    if !(span > 0.0 && span <= PI) {
        return Err(Error::InvalidParameter(format!(
            "span must be in (0, 180°], got {span} rad"
        )));
    }
    let w = 8.0 * a * (span / 2.0).sin() / odd(n);
    positive("wavelength", w)?;
    Ok(w)
}

fn unit(v: Point3) -> Result<()> {
    let norm = norm3(v);
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitDirection { norm });
    }
    Ok(())
}

/// Asymmetric two-channel design, `Λ_opt = |4‖Δn̂‖‖x₁‖cos θ / (2n−1)|`.
///
/// `θ = π/2` is degenerate (infinite frequency) and reported as infeasible.
pub fn asymmetric_design(
    n1: Point3,
    n2: Point3,
    x1: Point3,
    n: i64,
    speed_of_sound: f64,
) -> Result<FocusingDesign> {
    unit(n1)?;
    unit(n2)?;
    positive("speed of sound", speed_of_sound)?;
    let dn = sub3(n1, n2);
    let (dn_norm, x_norm) = (norm3(dn), norm3(x1));
    if dn_norm < 1e-12 {
        return Err(Error::InvalidParameter(
            "source directions must differ".into(),
        ));
    }
    positive("|x1|", x_norm)?;
    let cos = (dot3(dn, x1) / (dn_norm * x_norm)).clamp(-1.0, 1.0);
    let theta = cos.acos();
    let wavelength_low = 4.0 * dn_norm * x_norm;
    let degenerate = cos.abs() < DEGENERATE_COS;
    let wavelength = if degenerate {
        0.0
    } else {
        (wavelength_low * cos / odd(n)).abs()
    };
    let (frequency_hz, mu) = if degenerate {
        (f64::INFINITY, f64::INFINITY)
    } else {
        (speed_of_sound / wavelength, 2.0 * PI / wavelength * x_norm)
    };
    Ok(FocusingDesign {
        variant: DesignVariant::Asymmetric,
        inputs: BTreeMap::from([
            ("delta_n_norm", dn_norm),
            ("x1_norm", x_norm),
            ("speed_of_sound", speed_of_sound),
        ]),
        branch: n,
        feasible: !degenerate,
        violated: degenerate
            .then(|| "theta = 90°: the system is unstable (infinite frequency)".to_string()),
        gamma_opt: None,
        theta: Some(theta),
        wavelength,
        frequency_hz,
        mu,
        wavelength_low,
    })
}

/// Inverse of [`asymmetric_design`]: `θ = acos((2n−1)Λ / (4‖Δn̂‖‖x₁‖))`,
/// subject to `|(2n−1)Λ| ≤ 4‖Δn̂‖‖x₁‖`.
pub fn asymmetric_angle(delta_n_norm: f64, x1_norm: f64, wavelength: f64, n: i64) -> Result<f64> {
    positive("|delta n|", delta_n_norm)?;
    positive("|x1|", x1_norm)?;
    positive("wavelength", wavelength)?;
    let c = odd(n) * wavelength / (4.0 * delta_n_norm * x1_norm);
    if c.abs() > 1.0 {
        return Err(Error::Infeasible(format!(
            "|(2n-1) wavelength| = {:.6} m exceeds 4|dn||x1| = {:.6} m",
            (odd(n) * wavelength).abs(),
            4.0 * delta_n_norm * x1_norm
        )));
    }
    Ok(c.acos())
}

/// Given `θ₁₂` (between `n̂₂` and `x₁`), the partner angle
/// `θ₁₁ = acos(cos θ₁₂ + (2n−1)Λ/(4a))`.
pub fn asymmetric_angle_pair(theta12: f64, wavelength: f64, a: f64, n: i64) -> Result<f64> {
    positive("a", a)?;
    if !(wavelength.is_finite() && wavelength >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "wavelength must be non-negative, got {wavelength}"
        )));
    }
    let c = theta12.cos() + odd(n) * wavelength / (4.0 * a);
    if c.abs() > 1.0 {
        return Err(Error::Infeasible(format!(
            "|cos(theta12) + (2n-1) wavelength / 4a| = {} > 1",
            c.abs()
        )));
    }
    Ok(c.acos())
}

/// Symmetric UPDA focusing crosstalk in both of its forms.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct UpdaCrosstalk {
    /// `(1/R²) Σ cos(k l Δη)` over the symmetric index set.
    pub sum_form: f64,
    /// `sin(Lkη_max/(L−1)) / (R² sin(kη_max/(L−1)))`.
    pub closed_form: f64,
    /// Denominator vanished: a grating lobe, closed form replaced by its limit.
    pub grating_lobe: bool,
}

/// UPDA crosstalk `g₁₂` under the symmetric far-field model.
///
/// The sum runs over `l = −(L−1)/2 … (L−1)/2`; even `L` gives half-integer
/// indices and both forms stay valid.
pub fn upda_crosstalk(l: usize, eta_max: f64, k: f64, r: f64) -> Result<UpdaCrosstalk> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!(
            "UPDA needs L >= 2, got {l}"
        )));
    }
    positive("eta_max", eta_max)?;
    positive("R", r)?;
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "wavenumber must be non-negative, got {k}"
        )));
    }
    let lf = l as f64;
    let r2 = r * r;
    let x = k * 2.0 * eta_max / (lf - 1.0);
    let half_span = (lf - 1.0) / 2.0;
    let sum: f64 = (0..l).map(|i| ((i as f64 - half_span) * x).cos()).sum();

    // y = kη_max/(L−1) = zπ + h; sin(Ly)/sin(y) = (−1)^{z(L−1)} sin(Lh)/sin(h)
    let y = k * eta_max / (lf - 1.0);
    let z = (y / PI).round();
    let h = y - z * PI;
    let sign = if (z as i64 * (l as i64 - 1)).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    };
    let grating_lobe = h.sin().abs() < UPDA_SERIES_THRESHOLD;
    let ratio = if grating_lobe {
        lf * (1.0 - (lf * lf - 1.0) * h * h / 6.0)
    } else {
        (lf * h).sin() / h.sin()
    };
    Ok(UpdaCrosstalk {
        sum_form: sum / r2,
        closed_form: sign * ratio / r2,
        grating_lobe,
    })
}

/// Zeros of the UPDA crosstalk, `Λ_opt = |4La sin γ_max / (n(L−1))|`, with
/// `n ≠ zL`. The low-frequency limit `Λ_low = 4La/(L−1)` is attached.
pub fn upda_zeros(
    l: usize,
    a: f64,
    gamma_max: f64,
    n: i64,
    speed_of_sound: f64,
) -> Result<FocusingDesign> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!(
            "UPDA needs L >= 2, got {l}"
        )));
    }
    positive("a", a)?;
    positive("speed of sound", speed_of_sound)?;
    if !(gamma_max > 0.0 && gamma_max <= PI / 2.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "gamma_max must be in (0, 90°], got {:.6}°",
            gamma_max.to_degrees()
        )));
    }
    if n.rem_euclid(l as i64) == 0 {
        return Err(Error::ExcludedBranch { n, l });
    }
    let lf = l as f64;
    let wavelength = (4.0 * lf * a * gamma_max.sin() / (n as f64 * (lf - 1.0))).abs();
    Ok(FocusingDesign {
        variant: DesignVariant::Upda,
        inputs: BTreeMap::from([
            ("l", lf),
            ("a", a),
            ("gamma_max", gamma_max),
            ("speed_of_sound", speed_of_sound),
        ]),
        branch: n,
        feasible: true,
        violated: None,
        gamma_opt: None,
        theta: None,
        wavelength,
        frequency_hz: speed_of_sound / wavelength,
        mu: 2.0 * PI / wavelength * a,
        wavelength_low: upda_low_wavelength(l, a),
    })
}

/// `Λ_low = 4La/(L−1)`: full 180° span, `n = 1`.
pub fn upda_low_wavelength(l: usize, a: f64) -> f64 {
    let lf = l as f64;
    4.0 * lf * a / (lf - 1.0)
}

/// `lim_{L→∞} Λ_low = 4a`.
pub fn upda_low_wavelength_limit(a: f64) -> f64 {
    4.0 * a
}

/// A validated far-field ULA layout focusing super-ideally at every control angle.
#[derive(Debug, Clone, Serialize)]
pub struct UlaDesign {
    pub l: usize,
    pub dx: f64,
    pub wavelength: f64,
    /// `α = Λ / (LΔx)`.
    pub alpha: f64,
    pub offsets: Vec<f64>,
    /// `θ_i = asin(μ_i α)`, radians.
    pub angles: Vec<f64>,
    /// Most control points any offset set can hold at this `α`.
    pub m_max: usize,
    /// `max |Γ − L·I| / L` of the unit plane-wave plant at these angles.
    pub gram_defect: f64,
}

/// Places ULA control points at `sin θ_i = μ_i α`.
///
/// Requires pairwise `μ_i − μ_j` integer and not a multiple of `L`, and
/// `|μ_i α| ≤ 1`.
pub fn ula_design(l: usize, dx: f64, wavelength: f64, offsets: &[f64]) -> Result<UlaDesign> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!(
            "ULA needs L >= 2, got {l}"
        )));
    }
    positive("dx", dx)?;
    positive("wavelength", wavelength)?;
    if offsets.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one offset is required".into(),
        ));
    }
    let lf = l as f64;
    let alpha = wavelength / (lf * dx);

    for i in 0..offsets.len() {
        for j in (i + 1)..offsets.len() {
            let d = offsets[i] - offsets[j];
            let n = d.round();
            if (d - n).abs() > CHECK_TOL {
                return Err(Error::NonIntegerOffset {
                    i,
                    j,
                    difference: d,
                });
            }
            if (n as i64).rem_euclid(l as i64) == 0 {
                return Err(Error::GratingOffset {
                    i,
                    j,
                    difference: d,
                    l,
                });
            }
        }
    }
    let mut angles = Vec::with_capacity(offsets.len());
    for (i, &mu) in offsets.iter().enumerate() {
        let s = mu * alpha;
        if s.abs() > 1.0 + 1e-12 {
            return Err(Error::ArcsineDomain {
                value: s,
                context: format!("offset {i} = {mu} with alpha = {alpha:.6}"),
            });
        }
        angles.push(s.clamp(-1.0, 1.0).asin());
    }

    let k = Wavenumber::from_wavelength(wavelength)?;
    let steering: Vec<_> = angles
        .iter()
        .map(|&t| ula_steering_vector(t, l, dx, k))
        .collect();
    let mut gram_defect = 0.0_f64;
    for (i, gi) in steering.iter().enumerate() {
        for (j, gj) in steering.iter().enumerate() {
            let want = if i == j { lf } else { 0.0 };
            gram_defect = gram_defect.max((dot(gj, gi) - want).norm() / lf);
        }
    }

    let m_max = ((2.0 / alpha + 1e-12).floor() as usize + 1).min(l);
    Ok(UlaDesign {
        l,
        dx,
        wavelength,
        alpha,
        offsets: offsets.to_vec(),
        angles,
        m_max,
        gram_defect,
    })
}

/// Symmetric ULA layout limits.
#[derive(Debug, Clone, Serialize)]
pub struct UlaSymmetricLimits {
    pub alpha: f64,
    /// Largest odd `M` with `M ≤ 2LΔx/Λ + 1` (and `M ≤ L`).
    pub m_max: usize,
    /// All `m_max` control angles, ascending, `sin θ = iα` for `|i| ≤ (M−1)/2`.
    pub angles: Vec<f64>,
    /// `Λ_low = LΔx`.
    pub wavelength_low: f64,
    /// Whether three symmetric points fit at all (`Λ ≤ LΔx`).
    pub feasible_for_three: bool,
}

pub fn ula_symmetric_limits(l: usize, dx: f64, wavelength: f64) -> Result<UlaSymmetricLimits> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!(
            "ULA needs L >= 2, got {l}"
        )));
    }
    positive("dx", dx)?;
    positive("wavelength", wavelength)?;
    let length = l as f64 * dx;
    let alpha = wavelength / length;
    let bound = 2.0 * length / wavelength + 1.0;
    let mut m_max = ((bound * (1.0 + 1e-12)).floor() as usize).min(l).max(1);
    if m_max.is_multiple_of(2) {
        m_max -= 1;
    }
    let half = (m_max as i64 - 1) / 2;
    let angles = (-half..=half)
        .map(|i| (i as f64 * alpha).clamp(-1.0, 1.0).asin())
        .collect();
    Ok(UlaSymmetricLimits {
        alpha,
        m_max,
        angles,
        wavelength_low: length,
        feasible_for_three: m_max >= 3,
    })
}

/// Array length `LΔx = Λ / sin θ₂` that places the first symmetric pair at `±θ₂`.
pub fn ula_array_length(wavelength: f64, theta2: f64) -> Result<f64> {
    positive("wavelength", wavelength)?;
    if !(theta2 > 0.0 && theta2 <= PI / 2.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "theta2 must be in (0, 90°], got {:.6}°",
            theta2.to_degrees()
        )));
    }
    Ok(wavelength / theta2.sin())
}
