//! Source and control-point layouts, and path-length metrics.
//!
//! Right-handed Cartesian coordinates in metres. The control-point pair sits
//! on the y axis (`x₁ = (0, a, 0)`, `x₂ = −x₁`), sources are placed in the
//! horizontal plane at angle `γ` from the x axis, and line arrays run along
//! the y axis with broadside towards +x.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point3 = [f64; 3];

pub fn sub3(a: Point3, b: Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn dot3(a: Point3, b: Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm3(a: Point3) -> f64 {
    dot3(a, a).sqrt()
}

pub fn distance(a: Point3, b: Point3) -> f64 {
    norm3(sub3(a, b))
}

pub fn scale3(a: Point3, s: f64) -> Point3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// Point at distance `r` and azimuth `angle` (from +x towards +y) in the horizontal plane.
pub fn polar(r: f64, angle: f64) -> Point3 {
    [r * angle.cos(), r * angle.sin(), 0.0]
}

/// Rotation about the z axis.
pub fn rotate_z(p: Point3, angle: f64) -> Point3 {
    let (s, c) = angle.sin_cos();
    [c * p[0] - s * p[1], s * p[0] + c * p[1], p[2]]
}

/// Serde adapters storing radians internally and degrees on disk.
mod degrees {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rad: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(rad.to_degrees())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(f64::deserialize(d)?.to_radians())
    }

    pub mod vec {
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(rad: &[f64], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(rad.iter().map(|r| r.to_degrees()))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
            Ok(Vec::<f64>::deserialize(d)?
                .into_iter()
                .map(f64::to_radians)
                .collect())
        }
    }
}

fn default_far_field_radius() -> f64 {
    100.0
}

/// Declarative layout description. Angles are radians in memory and degrees
/// (`*_deg` fields) in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometrySpec {
    /// Two sources at `±γ` on a circle of radius `r`, control points at `±a` on the y axis.
    TwoChannelSymmetric {
        a: f64,
        #[serde(rename = "gamma_deg", with = "degrees")]
        gamma: f64,
        r: f64,
    },
    TwoChannelGeneral {
        sources: Vec<Point3>,
        points: Vec<Point3>,
    },
    /// Uniform path-length-difference array spanning `delta_gamma` on a circle of radius `r`.
    Upda {
        l: usize,
        #[serde(rename = "delta_gamma_deg", with = "degrees")]
        delta_gamma: f64,
        a: f64,
        r: f64,
    },
    /// Centred line array of `l` elements with spacing `dx`; control points
    /// at `control_angles` (from broadside) on a circle of radius `r`.
    Ula {
        l: usize,
        dx: f64,
        #[serde(rename = "control_angles_deg", with = "degrees::vec")]
        control_angles: Vec<f64>,
        #[serde(default = "default_far_field_radius")]
        r: f64,
    },
    Arbitrary {
        sources: Vec<Point3>,
        points: Vec<Point3>,
    },
}

/// Concrete coordinates produced by [`build_geometry`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub sources: Vec<Point3>,
    pub points: Vec<Point3>,
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

fn finite_points(name: &str, pts: &[Point3]) -> Result<()> {
    if pts.iter().flatten().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} contain non-finite coordinates"
        )))
    }
}

impl GeometrySpec {
    /// UPDA whose outermost pair has path-length difference `eta_max`
    /// under the far-field approximation `η ≈ 2a sinγ`.
    pub fn upda_for_eta_max(l: usize, eta_max: f64, a: f64, r: f64) -> Result<Self> {
        positive("a", a)?;
        positive("eta_max", eta_max)?;
        let s = eta_max / (2.0 * a);
        if s > 1.0 {
            return Err(Error::Infeasible(format!(
                "eta_max = {eta_max} m needs |sin γ| = {s} > 1 for a = {a} m"
            )));
        }
        Ok(Self::Upda {
            l,
            delta_gamma: 2.0 * s.asin(),
            a,
            r,
        })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::TwoChannelSymmetric { a, gamma, r } => {
                positive("a", *a)?;
                positive("r", *r)?;
                if !gamma.is_finite() {
                    return Err(Error::InvalidParameter("gamma must be finite".into()));
                }
                if r <= a {
                    return Err(Error::InvalidParameter(format!(
                        "source radius {r} m must exceed control radius {a} m"
                    )));
                }
            }
            Self::TwoChannelGeneral { sources, points } => {
                if points.len() != 2 {
                    return Err(Error::Dimension(format!(
                        "two-channel layout needs 2 control points, got {}",
                        points.len()
                    )));
                }
                if sources.len() < 2 {
                    return Err(Error::Dimension("need at least 2 sources".into()));
                }
                finite_points("sources", sources)?;
                finite_points("points", points)?;
            }
            Self::Upda {
                l,
                delta_gamma,
                a,
                r,
            } => {
                if *l < 2 {
                    return Err(Error::Dimension(format!("UPDA needs L >= 2, got {l}")));
                }
                positive("a", *a)?;
                positive("r", *r)?;
                positive("delta_gamma", *delta_gamma)?;
                if *delta_gamma > std::f64::consts::PI + 1e-12 {
                    return Err(Error::Infeasible(format!(
                        "UPDA span {:.3}° needs |sin γ| > 1 for some source",
                        delta_gamma.to_degrees()
                    )));
                }
                if r <= a {
                    return Err(Error::InvalidParameter(format!(
                        "source radius {r} m must exceed control radius {a} m"
                    )));
                }
            }
            Self::Ula {
                l,
                dx,
                control_angles,
                r,
            } => {
                if *l < 2 {
                    return Err(Error::Dimension(format!("ULA needs L >= 2, got {l}")));
                }
                positive("dx", *dx)?;
                positive("r", *r)?;
                if control_angles.is_empty() || control_angles.len() > *l {
                    return Err(Error::Dimension(format!(
                        "need 1 <= M <= L control angles, got {}",
                        control_angles.len()
                    )));
                }
                if control_angles.iter().any(|t| !t.is_finite()) {
                    return Err(Error::InvalidParameter(
                        "control angles must be finite".into(),
                    ));
                }
                let aperture = (*l as f64 - 1.0) * dx / 2.0;
                if *r <= aperture {
                    return Err(Error::InvalidParameter(format!(
                        "control radius {r} m lies inside the array half-aperture {aperture} m"
                    )));
                }
            }
            Self::Arbitrary { sources, points } => {
                if points.is_empty() || sources.len() < 2 || sources.len() < points.len() {
                    return Err(Error::Dimension(format!(
                        "need L >= 2 and L >= M >= 1, got L = {}, M = {}",
                        sources.len(),
                        points.len()
                    )));
                }
                finite_points("sources", sources)?;
                finite_points("points", points)?;
            }
        }
        Ok(())
    }
}

/// Concrete source and control-point coordinates for a layout.
pub fn build_geometry(spec: &GeometrySpec) -> Result<Layout> {
    spec.validate()?;
    let layout = match spec {
        GeometrySpec::TwoChannelSymmetric { a, gamma, r } => Layout {
            sources: vec![polar(*r, *gamma), polar(*r, -gamma)],
            points: vec![[0.0, *a, 0.0], [0.0, -a, 0.0]],
        },
        GeometrySpec::TwoChannelGeneral { sources, points }
        | GeometrySpec::Arbitrary { sources, points } => Layout {
            sources: sources.clone(),
            points: points.clone(),
        },
        GeometrySpec::Upda {
            l,
            delta_gamma,
            a,
            r,
        } => {
            let (eta, _) = upda_path_differences(*l, *delta_gamma, *a);
            let sources = eta
                .iter()
                .map(|e| polar(*r, (e / (2.0 * a)).clamp(-1.0, 1.0).asin()))
                .collect();
            Layout {
                sources,
                points: vec![[0.0, *a, 0.0], [0.0, -a, 0.0]],
            }
        }
        GeometrySpec::Ula {
            l,
            dx,
            control_angles,
            r,
        } => Layout {
            sources: ula_elements(*l, *dx),
            points: control_angles.iter().map(|&t| polar(*r, t)).collect(),
        },
    };
    Ok(layout)
}

/// Uniformly spaced far-field path-length differences of a UPDA, ascending,
/// and their increment `Δη = 2η_max/(L−1)`.
pub fn upda_path_differences(l: usize, delta_gamma: f64, a: f64) -> (Vec<f64>, f64) {
    let eta_max = 2.0 * a * (delta_gamma / 2.0).sin();
    let step = 2.0 * eta_max / (l as f64 - 1.0);
    let eta = (0..l).map(|i| -eta_max + i as f64 * step).collect();
    (eta, step)
}

/// Element positions of a centred line array along the y axis.
pub fn ula_elements(l: usize, dx: f64) -> Vec<Point3> {
    let centre = (l as f64 - 1.0) / 2.0;
    (0..l)
        .map(|i| [0.0, (i as f64 - centre) * dx, 0.0])
        .collect()
}

/// Per-source path-length differences `η_l = R₂ₗ − R₁ₗ` and products `ξ_l = R₁ₗR₂ₗ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathMetrics {
    pub eta: Vec<f64>,
    pub xi: Vec<f64>,
    pub eta_max: f64,
    /// `2η_max / (L − 1)`; zero for a single source.
    pub delta_eta: f64,
}

impl PathMetrics {
    fn from_parts(eta: Vec<f64>, xi: Vec<f64>) -> Self {
        let eta_max = eta.iter().map(|e| e.abs()).fold(0.0, f64::max);
        let delta_eta = if eta.len() > 1 {
            2.0 * eta_max / (eta.len() as f64 - 1.0)
        } else {
            0.0
        };
        Self {
            eta,
            xi,
            eta_max,
            delta_eta,
        }
    }
}

fn check_pair(x1: Point3, x2: Point3) -> Result<()> {
    let d = distance(x1, x2);
    if d <= crate::acoustics::COINCIDENCE_DISTANCE {
        return Err(Error::CoincidentPoints { distance: d });
    }
    Ok(())
}

/// Exact path metrics from source positions.
pub fn path_metrics(sources: &[Point3], x1: Point3, x2: Point3) -> Result<PathMetrics> {
    check_pair(x1, x2)?;
    let mut eta = Vec::with_capacity(sources.len());
    let mut xi = Vec::with_capacity(sources.len());
    for &s in sources {
        let r1 = distance(s, x1);
        let r2 = distance(s, x2);
        let closest = r1.min(r2);
        if closest <= crate::acoustics::COINCIDENCE_DISTANCE {
            return Err(Error::CoincidentPoints { distance: closest });
        }
        eta.push(r2 - r1);
        xi.push(r1 * r2);
    }
    Ok(PathMetrics::from_parts(eta, xi))
}

/// Far-field path metrics: `η_l = n̂_l·(x₁ − x₂)` and `ξ_l = ‖s_l‖²`.
pub fn path_metrics_far_field(sources: &[Point3], x1: Point3, x2: Point3) -> Result<PathMetrics> {
    check_pair(x1, x2)?;
    let baseline = sub3(x1, x2);
    let mut eta = Vec::with_capacity(sources.len());
    let mut xi = Vec::with_capacity(sources.len());
    for &s in sources {
        let r = norm3(s);
        if r <= crate::acoustics::COINCIDENCE_DISTANCE {
            return Err(Error::CoincidentPoints { distance: r });
        }
        eta.push(dot3(s, baseline) / r);
        xi.push(r * r);
    }
    Ok(PathMetrics::from_parts(eta, xi))
}
