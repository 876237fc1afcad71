use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use focusing::acoustics::{build_plant, AcousticModel, Wavenumber};
use focusing::analysis::{analyze_gram, FocusState};
use focusing::conditions::{
    asymmetric_angle, asymmetric_design, osd_design, osd_wavelength_for_span, ula_design,
    ula_symmetric_limits, upda_zeros, FocusingDesign,
};
use focusing::field::{sample_arc, sample_plane};
use focusing::geometry::{build_geometry, norm3, polar, rotate_z, sub3, GeometrySpec, Layout};
use focusing::linalg::{svd_underdetermined, ComplexMatrix};
use focusing::presets::{self, ModelChoice, Preset};
use focusing::verify::{self, VerifyOptions};
use focusing::Error;

use crate::args::*;

/// Exit status 1: a check failed or a design is infeasible.
/// Exit status 2: the configuration could not be used.
#[derive(Debug)]
pub enum Failure {
    Check(String),
    Config(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Check(_) => 1,
            Failure::Config(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Check(m) | Failure::Config(m) => m,
        }
    }
}

fn config(e: impl std::fmt::Display) -> Failure {
    Failure::Config(e.to_string())
}

type Outcome = Result<(), Failure>;

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| config(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| config(format!("stdout: {e}")))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialises");
    s.push('\n');
    s
}

struct Resolved {
    geometry: GeometrySpec,
    layout: Layout,
    preset: Option<Preset>,
}

fn resolve(source: &Source) -> Result<Resolved, Failure> {
    let (geometry, preset) = match (&source.preset, &source.geometry) {
        (Some(name), _) => {
            let p = presets::preset(name).map_err(config)?;
            (p.geometry.clone(), Some(p))
        }
        (None, Some(path)) => {
            let text =
                fs::read_to_string(path).map_err(|e| config(format!("{}: {e}", path.display())))?;
            let spec: GeometrySpec = serde_json::from_str(&text)
                .map_err(|e| config(format!("{}: {e}", path.display())))?;
            (spec, None)
        }
        (None, None) => return Err(config("either --preset or --geometry is required")),
    };
    let layout = build_geometry(&geometry).map_err(config)?;
    Ok(Resolved {
        geometry,
        layout,
        preset,
    })
}

fn model_kind(opts: &ModelOpts, preset: Option<&Preset>) -> ModelChoice {
    match opts.model {
        Some(ModelArg::Monopole) => ModelChoice::Monopole,
        Some(ModelArg::PlaneWave) => ModelChoice::PlaneWave,
        None => preset.map_or(ModelChoice::Monopole, |p| p.model),
    }
}

fn build_model(
    kind: ModelChoice,
    opts: &ModelOpts,
    layout: &Layout,
    k: Wavenumber,
) -> Result<AcousticModel, Failure> {
    match kind {
        ModelChoice::Monopole => Ok(AcousticModel::monopole(k)),
        ModelChoice::PlaneWave => {
            let r = opts.reference_distance.unwrap_or_else(|| {
                layout
                    .sources
                    .iter()
                    .chain(&layout.points)
                    .map(|&p| norm3(p))
                    .fold(0.0, f64::max)
            });
            AcousticModel::plane_wave(k, r).map_err(config)
        }
    }
}

#[derive(Serialize)]
struct FrequencyReport {
    frequency_hz: f64,
    wavenumber: f64,
    mu: f64,
    state: FocusState,
    gram: ComplexMatrix,
    crosstalk_magnitudes: Vec<Vec<f64>>,
    hermitian_angles_deg: Vec<Vec<f64>>,
    gramian: f64,
    hadamard_bound: f64,
    normalized_offdiag: f64,
    diag_spread: f64,
    singular_values: Vec<f64>,
    condition_number: f64,
    pinv_spectral_norm: f64,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    preset: Option<String>,
    geometry: GeometrySpec,
    layout: Layout,
    model: ModelChoice,
    speed_of_sound: f64,
    mu_radius: f64,
    results: Vec<FrequencyReport>,
}

fn analyze_one(
    layout: &Layout,
    model: &AcousticModel,
    frequency_hz: f64,
    args: &AnalyzeArgs,
) -> Result<FrequencyReport, Failure> {
    let plant = build_plant(model, &layout.sources, &layout.points).map_err(config)?;
    let a = analyze_gram(&plant.matrix, args.ideal_tol, args.equal_tol).map_err(config)?;
    let svd = svd_underdetermined(&plant.matrix).map_err(config)?;
    let mut warnings = Vec::new();
    if a.state == FocusState::Singular {
        let ratio = if a.hadamard_bound > 0.0 {
            a.gramian / a.hadamard_bound
        } else {
            0.0
        };
        warnings.push(Error::SingularGram { ratio }.to_string());
    }
    let k = model.wavenumber;
    Ok(FrequencyReport {
        frequency_hz,
        wavenumber: k.k(),
        mu: k.mu(args.model.mu_radius),
        state: a.state,
        gram: a.gram,
        crosstalk_magnitudes: a.crosstalk_magnitudes,
        hermitian_angles_deg: a
            .hermitian_angles
            .iter()
            .map(|row| row.iter().map(|t| t.to_degrees()).collect())
            .collect(),
        gramian: a.gramian,
        hadamard_bound: a.hadamard_bound,
        normalized_offdiag: a.normalized_offdiag,
        diag_spread: a.diag_spread,
        singular_values: svd.singular_values,
        condition_number: svd.condition_number,
        pinv_spectral_norm: svd.pinv_spectral_norm,
        warnings,
    })
}

pub fn analyze(args: &AnalyzeArgs) -> Outcome {
    let r = resolve(&args.source)?;
    let c = args.model.c;
    let mut freqs = args.frequencies.clone();
    if let Some(s) = args.sweep {
        freqs.extend(s.values());
    }
    if let Some(s) = args.mu_sweep {
        freqs.extend(
            s.values()
                .iter()
                .map(|mu| mu / args.model.mu_radius * c / (2.0 * PI)),
        );
    }
    if freqs.is_empty() {
        match &r.preset {
            Some(p) => freqs.push(p.frequency_hz),
            None => {
                return Err(config(
                    "no frequency given: use --freq, --sweep or --mu-sweep",
                ))
            }
        }
    }
    if freqs.iter().any(|f| !(f.is_finite() && *f > 0.0)) {
        return Err(config("frequencies must be positive"));
    }
    let kind = model_kind(&args.model, r.preset.as_ref());
    let results = freqs
        .iter()
        .map(|&f| {
            let k = Wavenumber::from_frequency(f, c).map_err(config)?;
            let model = build_model(kind, &args.model, &r.layout, k)?;
            analyze_one(&r.layout, &model, f, args)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let report = AnalyzeReport {
        preset: r.preset.map(|p| p.name.to_string()),
        geometry: r.geometry,
        layout: r.layout,
        model: kind,
        speed_of_sound: c,
        mu_radius: args.model.mu_radius,
        results,
    };
    emit(args.out.as_deref(), &to_json(&report))
}

#[derive(Serialize)]
struct Verification {
    state: FocusState,
    condition_number: f64,
    normalized_offdiag: f64,
    passed: bool,
}

fn verify_layout(spec: &GeometrySpec, k: Wavenumber, r0: f64) -> Result<Verification, Failure> {
    let lay = build_geometry(spec).map_err(config)?;
    let model = AcousticModel::plane_wave(k, r0).map_err(config)?;
    let plant = build_plant(&model, &lay.sources, &lay.points).map_err(config)?;
    let a = analyze_gram(&plant.matrix, 1e-9, 1e-9).map_err(config)?;
    let kappa = svd_underdetermined(&plant.matrix)
        .map_err(config)?
        .condition_number;
    Ok(Verification {
        state: a.state,
        condition_number: kappa,
        normalized_offdiag: a.normalized_offdiag,
        passed: a.state == FocusState::SuperIdeal && (kappa - 1.0).abs() <= 1e-9,
    })
}

#[derive(Serialize)]
struct DesignReport<T: Serialize> {
    design: T,
    /// Angles of the design in degrees.
    angles_deg: BTreeMap<&'static str, Vec<f64>>,
    geometry: Option<GeometrySpec>,
    verification: Option<Verification>,
}

fn finish<T: Serialize>(
    design: T,
    feasible: Result<(), String>,
    angles_deg: BTreeMap<&'static str, Vec<f64>>,
    geometry: Option<GeometrySpec>,
    check: Option<(Wavenumber, f64)>,
    common: &Common,
) -> Outcome {
    let verification = match (&geometry, check, common.verify) {
        (Some(g), Some((k, r0)), true) => Some(verify_layout(g, k, r0)?),
        _ => None,
    };
    let failed_verification = verification.as_ref().is_some_and(|v| !v.passed);
    let report = DesignReport {
        design,
        angles_deg,
        geometry,
        verification,
    };
    emit(common.out.as_deref(), &to_json(&report))?;
    if let Err(why) = feasible {
        return Err(Failure::Check(format!("infeasible: {why}")));
    }
    if failed_verification {
        return Err(Failure::Check(
            "verification failed: layout is not super-ideal".into(),
        ));
    }
    Ok(())
}

fn feasibility(d: &FocusingDesign) -> Result<(), String> {
    if d.feasible {
        Ok(())
    } else {
        Err(d.violated.clone().unwrap_or_default())
    }
}

pub fn design(cmd: &DesignCommand) -> Outcome {
    match cmd {
        DesignCommand::Osd(a) => {
            let c = a.common.c;
            let wavelength = match (a.input.frequency, a.input.mu, a.input.span) {
                (Some(f), _, _) => c / f,
                (_, Some(mu), _) => 2.0 * PI * a.a / mu,
                (_, _, Some(span)) => {
                    osd_wavelength_for_span(span.to_radians(), a.a, a.n).map_err(config)?
                }
                _ => return Err(config("one of --f, --mu or --span is required")),
            };
            let d = osd_design(wavelength, a.a, a.n, c).map_err(config)?;
            let mut angles = BTreeMap::new();
            let geometry = d.gamma_opt.map(|g| {
                angles.insert("gamma_opt", vec![g.to_degrees()]);
                angles.insert("span", vec![2.0 * g.abs().to_degrees()]);
                GeometrySpec::TwoChannelSymmetric {
                    a: a.a,
                    gamma: g,
                    r: a.r,
                }
            });
            let k = Wavenumber::from_wavelength(d.wavelength).map_err(config)?;
            let feasible = feasibility(&d);
            finish(d, feasible, angles, geometry, Some((k, a.r)), &a.common)
        }
        DesignCommand::Asymmetric(a) => {
            let c = a.common.c;
            let n1 = polar(1.0, a.sources[0].to_radians());
            let n2 = polar(1.0, a.sources[1].to_radians());
            let base = [0.0, a.a, 0.0];
            let rotation = match a.frequency {
                None => a.rotation.to_radians(),
                Some(f) => {
                    // rotation that sets the angle between Δn̂ and x₁
                    let dn = sub3(n1, n2);
                    let theta =
                        asymmetric_angle(norm3(dn), a.a, c / f, a.n).map_err(|e| match e {
                            Error::Infeasible(m) => Failure::Check(format!("infeasible: {m}")),
                            other => config(other),
                        })?;
                    dn[1].atan2(dn[0]) - PI / 2.0 + theta
                }
            };
            let x1 = rotate_z(base, rotation);
            let d = asymmetric_design(n1, n2, x1, a.n, c).map_err(config)?;
            let mut angles = BTreeMap::new();
            angles.insert("sources", a.sources.clone());
            angles.insert("rotation", vec![rotation.to_degrees()]);
            angles.insert(
                "theta",
                d.theta.map(|t| t.to_degrees()).into_iter().collect(),
            );
            let geometry = GeometrySpec::TwoChannelGeneral {
                sources: vec![n1, n2],
                points: vec![x1, [-x1[0], -x1[1], -x1[2]]],
            };
            let check = Wavenumber::from_wavelength(d.wavelength)
                .ok()
                .map(|k| (k, 1.0));
            let feasible = feasibility(&d);
            finish(d, feasible, angles, Some(geometry), check, &a.common)
        }
        DesignCommand::Upda(a) => {
            let gamma_max = a.gamma_max.to_radians();
            let d = upda_zeros(a.l, a.a, gamma_max, a.n, a.common.c).map_err(|e| match e {
                Error::ExcludedBranch { .. } => Failure::Check(format!("infeasible: {e}")),
                other => config(other),
            })?;
            let mut angles = BTreeMap::new();
            angles.insert("gamma_max", vec![a.gamma_max]);
            let geometry = GeometrySpec::Upda {
                l: a.l,
                delta_gamma: 2.0 * gamma_max,
                a: a.a,
                r: a.r,
            };
            let k = Wavenumber::from_wavelength(d.wavelength).map_err(config)?;
            finish(d, Ok(()), angles, Some(geometry), Some((k, a.r)), &a.common)
        }
        DesignCommand::Ula(a) => {
            let wavelength = a.common.c / a.frequency;
            let d = match ula_design(a.l, a.dx, wavelength, &a.offsets) {
                Ok(d) => d,
                Err(
                    e @ (Error::GratingOffset { .. }
                    | Error::NonIntegerOffset { .. }
                    | Error::ArcsineDomain { .. }),
                ) => return Err(Failure::Check(format!("infeasible: {e}"))),
                Err(e) => return Err(config(e)),
            };
            let mut angles = BTreeMap::new();
            angles.insert(
                "control_angles",
                d.angles.iter().map(|t| t.to_degrees()).collect(),
            );
            let geometry = GeometrySpec::Ula {
                l: a.l,
                dx: a.dx,
                control_angles: d.angles.clone(),
                r: 100.0,
            };
            let k = Wavenumber::from_wavelength(wavelength).map_err(config)?;
            finish(
                d,
                Ok(()),
                angles,
                Some(geometry),
                Some((k, 100.0)),
                &a.common,
            )
        }
        DesignCommand::UlaLimits(a) => {
            let wavelength = a.common.c / a.frequency;
            let lim = ula_symmetric_limits(a.l, a.dx, wavelength).map_err(config)?;
            let mut angles = BTreeMap::new();
            angles.insert(
                "control_angles",
                lim.angles.iter().map(|t| t.to_degrees()).collect(),
            );
            let geometry = GeometrySpec::Ula {
                l: a.l,
                dx: a.dx,
                control_angles: lim.angles.clone(),
                r: 100.0,
            };
            let k = Wavenumber::from_wavelength(wavelength).map_err(config)?;
            let feasible = if lim.feasible_for_three {
                Ok(())
            } else {
                Err(format!(
                    "wavelength {wavelength:.6} m exceeds L dx = {:.6} m",
                    lim.wavelength_low
                ))
            };
            finish(
                lim,
                feasible,
                angles,
                Some(geometry),
                Some((k, 100.0)),
                &a.common,
            )
        }
    }
}

pub fn field(args: &FieldArgs) -> Outcome {
    let r = resolve(&args.source)?;
    let frequency = match (args.frequency, &r.preset) {
        (Some(f), _) => f,
        (None, Some(p)) => p.frequency_hz,
        (None, None) => return Err(config("--freq is required with --geometry")),
    };
    let k = Wavenumber::from_frequency(frequency, args.model.c).map_err(config)?;
    let kind = model_kind(&args.model, r.preset.as_ref());
    let model = build_model(kind, &args.model, &r.layout, k)?;
    let focus = args
        .focus
        .or(r.preset.as_ref().map(|p| p.focus))
        .unwrap_or(0);
    let x0 = *r.layout.points.get(focus).ok_or_else(|| {
        config(format!(
            "focus index {focus} out of range ({} control points)",
            r.layout.points.len()
        ))
    })?;
    let map = match (args.arc, args.angles) {
        (Some(radius), Some(range)) => {
            let angles: Vec<f64> = range.values().iter().map(|d| d.to_radians()).collect();
            sample_arc(&r.layout.sources, &model, x0, radius, &angles)
        }
        _ => sample_plane(&r.layout.sources, &model, x0, args.extent, args.resolution),
    }
    .map_err(config)?;
    let text = match args.format {
        Format::Csv => map.to_csv(),
        Format::Json => {
            let mut s = map.to_json();
            s.push('\n');
            s
        }
    };
    emit(args.out.as_deref(), &text)
}

pub fn verify(args: &VerifyArgs) -> Outcome {
    if !args.perturb.is_finite() {
        return Err(config("--perturb must be finite"));
    }
    let report = verify::run(VerifyOptions {
        seed: args.seed,
        quick: args.quick,
        perturb: args.perturb,
    });
    let text = if args.json {
        to_json(&report)
    } else {
        let mut s = String::new();
        for c in &report.checks {
            s.push_str(&format!(
                "{} {:<26} cases={:<6} residual={:.3e} tol={:.1e} {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.cases,
                c.residual,
                c.tolerance,
                c.detail
            ));
        }
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        s.push_str(&format!(
            "{} checks, {failed} failed\n",
            report.checks.len()
        ));
        s
    };
    emit(args.out.as_deref(), &text)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check("verification suite failed".into()))
    }
}

pub fn list_presets() -> Outcome {
    let mut s = String::new();
    for p in presets::all().map_err(config)? {
        s.push_str(&format!(
            "{:<7} {:>9.2} Hz  {}\n",
            p.name, p.frequency_hz, p.description
        ));
    }
    emit(None, &s)
}
