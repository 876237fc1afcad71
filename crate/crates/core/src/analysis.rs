//! Focusing-crosstalk structure of a plant's Gram, focusing-state
//! classification and the closed-form singular system of ideal focusing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    gram, gramian, hadamard_bound, re, spectral_norm, ComplexMatrix, C64, SINGULARITY_TOLERANCE,
};

/// Default bound on the normalised off-diagonal Gram magnitude for "ideal".
pub const DEFAULT_IDEAL_TOL: f64 = 1e-9;
/// Default bound on `max g_mm / min g_mm − 1` for "super ideal".
pub const DEFAULT_EQUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FocusState {
    /// Rows linearly dependent: crosstalk is maximised at some control point.
    Singular,
    General,
    /// Diagonal Gram: every focusing operation leaves a null at the other points.
    Ideal,
    /// Scalar Gram: ideal with equal focus-point pressures, `κ = 1`.
    SuperIdeal,
}

impl FocusState {
    pub fn is_ideal(self) -> bool {
        matches!(self, Self::Ideal | Self::SuperIdeal)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Singular => "Singular",
            Self::General => "General",
            Self::Ideal => "Ideal",
            Self::SuperIdeal => "SuperIdeal",
        }
    }
}

impl std::fmt::Display for FocusState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub ideal: f64,
    pub equal: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            ideal: DEFAULT_IDEAL_TOL,
            equal: DEFAULT_EQUAL_TOL,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GramAnalysis {
    pub gram: ComplexMatrix,
    /// `|g_ij|`, zero on the diagonal.
    pub crosstalk_magnitudes: Vec<Vec<f64>>,
    /// Hermitian angles between plant rows, radians.
    pub hermitian_angles: Vec<Vec<f64>>,
    pub gramian: f64,
    pub hadamard_bound: f64,
    /// `max_{i≠j} |g_ij| / √(g_ii g_jj)`.
    pub normalized_offdiag: f64,
    /// `max g_ii / min g_ii`.
    pub diag_spread: f64,
    pub state: FocusState,
    pub tolerances: Tolerances,
}

/// Classifies the focusing state of an `M × L` plant.
///
/// `Singular` when `gramian ≤ 1e-12 · hadamard_bound`; otherwise `SuperIdeal`
/// when the normalised off-diagonal is within `ideal_tol` and the diagonal
/// spread within `equal_tol`, `Ideal` when only the first holds, else `General`.
pub fn analyze_gram(g: &ComplexMatrix, ideal_tol: f64, equal_tol: f64) -> Result<GramAnalysis> {
    if !(ideal_tol > 0.0 && equal_tol > 0.0) {
        return Err(Error::InvalidParameter(
            "tolerances must be positive".into(),
        ));
    }
    let gamma = gram(g)?;
    let m = gamma.rows();
    let diag: Vec<f64> = (0..m).map(|i| gamma[(i, i)].re).collect();

    let mut crosstalk = vec![vec![0.0; m]; m];
    let mut angles = vec![vec![0.0; m]; m];
    let mut normalized_offdiag = 0.0_f64;
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let mag = gamma[(i, j)].norm();
            crosstalk[i][j] = mag;
            let denom = (diag[i] * diag[j]).sqrt();
            // a zero row is parallel to everything
            let cos = if denom > 0.0 {
                (mag / denom).min(1.0)
            } else {
                1.0
            };
            normalized_offdiag = normalized_offdiag.max(cos);
            angles[i][j] = if denom > 0.0 {
                crate::linalg::hermitian_angle_slices(g.row(i), g.row(j)).unwrap_or(0.0)
            } else {
                0.0
            };
        }
    }

    let max_d = diag.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_d = diag.iter().copied().fold(f64::INFINITY, f64::min);
    let diag_spread = if min_d > 0.0 {
        max_d / min_d
    } else {
        f64::INFINITY
    };

    let det = gramian(&gamma);
    let bound = hadamard_bound(&gamma);

    let state = if det <= SINGULARITY_TOLERANCE * bound {
        FocusState::Singular
    } else if normalized_offdiag <= ideal_tol {
        if diag_spread - 1.0 <= equal_tol {
            FocusState::SuperIdeal
        } else {
            FocusState::Ideal
        }
    } else {
        FocusState::General
    };

    Ok(GramAnalysis {
        gram: gamma,
        crosstalk_magnitudes: crosstalk,
        hermitian_angles: angles,
        gramian: det,
        hadamard_bound: bound,
        normalized_offdiag,
        diag_spread,
        state,
        tolerances: Tolerances {
            ideal: ideal_tol,
            equal: equal_tol,
        },
    })
}

/// Singular system of an ideally focusing plant, read off the Gram diagonal.
#[derive(Debug, Clone, Serialize)]
pub struct IdealSingularSummary {
    /// `σ_m = √g_mm`, in control-point order.
    pub sigma: Vec<f64>,
    /// Pseudoinverse amplification `1 / min σ_m`.
    pub amplification: f64,
    pub kappa: f64,
    /// `L × M` ideal focusing filters, column `m` equal to `g_m* / g_mm`.
    pub ideal_filters: ComplexMatrix,
}

pub fn ideal_singular_system(
    analysis: &GramAnalysis,
    g: &ComplexMatrix,
) -> Result<IdealSingularSummary> {
    if !analysis.state.is_ideal() {
        return Err(Error::NotIdeal(format!("state is {}", analysis.state)));
    }
    let (m, l) = g.shape();
    if analysis.gram.rows() != m {
        return Err(Error::Dimension(
            "analysis does not belong to this plant".into(),
        ));
    }
    let diag: Vec<f64> = (0..m).map(|i| analysis.gram[(i, i)].re).collect();
    let sigma: Vec<f64> = diag.iter().map(|d| d.sqrt()).collect();

    // G (g_m*/√g_mm) must equal √g_mm e_m, entrywise relative to √g_ii
    let limit = analysis.tolerances.ideal + 1e-12;
    for col in 0..m {
        for i in 0..m {
            let z: C64 = g
                .row(i)
                .iter()
                .zip(g.row(col))
                .map(|(a, b)| a * b.conj())
                .sum::<C64>()
                / sigma[col];
            let want = if i == col { re(sigma[col]) } else { re(0.0) };
            let err = (z - want).norm() / sigma[i];
            if err > limit {
                return Err(Error::NotIdeal(format!(
                    "focusing filter {col} leaves relative pressure {err:e} at point {i}"
                )));
            }
        }
    }

    let ideal_filters = ComplexMatrix::from_fn(l, m, |row, col| g[(col, row)].conj() / diag[col]);
    let smax = sigma.iter().copied().fold(0.0, f64::max);
    let smin = sigma.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(IdealSingularSummary {
        sigma,
        amplification: 1.0 / smin,
        kappa: smax / smin,
        ideal_filters,
    })
}

/// Spatially matched ratio `J(H₀) = ‖G H₀‖² / ‖H₀‖²` with spectral norms;
/// always `J ≤ ‖G‖²`.
pub fn spatially_matched_ratio(g: &ComplexMatrix, h0: &ComplexMatrix) -> Result<f64> {
    if h0.rows() != g.cols() {
        return Err(Error::Dimension(format!(
            "filters have {} rows, plant has {} sources",
            h0.rows(),
            g.cols()
        )));
    }
    let h_norm = spectral_norm(h0)?;
    if h_norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let gh = spectral_norm(&g.matmul(h0)?)?;
    Ok((gh / h_norm).powi(2))
}
