//! Quasi-static model of a symmetric coupled-microstrip pair.
//!
//! Two strips of width `w` separated by spacing `s` sit on a grounded
//! dielectric substrate of thickness `h`. The even and odd excitation modes
//! of the pair are reduced to equivalent single-line shape ratios:
//!
//! ```text
//! g    = cosh(pi/2 * s/h)
//! hp   = cosh(pi * w/h + pi/2 * s/h)
//! whse = (2/pi) * acosh((2*hp - g + 1) / (g + 1))
//! whso = (2/pi) * acosh((2*hp - g - 1) / (g - 1))
//!        + (4 / (pi * (1 + eps_r/2))) * acosh(1 + 2*(w/h)/(s/h))
//! ```
//!
//! Each ratio then feeds Wheeler's closed-form impedance for a single
//! microstrip, the mode impedances are twice the single-line values, and the
//! coupling coefficient follows as
//!
//! ```text
//! c = (zoe - zoo) / (zoe + zoo)
//! ```
//!
//! Only the ratios `w/h` and `s/h` enter the chain, so any uniform scaling of
//! `w`, `s`, `h` leaves every output unchanged. The `whso` reduction is valid
//! for dielectric constants below 6, and all lengths must be positive; both
//! restrictions are enforced at [`CouplerGeometry`] construction.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

/// Impedance of free space in ohms.
const ETA0: f64 = 376.730313668;

/// Failure modes of the coupled-microstrip analysis chain.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// A strip dimension was zero, negative, or non-finite.
    #[error("dimensions must be positive and finite: w={w}, s={s}, h={h}")]
    InvalidDimensions { w: f64, s: f64, h: f64 },
    /// The dielectric constant fell outside the supported open interval.
    #[error("dielectric constant must lie in (1, 6), got {0}")]
    InvalidDielectric(f64),
    /// A shape ratio fed to the impedance formula was not a positive real.
    #[error("shape ratio must be positive and finite, got {0}")]
    InvalidRatio(f64),
    /// Structure parameters violated `hp >= g >= 1`, so an acosh argument
    /// would drop below 1.
    #[error("inconsistent structure parameters: g={g}, hp={hp}")]
    InconsistentParams { g: f64, hp: f64 },
    /// Zero spacing collapses the odd-mode reduction (it divides by `g - 1`).
    #[error("spacing ratio must be positive, got g={0} <= 1")]
    ZeroSpacing(f64),
}

/// A coupled-microstrip cross-section in consistent length units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplerGeometry {
    /// Strip width.
    pub w: f64,
    /// Edge-to-edge strip spacing.
    pub s: f64,
    /// Substrate thickness.
    pub h: f64,
    /// Relative dielectric constant of the substrate.
    pub eps_r: f64,
}

impl CouplerGeometry {
    /// Validates and builds a geometry; lengths must be positive and finite
    /// and `eps_r` must lie in the open interval (1, 6).
    pub fn new(w: f64, s: f64, h: f64, eps_r: f64) -> Result<Self, ModelError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(w) && positive(s) && positive(h)) {
            return Err(ModelError::InvalidDimensions { w, s, h });
        }
        if !(eps_r.is_finite() && eps_r > 1.0 && eps_r < 6.0) {
            return Err(ModelError::InvalidDielectric(eps_r));
        }
        Ok(Self { w, s, h, eps_r })
    }
}

/// Every intermediate and final quantity of one analysis pass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplerAnalysis {
    /// Strip width over substrate thickness.
    pub w_over_h: f64,
    /// Strip spacing over substrate thickness.
    pub s_over_h: f64,
    /// Spacing structure parameter, `cosh(pi/2 * s/h)`.
    pub g: f64,
    /// Width-plus-spacing structure parameter, `cosh(pi*w/h + pi/2*s/h)`.
    pub h_param: f64,
    /// Equivalent single-line shape ratio of the even mode.
    pub whse: f64,
    /// Equivalent single-line shape ratio of the odd mode.
    pub whso: f64,
    /// Even-mode characteristic impedance in ohms.
    pub zoe: f64,
    /// Odd-mode characteristic impedance in ohms.
    pub zoo: f64,
    /// Coupling coefficient, `(zoe - zoo) / (zoe + zoo)`.
    pub coupling: f64,
}

/// Spacing structure parameter `g = cosh(pi/2 * s/h)`.
///
/// Strictly increasing in `s_over_h` and at least 1.
pub fn g_param(s_over_h: f64) -> Result<f64, ModelError> {
    if !(s_over_h.is_finite() && s_over_h > 0.0) {
        return Err(ModelError::InvalidRatio(s_over_h));
    }
    Ok((0.5 * PI * s_over_h).cosh())
}

/// Width-plus-spacing structure parameter `hp = cosh(pi*w/h + pi/2*s/h)`.
///
/// Always at least `g_param(s_over_h)` because cosh is increasing.
pub fn h_param(w_over_h: f64, s_over_h: f64) -> Result<f64, ModelError> {
    if !(w_over_h.is_finite() && w_over_h > 0.0) {
        return Err(ModelError::InvalidRatio(w_over_h));
    }
    if !(s_over_h.is_finite() && s_over_h > 0.0) {
        return Err(ModelError::InvalidRatio(s_over_h));
    }
    Ok((PI * w_over_h + 0.5 * PI * s_over_h).cosh())
}

/// Even-mode equivalent single-line shape ratio.
///
/// Requires `hp >= g >= 1`, which makes the acosh argument at least 1. In the
/// merged-strip limit `g -> 1` this reduces to `acosh(hp)`-driven `2 * w/h`.
pub fn whse(g: f64, hp: f64) -> Result<f64, ModelError> {
    if !(g.is_finite() && hp.is_finite() && g >= 1.0 && hp >= g) {
        return Err(ModelError::InconsistentParams { g, hp });
    }
    let arg = (2.0 * hp - g + 1.0) / (g + 1.0);
    if arg < 1.0 {
        return Err(ModelError::InconsistentParams { g, hp });
    }
    Ok((2.0 / PI) * arg.acosh())
}

/// Odd-mode equivalent single-line shape ratio.
///
/// Requires `g > 1` (positive spacing), `hp >= g`, and a dielectric constant
/// in (1, 6). Exceeds [`whse`] for the same geometry, which keeps the odd
/// mode at the lower impedance.
pub fn whso(g: f64, hp: f64, w_over_h: f64, s_over_h: f64, eps_r: f64) -> Result<f64, ModelError> {
    if !(g.is_finite() && g > 1.0) {
        return Err(ModelError::ZeroSpacing(g));
    }
    if !(hp.is_finite() && hp >= g) {
        return Err(ModelError::InconsistentParams { g, hp });
    }
    if !(w_over_h.is_finite() && w_over_h > 0.0) {
        return Err(ModelError::InvalidRatio(w_over_h));
    }
    if !(s_over_h.is_finite() && s_over_h > 0.0) {
        return Err(ModelError::InvalidRatio(s_over_h));
    }
    if !(eps_r.is_finite() && eps_r > 1.0 && eps_r < 6.0) {
        return Err(ModelError::InvalidDielectric(eps_r));
    }
    let arg = (2.0 * hp - g - 1.0) / (g - 1.0);
    if arg < 1.0 {
        return Err(ModelError::InconsistentParams { g, hp });
    }
    let first = (2.0 / PI) * arg.acosh();
    let second = (4.0 / (PI * (1.0 + eps_r / 2.0))) * (1.0 + 2.0 * w_over_h / s_over_h).acosh();
    Ok(first + second)
}

/// Characteristic impedance in ohms of a single microstrip with shape ratio
/// `ratio = w/h` on a substrate with dielectric constant `eps_r`.
///
/// Uses Wheeler's closed-form expression, a single branch valid across the
/// full ratio range and strictly decreasing in the ratio:
///
/// ```text
/// a  = (14 + 8/eps_r) / 11
/// z0 = eta0 / (2*pi*sqrt(2)*sqrt(eps_r + 1))
///      * ln(1 + (4h/w) * (a*(4h/w) + sqrt((a*4h/w)^2 + (1 + 1/eps_r)/2 * pi^2)))
/// ```
pub fn z0_single(ratio: f64, eps_r: f64) -> Result<f64, ModelError> {
    if !(ratio.is_finite() && ratio > 0.0) {
        return Err(ModelError::InvalidRatio(ratio));
    }
    if !(eps_r.is_finite() && eps_r > 1.0) {
        return Err(ModelError::InvalidDielectric(eps_r));
    }
    let four_h_over_w = 4.0 / ratio;
    let a = (14.0 + 8.0 / eps_r) / 11.0;
    let root = ((a * four_h_over_w).powi(2) + (1.0 + 1.0 / eps_r) / 2.0 * PI * PI).sqrt();
    let z0 = ETA0 / (2.0 * PI * 2.0_f64.sqrt() * (eps_r + 1.0).sqrt())
        * (1.0 + four_h_over_w * (a * four_h_over_w + root)).ln();
    Ok(z0)
}

/// Even- and odd-mode impedances `(zoe, zoo)` of a coupled pair.
///
/// Each mode impedance is twice the single-line impedance of its equivalent
/// shape ratio; `zoe > zoo` holds for every valid geometry.
pub fn even_odd_impedances(geometry: &CouplerGeometry) -> Result<(f64, f64), ModelError> {
    let analysis = analyze(geometry)?;
    Ok((analysis.zoe, analysis.zoo))
}

/// Coupling coefficient `(zoe - zoo) / (zoe + zoo)`.
///
/// Callers must pass positive impedances; the result lies in (0, 1) whenever
/// `zoe > zoo`.
pub fn coupling(zoe: f64, zoo: f64) -> f64 {
    debug_assert!(zoe > 0.0 && zoo > 0.0, "impedances must be positive");
    (zoe - zoo) / (zoe + zoo)
}

/// Runs the full analysis chain for one geometry.
pub fn analyze(geometry: &CouplerGeometry) -> Result<CouplerAnalysis, ModelError> {
    let CouplerGeometry { w, s, h, eps_r } =
        CouplerGeometry::new(geometry.w, geometry.s, geometry.h, geometry.eps_r)?;
    let w_over_h = w / h;
    let s_over_h = s / h;
    let g = g_param(s_over_h)?;
    let hp = h_param(w_over_h, s_over_h)?;
    let whse = whse(g, hp)?;
    let whso = whso(g, hp, w_over_h, s_over_h, eps_r)?;
    let zoe = 2.0 * z0_single(whse, eps_r)?;
    let zoo = 2.0 * z0_single(whso, eps_r)?;
    debug_assert!(whse < whso, "even ratio must stay below odd ratio");
    debug_assert!(zoe > zoo && zoo > 0.0, "mode impedances out of order");
    Ok(CouplerAnalysis {
        w_over_h,
        s_over_h,
        g,
        h_param: hp,
        whse,
        whso,
        zoe,
        zoo,
        coupling: coupling(zoe, zoo),
    })
}
