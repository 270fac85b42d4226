//! Radiation patterns and the antenna position system.
//!
//! A pattern maps a direction in the antenna's own frame (azimuth `theta`,
//! elevation `phi`, both relative to the boresight) to a linear power gain
//! relative to an isotropic radiator. Where the boresight points is decided
//! per packet by [`resolve_boresight`] from the node's pose and pointing mode.

use std::f64::consts::{LN_2, PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{azimuth_elevation, GeometryError, Orientation, Vec3};
use crate::propagation::SPEED_OF_LIGHT;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AntennaError {
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("degenerate pointing: node and target coincide")]
    DegeneratePointing,
    #[error("locked_to_target pointing without a target position")]
    MissingTarget,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Linear gain as a function of direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Pattern {
    Isotropic,
    /// Gaussian main lobe around the boresight with a constant sidelobe floor.
    Directional {
        #[serde(rename = "peak_gain_linear")]
        peak_gain: f64,
        #[serde(rename = "beamwidth_3db_rad")]
        beamwidth_3db: f64,
        #[serde(rename = "sidelobe_floor_linear")]
        sidelobe_floor: f64,
    },
    /// Discone-style pattern: uniform in azimuth, Gaussian in elevation.
    Cone {
        #[serde(rename = "peak_gain_linear")]
        peak_gain: f64,
        #[serde(rename = "elevation_center_rad")]
        elevation_center: f64,
        #[serde(rename = "elevation_width_rad")]
        elevation_width: f64,
    },
}

impl Pattern {
    pub const fn directional(peak_gain: f64, beamwidth_3db: f64, sidelobe_floor: f64) -> Self {
        Pattern::Directional { peak_gain, beamwidth_3db, sidelobe_floor }
    }

    pub const fn cone(peak_gain: f64, elevation_center: f64, elevation_width: f64) -> Self {
        Pattern::Cone { peak_gain, elevation_center, elevation_width }
    }

    /// Default directional antenna: 20 dBi, ~20° beam, -20 dBi floor.
    pub const DEFAULT_DIRECTIONAL: Pattern = Pattern::directional(100.0, 0.35, 0.01);

    /// Default discone: 10 dBi in the horizontal plane, 0.6 rad elevation width.
    pub const DEFAULT_CONE: Pattern = Pattern::cone(10.0, 0.0, 0.6);

    /// A directional pattern whose peak is chosen so its mean gain over the
    /// sphere is close to one, i.e. it redistributes power without adding any.
    pub fn unit_mean_directional(beamwidth_3db: f64, sidelobe_floor: f64) -> Self {
        let k = gaussian_rate(beamwidth_3db);
        // ∫∫ exp(-k(θ²+φ²)) cos φ dθ dφ ≈ (π/k)·exp(-1/(4k)) for narrow beams
        let peak = 4.0 * k * (1.0 - sidelobe_floor) * (0.25 / k).exp();
        Pattern::directional(peak, beamwidth_3db, sidelobe_floor)
    }

    /// Checks parameter ranges.
    pub fn check(&self) -> Result<(), AntennaError> {
        let bad = |msg: String| Err(AntennaError::InvalidPattern(msg));
        match *self {
            Pattern::Isotropic => Ok(()),
            Pattern::Directional { peak_gain, beamwidth_3db, sidelobe_floor } => {
                if !(peak_gain > 1.0 && peak_gain.is_finite()) {
                    return bad(format!("directional peak_gain_linear must exceed 1, got {peak_gain}"));
                }
                if !(beamwidth_3db > 0.0 && beamwidth_3db <= TAU) {
                    return bad(format!("beamwidth_3db_rad must be in (0, 2π], got {beamwidth_3db}"));
                }
                if !(sidelobe_floor >= 0.0 && sidelobe_floor <= peak_gain) {
                    return bad(format!(
                        "sidelobe_floor_linear must be in [0, peak_gain_linear], got {sidelobe_floor}"
                    ));
                }
                Ok(())
            }
            Pattern::Cone { peak_gain, elevation_center, elevation_width } => {
                if !(peak_gain > 0.0 && peak_gain.is_finite()) {
                    return bad(format!("cone peak_gain_linear must be positive, got {peak_gain}"));
                }
                if !(elevation_center.abs() <= PI / 2.0) {
                    return bad(format!("elevation_center_rad must be in [-π/2, π/2], got {elevation_center}"));
                }
                if !(elevation_width > 0.0 && elevation_width.is_finite()) {
                    return bad(format!("elevation_width_rad must be positive, got {elevation_width}"));
                }
                Ok(())
            }
        }
    }
}

/// Exponent rate that puts the half-power point at half the 3 dB beamwidth.
fn gaussian_rate(width_3db: f64) -> f64 {
    4.0 * LN_2 / (width_3db * width_3db)
}

/// Linear gain of `pattern` toward `(theta, phi)` in the antenna frame.
pub fn gain(pattern: &Pattern, theta: f64, phi: f64) -> f64 {
    match *pattern {
        Pattern::Isotropic => 1.0,
        Pattern::Directional { peak_gain, beamwidth_3db, sidelobe_floor } => {
            let k = gaussian_rate(beamwidth_3db);
            (peak_gain * (-k * (theta * theta + phi * phi)).exp()).max(sidelobe_floor)
        }
        Pattern::Cone { peak_gain, elevation_center, elevation_width } => {
            let off = phi - elevation_center;
            peak_gain * (-gaussian_rate(elevation_width) * off * off).exp()
        }
    }
}

/// Gain of an antenna at `from`, pointed along `boresight`, toward `to`.
pub fn gain_toward(
    pattern: &Pattern,
    boresight: &Orientation,
    from: Vec3,
    to: Vec3,
) -> Result<f64, GeometryError> {
    let (theta, phi) = azimuth_elevation(boresight, from, to)?;
    Ok(gain(pattern, theta, phi))
}

fn positive(what: &'static str, value: f64) -> Result<f64, AntennaError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(AntennaError::NonPositive { what, value })
    }
}

/// Gain of an aperture with the given effective area: `4π·A·f²/c²`.
pub fn gain_from_area(effective_area_m2: f64, frequency_hz: f64) -> Result<f64, AntennaError> {
    let a = positive("effective area", effective_area_m2)?;
    let f = positive("frequency", frequency_hz)?;
    Ok(4.0 * PI * a * f * f / (SPEED_OF_LIGHT * SPEED_OF_LIGHT))
}

/// Effective area of an antenna with the given gain: `G·c²/(4π·f²)`.
pub fn effective_area(gain: f64, frequency_hz: f64) -> Result<f64, AntennaError> {
    let g = positive("gain", gain)?;
    let f = positive("frequency", frequency_hz)?;
    Ok(g * SPEED_OF_LIGHT * SPEED_OF_LIGHT / (4.0 * PI * f * f))
}

/// Mean of the gain over the full sphere, `(1/4π)∮ G dΩ`, by midpoint
/// quadrature on a quarter-degree grid.
pub fn mean_spherical_gain(pattern: &Pattern) -> f64 {
    const AZ_STEPS: usize = 1440;
    const EL_STEPS: usize = 720;
    let d_theta = TAU / AZ_STEPS as f64;
    let d_phi = PI / EL_STEPS as f64;
    let mut total = 0.0;
    for j in 0..EL_STEPS {
        let phi = -PI / 2.0 + (j as f64 + 0.5) * d_phi;
        let weight = phi.cos();
        let ring: f64 = (0..AZ_STEPS)
            .map(|i| gain(pattern, -PI + (i as f64 + 0.5) * d_theta, phi))
            .sum();
        total += ring * weight;
    }
    total * d_theta * d_phi / (4.0 * PI)
}

/// How the boresight of a mounted antenna is chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum PointingMode {
    /// The antenna turns with the node carrying it.
    FixedToObject,
    /// The antenna tracks the named node.
    LockedToTarget { target: String },
}

/// A pattern mounted on a node together with its pointing rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AntennaSystem {
    pub pattern: Pattern,
    pub pointing: PointingMode,
    /// Rotation about the pointing axis.
    #[serde(default)]
    pub rotation_angle_rad: f64,
}

impl AntennaSystem {
    pub fn isotropic() -> Self {
        AntennaSystem {
            pattern: Pattern::Isotropic,
            pointing: PointingMode::FixedToObject,
            rotation_angle_rad: 0.0,
        }
    }

    /// Rotation angle folded into `[0, 2π)`.
    pub fn rotation(&self) -> f64 {
        let r = self.rotation_angle_rad.rem_euclid(TAU);
        if r >= TAU {
            0.0
        } else {
            r
        }
    }
}

/// Resolves the boresight of `system` for a node at `node_pose`.
///
/// `target` is the current position of the tracked node and is required in
/// locked mode. Roll always carries the system's rotation angle.
pub fn resolve_boresight(
    system: &AntennaSystem,
    node_pose: (Vec3, Orientation),
    target: Option<Vec3>,
) -> Result<Orientation, AntennaError> {
    let (position, heading) = node_pose;
    let roll = system.rotation();
    match system.pointing {
        PointingMode::FixedToObject => Ok(heading.with_roll(roll)),
        PointingMode::LockedToTarget { .. } => {
            let target = target.ok_or(AntennaError::MissingTarget)?;
            Orientation::toward(target - position, roll).map_err(|_| AntennaError::DegeneratePointing)
        }
    }
}
