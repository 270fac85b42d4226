//! Positions, headings and trajectories in the simulation plane, plus the
//! azimuth/elevation of a remote point as seen from a pointed antenna.
//!
//! Trajectory descriptions are plain data (they appear verbatim in scenario
//! files). A [`Track`] is the compiled, read-only form used during a run:
//! random-waypoint motion is expanded into an explicit waypoint list when the
//! track is built, so evaluation never touches a random stream.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::ops::{Add, Mul, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("zero-length direction")]
    ZeroLengthDirection,
    #[error("waypoint times must be strictly increasing (index {index})")]
    UnorderedWaypoints { index: usize },
    #[error("waypoint trajectory needs at least one point")]
    EmptyWaypoints,
    #[error("random waypoint speed must be positive, got {0}")]
    NonPositiveSpeed(f64),
    #[error("random waypoint pause must be non-negative, got {0}")]
    NegativePause(f64),
    #[error("random waypoint bounds are degenerate")]
    DegenerateBounds,
    #[error("random waypoint start lies outside its area")]
    StartOutsideArea,
    #[error("non-finite coordinate")]
    NonFinite,
}

/// A point or displacement in meters. Serialized as `[x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(v: [f64; 3]) -> Self {
        Vec3::new(v[0], v[1], v[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Wraps an angle into `[-π, π)`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = a - TAU * ((a + PI) / TAU).floor();
    if r >= PI {
        r -= TAU;
    }
    if r < -PI {
        r += TAU;
    }
    r
}

/// Heading of a node or antenna. Yaw is measured counterclockwise from +x in
/// the ground plane; pitch is positive upward.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Orientation {
    yaw: f64,
    pitch: f64,
    roll: f64,
}

impl Orientation {
    /// Builds an orientation, wrapping yaw into `[-π, π)` and clamping pitch
    /// into `[-π/2, π/2]`. Roll is stored as given.
    pub fn new(yaw: f64, pitch: f64, roll: f64) -> Self {
        Orientation {
            yaw: wrap_angle(yaw),
            pitch: pitch.clamp(-FRAC_PI_2, FRAC_PI_2),
            roll,
        }
    }

    pub fn from_yaw(yaw: f64) -> Self {
        Self::new(yaw, 0.0, 0.0)
    }

    /// Orientation whose boresight points along `dir`.
    pub fn toward(dir: Vec3, roll: f64) -> Result<Self, GeometryError> {
        let horizontal = dir.x.hypot(dir.y);
        if horizontal == 0.0 && dir.z == 0.0 {
            return Err(GeometryError::ZeroLengthDirection);
        }
        Ok(Self::new(dir.y.atan2(dir.x), dir.z.atan2(horizontal), roll))
    }

    pub fn yaw(&self) -> f64 {
        self.yaw
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn roll(&self) -> f64 {
        self.roll
    }

    pub fn with_roll(self, roll: f64) -> Self {
        Orientation { roll, ..self }
    }
}

/// Euclidean distance in meters.
pub fn distance(a: Vec3, b: Vec3) -> f64 {
    (b - a).norm()
}

/// Azimuth `theta` and elevation `phi` of `to` as seen from `from` in the
/// frame of `boresight`.
///
/// The frame is the boresight's yaw/pitch frame: `theta` is the signed
/// horizontal offset from the boresight in `[-π, π)` and `phi` the offset
/// above the boresight plane in `[-π/2, π/2]`. Roll does not enter the
/// frame; it only matters to patterns that are not symmetric about their
/// pointing axis.
pub fn azimuth_elevation(
    boresight: &Orientation,
    from: Vec3,
    to: Vec3,
) -> Result<(f64, f64), GeometryError> {
    let d = to - from;
    if !d.is_finite() {
        return Err(GeometryError::NonFinite);
    }
    if d.x == 0.0 && d.y == 0.0 && d.z == 0.0 {
        return Err(GeometryError::ZeroLengthDirection);
    }
    let (sy, cy) = boresight.yaw.sin_cos();
    let (sp, cp) = boresight.pitch.sin_cos();
    // undo yaw about z
    let x1 = cy * d.x + sy * d.y;
    let y1 = -sy * d.x + cy * d.y;
    let z1 = d.z;
    // undo pitch about the local y axis
    let x2 = cp * x1 + sp * z1;
    let z2 = -sp * x1 + cp * z1;
    let theta = wrap_angle(y1.atan2(x2));
    let phi = z2.atan2(x2.hypot(y1));
    Ok((theta, phi))
}

/// A timed waypoint for path trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Waypoint {
    pub time_s: f64,
    pub position_m: Vec3,
}

/// Axis-aligned rectangle in the ground plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Area {
    pub min_m: [f64; 2],
    pub max_m: [f64; 2],
}

impl Area {
    pub fn contains(&self, p: Vec3) -> bool {
        p.x >= self.min_m[0] && p.x <= self.max_m[0] && p.y >= self.min_m[1] && p.y <= self.max_m[1]
    }

    fn is_degenerate(&self) -> bool {
        !(self.max_m[0] > self.min_m[0] && self.max_m[1] > self.min_m[1])
            || !self.min_m.iter().chain(&self.max_m).all(|v| v.is_finite())
    }
}

/// Motion description of a node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Trajectory {
    Static {
        position_m: Vec3,
    },
    Linear {
        start_m: Vec3,
        velocity_mps: Vec3,
    },
    Waypoints {
        points: Vec<Waypoint>,
    },
    RandomWaypoint {
        area: Area,
        speed_mps: f64,
        pause_s: f64,
        seed: u64,
        /// Starting point; drawn uniformly from `area` when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        start_m: Option<Vec3>,
    },
}

/// Compiled trajectory, ready for evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Track {
    motion: Motion,
}

#[derive(Debug, Clone, PartialEq)]
enum Motion {
    Static(Vec3),
    Linear { start: Vec3, velocity: Vec3 },
    Path(Vec<Waypoint>),
}

impl Track {
    /// Compiles `traj`. Random-waypoint motion is generated out to at least
    /// `horizon_s`; beyond it the node holds its last position.
    pub fn new(traj: &Trajectory, horizon_s: f64) -> Result<Track, GeometryError> {
        let motion = match traj {
            Trajectory::Static { position_m } => {
                check_finite(*position_m)?;
                Motion::Static(*position_m)
            }
            Trajectory::Linear { start_m, velocity_mps } => {
                check_finite(*start_m)?;
                check_finite(*velocity_mps)?;
                Motion::Linear { start: *start_m, velocity: *velocity_mps }
            }
            Trajectory::Waypoints { points } => {
                check_waypoints(points)?;
                Motion::Path(points.clone())
            }
            Trajectory::RandomWaypoint { area, speed_mps, pause_s, seed, start_m } => Motion::Path(
                random_waypoint_path(area, *speed_mps, *pause_s, *seed, *start_m, horizon_s)?,
            ),
        };
        Ok(Track { motion })
    }

    /// Position at time `t`; times outside a path's coverage clamp to the
    /// nearest endpoint.
    pub fn position_at(&self, t: f64) -> Vec3 {
        match &self.motion {
            Motion::Static(p) => *p,
            Motion::Linear { start, velocity } => *start + *velocity * t,
            Motion::Path(points) => {
                let i = segment_index(points, t);
                if i + 1 >= points.len() {
                    return points[points.len() - 1].position_m;
                }
                let (a, b) = (&points[i], &points[i + 1]);
                if t <= a.time_s {
                    return a.position_m;
                }
                let frac = ((t - a.time_s) / (b.time_s - a.time_s)).clamp(0.0, 1.0);
                a.position_m + (b.position_m - a.position_m) * frac
            }
        }
    }

    /// Heading at time `t`: yaw follows the instantaneous ground-plane
    /// velocity. Stationary stretches keep the most recent moving heading
    /// (or the next one if the node has not moved yet); fully static nodes
    /// face +x.
    pub fn heading_at(&self, t: f64) -> Orientation {
        match &self.motion {
            Motion::Static(_) => Orientation::default(),
            Motion::Linear { velocity, .. } => planar_heading(*velocity).unwrap_or_default(),
            Motion::Path(points) => {
                if points.len() < 2 {
                    return Orientation::default();
                }
                let seg = segment_index(points, t).min(points.len() - 2);
                let delta = |i: usize| points[i + 1].position_m - points[i].position_m;
                (0..=seg)
                    .rev()
                    .chain(seg + 1..points.len() - 1)
                    .find_map(|i| planar_heading(delta(i)))
                    .unwrap_or_default()
            }
        }
    }

    /// Waypoint list backing a path or random-waypoint track.
    pub fn waypoints(&self) -> Option<&[Waypoint]> {
        match &self.motion {
            Motion::Path(p) => Some(p),
            _ => None,
        }
    }
}

fn planar_heading(v: Vec3) -> Option<Orientation> {
    if v.x == 0.0 && v.y == 0.0 {
        None
    } else {
        Some(Orientation::from_yaw(v.y.atan2(v.x)))
    }
}

/// Index of the segment `[points[i], points[i+1])` containing `t`, clamped.
fn segment_index(points: &[Waypoint], t: f64) -> usize {
    // first index whose time is > t, minus one
    let upper = points.partition_point(|w| w.time_s <= t);
    upper.saturating_sub(1)
}

fn check_finite(v: Vec3) -> Result<(), GeometryError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(GeometryError::NonFinite)
    }
}

fn check_waypoints(points: &[Waypoint]) -> Result<(), GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::EmptyWaypoints);
    }
    for (i, w) in points.iter().enumerate() {
        if !w.time_s.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        check_finite(w.position_m)?;
        if i > 0 && w.time_s <= points[i - 1].time_s {
            return Err(GeometryError::UnorderedWaypoints { index: i });
        }
    }
    Ok(())
}

fn random_waypoint_path(
    area: &Area,
    speed: f64,
    pause: f64,
    seed: u64,
    start: Option<Vec3>,
    horizon_s: f64,
) -> Result<Vec<Waypoint>, GeometryError> {
    if !(speed > 0.0 && speed.is_finite()) {
        return Err(GeometryError::NonPositiveSpeed(speed));
    }
    if !(pause >= 0.0 && pause.is_finite()) {
        return Err(GeometryError::NegativePause(pause));
    }
    if area.is_degenerate() {
        return Err(GeometryError::DegenerateBounds);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        Vec3::new(
            rng.random_range(area.min_m[0]..=area.max_m[0]),
            rng.random_range(area.min_m[1]..=area.max_m[1]),
            0.0,
        )
    };
    let origin = match start {
        Some(p) => {
            check_finite(p)?;
            if !area.contains(p) {
                return Err(GeometryError::StartOutsideArea);
            }
            p
        }
        None => draw(&mut rng),
    };
    let mut points = vec![Waypoint { time_s: 0.0, position_m: origin }];
    let mut t = 0.0;
    let mut here = origin;
    while t < horizon_s {
        let next = draw(&mut rng);
        let leg = distance(here, next);
        if leg == 0.0 {
            continue;
        }
        t += leg / speed;
        points.push(Waypoint { time_s: t, position_m: next });
        here = next;
        if pause > 0.0 {
            t += pause;
            points.push(Waypoint { time_s: t, position_m: next });
        }
    }
    Ok(points)
}
