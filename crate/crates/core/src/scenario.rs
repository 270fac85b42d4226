//! Scenario files: schema, strict parsing with line-numbered diagnostics, and
//! validation.
//!
//! Scenarios are TOML. Every numeric key carries its unit as a suffix
//! (`_s`, `_m`, `_mps`, `_w`, `_hz`, `_bps`, `_bits`, `_rad`, `_db`, or
//! `_linear` for dimensionless ratios). Unknown keys are rejected, and a key
//! that differs from a known one only in its unit suffix is reported as such.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::antenna::{mean_spherical_gain, AntennaSystem, Pattern, PointingMode};
use crate::geometry::{Area, Trajectory, Vec3};
use crate::propagation::Channel;

/// Largest allowed deviation from one when unit mean gain is enforced.
pub const UNIT_MEAN_GAIN_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub duration_s: f64,
    pub seed: u64,
    pub stats: StatsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<CompareConfig>,
    #[serde(default)]
    pub checks: Checks,
    pub channels: Vec<Channel>,
    pub nodes: Vec<NodeConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsConfig {
    /// Throughput window length.
    pub window_s: f64,
    /// Period of instantaneous power samples.
    pub sample_period_s: f64,
    #[serde(default)]
    pub trace: bool,
}

/// Which node `compare` varies, plus optional pattern presets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub node: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directional: Option<Pattern>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<Pattern>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checks {
    /// Require every directional pattern to have mean spherical gain 1.
    #[serde(default)]
    pub unit_mean_gain: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Transmitter,
    Receiver,
    Jammer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeConfig {
    pub id: String,
    pub role: Role,
    /// Channel the node transmits or listens on.
    pub channel: String,
    pub trajectory: Trajectory,
    pub antenna: AntennaSystem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radio: Option<RadioConfig>,
}

/// Packet source of a transmitter or jammer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub packet_size_bits: u64,
    pub tx_power_w: f64,
    #[serde(default)]
    pub start_s: f64,
    pub interval: IntervalModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum IntervalModel {
    Constant { interval_s: f64 },
    Exponential { mean_interval_s: f64 },
}

/// Receiver front end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioConfig {
    pub noise_figure_db: f64,
    #[serde(default = "unity")]
    pub system_loss_linear: f64,
    #[serde(default)]
    pub correction_threshold_bits: u64,
}

fn unity() -> f64 {
    1.0
}

impl ScenarioConfig {
    pub fn node(&self, id: &str) -> Option<&NodeConfig> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn node_mut(&mut self, id: &str) -> Option<&mut NodeConfig> {
        self.nodes.iter_mut().find(|n| n.id == id)
    }

    pub fn channel(&self, id: &str) -> Option<&Channel> {
        self.channels.iter().find(|c| c.id == id)
    }
}

/// Path to a value in the scenario document, e.g. `nodes[1].trajectory.speed_mps`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KeyPath(Vec<Segment>);

#[derive(Debug, Clone, PartialEq, Eq)]
enum Segment {
    Key(String),
    Index(usize),
}

impl KeyPath {
    pub fn root() -> Self {
        KeyPath(Vec::new())
    }

    pub fn key(&self, k: &str) -> Self {
        let mut p = self.clone();
        p.0.push(Segment::Key(k.to_string()));
        p
    }

    pub fn index(&self, i: usize) -> Self {
        let mut p = self.clone();
        p.0.push(Segment::Index(i));
        p
    }

    /// Last named key on the path.
    pub fn leaf(&self) -> Option<&str> {
        self.0.iter().rev().find_map(|s| match s {
            Segment::Key(k) => Some(k.as_str()),
            Segment::Index(_) => None,
        })
    }
}

impl fmt::Display for KeyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, seg) in self.0.iter().enumerate() {
            match seg {
                Segment::Key(k) if i == 0 => write!(f, "{k}")?,
                Segment::Key(k) => write!(f, ".{k}")?,
                Segment::Index(n) => write!(f, "[{n}]")?,
            }
        }
        Ok(())
    }
}

/// A broken scenario invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub path: KeyPath,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.0.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "`{}`: {}", self.path, self.message)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    /// The document failed to parse or to match the schema, or a field is
    /// out of range.
    #[error("{}{}{message}", .line.map(|l| format!("line {l}: ")).unwrap_or_default(), .key.as_ref().map(|k| format!("`{k}`: ")).unwrap_or_default())]
    Parse {
        line: Option<usize>,
        key: Option<String>,
        message: String,
    },
    #[error("cannot serialize scenario: {0}")]
    Serialize(String),
}

/// Parses and range-checks a scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, ScenarioError> {
    let config: ScenarioConfig = toml::from_str(text).map_err(|e| schema_error(text, &e))?;
    if let Some(v) = field_violations(&config).into_iter().next() {
        return Err(ScenarioError::Parse {
            line: locate(text, &v.path),
            key: Some(v.path.to_string()),
            message: v.message,
        });
    }
    Ok(config)
}

pub fn to_toml(config: &ScenarioConfig) -> Result<String, ScenarioError> {
    toml::to_string_pretty(config).map_err(|e| ScenarioError::Serialize(e.to_string()))
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn backticked(message: &str) -> Vec<&str> {
    message.split('`').skip(1).step_by(2).collect()
}

/// Unit suffixes of scenario keys.
const UNIT_SUFFIXES: &[&str] = &["s", "m", "mps", "w", "hz", "bps", "bits", "rad", "db", "linear"];

fn unit_stem(key: &str) -> &str {
    match key.rsplit_once('_') {
        Some((stem, suffix)) if UNIT_SUFFIXES.contains(&suffix) || suffix.len() <= 4 => stem,
        _ => key,
    }
}

fn schema_error(text: &str, err: &toml::de::Error) -> ScenarioError {
    let first_line = err.message().lines().next().unwrap_or_default().to_string();
    let quoted = backticked(&first_line);
    let line = err.span().map(|s| line_of(text, s.start));
    let mut key = quoted.first().map(|k| k.to_string());
    let mut message = first_line.clone();
    if first_line.starts_with("unknown field") {
        if let Some((bad, expected)) = quoted.split_first() {
            let stem = unit_stem(bad);
            if let Some(known) = expected.iter().find(|k| unit_stem(k) == stem || unit_stem(k) == *bad) {
                message = format!("wrong or missing unit suffix: `{bad}` should be `{known}`");
            }
        }
    } else if !first_line.starts_with("missing field") {
        key = None;
    }
    ScenarioError::Parse { line, key, message }
}

/// Finds the line of the value at `path` in `text`.
fn locate(text: &str, path: &KeyPath) -> Option<usize> {
    use toml::de::{DeTable, DeValue};
    let doc = DeTable::parse(text).ok()?;
    let mut span = doc.span();
    let mut current: Option<&DeValue> = None;
    let mut table = Some(doc.get_ref());
    for seg in &path.0 {
        let next = match (seg, table, current) {
            (Segment::Key(k), Some(t), _) => t.iter().find(|(name, _)| name.get_ref().as_ref() == k.as_str()).map(|(_, v)| v),
            (Segment::Index(i), _, Some(DeValue::Array(items))) => items.get(*i),
            _ => None,
        }?;
        span = next.span();
        current = Some(next.get_ref());
        table = match next.get_ref() {
            DeValue::Table(t) => Some(t),
            _ => None,
        };
    }
    Some(line_of(text, span.start))
}

/// Range checks on individual fields.
pub fn field_violations(config: &ScenarioConfig) -> Vec<Violation> {
    let mut out = Vec::new();
    let root = KeyPath::root();
    let mut push = |path: KeyPath, message: String| out.push(Violation { path, message });
    let positive = |v: f64| v > 0.0 && v.is_finite();

    if !positive(config.duration_s) {
        push(root.key("duration_s"), format!("must be positive, got {}", config.duration_s));
    }
    let stats = root.key("stats");
    if !positive(config.stats.window_s) {
        push(stats.key("window_s"), format!("must be positive, got {}", config.stats.window_s));
    }
    if !positive(config.stats.sample_period_s) {
        push(stats.key("sample_period_s"), format!("must be positive, got {}", config.stats.sample_period_s));
    }
    for (i, c) in config.channels.iter().enumerate() {
        let p = root.key("channels").index(i);
        for (name, v) in [("frequency_hz", c.frequency_hz), ("bandwidth_hz", c.bandwidth_hz), ("data_rate_bps", c.data_rate_bps)] {
            if !positive(v) {
                push(p.key(name), format!("must be positive, got {v}"));
            }
        }
    }
    for (i, node) in config.nodes.iter().enumerate() {
        let p = root.key("nodes").index(i);
        trajectory_violations(&node.trajectory, &p.key("trajectory"), &mut push);
        pattern_violations(&node.antenna.pattern, &p.key("antenna").key("pattern"), &mut push);
        if !node.antenna.rotation_angle_rad.is_finite() {
            push(p.key("antenna").key("rotation_angle_rad"), "must be finite".into());
        }
        if let Some(g) = &node.generator {
            let gp = p.key("generator");
            if g.packet_size_bits == 0 {
                push(gp.key("packet_size_bits"), "must be positive, got 0".into());
            }
            if !positive(g.tx_power_w) {
                push(gp.key("tx_power_w"), format!("must be positive, got {}", g.tx_power_w));
            }
            if !(g.start_s >= 0.0 && g.start_s.is_finite()) {
                push(gp.key("start_s"), format!("must be non-negative, got {}", g.start_s));
            }
            match g.interval {
                IntervalModel::Constant { interval_s } if !positive(interval_s) => {
                    push(gp.key("interval").key("interval_s"), format!("must be positive, got {interval_s}"))
                }
                IntervalModel::Exponential { mean_interval_s } if !positive(mean_interval_s) => push(
                    gp.key("interval").key("mean_interval_s"),
                    format!("must be positive, got {mean_interval_s}"),
                ),
                _ => {}
            }
        }
        if let Some(r) = &node.radio {
            let rp = p.key("radio");
            if !r.noise_figure_db.is_finite() {
                push(rp.key("noise_figure_db"), "must be finite".into());
            }
            if !(r.system_loss_linear >= 1.0 && r.system_loss_linear.is_finite()) {
                push(rp.key("system_loss_linear"), format!("must be >= 1, got {}", r.system_loss_linear));
            }
        }
    }
    if let Some(cmp) = &config.compare {
        for (name, pat) in [("directional", &cmp.directional), ("cone", &cmp.cone)] {
            if let Some(pat) = pat {
                pattern_violations(pat, &root.key("compare").key(name), &mut push);
            }
        }
    }
    out
}

fn trajectory_violations(traj: &Trajectory, p: &KeyPath, push: &mut impl FnMut(KeyPath, String)) {
    let finite = |v: Vec3| v.is_finite();
    match traj {
        Trajectory::Static { position_m } => {
            if !finite(*position_m) {
                push(p.key("position_m"), "coordinates must be finite".into());
            }
        }
        Trajectory::Linear { start_m, velocity_mps } => {
            if !finite(*start_m) {
                push(p.key("start_m"), "coordinates must be finite".into());
            }
            if !finite(*velocity_mps) {
                push(p.key("velocity_mps"), "components must be finite".into());
            }
        }
        Trajectory::Waypoints { points } => {
            if points.is_empty() {
                push(p.key("points"), "needs at least one waypoint".into());
            }
            for (i, w) in points.iter().enumerate() {
                let wp = p.key("points").index(i);
                if !w.time_s.is_finite() || (i > 0 && w.time_s <= points[i - 1].time_s) {
                    push(wp.key("time_s"), "waypoint times must be finite and strictly increasing".into());
                }
                if !finite(w.position_m) {
                    push(wp.key("position_m"), "coordinates must be finite".into());
                }
            }
        }
        Trajectory::RandomWaypoint { area, speed_mps, pause_s, start_m, .. } => {
            if !(*speed_mps > 0.0 && speed_mps.is_finite()) {
                push(p.key("speed_mps"), format!("must be positive, got {speed_mps}"));
            }
            if !(*pause_s >= 0.0 && pause_s.is_finite()) {
                push(p.key("pause_s"), format!("must be non-negative, got {pause_s}"));
            }
            if !area_ok(area) {
                push(p.key("area").key("max_m"), "area must have positive width and height".into());
            } else if let Some(s) = start_m {
                if !area.contains(*s) {
                    push(p.key("start_m"), "start lies outside the area".into());
                }
            }
        }
    }
}

fn area_ok(a: &Area) -> bool {
    a.min_m.iter().chain(&a.max_m).all(|v| v.is_finite()) && a.max_m[0] > a.min_m[0] && a.max_m[1] > a.min_m[1]
}

fn pattern_violations(pattern: &Pattern, p: &KeyPath, push: &mut impl FnMut(KeyPath, String)) {
    if let Err(e) = pattern.check() {
        let key = match pattern {
            Pattern::Isotropic => "kind",
            Pattern::Directional { peak_gain, beamwidth_3db, .. } => {
                if !(*peak_gain > 1.0 && peak_gain.is_finite()) {
                    "peak_gain_linear"
                } else if !(*beamwidth_3db > 0.0 && *beamwidth_3db <= std::f64::consts::TAU) {
                    "beamwidth_3db_rad"
                } else {
                    "sidelobe_floor_linear"
                }
            }
            Pattern::Cone { peak_gain, elevation_center, .. } => {
                if !(*peak_gain > 0.0 && peak_gain.is_finite()) {
                    "peak_gain_linear"
                } else if !(elevation_center.abs() <= std::f64::consts::FRAC_PI_2) {
                    "elevation_center_rad"
                } else {
                    "elevation_width_rad"
                }
            }
        };
        push(p.key(key), e.to_string());
    }
}

fn id_ok(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.')
}

/// All violations of the scenario's invariants; empty means runnable.
pub fn validate(config: &ScenarioConfig) -> Vec<Violation> {
    let mut out = field_violations(config);
    let root = KeyPath::root();
    let mut push = |path: KeyPath, message: String| out.push(Violation { path, message });

    let mut seen = HashSet::new();
    for (i, c) in config.channels.iter().enumerate() {
        if !id_ok(&c.id) {
            push(root.key("channels").index(i).key("id"), format!("invalid id `{}`", c.id));
        }
        if !seen.insert(c.id.as_str()) {
            push(root.key("channels").index(i).key("id"), format!("duplicate channel `{}`", c.id));
        }
    }
    let mut seen = HashSet::new();
    for (i, n) in config.nodes.iter().enumerate() {
        let p = root.key("nodes").index(i);
        if !id_ok(&n.id) {
            push(p.key("id"), format!("invalid id `{}`", n.id));
        }
        if !seen.insert(n.id.as_str()) {
            push(p.key("id"), format!("duplicate node `{}`", n.id));
        }
        if config.channel(&n.channel).is_none() {
            push(p.key("channel"), format!("unknown channel `{}`", n.channel));
        }
        match n.role {
            Role::Transmitter | Role::Jammer if n.generator.is_none() => {
                push(p.key("generator"), format!("node `{}` needs a [generator] table", n.id))
            }
            Role::Receiver if n.radio.is_none() => push(p.key("radio"), format!("node `{}` needs a [radio] table", n.id)),
            _ => {}
        }
        if let PointingMode::LockedToTarget { target } = &n.antenna.pointing {
            if target == &n.id {
                push(p.key("antenna").key("pointing").key("target"), "a node cannot track itself".into());
            } else if config.node(target).is_none() {
                push(p.key("antenna").key("pointing").key("target"), format!("unknown target node `{target}`"));
            }
        }
    }
    let count = |role| config.nodes.iter().filter(|n| n.role == role).count();
    let transmitters = count(Role::Transmitter);
    if transmitters != 1 {
        push(root.key("nodes"), format!("exactly one transmitter required, found {transmitters}"));
    }
    if count(Role::Receiver) == 0 {
        push(root.key("nodes"), "at least one receiver required, found 0".into());
    }
    if let Some(cmp) = &config.compare {
        match config.node(&cmp.node) {
            Some(n) if n.role == Role::Receiver => {}
            Some(_) => push(root.key("compare").key("node"), format!("`{}` is not a receiver", cmp.node)),
            None => push(root.key("compare").key("node"), format!("unknown node `{}`", cmp.node)),
        }
    }
    if config.checks.unit_mean_gain {
        for (i, n) in config.nodes.iter().enumerate() {
            if let Pattern::Directional { .. } = n.antenna.pattern {
                let mean = mean_spherical_gain(&n.antenna.pattern);
                if (mean - 1.0).abs() > UNIT_MEAN_GAIN_TOLERANCE {
                    push(
                        root.key("nodes").index(i).key("antenna").key("pattern"),
                        format!("mean spherical gain {mean:.4} is not within {UNIT_MEAN_GAIN_TOLERANCE} of 1"),
                    );
                }
            }
        }
    }
    out
}
