//! Discrete-event scheduler and statistics collection.
//!
//! A run is strictly sequential over a single event queue ordered by
//! `(time, sequence)`. Randomness comes from three places, all derived from
//! fixed seeds: random-waypoint mobility (seeded per trajectory, fixed at
//! build time), exponential packet intervals (one stream per generator
//! node) and error allocation (one stream per packet and receiver).

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::antenna::{resolve_boresight, AntennaError, AntennaSystem, Pattern, PointingMode};
use crate::geometry::{distance, GeometryError, Orientation, Track};
use crate::pipeline::{
    channel_match, link_budget, process_reception, transmission_delay, ChannelMatch, ErrorStreams,
    Interferer, LinkEnd, PipelineError, RadioSettings, ReceptionInput, ReceptionRecord, Transmission,
};
use crate::propagation::{propagation_delay, Channel};
use crate::scenario::{validate, GeneratorConfig, IntervalModel, Role, ScenarioConfig, Violation};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid scenario: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("node `{node}`: {source}")]
    Trajectory { node: String, source: GeometryError },
    #[error("pointing failed for node `{node}`: {source}")]
    Pointing { node: String, source: AntennaError },
    #[error("pipeline: {0}")]
    Pipeline(#[from] PipelineError),
    #[error("unknown antenna variant `{0}` (expected iso, dir or cone)")]
    UnknownVariant(String),
    #[error("no receiver to vary")]
    NoDesignatedNode,
}

/// Kinds of scheduled events.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    PacketEmit { node: usize },
    ReceptionComplete { pending: usize },
    StatsSample,
    SimEnd,
}

impl EventKind {
    pub fn label(&self) -> &'static str {
        match self {
            EventKind::PacketEmit { .. } => "packet_emit",
            EventKind::ReceptionComplete { .. } => "reception_complete",
            EventKind::StatsSample => "stats_sample",
            EventKind::SimEnd => "sim_end",
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Scheduled {
    time: f64,
    sequence: u64,
    kind: EventKind,
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scheduled {}

impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scheduled {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time.total_cmp(&other.time).then(self.sequence.cmp(&other.sequence))
    }
}

/// Min-queue of events; ties resolve in insertion order.
#[derive(Debug, Default)]
pub struct EventQueue {
    heap: BinaryHeap<Reverse<Scheduled>>,
    next_sequence: u64,
}

impl EventQueue {
    pub fn push(&mut self, time: f64, kind: EventKind) -> u64 {
        let sequence = self.next_sequence;
        self.next_sequence += 1;
        self.heap.push(Reverse(Scheduled { time, sequence, kind }));
        sequence
    }

    pub fn pop(&mut self) -> Option<(f64, u64, EventKind)> {
        self.heap.pop().map(|Reverse(s)| (s.time, s.sequence, s.kind))
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}

/// One processed event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventLogEntry {
    pub time_s: f64,
    pub sequence: u64,
    pub kind: &'static str,
    pub node: Option<usize>,
}

/// Instantaneous transmitter-to-receiver power, sampled periodically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSample {
    pub time_s: f64,
    pub distance_m: f64,
    pub rx_power_w: f64,
    /// Accepted bits from packets sent in the preceding sample period, per second.
    pub throughput_bps: f64,
}

/// Accepted payload within one measurement window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputWindow {
    pub start_s: f64,
    pub length_s: f64,
    pub accepted_bits: u64,
}

impl ThroughputWindow {
    pub fn throughput_bps(&self) -> f64 {
        self.accepted_bits as f64 / self.length_s
    }
}

/// Bins accepted packets by transmission start time into consecutive windows
/// covering `[0, duration_s)`; the last window is truncated at the end.
pub fn throughput_windows(records: &[ReceptionRecord], window_s: f64, duration_s: f64) -> Vec<ThroughputWindow> {
    let mut windows = window_grid(window_s, duration_s);
    for r in records.iter().filter(|r| r.accepted) {
        if let Some(i) = window_index(&windows, r.start_time_s) {
            windows[i].accepted_bits += r.size_bits;
        }
    }
    windows
}

fn window_grid(window_s: f64, duration_s: f64) -> Vec<ThroughputWindow> {
    let mut out = Vec::new();
    if !(window_s > 0.0) {
        return out;
    }
    let mut k = 0u64;
    loop {
        let start_s = k as f64 * window_s;
        if start_s >= duration_s {
            break;
        }
        let end = ((k + 1) as f64 * window_s).min(duration_s);
        out.push(ThroughputWindow { start_s, length_s: end - start_s, accepted_bits: 0 });
        k += 1;
    }
    out
}

fn window_index(windows: &[ThroughputWindow], t: f64) -> Option<usize> {
    let i = windows.partition_point(|w| w.start_s <= t);
    (i > 0 && t < windows[i - 1].start_s + windows[i - 1].length_s).then(|| i - 1)
}

/// Everything recorded for one receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverSeries {
    pub node_id: String,
    pub records: Vec<ReceptionRecord>,
    pub samples: Vec<PowerSample>,
    pub windows: Vec<ThroughputWindow>,
    /// Transmitter bits emitted per window, aligned with `windows`.
    pub offered_bits: Vec<u64>,
    pub received: u64,
    pub rejected: u64,
    pub bit_errors: u64,
}

impl ReceiverSeries {
    pub fn accepted_bits(&self) -> u64 {
        self.records.iter().filter(|r| r.accepted).map(|r| r.size_bits).sum()
    }

    /// Sum over records of `ber × size`, the error count expected before
    /// random allocation.
    pub fn expected_bit_errors(&self) -> f64 {
        self.records.iter().map(|r| r.ber * r.size_bits as f64).sum()
    }

    /// Record with the highest BER (earliest on ties).
    pub fn max_ber(&self) -> Option<&ReceptionRecord> {
        self.records
            .iter()
            .fold(None, |best: Option<&ReceptionRecord>, r| match best {
                Some(b) if b.ber >= r.ber => Some(b),
                _ => Some(r),
            })
    }
}

/// Output of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsSeries {
    pub scenario: String,
    pub seed: u64,
    pub duration_s: f64,
    pub window_s: f64,
    pub sample_period_s: f64,
    pub sent_packets: u64,
    pub sent_bits: u64,
    pub receivers: Vec<ReceiverSeries>,
    pub events: Vec<EventLogEntry>,
}

impl StatsSeries {
    pub fn receiver(&self, id: &str) -> Option<&ReceiverSeries> {
        self.receivers.iter().find(|r| r.node_id == id)
    }
}

struct NodeState {
    id: String,
    role: Role,
    channel: Channel,
    track: Track,
    antenna: AntennaSystem,
    target: Option<usize>,
    generator: Option<GeneratorConfig>,
    radio: Option<RadioSettings>,
}

/// A validated, compiled scenario.
pub struct Scenario {
    name: String,
    duration_s: f64,
    window_s: f64,
    sample_period_s: f64,
    nodes: Vec<NodeState>,
    transmitter: usize,
    receivers: Vec<usize>,
}

struct Arrival {
    packet: usize,
    start_s: f64,
    end_s: f64,
}

struct Pending {
    packet: usize,
    receiver: usize,
    start_s: f64,
    end_s: f64,
}

impl Scenario {
    pub fn build(config: &ScenarioConfig) -> Result<Scenario, EngineError> {
        let violations = validate(config);
        if !violations.is_empty() {
            return Err(EngineError::Invalid(violations));
        }
        let index_of = |id: &str| config.nodes.iter().position(|n| n.id == id);
        let mut nodes = Vec::with_capacity(config.nodes.len());
        for n in &config.nodes {
            let track = Track::new(&n.trajectory, config.duration_s)
                .map_err(|source| EngineError::Trajectory { node: n.id.clone(), source })?;
            let target = match &n.antenna.pointing {
                PointingMode::LockedToTarget { target } => index_of(target),
                PointingMode::FixedToObject => None,
            };
            nodes.push(NodeState {
                id: n.id.clone(),
                role: n.role,
                channel: config.channel(&n.channel).cloned().expect("validated channel"),
                track,
                antenna: n.antenna.clone(),
                target,
                generator: n.generator.clone(),
                radio: n.radio.as_ref().map(|r| RadioSettings {
                    noise_figure_db: r.noise_figure_db,
                    system_loss: r.system_loss_linear,
                    correction_threshold_bits: r.correction_threshold_bits,
                }),
            });
        }
        let transmitter = nodes.iter().position(|n| n.role == Role::Transmitter).expect("validated");
        let receivers = (0..nodes.len()).filter(|&i| nodes[i].role == Role::Receiver).collect();
        Ok(Scenario {
            name: config.name.clone(),
            duration_s: config.duration_s,
            window_s: config.stats.window_s,
            sample_period_s: config.stats.sample_period_s,
            nodes,
            transmitter,
            receivers,
        })
    }

    fn boresight(&self, node: usize, t: f64) -> Orientation {
        let n = &self.nodes[node];
        let pose = (n.track.position_at(t), n.track.heading_at(t));
        let target = n.target.map(|i| self.nodes[i].track.position_at(t));
        // a tracked node passing exactly through the antenna leaves the
        // bearing undefined for that instant; hold the node's heading
        resolve_boresight(&n.antenna, pose, target).unwrap_or_else(|_| pose.1.with_roll(n.antenna.rotation()))
    }

    fn link_end(&self, node: usize, t: f64) -> LinkEnd<'_> {
        LinkEnd {
            position: self.nodes[node].track.position_at(t),
            boresight: self.boresight(node, t),
            pattern: &self.nodes[node].antenna.pattern,
        }
    }

    fn radio(&self, node: usize) -> &RadioSettings {
        self.nodes[node].radio.as_ref().expect("validated receiver radio")
    }

    /// Runs to completion with the given error-allocation seed.
    pub fn run(&self, seed: u64) -> Result<StatsSeries, EngineError> {
        let streams = ErrorStreams::new(seed);
        let mut queue = EventQueue::default();
        let mut events = Vec::new();
        let mut packets: Vec<Transmission> = Vec::new();
        let mut pending: Vec<Pending> = Vec::new();
        let mut arrivals: Vec<Vec<Arrival>> = self.receivers.iter().map(|_| Vec::new()).collect();
        let mut records: Vec<Vec<ReceptionRecord>> = self.receivers.iter().map(|_| Vec::new()).collect();
        let mut samples: Vec<Vec<(f64, f64, f64)>> = self.receivers.iter().map(|_| Vec::new()).collect();
        let mut interval_rngs: Vec<ChaCha8Rng> = (0..self.nodes.len())
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream((1 << 63) | i as u64);
                rng
            })
            .collect();
        let mut sent_times: Vec<(f64, u64)> = Vec::new();
        let longest_emission = self
            .nodes
            .iter()
            .filter_map(|n| n.generator.as_ref().map(|g| g.packet_size_bits as f64 / n.channel.data_rate_bps))
            .fold(0.0, f64::max);

        queue.push(self.duration_s, EventKind::SimEnd);
        queue.push(0.0, EventKind::StatsSample);
        for (i, n) in self.nodes.iter().enumerate() {
            if let Some(g) = &n.generator {
                if g.start_s < self.duration_s {
                    queue.push(g.start_s, EventKind::PacketEmit { node: i });
                }
            }
        }

        while let Some((now, sequence, kind)) = queue.pop() {
            let node = match kind {
                EventKind::PacketEmit { node } => Some(node),
                EventKind::ReceptionComplete { pending: p } => Some(self.receivers[pending[p].receiver]),
                _ => None,
            };
            events.push(EventLogEntry { time_s: now, sequence, kind: kind.label(), node });
            match kind {
                EventKind::SimEnd => break,
                EventKind::StatsSample => {
                    for (slot, &rx) in self.receivers.iter().enumerate() {
                        let budget = self.sample_link(rx, now)?;
                        samples[slot].push((now, budget.0, budget.1));
                    }
                    let next = now + self.sample_period_s;
                    if next < self.duration_s {
                        queue.push(next, EventKind::StatsSample);
                    }
                }
                EventKind::PacketEmit { node } => {
                    let n = &self.nodes[node];
                    let g = n.generator.as_ref().expect("generator node");
                    let packet = packets.len();
                    packets.push(Transmission {
                        packet_id: packet as u64,
                        source: n.id.clone(),
                        channel: n.channel.clone(),
                        size_bits: g.packet_size_bits,
                        tx_power_w: g.tx_power_w,
                        start_time_s: now,
                    });
                    if n.role == Role::Transmitter {
                        sent_times.push((now, g.packet_size_bits));
                    }
                    let duration = transmission_delay(g.packet_size_bits, n.channel.data_rate_bps)?;
                    let origin = n.track.position_at(now);
                    for (slot, &rx) in self.receivers.iter().enumerate() {
                        let matched = channel_match(&n.channel, &self.nodes[rx].channel);
                        if matched == ChannelMatch::Ignored {
                            continue;
                        }
                        let start_s = now + propagation_delay(distance(origin, self.nodes[rx].track.position_at(now)));
                        let end_s = start_s + duration;
                        arrivals[slot].push(Arrival { packet, start_s, end_s });
                        if matched == ChannelMatch::Valid && n.role == Role::Transmitter {
                            pending.push(Pending { packet, receiver: slot, start_s, end_s });
                            queue.push(end_s, EventKind::ReceptionComplete { pending: pending.len() - 1 });
                        }
                    }
                    let gap = match g.interval {
                        IntervalModel::Constant { interval_s } => interval_s,
                        IntervalModel::Exponential { mean_interval_s } => {
                            let u: f64 = interval_rngs[node].random();
                            -mean_interval_s * (1.0 - u).ln()
                        }
                    };
                    let next = now + gap;
                    if next < self.duration_s {
                        queue.push(next, EventKind::PacketEmit { node });
                    }
                }
                EventKind::ReceptionComplete { pending: p } => {
                    let Pending { packet, receiver: slot, start_s, end_s } = pending[p];
                    let rx = self.receivers[slot];
                    let mid = 0.5 * (start_s + end_s);
                    let receiver = self.link_end(rx, mid);
                    let radio = *self.radio(rx);
                    let mut interferers = Vec::new();
                    for a in arrivals[slot].iter().filter(|a| a.packet != packet) {
                        if a.end_s <= start_s - longest_emission || a.start_s >= end_s + longest_emission {
                            continue;
                        }
                        let src = &packets[a.packet];
                        let emitter = self.link_end(self.source_index(&src.source), mid);
                        let budget = link_budget(&emitter, &receiver, src.tx_power_w, &src.channel, radio.system_loss)?;
                        interferers.push(Interferer {
                            packet_id: src.packet_id,
                            rx_power_w: budget.rx_power_w,
                            start_s: a.start_s,
                            end_s: a.end_s,
                        });
                    }
                    let tx = &packets[packet];
                    let input = ReceptionInput {
                        tx,
                        rx_node: &self.nodes[rx].id,
                        rx_channel: &self.nodes[rx].channel,
                        transmitter: self.link_end(self.source_index(&tx.source), mid),
                        receiver,
                        radio: &radio,
                        interferers: &interferers,
                    };
                    let record = process_reception(&input, &mut streams.stream(slot, tx.packet_id))?;
                    records[slot].push(record);
                    let horizon = now - 2.0 * longest_emission - 1.0;
                    arrivals[slot].retain(|a| a.end_s >= horizon);
                }
            }
        }

        let offered = {
            let mut grid = window_grid(self.window_s, self.duration_s);
            for &(t, bits) in &sent_times {
                if let Some(i) = window_index(&grid, t) {
                    grid[i].accepted_bits += bits;
                }
            }
            grid.into_iter().map(|w| w.accepted_bits).collect::<Vec<_>>()
        };
        let receivers = self
            .receivers
            .iter()
            .enumerate()
            .map(|(slot, &rx)| {
                let recs = std::mem::take(&mut records[slot]);
                let received = recs.iter().filter(|r| r.accepted).count() as u64;
                let rejected = recs.len() as u64 - received;
                let bit_errors = recs.iter().map(|r| r.bit_errors).sum();
                let samples = samples[slot]
                    .iter()
                    .map(|&(time_s, distance_m, rx_power_w)| PowerSample {
                        time_s,
                        distance_m,
                        rx_power_w,
                        throughput_bps: recent_throughput(&recs, time_s, self.sample_period_s),
                    })
                    .collect();
                ReceiverSeries {
                    node_id: self.nodes[rx].id.clone(),
                    windows: throughput_windows(&recs, self.window_s, self.duration_s),
                    offered_bits: offered.clone(),
                    records: recs,
                    samples,
                    received,
                    rejected,
                    bit_errors,
                }
            })
            .collect();

        Ok(StatsSeries {
            scenario: self.name.clone(),
            seed,
            duration_s: self.duration_s,
            window_s: self.window_s,
            sample_period_s: self.sample_period_s,
            sent_packets: sent_times.len() as u64,
            sent_bits: sent_times.iter().map(|&(_, b)| b).sum(),
            receivers,
            events,
        })
    }

    fn source_index(&self, id: &str) -> usize {
        self.nodes.iter().position(|n| n.id == id).expect("known source")
    }

    /// (distance, received power) of the transmitter's signal at `rx`.
    fn sample_link(&self, rx: usize, t: f64) -> Result<(f64, f64), EngineError> {
        let tx = &self.nodes[self.transmitter];
        let g = tx.generator.as_ref().expect("transmitter generator");
        let from = self.link_end(self.transmitter, t);
        let to = self.link_end(rx, t);
        let budget = link_budget(&from, &to, g.tx_power_w, &tx.channel, self.radio(rx).system_loss)?;
        Ok((budget.distance_m, budget.rx_power_w))
    }
}

fn recent_throughput(records: &[ReceptionRecord], t: f64, period: f64) -> f64 {
    let bits: u64 = records
        .iter()
        .filter(|r| r.accepted && r.start_time_s >= t - period && r.start_time_s < t)
        .map(|r| r.size_bits)
        .sum();
    bits as f64 / period
}

/// Validates, builds and runs `config`.
pub fn run(config: &ScenarioConfig, seed: u64) -> Result<StatsSeries, EngineError> {
    Scenario::build(config)?.run(seed)
}

/// A pattern to mount on the compared node.
#[derive(Debug, Clone, PartialEq)]
pub struct AntennaVariant {
    pub label: String,
    pub pattern: Pattern,
}

/// Maps a CLI label (`iso`, `dir`, `cone` or their long forms) to a pattern,
/// using the scenario's presets when present.
pub fn variant_from_label(config: &ScenarioConfig, label: &str) -> Result<AntennaVariant, EngineError> {
    let presets = config.compare.as_ref();
    let (label, pattern) = match label.trim() {
        "iso" | "isotropic" => ("isotropic", Pattern::Isotropic),
        "dir" | "directional" => (
            "directional",
            presets.and_then(|c| c.directional.clone()).unwrap_or(Pattern::DEFAULT_DIRECTIONAL),
        ),
        "cone" | "discone" => ("cone", presets.and_then(|c| c.cone.clone()).unwrap_or(Pattern::DEFAULT_CONE)),
        other => return Err(EngineError::UnknownVariant(other.to_string())),
    };
    Ok(AntennaVariant { label: label.to_string(), pattern })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariantResult {
    pub label: String,
    pub series: StatsSeries,
    pub bit_errors: u64,
    pub accepted_bits: u64,
    pub expected_bit_errors: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub node: String,
    pub seed: u64,
    pub variants: Vec<VariantResult>,
    /// Indices into `variants`, fewest cumulative bit errors first. Ties
    /// fall back to the expected error count, then to input order.
    pub ranking: Vec<usize>,
}

impl Comparison {
    pub fn ranked_labels(&self) -> Vec<&str> {
        self.ranking.iter().map(|&i| self.variants[i].label.as_str()).collect()
    }
}

/// Runs `config` once per variant, swapping only the compared node's
/// pattern. Variants run concurrently and share no state.
pub fn compare_antennas(
    config: &ScenarioConfig,
    variants: &[AntennaVariant],
    seed: u64,
) -> Result<Comparison, EngineError> {
    let node = match &config.compare {
        Some(c) => c.node.clone(),
        None => config
            .nodes
            .iter()
            .find(|n| n.role == Role::Receiver)
            .map(|n| n.id.clone())
            .ok_or(EngineError::NoDesignatedNode)?,
    };
    let configs: Vec<ScenarioConfig> = variants
        .iter()
        .map(|v| {
            let mut c = config.clone();
            if let Some(n) = c.node_mut(&node) {
                n.antenna.pattern = v.pattern.clone();
            }
            c
        })
        .collect();
    let results: Vec<Result<StatsSeries, EngineError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = configs.iter().map(|c| scope.spawn(move || run(c, seed))).collect();
        handles.into_iter().map(|h| h.join().expect("variant run panicked")).collect()
    });
    let mut out = Vec::with_capacity(variants.len());
    for (v, series) in variants.iter().zip(results) {
        let series = series?;
        let rx = series.receiver(&node).ok_or(EngineError::NoDesignatedNode)?;
        out.push(VariantResult {
            label: v.label.clone(),
            bit_errors: rx.bit_errors,
            accepted_bits: rx.accepted_bits(),
            expected_bit_errors: rx.expected_bit_errors(),
            series,
        });
    }
    let mut ranking: Vec<usize> = (0..out.len()).collect();
    ranking.sort_by(|&a, &b| {
        out[a]
            .bit_errors
            .cmp(&out[b].bit_errors)
            .then(out[a].expected_bit_errors.total_cmp(&out[b].expected_bit_errors))
            .then(a.cmp(&b))
    });
    Ok(Comparison { node, seed, variants: out, ranking })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(start: f64, accepted: bool) -> ReceptionRecord {
        ReceptionRecord {
            packet_id: 0,
            source: "tx".into(),
            rx_node: "rx".into(),
            channel_match: ChannelMatch::Valid,
            size_bits: 1024,
            start_time_s: start,
            transmission_delay_s: 1e-3,
            propagation_delay_s: 0.0,
            end_time_s: start + 1e-3,
            distance_m: 1.0,
            tx_gain: 1.0,
            rx_gain: 1.0,
            rx_power_w: 1.0,
            background_noise_w: 1.0,
            interference_w: 0.0,
            snr_db: 0.0,
            eb_n0: 1.0,
            ber: 0.0,
            bit_errors: if accepted { 0 } else { 3 },
            accepted,
        }
    }

    #[test]
    fn queue_orders_by_time_then_insertion() {
        let mut q = EventQueue::default();
        q.push(2.0, EventKind::SimEnd);
        q.push(1.0, EventKind::StatsSample);
        q.push(1.0, EventKind::PacketEmit { node: 0 });
        q.push(0.5, EventKind::PacketEmit { node: 1 });
        let order: Vec<_> = std::iter::from_fn(|| q.pop()).map(|(t, s, _)| (t, s)).collect();
        assert_eq!(order, vec![(0.5, 3), (1.0, 1), (1.0, 2), (2.0, 0)]);
    }

    #[test]
    fn throughput_window_examples() {
        let w = throughput_windows(&[], 60.0, 120.0);
        assert_eq!(w.len(), 2);
        assert!(w.iter().all(|w| w.throughput_bps() == 0.0));

        let w = throughput_windows(&[record(10.0, true), record(20.0, false)], 60.0, 120.0);
        assert!((w[0].throughput_bps() - 1024.0 / 60.0).abs() < 1e-12);
        assert_eq!(w[1].accepted_bits, 0);
    }

    #[test]
    fn last_window_truncated() {
        let w = throughput_windows(&[record(95.0, true)], 30.0, 100.0);
        assert_eq!(w.len(), 4);
        assert_eq!(w[3].length_s, 10.0);
        assert_eq!(w[3].accepted_bits, 1024);
        // a packet exactly at the end of the run belongs to no window
        assert!(throughput_windows(&[record(100.0, true)], 30.0, 100.0).iter().all(|w| w.accepted_bits == 0));
    }
}
