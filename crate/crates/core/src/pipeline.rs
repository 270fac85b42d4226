//! Per-packet radio computation chain.
//!
//! Every valid packet at every receiver runs through the same fixed sequence
//! of stages: receiver group, channel match, transmission delay, link
//! closure, transmitter gain, propagation delay, receiver gain, received
//! power, background noise, interference, SNR, BER, error allocation and
//! error correction. Each intermediate value lands in the
//! [`ReceptionRecord`] so a run can be audited stage by stage.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::Serialize;
use thiserror::Error;

use crate::antenna::{gain, Pattern};
use crate::geometry::{azimuth_elevation, distance, GeometryError, Orientation, Vec3};
use crate::propagation::{
    friis_received_power, propagation_delay, wavelength, Channel, PropagationError,
};

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380649e-23;
/// Reference noise temperature, K.
pub const REFERENCE_TEMPERATURE_K: f64 = 290.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("packet is not a valid match for the receiver channel ({0:?})")]
    NotValid(ChannelMatch),
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("{what} must be non-negative, got {value}")]
    Negative { what: &'static str, value: f64 },
    #[error("noiseless channel")]
    Noiseless,
    #[error("probability out of range: {0}")]
    Probability(f64),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
}

/// Outcome of comparing a transmitter's channel to a receiver's.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelMatch {
    Valid,
    Noise,
    Ignored,
}

pub fn channel_match(tx: &Channel, rx: &Channel) -> ChannelMatch {
    if tx.id == rx.id && tx.frequency_hz == rx.frequency_hz {
        return ChannelMatch::Valid;
    }
    let (tx_lo, tx_hi) = tx.band();
    let (rx_lo, rx_hi) = rx.band();
    if tx_lo < rx_hi && rx_lo < tx_hi {
        ChannelMatch::Noise
    } else {
        ChannelMatch::Ignored
    }
}

pub fn transmission_delay(size_bits: u64, data_rate_bps: f64) -> Result<f64, PipelineError> {
    if size_bits == 0 {
        return Err(PipelineError::NonPositive { what: "packet size", value: 0.0 });
    }
    if !(data_rate_bps > 0.0 && data_rate_bps.is_finite()) {
        return Err(PipelineError::NonPositive { what: "data rate", value: data_rate_bps });
    }
    Ok(size_bits as f64 / data_rate_bps)
}

/// Signal to interference-plus-noise ratio in dB. Zero signal power gives
/// negative infinity.
pub fn snr_db(rx_power_w: f64, background_noise_w: f64, interference_w: f64) -> Result<f64, PipelineError> {
    if !(rx_power_w >= 0.0) {
        return Err(PipelineError::Negative { what: "received power", value: rx_power_w });
    }
    if !(background_noise_w >= 0.0) {
        return Err(PipelineError::Negative { what: "background noise", value: background_noise_w });
    }
    if !(interference_w >= 0.0) {
        return Err(PipelineError::Negative { what: "interference", value: interference_w });
    }
    let total = background_noise_w + interference_w;
    if total == 0.0 {
        return Err(PipelineError::Noiseless);
    }
    Ok(10.0 * (rx_power_w / total).log10())
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Coherent BPSK bit error probability in AWGN, `½·erfc(√(Eb/N0))`.
pub fn ber_bpsk(eb_n0: f64) -> Result<f64, PipelineError> {
    if !(eb_n0 >= 0.0) {
        return Err(PipelineError::Negative { what: "Eb/N0", value: eb_n0 });
    }
    Ok(0.5 * libm::erfc(eb_n0.sqrt()))
}

pub fn eb_n0_from_snr(snr_linear: f64, bandwidth_hz: f64, data_rate_bps: f64) -> Result<f64, PipelineError> {
    if !(snr_linear >= 0.0) {
        return Err(PipelineError::Negative { what: "SNR", value: snr_linear });
    }
    if !(bandwidth_hz > 0.0) {
        return Err(PipelineError::NonPositive { what: "bandwidth", value: bandwidth_hz });
    }
    if !(data_rate_bps > 0.0) {
        return Err(PipelineError::NonPositive { what: "data rate", value: data_rate_bps });
    }
    Ok(snr_linear * bandwidth_hz / data_rate_bps)
}

/// Thermal noise `k·T0·B` raised by the receiver noise figure.
pub fn background_noise(bandwidth_hz: f64, noise_figure_db: f64) -> f64 {
    BOLTZMANN * REFERENCE_TEMPERATURE_K * bandwidth_hz * db_to_linear(noise_figure_db)
}

/// A concurrent emission seen by a receiver, with its arrival interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interferer {
    pub packet_id: u64,
    pub rx_power_w: f64,
    pub start_s: f64,
    pub end_s: f64,
}

impl Interferer {
    /// The part of this emission that overlaps `window`, if any.
    pub fn clip(&self, window: (f64, f64)) -> Option<Interferer> {
        let start = self.start_s.max(window.0);
        let end = self.end_s.min(window.1);
        (end > start).then_some(Interferer { start_s: start, end_s: end, ..*self })
    }
}

/// Time-averaged interference over `window`. Each entry's interval must lie
/// inside the window (use [`Interferer::clip`]).
pub fn interference_power(window: (f64, f64), overlapping: &[Interferer]) -> f64 {
    let span = window.1 - window.0;
    if span <= 0.0 {
        return 0.0;
    }
    overlapping
        .iter()
        .map(|i| i.rx_power_w * (i.end_s - i.start_s))
        .sum::<f64>()
        / span
}

/// Number of bit errors in a `size_bits` packet with independent bit error
/// probability `ber`, i.e. a Binomial(size, ber) draw.
///
/// Errors are placed by geometric gaps between consecutive error bits, so the
/// cost is proportional to the number of errors. For a fixed stream the
/// count is non-decreasing in `ber`.
pub fn allocate_errors<R: Rng + ?Sized>(ber: f64, size_bits: u64, rng: &mut R) -> u64 {
    if !(ber > 0.0) || size_bits == 0 {
        return 0;
    }
    if ber >= 1.0 {
        return size_bits;
    }
    let log_keep = (-ber).ln_1p();
    let n = size_bits as f64;
    let mut position = -1.0f64;
    let mut errors = 0;
    loop {
        let u = 1.0 - rng.random::<f64>();
        position += (u.ln() / log_keep).floor() + 1.0;
        if position >= n {
            return errors;
        }
        errors += 1;
    }
}

pub fn error_correction(bit_errors: u64, threshold: u64) -> bool {
    bit_errors <= threshold
}

/// Source of per-packet error-allocation streams.
///
/// Each (receiver, packet) pair gets its own ChaCha stream derived from the
/// run seed, so the draws for one packet do not depend on how many draws
/// earlier packets consumed. Runs that differ only in antennas therefore see
/// the same uniforms for the same packet.
#[derive(Debug, Clone, Copy)]
pub struct ErrorStreams {
    seed: u64,
}

impl ErrorStreams {
    pub fn new(seed: u64) -> Self {
        ErrorStreams { seed }
    }

    pub fn stream(&self, receiver: usize, packet_id: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((receiver as u64) << 40) ^ packet_id);
        rng
    }
}

/// One packet in flight.
#[derive(Debug, Clone, PartialEq)]
pub struct Transmission {
    pub packet_id: u64,
    pub source: String,
    pub channel: Channel,
    pub size_bits: u64,
    pub tx_power_w: f64,
    pub start_time_s: f64,
}

/// An antenna at a node, evaluated at one instant.
#[derive(Debug, Clone, Copy)]
pub struct LinkEnd<'a> {
    pub position: Vec3,
    pub boresight: Orientation,
    pub pattern: &'a Pattern,
}

impl LinkEnd<'_> {
    /// Gain toward `to`. Coincident points are evaluated on boresight.
    pub fn gain_toward(&self, to: Vec3) -> f64 {
        match azimuth_elevation(&self.boresight, self.position, to) {
            Ok((theta, phi)) => gain(self.pattern, theta, phi),
            Err(GeometryError::ZeroLengthDirection) => gain(self.pattern, 0.0, 0.0),
            Err(_) => 0.0,
        }
    }
}

/// Gains, distance and received power for one emitter/receiver pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub distance_m: f64,
    pub tx_gain: f64,
    pub rx_gain: f64,
    pub rx_power_w: f64,
}

pub fn link_budget(
    from: &LinkEnd,
    to: &LinkEnd,
    tx_power_w: f64,
    channel: &Channel,
    system_loss: f64,
) -> Result<LinkBudget, PipelineError> {
    let distance_m = distance(from.position, to.position);
    let tx_gain = from.gain_toward(to.position);
    let rx_gain = to.gain_toward(from.position);
    let lambda = wavelength(channel.frequency_hz)?;
    let rx_power_w = friis_received_power(tx_power_w, tx_gain, rx_gain, lambda, distance_m, system_loss)?;
    Ok(LinkBudget { distance_m, tx_gain, rx_gain, rx_power_w })
}

/// Receiver front-end settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioSettings {
    pub noise_figure_db: f64,
    pub system_loss: f64,
    pub correction_threshold_bits: u64,
}

/// Everything the pipeline needs for one packet at one receiver.
///
/// Positions and boresights are those at the midpoint of the reception
/// window; `interferers` may extend beyond the window and are clipped here.
#[derive(Debug, Clone, Copy)]
pub struct ReceptionInput<'a> {
    pub tx: &'a Transmission,
    pub rx_node: &'a str,
    pub rx_channel: &'a Channel,
    pub transmitter: LinkEnd<'a>,
    pub receiver: LinkEnd<'a>,
    pub radio: &'a RadioSettings,
    pub interferers: &'a [Interferer],
}

/// Pipeline outputs for one packet at one receiver.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReceptionRecord {
    pub packet_id: u64,
    pub source: String,
    pub rx_node: String,
    pub channel_match: ChannelMatch,
    pub size_bits: u64,
    pub start_time_s: f64,
    pub transmission_delay_s: f64,
    pub propagation_delay_s: f64,
    pub end_time_s: f64,
    pub distance_m: f64,
    pub tx_gain: f64,
    pub rx_gain: f64,
    pub rx_power_w: f64,
    pub background_noise_w: f64,
    pub interference_w: f64,
    pub snr_db: f64,
    pub eb_n0: f64,
    pub ber: f64,
    pub bit_errors: u64,
    pub accepted: bool,
}

/// Runs every stage for one valid packet.
pub fn process_reception<R: Rng + ?Sized>(
    input: &ReceptionInput,
    rng: &mut R,
) -> Result<ReceptionRecord, PipelineError> {
    let tx = input.tx;
    // receiver group: every receiver in the scenario is eligible
    let matched = channel_match(&tx.channel, input.rx_channel);
    if matched != ChannelMatch::Valid {
        return Err(PipelineError::NotValid(matched));
    }
    if !(tx.tx_power_w > 0.0) {
        return Err(PipelineError::NonPositive { what: "transmit power", value: tx.tx_power_w });
    }
    let tx_delay = transmission_delay(tx.size_bits, tx.channel.data_rate_bps)?;
    // link closure: free space, always line of sight
    let budget = link_budget(
        &input.transmitter,
        &input.receiver,
        tx.tx_power_w,
        &tx.channel,
        input.radio.system_loss,
    )?;
    let prop_delay = propagation_delay(budget.distance_m);
    let end = tx.start_time_s + tx_delay + prop_delay;
    let window = (end - tx_delay, end);

    let noise = background_noise(input.rx_channel.bandwidth_hz, input.radio.noise_figure_db);
    let overlapping: Vec<Interferer> = input
        .interferers
        .iter()
        .filter(|i| i.packet_id != tx.packet_id)
        .filter_map(|i| i.clip(window))
        .collect();
    let interference = interference_power(window, &overlapping);

    let snr = snr_db(budget.rx_power_w, noise, interference)?;
    let eb_n0 = eb_n0_from_snr(
        budget.rx_power_w / (noise + interference),
        input.rx_channel.bandwidth_hz,
        input.rx_channel.data_rate_bps,
    )?;
    let ber = ber_bpsk(eb_n0)?;
    let bit_errors = allocate_errors(ber, tx.size_bits, rng);
    let accepted = error_correction(bit_errors, input.radio.correction_threshold_bits);

    Ok(ReceptionRecord {
        packet_id: tx.packet_id,
        source: tx.source.clone(),
        rx_node: input.rx_node.to_string(),
        channel_match: matched,
        size_bits: tx.size_bits,
        start_time_s: tx.start_time_s,
        transmission_delay_s: tx_delay,
        propagation_delay_s: prop_delay,
        end_time_s: end,
        distance_m: budget.distance_m,
        tx_gain: budget.tx_gain,
        rx_gain: budget.rx_gain,
        rx_power_w: budget.rx_power_w,
        background_noise_w: noise,
        interference_w: interference,
        snr_db: snr,
        eb_n0,
        ber,
        bit_errors,
        accepted,
    })
}

/// One stage value of the pipeline trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub packet_id: u64,
    pub rx_node: String,
    pub stage: &'static str,
    pub value: f64,
    pub unit: &'static str,
}

impl ReceptionRecord {
    /// Stage-by-stage trace in pipeline order.
    pub fn trace(&self) -> Vec<TraceRow> {
        let stages: [(&'static str, f64, &'static str); 15] = [
            ("receiver_group", 1.0, "bool"),
            ("channel_match", 1.0, "bool"),
            ("transmission_delay", self.transmission_delay_s, "s"),
            ("link_closure", 1.0, "bool"),
            ("tx_gain", self.tx_gain, "linear"),
            ("propagation_delay", self.propagation_delay_s, "s"),
            ("rx_gain", self.rx_gain, "linear"),
            ("received_power", self.rx_power_w, "W"),
            ("background_noise", self.background_noise_w, "W"),
            ("interference", self.interference_w, "W"),
            ("snr", self.snr_db, "dB"),
            ("eb_n0", self.eb_n0, "linear"),
            ("ber", self.ber, "probability"),
            ("error_allocation", self.bit_errors as f64, "bits"),
            ("error_correction", if self.accepted { 1.0 } else { 0.0 }, "bool"),
        ];
        stages
            .into_iter()
            .map(|(stage, value, unit)| TraceRow {
                packet_id: self.packet_id,
                rx_node: self.rx_node.clone(),
                stage,
                value,
                unit,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn chan(id: &str, f: f64) -> Channel {
        Channel { id: id.into(), frequency_hz: f, bandwidth_hz: 1e6, data_rate_bps: 1e6 }
    }

    #[test]
    fn channel_match_examples() {
        assert_eq!(channel_match(&chan("data", 2.4e9), &chan("data", 2.4e9)), ChannelMatch::Valid);
        assert_eq!(channel_match(&chan("jam", 2.4e9), &chan("data", 2.4e9)), ChannelMatch::Noise);
        assert_eq!(channel_match(&chan("jam", 2.4003e9), &chan("data", 2.4e9)), ChannelMatch::Noise);
        assert_eq!(channel_match(&chan("a", 2.40e9), &chan("b", 2.48e9)), ChannelMatch::Ignored);
        // touching band edges do not overlap
        assert_eq!(channel_match(&chan("a", 2.400e9), &chan("b", 2.401e9)), ChannelMatch::Ignored);
    }

    #[test]
    fn transmission_delay_examples() {
        assert_eq!(transmission_delay(1024, 1e6).unwrap(), 1.024e-3);
        assert!(transmission_delay(0, 1e6).is_err());
        assert!(transmission_delay(1024, 0.0).is_err());
        assert_eq!(transmission_delay(1024, 2e6).unwrap(), 0.5 * transmission_delay(1024, 1e6).unwrap());
    }

    #[test]
    fn snr_examples() {
        assert_eq!(snr_db(1e-9, 1e-9, 0.0).unwrap(), 0.0);
        assert!((snr_db(1e-9, 1e-12, 0.0).unwrap() - 30.0).abs() < 1e-12);
        // 1e-12 + 9.99e-10 is 1e-9 to within rounding
        assert!(snr_db(1e-9, 1e-12, 9.99e-10).unwrap().abs() < 1e-12);
        assert_eq!(snr_db(1e-9, 0.0, 0.0), Err(PipelineError::Noiseless));
        assert_eq!(snr_db(0.0, 1e-9, 0.0).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn ber_examples() {
        assert_eq!(ber_bpsk(0.0).unwrap(), 0.5);
        assert!(ber_bpsk(100.0).unwrap() < 1e-20);
        assert!((ber_bpsk(1.0).unwrap() - 0.07864960352514257).abs() < 1e-16);
        assert!(ber_bpsk(-1.0).is_err());
    }

    #[test]
    fn eb_n0_examples() {
        assert_eq!(eb_n0_from_snr(7.0, 1e6, 1e6).unwrap(), 7.0);
        assert_eq!(eb_n0_from_snr(10.0, 2e6, 1e6).unwrap(), 20.0);
        let five_db = db_to_linear(5.0);
        assert!((eb_n0_from_snr(five_db, 1e6, 1e6).unwrap() - 3.1622776601683795).abs() < 1e-12);
        assert!(eb_n0_from_snr(1.0, 0.0, 1e6).is_err());
    }

    #[test]
    fn background_noise_examples() {
        assert!((background_noise(1.0, 0.0) - 4.0038821e-21).abs() < 1e-30);
        assert!((background_noise(1e6, 0.0) - 4.0038821e-15).abs() < 1e-24);
        let doubled = background_noise(1e6, 10.0 * 2f64.log10());
        assert!((doubled / background_noise(1e6, 0.0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn interference_examples() {
        assert_eq!(interference_power((0.0, 1.0), &[]), 0.0);
        let full = Interferer { packet_id: 1, rx_power_w: 1e-9, start_s: 0.0, end_s: 1.0 };
        assert_eq!(interference_power((0.0, 1.0), &[full]), 1e-9);
        let half = Interferer { end_s: 0.5, ..full };
        assert_eq!(interference_power((0.0, 1.0), &[half]), 5e-10);
        let outside = Interferer { start_s: 2.0, end_s: 3.0, ..full };
        assert_eq!(outside.clip((0.0, 1.0)), None);
        let wide = Interferer { start_s: -5.0, end_s: 0.25, ..full };
        assert_eq!(wide.clip((0.0, 1.0)).unwrap().start_s, 0.0);
    }

    #[test]
    fn allocate_errors_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            assert_eq!(allocate_errors(0.0, 1024, &mut rng), 0);
            assert_eq!(allocate_errors(1.0, 1024, &mut rng), 1024);
        }
    }

    #[test]
    fn error_correction_examples() {
        assert!(error_correction(0, 0));
        assert!(!error_correction(1, 0));
        assert!(error_correction(3, 5));
    }

    fn pattern() -> Pattern {
        Pattern::DEFAULT_DIRECTIONAL
    }

    fn input<'a>(
        tx: &'a Transmission,
        rx_channel: &'a Channel,
        pattern: &'a Pattern,
        radio: &'a RadioSettings,
        interferers: &'a [Interferer],
        rx_pos: Vec3,
    ) -> ReceptionInput<'a> {
        let tx_end = LinkEnd {
            position: Vec3::ZERO,
            boresight: Orientation::toward(rx_pos, 0.0).unwrap(),
            pattern,
        };
        let rx_end = LinkEnd {
            position: rx_pos,
            boresight: Orientation::toward(Vec3::ZERO - rx_pos, 0.0).unwrap(),
            pattern,
        };
        ReceptionInput { tx, rx_node: "rx", rx_channel, transmitter: tx_end, receiver: rx_end, radio, interferers }
    }

    fn packet(power: f64) -> Transmission {
        Transmission {
            packet_id: 7,
            source: "tx".into(),
            channel: chan("data", 2.4e9),
            size_bits: 1024,
            tx_power_w: power,
            start_time_s: 10.0,
        }
    }

    const RADIO: RadioSettings = RadioSettings { noise_figure_db: 10.0, system_loss: 1.0, correction_threshold_bits: 0 };

    #[test]
    fn clean_link_is_accepted() {
        let tx = packet(20.0);
        let rx_chan = chan("data", 2.4e9);
        let p = pattern();
        let rec = process_reception(
            &input(&tx, &rx_chan, &p, &RADIO, &[], Vec3::new(300.0, 400.0, 0.0)),
            &mut ChaCha8Rng::seed_from_u64(1),
        )
        .unwrap();
        assert!(rec.ber < 1e-12);
        assert!(rec.accepted);
        assert_eq!(rec.distance_m, 500.0);
        assert!((rec.end_time_s - (10.0 + 1.024e-3 + 500.0 / crate::propagation::SPEED_OF_LIGHT)).abs() < 1e-15);
        assert_eq!(rec.trace().len(), 15);
    }

    #[test]
    fn strong_overlapping_jammer_rejects() {
        let tx = packet(20.0);
        let rx_chan = chan("data", 2.4e9);
        let p = pattern();
        let rx_pos = Vec3::new(2000.0, 0.0, 0.0);
        let clean = process_reception(&input(&tx, &rx_chan, &p, &RADIO, &[], rx_pos), &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let jam = [Interferer { packet_id: 99, rx_power_w: clean.rx_power_w * 10.0, start_s: 0.0, end_s: 100.0 }];
        let rec = process_reception(&input(&tx, &rx_chan, &p, &RADIO, &jam, rx_pos), &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert!(rec.ber > 0.25, "{}", rec.ber);
        assert!(!rec.accepted);
    }

    #[test]
    fn invalid_inputs_rejected() {
        let rx_chan = chan("data", 2.4e9);
        let p = pattern();
        let tx = packet(0.0);
        let err = process_reception(&input(&tx, &rx_chan, &p, &RADIO, &[], Vec3::new(10.0, 0.0, 0.0)), &mut ChaCha8Rng::seed_from_u64(1));
        assert!(matches!(err, Err(PipelineError::NonPositive { .. })));
        let other = chan("control", 2.48e9);
        let tx = packet(1.0);
        let err = process_reception(&input(&tx, &other, &p, &RADIO, &[], Vec3::new(10.0, 0.0, 0.0)), &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(err, Err(PipelineError::NotValid(ChannelMatch::Ignored)));
    }

    #[test]
    fn identical_inputs_identical_records() {
        let tx = packet(20.0);
        let rx_chan = chan("data", 2.4e9);
        let p = pattern();
        let jam = [Interferer { packet_id: 99, rx_power_w: 1e-9, start_s: 0.0, end_s: 100.0 }];
        let streams = ErrorStreams::new(42);
        let a = process_reception(&input(&tx, &rx_chan, &p, &RADIO, &jam, Vec3::new(3000.0, 0.0, 0.0)), &mut streams.stream(0, 7)).unwrap();
        let b = process_reception(&input(&tx, &rx_chan, &p, &RADIO, &jam, Vec3::new(3000.0, 0.0, 0.0)), &mut streams.stream(0, 7)).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn more_interference_never_lowers_ber(rx in 1e-13f64..1e-8, i1 in 0.0f64..1e-8, extra in 0.0f64..1e-8) {
            let n = background_noise(1e6, 10.0);
            let ber = |i: f64| ber_bpsk(db_to_linear(snr_db(rx, n, i).unwrap())).unwrap();
            prop_assert!(ber(i1 + extra) >= ber(i1));
        }

        #[test]
        fn ber_is_bounded(eb in 0.0f64..1e4) {
            let b = ber_bpsk(eb).unwrap();
            prop_assert!((0.0..=0.5).contains(&b));
        }

        #[test]
        fn error_count_monotone_in_ber(seed in any::<u64>(), p in 0.0f64..0.5, dp in 0.0f64..0.5) {
            let a = allocate_errors(p, 1024, &mut ChaCha8Rng::seed_from_u64(seed));
            let b = allocate_errors((p + dp).min(1.0), 1024, &mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert!(a <= b);
            prop_assert!(b <= 1024);
        }
    }
}
