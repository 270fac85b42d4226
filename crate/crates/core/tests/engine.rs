use std::path::Path;

use apsim::antenna::{gain, Pattern};
use apsim::engine::{compare_antennas, run, variant_from_label, EngineError, Scenario};
use apsim::pipeline::transmission_delay;
use apsim::propagation::propagation_delay;
use apsim::report::emit_csv;
use apsim::scenario::{parse_scenario, to_toml, IntervalModel, Role, ScenarioConfig};

fn scenario(file: &str) -> ScenarioConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(file);
    parse_scenario(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn without_jammer(mut cfg: ScenarioConfig) -> ScenarioConfig {
    cfg.nodes.retain(|n| n.role != Role::Jammer);
    cfg
}

#[test]
fn shipped_scenarios_are_valid_and_round_trip() {
    for file in ["baseline.toml", "baseline_dense.toml", "baseline_dense_no_tracker.toml", "linear_track.toml"] {
        let cfg = scenario(file);
        assert!(apsim::scenario::validate(&cfg).is_empty(), "{file}");
        let again = parse_scenario(&to_toml(&cfg).unwrap()).unwrap();
        assert_eq!(again, cfg, "{file}");
    }
}

#[test]
fn baseline_sends_twelve_packets() {
    let stats = run(&scenario("baseline.toml"), 7).unwrap();
    assert_eq!(stats.sent_packets, 12);
    assert_eq!(stats.sent_bits, 12 * 1024);
    assert_eq!(stats.receivers[0].records.len(), 12);
}

#[test]
fn without_jammer_every_packet_is_clean() {
    for file in ["baseline.toml", "baseline_dense.toml", "baseline_dense_no_tracker.toml"] {
        let stats = run(&without_jammer(scenario(file)), 7).unwrap();
        let rx = &stats.receivers[0];
        assert_eq!(rx.received, stats.sent_packets, "{file}");
        assert!(rx.records.iter().all(|r| r.ber < 1e-9), "{file}");
        assert_eq!(rx.bit_errors, 0, "{file}");
    }
}

#[test]
fn receptions_respect_causality_and_counts() {
    let stats = run(&scenario("baseline_dense.toml"), 3).unwrap();
    for rx in &stats.receivers {
        assert_eq!(rx.records.len() as u64, stats.sent_packets);
        assert!(rx.received + rx.rejected <= stats.sent_packets);
        for r in &rx.records {
            let earliest = r.start_time_s + transmission_delay(r.size_bits, 1e6).unwrap() + propagation_delay(r.distance_m);
            assert!(r.end_time_s >= earliest - 1e-12, "packet {}", r.packet_id);
            assert_eq!(r.accepted, r.bit_errors == 0);
        }
        assert_eq!(rx.windows.len(), rx.offered_bits.len());
        for (w, offered) in rx.windows.iter().zip(&rx.offered_bits) {
            assert!(w.accepted_bits <= *offered, "window at {}", w.start_s);
        }
    }
}

#[test]
fn event_log_is_ordered_and_ends_at_sim_end() {
    let stats = run(&scenario("baseline_dense.toml"), 3).unwrap();
    for pair in stats.events.windows(2) {
        assert!(pair[0].time_s <= pair[1].time_s);
        if pair[0].time_s == pair[1].time_s {
            assert!(pair[0].sequence < pair[1].sequence);
        }
    }
    let last = stats.events.last().unwrap();
    assert_eq!(last.kind, "sim_end");
    assert_eq!(last.time_s, 720.0);
}

#[test]
fn csv_row_count_matches_records_and_samples() {
    let stats = run(&scenario("baseline_dense.toml"), 7).unwrap();
    let rx = &stats.receivers[0];
    let mut buf = Vec::new();
    let rows = emit_csv(rx, &mut buf).unwrap();
    assert_eq!(rows, rx.records.len() + rx.samples.len());
    assert_eq!(rx.samples.len(), 720);
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), rows + 1);
}

#[test]
fn tracker_off_is_worse_than_tracker_on() {
    let on = run(&scenario("baseline_dense.toml"), 7).unwrap();
    let off = run(&scenario("baseline_dense_no_tracker.toml"), 7).unwrap();
    assert!(off.receivers[0].bit_errors > on.receivers[0].bit_errors);
}

#[test]
fn comparison_edge_cases() {
    let cfg = scenario("baseline.toml");
    let dir = variant_from_label(&cfg, "dir").unwrap();
    let single = compare_antennas(&cfg, std::slice::from_ref(&dir), 5).unwrap();
    assert_eq!(single.ranking, vec![0]);

    let twins = compare_antennas(&cfg, &[dir.clone(), dir], 5).unwrap();
    assert_eq!(twins.variants[0].series, twins.variants[1].series);

    assert!(matches!(variant_from_label(&cfg, "yagi"), Err(EngineError::UnknownVariant(_))));
    assert_eq!(variant_from_label(&cfg, "isotropic").unwrap().pattern, Pattern::Isotropic);
}

#[test]
fn invalid_scenario_refuses_to_run() {
    let mut cfg = scenario("baseline.toml");
    cfg.nodes.retain(|n| n.role != Role::Receiver);
    assert!(matches!(Scenario::build(&cfg), Err(EngineError::Invalid(v)) if !v.is_empty()));
}

#[test]
fn exponential_intervals_are_seeded() {
    let mut cfg = without_jammer(scenario("baseline_dense.toml"));
    cfg.nodes[0].generator.as_mut().unwrap().interval = IntervalModel::Exponential { mean_interval_s: 2.0 };
    let a = run(&cfg, 1).unwrap();
    let b = run(&cfg, 1).unwrap();
    assert_eq!(a, b);
    // 360 expected emissions; 6 standard deviations either side
    assert!((246..=474).contains(&a.sent_packets), "{}", a.sent_packets);
    let c = run(&cfg, 2).unwrap();
    assert_ne!(a.sent_packets, c.sent_packets);
}

/// Mean gain over the sphere by an equal-area Fibonacci lattice, independent
/// of the library's latitude-longitude quadrature.
fn fibonacci_mean_gain(pattern: &Pattern, n: usize) -> f64 {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let a = golden * i as f64;
            let (x, y) = (r * a.cos(), r * a.sin());
            gain(pattern, y.atan2(x), z.asin())
        })
        .sum::<f64>()
        / n as f64
}

#[test]
fn unit_mean_directional_integrates_to_one() {
    for (bw, floor) in [(0.35, 0.01), (0.6, 0.05), (1.0, 0.1)] {
        let pattern = Pattern::unit_mean_directional(bw, floor);
        let mean = fibonacci_mean_gain(&pattern, 400_000);
        assert!((mean - 1.0).abs() < 0.05, "bw {bw}, floor {floor}: mean {mean}");
        let library = apsim::antenna::mean_spherical_gain(&pattern);
        assert!((library - mean).abs() < 1e-3, "library {library} vs lattice {mean}");
    }
    assert!((fibonacci_mean_gain(&Pattern::Isotropic, 1000) - 1.0).abs() < 1e-12);
}
