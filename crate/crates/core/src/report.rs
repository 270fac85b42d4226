//! CSV, trace and summary writers.
//!
//! Floats are written in fixed scientific notation so identical runs give
//! byte-identical files. Cells that do not apply to a row are left empty.

use std::io::{self, Write};

use crate::engine::{Comparison, ReceiverSeries, StatsSeries};

pub const CSV_HEADER: &str =
    "time_s,kind,rx_power_w,snr_db,ber,bit_errors,accepted,throughput_bps";

fn sci(v: f64) -> String {
    format!("{v:.9e}")
}

struct Row {
    time_s: f64,
    rank: u8,
    cells: String,
}

/// Writes one receiver's time series: a `sample` row per power sample and a
/// `packet` row per completed reception, stamped with its end time. Returns
/// the number of data rows.
pub fn emit_csv<W: Write>(series: &ReceiverSeries, mut out: W) -> io::Result<usize> {
    let mut rows = Vec::with_capacity(series.samples.len() + series.records.len());
    for s in &series.samples {
        rows.push(Row {
            time_s: s.time_s,
            rank: 0,
            cells: format!("sample,{},,,,,{}", sci(s.rx_power_w), sci(s.throughput_bps)),
        });
    }
    for r in &series.records {
        rows.push(Row {
            time_s: r.end_time_s,
            rank: 1,
            cells: format!(
                "packet,{},{},{},{},{},",
                sci(r.rx_power_w),
                sci(r.snr_db),
                sci(r.ber),
                r.bit_errors,
                r.accepted
            ),
        });
    }
    rows.sort_by(|a, b| a.time_s.total_cmp(&b.time_s).then(a.rank.cmp(&b.rank)));
    writeln!(out, "{CSV_HEADER}")?;
    for row in &rows {
        writeln!(out, "{},{}", sci(row.time_s), row.cells)?;
    }
    Ok(rows.len())
}

/// Writes the per-stage trace of every reception in the run.
pub fn emit_trace<W: Write>(stats: &StatsSeries, mut out: W) -> io::Result<usize> {
    writeln!(out, "packet_id,rx_node,stage,value,unit")?;
    let mut n = 0;
    for rx in &stats.receivers {
        for record in &rx.records {
            for row in record.trace() {
                writeln!(out, "{},{},{},{},{}", row.packet_id, row.rx_node, row.stage, sci(row.value), row.unit)?;
                n += 1;
            }
        }
    }
    Ok(n)
}

fn receiver_summary<W: Write>(stats: &StatsSeries, rx: &ReceiverSeries, out: &mut W) -> io::Result<()> {
    writeln!(out, "receiver {}", rx.node_id)?;
    writeln!(out, "  receptions        {}", rx.records.len())?;
    writeln!(out, "  accepted          {}", rx.received)?;
    writeln!(out, "  rejected          {}", rx.rejected)?;
    writeln!(out, "  bit_errors        {}", rx.bit_errors)?;
    writeln!(out, "  accepted_bits     {}", rx.accepted_bits())?;
    writeln!(out, "  expected_errors   {}", sci(rx.expected_bit_errors()))?;
    if let Some(worst) = rx.max_ber() {
        writeln!(out, "  max_ber           {} at {} s (packet {})", sci(worst.ber), sci(worst.start_time_s), worst.packet_id)?;
    }
    let silent: Vec<String> = rx
        .windows
        .iter()
        .filter(|w| w.accepted_bits == 0)
        .map(|w| format!("[{}, {})", w.start_s, w.start_s + w.length_s))
        .collect();
    writeln!(out, "  zero_throughput   {}", if silent.is_empty() { "none".into() } else { silent.join(" ") })?;
    let mean = rx.accepted_bits() as f64 / stats.duration_s;
    writeln!(out, "  mean_throughput   {} bit/s", sci(mean))
}

/// Human-readable totals for a run.
pub fn emit_summary<W: Write>(stats: &StatsSeries, mut out: W) -> io::Result<()> {
    writeln!(out, "scenario          {}", stats.scenario)?;
    writeln!(out, "seed              {}", stats.seed)?;
    writeln!(out, "duration_s        {}", stats.duration_s)?;
    writeln!(out, "window_s          {}", stats.window_s)?;
    writeln!(out, "events            {}", stats.events.len())?;
    writeln!(out, "sent_packets      {}", stats.sent_packets)?;
    writeln!(out, "sent_bits         {}", stats.sent_bits)?;
    for rx in &stats.receivers {
        receiver_summary(stats, rx, &mut out)?;
    }
    Ok(())
}

/// Per-variant totals followed by the ranking, best first.
pub fn emit_comparison_summary<W: Write>(cmp: &Comparison, mut out: W) -> io::Result<()> {
    writeln!(out, "node              {}", cmp.node)?;
    writeln!(out, "seed              {}", cmp.seed)?;
    writeln!(out, "variant      bit_errors  accepted_bits  expected_errors")?;
    for v in &cmp.variants {
        writeln!(out, "{:<12} {:>10}  {:>13}  {}", v.label, v.bit_errors, v.accepted_bits, sci(v.expected_bit_errors))?;
    }
    writeln!(out, "ranking           {}", cmp.ranked_labels().join(" < "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{PowerSample, ThroughputWindow};

    fn series() -> ReceiverSeries {
        ReceiverSeries {
            node_id: "rx".into(),
            records: Vec::new(),
            samples: vec![
                PowerSample { time_s: 1.0, distance_m: 10.0, rx_power_w: 1e-9, throughput_bps: 0.0 },
                PowerSample { time_s: 0.0, distance_m: 12.0, rx_power_w: 2e-9, throughput_bps: 0.0 },
            ],
            windows: vec![ThroughputWindow { start_s: 0.0, length_s: 2.0, accepted_bits: 0 }],
            offered_bits: vec![0],
            received: 0,
            rejected: 0,
            bit_errors: 0,
        }
    }

    #[test]
    fn csv_rows_sorted_with_empty_cells() {
        let mut buf = Vec::new();
        assert_eq!(emit_csv(&series(), &mut buf).unwrap(), 2);
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "0.000000000e0,sample,2.000000000e-9,,,,,0.000000000e0");
        assert!(lines[2].starts_with("1.000000000e0,sample,"));
        let columns = CSV_HEADER.split(',').count();
        assert!(lines.iter().all(|l| l.split(',').count() == columns));
    }

    #[test]
    fn empty_series_is_header_only() {
        let mut empty = series();
        empty.samples.clear();
        let mut buf = Vec::new();
        assert_eq!(emit_csv(&empty, &mut buf).unwrap(), 0);
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn summary_reports_silent_windows() {
        let stats = StatsSeries {
            scenario: "s".into(),
            seed: 3,
            duration_s: 2.0,
            window_s: 2.0,
            sample_period_s: 1.0,
            sent_packets: 0,
            sent_bits: 0,
            receivers: vec![series()],
            events: Vec::new(),
        };
        let mut buf = Vec::new();
        emit_summary(&stats, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("zero_throughput   [0, 2)"), "{text}");
    }
}
