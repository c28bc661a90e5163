//! Report rendering: aligned human-readable tables, flat `key=value`
//! metric records, and CSV files for histograms and curves.
//!
//! Output is byte-stable: identical reports render to identical text.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{Curve, SessionReport};
use crate::link::Histogram;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Records,
}

fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.6}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    fmt_f64(v.unwrap_or(f64::NAN))
}

/// Metric lines in fixed order.
pub fn metrics_lines(r: &SessionReport) -> Vec<(String, String)> {
    let s = &r.stats;
    let mut lines: Vec<(String, String)> = vec![
        ("pulses_emitted".into(), s.pulses_emitted.to_string()),
        ("detections".into(), s.detections.to_string()),
        ("sifted_bits".into(), s.sifted_bits.to_string()),
        ("errors".into(), s.errors.to_string()),
        ("qber".into(), fmt_opt(s.qber)),
        ("qber_rectilinear".into(), fmt_opt(r.qber_rectilinear)),
        ("qber_diagonal".into(), fmt_opt(r.qber_diagonal)),
        ("raw_rate_bps".into(), fmt_f64(s.raw_rate_bps)),
        ("sifted_rate_bps".into(), fmt_f64(s.sifted_rate_bps)),
        ("secret_rate_bps".into(), fmt_f64(s.secret_rate_bps)),
        ("mu_effective".into(), fmt_f64(s.mu_effective)),
        (
            "unattributed_darks".into(),
            r.unattributed_darks.to_string(),
        ),
        ("double_clicks".into(), r.double_clicks.to_string()),
    ];
    for (i, name) in ["h", "v", "d", "a"].iter().enumerate() {
        lines.push((format!("counts_{name}"), r.detector_counts[i].to_string()));
    }
    for (i, name) in ["h", "v", "d", "a"].iter().enumerate() {
        lines.push((format!("mu_state_{name}"), fmt_f64(r.state_mu[i])));
    }
    lines
}

/// Renders a report as text in the requested format.
pub fn emit_report(r: &SessionReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Records => {
            let mut out = String::new();
            for (k, v) in metrics_lines(r) {
                let _ = writeln!(out, "{k}={v}");
            }
            out
        }
        ReportFormat::Table => {
            let s = &r.stats;
            let mut out = String::new();
            let _ = writeln!(out, "BB84 session summary");
            let _ = writeln!(out, "====================");
            let _ = writeln!(out, "pulses emitted      {:>14}", s.pulses_emitted);
            let _ = writeln!(out, "detections          {:>14}", s.detections);
            let _ = writeln!(out, "sifted bits         {:>14}", s.sifted_bits);
            let _ = writeln!(out, "errors              {:>14}", s.errors);
            let _ = writeln!(out, "QBER                {:>14}", fmt_opt(s.qber));
            let _ = writeln!(
                out,
                "  rectilinear       {:>14}",
                fmt_opt(r.qber_rectilinear)
            );
            let _ = writeln!(out, "  diagonal          {:>14}", fmt_opt(r.qber_diagonal));
            let _ = writeln!(out, "raw rate            {:>11.3} bps", s.raw_rate_bps);
            let _ = writeln!(out, "sifted rate         {:>11.3} bps", s.sifted_rate_bps);
            let _ = writeln!(out, "secret rate         {:>11.3} bps", s.secret_rate_bps);
            let _ = writeln!(out, "mu (signal)         {:>14}", fmt_f64(s.mu_effective));
            let _ = writeln!(out, "unattributed darks  {:>14}", r.unattributed_darks);
            let _ = writeln!(out, "double clicks       {:>14}", r.double_clicks);
            let _ = writeln!(
                out,
                "counts H/V/D/A      {:>14}",
                format!(
                    "{}/{}/{}/{}",
                    r.detector_counts[0],
                    r.detector_counts[1],
                    r.detector_counts[2],
                    r.detector_counts[3]
                )
            );
            let _ = writeln!(
                out,
                "state mu H/V/D/A    {:>14}",
                format!(
                    "{:.6}/{:.6}/{:.6}/{:.6}",
                    r.state_mu[0], r.state_mu[1], r.state_mu[2], r.state_mu[3]
                )
            );
            let _ = writeln!(out);
            let _ = writeln!(out, "configuration");
            let _ = writeln!(out, "-------------");
            out.push_str(&r.config.serialize());
            out
        }
    }
}

/// CSV body of a histogram, header `bin_start_ns,count`.
pub fn histogram_csv(h: &Histogram) -> String {
    let mut out = String::from("bin_start_ns,count\n");
    for (start, count) in h.rows() {
        let _ = writeln!(out, "{start},{count}");
    }
    out
}

/// CSV body of a characterization curve, header `x,value`.
pub fn curve_csv(c: &Curve) -> String {
    let mut out = String::from("x,value\n");
    for (x, v) in &c.points {
        let _ = writeln!(out, "{x},{v}");
    }
    out
}

/// CSV dump of detection events, header `detector,time_ns,pulse_index`;
/// dark counts leave the pulse index empty.
pub fn events_csv(r: &SessionReport) -> String {
    let mut out = String::from("detector,time_ns,pulse_index\n");
    for e in &r.events {
        let idx = e.pulse_index.map(|i| i.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{}", e.detector, e.time_ns, idx);
    }
    out
}

/// CSV dump of the sifted key, header `pulse_index,alice_bit,bob_bit`.
pub fn sifted_csv(r: &SessionReport) -> String {
    let mut out = String::from("pulse_index,alice_bit,bob_bit\n");
    for p in &r.sifted_key {
        let _ = writeln!(
            out,
            "{},{},{}",
            p.pulse_index, p.alice_bit as u8, p.bob_bit as u8
        );
    }
    out
}

/// Writes the report and its companion dumps into `dir`; returns the
/// paths written. Table format writes `report.txt`, records format
/// writes `metrics.kv`; both write `histogram_<name>.csv`, `events.csv`,
/// and `sifted_key.csv`.
pub fn write_report_files(
    r: &SessionReport,
    format: ReportFormat,
    dir: &Path,
) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let main = match format {
        ReportFormat::Table => dir.join("report.txt"),
        ReportFormat::Records => dir.join("metrics.kv"),
    };
    std::fs::write(&main, emit_report(r, format))?;
    written.push(main);
    for (name, hist) in &r.histograms {
        let path = dir.join(format!("histogram_{name}.csv"));
        std::fs::write(&path, histogram_csv(hist))?;
        written.push(path);
    }
    let events = dir.join("events.csv");
    std::fs::write(&events, events_csv(r))?;
    written.push(events);
    let sifted = dir.join("sifted_key.csv");
    std::fs::write(&sifted, sifted_csv(r))?;
    written.push(sifted);
    Ok(written)
}
