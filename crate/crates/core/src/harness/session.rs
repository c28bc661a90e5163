//! End-to-end BB84 session execution.
//!
//! Bursts are processed in order with per-burst derived RNG streams:
//! pattern → emission → channel → click probabilities → detection →
//! click squashing → sifting. Detector dead-time registers and the
//! per-detector dark-count processes persist across bursts.

use super::{config::PatternKind, HarnessError, ScenarioConfig};
use crate::devices::PulseSpec;
use crate::link::{
    channel_apply, click_probabilities, make_channel, set_compensation, DetectionEvent,
    DetectorBank, Histogram, ReceiverParams,
};
use crate::optics::{poisson_sample, IntensityClass, PolarizationState};
use crate::protocol::{
    alternating_pattern, random_pattern_offset, resolve_clicks, sift, AliceRecord, SessionStats,
    SiftedPair,
};
use crate::seed::{stream_rng, STREAM_BURST};

/// Everything measured in one session.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionReport {
    /// Configuration the session ran with (echoed for reproducibility).
    pub config: ScenarioConfig,
    pub stats: SessionStats,
    /// Accepted clicks per detector (H, V, D, A).
    pub detector_counts: [u64; 4],
    /// Accepted clicks that fell outside every coincidence gate.
    pub unattributed_darks: u64,
    /// Pulses on which more than one detector fired.
    pub double_clicks: u64,
    pub qber_rectilinear: Option<f64>,
    pub qber_diagonal: Option<f64>,
    /// Mean emitted µ per prepared state (signal class).
    pub state_mu: [f64; 4],
    /// Arrival-time histograms folded over the pulse period, keyed by
    /// detector (plus "all").
    pub histograms: Vec<(String, Histogram)>,
    /// Every accepted click, in processing order (absolute timestamps).
    pub events: Vec<DetectionEvent>,
    /// The sifted key (bit pairs keyed by pulse index).
    pub sifted_key: Vec<SiftedPair>,
}

/// Runs one deterministic BB84 session.
pub fn run_session(cfg: &ScenarioConfig) -> Result<SessionReport, HarnessError> {
    cfg.validate()?;
    let timing = cfg.build_timing();
    let transmitter = cfg
        .build_transmitter()
        .map_err(|source| HarnessError::Device {
            stage: "transmitter",
            source,
        })?;
    let spad = cfg.spad();
    let channel = make_channel(cfg.seed, cfg.channel.loss_db, cfg.channel.length_km);
    let receiver = set_compensation(
        &ReceiverParams::new(cfg.receiver.tbs_split, cfg.receiver.pbs_extinction_db),
        &channel,
        cfg.receiver.misalignment_rad,
    );
    // Start half a pulse period early: negative jitter may place the
    // first pulse before its nominal slot.
    let mut bank = DetectorBank::uniform(spad, cfg.seed, -0.5 * timing.pulse_period_ns());

    let ppb = timing.pulses_per_burst as u64;
    let total_pulses = cfg.timing.session_pulses;
    let num_bursts = total_pulses.div_ceil(ppb);
    let pulse_period = timing.pulse_period_ns();
    let half_gate = cfg.receiver.gate_window_ns / 2.0;

    let mut detector_counts = [0u64; 4];
    let mut unattributed_darks = 0u64;
    let mut double_clicks = 0u64;
    let mut detections = 0u64;
    let mut sifted_bits = 0u64;
    let mut errors = 0u64;
    let mut basis_tallies = [[0u64; 2]; 2]; // [basis][sifted, errors]
    let mut signal_mu_sum = 0.0f64;
    let mut signal_pulses = 0u64;
    let mut state_mu_sum = [0.0f64; 4];
    let mut state_counts = [0u64; 4];

    let mut hist_all = Histogram::folded(pulse_period, cfg.histogram.bin_ns.min(pulse_period));
    let mut hist_det: Vec<Histogram> = (0..4)
        .map(|_| Histogram::folded(pulse_period, cfg.histogram.bin_ns.min(pulse_period)))
        .collect();

    let mut all_events: Vec<DetectionEvent> = Vec::new();
    let mut sifted_key: Vec<SiftedPair> = Vec::new();
    let mut events: Vec<DetectionEvent> = Vec::new();
    for burst in 0..num_bursts {
        let first_index = burst * ppb;
        let n = (total_pulses - first_index).min(ppb) as usize;
        let mut rng = stream_rng(cfg.seed, STREAM_BURST, burst);
        let records: Vec<AliceRecord> = match cfg.protocol.pattern {
            PatternKind::Random => {
                random_pattern_offset(&mut rng, first_index, n, cfg.protocol.decoy_probability)
            }
            PatternKind::Alternating => alternating_pattern(&mut rng, first_index, n),
        };
        let specs: Vec<PulseSpec> = records
            .iter()
            .map(|r| PulseSpec {
                state: r.state(),
                class: r.intensity_class,
            })
            .collect();
        let mut pulses = transmitter.emit_burst(burst, &specs, &mut rng);
        // Detectors see pulses in arrival order, which jitter may permute.
        pulses.sort_by(|a, b| a.emit_time_ns.total_cmp(&b.emit_time_ns));

        events.clear();
        for pulse in &pulses {
            let emitted = pulse.emitted_mu().get();
            let s = specs[(pulse.index - first_index) as usize].state.index();
            if pulse.intensity_class == IntensityClass::Signal {
                signal_mu_sum += emitted;
                signal_pulses += 1;
                state_mu_sum[s] += emitted;
                state_counts[s] += 1;
            }
            let arrived = channel_apply(&channel, pulse);
            let probs = click_probabilities(&receiver, &arrived, &spad);
            bank.detect(
                &probs,
                pulse.emit_time_ns,
                pulse.index,
                &mut rng,
                &mut events,
            )
            .map_err(|source| HarnessError::Link {
                stage: "detector",
                source,
            })?;
        }
        // Close the burst window so its dark counts land in this buffer,
        // leaving headroom for the next burst's jittered first pulse.
        let flush_to = if burst + 1 == num_bursts {
            timing.burst_start_ns(burst + 1)
        } else {
            timing.burst_start_ns(burst + 1) - 0.5 * pulse_period
        };
        bank.flush_darks(flush_to, &mut events);

        // Attribute dark counts falling inside a coincidence gate to the
        // matching pulse slot; the rest stay unindexed.
        let burst_start = timing.burst_start_ns(burst);
        for e in events.iter_mut() {
            if e.pulse_index.is_none() {
                let rel = e.time_ns - burst_start;
                let slot = (rel / pulse_period).round();
                if slot >= 0.0
                    && (slot as usize) < n
                    && (rel - slot * pulse_period).abs() <= half_gate
                {
                    e.pulse_index = Some(first_index + slot as u64);
                }
            }
        }

        detections += events.len() as u64;
        let mut indexed = 0u64;
        let mut prev_index: Option<u64> = None;
        let mut sorted_indices: Vec<u64> = events.iter().filter_map(|e| e.pulse_index).collect();
        sorted_indices.sort_unstable();
        for idx in sorted_indices {
            if prev_index == Some(idx) {
                double_clicks += 1;
            }
            prev_index = Some(idx);
            indexed += 1;
        }
        unattributed_darks += events.len() as u64 - indexed;
        for e in events.iter() {
            detector_counts[e.detector.index()] += 1;
            let folded = (e.time_ns - burst_start) + pulse_period / 2.0;
            hist_all.add(folded);
            hist_det[e.detector.index()].add(folded);
        }

        all_events.extend_from_slice(&events);
        let bob = resolve_clicks(&events, &mut rng);
        let pairs = sift(&records, &bob).map_err(|source| HarnessError::Protocol {
            stage: "sift",
            source,
        })?;
        for p in &pairs {
            let basis = records[(p.pulse_index - first_index) as usize].basis;
            let b = match basis {
                crate::optics::Basis::Rectilinear => 0,
                crate::optics::Basis::Diagonal => 1,
            };
            basis_tallies[b][0] += 1;
            let is_error = p.alice_bit != p.bob_bit;
            if is_error {
                basis_tallies[b][1] += 1;
                errors += 1;
            }
        }
        sifted_bits += pairs.len() as u64;
        sifted_key.extend_from_slice(&pairs);
    }

    let duration_s = num_bursts as f64 * timing.burst_period_ns() * 1e-9;
    let mu_effective = if signal_pulses > 0 {
        signal_mu_sum / signal_pulses as f64
    } else {
        0.0
    };
    let stats = SessionStats::compute(
        total_pulses,
        detections,
        sifted_bits,
        errors,
        mu_effective,
        duration_s,
        timing.effective_pulse_rate_hz(),
        cfg.protocol.q,
        cfg.protocol.f,
    );

    let by_basis = |b: usize| {
        if basis_tallies[b][0] > 0 {
            Some(basis_tallies[b][1] as f64 / basis_tallies[b][0] as f64)
        } else {
            None
        }
    };
    let state_mu = std::array::from_fn(|i| {
        if state_counts[i] > 0 {
            state_mu_sum[i] / state_counts[i] as f64
        } else {
            0.0
        }
    });
    let mut histograms = vec![("all".to_string(), hist_all)];
    for (i, h) in hist_det.into_iter().enumerate() {
        let name = PolarizationState::ALL[i].to_string().to_lowercase();
        histograms.push((name, h));
    }

    Ok(SessionReport {
        config: cfg.clone(),
        stats,
        detector_counts,
        unattributed_darks,
        double_clicks,
        qber_rectilinear: by_basis(0),
        qber_diagonal: by_basis(1),
        state_mu,
        histograms,
        events: all_events,
        sifted_key,
    })
}

/// Per-class photon statistics measured by ideal photon counting at the
/// transmitter output.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityStats {
    pub signal_pulses: u64,
    pub decoy_pulses: u64,
    /// Mean photon number per class, estimated from the histograms.
    pub signal_mean_mu: f64,
    pub decoy_mean_mu: f64,
    /// Photon-number histograms (index = photon count).
    pub signal_histogram: Vec<u64>,
    pub decoy_histogram: Vec<u64>,
}

/// Emits `session_pulses` pulses and counts photons per intensity class
/// (Monte Carlo draw of each pulse's Poisson photon number).
pub fn intensity_statistics(cfg: &ScenarioConfig) -> Result<IntensityStats, HarnessError> {
    cfg.validate()?;
    let timing = cfg.build_timing();
    let transmitter = cfg
        .build_transmitter()
        .map_err(|source| HarnessError::Device {
            stage: "transmitter",
            source,
        })?;
    let ppb = timing.pulses_per_burst as u64;
    let total = cfg.timing.session_pulses;
    let num_bursts = total.div_ceil(ppb);
    let mut hist = [vec![0u64; 16], vec![0u64; 16]];
    let mut pulses_per_class = [0u64; 2];
    for burst in 0..num_bursts {
        let first_index = burst * ppb;
        let n = (total - first_index).min(ppb) as usize;
        let mut rng = stream_rng(cfg.seed, STREAM_BURST, burst);
        let records = match cfg.protocol.pattern {
            PatternKind::Random => {
                random_pattern_offset(&mut rng, first_index, n, cfg.protocol.decoy_probability)
            }
            PatternKind::Alternating => alternating_pattern(&mut rng, first_index, n),
        };
        let specs: Vec<PulseSpec> = records
            .iter()
            .map(|r| PulseSpec {
                state: r.state(),
                class: r.intensity_class,
            })
            .collect();
        for pulse in transmitter.emit_burst(burst, &specs, &mut rng) {
            let photons = poisson_sample(pulse.emitted_mu(), &mut rng) as usize;
            let class = match pulse.intensity_class {
                IntensityClass::Signal => 0,
                IntensityClass::Decoy => 1,
            };
            if photons >= hist[class].len() {
                hist[class].resize(photons + 1, 0);
            }
            hist[class][photons] += 1;
            pulses_per_class[class] += 1;
        }
    }
    let mean_of = |h: &[u64]| -> f64 {
        let total: u64 = h.iter().sum();
        if total == 0 {
            return 0.0;
        }
        let weighted: f64 = h
            .iter()
            .enumerate()
            .map(|(n, &c)| n as f64 * c as f64)
            .sum();
        weighted / total as f64
    };
    Ok(IntensityStats {
        signal_pulses: pulses_per_class[0],
        decoy_pulses: pulses_per_class[1],
        signal_mean_mu: mean_of(&hist[0]),
        decoy_mean_mu: mean_of(&hist[1]),
        signal_histogram: hist[0].clone(),
        decoy_histogram: hist[1].clone(),
    })
}
