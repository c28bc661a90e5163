//! Flat key-value scenario configuration.
//!
//! Format: one `section.key = value` per line, `#` starts a comment,
//! blank lines ignored. Unknown keys are rejected. An empty file yields
//! the all-defaults configuration, which is the demo-link preset.

use thiserror::Error;

use crate::devices::{
    Carver, MuSource, PolModParams, PulseShapeParams, RingParams, TimingConfig, Transmitter,
    VoaParams,
};
use crate::link::SpadParams;

/// Receiver misalignment of the demo preset, calibrated by bisection
/// (`calibrate-qber --target 0.054`) so the default 10-million-pulse
/// session at seed 1 sifts to a 5.4% QBER.
pub const DEMO_MISALIGNMENT_RAD: f64 = 0.20361328125;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("config line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}`: cannot parse `{value}` as {expected}")]
    TypeMismatch {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("key `{key}`: {reason}")]
    InvariantViolation { key: &'static str, reason: String },
}

/// Pulse carver selection for the transmitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CarverKind {
    /// External intensity modulator (demo-link configuration).
    External,
    /// On-chip microring carver.
    Ring,
}

/// How per-class mean photon numbers are specified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuMode {
    /// `transmitter.signal_mu` is the flux leaving Alice.
    Direct,
    /// Flux is derived from `transmitter.source_mu` through the VOA and
    /// output losses.
    Chain,
}

/// Intensity pattern driving the modulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    /// Decoy pulses drawn i.i.d. with `protocol.decoy_probability`.
    Random,
    /// Signal/decoy alternating every pulse (square-wave drive at half
    /// the repetition rate).
    Alternating,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingBlock {
    pub pulses_per_burst: u32,
    pub rep_rate_hz: f64,
    pub burst_clock_hz: f64,
    pub session_pulses: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingBlock {
    pub fsr_nm: f64,
    pub q_loaded: f64,
    pub center_wavelength_nm: f64,
    pub floor_db: f64,
    pub insertion_loss_db: f64,
    /// Static extinction the drive calibration must reproduce.
    pub static_er_db: f64,
    /// Voltage at which `static_er_db` is reached.
    pub static_er_volts: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseBlock {
    pub drive_width_ns: f64,
    pub fwhm_ns: f64,
    pub jitter_fwhm_ns: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoaBlock {
    pub stage_max_db: [f64; 4],
    pub target_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolModBlock {
    pub per_floor_db: f64,
    pub pdl_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmitterBlock {
    pub carver: CarverKind,
    pub carver_er_db: f64,
    pub ring: RingBlock,
    pub pulse: PulseBlock,
    pub voa: VoaBlock,
    pub polmod: PolModBlock,
    pub mu_mode: MuMode,
    pub signal_mu: f64,
    pub source_mu: f64,
    pub alice_output_loss_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelBlock {
    pub loss_db: f64,
    pub length_km: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverBlock {
    pub tbs_split: f64,
    pub pbs_extinction_db: f64,
    pub misalignment_rad: f64,
    /// Coincidence window around each pulse slot for attributing clicks,
    /// ns.
    pub gate_window_ns: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorBlock {
    pub efficiency: f64,
    pub dead_time_us: f64,
    pub dark_counts_per_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolBlock {
    /// Sifting factor (1/2 for an unbiased passive basis choice).
    pub q: f64,
    /// Error-correction inefficiency (1.0 = Shannon limit).
    pub f: f64,
    pub decoy_probability: f64,
    /// Decoy intensity as a fraction of the signal intensity.
    pub decoy_mu_ratio: f64,
    pub pattern: PatternKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBlock {
    pub bin_ns: f64,
}

/// Complete description of one simulated link.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub timing: TimingBlock,
    pub transmitter: TransmitterBlock,
    pub channel: ChannelBlock,
    pub receiver: ReceiverBlock,
    pub detector: DetectorBlock,
    pub protocol: ProtocolBlock,
    pub histogram: HistogramBlock,
}

impl Default for ScenarioConfig {
    /// The demo-link preset: µ = 0.024 set directly, 6.1 dB link, 20%
    /// efficient detectors with 15 µs dead time, 9.71 MHz effective
    /// pulse rate, misalignment calibrated to a 5.4% QBER.
    fn default() -> Self {
        Self {
            seed: 1,
            timing: TimingBlock {
                pulses_per_burst: 1000,
                rep_rate_hz: 1.0e7,
                burst_clock_hz: 9.71e3,
                session_pulses: 10_000_000,
            },
            transmitter: TransmitterBlock {
                carver: CarverKind::External,
                carver_er_db: 30.0,
                ring: RingBlock {
                    fsr_nm: 0.65,
                    q_loaded: 9.5e5,
                    center_wavelength_nm: 1550.0,
                    floor_db: -27.0,
                    insertion_loss_db: 0.0,
                    static_er_db: 25.6,
                    static_er_volts: 0.05,
                },
                pulse: PulseBlock {
                    drive_width_ns: 1.0,
                    fwhm_ns: 2.4,
                    jitter_fwhm_ns: 0.9,
                },
                voa: VoaBlock {
                    stage_max_db: [40.3, 44.0, 53.3, 46.4],
                    target_db: 27.0,
                },
                polmod: PolModBlock {
                    per_floor_db: 30.0,
                    pdl_db: 0.9,
                },
                mu_mode: MuMode::Direct,
                signal_mu: 0.024,
                source_mu: 38.0374462,
                alice_output_loss_db: 5.0,
            },
            channel: ChannelBlock {
                loss_db: 6.1,
                length_km: 5.0,
            },
            receiver: ReceiverBlock {
                tbs_split: 0.5,
                pbs_extinction_db: 30.0,
                misalignment_rad: DEMO_MISALIGNMENT_RAD,
                gate_window_ns: 5.0,
            },
            detector: DetectorBlock {
                efficiency: 0.2,
                dead_time_us: 15.0,
                dark_counts_per_s: 500.0,
            },
            protocol: ProtocolBlock {
                q: 0.5,
                f: 1.0,
                decoy_probability: 0.0,
                decoy_mu_ratio: 0.375,
                pattern: PatternKind::Random,
            },
            histogram: HistogramBlock { bin_ns: 1.0 },
        }
    }
}

impl ScenarioConfig {
    /// Zero-imperfection link: lossless, dark-free, unit-efficiency,
    /// ideal polarization optics, µ = 0.1.
    pub fn ideal() -> Self {
        let mut cfg = Self::default();
        cfg.timing.session_pulses = 100_000;
        cfg.transmitter.polmod = PolModBlock {
            per_floor_db: f64::INFINITY,
            pdl_db: 0.0,
        };
        cfg.transmitter.signal_mu = 0.1;
        cfg.channel.loss_db = 0.0;
        cfg.receiver.pbs_extinction_db = f64::INFINITY;
        cfg.receiver.misalignment_rad = 0.0;
        cfg.detector = DetectorBlock {
            efficiency: 1.0,
            dead_time_us: 0.0,
            dark_counts_per_s: 0.0,
        };
        cfg
    }

    /// Two-ring modulation test: 0.129/0.009 alternating intensities,
    /// photon counting straight off the transmitter.
    pub fn intensity_two_ring() -> Self {
        let mut cfg = Self::ideal();
        cfg.timing.session_pulses = 1_000_000;
        cfg.transmitter.signal_mu = 0.129;
        cfg.protocol.decoy_mu_ratio = 0.009 / 0.129;
        cfg.protocol.pattern = PatternKind::Alternating;
        cfg.detector.efficiency = 0.2;
        cfg
    }

    /// Full-chain modulation test (intensity modulator + VOA +
    /// polarization modulator): 0.094/0.029 alternating intensities.
    pub fn intensity_full_chain() -> Self {
        let mut cfg = Self::intensity_two_ring();
        cfg.transmitter.signal_mu = 0.094;
        cfg.protocol.decoy_mu_ratio = 0.029 / 0.094;
        cfg.transmitter.polmod = PolModBlock {
            per_floor_db: 30.0,
            pdl_db: 0.9,
        };
        cfg
    }

    /// Demo link with µ derived through the device chain (27 dB VOA plus
    /// 5 dB of output filtering) instead of set directly.
    pub fn device_chain_demo() -> Self {
        let mut cfg = Self::default();
        cfg.transmitter.mu_mode = MuMode::Chain;
        cfg
    }

    /// Parses a configuration file: defaults overlaid with the file's
    /// `section.key = value` lines, then validated.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Malformed {
                line: i + 1,
                text: raw.trim().to_string(),
            })?;
            cfg.apply(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sets one key from its text form.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "seed" => self.seed = parse_num::<u64>(key, value, "u64")?,
            "timing.pulses_per_burst" => {
                self.timing.pulses_per_burst = parse_num::<u32>(key, value, "u32")?
            }
            "timing.rep_rate_hz" => self.timing.rep_rate_hz = parse_f64(key, value)?,
            "timing.burst_clock_hz" => self.timing.burst_clock_hz = parse_f64(key, value)?,
            "timing.session_pulses" => {
                self.timing.session_pulses = parse_num::<u64>(key, value, "u64")?
            }
            "transmitter.carver" => {
                self.transmitter.carver = match value {
                    "external" => CarverKind::External,
                    "ring" => CarverKind::Ring,
                    _ => return Err(type_mismatch(key, value, "`external` or `ring`")),
                }
            }
            "transmitter.carver_er_db" => self.transmitter.carver_er_db = parse_f64(key, value)?,
            "transmitter.ring.fsr_nm" => self.transmitter.ring.fsr_nm = parse_f64(key, value)?,
            "transmitter.ring.q_loaded" => self.transmitter.ring.q_loaded = parse_f64(key, value)?,
            "transmitter.ring.center_wavelength_nm" => {
                self.transmitter.ring.center_wavelength_nm = parse_f64(key, value)?
            }
            "transmitter.ring.floor_db" => self.transmitter.ring.floor_db = parse_f64(key, value)?,
            "transmitter.ring.insertion_loss_db" => {
                self.transmitter.ring.insertion_loss_db = parse_f64(key, value)?
            }
            "transmitter.ring.static_er_db" => {
                self.transmitter.ring.static_er_db = parse_f64(key, value)?
            }
            "transmitter.ring.static_er_volts" => {
                self.transmitter.ring.static_er_volts = parse_f64(key, value)?
            }
            "transmitter.pulse.drive_width_ns" => {
                self.transmitter.pulse.drive_width_ns = parse_f64(key, value)?
            }
            "transmitter.pulse.fwhm_ns" => self.transmitter.pulse.fwhm_ns = parse_f64(key, value)?,
            "transmitter.pulse.jitter_fwhm_ns" => {
                self.transmitter.pulse.jitter_fwhm_ns = parse_f64(key, value)?
            }
            "transmitter.voa.stage_max_db" => {
                self.transmitter.voa.stage_max_db = parse_list4(key, value)?
            }
            "transmitter.voa.target_db" => self.transmitter.voa.target_db = parse_f64(key, value)?,
            "transmitter.polmod.per_floor_db" => {
                self.transmitter.polmod.per_floor_db = parse_f64(key, value)?
            }
            "transmitter.polmod.pdl_db" => self.transmitter.polmod.pdl_db = parse_f64(key, value)?,
            "transmitter.mu_mode" => {
                self.transmitter.mu_mode = match value {
                    "direct" => MuMode::Direct,
                    "chain" => MuMode::Chain,
                    _ => return Err(type_mismatch(key, value, "`direct` or `chain`")),
                }
            }
            "transmitter.signal_mu" => self.transmitter.signal_mu = parse_f64(key, value)?,
            "transmitter.source_mu" => self.transmitter.source_mu = parse_f64(key, value)?,
            "transmitter.alice_output_loss_db" => {
                self.transmitter.alice_output_loss_db = parse_f64(key, value)?
            }
            "channel.loss_db" => self.channel.loss_db = parse_f64(key, value)?,
            "channel.length_km" => self.channel.length_km = parse_f64(key, value)?,
            "receiver.tbs_split" => self.receiver.tbs_split = parse_f64(key, value)?,
            "receiver.pbs_extinction_db" => {
                self.receiver.pbs_extinction_db = parse_f64(key, value)?
            }
            "receiver.misalignment_rad" => self.receiver.misalignment_rad = parse_f64(key, value)?,
            "receiver.gate_window_ns" => self.receiver.gate_window_ns = parse_f64(key, value)?,
            "detector.efficiency" => self.detector.efficiency = parse_f64(key, value)?,
            "detector.dead_time_us" => self.detector.dead_time_us = parse_f64(key, value)?,
            "detector.dark_counts_per_s" => {
                self.detector.dark_counts_per_s = parse_f64(key, value)?
            }
            "protocol.q" => self.protocol.q = parse_f64(key, value)?,
            "protocol.f" => self.protocol.f = parse_f64(key, value)?,
            "protocol.decoy_probability" => {
                self.protocol.decoy_probability = parse_f64(key, value)?
            }
            "protocol.decoy_mu_ratio" => self.protocol.decoy_mu_ratio = parse_f64(key, value)?,
            "protocol.pattern" => {
                self.protocol.pattern = match value {
                    "random" => PatternKind::Random,
                    "alternating" => PatternKind::Alternating,
                    _ => return Err(type_mismatch(key, value, "`random` or `alternating`")),
                }
            }
            "histogram.bin_ns" => self.histogram.bin_ns = parse_f64(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Sets one numeric key (scenario sweeps). Enum- and list-valued
    /// keys are rejected as type mismatches.
    pub fn set_numeric_key(&mut self, key: &str, value: f64) -> Result<(), ConfigError> {
        match key {
            "transmitter.carver"
            | "transmitter.mu_mode"
            | "protocol.pattern"
            | "transmitter.voa.stage_max_db" => {
                Err(type_mismatch(key, &value.to_string(), "a non-numeric key"))
            }
            _ => self.apply(key, &value.to_string()),
        }
    }

    /// Serializes to the flat key-value format; `parse` of the output
    /// reproduces the configuration exactly.
    pub fn serialize(&self) -> String {
        let t = &self.transmitter;
        let lines: Vec<String> = vec![
            format!("seed = {}", self.seed),
            format!("timing.pulses_per_burst = {}", self.timing.pulses_per_burst),
            format!("timing.rep_rate_hz = {}", self.timing.rep_rate_hz),
            format!("timing.burst_clock_hz = {}", self.timing.burst_clock_hz),
            format!("timing.session_pulses = {}", self.timing.session_pulses),
            format!(
                "transmitter.carver = {}",
                match t.carver {
                    CarverKind::External => "external",
                    CarverKind::Ring => "ring",
                }
            ),
            format!("transmitter.carver_er_db = {}", t.carver_er_db),
            format!("transmitter.ring.fsr_nm = {}", t.ring.fsr_nm),
            format!("transmitter.ring.q_loaded = {}", t.ring.q_loaded),
            format!(
                "transmitter.ring.center_wavelength_nm = {}",
                t.ring.center_wavelength_nm
            ),
            format!("transmitter.ring.floor_db = {}", t.ring.floor_db),
            format!(
                "transmitter.ring.insertion_loss_db = {}",
                t.ring.insertion_loss_db
            ),
            format!("transmitter.ring.static_er_db = {}", t.ring.static_er_db),
            format!(
                "transmitter.ring.static_er_volts = {}",
                t.ring.static_er_volts
            ),
            format!(
                "transmitter.pulse.drive_width_ns = {}",
                t.pulse.drive_width_ns
            ),
            format!("transmitter.pulse.fwhm_ns = {}", t.pulse.fwhm_ns),
            format!(
                "transmitter.pulse.jitter_fwhm_ns = {}",
                t.pulse.jitter_fwhm_ns
            ),
            format!(
                "transmitter.voa.stage_max_db = {},{},{},{}",
                t.voa.stage_max_db[0],
                t.voa.stage_max_db[1],
                t.voa.stage_max_db[2],
                t.voa.stage_max_db[3]
            ),
            format!("transmitter.voa.target_db = {}", t.voa.target_db),
            format!(
                "transmitter.polmod.per_floor_db = {}",
                t.polmod.per_floor_db
            ),
            format!("transmitter.polmod.pdl_db = {}", t.polmod.pdl_db),
            format!(
                "transmitter.mu_mode = {}",
                match t.mu_mode {
                    MuMode::Direct => "direct",
                    MuMode::Chain => "chain",
                }
            ),
            format!("transmitter.signal_mu = {}", t.signal_mu),
            format!("transmitter.source_mu = {}", t.source_mu),
            format!(
                "transmitter.alice_output_loss_db = {}",
                t.alice_output_loss_db
            ),
            format!("channel.loss_db = {}", self.channel.loss_db),
            format!("channel.length_km = {}", self.channel.length_km),
            format!("receiver.tbs_split = {}", self.receiver.tbs_split),
            format!(
                "receiver.pbs_extinction_db = {}",
                self.receiver.pbs_extinction_db
            ),
            format!(
                "receiver.misalignment_rad = {}",
                self.receiver.misalignment_rad
            ),
            format!("receiver.gate_window_ns = {}", self.receiver.gate_window_ns),
            format!("detector.efficiency = {}", self.detector.efficiency),
            format!("detector.dead_time_us = {}", self.detector.dead_time_us),
            format!(
                "detector.dark_counts_per_s = {}",
                self.detector.dark_counts_per_s
            ),
            format!("protocol.q = {}", self.protocol.q),
            format!("protocol.f = {}", self.protocol.f),
            format!(
                "protocol.decoy_probability = {}",
                self.protocol.decoy_probability
            ),
            format!("protocol.decoy_mu_ratio = {}", self.protocol.decoy_mu_ratio),
            format!(
                "protocol.pattern = {}",
                match self.protocol.pattern {
                    PatternKind::Random => "random",
                    PatternKind::Alternating => "alternating",
                }
            ),
            format!("histogram.bin_ns = {}", self.histogram.bin_ns),
        ];
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }

    /// Checks every embedded invariant, naming the offending key.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |key: &'static str, reason: String| {
            Err(ConfigError::InvariantViolation { key, reason })
        };
        let t = &self.timing;
        if t.pulses_per_burst == 0 {
            return fail("timing.pulses_per_burst", "must be ≥ 1".into());
        }
        if t.rep_rate_hz <= 0.0 || t.burst_clock_hz <= 0.0 {
            return fail("timing.rep_rate_hz", "rates must be positive".into());
        }
        if t.pulses_per_burst as f64 / t.rep_rate_hz > 1.0 / t.burst_clock_hz {
            return fail(
                "timing.pulses_per_burst",
                "burst does not fit in one burst-clock period".into(),
            );
        }
        if t.session_pulses < 10_000 {
            return fail(
                "timing.session_pulses",
                "need ≥ 10000 pulses for meaningful statistics".into(),
            );
        }
        let x = &self.transmitter;
        if x.carver_er_db <= 0.0 {
            return fail("transmitter.carver_er_db", "must be positive".into());
        }
        if x.ring.fsr_nm <= 0.0 {
            return fail("transmitter.ring.fsr_nm", "must be positive".into());
        }
        if x.ring.q_loaded <= 0.0 {
            return fail("transmitter.ring.q_loaded", "must be positive".into());
        }
        if x.ring.floor_db > -20.0 {
            return fail(
                "transmitter.ring.floor_db",
                format!("must be ≤ -20 dB, got {}", x.ring.floor_db),
            );
        }
        if x.ring.insertion_loss_db < 0.0 {
            return fail("transmitter.ring.insertion_loss_db", "must be ≥ 0".into());
        }
        if x.ring.static_er_volts <= 0.0 || x.ring.static_er_db <= 0.0 {
            return fail(
                "transmitter.ring.static_er_db",
                "drive calibration needs positive ER and voltage".into(),
            );
        }
        if x.pulse.drive_width_ns <= 0.0 {
            return fail(
                "transmitter.pulse.drive_width_ns",
                "must be positive".into(),
            );
        }
        if x.pulse.fwhm_ns < x.pulse.drive_width_ns {
            return fail(
                "transmitter.pulse.fwhm_ns",
                "must be at least the drive width".into(),
            );
        }
        if x.pulse.jitter_fwhm_ns < 0.0 {
            return fail("transmitter.pulse.jitter_fwhm_ns", "must be ≥ 0".into());
        }
        for (i, &m) in x.voa.stage_max_db.iter().enumerate() {
            if m < 40.0 {
                return fail(
                    "transmitter.voa.stage_max_db",
                    format!("stage {} maximum {m} dB below the 40 dB target", i + 1),
                );
            }
        }
        let voa_sum: f64 = x.voa.stage_max_db.iter().sum();
        if !(0.0..=voa_sum).contains(&x.voa.target_db) {
            return fail(
                "transmitter.voa.target_db",
                format!("must be in [0, {voa_sum}] dB"),
            );
        }
        if x.polmod.per_floor_db < 30.0 {
            return fail("transmitter.polmod.per_floor_db", "must be ≥ 30 dB".into());
        }
        if x.polmod.pdl_db < 0.0 {
            return fail("transmitter.polmod.pdl_db", "must be ≥ 0".into());
        }
        if x.signal_mu < 0.0 || x.source_mu < 0.0 {
            return fail(
                "transmitter.signal_mu",
                "mean photon numbers must be ≥ 0".into(),
            );
        }
        if x.alice_output_loss_db < 0.0 {
            return fail("transmitter.alice_output_loss_db", "must be ≥ 0".into());
        }
        if self.channel.loss_db < 0.0 {
            return fail("channel.loss_db", "must be ≥ 0".into());
        }
        if self.channel.length_km < 0.0 {
            return fail("channel.length_km", "must be ≥ 0".into());
        }
        let r = &self.receiver;
        if !(0.0..=1.0).contains(&r.tbs_split) {
            return fail(
                "receiver.tbs_split",
                format!("must be in [0, 1], got {}", r.tbs_split),
            );
        }
        if r.pbs_extinction_db < 0.0 {
            return fail("receiver.pbs_extinction_db", "must be ≥ 0".into());
        }
        if r.gate_window_ns <= 0.0 {
            return fail("receiver.gate_window_ns", "must be positive".into());
        }
        let d = &self.detector;
        if !(0.0..=1.0).contains(&d.efficiency) {
            return fail(
                "detector.efficiency",
                format!("must be in [0, 1], got {}", d.efficiency),
            );
        }
        if d.dead_time_us < 0.0 {
            return fail("detector.dead_time_us", "must be ≥ 0".into());
        }
        if d.dark_counts_per_s < 0.0 {
            return fail("detector.dark_counts_per_s", "must be ≥ 0".into());
        }
        let p = &self.protocol;
        if !(p.q > 0.0 && p.q <= 1.0) {
            return fail("protocol.q", format!("must be in (0, 1], got {}", p.q));
        }
        if p.f < 1.0 {
            return fail(
                "protocol.f",
                "error-correction inefficiency must be ≥ 1".into(),
            );
        }
        if !(0.0..=1.0).contains(&p.decoy_probability) {
            return fail("protocol.decoy_probability", "must be in [0, 1]".into());
        }
        if !(0.0..=1.0).contains(&p.decoy_mu_ratio) {
            return fail("protocol.decoy_mu_ratio", "must be in [0, 1]".into());
        }
        if self.histogram.bin_ns <= 0.0 {
            return fail("histogram.bin_ns", "must be positive".into());
        }
        Ok(())
    }

    // ---- runtime builders ------------------------------------------------

    pub fn build_timing(&self) -> TimingConfig {
        TimingConfig {
            pulses_per_burst: self.timing.pulses_per_burst,
            rep_rate_hz: self.timing.rep_rate_hz,
            burst_clock_hz: self.timing.burst_clock_hz,
        }
    }

    pub fn build_ring(&self) -> RingParams {
        let r = &self.transmitter.ring;
        RingParams {
            fsr_nm: r.fsr_nm,
            q_loaded: r.q_loaded,
            center_wavelength_nm: r.center_wavelength_nm,
            floor_db: r.floor_db,
            volts_per_fsr: f64::INFINITY,
            insertion_loss_db: r.insertion_loss_db,
        }
        .with_calibrated_drive(r.static_er_db, r.static_er_volts)
    }

    pub fn build_voa(&self) -> VoaParams {
        VoaParams {
            stage_max_attenuation_db: self.transmitter.voa.stage_max_db,
            stage_phase: [0.0; 4],
        }
    }

    pub fn build_polmod(&self) -> PolModParams {
        PolModParams {
            theta: 0.0,
            delta: 0.0,
            pdl_db: self.transmitter.polmod.pdl_db,
            per_floor_db: self.transmitter.polmod.per_floor_db,
        }
    }

    pub fn build_pulse_shape(&self) -> PulseShapeParams {
        let p = &self.transmitter.pulse;
        PulseShapeParams::calibrated(p.drive_width_ns, p.fwhm_ns, p.jitter_fwhm_ns)
    }

    pub fn build_carver(&self) -> Carver {
        match self.transmitter.carver {
            CarverKind::External => Carver::IdealExternal {
                er_db: self.transmitter.carver_er_db,
            },
            CarverKind::Ring => Carver::Ring {
                dynamic_er_db: self.transmitter.carver_er_db,
            },
        }
    }

    pub fn build_transmitter(&self) -> Result<Transmitter, crate::devices::DeviceError> {
        let t = &self.transmitter;
        let mu_source = match t.mu_mode {
            MuMode::Direct => MuSource::Direct {
                signal_mu: t.signal_mu,
                decoy_mu: t.signal_mu * self.protocol.decoy_mu_ratio,
            },
            MuMode::Chain => MuSource::DeviceChain {
                source_mu: t.source_mu,
                voa_target_db: t.voa.target_db,
                output_loss_db: t.alice_output_loss_db,
                decoy_ratio: self.protocol.decoy_mu_ratio,
            },
        };
        Transmitter::new(
            self.build_timing(),
            self.build_carver(),
            self.build_pulse_shape(),
            self.build_voa(),
            self.build_polmod(),
            mu_source,
        )
    }

    pub fn spad(&self) -> SpadParams {
        SpadParams {
            efficiency: self.detector.efficiency,
            dead_time_us: self.detector.dead_time_us,
            dark_counts_per_s: self.detector.dark_counts_per_s,
        }
    }
}

fn type_mismatch(key: &str, value: &str, expected: &'static str) -> ConfigError {
    ConfigError::TypeMismatch {
        key: key.to_string(),
        value: value.to_string(),
        expected,
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .map_err(|_| type_mismatch(key, value, "a number"))
}

fn parse_num<T: std::str::FromStr>(
    key: &str,
    value: &str,
    expected: &'static str,
) -> Result<T, ConfigError> {
    value
        .parse::<T>()
        .map_err(|_| type_mismatch(key, value, expected))
}

fn parse_list4(key: &str, value: &str) -> Result<[f64; 4], ConfigError> {
    let parts: Vec<f64> = value
        .split(',')
        .map(|s| parse_f64(key, s.trim()))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|_| type_mismatch(key, value, "four comma-separated numbers"))
}
