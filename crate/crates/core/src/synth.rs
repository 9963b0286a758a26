//! Deterministic synthetic cohorts obeying the volume scaling law.
//!
//! Each row draws, from one ChaCha8 stream seeded with `seed`:
//! the volume `lambda ~ U[volume_min, volume_max]`, then per analyte a
//! concentration `c ~ LogNormal(log_mean, log_sd)` and a noise term
//! `e ~ N(0, noise_cv)`. The amount is `lambda * c * (1 + e)` (clamped at 0);
//! analytes masked out of the signal skip the `lambda` factor.
//! Samplers are `rand_distr` 0.5 (`Uniform`, `LogNormal`, ziggurat `Normal`).

use alloc::vec::Vec;

use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{LogNormal, Normal};

use crate::error::{Error, Result};
use crate::panel::{AnalytePanel, Cohort, Sample};

/// Fixture panel: `(code, unit, typical concentration, log-scale spread)`.
/// Typical values are order-of-magnitude plausible serum levels; they are
/// test fixtures, not reference ranges.
pub const DEFAULT_PANEL: [(&str, &str, f64, f64); 17] = [
    ("Chol", "mmol/L", 5.0, 0.20),
    ("TBil", "umol/L", 12.0, 0.45),
    ("DBil", "umol/L", 3.0, 0.50),
    ("TP", "g/L", 70.0, 0.06),
    ("Alb", "g/L", 42.0, 0.08),
    ("Urea", "mmol/L", 5.5, 0.30),
    ("Crea", "umol/L", 80.0, 0.25),
    ("ALT", "U/L", 25.0, 0.50),
    ("AST", "U/L", 25.0, 0.40),
    ("Amy", "U/L", 60.0, 0.40),
    ("ALP", "U/L", 80.0, 0.30),
    ("K", "mmol/L", 4.3, 0.08),
    ("Ca", "mmol/L", 2.4, 0.05),
    ("Na", "mmol/L", 140.0, 0.015),
    ("Fe", "umol/L", 18.0, 0.35),
    ("Glu", "mmol/L", 5.2, 0.20),
    ("LDH", "U/L", 180.0, 0.25),
];

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub panel: AnalytePanel,
    pub concentration_log_mean: Vec<f64>,
    pub concentration_log_sd: Vec<f64>,
    /// Microliters.
    pub volume_min: f64,
    pub volume_max: f64,
    pub noise_cv: f64,
    pub n: usize,
    pub seed: u64,
    /// `false` marks an analyte generated independently of the volume.
    pub signal_mask: Option<Vec<bool>>,
}

impl SynthConfig {
    /// The 17-analyte fixture panel, volumes in `[20, 100]` uL, 2% noise.
    pub fn default_panel(n: usize, seed: u64) -> Self {
        let panel = AnalytePanel::with_units(
            &DEFAULT_PANEL
                .iter()
                .map(|(c, u, _, _)| (*c, *u))
                .collect::<Vec<_>>(),
        )
        .expect("fixture panel is valid");
        Self {
            panel,
            concentration_log_mean: DEFAULT_PANEL.iter().map(|p| libm::log(p.2)).collect(),
            concentration_log_sd: DEFAULT_PANEL.iter().map(|p| p.3).collect(),
            volume_min: 20.0,
            volume_max: 100.0,
            noise_cv: 0.02,
            n,
            seed,
            signal_mask: None,
        }
    }

    /// Restricts the configuration to the named analytes, in the order given.
    pub fn project<S: AsRef<str>>(mut self, codes: &[S]) -> Result<Self> {
        let (panel, idx) = self.panel.select(codes)?;
        self.panel = panel;
        self.concentration_log_mean = idx
            .iter()
            .map(|&i| self.concentration_log_mean[i])
            .collect();
        self.concentration_log_sd = idx.iter().map(|&i| self.concentration_log_sd[i]).collect();
        self.signal_mask = self
            .signal_mask
            .map(|m| idx.iter().map(|&i| m[i]).collect());
        Ok(self)
    }

    /// Marks exactly the named analytes as volume-carrying.
    pub fn with_signal<S: AsRef<str>>(mut self, codes: &[S]) -> Result<Self> {
        let mut mask = alloc::vec![false; self.panel.len()];
        for code in codes {
            let code = code.as_ref();
            let i = self
                .panel
                .index_of(code)
                .ok_or_else(|| Error::UnknownAnalyte(alloc::string::ToString::to_string(code)))?;
            mask[i] = true;
        }
        self.signal_mask = Some(mask);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.panel.len();
        if self.concentration_log_mean.len() != m || self.concentration_log_sd.len() != m {
            return Err(Error::InvalidConfig(
                "concentration parameters must match the panel",
            ));
        }
        if self.concentration_log_mean.iter().any(|v| !v.is_finite())
            || self
                .concentration_log_sd
                .iter()
                .any(|v| !(v.is_finite() && *v >= 0.0))
        {
            return Err(Error::InvalidConfig(
                "concentration parameters must be finite, spreads >= 0",
            ));
        }
        if !(self.volume_min.is_finite() && self.volume_min > 0.0) {
            return Err(Error::InvalidConfig("volume_min must be finite and > 0"));
        }
        if !(self.volume_max.is_finite() && self.volume_max >= self.volume_min) {
            return Err(Error::InvalidConfig(
                "volume_max must be finite and >= volume_min",
            ));
        }
        if !(self.noise_cv.is_finite() && self.noise_cv >= 0.0) {
            return Err(Error::InvalidConfig("noise_cv must be finite and >= 0"));
        }
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be >= 1"));
        }
        if self
            .signal_mask
            .as_ref()
            .is_some_and(|mask| mask.len() != m)
        {
            return Err(Error::InvalidConfig("signal mask must match the panel"));
        }
        Ok(())
    }
}

/// Amount of one analyte for a row.
pub(crate) fn amount(volume: f64, concentration: f64, noise: f64, carries_signal: bool) -> f64 {
    let base = if carries_signal {
        volume * concentration
    } else {
        concentration
    };
    (base * (1.0 + noise)).max(0.0)
}

/// Generates a labelled cohort; a pure function of `config`.
pub fn generate_cohort(config: &SynthConfig) -> Result<Cohort> {
    config.validate()?;
    let invalid = |_| Error::InvalidConfig("distribution parameters rejected");
    let volume = Uniform::new_inclusive(config.volume_min, config.volume_max)
        .map_err(|_| Error::InvalidConfig("volume range rejected"))?;
    let concentrations = config
        .concentration_log_mean
        .iter()
        .zip(&config.concentration_log_sd)
        .map(|(&mu, &sd)| LogNormal::new(mu, sd).map_err(invalid))
        .collect::<Result<Vec<_>>>()?;
    let noise = Normal::new(0.0, config.noise_cv).map_err(invalid)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let m = config.panel.len();
    let mut samples = Vec::with_capacity(config.n);
    let mut volumes = Vec::with_capacity(config.n);
    for _ in 0..config.n {
        let lambda = volume.sample(&mut rng);
        let mut values = Vec::with_capacity(m);
        for (i, dist) in concentrations.iter().enumerate() {
            let c = dist.sample(&mut rng);
            let e = noise.sample(&mut rng);
            let signal = config.signal_mask.as_ref().is_none_or(|mask| mask[i]);
            values.push(amount(lambda, c, e, signal));
        }
        samples.push(Sample::new(values)?);
        volumes.push(lambda);
    }
    Cohort::new(config.panel.clone(), samples, Some(volumes))
}

/// Multiplies every amount and every volume by `k > 0`.
pub fn scale_cohort(cohort: &Cohort, k: f64) -> Result<Cohort> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidScale(k));
    }
    let samples = cohort
        .samples()
        .iter()
        .map(|s| s.scaled(k))
        .collect::<Result<Vec<_>>>()?;
    let volumes = cohort.volumes().map(|v| v.iter().map(|l| l * k).collect());
    Cohort::new(cohort.panel().clone(), samples, volumes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_amounts_scale_with_volume() {
        for c in [0.3, 4.3, 140.0, 1.0 / 3.0] {
            for l in [20.0, 33.3, 77.7] {
                assert_eq!(amount(2.0 * l, c, 0.0, true), 2.0 * amount(l, c, 0.0, true));
            }
        }
        assert_eq!(amount(50.0, 4.0, 0.0, false), 4.0);
        assert_eq!(amount(50.0, 4.0, -1.5, true), 0.0);
    }

    #[test]
    fn fixture_panel_has_seventeen_analytes() {
        let cfg = SynthConfig::default_panel(10, 1);
        assert_eq!(cfg.panel.len(), 17);
        cfg.validate().unwrap();
    }

    #[test]
    fn invalid_configs() {
        let base = SynthConfig::default_panel(10, 1);
        let mut c = base.clone();
        c.volume_min = 0.0;
        assert!(generate_cohort(&c).is_err());
        let mut c = base.clone();
        c.volume_max = 10.0;
        assert!(generate_cohort(&c).is_err());
        let mut c = base.clone();
        c.noise_cv = -0.1;
        assert!(generate_cohort(&c).is_err());
        let mut c = base.clone();
        c.n = 0;
        assert!(generate_cohort(&c).is_err());
        let mut c = base;
        c.signal_mask = Some(alloc::vec![true; 3]);
        assert!(generate_cohort(&c).is_err());
    }

    #[test]
    fn scale_rejects_nonpositive() {
        let c = generate_cohort(&SynthConfig::default_panel(3, 0)).unwrap();
        assert_eq!(scale_cohort(&c, 0.0), Err(Error::InvalidScale(0.0)));
        assert_eq!(scale_cohort(&c, -2.0), Err(Error::InvalidScale(-2.0)));
        assert_eq!(scale_cohort(&c, 1.0).unwrap(), c);
    }
}
