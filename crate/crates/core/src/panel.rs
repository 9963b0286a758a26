//! Analyte panels, measurement vectors and cohorts.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Ordered set of analyte codes. The order fixes the column layout of
/// samples, feature vectors and coefficients bound to the panel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalytePanel {
    analytes: Vec<String>,
    units: Vec<String>,
}

fn valid_code(code: &str) -> bool {
    !code.is_empty() && !code.chars().any(|c| matches!(c, '\t' | ',' | '\n' | '\r'))
}

impl AnalytePanel {
    /// Builds a panel with empty unit labels.
    pub fn new<S: AsRef<str>>(codes: &[S]) -> Result<Self> {
        let units = codes.iter().map(|_| String::new()).collect();
        Self::build(
            codes.iter().map(|c| c.as_ref().to_string()).collect(),
            units,
        )
    }

    /// Builds a panel from `(code, unit)` pairs.
    pub fn with_units<S: AsRef<str>, U: AsRef<str>>(entries: &[(S, U)]) -> Result<Self> {
        Self::build(
            entries
                .iter()
                .map(|(c, _)| c.as_ref().to_string())
                .collect(),
            entries
                .iter()
                .map(|(_, u)| u.as_ref().to_string())
                .collect(),
        )
    }

    fn build(analytes: Vec<String>, units: Vec<String>) -> Result<Self> {
        if analytes.is_empty() {
            return Err(Error::EmptyPanel);
        }
        for (i, code) in analytes.iter().enumerate() {
            if !valid_code(code) {
                return Err(Error::InvalidAnalyteCode(code.clone()));
            }
            if analytes[..i].contains(code) {
                return Err(Error::DuplicateAnalyte(code.clone()));
            }
        }
        for unit in &units {
            if unit.chars().any(|c| matches!(c, '\t' | '\n' | '\r')) {
                return Err(Error::InvalidConfig(
                    "unit labels may not contain tabs or line breaks",
                ));
            }
        }
        Ok(Self { analytes, units })
    }

    /// Number of analytes (`m`).
    pub fn len(&self) -> usize {
        self.analytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.analytes.is_empty()
    }

    pub fn analytes(&self) -> &[String] {
        &self.analytes
    }

    pub fn units(&self) -> &[String] {
        &self.units
    }

    pub fn index_of(&self, code: &str) -> Option<usize> {
        self.analytes.iter().position(|a| a == code)
    }

    /// Sub-panel with the given codes, in the order given.
    pub fn select<S: AsRef<str>>(&self, codes: &[S]) -> Result<(Self, Vec<usize>)> {
        let mut idx = Vec::with_capacity(codes.len());
        for code in codes {
            let code = code.as_ref();
            idx.push(
                self.index_of(code)
                    .ok_or_else(|| Error::UnknownAnalyte(code.to_string()))?,
            );
        }
        let panel = Self::build(
            idx.iter().map(|&i| self.analytes[i].clone()).collect(),
            idx.iter().map(|&i| self.units[i].clone()).collect(),
        )?;
        Ok((panel, idx))
    }
}

/// One measurement vector of analyte amounts (concentration times volume).
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    /// Rejects negative or non-finite amounts.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidValue { index, value });
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The sample multiplied by `k > 0`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidScale(k));
        }
        Sample::new(self.values.iter().map(|v| v * k).collect())
    }

    pub(crate) fn check_panel(&self, panel: &AnalytePanel) -> Result<()> {
        if self.values.len() != panel.len() {
            return Err(Error::PanelMismatch {
                expected: panel.len(),
                found: self.values.len(),
            });
        }
        Ok(())
    }
}

/// Samples over a common panel, optionally paired with true volumes.
#[derive(Debug, Clone, PartialEq)]
pub struct Cohort {
    panel: AnalytePanel,
    samples: Vec<Sample>,
    volumes: Option<Vec<f64>>,
}

impl Cohort {
    pub fn new(
        panel: AnalytePanel,
        samples: Vec<Sample>,
        volumes: Option<Vec<f64>>,
    ) -> Result<Self> {
        for s in &samples {
            s.check_panel(&panel)?;
        }
        if let Some(v) = &volumes {
            check_volumes(v, samples.len())?;
        }
        Ok(Self {
            panel,
            samples,
            volumes,
        })
    }

    pub fn panel(&self) -> &AnalytePanel {
        &self.panel
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn volumes(&self) -> Option<&[f64]> {
        self.volumes.as_deref()
    }

    pub(crate) fn require_volumes(&self) -> Result<&[f64]> {
        self.volumes.as_deref().ok_or(Error::MissingVolumes)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Replaces (or attaches) the volume column.
    pub fn with_volumes(mut self, volumes: Vec<f64>) -> Result<Self> {
        check_volumes(&volumes, self.samples.len())?;
        self.volumes = Some(volumes);
        Ok(self)
    }

    pub fn without_volumes(mut self) -> Self {
        self.volumes = None;
        self
    }

    /// Keeps only the named analyte columns, in the order given.
    pub fn project<S: AsRef<str>>(&self, codes: &[S]) -> Result<Self> {
        let (panel, idx) = self.panel.select(codes)?;
        let samples = self
            .samples
            .iter()
            .map(|s| Sample {
                values: idx.iter().map(|&i| s.values[i]).collect(),
            })
            .collect();
        Ok(Self {
            panel,
            samples,
            volumes: self.volumes.clone(),
        })
    }

    /// Rows at the given indices, in the order given.
    pub fn rows(&self, indices: &[usize]) -> Self {
        Self {
            panel: self.panel.clone(),
            samples: indices.iter().map(|&i| self.samples[i].clone()).collect(),
            volumes: self
                .volumes
                .as_ref()
                .map(|v| indices.iter().map(|&i| v[i]).collect()),
        }
    }
}

fn check_volumes(volumes: &[f64], n: usize) -> Result<()> {
    if volumes.len() != n {
        return Err(Error::VolumeCountMismatch {
            samples: n,
            volumes: volumes.len(),
        });
    }
    for (row, &value) in volumes.iter().enumerate() {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::InvalidVolume { row, value });
        }
    }
    Ok(())
}
