//! Versioned plain-text model files.
//!
//! One tab-separated record per line, in fixed order:
//!
//! ```text
//! dbsvol-model
//! format_version  1
//! solver          cholesky|spectral|manual
//! ridge           <f64>
//! rank_tolerance  <f64>
//! rank            <usize>
//! n_train         <usize>
//! analyte         <code>  <unit>          (m lines, panel order)
//! linear          <code>  <f64>           (m lines)
//! quadratic       <code>  <code>  <f64>   (m(m+1)/2 lines, i <= j lexicographic)
//! ```
//!
//! Reals are written with 17 significant digits (`{:.16e}`), which parse
//! back to the same bits, so save -> load -> save is byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use dbsvol_core::features::quadratic_pairs;
use dbsvol_core::{AnalytePanel, FitMeta, SolverPath, VolumeModel, FORMAT_VERSION};

use crate::error::{CliError, Result};

const MAGIC: &str = "dbsvol-model";

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn render_model(model: &VolumeModel) -> String {
    let meta = model.meta();
    let panel = model.panel();
    let codes = panel.analytes();
    let mut s = String::new();
    let _ = writeln!(s, "{MAGIC}");
    let _ = writeln!(s, "format_version\t{FORMAT_VERSION}");
    let _ = writeln!(s, "solver\t{}", meta.solver.as_str());
    let _ = writeln!(s, "ridge\t{}", real(meta.ridge));
    let _ = writeln!(s, "rank_tolerance\t{}", real(meta.rank_tolerance));
    let _ = writeln!(s, "rank\t{}", meta.rank);
    let _ = writeln!(s, "n_train\t{}", meta.n_train);
    for (code, unit) in codes.iter().zip(panel.units()) {
        let _ = writeln!(s, "analyte\t{code}\t{unit}");
    }
    for (code, a) in codes.iter().zip(model.alpha_linear()) {
        let _ = writeln!(s, "linear\t{code}\t{}", real(*a));
    }
    for ((i, j), a) in quadratic_pairs(codes.len()).zip(model.alpha_quadratic()) {
        let _ = writeln!(s, "quadratic\t{}\t{}\t{}", codes[i], codes[j], real(*a));
    }
    s
}

pub fn save_model(model: &VolumeModel, path: &Path) -> Result<()> {
    std::fs::write(path, render_model(model)).map_err(|e| CliError::io(path, e))
}

pub fn load_model(path: &Path) -> Result<VolumeModel> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_model(&text, path)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    path: &'a Path,
    last: u64,
}

impl<'a> Lines<'a> {
    fn err(&self, message: impl Into<String>) -> CliError {
        CliError::Parse {
            path: self.path.to_path_buf(),
            line: self.last,
            message: message.into(),
        }
    }

    fn peek_key(&self) -> Option<&'a str> {
        self.inner
            .clone()
            .next()
            .map(|(_, l)| l.split('\t').next().unwrap_or(""))
    }

    /// Next record, which must start with `key` and have `arity` fields after it.
    fn expect(&mut self, key: &str, arity: usize) -> Result<Vec<&'a str>> {
        let (n, line) = self
            .inner
            .next()
            .ok_or_else(|| self.err(format!("unexpected end of file, expected {key:?}")))?;
        self.last = n as u64 + 1;
        let mut fields = line.split('\t');
        let found = fields.next().unwrap_or("");
        if found != key {
            return Err(self.err(format!("expected {key:?}, found {found:?}")));
        }
        let rest: Vec<&str> = fields.collect();
        if rest.len() != arity {
            return Err(self.err(format!(
                "{key:?} takes {arity} fields, found {}",
                rest.len()
            )));
        }
        Ok(rest)
    }

    fn real(&self, s: &str) -> Result<f64> {
        let v: f64 = s
            .parse()
            .map_err(|_| self.err(format!("{s:?} is not a number")))?;
        if !v.is_finite() {
            return Err(self.err(format!("{s:?} is not finite")));
        }
        Ok(v)
    }

    fn count(&self, s: &str) -> Result<usize> {
        s.parse()
            .map_err(|_| self.err(format!("{s:?} is not a non-negative integer")))
    }
}

pub fn parse_model(text: &str, path: &Path) -> Result<VolumeModel> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        path,
        last: 0,
    };
    let (_, magic) = lines
        .inner
        .next()
        .ok_or_else(|| lines.err("empty model file"))?;
    lines.last = 1;
    if magic != MAGIC {
        return Err(lines.err(format!("not a model file (expected {MAGIC:?} header)")));
    }
    let version = lines.expect("format_version", 1)?[0];
    if version != FORMAT_VERSION.to_string() {
        return Err(lines.err(format!("unsupported format_version {version}")));
    }
    let solver = lines.expect("solver", 1)?[0];
    let solver =
        SolverPath::parse(solver).ok_or_else(|| lines.err(format!("unknown solver {solver:?}")))?;
    let field = lines.expect("ridge", 1)?[0];
    let ridge = lines.real(field)?;
    let field = lines.expect("rank_tolerance", 1)?[0];
    let rank_tolerance = lines.real(field)?;
    let field = lines.expect("rank", 1)?[0];
    let rank = lines.count(field)?;
    let field = lines.expect("n_train", 1)?[0];
    let n_train = lines.count(field)?;

    let mut entries: Vec<(String, String)> = Vec::new();
    while lines.peek_key() == Some("analyte") {
        let f = lines.expect("analyte", 2)?;
        entries.push((f[0].to_owned(), f[1].to_owned()));
    }
    let panel = AnalytePanel::with_units(&entries).map_err(|e| lines.err(e.to_string()))?;
    let codes = panel.analytes();
    let m = codes.len();

    let mut linear = Vec::with_capacity(m);
    for code in codes {
        if lines.peek_key() != Some("linear") {
            return Err(lines.err(format!(
                "coefficient-length mismatch: expected {m} linear coefficients"
            )));
        }
        let f = lines.expect("linear", 2)?;
        if f[0] != code {
            return Err(lines.err(format!(
                "linear coefficient for {:?} where {code:?} was expected",
                f[0]
            )));
        }
        linear.push(lines.real(f[1])?);
    }
    let mut quadratic = Vec::new();
    for (i, j) in quadratic_pairs(m) {
        if lines.peek_key() != Some("quadratic") {
            return Err(lines.err(format!(
                "coefficient-length mismatch: expected {} quadratic coefficients",
                m * (m + 1) / 2
            )));
        }
        let f = lines.expect("quadratic", 3)?;
        if f[0] != codes[i] || f[1] != codes[j] {
            return Err(lines.err(format!(
                "quadratic coefficient ({:?}, {:?}) where ({:?}, {:?}) was expected",
                f[0], f[1], codes[i], codes[j]
            )));
        }
        quadratic.push(lines.real(f[2])?);
    }
    if let Some((n, extra)) = lines.inner.next() {
        lines.last = n as u64 + 1;
        let key = extra.split('\t').next().unwrap_or("");
        return Err(lines.err(if key == "linear" || key == "quadratic" {
            "coefficient-length mismatch: too many coefficients".to_owned()
        } else {
            format!("unexpected record {key:?}")
        }));
    }

    let meta = FitMeta {
        ridge,
        rank_tolerance,
        solver,
        rank,
        n_train,
        format_version: FORMAT_VERSION,
    };
    VolumeModel::new(panel, linear, quadratic, meta).map_err(|e| lines.err(e.to_string()))
}
