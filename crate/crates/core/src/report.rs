//! CSV output and acceptance reports.
//!
//! Files start with `#`-prefixed `key: value` metadata lines, then a header
//! row, then data. Floats carry 12 significant digits; lines end in `\n`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::oracles::Probability;

pub const TOOL: &str = concat!("linload ", env!("CARGO_PKG_VERSION"));

/// Formats with 12 significant digits; plain notation for moderate
/// magnitudes, scientific otherwise.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-6..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.11e}")
    }
}

pub fn prob_to_f64(r: &Probability) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn fmt_prob(r: &Probability) -> String {
    fmt_num(prob_to_f64(r))
}

/// A CSV table with a metadata preamble.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvTable {
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        CsvTable {
            meta: vec![("tool".into(), TOOL.into())],
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.meta.push((key.into(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Header and data rows without the metadata block.
    pub fn body(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        // writes into a Vec cannot fail
        w.write_record(&self.header).expect("in-memory csv");
        for r in &self.rows {
            w.write_record(r).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv")
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}: {}", v.replace('\n', " "));
        }
        out.push_str(&self.body());
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.render()).map_err(Error::from)
    }
}

/// Strips `#` lines, leaving what must be byte-identical across reruns.
pub fn csv_body(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .fold(String::new(), |mut acc, l| {
            acc.push_str(l);
            acc.push('\n');
            acc
        })
}

/// Where a threshold comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    /// Exact statement to be verified with zero violations.
    Exact,
    /// Tolerance picked for this tool; the underlying claim is asymptotic.
    ArtifactChosen,
    /// Reported only; does not affect the overall verdict.
    Informational,
}

impl Threshold {
    fn label(self) -> &'static str {
        match self {
            Threshold::Exact => "exact",
            Threshold::ArtifactChosen => "artifact-chosen tolerance",
            Threshold::Informational => "informational",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub claim: String,
    pub observed: String,
    pub required: String,
    pub passed: bool,
    pub threshold: Threshold,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        claim: impl Into<String>,
        observed: impl Into<String>,
        required: impl Into<String>,
        passed: bool,
        threshold: Threshold,
    ) -> Self {
        Check {
            name: name.into(),
            claim: claim.into(),
            observed: observed.into(),
            required: required.into(),
            passed,
            threshold,
        }
    }

    /// A zero-violation check over `cases` instances.
    pub fn zero_violations(name: &str, claim: &str, cases: u64, violations: u64) -> Self {
        Check::new(
            name,
            claim,
            format!("{violations} violations in {cases} cases"),
            "0 violations",
            violations == 0 && cases > 0,
            Threshold::Exact,
        )
    }

    fn counts_toward_verdict(&self) -> bool {
        self.threshold != Threshold::Informational
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AcceptanceReport {
    pub experiment: String,
    pub checks: Vec<Check>,
}

impl AcceptanceReport {
    pub fn new(experiment: impl Into<String>) -> Self {
        AcceptanceReport {
            experiment: experiment.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Conjunction of every non-informational check.
    pub fn overall(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.counts_toward_verdict())
            .all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render_table(&self) -> String {
        let wn = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        let wo = self.checks.iter().map(|c| c.observed.len()).max().unwrap_or(8).max(8);
        let mut out = format!("acceptance report: {}\n", self.experiment);
        for c in &self.checks {
            let verdict = match (c.threshold, c.passed) {
                (Threshold::Informational, true) => "info",
                (Threshold::Informational, false) => "info*",
                (_, true) => "PASS",
                (_, false) => "FAIL",
            };
            let _ = writeln!(
                out,
                "  [{verdict:<5}] {:<wn$}  {:<wo$}  required {}  ({}; {})",
                c.name,
                c.observed,
                c.required,
                c.claim,
                c.threshold.label()
            );
        }
        let _ = writeln!(out, "overall: {}", if self.overall() { "PASS" } else { "FAIL" });
        out
    }

    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(["check", "claim", "observed", "required", "pass", "threshold"]);
        t.meta("experiment", &self.experiment);
        t.meta("overall", if self.overall() { "pass" } else { "fail" });
        for c in &self.checks {
            t.push(vec![
                c.name.clone(),
                c.claim.clone(),
                c.observed.clone(),
                c.required.clone(),
                if c.passed { "pass" } else { "fail" }.into(),
                c.threshold.label().into(),
            ]);
        }
        t
    }
}

/// `results.csv` -> `results.report.csv`.
pub fn report_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    out.with_file_name(format!("{stem}.report.csv"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(1.5), "1.5");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(2.0 / 3.0 * 1e-3), "0.000666666666667");
        assert_eq!(fmt_num(123456.0), "123456");
        assert_eq!(fmt_num(1.0 / 3.0 * 1e-9), "3.33333333333e-10");
        assert_eq!(fmt_prob(&Probability::new(1, 96)), "0.0104166666667");
    }

    #[test]
    fn csv_layout() {
        let mut t = CsvTable::new(["a", "b"]);
        t.meta("seed", 7);
        t.push(vec!["1".into(), "x, y".into()]);
        let text = t.render();
        assert!(text.starts_with("# tool: linload"));
        assert!(text.contains("# seed: 7\n"));
        assert!(text.ends_with("a,b\n1,\"x, y\"\n"));
        assert_eq!(csv_body(&text), "a,b\n1,\"x, y\"\n");
    }

    #[test]
    fn informational_checks_do_not_fail_report() {
        let mut r = AcceptanceReport::new("t");
        r.push(Check::zero_violations("ok", "c", 5, 0));
        r.push(Check::new("i", "c", "o", "r", false, Threshold::Informational));
        assert!(r.overall());
        r.push(Check::zero_violations("bad", "c", 5, 1));
        assert!(!r.overall());
        assert!(r.render_table().contains("[FAIL ] bad"));
        assert_eq!(r.to_csv().rows.len(), 3);
    }

    #[test]
    fn report_file_name() {
        assert_eq!(report_path(Path::new("out/fig.csv")), PathBuf::from("out/fig.report.csv"));
    }
}
