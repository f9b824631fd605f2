use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// How a row's measurement is judged against its prediction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Tolerance {
    /// `|measured − predicted| ≤ value`
    Absolute(f64),
    /// `|measured − predicted| ≤ value·|predicted|`
    Relative(f64),
    /// `measured ≤ predicted`, where `predicted` is the bound.
    AtMost,
    /// `measured ≥ predicted`, where `predicted` is the bound.
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub quantity: String,
    pub predicted: f64,
    pub measured: f64,
    pub abs_error: f64,
    pub rel_error: f64,
    pub tolerance: Tolerance,
    pub pass: bool,
}

impl ReportRow {
    pub fn new(quantity: impl Into<String>, predicted: f64, measured: f64, tolerance: Tolerance) -> Self {
        let abs_error = (measured - predicted).abs();
        let rel_error = if predicted != 0.0 { abs_error / predicted.abs() } else { f64::INFINITY };
        let pass = match tolerance {
            Tolerance::Absolute(tol) => abs_error <= tol,
            Tolerance::Relative(tol) => abs_error <= tol * predicted.abs(),
            Tolerance::AtMost => measured <= predicted,
            Tolerance::AtLeast => measured >= predicted,
        };
        ReportRow {
            quantity: quantity.into(),
            predicted,
            measured,
            abs_error,
            rel_error,
            tolerance,
            pass,
        }
    }

    fn tolerance_text(&self) -> String {
        match self.tolerance {
            Tolerance::Absolute(t) => format!("abs {t:.3e}"),
            Tolerance::Relative(t) => format!("rel {t:.3e}"),
            Tolerance::AtMost => "<= bound".to_string(),
            Tolerance::AtLeast => ">= bound".to_string(),
        }
    }
}

/// Predicted-versus-measured table of one scenario run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub title: String,
    /// Free-form context lines (parameters, units, advisories).
    pub notes: Vec<String>,
    pub rows: Vec<ReportRow>,
}

impl ComparisonReport {
    pub fn new(title: impl Into<String>) -> Self {
        Self { title: title.into(), ..Self::default() }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    pub fn check(&mut self, quantity: &str, predicted: f64, measured: f64, tolerance: Tolerance) {
        self.push(ReportRow::new(quantity, predicted, measured, tolerance));
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn row(&self, quantity: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# {}", self.title).unwrap();
        for n in &self.notes {
            writeln!(s, "# {n}").unwrap();
        }
        let w = self.rows.iter().map(|r| r.quantity.len()).max().unwrap_or(8).max(8);
        writeln!(
            s,
            "{:<w$}  {:>24}  {:>24}  {:>10}  {:>10}  {:>12}  result",
            "quantity", "predicted", "measured", "abs_err", "rel_err", "tolerance"
        )
        .unwrap();
        for r in &self.rows {
            writeln!(
                s,
                "{:<w$}  {:>24.16e}  {:>24.16e}  {:>10.3e}  {:>10.3e}  {:>12}  {}",
                r.quantity,
                r.predicted,
                r.measured,
                r.abs_error,
                r.rel_error,
                r.tolerance_text(),
                if r.pass { "PASS" } else { "FAIL" }
            )
            .unwrap();
        }
        writeln!(s, "overall: {}", if self.passed() { "PASS" } else { "FAIL" }).unwrap();
        s
    }
}

impl std::fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}
