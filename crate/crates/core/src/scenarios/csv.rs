//! Versioned CSV output. Every file opens with `# bloch-drive csv v1` and a
//! `# time_unit:` line naming the scale applied to the `t` column.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::lattice::StateVector;
use crate::numeric::ObservableSeries;

pub const CSV_VERSION_LINE: &str = "# bloch-drive csv v1";

/// Unit of the `t` column: `t_written = t / scale`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeUnit {
    pub name: String,
    pub scale: f64,
}

impl TimeUnit {
    pub fn natural() -> Self {
        Self { name: "1/J".into(), scale: 1.0 }
    }

    pub fn named(name: &str, scale: f64) -> Self {
        Self { name: name.into(), scale }
    }
}

/// Float formatting with a fixed number of significant digits.
#[derive(Clone, Copy, Debug)]
pub struct Fmt(pub usize);

impl Fmt {
    pub fn f(&self, x: f64) -> String {
        format!("{:.*e}", self.0.saturating_sub(1), x)
    }
}

fn header(out: &mut String, unit: &TimeUnit, extra: &[String], columns: &str) {
    out.push_str(CSV_VERSION_LINE);
    out.push('\n');
    writeln!(out, "# time_unit: {} = {:.17e}", unit.name, unit.scale).unwrap();
    for e in extra {
        writeln!(out, "# {e}").unwrap();
    }
    out.push_str(columns);
    out.push('\n');
}

/// `t, j, probability` for every snapshot and site.
pub fn envelope_csv(times: &[f64], snapshots: &[StateVector], unit: &TimeUnit, fmt: Fmt, extra: &[String]) -> String {
    let mut s = String::new();
    header(&mut s, unit, extra, "t,j,probability");
    for (t, snap) in times.iter().zip(snapshots) {
        let tt = fmt.f(t / unit.scale);
        for (j, p) in snap.probabilities().iter().enumerate() {
            writeln!(s, "{tt},{j},{}", fmt.f(*p)).unwrap();
        }
    }
    s
}

pub fn observables_csv(series: &ObservableSeries, unit: &TimeUnit, fmt: Fmt, extra: &[String]) -> String {
    let mut s = String::new();
    header(&mut s, unit, extra, "t,center,width,k_center,v_g,norm,edge_occupancy");
    for i in 0..series.len() {
        writeln!(
            s,
            "{},{},{},{},{},{},{}",
            fmt.f(series.times[i] / unit.scale),
            fmt.f(series.center[i]),
            fmt.f(series.width[i]),
            fmt.f(series.central_momentum[i]),
            fmt.f(series.group_velocity[i]),
            fmt.f(series.norm[i]),
            fmt.f(series.edge_occupancy[i]),
        )
        .unwrap();
    }
    s
}

/// One row of analytic predictions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PredictedRow {
    pub t: f64,
    pub field: f64,
    pub impulse: f64,
    pub displacement: f64,
    /// NaN when no averaged trajectory applies.
    pub mean_displacement: f64,
    pub group_velocity: f64,
    pub k_center: f64,
}

pub fn predicted_csv(rows: &[PredictedRow], unit: &TimeUnit, fmt: Fmt, extra: &[String]) -> String {
    let mut s = String::new();
    header(&mut s, unit, extra, "t,field,impulse,displacement,mean_displacement,group_velocity,k_center");
    for r in rows {
        writeln!(
            s,
            "{},{},{},{},{},{},{}",
            fmt.f(r.t / unit.scale),
            fmt.f(r.field),
            fmt.f(r.impulse),
            fmt.f(r.displacement),
            fmt.f(r.mean_displacement),
            fmt.f(r.group_velocity),
            fmt.f(r.k_center),
        )
        .unwrap();
    }
    s
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}
