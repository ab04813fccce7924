//! Report bundles and their CSV / text serialization.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use singular_plap_core::analysis::NormTable;
use singular_plap_core::theory::{MoserReport, RegimeReport};

use crate::error::{CliError, Result};

/// Direction of an asserted inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `measured ≤ bound`.
    AtMost,
    /// `measured ≥ bound`.
    AtLeast,
    /// `measured > bound`.
    Above,
}

/// One asserted inequality with its measured margin.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub relation: Relation,
    /// Signed margin relative to `|bound|` (absolute when the bound is 0);
    /// positive on the passing side.
    pub slack: f64,
    pub pass: bool,
}

impl Flag {
    fn new(name: impl Into<String>, measured: f64, bound: f64, relation: Relation) -> Self {
        // absolute margin against a zero bound
        let scale = if bound == 0.0 { 1.0 } else { bound.abs() };
        let (slack, pass) = match relation {
            Relation::AtMost => ((bound - measured) / scale, measured <= bound),
            Relation::AtLeast => ((measured - bound) / scale, measured >= bound),
            Relation::Above => ((measured - bound) / scale, measured > bound),
        };
        Flag {
            name: name.into(),
            measured,
            bound,
            relation,
            slack,
            pass,
        }
    }

    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(name, measured, bound, Relation::AtMost)
    }

    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(name, measured, bound, Relation::AtLeast)
    }

    pub fn above(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(name, measured, bound, Relation::Above)
    }

    /// `NAME measured=<x> bound=<y> slack=<z> PASS|FAIL`.
    pub fn summary_line(&self) -> String {
        format!(
            "{} measured={} bound={} slack={} {}",
            self.name,
            self.measured,
            self.bound,
            self.slack,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// A scalar observation `value` of `series` at abscissa `x` (a level, a
/// cell count or a cusp strength).
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub series: String,
    pub x: f64,
    pub value: f64,
}

/// A norm table; the first series is written to `norms.csv`, later ones to
/// `norms_<tag>.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSeries {
    pub tag: String,
    pub table: NormTable,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReportBundle {
    /// Effective configuration as `(key, value)` pairs.
    pub config: Vec<(String, String)>,
    pub norms: Vec<NormSeries>,
    pub regimes: Vec<RegimeReport>,
    pub moser: Option<MoserReport>,
    pub records: Vec<Record>,
    pub flags: Vec<Flag>,
    /// Provenance of levels or runs that failed; the bundle is partial when nonempty.
    pub failures: Vec<String>,
}

impl ReportBundle {
    pub fn record(&mut self, series: impl Into<String>, x: f64, value: f64) {
        self.records.push(Record {
            series: series.into(),
            x,
            value,
        });
    }

    pub fn flag(&mut self, flag: Flag) {
        self.flags.push(flag);
    }

    /// Values of one record series in insertion order.
    pub fn series(&self, name: &str) -> Vec<(f64, f64)> {
        self.records
            .iter()
            .filter(|r| r.series == name)
            .map(|r| (r.x, r.value))
            .collect()
    }

    pub fn find_flag(&self, name: &str) -> Option<&Flag> {
        self.flags.iter().find(|f| f.name == name)
    }

    /// True iff every flag passes and no run failed.
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.flags.iter().all(|f| f.pass)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.config {
            let _ = writeln!(s, "# {k} = {v}");
        }
        for f in &self.flags {
            let _ = writeln!(s, "{}", f.summary_line());
        }
        for f in &self.failures {
            let _ = writeln!(s, "FAILURE {f}");
        }
        s
    }
}

fn csv_number(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        v.to_string()
    }
}

pub fn norms_csv(table: &NormTable) -> String {
    let mut s = table.header().join(",");
    s.push('\n');
    for row in &table.rows {
        let mut cells = vec![row.n.to_string()];
        cells.extend(row.lebesgue.iter().map(|(_, v)| csv_number(*v)));
        cells.extend(row.sobolev.iter().map(|(_, v)| csv_number(*v)));
        cells.push(csv_number(row.w1p_interior));
        cells.push(csv_number(row.sup));
        cells.push(csv_number(row.transformed_w1p));
        cells.extend(row.negative_powers.iter().map(|(_, v)| csv_number(*v)));
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn regime_csv(regimes: &[RegimeReport]) -> String {
    let mut s = String::from("N,p,alpha,m,case,predicted_space,m_star,q_star,s_max,sigma\n");
    for r in regimes {
        let x = &r.input;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            x.n,
            csv_number(x.p),
            csv_number(x.alpha),
            csv_number(x.m),
            r.case.label(),
            r.predicted_space,
            csv_number(r.m_star),
            csv_number(r.q_star),
            csv_number(r.s_max),
            csv_number(r.sigma)
        );
    }
    s
}

/// Long format `quantity,k,value`; scalars leave `k` empty, sequences
/// count from 1.
pub fn moser_csv(m: &MoserReport) -> String {
    let mut s = String::from("quantity,k,value\n");
    let scalars = [
        ("delta", m.delta),
        ("b", m.b),
        ("d0", m.d0),
        ("sup_bound", m.sup_bound),
        ("d0_printed", m.d0_printed),
        ("mu", m.inputs.mu),
        ("C", m.inputs.c),
        ("norm_f_m", m.inputs.norm_f_m),
        ("norm_f_1", m.inputs.norm_f_1),
    ];
    for (name, v) in scalars {
        let _ = writeln!(s, "{name},,{}", csv_number(v));
    }
    let seqs: [(&str, &[f64]); 5] = [
        ("beta", &m.beta),
        ("beta_star", &m.beta_star),
        ("lambda", &m.lambda),
        ("F", &m.f),
        ("ratio", &m.ratio),
    ];
    for (name, seq) in seqs {
        for (k, v) in seq.iter().enumerate() {
            let _ = writeln!(s, "{name},{},{}", k + 1, csv_number(*v));
        }
    }
    s
}

pub fn records_csv(records: &[Record]) -> String {
    let mut s = String::from("series,x,value\n");
    for r in records {
        let _ = writeln!(
            s,
            "{},{},{}",
            r.series,
            csv_number(r.x),
            csv_number(r.value)
        );
    }
    s
}

fn write(path: PathBuf, text: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    fs::write(&path, text).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    written.push(path);
    Ok(())
}

/// Writes the bundle into `out_dir` and returns the written paths.
///
/// `summary.txt` is always written; every other file only when the bundle
/// holds the corresponding data.
pub fn emit_reports(bundle: &ReportBundle, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    for (i, series) in bundle.norms.iter().enumerate() {
        let name = if i == 0 {
            "norms.csv".to_string()
        } else {
            format!("norms_{}.csv", series.tag)
        };
        write(out_dir.join(name), &norms_csv(&series.table), &mut written)?;
    }
    if !bundle.regimes.is_empty() {
        write(
            out_dir.join("regime.csv"),
            &regime_csv(&bundle.regimes),
            &mut written,
        )?;
    }
    if let Some(m) = &bundle.moser {
        write(out_dir.join("moser.csv"), &moser_csv(m), &mut written)?;
    }
    if !bundle.records.is_empty() {
        write(
            out_dir.join("records.csv"),
            &records_csv(&bundle.records),
            &mut written,
        )?;
    }
    write(out_dir.join("summary.txt"), &bundle.summary(), &mut written)?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_slack_sign() {
        let f = Flag::at_most("x", 0.9, 1.0);
        assert!(f.pass && (f.slack - 0.1).abs() < 1e-15);
        let f = Flag::at_least("y", 0.5, 1.0);
        assert!(!f.pass && f.slack < 0.0);
        assert!(!Flag::at_most("nan", f64::NAN, 1.0).pass);
        assert!(!Flag::above("zero", 0.0, 0.0).pass);
        assert_eq!(
            Flag::at_most("bound", 1.0, 2.0).summary_line(),
            "bound measured=1 bound=2 slack=0.5 PASS"
        );
    }
}
