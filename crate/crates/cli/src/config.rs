//! Flat `key = value` experiment configuration.
//!
//! One assignment per line, `#` starts a comment, lists are comma separated.
//! Unknown and repeated keys are rejected. `m = inf` denotes a bounded
//! source.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use singular_plap_core::pde::SolverOptions;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Manufactured,
    Existence,
    CriticalM,
    Nonexistence,
    Classify,
    Bound,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Manufactured => "manufactured",
            Kind::Existence => "existence",
            Kind::CriticalM => "critical_m",
            Kind::Nonexistence => "nonexistence",
            Kind::Classify => "classify",
            Kind::Bound => "bound",
        }
    }
}

impl FromStr for Kind {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        Ok(match s {
            "manufactured" => Kind::Manufactured,
            "existence" => Kind::Existence,
            "critical_m" => Kind::CriticalM,
            "nonexistence" => Kind::Nonexistence,
            "classify" => Kind::Classify,
            "bound" => Kind::Bound,
            _ => return Err(()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Interval,
    Ball,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceKind {
    Constant,
    PowerCusp,
    EigenfunctionPower,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub domain: Domain,
    /// `N`; 1 on intervals.
    pub dimension: usize,
    /// Interval length or ball radius; `π` for manufactured runs.
    pub extent: f64,
    pub cells: Vec<usize>,
    pub p: f64,
    pub alpha: Option<f64>,
    /// Summability of the source; `f64::INFINITY` for bounded data.
    pub m: Option<f64>,
    pub source: Option<SourceKind>,
    /// `c`, `γ` or `β` of the source; `β` defaults to `1/(p − 1 + α)`.
    pub source_param: Option<f64>,
    pub schedule: Vec<u64>,
    pub lebesgue: Vec<f64>,
    pub sobolev: Vec<f64>,
    pub negative_powers: Vec<f64>,
    /// Interior margin as a fraction of the extent.
    pub margin: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub solver: SolverOptions,
    /// Relative slack of the a-priori bound flags.
    pub slack: f64,
    pub monotonicity_tol: f64,
    /// Relative last increment separating divergence from saturation.
    pub divergence_threshold: f64,
    pub envelope_growth: f64,
    /// Allowed growth of a norm over its running maximum.
    pub bounded_growth: f64,
    /// First level at which boundedness is asserted.
    pub bounded_from: u64,
    pub min_order: f64,
    pub probes: usize,
    pub gammas: Vec<f64>,
    pub contrast_alpha: Option<f64>,
    pub contrast_ratio: f64,
    pub norm_f_m: Option<f64>,
    pub norm_f_1: Option<f64>,
    pub mu: f64,
    pub c: f64,
}

const KEYS: &[&str] = &[
    "kind",
    "domain",
    "N",
    "extent",
    "cells",
    "p",
    "alpha",
    "m",
    "source",
    "source_param",
    "schedule",
    "s",
    "q",
    "r",
    "margin",
    "seed",
    "out",
    "eps_grad",
    "eps_zero",
    "newton_tol",
    "max_newton_iters",
    "picard_tol",
    "max_picard_iters",
    "coupled_fallback",
    "continuation",
    "slack",
    "monotonicity_tol",
    "divergence_threshold",
    "envelope_growth",
    "bounded_growth",
    "bounded_from",
    "min_order",
    "probes",
    "gammas",
    "contrast_alpha",
    "contrast_ratio",
    "norm_f_m",
    "norm_f_1",
    "mu",
    "C",
];

struct Entry {
    line: usize,
    value: String,
}

struct Fields(BTreeMap<String, Entry>);

fn type_error(line: usize, field: &str, value: &str, expected: &'static str) -> CliError {
    CliError::TypeError {
        line,
        field: field.to_string(),
        value: value.to_string(),
        expected,
    }
}

fn parse_real(line: usize, field: &str, s: &str) -> Result<f64> {
    match s {
        "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        _ => s
            .parse::<f64>()
            .ok()
            .filter(|v| !v.is_nan())
            .ok_or_else(|| type_error(line, field, s, "real number")),
    }
}

impl Fields {
    fn raw(&self, key: &str) -> Option<&Entry> {
        self.0.get(key)
    }

    fn has(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    fn real(&self, key: &str) -> Result<Option<f64>> {
        self.raw(key)
            .map(|e| parse_real(e.line, key, &e.value))
            .transpose()
    }

    fn finite(&self, key: &str) -> Result<Option<f64>> {
        match self.raw(key) {
            Some(e) => {
                let v = parse_real(e.line, key, &e.value)?;
                if !v.is_finite() {
                    return Err(type_error(e.line, key, &e.value, "finite real number"));
                }
                Ok(Some(v))
            }
            None => Ok(None),
        }
    }

    fn integer<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.raw(key)
            .map(|e| {
                e.value
                    .parse::<T>()
                    .map_err(|_| type_error(e.line, key, &e.value, "nonnegative integer"))
            })
            .transpose()
    }

    fn flag(&self, key: &str) -> Result<Option<bool>> {
        self.raw(key)
            .map(|e| match e.value.as_str() {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(type_error(e.line, key, &e.value, "boolean")),
            })
            .transpose()
    }

    fn list<T>(
        &self,
        key: &str,
        item: impl Fn(usize, &str) -> Result<T>,
    ) -> Result<Option<Vec<T>>> {
        let Some(e) = self.raw(key) else {
            return Ok(None);
        };
        e.value
            .split(',')
            .map(|s| item(e.line, s.trim()))
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    fn reals(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.list(key, |line, s| parse_real(line, key, s))
    }

    fn integers<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        self.list(key, |line, s| {
            s.parse::<T>()
                .map_err(|_| type_error(line, key, s, "list of integers"))
        })
    }

    fn required<T>(&self, key: &str, v: Option<T>) -> Result<T> {
        v.ok_or_else(|| CliError::MissingField(key.to_string()))
    }
}

fn tokenize(text: &str) -> Result<Fields> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            return Err(CliError::Syntax {
                line,
                text: raw.trim().to_string(),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(CliError::Syntax {
                line,
                text: raw.trim().to_string(),
            });
        }
        if !KEYS.contains(&key) {
            return Err(CliError::UnknownKey {
                line,
                key: key.to_string(),
            });
        }
        if let Some(first) = map.get(key).map(|e: &Entry| e.line) {
            return Err(CliError::DuplicateKey {
                line,
                key: key.to_string(),
                first,
            });
        }
        map.insert(
            key.to_string(),
            Entry {
                line,
                value: value.to_string(),
            },
        );
    }
    Ok(Fields(map))
}

fn invalid(why: impl Into<String>) -> CliError {
    CliError::InvalidConfig(why.into())
}

/// Parses and validates configuration text.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let f = tokenize(text)?;
    let kind_entry = f
        .raw("kind")
        .ok_or_else(|| CliError::MissingField("kind".into()))?;
    let kind = kind_entry.value.parse::<Kind>().map_err(|_| {
        type_error(
            kind_entry.line,
            "kind",
            &kind_entry.value,
            "one of manufactured, existence, critical_m, nonexistence, classify, bound",
        )
    })?;

    let domain = match f.raw("domain") {
        None => Domain::Ball,
        Some(e) => match e.value.as_str() {
            "interval" => Domain::Interval,
            "ball" => Domain::Ball,
            _ => return Err(type_error(e.line, "domain", &e.value, "interval or ball")),
        },
    };
    let source = match f.raw("source") {
        None => None,
        Some(e) => Some(match e.value.as_str() {
            "constant" => SourceKind::Constant,
            "power_cusp" => SourceKind::PowerCusp,
            "eigenfunction_power" => SourceKind::EigenfunctionPower,
            _ => {
                return Err(type_error(
                    e.line,
                    "source",
                    &e.value,
                    "constant, power_cusp or eigenfunction_power",
                ))
            }
        }),
    };

    let defaults = SolverOptions::default();
    let solver = SolverOptions {
        eps_grad: f.finite("eps_grad")?.unwrap_or(defaults.eps_grad),
        eps_zero: f.finite("eps_zero")?.unwrap_or(defaults.eps_zero),
        newton_tol: f.finite("newton_tol")?.unwrap_or(defaults.newton_tol),
        max_newton_iters: f
            .integer("max_newton_iters")?
            .unwrap_or(defaults.max_newton_iters),
        picard_tol: f.finite("picard_tol")?.unwrap_or(defaults.picard_tol),
        max_picard_iters: f
            .integer("max_picard_iters")?
            .unwrap_or(defaults.max_picard_iters),
        coupled_fallback: f
            .flag("coupled_fallback")?
            .unwrap_or(defaults.coupled_fallback),
        continuation: f.flag("continuation")?.unwrap_or(defaults.continuation),
        ..defaults
    };
    solver.validate()?;

    let dimension = match (kind, domain) {
        (Kind::Classify | Kind::Bound, _) => f.required("N", f.integer("N")?)?,
        (_, Domain::Interval) => {
            if let Some(n) = f.integer::<usize>("N")? {
                if n != 1 {
                    return Err(invalid("intervals have N = 1"));
                }
            }
            1
        }
        (_, Domain::Ball) => f.required("N", f.integer("N")?)?,
    };
    let needs_p = f.required("p", f.finite("p")?)?;

    let cfg = ExperimentConfig {
        kind,
        domain,
        dimension,
        extent: f
            .finite("extent")?
            .unwrap_or(if kind == Kind::Manufactured {
                std::f64::consts::PI
            } else {
                1.0
            }),
        cells: f.integers("cells")?.unwrap_or_else(|| vec![512]),
        p: needs_p,
        alpha: f.finite("alpha")?,
        m: f.real("m")?,
        source,
        source_param: f.finite("source_param")?,
        schedule: f
            .integers("schedule")?
            .unwrap_or_else(|| vec![1, 2, 4, 8, 16, 32, 64, 128, 256]),
        lebesgue: f.reals("s")?.unwrap_or_default(),
        sobolev: f.reals("q")?.unwrap_or_default(),
        negative_powers: f.reals("r")?.unwrap_or_default(),
        margin: f
            .finite("margin")?
            .unwrap_or(singular_plap_core::analysis::INTERIOR_MARGIN),
        seed: f.integer("seed")?.unwrap_or(0),
        out: f.raw("out").map(|e| PathBuf::from(&e.value)),
        solver,
        slack: f.finite("slack")?.unwrap_or(0.02),
        monotonicity_tol: f.finite("monotonicity_tol")?.unwrap_or(1e-7),
        divergence_threshold: f.finite("divergence_threshold")?.unwrap_or(0.01),
        envelope_growth: f.finite("envelope_growth")?.unwrap_or(0.05),
        bounded_growth: f.finite("bounded_growth")?.unwrap_or(0.05),
        bounded_from: f.integer("bounded_from")?.unwrap_or(16),
        min_order: f.finite("min_order")?.unwrap_or(1.9),
        probes: f.integer("probes")?.unwrap_or(8),
        gammas: f.reals("gammas")?.unwrap_or_default(),
        contrast_alpha: f.finite("contrast_alpha")?,
        contrast_ratio: f.finite("contrast_ratio")?.unwrap_or(5.0),
        norm_f_m: f.finite("norm_f_m")?,
        norm_f_1: f.finite("norm_f_1")?,
        mu: f.finite("mu")?.unwrap_or(1.0),
        c: f.finite("C")?.unwrap_or(1.0),
    };
    check_kind(&cfg, &f)?;
    Ok(cfg)
}

fn check_kind(cfg: &ExperimentConfig, f: &Fields) -> Result<()> {
    let need = |key: &str| -> Result<()> {
        if f.has(key) {
            Ok(())
        } else {
            Err(CliError::MissingField(key.to_string()))
        }
    };
    if !(cfg.p > 1.0) {
        return Err(invalid("p must exceed 1"));
    }
    if !(cfg.extent > 0.0) || cfg.cells.iter().any(|&c| c < 2) || cfg.cells.is_empty() {
        return Err(invalid(
            "extent must be positive and every mesh needs at least two cells",
        ));
    }
    if !(0.0..0.5).contains(&cfg.margin) {
        return Err(invalid("margin must be a fraction in [0, 0.5)"));
    }
    if cfg.schedule.is_empty()
        || cfg.schedule[0] == 0
        || cfg.schedule.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(invalid(
            "schedule must be strictly increasing positive integers",
        ));
    }
    match cfg.kind {
        Kind::Classify => {
            need("alpha")?;
            need("m")?;
        }
        Kind::Bound => {
            need("m")?;
            need("norm_f_m")?;
            need("norm_f_1")?;
        }
        Kind::Manufactured => {
            if cfg.domain != Domain::Interval {
                return Err(invalid("manufactured runs use domain = interval"));
            }
            if cfg.p < 2.0 {
                return Err(invalid("the sine manufactured source needs p ≥ 2"));
            }
            if cfg.cells.len() < 2 {
                return Err(invalid("manufactured runs need at least two mesh sizes"));
            }
        }
        Kind::Existence => {
            need("alpha")?;
            need("source")?;
        }
        Kind::CriticalM => {
            need("alpha")?;
            need("gammas")?;
            let a = cfg.alpha.unwrap_or(0.0);
            if !(a > 0.0 && a < 1.0) {
                return Err(invalid("critical_m runs need 0 < alpha < 1"));
            }
        }
        Kind::Nonexistence => {
            need("alpha")?;
            need("source")?;
            if cfg.source != Some(SourceKind::EigenfunctionPower) {
                return Err(invalid(
                    "nonexistence runs need source = eigenfunction_power",
                ));
            }
        }
    }
    if let Some(a) = cfg.alpha {
        if !(a > 0.0) {
            return Err(invalid("alpha must be positive"));
        }
    }
    if matches!(cfg.kind, Kind::Existence) && cfg.source != Some(SourceKind::EigenfunctionPower) {
        need("source_param")?;
    }
    Ok(())
}

/// Reads and validates a configuration file.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_str(&text)
}

/// `key = value` lines echoing the effective configuration.
pub fn echo(cfg: &ExperimentConfig) -> Vec<(String, String)> {
    let list = |v: &[f64]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut e = vec![
        ("kind".to_string(), cfg.kind.name().to_string()),
        (
            "domain".into(),
            if cfg.domain == Domain::Interval {
                "interval"
            } else {
                "ball"
            }
            .into(),
        ),
        ("N".into(), cfg.dimension.to_string()),
        ("extent".into(), cfg.extent.to_string()),
        (
            "cells".into(),
            cfg.cells
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(","),
        ),
        ("p".into(), cfg.p.to_string()),
    ];
    if let Some(a) = cfg.alpha {
        e.push(("alpha".into(), a.to_string()));
    }
    if let Some(m) = cfg.m {
        e.push((
            "m".into(),
            if m.is_infinite() {
                "inf".into()
            } else {
                m.to_string()
            },
        ));
    }
    if let Some(s) = cfg.source {
        let name = match s {
            SourceKind::Constant => "constant",
            SourceKind::PowerCusp => "power_cusp",
            SourceKind::EigenfunctionPower => "eigenfunction_power",
        };
        e.push(("source".into(), name.into()));
    }
    if let Some(v) = cfg.source_param {
        e.push(("source_param".into(), v.to_string()));
    }
    e.push((
        "schedule".into(),
        cfg.schedule
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(","),
    ));
    for (k, v) in [
        ("s", &cfg.lebesgue),
        ("q", &cfg.sobolev),
        ("r", &cfg.negative_powers),
        ("gammas", &cfg.gammas),
    ] {
        if !v.is_empty() {
            e.push((k.into(), list(v)));
        }
    }
    e.push(("seed".into(), cfg.seed.to_string()));
    e
}
