//! Experiment orchestration: one entry point per configuration kind.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use singular_plap_core::analysis::{
    attach_norms, gradient_norm, lebesgue_norm, sup_norm, NormRequest, NormTable,
};
use singular_plap_core::mesh::{build_interval_mesh, build_radial_mesh, integrate};
use singular_plap_core::pde::{energy, first_eigenpair, solve_frozen};
use singular_plap_core::regularization::{
    cauchy_gradient_diagnostic, sweep_levels, truncate_source, ProblemSpec, Source, SweepReport,
};
use singular_plap_core::theory::{
    classify_regime, m_star, measure_moser_constants, moser_bound, q_star, sigma, MoserInputs,
    RegimeCase, RegimeInput, RegimeReport,
};
use singular_plap_core::{GridFunction, Mesh};

use crate::config::{echo, Domain, ExperimentConfig, Kind, SourceKind};
use crate::error::{CliError, Result};
use crate::report::{Flag, NormSeries, ReportBundle};

/// Pointwise gap above which two levels count as different in the Cauchy
/// measure diagnostic.
const CAUCHY_EPS: f64 = 1e-3;
/// Test powers probed when measuring the Moser embedding constant.
const MOSER_PROBE_LEVELS: usize = 3;
/// Relative size of the random perturbations of the energy probes.
const PROBE_AMPLITUDE: f64 = 1e-3;

/// Runs the experiment described by `cfg`.
///
/// Solver failures inside a sweep are recorded in
/// [`ReportBundle::failures`]; configuration errors are returned.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ReportBundle> {
    let mut bundle = ReportBundle {
        config: echo(cfg),
        ..Default::default()
    };
    match cfg.kind {
        Kind::Manufactured => manufactured(cfg, &mut bundle)?,
        Kind::Existence => existence(cfg, &mut bundle)?,
        Kind::CriticalM => critical_m(cfg, &mut bundle)?,
        Kind::Nonexistence => nonexistence(cfg, &mut bundle)?,
        Kind::Classify => {
            bundle.regimes.push(classify_regime(regime_input(cfg)?)?);
        }
        Kind::Bound => {
            let inputs = MoserInputs {
                mu: cfg.mu,
                c: cfg.c,
                norm_f_m: required(cfg.norm_f_m, "norm_f_m")?,
                norm_f_1: required(cfg.norm_f_1, "norm_f_1")?,
            };
            bundle.moser = Some(moser_bound(
                cfg.dimension,
                cfg.p,
                required(cfg.m, "m")?,
                inputs,
            )?);
        }
    }
    Ok(bundle)
}

fn required<T>(v: Option<T>, key: &str) -> Result<T> {
    v.ok_or_else(|| CliError::MissingField(key.to_string()))
}

fn regime_input(cfg: &ExperimentConfig) -> Result<RegimeInput> {
    Ok(RegimeInput {
        n: cfg.dimension,
        p: cfg.p,
        alpha: required(cfg.alpha, "alpha")?,
        m: required(cfg.m, "m")?,
    })
}

pub fn build_mesh(cfg: &ExperimentConfig, cells: usize) -> Result<Mesh> {
    Ok(match cfg.domain {
        Domain::Interval => build_interval_mesh(cells, cfg.extent)?,
        Domain::Ball => build_radial_mesh(cfg.dimension, cells, cfg.extent)?,
    })
}

fn source(cfg: &ExperimentConfig, alpha: f64) -> Result<Source> {
    let param = cfg.source_param;
    Ok(match cfg.source {
        Some(SourceKind::Constant) => Source::Constant(required(param, "source_param")?),
        Some(SourceKind::PowerCusp) => Source::PowerCusp(required(param, "source_param")?),
        Some(SourceKind::EigenfunctionPower) => {
            Source::EigenfunctionPower(param.unwrap_or(1.0 / (cfg.p - 1.0 + alpha)))
        }
        None => return Err(CliError::MissingField("source".into())),
    })
}

/// Summability assumed for the source when `m` is not configured.
fn default_m(cfg: &ExperimentConfig) -> Option<f64> {
    cfg.m.or(match cfg.source {
        Some(SourceKind::Constant | SourceKind::EigenfunctionPower) => Some(f64::INFINITY),
        _ => None,
    })
}

fn norm_request(cfg: &ExperimentConfig, mesh: &Mesh, alpha: f64, extra_q: &[f64]) -> NormRequest {
    let mut sobolev = vec![cfg.p];
    for &q in cfg.sobolev.iter().chain(extra_q) {
        if !sobolev.contains(&q) {
            sobolev.push(q);
        }
    }
    NormRequest {
        p: cfg.p,
        alpha,
        lebesgue: cfg.lebesgue.clone(),
        sobolev,
        negative_powers: cfg.negative_powers.clone(),
        margin: cfg.margin * mesh.extent(),
    }
}

fn sweep_failure(tag: &str, report: &SweepReport) -> Option<String> {
    report
        .failure
        .as_ref()
        .map(|f| format!("{tag}level n={}: {}", f.n, f.error))
}

/// `sup_k value_k / max_{j<k} value_j` over levels `n_k ≥ from`, or `None`
/// when no such level has a predecessor.
fn worst_growth(levels: &[(u64, f64)], from: u64) -> Option<f64> {
    let mut running = f64::NEG_INFINITY;
    let mut worst: Option<f64> = None;
    for (k, &(n, v)) in levels.iter().enumerate() {
        if k > 0 && n >= from {
            let g = v / running;
            worst = Some(worst.map_or(g, |w: f64| w.max(g)));
        }
        running = running.max(v);
    }
    worst
}

fn manufactured(cfg: &ExperimentConfig, bundle: &mut ReportBundle) -> Result<()> {
    let p = cfg.p;
    let k = std::f64::consts::PI / cfg.extent;
    // v = sin(kx) solves −Δ_p v + |v|^{p−2}v = g
    let exact = |x: f64| (k * x).sin();
    let g = |x: f64| {
        let (s, c) = (k * x).sin_cos();
        (p - 1.0) * k.powf(p) * c.abs().powf(p - 2.0) * s + s.abs().powf(p - 2.0) * s
    };
    let mut errors = Vec::with_capacity(cfg.cells.len());
    let mut last = None;
    for &cells in &cfg.cells {
        let mesh = build_mesh(cfg, cells)?;
        let v = solve_frozen(&mesh, &GridFunction::from_fn(&mesh, g), p, &cfg.solver)?;
        let err = mesh
            .nodes()
            .iter()
            .zip(v.values())
            .fold(0.0f64, |m, (x, u)| m.max((u - exact(*x)).abs()));
        bundle.record("linf_error", cells as f64, err);
        errors.push((cells as f64, err));
        last = Some((mesh, v));
    }
    let mut order = f64::INFINITY;
    for w in errors.windows(2) {
        let o = (w[0].1 / w[1].1).ln() / (w[1].0 / w[0].0).ln();
        bundle.record("observed_order", w[1].0, o);
        order = order.min(o);
    }
    bundle.flag(Flag::at_least("manufactured_order", order, cfg.min_order));

    // the discrete solution minimizes the discrete energy
    let (mesh, v) = last.expect("at least two mesh sizes");
    let gf = GridFunction::from_fn(&mesh, g);
    let e0 = energy(&mesh, &v, &gf, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let amplitude = PROBE_AMPLITUDE * sup_norm(&v);
    let mut least = f64::INFINITY;
    for probe in 0..cfg.probes {
        let mut w = v.clone();
        for (j, x) in w.values_mut().iter_mut().enumerate() {
            if !mesh.is_dirichlet(j) {
                *x += amplitude * rng.gen_range(-1.0..1.0);
            }
        }
        let gain = energy(&mesh, &w, &gf, p)? - e0;
        bundle.record("energy_gain", probe as f64, gain);
        least = least.min(gain);
    }
    if cfg.probes > 0 {
        bundle.flag(Flag::above("energy_minimality", least, 0.0));
    }
    Ok(())
}

fn existence(cfg: &ExperimentConfig, bundle: &mut ReportBundle) -> Result<()> {
    let alpha = required(cfg.alpha, "alpha")?;
    let p = cfg.p;
    let mesh = build_mesh(cfg, cfg.cells[0])?;
    let spec = ProblemSpec {
        p,
        alpha,
        source: source(cfg, alpha)?,
        schedule: cfg.schedule.clone(),
    };
    let f = spec.realize_source(&mesh, &cfg.solver)?;
    let mut report = sweep_levels(&mesh, &spec, &cfg.solver)?;
    attach_norms(&mesh, &mut report, &norm_request(cfg, &mesh, alpha, &[]))?;
    bundle.failures.extend(sweep_failure("", &report));
    let m = default_m(cfg);
    if let Some(m) = m {
        if let Ok(r) = classify_regime(RegimeInput {
            n: mesh.dimension(),
            p,
            alpha,
            m,
        }) {
            bundle.regimes.push(r);
        }
    }
    let table = report.norms.clone().unwrap_or_default();
    if report.levels.is_empty() {
        bundle.norms.push(NormSeries {
            tag: "existence".into(),
            table,
        });
        return Ok(());
    }

    if report.levels.len() > 1 {
        bundle.flag(Flag::at_most(
            "monotonicity_violation",
            report.monotonicity_violation,
            cfg.monotonicity_tol,
        ));
    }
    for (level, min) in report.levels.iter().zip(&report.interior_min) {
        bundle.record("interior_min", level.n as f64, *min);
        bundle.record(
            "fixed_point_residual",
            level.n as f64,
            level.fixed_point_residual,
        );
    }
    let least = report
        .interior_min
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    bundle.flag(Flag::above("interior_min_positive", least, 0.0));

    let w1p: Vec<(u64, f64)> = table
        .rows
        .iter()
        .map(|r| {
            (
                r.n,
                r.sobolev
                    .iter()
                    .find(|(q, _)| *q == p)
                    .map_or(f64::NAN, |x| x.1),
            )
        })
        .collect();
    if alpha == 1.0 {
        for (level, &(n, norm)) in report.levels.iter().zip(&w1p) {
            let mass = integrate(&mesh, &truncate_source(&f, n))?;
            bundle.record("w1p_pow_p", n as f64, norm.powf(p));
            bundle.record("source_mass", n as f64, mass);
            bundle.flag(Flag::at_most(
                format!("energy_bound_n{}", level.n),
                norm.powf(p),
                (1.0 + cfg.slack) * mass,
            ));
        }
        if let Some(m) = m {
            let n_dim = mesh.dimension() as f64;
            if n_dim > p && m > n_dim / p {
                moser_check(cfg, bundle, &mesh, &f, &report, m)?;
            }
        }
    } else if alpha < 1.0 {
        let critical = m_star(mesh.dimension(), p, alpha).ok();
        if let (Some(m), Some(ms)) = (m, critical) {
            if m >= ms {
                let fm = if m.is_infinite() {
                    sup_norm(&f)
                } else {
                    lebesgue_norm(&mesh, &f, m)?
                };
                for &(n, norm) in &w1p {
                    bundle.record("w1p_over_fm_pow_inv_p", n as f64, norm / fm.powf(1.0 / p));
                    bundle.record(
                        "w1p_over_fm_pow_inv_shifted",
                        n as f64,
                        norm / fm.powf(1.0 / (p - 1.0 + alpha)),
                    );
                }
                if let Some(g) = worst_growth(&w1p, cfg.bounded_from) {
                    bundle.flag(Flag::at_most("w1p_bounded", g, 1.0 + cfg.bounded_growth));
                }
            }
        }
    } else {
        let f1 = integrate(&mesh, &f)?;
        let bound = (1.0 + cfg.slack) * f1.powf(1.0 / p);
        for row in &table.rows {
            bundle.record("transformed_w1p", row.n as f64, row.transformed_w1p);
            bundle.flag(Flag::at_most(
                format!("transformed_bound_n{}", row.n),
                row.transformed_w1p,
                bound,
            ));
        }
        let interior: Vec<(u64, f64)> = table.rows.iter().map(|r| (r.n, r.w1p_interior)).collect();
        if let Some(g) = worst_growth(&interior, cfg.bounded_from) {
            bundle.flag(Flag::at_most(
                "interior_w1p_bounded",
                g,
                1.0 + cfg.bounded_growth,
            ));
        }
    }

    if let Some(first) = table.rows.first() {
        for &(r, v) in &first.negative_powers {
            bundle.record(format!("negative_power_integral_r{r}"), first.n as f64, v);
        }
    }
    if report.levels.len() > 1 {
        let cauchy = cauchy_gradient_diagnostic(&mesh, &report.levels, CAUCHY_EPS)?;
        for (pair, (gap, meas)) in report.levels.windows(2).zip(
            cauchy
                .l1_gradient_gaps
                .iter()
                .zip(&cauchy.exceedance_measures),
        ) {
            bundle.record("cauchy_l1_gradient_gap", pair[1].n as f64, *gap);
            bundle.record("cauchy_exceedance_measure", pair[1].n as f64, *meas);
        }
    }
    bundle.norms.push(NormSeries {
        tag: "existence".into(),
        table,
    });
    Ok(())
}

/// `sup u ≤ e^{d₀}` at the last converged level, with the embedding
/// constants measured on that level.
fn moser_check(
    cfg: &ExperimentConfig,
    bundle: &mut ReportBundle,
    mesh: &Mesh,
    f: &GridFunction,
    report: &SweepReport,
    m: f64,
) -> Result<()> {
    let Some(level) = report.levels.iter().rev().find(|l| l.converged) else {
        bundle
            .failures
            .push("moser check: no converged level".into());
        return Ok(());
    };
    let f_n = truncate_source(f, level.n);
    let norm_f_1 = integrate(mesh, &f_n)?;
    let norm_f_m = if m.is_infinite() {
        sup_norm(&f_n)
    } else {
        lebesgue_norm(mesh, &f_n, m)?
    };
    let (mu, c) = measure_moser_constants(mesh, &level.u, cfg.p, m, norm_f_1, MOSER_PROBE_LEVELS)?;
    let moser = moser_bound(
        mesh.dimension(),
        cfg.p,
        m,
        MoserInputs {
            mu,
            c,
            norm_f_m,
            norm_f_1,
        },
    )?;
    bundle.flag(Flag::at_most(
        format!("moser_sup_n{}", level.n),
        sup_norm(&level.u),
        moser.sup_bound,
    ));
    bundle.moser = Some(moser);
    Ok(())
}

struct CuspRun {
    gamma: f64,
    regime: Option<RegimeReport>,
    q: Option<f64>,
    report: SweepReport,
}

fn critical_m(cfg: &ExperimentConfig, bundle: &mut ReportBundle) -> Result<()> {
    let alpha = required(cfg.alpha, "alpha")?;
    let p = cfg.p;
    let mesh = build_mesh(cfg, cfg.cells[0])?;
    let n_dim = mesh.dimension();
    let ms = m_star(n_dim, p, alpha)?;
    bundle.record("m_star", 0.0, ms);
    let runs: Vec<Result<CuspRun>> = cfg
        .gammas
        .par_iter()
        .map(|&gamma| {
            // f = r^{−γ} lies in L^m exactly for m < N/γ
            let m = n_dim as f64 / gamma;
            let regime = classify_regime(RegimeInput {
                n: n_dim,
                p,
                alpha,
                m,
            })
            .ok();
            let q = q_star(n_dim, p, alpha, m)
                .ok()
                .filter(|q| *q >= 1.0 && q.is_finite());
            let spec = ProblemSpec {
                p,
                alpha,
                source: Source::PowerCusp(gamma),
                schedule: cfg.schedule.clone(),
            };
            let mut report = sweep_levels(&mesh, &spec, &cfg.solver)?;
            let extra: Vec<f64> = q.into_iter().collect();
            attach_norms(&mesh, &mut report, &norm_request(cfg, &mesh, alpha, &extra))?;
            Ok(CuspRun {
                gamma,
                regime,
                q,
                report,
            })
        })
        .collect();
    for run in runs {
        let CuspRun {
            gamma,
            regime,
            q,
            report,
        } = run?;
        let tag = format!("gamma{gamma}");
        bundle
            .failures
            .extend(sweep_failure(&format!("{tag} "), &report));
        let table = report.norms.unwrap_or_default();
        let m = n_dim as f64 / gamma;
        let in_w1p = m > ms;
        bundle.record("cusp_m", gamma, m);
        bundle.record("predicted_w1p", gamma, if in_w1p { 1.0 } else { 0.0 });
        if let Some(q) = q {
            bundle.record("q_star", gamma, q);
        }
        let column = |q: f64| -> Vec<(u64, f64)> {
            table
                .rows
                .iter()
                .map(|r| {
                    (
                        r.n,
                        r.sobolev
                            .iter()
                            .find(|(s, _)| *s == q)
                            .map_or(f64::NAN, |x| x.1),
                    )
                })
                .collect()
        };
        let w1p = column(p);
        if let Some(&(_, last)) = w1p.last() {
            bundle.record("final_w1p", gamma, last);
        }
        if w1p.len() > 1 {
            let (a, b) = (w1p[w1p.len() - 2].1, w1p[w1p.len() - 1].1);
            bundle.record("final_w1p_growth", gamma, b / a);
        }
        if let Some(q) = q {
            if let Some(&(_, last)) = column(q).last() {
                bundle.record("final_w1q_star", gamma, last);
            }
        }
        if in_w1p {
            if let Some(g) = worst_growth(&w1p, cfg.bounded_from) {
                bundle.flag(Flag::at_most(
                    format!("w1p_bounded_{tag}"),
                    g,
                    1.0 + cfg.bounded_growth,
                ));
            }
        }
        bundle.regimes.extend(regime);
        bundle.norms.push(NormSeries { tag, table });
    }
    Ok(())
}

/// Diagnostics of one sweep with source `Φ^{1/(p−1+α)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonexistenceRun {
    pub alpha: f64,
    pub regime: Option<RegimeReport>,
    /// `(n, ∫|∇u_n|^p)`.
    pub dirichlet: Vec<(u64, f64)>,
    /// `(n, max u_n/Φ^σ)`.
    pub envelope: Vec<(u64, f64)>,
    /// `(n, ∫ f u_n^{1−α})`.
    pub singular_mass: Vec<(u64, f64)>,
    pub norms: NormTable,
    pub failure: Option<String>,
}

impl NonexistenceRun {
    /// `(D_K − D_{K−1}) / D_K` at the last two levels.
    pub fn last_increment(&self) -> f64 {
        match self.dirichlet.as_slice() {
            [.., (_, a), (_, b)] => (b - a) / b,
            _ => f64::NAN,
        }
    }

    /// Smallest relative increment of `D_n` over the sweep.
    pub fn least_increment(&self) -> f64 {
        self.dirichlet
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / w[1].1)
            .fold(f64::INFINITY, f64::min)
    }

    /// Growth of the envelope ratio on the last step, rescaled to one
    /// quadrupling of `n`.
    pub fn envelope_growth(&self) -> f64 {
        match self.envelope.as_slice() {
            [.., (n0, a), (n1, b)] => {
                let steps = (*n1 as f64 / *n0 as f64).ln() / 4f64.ln();
                (b / a).powf(1.0 / steps) - 1.0
            }
            _ => f64::NAN,
        }
    }
}

/// Sweeps the regularized problem with `f = Φ^{1/(p−1+α)}`.
pub fn nonexistence_run(
    mesh: &Mesh,
    phi: &GridFunction,
    p: f64,
    alpha: f64,
    beta: Option<f64>,
    schedule: &[u64],
    cfg: &ExperimentConfig,
) -> Result<NonexistenceRun> {
    let beta = beta.unwrap_or(1.0 / (p - 1.0 + alpha));
    let f = phi.map(|v| v.max(0.0).powf(beta));
    let spec = ProblemSpec {
        p,
        alpha,
        source: Source::Nodal(f.clone()),
        schedule: schedule.to_vec(),
    };
    let mut report = sweep_levels(mesh, &spec, &cfg.solver)?;
    attach_norms(mesh, &mut report, &norm_request(cfg, mesh, alpha, &[]))?;
    let s = sigma(p, alpha);
    let mut run = NonexistenceRun {
        alpha,
        regime: classify_regime(RegimeInput {
            n: mesh.dimension(),
            p,
            alpha,
            m: f64::INFINITY,
        })
        .ok(),
        dirichlet: Vec::new(),
        envelope: Vec::new(),
        singular_mass: Vec::new(),
        norms: report.norms.take().unwrap_or_default(),
        failure: sweep_failure(&format!("alpha={alpha} "), &report),
    };
    for level in &report.levels {
        let u = &level.u;
        run.dirichlet
            .push((level.n, gradient_norm(mesh, u, p, 0.0)?.powf(p)));
        let env = (0..mesh.n_nodes())
            .filter(|&j| !mesh.is_dirichlet(j) && phi[j] > 0.0)
            .map(|j| u[j] / phi[j].powf(s))
            .fold(0.0f64, f64::max);
        run.envelope.push((level.n, env));
        let mass = f.zip_map(u, |f, u| {
            if u > 0.0 {
                f * u.powf(1.0 - alpha)
            } else {
                0.0
            }
        });
        run.singular_mass.push((level.n, integrate(mesh, &mass)?));
    }
    Ok(run)
}

fn record_run(bundle: &mut ReportBundle, prefix: &str, run: &NonexistenceRun) {
    for (name, series) in [
        ("dirichlet_energy", &run.dirichlet),
        ("envelope_ratio", &run.envelope),
        ("singular_mass", &run.singular_mass),
    ] {
        for &(n, v) in series {
            bundle.record(format!("{prefix}{name}"), n as f64, v);
        }
    }
    bundle.record(
        format!("{prefix}last_increment"),
        run.alpha,
        run.last_increment(),
    );
    if let Some(&(n, b)) = run.envelope.last() {
        bundle.record(format!("{prefix}envelope_constant"), n as f64, b);
    }
    bundle.failures.extend(run.failure.clone());
    bundle.regimes.extend(run.regime);
}

/// Divergence or saturation flag dictated by the regime of the run.
fn dichotomy_flag(prefix: &str, run: &NonexistenceRun, threshold: f64) -> Option<Flag> {
    let inc = run.last_increment();
    match run.regime.as_ref()?.case {
        RegimeCase::T4_3NotW1p => Some(Flag::at_least(
            format!("{prefix}divergence_last_increment"),
            inc,
            threshold,
        )),
        RegimeCase::T4_2UniqueW1p => Some(Flag::at_most(
            format!("{prefix}saturation_last_increment"),
            inc,
            threshold,
        )),
        _ => None,
    }
}

fn nonexistence(cfg: &ExperimentConfig, bundle: &mut ReportBundle) -> Result<()> {
    let alpha = required(cfg.alpha, "alpha")?;
    let mesh = build_mesh(cfg, cfg.cells[0])?;
    let phi = first_eigenpair(&mesh, cfg.p, &cfg.solver)?.phi;
    let primary = || {
        nonexistence_run(
            &mesh,
            &phi,
            cfg.p,
            alpha,
            cfg.source_param,
            &cfg.schedule,
            cfg,
        )
    };
    let (run, contrast) = match cfg.contrast_alpha {
        Some(a) => {
            let (x, y) = rayon::join(primary, || {
                nonexistence_run(&mesh, &phi, cfg.p, a, None, &cfg.schedule, cfg)
            });
            (x?, Some(y?))
        }
        None => (primary()?, None),
    };

    record_run(bundle, "", &run);
    if run.dirichlet.len() > 1 {
        bundle.flag(Flag::above(
            "dirichlet_energy_increasing",
            run.least_increment(),
            0.0,
        ));
        bundle
            .flags
            .extend(dichotomy_flag("", &run, cfg.divergence_threshold));
        bundle.flag(Flag::at_most(
            "envelope_growth_per_quadrupling",
            run.envelope_growth(),
            cfg.envelope_growth,
        ));
    }
    bundle.norms.push(NormSeries {
        tag: format!("alpha{alpha}"),
        table: run.norms.clone(),
    });
    if let Some(c) = contrast {
        record_run(bundle, "contrast_", &c);
        if c.dirichlet.len() > 1 && run.dirichlet.len() > 1 {
            bundle
                .flags
                .extend(dichotomy_flag("contrast_", &c, cfg.divergence_threshold));
            bundle.flag(Flag::at_least(
                "contrast_increment_ratio",
                run.last_increment() / c.last_increment(),
                cfg.contrast_ratio,
            ));
        }
        bundle.norms.push(NormSeries {
            tag: format!("alpha{}", c.alpha),
            table: c.norms,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_growth_skips_early_levels() {
        let s = [(1, 1.0), (2, 3.0), (16, 3.0), (32, 3.3)];
        assert!((worst_growth(&s, 16).unwrap() - 1.1).abs() < 1e-12);
        assert_eq!(worst_growth(&s[..2], 16), None);
    }
}
