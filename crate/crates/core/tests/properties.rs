use proptest::prelude::*;
use singular_plap_core::analysis::{lebesgue_norm, negative_power_integral, sobolev_norm};
use singular_plap_core::mesh::{
    build_interval_mesh, build_radial_mesh, integrate, GridFunction, Mesh,
};
use singular_plap_core::pde::{residual, row_volumes, solve_frozen, SolverOptions};
use singular_plap_core::regularization::{
    alpha_one_work, singular_rhs, sweep_levels, truncate_source, ProblemSpec, Source,
};
use singular_plap_core::theory::{
    beta_closed_form, classify_regime, m_star, moser_sequences, q_star, RegimeCase, RegimeInput,
};

const CELLS: usize = 24;

fn mesh(radial: bool) -> Mesh {
    if radial {
        build_radial_mesh(3, CELLS, 1.0).unwrap()
    } else {
        build_interval_mesh(CELLS, 1.0).unwrap()
    }
}

fn with_boundary(mesh: &Mesh, v: Vec<f64>) -> GridFunction {
    let mut g = GridFunction::new(v);
    for j in 0..mesh.n_nodes() {
        if mesh.is_dirichlet(j) {
            g.values_mut()[j] = 0.0;
        }
    }
    g
}

fn nodal(lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(lo..hi, CELLS + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn operator_is_monotone(radial in any::<bool>(), p in 1.2f64..4.0, u in nodal(-1.0, 1.0), v in nodal(-1.0, 1.0)) {
        let m = mesh(radial);
        let (u, v) = (with_boundary(&m, u), with_boundary(&m, v));
        let opts = SolverOptions::default();
        let zero = GridFunction::zeros(&m);
        let ru = residual(&m, &u, &zero, p, &opts).unwrap();
        let rv = residual(&m, &v, &zero, p, &opts).unwrap();
        let w = row_volumes(&m);
        let pairing: f64 = (0..m.n_nodes())
            .filter(|&j| !m.is_dirichlet(j))
            .map(|j| w[j] * (ru[j] - rv[j]) * (u[j] - v[j]))
            .sum();
        prop_assert!(pairing >= -1e-12, "{pairing}");
    }

    #[test]
    fn truncation_orders_sources(f in nodal(0.0, 50.0), n in 1u64..40) {
        let f = GridFunction::new(f);
        let a = truncate_source(&f, n);
        let b = truncate_source(&f, n + 1);
        for j in 0..f.len() {
            prop_assert!(a[j] <= b[j] && b[j] <= f[j]);
        }
    }

    #[test]
    fn singular_rhs_is_antitone(f in nodal(0.0, 5.0), w in nodal(0.0, 3.0), bump in nodal(0.0, 1.0),
                                n in 1u64..100, alpha in 0.0f64..4.0) {
        let f = GridFunction::new(f);
        let w1 = GridFunction::new(w);
        let w2 = w1.zip_map(&GridFunction::new(bump), |a, b| a + b);
        let r1 = singular_rhs(&f, &w1, n, alpha);
        let r2 = singular_rhs(&f, &w2, n, alpha);
        for j in 0..f.len() {
            prop_assert!(r1[j] >= r2[j]);
            prop_assert!(r1[j].is_finite());
        }
    }

    #[test]
    fn hoelder_consistency(radial in any::<bool>(), u in nodal(-2.0, 2.0), s1 in 1.0f64..6.0, gap in 0.0f64..6.0) {
        let m = mesh(radial);
        let u = GridFunction::new(u);
        let s2 = s1 + gap;
        let lhs = lebesgue_norm(&m, &u, s1).unwrap();
        // the trapezoidal rule integrates 1 exactly only on intervals
        let measure = integrate(&m, &GridFunction::constant(&m, 1.0)).unwrap();
        let rhs = lebesgue_norm(&m, &u, s2).unwrap() * measure.powf(1.0 / s1 - 1.0 / s2);
        prop_assert!(lhs <= rhs + 1e-10, "{lhs} > {rhs}");
    }

    #[test]
    fn interior_norm_is_smaller(radial in any::<bool>(), u in nodal(-2.0, 2.0), q in 1.0f64..5.0, margin in 0.0f64..0.45) {
        let m = mesh(radial);
        let u = GridFunction::new(u);
        let inner = sobolev_norm(&m, &u, q, margin).unwrap();
        let whole = sobolev_norm(&m, &u, q, 0.0).unwrap();
        prop_assert!(inner <= whole * (1.0 + 1e-14));
    }

    #[test]
    fn negative_power_is_antitone(radial in any::<bool>(), u in nodal(0.01, 1.0), bump in nodal(0.0, 1.0), r in 0.1f64..2.5) {
        let m = mesh(radial);
        let u = with_boundary(&m, u);
        let v = with_boundary(&m, u.zip_map(&GridFunction::new(bump), |a, b| a + b).into_values());
        let a = negative_power_integral(&m, &u, r).unwrap();
        let b = negative_power_integral(&m, &v, r).unwrap();
        prop_assert!(a >= b * (1.0 - 1e-12), "{a} < {b}");
    }

    #[test]
    fn m_star_exceeds_one(n in 2usize..12, pf in 0.0f64..1.0, alpha in 0.001f64..0.999) {
        let p = 1.0 + 1e-3 + pf * (n as f64 - 1.0 - 2e-3);
        prop_assert!(m_star(n, p, alpha).unwrap() > 1.0);
    }

    #[test]
    fn q_star_sign_follows_m_star(n in 2usize..12, pf in 0.0f64..1.0, alpha in 0.01f64..0.99, m in 1.0f64..4.0) {
        let p = 1.0 + 1e-3 + pf * (n as f64 - 1.0 - 2e-3);
        let ms = m_star(n, p, alpha).unwrap();
        if let Ok(q) = q_star(n, p, alpha, m) {
            let d = m - ms;
            if d.abs() > 1e-9 {
                prop_assert_eq!((q - p).signum(), d.signum());
            }
        }
    }

    #[test]
    fn classifier_is_total(n in 1usize..8, p in 1.01f64..9.0, alpha in prop::sample::select(vec![0.05, 0.3, 0.5, 0.9, 1.0, 1.5, 2.0, 2.5, 3.0]),
                           m in prop::sample::select(vec![1.0, 1.05, 1.2, 1.5, 2.0, 3.0, 10.0, f64::INFINITY])) {
        let x = RegimeInput { n, p, alpha, m };
        let r = classify_regime(x).unwrap();
        prop_assert!(r.case.hypothesis(&x), "{:?} on {:?}", r.case, x);
        let holding = RegimeCase::ALL.iter().filter(|c| c.hypothesis(&x)).count();
        prop_assert_eq!(holding, 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn comparison_principle(radial in any::<bool>(), p in 1.5f64..3.0, g in nodal(0.0, 4.0), bump in nodal(0.0, 2.0)) {
        let m = mesh(radial);
        let g1 = GridFunction::new(g);
        let g2 = g1.zip_map(&GridFunction::new(bump), |a, b| a + b);
        let opts = SolverOptions::default();
        let v1 = solve_frozen(&m, &g1, p, &opts).unwrap();
        let v2 = solve_frozen(&m, &g2, p, &opts).unwrap();
        for j in 0..m.n_nodes() {
            prop_assert!(v1[j] <= v2[j] + 1e-8, "node {j}: {} > {}", v1[j], v2[j]);
        }
    }

    #[test]
    fn sweeps_are_monotone(radial in any::<bool>(), alpha in 0.2f64..2.5, c in 0.2f64..3.0) {
        let m = mesh(radial);
        let opts = SolverOptions::default();
        let spec = ProblemSpec { p: 2.0, alpha, source: Source::Constant(c), schedule: vec![1, 2, 4, 8] };
        let r = sweep_levels(&m, &spec, &opts).unwrap();
        prop_assert!(!r.is_partial());
        prop_assert!(r.monotonicity_violation <= 10.0 * opts.newton_tol, "{}", r.monotonicity_violation);
        for l in &r.levels {
            prop_assert!(l.converged);
            prop_assert!(l.fixed_point_residual <= opts.picard_tol * lebesgue_norm(&m, &l.u, 2.0).unwrap().max(1.0));
        }
    }
}

#[test]
fn alpha_one_work_is_bounded_by_source_mass() {
    let m = build_radial_mesh(3, 64, 1.0).unwrap();
    let opts = SolverOptions::default();
    let spec = ProblemSpec {
        p: 2.0,
        alpha: 1.0,
        source: Source::PowerCusp(1.0),
        schedule: vec![1, 4, 16],
    };
    let f = spec.realize_source(&m, &opts).unwrap();
    let r = sweep_levels(&m, &spec, &opts).unwrap();
    for l in &r.levels {
        let f_n = truncate_source(&f, l.n);
        assert!(alpha_one_work(&m, &f_n, &l.u, l.n).unwrap() <= integrate(&m, &f_n).unwrap());
    }
}

#[test]
fn beta_closed_form_matches_recursion() {
    let grid = [
        (3, 2.0, 2.0),
        (3, 2.0, 5.0),
        (4, 1.5, 3.0),
        (5, 3.0, 2.5),
        (6, 2.5, f64::INFINITY),
    ];
    for (n, p, m) in grid {
        let s = moser_sequences(n, p, m, 25).unwrap();
        for (k, b) in s.beta.iter().enumerate() {
            let c = beta_closed_form(n, p, m, k + 1).unwrap();
            assert!(
                ((c - b) / b).abs() <= 1e-9,
                "({n}, {p}, {m}) k = {}: {c} vs {b}",
                k + 1
            );
        }
        assert!(s.beta.windows(2).all(|w| w[1] > w[0]));
    }
}
