use std::f64::consts::PI;

use elliptic_bailey::bailey::{
    bailey_transform, build_m, m_entry, pair_residual, verify_inversions, verify_matrix_bailey, BaileySequence,
    DiscreteParams,
};
use elliptic_bailey::contour::{circle_integral, QuadratureGrid, QuadratureSettings};
use elliptic_bailey::harness::{run_campaign, CampaignConfig, Identity};
use elliptic_bailey::special::{elliptic_gamma, lattice_distance, theta, SPECIAL_FUNCTIONS_TOL};
use elliptic_bailey::{NomePair, TruncationPolicy, C64};
use proptest::prelude::*;

const TARGET: f64 = SPECIAL_FUNCTIONS_TOL / 10.0;

fn polar(r: f64, phi: f64) -> C64 {
    C64::from_polar(r, phi)
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

fn nome_strategy() -> impl Strategy<Value = NomePair> {
    (0.05..0.6f64, -PI..PI, 0.05..0.6f64, -PI..PI)
        .prop_map(|(rp, ap, rq, aq)| {
            NomePair::with_policy(polar(rp, ap), polar(rq, aq), TruncationPolicy::adaptive(TARGET)).unwrap()
        })
}

fn arg_strategy() -> impl Strategy<Value = C64> {
    (0.3..1.5f64, -PI..PI).prop_map(|(r, a)| polar(r, a))
}

fn away(u: C64, nome: &NomePair) -> bool {
    lattice_distance(u, nome) > 1e-3
}

fn bailey_params(n: usize) -> impl Strategy<Value = DiscreteParams> {
    let m = || (0.3..0.8f64, -PI / 8.0..PI / 8.0).prop_map(|(r, a)| polar(r, a));
    (0.01..0.05f64, 0.4..0.7f64, m(), m(), m(), (0.5..1.5f64, -PI..PI)).prop_filter_map(
        "degenerate draw",
        move |(p, q, a, k, tt, (ry, ay))| {
            let nome = NomePair::real(p, q).ok()?;
            DiscreteParams::from_y(a, k, tt, polar(ry, ay), n, &nome).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gamma_base_symmetry(nome in nome_strategy(), z in arg_strategy()) {
        prop_assume!(away(z, &nome));
        let swapped = nome.swapped();
        let d = rel(elliptic_gamma(z, &nome).unwrap(), elliptic_gamma(z, &swapped).unwrap());
        prop_assert!(d < SPECIAL_FUNCTIONS_TOL, "{d:e}");
    }

    #[test]
    fn gamma_inversion(nome in nome_strategy(), z in arg_strategy()) {
        prop_assume!(away(z, &nome));
        let pq = nome.p() * nome.q();
        let product = elliptic_gamma(z, &nome).unwrap() * elliptic_gamma(pq / z, &nome).unwrap();
        prop_assert!((product - 1.0).norm() < SPECIAL_FUNCTIONS_TOL, "{product}");
    }

    #[test]
    fn gamma_difference_equations(nome in nome_strategy(), z in arg_strategy()) {
        let (p, q) = (nome.p(), nome.q());
        prop_assume!(away(z, &nome) && away(q * z, &nome) && away(p * z, &nome));
        let policy = *nome.policy();
        let g = elliptic_gamma(z, &nome).unwrap();
        let in_q = rel(elliptic_gamma(q * z, &nome).unwrap(), theta(z, p, &policy).unwrap() * g);
        let in_p = rel(elliptic_gamma(p * z, &nome).unwrap(), theta(z, q, &policy).unwrap() * g);
        prop_assert!(in_q < SPECIAL_FUNCTIONS_TOL, "{in_q:e}");
        prop_assert!(in_p < SPECIAL_FUNCTIONS_TOL, "{in_p:e}");
    }

    #[test]
    fn theta_reflection_and_quasi_periodicity(nome in nome_strategy(), z in arg_strategy()) {
        let p = nome.p();
        let policy = *nome.policy();
        let t = theta(z, p, &policy).unwrap();
        prop_assume!(t.norm() > 1e-6);
        let reflected = rel(theta(p / z, p, &policy).unwrap(), t);
        let shifted = rel(theta(p * z, p, &policy).unwrap(), -t / z);
        prop_assert!(reflected < SPECIAL_FUNCTIONS_TOL, "{reflected:e}");
        prop_assert!(shifted < SPECIAL_FUNCTIONS_TOL, "{shifted:e}");
    }

    #[test]
    fn gamma_of_squares_is_a_theta_product(nome in nome_strategy(), z in arg_strategy()) {
        let (z2, zm2) = (z * z, 1.0 / (z * z));
        prop_assume!(away(z2, &nome) && away(zm2, &nome));
        let policy = *nome.policy();
        let lhs = 1.0 / (elliptic_gamma(z2, &nome).unwrap() * elliptic_gamma(zm2, &nome).unwrap());
        let rhs = theta(z2, nome.q(), &policy).unwrap() * theta(zm2, nome.p(), &policy).unwrap();
        let d = rel(lhs, rhs);
        prop_assert!(d < SPECIAL_FUNCTIONS_TOL, "{d:e}");
    }

    #[test]
    fn tighter_truncation_moves_values_less_than_the_looser_tolerance(
        nome in nome_strategy(),
        z in arg_strategy(),
        exponent in 3..12i32,
    ) {
        prop_assume!(away(z, &nome));
        let loose = 10f64.powi(-exponent);
        let at = |tol: f64| {
            let nome = nome.with_truncation(TruncationPolicy::adaptive(tol)).unwrap();
            (elliptic_gamma(z, &nome).unwrap(), theta(z, nome.p(), nome.policy()).unwrap())
        };
        let (g1, t1) = at(loose);
        let (g2, t2) = at(loose / 10.0);
        prop_assert!(rel(g1, g2) < loose, "gamma {:e}", rel(g1, g2));
        prop_assert!(rel(t1, t2) < loose, "theta {:e}", rel(t1, t2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn bailey_matrix_is_exactly_triangular(
        params in bailey_params(6),
        n in 0..8usize,
        extra in 1..5usize,
    ) {
        let m = m_entry(n, n + extra, params.a(), params.k(), params.nome()).unwrap();
        prop_assert_eq!(m, C64::new(0.0, 0.0));
    }

    #[test]
    fn inversions_hold(n in 0..=8usize, seed in any::<u64>()) {
        let params = sample_params(n, seed);
        let report = verify_inversions(&params).unwrap();
        prop_assert!(report.residual < 1e-9, "{:e}", report.residual);
        let d = report.detail_value("d_inverse").unwrap();
        prop_assert!(d < 1e-11, "{d:e}");
    }

    #[test]
    fn key_identity_holds(n in 0..=8usize, seed in any::<u64>()) {
        let params = sample_params(n, seed);
        let report = verify_matrix_bailey(&params).unwrap();
        prop_assert!(report.residual < 1e-9, "{:e}", report.residual);
    }

    #[test]
    fn bailey_transform_preserves_pair_accuracy(
        params in bailey_params(5),
        alpha in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 6),
        noise in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 6),
    ) {
        let alpha: Vec<C64> = alpha.into_iter().map(|(r, i)| C64::new(r, i)).collect();
        prop_assume!(alpha.iter().any(|x| x.norm() > 0.1));
        let nome = params.nome();
        let mut beta = build_m(5, params.a(), params.t_tilde(), nome).unwrap().apply(&alpha);
        let size = beta.iter().map(|x| x.norm()).fold(0.0, f64::max);
        for (b, (r, i)) in beta.iter_mut().zip(noise) {
            *b += C64::new(r, i) * 1e-8 * size;
        }
        let (alpha, beta) = (BaileySequence::alpha(alpha), BaileySequence::beta(beta));
        let input = pair_residual(&build_m(5, params.a(), params.t_tilde(), nome).unwrap(), &alpha, &beta);
        prop_assume!(input > 1e-10);
        let (a2, b2) = bailey_transform(&alpha, &beta, &params, 1.0).unwrap();
        let output = pair_residual(&build_m(5, params.a(), params.k(), nome).unwrap(), &a2, &b2);
        let growth = transform_gain(&params) * max_abs(&beta.values) / max_abs(&b2.values);
        prop_assert!(output <= 10.0 * input * growth.max(1.0), "input {input:e}, output {output:e}, gain {growth:e}");
    }
}

fn max_abs(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Max-row-sum norm of the map `β ↦ β'` of the Bailey transform, assembled
/// column by column from unit vectors.
fn transform_gain(params: &DiscreteParams) -> f64 {
    let n = params.n();
    let alpha = BaileySequence::alpha(vec![C64::new(0.0, 0.0); n + 1]);
    let mut rows = vec![0.0; n + 1];
    for j in 0..=n {
        let mut e = vec![C64::new(0.0, 0.0); n + 1];
        e[j] = C64::new(1.0, 0.0);
        let (_, column) = bailey_transform(&alpha, &BaileySequence::beta(e), params, f64::INFINITY).unwrap();
        for (row, x) in rows.iter_mut().zip(&column.values) {
            *row += x.norm();
        }
    }
    rows.into_iter().fold(0.0, f64::max)
}

/// Parameters from the harness sampler, so the draws match the campaigns.
fn sample_params(n: usize, seed: u64) -> DiscreteParams {
    let config = CampaignConfig::new(Identity::MatrixBailey).draws(1).seed(seed).n(n);
    let report = &run_campaign(&config).unwrap().reports[0];
    let input = |name: &str| report.inputs.iter().find(|i| i.name == name).unwrap().value;
    let nome = NomePair::new(input("p"), input("q")).unwrap();
    DiscreteParams::with_bc(input("a"), input("k"), input("t_tilde"), input("b"), input("c"), n, &nome).unwrap()
}

/// `Γ(t z^{±1}) θ(z²; q) θ(z⁻²; p)` has no poles on `|t| < |z| < 1/|t|`.
fn annulus_integrand(t: C64, nome: &NomePair) -> impl Fn(C64) -> elliptic_bailey::Result<C64> + Sync + '_ {
    move |z| {
        let policy = nome.policy();
        Ok(elliptic_gamma(t * z, nome)?
            * elliptic_gamma(t / z, nome)?
            * theta(z * z, nome.q(), policy)?
            * theta(1.0 / (z * z), nome.p(), policy)?)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn contour_independence_in_the_analytic_annulus(
        p in 0.05..0.3f64,
        q in 0.05..0.3f64,
        t in (0.2..0.5f64, -PI..PI).prop_map(|(r, a)| polar(r, a)),
        s1 in 0.0..1.0f64,
        s2 in 0.0..1.0f64,
    ) {
        let nome = NomePair::real(p, q).unwrap();
        let (lo, hi) = (1.5 * t.norm(), 1.0 / (1.5 * t.norm()));
        let radius = |s: f64| lo * (hi / lo).powf(s);
        let settings = QuadratureSettings::default();
        let f = annulus_integrand(t, &nome);
        let i1 = circle_integral(&f, radius(s1), &settings).unwrap().value;
        let i2 = circle_integral(&f, radius(s2), &settings).unwrap().value;
        prop_assert!(rel(i1, i2) < 1e-11, "{:e}", rel(i1, i2));
    }

    #[test]
    fn adaptive_driver_stops_at_first_agreement(
        p in 0.05..0.3f64,
        q in 0.05..0.3f64,
        t in (0.2..0.7f64, -PI..PI).prop_map(|(r, a)| polar(r, a)),
    ) {
        let nome = NomePair::real(p, q).unwrap();
        let settings = QuadratureSettings::default();
        let f = annulus_integrand(t, &nome);
        let result = circle_integral(&f, 1.0, &settings).unwrap();
        let fixed = |n: usize| {
            let grid = QuadratureGrid::new(1.0, n).unwrap();
            let values: Vec<C64> = grid.nodes().into_iter().map(|z| f(z).unwrap()).collect();
            let value = C64::new(0.0, grid.weight()) * values.iter().sum::<C64>();
            let mean_abs = grid.weight() * values.iter().map(|v| v.norm()).sum::<f64>();
            (value, mean_abs)
        };
        let change = |n: usize| {
            let (fine, mean_abs) = fixed(n);
            let (coarse, _) = fixed(n / 2);
            (fine - coarse).norm() / fine.norm().max(mean_abs)
        };
        let n = result.nodes;
        prop_assert!(change(n) <= settings.tol * 1.01, "{:e} at {n}", change(n));
        if n / 2 > settings.min_nodes {
            prop_assert!(change(n / 2) > settings.tol, "converged already at {}", n / 2);
        }
    }

    #[test]
    fn campaigns_are_deterministic(seed in any::<u64>(), draws in 1..6usize) {
        let config = CampaignConfig::new(Identity::MatrixBailey).draws(draws).seed(seed).n(4);
        let first = serde_json::to_string(&run_campaign(&config).unwrap()).unwrap();
        let second = serde_json::to_string(&run_campaign(&config).unwrap()).unwrap();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn failing_draws_leave_the_others_untouched(seed in any::<u64>()) {
        let base = CampaignConfig::new(Identity::SpecialFunctions).draws(6).seed(seed);
        let mut strict = base.clone();
        strict.tolerance = Some(1e-300);
        let loose = run_campaign(&base).unwrap().reports;
        let failing = run_campaign(&strict).unwrap().reports;
        prop_assert!(failing.iter().all(|r| !r.pass || r.residual == 0.0));
        for (a, b) in loose.iter().zip(&failing) {
            prop_assert_eq!(a.draw, b.draw);
            prop_assert_eq!(a.residual.to_bits(), b.residual.to_bits());
            prop_assert_eq!(&a.inputs, &b.inputs);
        }
    }
}
