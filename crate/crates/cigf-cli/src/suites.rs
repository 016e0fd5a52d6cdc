//! Verification suites behind the `verify` subcommand: the full oracle
//! and invariant battery, one named check per line, nonzero exit on any
//! violation.

use cigf::bivariate;
use cigf::bounds;
use cigf::distributions::Distribution;
use cigf::entropy::{self, MeasureKind, RecoveryOrder};
use cigf::gini::{self, DistortionPair, RknComparison, TriState};
use cigf::reliability::{self, MonteCarloConfig, SystemSpec};
use cigf::{
    cigf as cigf_fn, cigf_erlang_series, cigf_quadrature, in_domain, DomainStatus, ParamPair,
    QuadSpec, Result,
};
use rand::{Rng, SeedableRng};

pub struct SuiteCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(out: &mut Vec<SuiteCheck>, name: impl Into<String>, passed: bool, detail: String) {
    out.push(SuiteCheck {
        name: name.into(),
        passed,
        detail,
    });
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

fn grid() -> Vec<(f64, f64)> {
    let g = [0.5, 1.0, 2.0];
    let mut out = Vec::new();
    for &a in &g {
        for &b in &g {
            out.push((a, b));
        }
    }
    out
}

pub fn suite_table2(spec: &QuadSpec) -> Result<Vec<SuiteCheck>> {
    let mut out = Vec::new();
    let families = [
        Distribution::bernoulli(0.3)?,
        Distribution::uniform(0.0, 1.0)?,
        Distribution::power(2.0)?,
        Distribution::exponential(1.0)?,
        Distribution::laplace(1.0)?,
    ];
    for d in &families {
        for (a, b) in grid() {
            let p = ParamPair::new(a, b);
            if in_domain(d, p) != DomainStatus::Inside {
                continue;
            }
            let closed = cigf_fn(d, p, spec)?.value;
            let quad = cigf_quadrature(d, p, spec)?.value;
            let rel = (closed - quad).abs() / closed.max(1e-300);
            check(
                &mut out,
                format!("table2/{}/a{a}-b{b}", d.tag().label()),
                rel <= 1e-8,
                format!("closed {closed:.12e} quad {quad:.12e} rel {rel:.2e}"),
            );
        }
    }
    Ok(out)
}

pub fn suite_erlang(spec: &QuadSpec) -> Result<Vec<SuiteCheck>> {
    let mut out = Vec::new();
    for rate in [1.0, 2.0] {
        let d = Distribution::erlang2(rate)?;
        for (a, b) in [(1.0, 1.0), (2.0, 1.0), (1.0, 0.5)] {
            let p = ParamPair::new(a, b);
            let series = cigf_erlang_series(rate, p, spec)?.value;
            let quad = cigf_quadrature(&d, p, spec)?.value;
            check(
                &mut out,
                format!("erlang/rate{rate}/a{a}-b{b}"),
                (series - quad).abs() <= 1e-6,
                format!("series {series:.10e} quad {quad:.10e}"),
            );
        }
    }
    Ok(out)
}

pub fn suite_gini_identity(spec: &QuadSpec) -> Result<Vec<SuiteCheck>> {
    let mut out = Vec::new();
    let cases = [
        (Distribution::exponential(1.0)?, 0.5),
        (Distribution::uniform(0.0, 1.0)?, 1.0 / 6.0),
        (Distribution::power(2.0)?, 0.13333333333333333),
    ];
    for (d, exact) in cases {
        let g = cigf_fn(&d, ParamPair::new(1.0, 1.0), spec)?.value;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20_240_817);
        let n = 1_000_000u64;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let a = d.sample_from_u(rng.gen::<f64>());
            let b = d.sample_from_u(rng.gen::<f64>());
            let v = 0.5 * (a - b).abs();
            sum += v;
            sum_sq += v * v;
        }
        let mean = sum / n as f64;
        let var = (sum_sq / n as f64 - mean * mean).max(0.0);
        let sigma3 = 3.0 * (var / n as f64).sqrt();
        check(
            &mut out,
            format!("gini-identity/{}", d.tag().label()),
            close(g, exact, 1e-8) && (mean - g).abs() <= sigma3,
            format!("G(1,1) {g:.10e} exact {exact:.10e} mc {mean:.6e} 3sigma {sigma3:.2e}"),
        );
    }
    Ok(out)
}

pub fn suite_entropy(spec: &QuadSpec) -> Result<Vec<SuiteCheck>> {
    let mut out = Vec::new();
    let e = Distribution::exponential(1.0)?;
    let u = Distribution::uniform(0.0, 1.0)?;
    for n in [1u32, 2] {
        let direct = entropy::cre_n(&e, n, spec)?.value;
        let rec = entropy::cre_n_from_cigf(&e, n, spec)?.value;
        check(
            &mut out,
            format!("entropy/exp-cre{n}"),
            close(rec, direct, 1e-4) && (direct - 1.0).abs() <= 1e-8,
            format!("direct {direct:.8e} recovered {rec:.8e}"),
        );
        let direct = entropy::ce_n(&u, n, spec)?.value;
        let rec = entropy::ce_n_from_cigf(&u, n, spec)?.value;
        check(
            &mut out,
            format!("entropy/unif-ce{n}"),
            close(rec, direct, 1e-4),
            format!("direct {direct:.8e} recovered {rec:.8e}"),
        );
    }
    for nu in [0.5, 1.5] {
        let direct = entropy::cre_frac(&e, nu, spec)?.value;
        let rec = entropy::cre_frac_from_cigf(&e, nu, spec)?.value;
        check(
            &mut out,
            format!("entropy/exp-cre-frac{nu}"),
            close(rec, direct, 1e-3) && (direct - 1.0).abs() <= 1e-8,
            format!("direct {direct:.8e} recovered {rec:.8e}"),
        );
        let direct = entropy::cre_frac(&u, nu, spec)?.value;
        let rec = entropy::cre_frac_from_cigf(&u, nu, spec)?.value;
        check(
            &mut out,
            format!("entropy/unif-cre-frac{nu}"),
            close(rec, direct, 1e-3),
            format!("direct {direct:.8e} recovered {rec:.8e}"),
        );
    }
    let r = entropy::marginal_recovery(&e, MeasureKind::Cre, RecoveryOrder::Integer(1), spec)?;
    check(
        &mut out,
        "entropy/exp-marginal-cre1",
        (r.value - 1.0).abs() <= 1e-4,
        format!("recovered {:.8e}", r.value),
    );
    check(
        &mut out,
        "entropy/exp-ce-anchor-outside",
        entropy::ce_from_cigf(&e, spec).is_err(),
        "distribution-side anchor must be rejected for the exponential law".into(),
    );
    Ok(out)
}

pub fn suite_bounds(spec: &QuadSpec) -> Result<Vec<SuiteCheck>> {
    let mut out = Vec::new();
    for d in [
        Distribution::exponential(1.0)?,
        Distribution::uniform(0.0, 1.0)?,
        Distribution::power(2.0)?,
        Distribution::erlang2(1.0)?,
        Distribution::bernoulli(0.5)?,
    ] {
        for c in bounds::verify_bounds(&d, spec)? {
            check(
                &mut out,
                format!("bounds/{}", c.name),
                c.pass,
                format!(
                    "bound {:.10e} value {:.10e} margin {:.2e}",
                    c.bound, c.value, c.margin
                ),
            );
        }
    }
    let two = Distribution::from_samples(&[0.0, 1.0])?;
    for theta in [0.2, 0.5, 0.8] {
        let bound = bounds::holder_bound(&two, theta, spec)?;
        let g = cigf_fn(&two, ParamPair::new(theta, 1.0 - theta), spec)?.value;
        check(
            &mut out,
            format!("bounds/holder-equality-theta{theta}"),
            (bound - g).abs() <= 1e-12,
            format!("bound {bound:.14e} value {g:.14e}"),
        );
    }
    let er = Distribution::erlang2(1.0)?;
    let analytic = 27.0 / 4.0;
    let inf = bounds::chernoff_grid_infimum(&er, ParamPair::new(1.0, 1.0), 0.98, 20)?;
    check(
        &mut out,
        "bounds/chernoff-grid-infimum",
        inf >= analytic - 1e-9 && inf <= 1.2 * analytic,
        format!("grid {inf:.6e} analytic {analytic:.6e}"),
    );
    Ok(out)
}

pub fn suite_reliability(spec: &QuadSpec) -> Result<Vec<SuiteCheck>> {
    let mut out = Vec::new();
    let u = Distribution::uniform(0.0, 1.0)?;
    let sys = SystemSpec::new(2, 1, u.clone(), u.clone())?;
    let r = reliability::rkn_general(&sys, spec)?.value;
    check(
        &mut out,
        "reliability/self-stress-n2k1",
        (r - 2.0 / 3.0).abs() <= 1e-9,
        format!("value {r:.10e} expected 2/3"),
    );
    let mc = MonteCarloConfig {
        n_trials: 1_000_000,
        seed: 7,
        n_streams: 4,
    };
    let est = reliability::rkn_monte_carlo(&sys, &mc)?;
    check(
        &mut out,
        "reliability/self-stress-mc",
        (est.value - 2.0 / 3.0).abs() <= est.err_est,
        format!("mc {:.6e} 3sigma {:.2e}", est.value, est.err_est),
    );
    for theta in [0.5, 1.0, 2.0] {
        let p = Distribution::power(theta)?;
        let rec = reliability::rkn_recurrence(&p, 10, 0.0, 1.0, spec)?;
        let mut worst: f64 = 0.0;
        for k in 0..=10u32 {
            let closed = reliability::rkn_power_closed(theta, k, 10)?;
            let summed = reliability::rkn_uniform_stress(&p, k, 10, 0.0, 1.0, spec)?.value;
            worst = worst
                .max((closed - summed).abs())
                .max((closed - rec[k as usize]).abs());
        }
        check(
            &mut out,
            format!("reliability/power{theta}-threeway"),
            worst <= 1e-9,
            format!("worst gap {worst:.2e}"),
        );
    }
    for n in [50u32, 100] {
        let thetas = [0.1, 0.5, 1.0, 2.0, 10.0];
        let rows = reliability::figure1_data(&thetas, n)?;
        let mut ok = true;
        for &theta in &thetas {
            let curve: Vec<f64> = rows.iter().filter(|r| r.0 == theta).map(|r| r.2).collect();
            ok &= curve[0] == 1.0 && *curve.last().unwrap() >= 0.0;
            ok &= curve.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        }
        for k in 1..=n {
            let at = |theta: f64| rows.iter().find(|r| r.0 == theta && r.1 == k).unwrap().2;
            ok &= at(0.1) <= at(0.5) + 1e-12 && at(0.5) <= at(1.0) + 1e-12;
            ok &= at(1.0) <= at(2.0) + 1e-12 && at(2.0) <= at(10.0) + 1e-12;
            ok &= (at(1.0) - (1.0 - k as f64 / (n as f64 + 1.0))).abs() <= 1e-12;
        }
        check(
            &mut out,
            format!("reliability/profiles-n{n}"),
            ok,
            "shape and ordering".into(),
        );
    }
    Ok(out)
}

pub fn suite_orderstats(spec: &QuadSpec) -> Result<Vec<SuiteCheck>> {
    let mut out = Vec::new();
    let u = Distribution::uniform(0.0, 1.0)?;
    let e = Distribution::exponential(1.0)?;
    for n in [2u32, 3, 5] {
        let series = reliability::cigf_max_series(&u, n, ParamPair::new(1.0, 1.0), spec)?.value;
        let direct = cigf_quadrature(
            &u.prop_rev_hazard(n as f64)?,
            ParamPair::new(1.0, 1.0),
            spec,
        )?
        .value;
        check(
            &mut out,
            format!("orderstats/max-uniform-n{n}"),
            (series - direct).abs() <= 1e-7,
            format!("series {series:.10e} direct {direct:.10e}"),
        );
        for d in [&u, &e] {
            let series = reliability::cigf_min_series(d, n, ParamPair::new(1.0, 1.0), spec)?.value;
            let direct =
                cigf_quadrature(&d.prop_hazard(n as f64)?, ParamPair::new(1.0, 1.0), spec)?.value;
            check(
                &mut out,
                format!("orderstats/min-{}-n{n}", d.tag().label()),
                (series - direct).abs() <= 1e-7,
                format!("series {series:.10e} direct {direct:.10e}"),
            );
        }
    }
    for (k, n) in [(1u32, 2u32), (2, 4), (3, 5)] {
        let m = reliability::korn_mean(&u, k, n, spec)?.value;
        let exact = k as f64 / (n as f64 + 1.0);
        check(
            &mut out,
            format!("orderstats/mean-k{k}-n{n}"),
            (m - exact).abs() <= 1e-9,
            format!("value {m:.10e} exact {exact:.10e}"),
        );
    }
    Ok(out)
}

pub fn suite_qgini(spec: &QuadSpec) -> Result<Vec<SuiteCheck>> {
    let mut out = Vec::new();
    let q = DistortionPair::identity();
    let e1 = Distribution::exponential(1.0)?;
    let e2 = Distribution::exponential(2.0)?;
    for d in [
        Distribution::uniform(0.0, 1.0)?,
        Distribution::power(2.0)?,
        Distribution::exponential(1.0)?,
        Distribution::laplace(1.0)?,
    ] {
        for c in gini::variability_axioms_check(&d, &e1, &q, spec)? {
            check(
                &mut out,
                format!("qgini/{}/{}", d.tag().label(), c.name),
                c.pass,
                format!("lhs {:.10e} rhs {:.10e}", c.lhs, c.rhs),
            );
        }
    }
    check(
        &mut out,
        "qgini/dispersive-exp-pair",
        gini::dispersive_check(&e2, &e1, 512) == TriState::Holds,
        "rate 2 below rate 1".into(),
    );
    let t = Distribution::uniform(0.0, 1.0)?;
    match gini::rkn_comparison(&e2, &e1, &t, 5, spec)? {
        RknComparison::Compared { rows, ordered } => {
            check(
                &mut out,
                "qgini/reliability-ordering-n5",
                ordered,
                format!("{} thresholds compared", rows.len()),
            );
        }
        RknComparison::NotApplicable { reason } => {
            check(&mut out, "qgini/reliability-ordering-n5", false, reason);
        }
    }
    let exact = gini::weighted_q_gini(&e1, &q, &e1, spec)?.value;
    for seed in [1u64, 2, 3, 4, 5] {
        let mc = MonteCarloConfig {
            n_trials: 1_000_000,
            seed,
            n_streams: 1,
        };
        let est = gini::mean_value_repr(&e1, &e1, &mc)?;
        check(
            &mut out,
            format!("qgini/mean-value-seed{seed}"),
            (est.value - exact).abs() <= est.err_est,
            format!(
                "mc {:.6e} exact {exact:.6e} 3sigma {:.2e}",
                est.value, est.err_est
            ),
        );
    }
    Ok(out)
}

pub fn suite_bivariate(spec: &QuadSpec) -> Result<Vec<SuiteCheck>> {
    let mut out = Vec::new();
    let fgm = bivariate::four_point(0.1)?;
    let tri = bivariate::triangle_uniform();
    for v in [&fgm, &tri] {
        let mut worst: f64 = 0.0;
        for (a, b) in grid() {
            let p = ParamPair::new(a, b);
            let closed = bivariate::cigf2(v, p, spec)?.value;
            let quad = bivariate::cigf2_quadrature(v, p, spec)?.value;
            worst = worst.max((closed - quad).abs() / (1.0 + closed));
        }
        check(
            &mut out,
            format!("bivariate/closed-vs-quad/{:?}", v.tag()),
            worst <= 1e-8,
            format!("worst rel gap {worst:.2e}"),
        );
    }
    let u = Distribution::uniform(0.0, 1.0)?;
    let e = Distribution::exponential(1.0)?;
    let (joint, prod) = bivariate::cigf2_product_check(&u, &u, ParamPair::new(1.0, 1.0), spec)?;
    check(
        &mut out,
        "bivariate/product-uniforms",
        (joint.value - prod.value).abs() <= 1e-7,
        format!("joint {:.10e} product {:.10e}", joint.value, prod.value),
    );
    let pe = bivariate::product(&e, &e)?;
    let cre_joint = bivariate::joint_cre(&pe, spec)?.value;
    check(
        &mut out,
        "bivariate/independent-exponentials-cre",
        (cre_joint - 2.0).abs() <= 1e-6,
        format!("value {cre_joint:.8e} expected 2"),
    );
    let (mx, my) = fgm.marginals().unwrap().clone();
    let lhs = bivariate::joint_cre(&fgm, spec)?.value;
    let rhs = my.mean().unwrap() * entropy::cre(&mx, spec)?.value
        + mx.mean().unwrap() * entropy::cre(&my, spec)?.value;
    check(
        &mut out,
        "bivariate/dependence-breaks-identity",
        (lhs - rhs).abs() > 0.01,
        format!("joint {lhs:.6e} additive form {rhs:.6e}"),
    );
    let (direct, rec) =
        bivariate::joint_recovery_check(&fgm, MeasureKind::Cre, RecoveryOrder::Integer(1), spec)?;
    check(
        &mut out,
        "bivariate/recovery-four-point",
        (direct.value - rec.value).abs() <= 1e-4 * (1.0 + direct.value),
        format!("direct {:.8e} recovered {:.8e}", direct.value, rec.value),
    );
    Ok(out)
}

pub fn run_suite(name: &str, spec: &QuadSpec) -> Result<Vec<SuiteCheck>> {
    match name {
        "table2" => suite_table2(spec),
        "erlang" => suite_erlang(spec),
        "gini-identity" => suite_gini_identity(spec),
        "entropy" => suite_entropy(spec),
        "bounds" => suite_bounds(spec),
        "reliability" => suite_reliability(spec),
        "orderstats" => suite_orderstats(spec),
        "qgini" => suite_qgini(spec),
        "bivariate" => suite_bivariate(spec),
        "all" => {
            let mut out = Vec::new();
            for s in [
                "table2",
                "erlang",
                "gini-identity",
                "entropy",
                "bounds",
                "reliability",
                "orderstats",
                "qgini",
                "bivariate",
            ] {
                out.extend(run_suite(s, spec)?);
            }
            Ok(out)
        }
        other => Err(cigf::Error::Parse(format!(
            "unknown suite {other:?}; expected all, table2, erlang, gini-identity, entropy, \
             bounds, reliability, orderstats, qgini or bivariate"
        ))),
    }
}
