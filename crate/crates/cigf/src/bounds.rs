//! Analytic bounds on the generating function and their verification.
//!
//! Four families of inequalities: exponential-moment (Chernoff-style)
//! bounds through the MGF, linearization bounds from the Bernoulli
//! inequality, triangle-type bounds from Minkowski's inequality on the
//! marginals, and a Hölder bound along the line α + β = 1.

use crate::cigf::{cigf, in_domain, DomainStatus, MeasureReport, ParamPair};
use crate::distributions::{Distribution, Tag};
use crate::error::{Error, Result};
use crate::numerics::quad::{integrate_1d, QuadSpec};

/// Which side of the generating function a bound sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSide {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ChernoffBound {
    pub bound: f64,
    pub side: BoundSide,
}

/// Exponential-moment bound from M(s₁), M(s₂) with s₁ < 0 < s₂:
///
/// ```text
/// G(α, β) ≤ g(r) M(s₁)^α M(s₂)^β    for α, β > 0
/// G(α, β) ≥ g(r) M(s₁)^α M(s₂)^β    for α, β < 0
/// ```
///
/// with g(r) = (1 − e^{−(αs₁+βs₂)r})/(αs₁+βs₂) on a bounded support
/// (0, r), g = r when the denominator vanishes, and g = 1/(αs₁+βs₂) for
/// r = ∞, which then requires αs₁ + βs₂ > 0.
pub fn chernoff_bound(x: &Distribution, p: ParamPair, s1: f64, s2: f64) -> Result<ChernoffBound> {
    let sup = x.support();
    if !(sup.lo >= 0.0) {
        return Err(Error::domain(
            "the exponential-moment bound needs a nonnegative variable",
        ));
    }
    if !(s1 < 0.0 && s2 > 0.0) {
        return Err(Error::domain(format!(
            "need s1 < 0 < s2, got s1 = {s1}, s2 = {s2}"
        )));
    }
    let side = if p.alpha > 0.0 && p.beta > 0.0 {
        BoundSide::Upper
    } else if p.alpha < 0.0 && p.beta < 0.0 {
        BoundSide::Lower
    } else {
        return Err(Error::domain(format!(
            "({}, {}) is in neither sign regime of the bound",
            p.alpha, p.beta
        )));
    };
    let m1 = x
        .mgf(s1)
        .filter(|m| m.is_finite())
        .ok_or_else(|| Error::domain(format!("MGF unavailable or infinite at s1 = {s1}")))?;
    let m2 = x
        .mgf(s2)
        .filter(|m| m.is_finite())
        .ok_or_else(|| Error::domain(format!("MGF unavailable or infinite at s2 = {s2}")))?;

    let denom = p.alpha * s1 + p.beta * s2;
    let r = sup.hi;
    let g = if r.is_finite() {
        if denom == 0.0 {
            r
        } else {
            (1.0 - (-denom * r).exp()) / denom
        }
    } else {
        if !(denom > 0.0) {
            return Err(Error::domain(format!(
                "unbounded support requires alpha*s1 + beta*s2 > 0, got {denom}"
            )));
        }
        1.0 / denom
    };
    Ok(ChernoffBound {
        bound: g * m1.powf(p.alpha) * m2.powf(p.beta),
        side,
    })
}

/// Minimizes the upper exponential-moment bound over an n×n grid of
/// (s₁, s₂) inside (−s_max, 0) × (0, s_max).
pub fn chernoff_grid_infimum(x: &Distribution, p: ParamPair, s_max: f64, n: u32) -> Result<f64> {
    if !(s_max > 0.0) || n < 2 {
        return Err(Error::domain("grid infimum needs s_max > 0 and n >= 2"));
    }
    let mut best = f64::INFINITY;
    for i in 0..n {
        let s1 = -s_max * (i as f64 + 0.5) / n as f64;
        for j in 0..n {
            let s2 = s_max * (j as f64 + 0.5) / n as f64;
            if let Ok(b) = chernoff_bound(x, p, s1, s2) {
                best = best.min(b.bound);
            }
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::domain("no admissible grid point for the bound"))
    }
}

/// Linearization bounds: for α in [0, 1],
/// G(α, β) ≤ K(β) − α K(β+1), and the mirrored form for β in [0, 1].
/// A form is `None` when its exponent lies outside [0, 1].
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct BernoulliBounds {
    pub k_form: Option<f64>,
    pub h_form: Option<f64>,
}

pub fn bernoulli_bounds(
    x: &Distribution,
    p: ParamPair,
    spec: &QuadSpec,
) -> Result<BernoulliBounds> {
    let marginal_ok = |q: ParamPair| in_domain(x, q) != DomainStatus::Outside;
    let k_form = if (0.0..=1.0).contains(&p.alpha)
        && marginal_ok(ParamPair::new(0.0, p.beta))
        && marginal_ok(ParamPair::new(0.0, p.beta + 1.0))
    {
        let k1 = cigf(x, ParamPair::new(0.0, p.beta), spec)?.value;
        let k2 = cigf(x, ParamPair::new(0.0, p.beta + 1.0), spec)?.value;
        Some(k1 - p.alpha * k2)
    } else {
        None
    };
    let h_form = if (0.0..=1.0).contains(&p.beta)
        && marginal_ok(ParamPair::new(p.alpha, 0.0))
        && marginal_ok(ParamPair::new(p.alpha + 1.0, 0.0))
    {
        let h1 = cigf(x, ParamPair::new(p.alpha, 0.0), spec)?.value;
        let h2 = cigf(x, ParamPair::new(p.alpha + 1.0, 0.0), spec)?.value;
        Some(h1 - p.beta * h2)
    } else {
        None
    };
    if k_form.is_none() && h_form.is_none() {
        return Err(Error::domain(format!(
            "neither linearization form applies at ({}, {}): the free exponent must lie \
             in [0, 1] with finite marginals",
            p.alpha, p.beta
        )));
    }
    Ok(BernoulliBounds { k_form, h_form })
}

/// Triangle-type bounds from Minkowski's inequality, for γ ≥ 1 on a
/// bounded support of width w = r − l:
///
/// ```text
/// (w^{1/γ} − H(γ)^{1/γ})₊^γ ≤ K(γ) ≤ (w^{1/γ} + H(γ)^{1/γ})^γ
/// ```
///
/// (and with H and K exchanged), together with the diagonal bounds
/// G(γ,γ) ≤ (K(γ)^{1/γ} + K(2γ)^{1/γ})^γ and the H version. Lower bounds
/// clamp the inner difference at zero, where the inequality is vacuous.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct MinkowskiBounds {
    pub gamma: f64,
    pub k_lower: f64,
    pub k_upper: f64,
    pub h_lower: f64,
    pub h_upper: f64,
    pub g_diag_via_k: f64,
    pub g_diag_via_h: f64,
}

pub fn minkowski_bounds(x: &Distribution, gamma: f64, spec: &QuadSpec) -> Result<MinkowskiBounds> {
    if !(gamma >= 1.0) {
        return Err(Error::domain(format!(
            "Minkowski bounds require gamma >= 1, got {gamma}"
        )));
    }
    let sup = x.support();
    if !sup.is_bounded() {
        return Err(Error::domain("Minkowski bounds require a bounded support"));
    }
    let w = sup.width();
    let h1 = cigf(x, ParamPair::new(gamma, 0.0), spec)?.value;
    let h2 = cigf(x, ParamPair::new(2.0 * gamma, 0.0), spec)?.value;
    let k1 = cigf(x, ParamPair::new(0.0, gamma), spec)?.value;
    let k2 = cigf(x, ParamPair::new(0.0, 2.0 * gamma), spec)?.value;
    let root = 1.0 / gamma;
    let wp = w.powf(root);
    Ok(MinkowskiBounds {
        gamma,
        k_lower: (wp - h1.powf(root)).max(0.0).powf(gamma),
        k_upper: (wp + h1.powf(root)).powf(gamma),
        h_lower: (wp - k1.powf(root)).max(0.0).powf(gamma),
        h_upper: (wp + k1.powf(root)).powf(gamma),
        g_diag_via_k: (k1.powf(root) + k2.powf(root)).powf(gamma),
        g_diag_via_h: (h1.powf(root) + h2.powf(root)).powf(gamma),
    })
}

/// Hölder bound along α + β = 1 on a bounded support:
/// G(θ, 1−θ) ≤ (r − E X)^θ (E X − l)^{1−θ}. Equality holds for the
/// symmetric two-point law on {l, r}.
pub fn holder_bound(x: &Distribution, theta: f64, spec: &QuadSpec) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::domain(format!(
            "Hölder bound requires theta in (0,1), got {theta}"
        )));
    }
    let sup = x.support();
    if !sup.is_bounded() {
        return Err(Error::domain("Hölder bound requires a bounded support"));
    }
    let mean = match x.mean() {
        Some(m) => m,
        // E X = l + ∫ F̄ over the support
        None => sup.lo + integrate_1d(|t| x.sf(t), sup.lo, sup.hi, spec)?.value,
    };
    Ok((sup.hi - mean).powf(theta) * (mean - sup.lo).powf(1.0 - theta))
}

/// One verified inequality: the bound, the value it binds, and the
/// margin (positive means the inequality holds with room).
#[derive(Debug, Clone, serde::Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub bound: f64,
    pub value: f64,
    pub margin: f64,
    pub pass: bool,
}

fn check(name: String, bound: f64, value: f64, side: BoundSide) -> BoundCheck {
    let margin = match side {
        BoundSide::Upper => bound - value,
        BoundSide::Lower => value - bound,
    };
    BoundCheck {
        name,
        bound,
        value,
        margin,
        pass: margin >= -1e-9,
    }
}

/// Evaluates every applicable inequality for the law on its standard
/// parameter grids and reports each comparison. Failures are entries,
/// not errors.
pub fn verify_bounds(x: &Distribution, spec: &QuadSpec) -> Result<Vec<BoundCheck>> {
    let mut out = Vec::new();
    let grid = [0.5, 1.0, 2.0];
    let label = x.tag().label();

    // exponential-moment bounds, upper regime
    if x.support().lo >= 0.0 && x.mgf(0.0).is_some() {
        let s_max = mgf_range(x);
        for &a in &grid {
            for &b in &grid {
                let p = ParamPair::new(a, b);
                if in_domain(x, p) != DomainStatus::Inside {
                    continue;
                }
                let g = cigf(x, p, spec)?.value;
                if let Ok(bound) = chernoff_grid_infimum(x, p, s_max, 8) {
                    out.push(check(
                        format!("chernoff-upper({label}; a={a}, b={b})"),
                        bound,
                        g,
                        BoundSide::Upper,
                    ));
                }
            }
        }
        // lower regime on families whose domain admits negative pairs
        let p = ParamPair::new(-0.25, -0.25);
        if in_domain(x, p) == DomainStatus::Inside {
            let g = cigf(x, p, spec)?.value;
            if let Ok(bnd) = chernoff_bound(x, p, -1.0, 1.0) {
                out.push(check(
                    format!("chernoff-lower({label}; a=-0.25, b=-0.25)"),
                    bnd.bound,
                    g,
                    BoundSide::Lower,
                ));
            }
        }
    }

    // linearization bounds
    for &a in &[0.0, 0.25, 0.5, 1.0] {
        for &b in &grid {
            let p = ParamPair::new(a, b);
            if in_domain(x, p) != DomainStatus::Inside
                || in_domain(x, ParamPair::new(0.0, b + 1.0)) != DomainStatus::Inside
            {
                continue;
            }
            let g = cigf(x, p, spec)?.value;
            if let Ok(bb) = bernoulli_bounds(x, p, spec) {
                if let Some(bound) = bb.k_form {
                    out.push(check(
                        format!("bernoulli-k({label}; a={a}, b={b})"),
                        bound,
                        g,
                        BoundSide::Upper,
                    ));
                }
            }
        }
    }
    for &a in &grid {
        for &b in &[0.0, 0.25, 0.5, 1.0] {
            let p = ParamPair::new(a, b);
            if in_domain(x, p) != DomainStatus::Inside
                || in_domain(x, ParamPair::new(a + 1.0, 0.0)) != DomainStatus::Inside
            {
                continue;
            }
            let g = cigf(x, p, spec)?.value;
            if let Ok(bb) = bernoulli_bounds(x, p, spec) {
                if let Some(bound) = bb.h_form {
                    out.push(check(
                        format!("bernoulli-h({label}; a={a}, b={b})"),
                        bound,
                        g,
                        BoundSide::Upper,
                    ));
                }
            }
        }
    }

    // Minkowski bounds on bounded supports
    if x.support().is_bounded() {
        for &gamma in &[1.0, 2.0, 3.0] {
            let pk = ParamPair::new(0.0, 2.0 * gamma);
            let ph = ParamPair::new(2.0 * gamma, 0.0);
            if in_domain(x, pk) != DomainStatus::Inside || in_domain(x, ph) != DomainStatus::Inside
            {
                continue;
            }
            let mb = minkowski_bounds(x, gamma, spec)?;
            let k = cigf(x, ParamPair::new(0.0, gamma), spec)?.value;
            let h = cigf(x, ParamPair::new(gamma, 0.0), spec)?.value;
            let gd = cigf(x, ParamPair::new(gamma, gamma), spec)?.value;
            out.push(check(
                format!("minkowski-k-lower({label}; gamma={gamma})"),
                mb.k_lower,
                k,
                BoundSide::Lower,
            ));
            out.push(check(
                format!("minkowski-k-upper({label}; gamma={gamma})"),
                mb.k_upper,
                k,
                BoundSide::Upper,
            ));
            out.push(check(
                format!("minkowski-h-lower({label}; gamma={gamma})"),
                mb.h_lower,
                h,
                BoundSide::Lower,
            ));
            out.push(check(
                format!("minkowski-h-upper({label}; gamma={gamma})"),
                mb.h_upper,
                h,
                BoundSide::Upper,
            ));
            out.push(check(
                format!("minkowski-diag-k({label}; gamma={gamma})"),
                mb.g_diag_via_k,
                gd,
                BoundSide::Upper,
            ));
            out.push(check(
                format!("minkowski-diag-h({label}; gamma={gamma})"),
                mb.g_diag_via_h,
                gd,
                BoundSide::Upper,
            ));
        }

        // Hölder bound along alpha + beta = 1
        for &theta in &[0.1, 0.25, 0.5, 0.75, 0.9] {
            let p = ParamPair::new(theta, 1.0 - theta);
            if in_domain(x, p) != DomainStatus::Inside {
                continue;
            }
            let g = cigf(x, p, spec)?.value;
            let bound = holder_bound(x, theta, spec)?;
            out.push(check(
                format!("holder({label}; theta={theta})"),
                bound,
                g,
                BoundSide::Upper,
            ));
        }
    }

    Ok(out)
}

/// A safe MGF evaluation range for the grid search.
fn mgf_range(x: &Distribution) -> f64 {
    match x.tag() {
        Tag::Exponential { rate } | Tag::Erlang2 { rate } => 0.98 * rate,
        Tag::Laplace { scale } => 0.98 / scale,
        _ => 5.0,
    }
}

/// The generating-function value a bound should be compared against:
/// closed form when there is one, quadrature otherwise.
pub fn reference_value(x: &Distribution, p: ParamPair, spec: &QuadSpec) -> Result<MeasureReport> {
    cigf(x, p, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec() -> QuadSpec {
        QuadSpec::default()
    }

    #[test]
    fn chernoff_basic_regimes() {
        let er = Distribution::erlang2(1.0).unwrap();
        let p = ParamPair::new(1.0, 1.0);
        let b = chernoff_bound(&er, p, -0.4, 0.5).unwrap();
        assert_eq!(b.side, BoundSide::Upper);
        let g = cigf(&er, p, &spec()).unwrap().value;
        assert!(b.bound >= g, "bound {} below value {g}", b.bound);

        // mixed signs are rejected, as are bad s values
        assert!(chernoff_bound(&er, ParamPair::new(1.0, -1.0), -0.5, 0.5).is_err());
        assert!(chernoff_bound(&er, p, 0.5, 0.5).is_err());
        // unbounded support needs a positive denominator
        assert!(chernoff_bound(&er, p, -0.6, 0.5).is_err());
        assert!(chernoff_bound(&er, p, -0.4, 0.5).is_ok());
    }

    #[test]
    fn chernoff_erlang_grid_infimum_close_to_analytic() {
        // the optimum of the bound over the admissible strip sits on the
        // boundary s1 -> 0, s2 = rate/3, giving 27/(4·rate) at (1, 1)
        let rate = 1.0;
        let er = Distribution::erlang2(rate).unwrap();
        let analytic = 27.0 / (4.0 * rate);
        let grid = chernoff_grid_infimum(&er, ParamPair::new(1.0, 1.0), 0.98 * rate, 20).unwrap();
        assert!(grid >= analytic - 1e-12);
        assert!(grid <= 1.2 * analytic, "grid {grid} vs analytic {analytic}");
    }

    #[test]
    fn chernoff_degenerate_denominator_uses_support_width() {
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        // alpha s1 + beta s2 = 0 on a bounded support: g = r = 1
        let b = chernoff_bound(&u, ParamPair::new(1.0, 1.0), -0.5, 0.5).unwrap();
        let m1 = u.mgf(-0.5).unwrap();
        let m2 = u.mgf(0.5).unwrap();
        assert_relative_eq!(b.bound, m1 * m2, max_relative = 1e-12);
    }

    #[test]
    fn bernoulli_bound_values() {
        let e = Distribution::exponential(1.0).unwrap();
        let bb = bernoulli_bounds(&e, ParamPair::new(0.5, 1.0), &spec()).unwrap();
        // K(1) − 0.5·K(2) = 1 − 0.25 = 0.75, above G(0.5, 1) = B(1.5, 1) = 2/3
        assert_relative_eq!(bb.k_form.unwrap(), 0.75, max_relative = 1e-10);
        let g = cigf(&e, ParamPair::new(0.5, 1.0), &spec()).unwrap().value;
        assert_relative_eq!(g, 2.0 / 3.0, max_relative = 1e-10);
        assert!(bb.k_form.unwrap() >= g);

        // alpha = 0 gives equality with K itself
        let bb = bernoulli_bounds(&e, ParamPair::new(0.0, 2.0), &spec()).unwrap();
        assert_relative_eq!(bb.k_form.unwrap(), 0.5, max_relative = 1e-10);

        // equality at alpha = 1 for a linear distribution function
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        let bb = bernoulli_bounds(&u, ParamPair::new(1.0, 1.0), &spec()).unwrap();
        assert_relative_eq!(bb.k_form.unwrap(), 1.0 / 6.0, max_relative = 1e-10);
    }

    #[test]
    fn minkowski_bound_values() {
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        let mb = minkowski_bounds(&u, 1.0, &spec()).unwrap();
        // K(1) = H(1) = 1/2: lower bound is tight at gamma = 1
        assert_relative_eq!(mb.k_lower, 0.5, max_relative = 1e-9);
        assert_relative_eq!(mb.k_upper, 1.5, max_relative = 1e-9);
        // diagonal at gamma = 1 is the triangle inequality
        let g11 = cigf(&u, ParamPair::new(1.0, 1.0), &spec()).unwrap().value;
        assert!(g11 <= mb.g_diag_via_k + 1e-12);

        let mb2 = minkowski_bounds(&u, 2.0, &spec()).unwrap();
        let g22 = cigf(&u, ParamPair::new(2.0, 2.0), &spec()).unwrap().value;
        assert_relative_eq!(g22, 1.0 / 30.0, max_relative = 1e-10);
        let expect = ((1.0_f64 / 3.0).sqrt() + (1.0_f64 / 5.0).sqrt()).powi(2);
        assert_relative_eq!(mb2.g_diag_via_k, expect, max_relative = 1e-9);
        assert!(g22 <= mb2.g_diag_via_k);

        assert!(minkowski_bounds(&Distribution::exponential(1.0).unwrap(), 2.0, &spec()).is_err());
        assert!(minkowski_bounds(&u, 0.5, &spec()).is_err());
    }

    #[test]
    fn holder_bound_values() {
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        let bound = holder_bound(&u, 0.5, &spec()).unwrap();
        assert_relative_eq!(bound, 0.5, max_relative = 1e-12);
        let g = cigf(&u, ParamPair::new(0.5, 0.5), &spec()).unwrap().value;
        assert_relative_eq!(g, std::f64::consts::PI / 8.0, max_relative = 1e-10);
        assert!(bound >= g);

        // two-point law: equality for every theta
        let two = Distribution::from_samples(&[0.0, 1.0]).unwrap();
        for theta in [0.2, 0.5, 0.8] {
            let bound = holder_bound(&two, theta, &spec()).unwrap();
            let g = cigf(&two, ParamPair::new(theta, 1.0 - theta), &spec())
                .unwrap()
                .value;
            assert!((bound - g).abs() <= 1e-12, "theta {theta}: {bound} vs {g}");
        }

        assert!(holder_bound(&Distribution::exponential(1.0).unwrap(), 0.5, &spec()).is_err());
    }

    #[test]
    fn verification_grids_pass() {
        for d in [
            Distribution::exponential(1.0).unwrap(),
            Distribution::uniform(0.0, 1.0).unwrap(),
            Distribution::power(2.0).unwrap(),
            Distribution::erlang2(1.0).unwrap(),
            Distribution::bernoulli(0.5).unwrap(),
        ] {
            let checks = verify_bounds(&d, &spec()).unwrap();
            assert!(!checks.is_empty(), "{:?} produced no checks", d);
            for c in &checks {
                assert!(c.pass, "{:?}: {} fails with margin {}", d, c.name, c.margin);
            }
        }
    }
}
