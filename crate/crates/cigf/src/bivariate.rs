//! Two-dimensional generating function and joint entropies.
//!
//! For a random vector (X, Y) with joint distribution function F(x, y)
//! and joint survival function F̄(x, y) = P(X > x, Y > y),
//!
//! ```text
//! G(α, β) = ∬_S F(x, y)^α F̄(x, y)^β dx dy,     S = {F · F̄ > 0},
//! ```
//!
//! together with joint cumulative (residual) entropies over the support
//! rectangle, their derivative recovery from G, independence
//! factorization, and the two-dimensional odds form.

use std::sync::Arc;

use rand::{Rng, SeedableRng};

use crate::cigf::{MeasureReport, Method, ParamPair};
use crate::distributions::{Distribution, SupportInterval};
use crate::entropy::{MeasureKind, RecoveryOrder};
use crate::error::{Error, Result};
use crate::numerics::diff::{caputo_deriv, central_diff, central_diff_richardson, FracDiffSpec};
use crate::numerics::quad::{integrate_2d, QuadSpec, Region2};
use crate::numerics::special::{beta, log_gamma};

type JointFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Which worked example (or construction) a bivariate law came from.
#[derive(Debug, Clone, PartialEq)]
pub enum BivTag {
    /// Two-point marginals with dependence parameter θ ∈ (−1/4, 1/4):
    /// F = F̄ = 1/4 + θ on the open unit square.
    FourPoint { theta: f64 },
    /// Uniform on the triangle {x, y ≥ 0, x + y ≤ 1}.
    TriangleUniform,
    /// Density x + y on the unit square.
    SumDensity,
    /// Independent coupling of two univariate laws.
    Product,
}

/// An immutable bivariate law: joint CDF/SF on the whole plane, an
/// optional density, the region S where F·F̄ > 0, the support rectangle,
/// and the marginals when known.
#[derive(Clone)]
pub struct BivariateDistribution {
    cdf: JointFn,
    sf: JointFn,
    pdf: Option<JointFn>,
    region: Arc<Region2>,
    rect: (SupportInterval, SupportInterval),
    marginals: Option<(Distribution, Distribution)>,
    tag: BivTag,
}

impl std::fmt::Debug for BivariateDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BivariateDistribution({:?})", self.tag)
    }
}

impl BivariateDistribution {
    pub fn cdf(&self, x: f64, y: f64) -> f64 {
        (self.cdf)(x, y)
    }

    pub fn sf(&self, x: f64, y: f64) -> f64 {
        (self.sf)(x, y)
    }

    pub fn pdf(&self, x: f64, y: f64) -> Option<f64> {
        self.pdf.as_ref().map(|f| f(x, y))
    }

    pub fn has_pdf(&self) -> bool {
        self.pdf.is_some()
    }

    pub fn region(&self) -> &Region2 {
        &self.region
    }

    pub fn support_rect(&self) -> (SupportInterval, SupportInterval) {
        self.rect
    }

    pub fn marginals(&self) -> Option<&(Distribution, Distribution)> {
        self.marginals.as_ref()
    }

    pub fn tag(&self) -> &BivTag {
        &self.tag
    }
}

/// Selector for [`make_bivariate`].
#[derive(Debug, Clone)]
pub enum BivariateExample {
    FourPoint { theta: f64 },
    TriangleUniform,
    SumDensity,
    Product(Distribution, Distribution),
}

pub fn make_bivariate(example: BivariateExample) -> Result<BivariateDistribution> {
    match example {
        BivariateExample::FourPoint { theta } => four_point(theta),
        BivariateExample::TriangleUniform => Ok(triangle_uniform()),
        BivariateExample::SumDensity => Ok(sum_density()),
        BivariateExample::Product(x, y) => product(&x, &y),
    }
}

/// The dependent two-point vector: mass 1/4 + θ on (0,0) and (1,1),
/// mass 1/4 − θ on (0,1) and (1,0). Its joint CDF and SF both equal
/// 1/4 + θ everywhere on the open unit square.
pub fn four_point(theta: f64) -> Result<BivariateDistribution> {
    if !(theta > -0.25 && theta < 0.25) {
        return Err(Error::domain(format!(
            "dependence parameter must lie in (-1/4, 1/4), got {theta}"
        )));
    }
    let q = 0.25 + theta;
    let s = 0.25 - theta;
    let atoms = [(0.0, 0.0, q), (0.0, 1.0, s), (1.0, 0.0, s), (1.0, 1.0, q)];
    let cdf = {
        Arc::new(move |x: f64, y: f64| {
            atoms
                .iter()
                .filter(|(ax, ay, _)| *ax <= x && *ay <= y)
                .map(|t| t.2)
                .sum()
        }) as JointFn
    };
    let sf = {
        Arc::new(move |x: f64, y: f64| {
            atoms
                .iter()
                .filter(|(ax, ay, _)| *ax > x && *ay > y)
                .map(|t| t.2)
                .sum()
        }) as JointFn
    };
    let half = Distribution::bernoulli(0.5)?;
    Ok(BivariateDistribution {
        cdf,
        sf,
        pdf: None,
        region: Arc::new(Region2::rect(0.0, 1.0, 0.0, 1.0)),
        rect: (
            SupportInterval::new(0.0, 1.0)?,
            SupportInterval::new(0.0, 1.0)?,
        ),
        marginals: Some((half.clone(), half)),
        tag: BivTag::FourPoint { theta },
    })
}

/// Uniform law on the triangle 0 ≤ x, 0 ≤ y, x + y ≤ 1: density 2,
/// F = 2xy below the hypotenuse, F̄ = (1 − x − y)².
pub fn triangle_uniform() -> BivariateDistribution {
    let cdf = Arc::new(|x: f64, y: f64| {
        let px = x.clamp(0.0, 1.0);
        let py = y.clamp(0.0, 1.0);
        if px + py <= 1.0 {
            2.0 * px * py
        } else {
            // complement of the two corner triangles above the line
            1.0 - (1.0 - px) * (1.0 - px) - (1.0 - py) * (1.0 - py)
        }
    }) as JointFn;
    let sf = Arc::new(|x: f64, y: f64| {
        let px = x.clamp(0.0, 1.0);
        let py = y.clamp(0.0, 1.0);
        let d = 1.0 - px - py;
        if d > 0.0 {
            d * d
        } else {
            0.0
        }
    }) as JointFn;
    let pdf = Arc::new(|x: f64, y: f64| {
        if x > 0.0 && y > 0.0 && x + y < 1.0 {
            2.0
        } else {
            0.0
        }
    }) as JointFn;
    // each marginal has density 2(1 − t) on (0, 1), the equilibrium
    // transform of the standard uniform law
    let marginal = Distribution::uniform(0.0, 1.0)
        .and_then(|u| u.equilibrium())
        .expect("marginal of the triangle law");
    BivariateDistribution {
        cdf,
        sf,
        pdf: Some(pdf),
        region: Arc::new(Region2::new(0.0, 1.0, |_| 0.0, |x| 1.0 - x)),
        rect: (
            SupportInterval { lo: 0.0, hi: 1.0 },
            SupportInterval { lo: 0.0, hi: 1.0 },
        ),
        marginals: Some((marginal.clone(), marginal)),
        tag: BivTag::TriangleUniform,
    }
}

/// Density x + y on the unit square: F = xy(x+y)/2,
/// F̄ = (x−1)(y−1)(x+y+2)/2 inside the square.
pub fn sum_density() -> BivariateDistribution {
    let cdf = Arc::new(|x: f64, y: f64| {
        let px = x.clamp(0.0, 1.0);
        let py = y.clamp(0.0, 1.0);
        0.5 * px * py * (px + py)
    }) as JointFn;
    let sf = Arc::new(|x: f64, y: f64| {
        let px = x.clamp(0.0, 1.0);
        let py = y.clamp(0.0, 1.0);
        0.5 * (px - 1.0) * (py - 1.0) * (px + py + 2.0)
    }) as JointFn;
    let pdf = Arc::new(|x: f64, y: f64| {
        if (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y) {
            x + y
        } else {
            0.0
        }
    }) as JointFn;
    let marginal = crate::distributions::sum_density_marginal();
    BivariateDistribution {
        cdf,
        sf,
        pdf: Some(pdf),
        region: Arc::new(Region2::rect(0.0, 1.0, 0.0, 1.0)),
        rect: (
            SupportInterval { lo: 0.0, hi: 1.0 },
            SupportInterval { lo: 0.0, hi: 1.0 },
        ),
        marginals: Some((marginal.clone(), marginal)),
        tag: BivTag::SumDensity,
    }
}

/// Independent coupling: F(x, y) = F_X(x) F_Y(y), F̄(x, y) = F̄_X(x) F̄_Y(y).
pub fn product(x: &Distribution, y: &Distribution) -> Result<BivariateDistribution> {
    let sx = x.support();
    let sy = y.support();
    let xc = x.clone();
    let yc = y.clone();
    let cdf = Arc::new(move |a: f64, b: f64| xc.cdf(a) * yc.cdf(b)) as JointFn;
    let xs = x.clone();
    let ys = y.clone();
    let sf = Arc::new(move |a: f64, b: f64| xs.sf(a) * ys.sf(b)) as JointFn;
    let pdf = if x.has_pdf() && y.has_pdf() {
        let xp = x.clone();
        let yp = y.clone();
        Some(
            Arc::new(move |a: f64, b: f64| xp.pdf(a).unwrap_or(0.0) * yp.pdf(b).unwrap_or(0.0))
                as JointFn,
        )
    } else {
        None
    };
    Ok(BivariateDistribution {
        cdf,
        sf,
        pdf,
        region: Arc::new(Region2::rect(sx.lo, sx.hi, sy.lo, sy.hi)),
        rect: (sx, sy),
        marginals: Some((x.clone(), y.clone())),
        tag: BivTag::Product,
    })
}

/// Finiteness of the exponent pair for the worked examples.
pub fn in_domain2(v: &BivariateDistribution, p: ParamPair) -> crate::cigf::DomainStatus {
    use crate::cigf::DomainStatus::*;
    match v.tag() {
        BivTag::FourPoint { .. } => Inside,
        BivTag::TriangleUniform => {
            if p.alpha > -1.0 && p.beta > -0.5 {
                Inside
            } else {
                Outside
            }
        }
        BivTag::SumDensity => {
            if p.alpha >= 0.0 && p.beta >= 0.0 {
                Inside
            } else {
                Undetermined
            }
        }
        BivTag::Product => match v.marginals() {
            Some((x, y)) => {
                let a = crate::cigf::in_domain(x, p);
                let b = crate::cigf::in_domain(y, p);
                if a == Outside || b == Outside {
                    Outside
                } else if a == Inside && b == Inside {
                    Inside
                } else {
                    Undetermined
                }
            }
            None => Undetermined,
        },
    }
}

/// Closed-form values for the worked examples, where available.
pub fn cigf2_closed_form(v: &BivariateDistribution, p: ParamPair) -> Result<Option<f64>> {
    if in_domain2(v, p) == crate::cigf::DomainStatus::Outside {
        return Ok(None);
    }
    match v.tag() {
        BivTag::FourPoint { theta } => Ok(Some((0.25 + theta).powf(p.alpha + p.beta))),
        BivTag::TriangleUniform => {
            let (a, b) = (p.alpha, p.beta);
            Ok(Some(
                2.0_f64.powf(a) * beta(a + 1.0, 2.0 * b + 1.0)? * beta(a + 1.0, a + 2.0 * b + 2.0)?,
            ))
        }
        _ => Ok(None),
    }
}

/// The truncated region for quadrature: unbounded marginals are cut at
/// their tail-mass quantiles.
fn truncated_region(v: &BivariateDistribution, spec: &QuadSpec) -> Result<(Region2, f64)> {
    let (rx, ry) = v.rect;
    let (mx, my) = match v.marginals() {
        Some((x, y)) => (Some(x), Some(y)),
        None => (None, None),
    };
    let mut tail = 0.0;
    let x_lo = if rx.lo.is_finite() {
        rx.lo
    } else {
        tail += spec.tail_mass;
        mx.ok_or_else(|| Error::domain("unbounded region needs marginals to truncate"))?
            .quantile(spec.tail_mass)
    };
    let x_hi = if rx.hi.is_finite() {
        rx.hi
    } else {
        tail += spec.tail_mass;
        mx.ok_or_else(|| Error::domain("unbounded region needs marginals to truncate"))?
            .quantile(1.0 - spec.tail_mass)
    };
    let y_lo = if ry.lo.is_finite() {
        ry.lo
    } else {
        tail += spec.tail_mass;
        my.ok_or_else(|| Error::domain("unbounded region needs marginals to truncate"))?
            .quantile(spec.tail_mass)
    };
    let y_hi = if ry.hi.is_finite() {
        ry.hi
    } else {
        tail += spec.tail_mass;
        my.ok_or_else(|| Error::domain("unbounded region needs marginals to truncate"))?
            .quantile(1.0 - spec.tail_mass)
    };
    // the triangle keeps its hypotenuse; rectangles get rebuilt truncated
    if matches!(v.tag(), BivTag::TriangleUniform) {
        Ok((Region2::new(0.0, 1.0, |_| 0.0, |x| 1.0 - x), 0.0))
    } else {
        Ok((Region2::rect(x_lo, x_hi, y_lo, y_hi), tail))
    }
}

/// Always-numeric evaluation of the bivariate generating function by
/// nested quadrature over S.
pub fn cigf2_quadrature(
    v: &BivariateDistribution,
    p: ParamPair,
    spec: &QuadSpec,
) -> Result<MeasureReport> {
    spec.validate()?;
    let (region, _) = truncated_region(v, spec)?;
    if !(region.x_hi - region.x_lo > 0.0) {
        // a degenerate component empties S
        return Ok(MeasureReport::new(
            0.0,
            0.0,
            Method::Quadrature,
            "empty region",
        ));
    }
    let integrand = |x: f64, y: f64| {
        let f = v.cdf(x, y);
        let s = v.sf(x, y);
        if f <= 0.0 || s <= 0.0 {
            // outside S the integrand's limit is zero for positive
            // exponents; negative exponents never reach here because
            // the region tracks S
            0.0
        } else {
            f.powf(p.alpha) * s.powf(p.beta)
        }
    };

    // a fractional survival exponent fattens the tail beyond the
    // probability cut: push unbounded edges out until the integrand
    // itself is negligible there
    let (rx, ry) = v.rect;
    let (x_lo, mut x_hi) = (region.x_lo, region.x_hi);
    let (y_lo, mut y_hi) = region.y_limits(0.5 * (x_lo + x_hi));
    let negligible = 0.01 * spec.abs_tol / ((x_hi - x_lo) * (y_hi - y_lo)).max(1.0);
    let edge_max = |xs: [f64; 3], ys: [f64; 3]| {
        let mut m: f64 = 0.0;
        for &a in &xs {
            for &b in &ys {
                m = m.max(integrand(a, b).abs());
            }
        }
        m
    };
    let y_probe = |lo: f64, hi: f64| [lo + 0.1 * (hi - lo), 0.5 * (lo + hi), hi - 0.1 * (hi - lo)];
    let mut tries = 0;
    while rx.hi.is_infinite()
        && edge_max([x_hi, x_hi, x_hi], y_probe(y_lo, y_hi)) > negligible
        && tries < 60
    {
        x_hi *= 1.4;
        tries += 1;
    }
    tries = 0;
    while ry.hi.is_infinite()
        && edge_max(y_probe(x_lo, x_hi), [y_hi, y_hi, y_hi]) > negligible
        && tries < 60
    {
        y_hi *= 1.4;
        tries += 1;
    }
    let keeps_shape = matches!(v.tag(), BivTag::TriangleUniform);
    let region = if keeps_shape {
        Region2::new(0.0, 1.0, |_| 0.0, |x| 1.0 - x)
    } else {
        Region2::rect(x_lo, x_hi, y_lo, y_hi)
    };
    let tail = if rx.is_bounded() && ry.is_bounded() {
        0.0
    } else {
        let ex = edge_max([x_hi, x_hi, x_hi], y_probe(y_lo, y_hi));
        let ey = edge_max(y_probe(x_lo, x_hi), [y_hi, y_hi, y_hi]);
        (ex + ey) * (x_hi - x_lo) * (y_hi - y_lo)
    };

    let est = integrate_2d(integrand, &region, spec).map_err(|e| match e {
        Error::Divergent(w) => Error::Domain(format!(
            "bivariate G({}, {}) diverges: {w}",
            p.alpha, p.beta
        )),
        other => other,
    })?;
    Ok(MeasureReport::new(
        est.value,
        est.err_est + tail,
        Method::Quadrature,
        "nested quadrature over S",
    ))
}

/// The bivariate generating function: closed forms for the worked
/// examples, nested quadrature otherwise.
pub fn cigf2(v: &BivariateDistribution, p: ParamPair, spec: &QuadSpec) -> Result<MeasureReport> {
    if in_domain2(v, p) == crate::cigf::DomainStatus::Outside {
        return Err(Error::Domain(format!(
            "({}, {}) lies outside the finiteness domain of {:?}",
            p.alpha,
            p.beta,
            v.tag()
        )));
    }
    if let Some(c) = cigf2_closed_form(v, p)? {
        return Ok(MeasureReport::new(
            c,
            1e-13 * c.abs(),
            Method::ClosedForm,
            format!("{:?}", v.tag()),
        ));
    }
    cigf2_quadrature(v, p, spec)
}

/// Both sides of the independence factorization: the joint value by
/// quadrature and the product of the marginal generating functions.
pub fn cigf2_product_check(
    x: &Distribution,
    y: &Distribution,
    p: ParamPair,
    spec: &QuadSpec,
) -> Result<(MeasureReport, MeasureReport)> {
    let v = product(x, y)?;
    let joint = cigf2_quadrature(&v, p, spec)?;
    let gx = crate::cigf::cigf(x, p, spec)?;
    let gy = crate::cigf::cigf(y, p, spec)?;
    let prod = MeasureReport::new(
        gx.value * gy.value,
        gx.err_est * gy.value.abs() + gy.err_est * gx.value.abs(),
        gx.method,
        "product of marginal generating functions",
    );
    Ok((joint, prod))
}

fn joint_log_power(
    v: &BivariateDistribution,
    kind: MeasureKind,
    nu: f64,
    spec: &QuadSpec,
) -> Result<MeasureReport> {
    spec.validate()?;
    // the log-power kink along {F̄ = 0} caps what planar quadrature can
    // certify; entropy consumers need far less than the 1D defaults
    let spec = QuadSpec {
        abs_tol: spec.abs_tol.max(1e-9),
        rel_tol: spec.rel_tol.max(1e-8),
        ..spec.clone()
    };
    let spec = &spec;
    let norm = log_gamma(nu + 1.0)?.exp();
    let (rx, ry) = v.rect;
    let (mx, my) = v
        .marginals()
        .map(|(a, b)| (Some(a.clone()), Some(b.clone())))
        .unwrap_or((None, None));
    let x_hi = if rx.hi.is_finite() {
        rx.hi
    } else {
        mx.as_ref()
            .ok_or_else(|| Error::domain("unbounded rectangle needs marginals"))?
            .quantile(1.0 - spec.tail_mass)
    };
    let y_hi = if ry.hi.is_finite() {
        ry.hi
    } else {
        my.as_ref()
            .ok_or_else(|| Error::domain("unbounded rectangle needs marginals"))?
            .quantile(1.0 - spec.tail_mass)
    };
    let region = Region2::rect(rx.lo.max(0.0), x_hi, ry.lo.max(0.0), y_hi);
    let vv = v.clone();
    let est = integrate_2d(
        move |x, y| {
            let w = match kind {
                MeasureKind::Cre => vv.sf(x, y),
                MeasureKind::Ce => vv.cdf(x, y),
            };
            if w <= 0.0 {
                return 0.0;
            }
            let l = -w.ln();
            if l <= 0.0 {
                return if nu == 0.0 { w } else { 0.0 };
            }
            w * l.powf(nu)
        },
        &region,
        spec,
    )?;
    Ok(MeasureReport::new(
        est.value / norm,
        est.err_est / norm,
        Method::Quadrature,
        "joint entropy integral over the support rectangle",
    ))
}

/// Joint cumulative residual entropy −∬ F̄ log F̄ over the rectangle.
pub fn joint_cre(v: &BivariateDistribution, spec: &QuadSpec) -> Result<MeasureReport> {
    joint_log_power(v, MeasureKind::Cre, 1.0, spec)
}

/// Joint cumulative entropy −∬ F log F over the rectangle.
pub fn joint_ce(v: &BivariateDistribution, spec: &QuadSpec) -> Result<MeasureReport> {
    joint_log_power(v, MeasureKind::Ce, 1.0, spec)
}

pub fn joint_cre_n(v: &BivariateDistribution, n: u32, spec: &QuadSpec) -> Result<MeasureReport> {
    joint_log_power(v, MeasureKind::Cre, n as f64, spec)
}

pub fn joint_ce_n(v: &BivariateDistribution, n: u32, spec: &QuadSpec) -> Result<MeasureReport> {
    if n < 1 {
        return Err(Error::domain(
            "the joint cumulative entropy order must be >= 1",
        ));
    }
    joint_log_power(v, MeasureKind::Ce, n as f64, spec)
}

pub fn joint_cre_frac(
    v: &BivariateDistribution,
    nu: f64,
    spec: &QuadSpec,
) -> Result<MeasureReport> {
    if !(nu >= 0.0) {
        return Err(Error::domain(format!(
            "order must satisfy nu >= 0, got {nu}"
        )));
    }
    joint_log_power(v, MeasureKind::Cre, nu, spec)
}

pub fn joint_ce_frac(v: &BivariateDistribution, nu: f64, spec: &QuadSpec) -> Result<MeasureReport> {
    if !(nu > 0.0) {
        return Err(Error::domain(format!(
            "order must satisfy nu > 0, got {nu}"
        )));
    }
    joint_log_power(v, MeasureKind::Ce, nu, spec)
}

/// Recovers a joint entropy from derivatives of the bivariate generating
/// function at the anchors (0, 1) and (1, 0), returning the direct value
/// alongside. The distribution-side recovery requires S to be the full
/// support rectangle; where F̄ vanishes inside the rectangle (the
/// triangle example), only the survival side is exact.
pub fn joint_recovery_check(
    v: &BivariateDistribution,
    kind: MeasureKind,
    order: RecoveryOrder,
    spec: &QuadSpec,
) -> Result<(MeasureReport, MeasureReport)> {
    let direct = match (kind, order) {
        (MeasureKind::Cre, RecoveryOrder::Integer(n)) => joint_cre_n(v, n, spec)?,
        (MeasureKind::Ce, RecoveryOrder::Integer(n)) => joint_ce_n(v, n, spec)?,
        (MeasureKind::Cre, RecoveryOrder::Fractional(nu)) => joint_cre_frac(v, nu, spec)?,
        (MeasureKind::Ce, RecoveryOrder::Fractional(nu)) => joint_ce_frac(v, nu, spec)?,
    };

    let closed = matches!(cigf2_closed_form(v, anchor2(kind)), Ok(Some(_)));
    let slice = |t: f64| -> f64 {
        let p = match kind {
            MeasureKind::Cre => ParamPair::new(0.0, t),
            MeasureKind::Ce => ParamPair::new(t, 0.0),
        };
        cigf2(v, p, spec).map(|r| r.value).unwrap_or(f64::NAN)
    };

    let recovered = match order {
        RecoveryOrder::Integer(n) => {
            if n > 4 {
                return Err(Error::domain("recovery supports orders up to 4"));
            }
            let step = match (n, closed) {
                (1, true) => 1e-5,
                (2, true) => 1e-4,
                (1, false) => 5e-3,
                (2, false) => 3e-2,
                (_, true) => 1e-2,
                (_, false) => 5e-2,
            };
            let d = if n <= 2 {
                central_diff(&slice, 1.0, n, step)?
            } else {
                central_diff_richardson(&slice, 1.0, n, step)?
            };
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let fact = log_gamma(n as f64 + 1.0)?.exp();
            MeasureReport::new(
                sign * d / fact,
                1e-4 * (1.0 + d.abs()),
                Method::Quadrature,
                format!("order-{n} difference of the joint generating function"),
            )
        }
        RecoveryOrder::Fractional(nu) => {
            // the four-point example's slice decays geometrically, a
            // short cutoff suffices; quadrature-backed slices pay per
            // evaluation, so the budget stays modest
            let cutoff = if closed { 90.0 } else { 40.0 };
            let fd = FracDiffSpec::new(nu)
                .with_cutoff(cutoff)
                .with_inner_step(if closed { 1e-4 } else { 2e-2 });
            let quad = QuadSpec {
                abs_tol: spec.abs_tol.max(1e-10),
                rel_tol: spec.rel_tol.max(1e-8),
                ..spec.clone()
            };
            let raw = caputo_deriv(&slice, 1.0, &fd, &quad)?;
            let value = raw / log_gamma(nu + 1.0)?.exp();
            MeasureReport::new(
                value,
                1e-3 * (1.0 + value.abs()),
                Method::Quadrature,
                format!("fractional derivative of the joint generating function, order {nu}"),
            )
        }
    };
    Ok((direct, recovered))
}

fn anchor2(kind: MeasureKind) -> ParamPair {
    match kind {
        MeasureKind::Cre => ParamPair::new(0.0, 1.0),
        MeasureKind::Ce => ParamPair::new(1.0, 0.0),
    }
}

/// Two-dimensional odds form ∬_S (F̄/F)^β dx dy = G(−β, β).
pub fn odds2(v: &BivariateDistribution, beta_exp: f64, spec: &QuadSpec) -> Result<MeasureReport> {
    let p = ParamPair::new(-beta_exp, beta_exp);
    if in_domain2(v, p) == crate::cigf::DomainStatus::Outside {
        return Err(Error::Domain(format!(
            "beta = {beta_exp} lies outside the odds-form domain of {:?}",
            v.tag()
        )));
    }
    if let Some(c) = cigf2_closed_form(v, p)? {
        return Ok(MeasureReport::new(
            c,
            1e-13 * c.abs(),
            Method::ClosedForm,
            "odds form via the closed generating function",
        ));
    }
    let (region, tail) = truncated_region(v, spec)?;
    let vv = v.clone();
    let est = integrate_2d(
        move |x, y| {
            let f = vv.cdf(x, y);
            let s = vv.sf(x, y);
            if f <= 0.0 || s < 0.0 {
                0.0
            } else {
                (s / f).powf(beta_exp)
            }
        },
        &region,
        spec,
    )?;
    Ok(MeasureReport::new(
        est.value,
        est.err_est + tail,
        Method::Quadrature,
        "two-dimensional odds integral",
    ))
}

/// Plain Monte Carlo of the generating-function integrand over the unit
/// square, used to cross-check the quadrature for the density x + y.
pub fn cigf2_unit_square_mc(
    v: &BivariateDistribution,
    p: ParamPair,
    n_mc: u64,
    seed: u64,
) -> Result<MeasureReport> {
    if n_mc == 0 {
        return Err(Error::domain("Monte Carlo needs n_mc >= 1"));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_mc {
        let x: f64 = rng.gen();
        let y: f64 = rng.gen();
        let f = v.cdf(x, y);
        let s = v.sf(x, y);
        let g = if f > 0.0 && s > 0.0 {
            f.powf(p.alpha) * s.powf(p.beta)
        } else {
            0.0
        };
        sum += g;
        sum_sq += g * g;
    }
    let n = n_mc as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    Ok(MeasureReport::new(
        mean,
        3.0 * (var / n).sqrt(),
        Method::MonteCarlo,
        format!("unit-square Monte Carlo, {n_mc} draws, seed {seed}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec() -> QuadSpec {
        QuadSpec::default()
    }

    #[test]
    fn four_point_cdf_and_value() {
        let v = four_point(0.0).unwrap();
        assert_relative_eq!(v.cdf(0.5, 0.5), 0.25);
        assert_relative_eq!(v.sf(0.5, 0.5), 0.25);
        let v = four_point(0.1).unwrap();
        let g = cigf2(&v, ParamPair::new(1.0, 1.0), &spec()).unwrap();
        assert_relative_eq!(g.value, 0.1225, max_relative = 1e-12);
        assert!(four_point(0.3).is_err());
    }

    #[test]
    fn triangle_cdf_values() {
        let v = triangle_uniform();
        assert_relative_eq!(v.cdf(0.5, 0.25), 0.25, max_relative = 1e-14);
        assert_relative_eq!(v.sf(0.25, 0.25), 0.25, max_relative = 1e-14);
        assert_relative_eq!(v.cdf(1.0, 1.0), 1.0);
        // continuity across the hypotenuse
        assert_relative_eq!(v.cdf(0.5, 0.5), 0.5, max_relative = 1e-12);
    }

    #[test]
    fn sum_density_cdf_values() {
        let v = sum_density();
        assert_relative_eq!(v.sf(0.0, 0.0), 1.0);
        assert_relative_eq!(v.cdf(1.0, 1.0), 1.0);
        assert_relative_eq!(v.cdf(0.5, 0.5), 0.125, max_relative = 1e-14);
        // marginal sanity
        let (mx, _) = v.marginals().unwrap();
        assert_relative_eq!(mx.cdf(0.5), 0.375, max_relative = 1e-12);
        assert_relative_eq!(mx.quantile(0.375), 0.5, max_relative = 1e-12);
        assert_relative_eq!(mx.mean().unwrap(), 7.0 / 12.0, max_relative = 1e-12);
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let s = spec();
        for v in [four_point(0.1).unwrap(), triangle_uniform()] {
            for &a in &[0.5, 1.0, 2.0] {
                for &b in &[0.5, 1.0, 2.0] {
                    let p = ParamPair::new(a, b);
                    let closed = cigf2(&v, p, &s).unwrap();
                    let quad = cigf2_quadrature(&v, p, &s).unwrap();
                    assert!(
                        (closed.value - quad.value).abs() <= 1e-8 * (1.0 + closed.value),
                        "{:?} ({a},{b}): closed {} vs quad {}",
                        v.tag(),
                        closed.value,
                        quad.value
                    );
                }
            }
        }
        // the worked triangle value at (1, 1), and an asymmetric pair
        // frozen from 30-digit quadrature of the defining integral
        let g = cigf2(&triangle_uniform(), ParamPair::new(1.0, 1.0), &s).unwrap();
        assert_relative_eq!(g.value, 1.0 / 180.0, max_relative = 1e-12);
        let g = cigf2(&triangle_uniform(), ParamPair::new(0.5, 2.0), &s).unwrap();
        assert_relative_eq!(g.value, 0.005289146354950436, max_relative = 1e-11);
    }

    #[test]
    fn sum_density_quadrature_against_monte_carlo() {
        let s = spec();
        let v = sum_density();
        let p = ParamPair::new(1.0, 1.0);
        let quad = cigf2_quadrature(&v, p, &s).unwrap();
        let mc = cigf2_unit_square_mc(&v, p, 200_000, 99).unwrap();
        assert!(
            (quad.value - mc.value).abs() <= mc.err_est,
            "quad {} vs mc {} +- {}",
            quad.value,
            mc.value,
            mc.err_est
        );
    }

    #[test]
    fn product_factorization() {
        let s = spec();
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        let (joint, prod) = cigf2_product_check(&u, &u, ParamPair::new(1.0, 1.0), &s).unwrap();
        assert_relative_eq!(prod.value, 1.0 / 36.0, max_relative = 1e-10);
        assert!(
            (joint.value - prod.value).abs() <= 1e-7 * (1.0 + prod.value),
            "joint {} vs product {}",
            joint.value,
            prod.value
        );

        let e = Distribution::exponential(1.0).unwrap();
        let (joint, prod) = cigf2_product_check(&e, &u, ParamPair::new(1.0, 1.0), &s).unwrap();
        assert_relative_eq!(prod.value, 1.0 / 12.0, max_relative = 1e-10);
        assert!((joint.value - prod.value).abs() <= 1e-7 * (1.0 + prod.value));

        // a degenerate factor kills the product
        let d = Distribution::degenerate(1.0).unwrap();
        let (joint, prod) = cigf2_product_check(&d, &u, ParamPair::new(1.0, 1.0), &s).unwrap();
        assert!(joint.value.abs() <= 1e-9);
        assert_eq!(prod.value, 0.0);
    }

    #[test]
    fn joint_entropies() {
        let s = spec();
        // constant integrand over the unit square
        let v = four_point(0.1).unwrap();
        let expect = -(0.35_f64) * 0.35_f64.ln();
        assert_relative_eq!(
            joint_cre(&v, &s).unwrap().value,
            expect,
            max_relative = 1e-9
        );
        assert_relative_eq!(joint_ce(&v, &s).unwrap().value, expect, max_relative = 1e-9);

        // independent uniform pair: CE(X,Y) = 1/4
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        let pu = product(&u, &u).unwrap();
        assert_relative_eq!(joint_ce(&pu, &s).unwrap().value, 0.25, max_relative = 1e-7);

        // independent unit exponentials: CRE(X,Y) = 2
        let e = Distribution::exponential(1.0).unwrap();
        let pe = product(&e, &e).unwrap();
        assert_relative_eq!(joint_cre(&pe, &s).unwrap().value, 2.0, max_relative = 1e-6);
    }

    #[test]
    fn generalized_joint_orders() {
        let s = spec();
        let v = four_point(0.1).unwrap();
        let q: f64 = 0.35;
        for n in [1u32, 2, 3] {
            let expect = q * (-q.ln()).powi(n as i32) / (1..=n).map(|i| i as f64).product::<f64>();
            assert_relative_eq!(
                joint_cre_n(&v, n, &s).unwrap().value,
                expect,
                max_relative = 1e-9
            );
        }
        // fractional order against the constant-integrand closed value
        let f05 = joint_cre_frac(&v, 0.5, &s).unwrap().value;
        let expect = q * (-q.ln()).sqrt() / log_gamma(1.5).unwrap().exp();
        assert_relative_eq!(f05, expect, max_relative = 1e-9);
        assert!(joint_ce_n(&v, 0, &s).is_err());
    }

    #[test]
    fn recovery_from_joint_generating_function() {
        let s = spec();
        let v = four_point(0.1).unwrap();
        let (direct, rec) =
            joint_recovery_check(&v, MeasureKind::Cre, RecoveryOrder::Integer(1), &s).unwrap();
        assert!(
            (direct.value - rec.value).abs() <= 1e-5 * (1.0 + direct.value),
            "{} vs {}",
            direct.value,
            rec.value
        );

        // the triangle admits the survival-side recovery
        let t = triangle_uniform();
        let (direct, rec) =
            joint_recovery_check(&t, MeasureKind::Cre, RecoveryOrder::Integer(1), &s).unwrap();
        assert!(
            (direct.value - rec.value).abs() <= 1e-4 * (1.0 + direct.value),
            "{} vs {}",
            direct.value,
            rec.value
        );

        // independent uniforms, distribution side
        let u = Distribution::uniform(0.0, 1.0).unwrap();
        let pu = product(&u, &u).unwrap();
        let (direct, rec) =
            joint_recovery_check(&pu, MeasureKind::Ce, RecoveryOrder::Integer(1), &s).unwrap();
        assert_relative_eq!(direct.value, 0.25, max_relative = 1e-6);
        assert!((direct.value - rec.value).abs() <= 1e-4 * (1.0 + direct.value));

        // fractional recovery on the closed-form example
        let (direct, rec) =
            joint_recovery_check(&v, MeasureKind::Cre, RecoveryOrder::Fractional(0.5), &s).unwrap();
        assert!(
            (direct.value - rec.value).abs() <= 1e-3 * (1.0 + direct.value),
            "{} vs {}",
            direct.value,
            rec.value
        );
    }

    #[test]
    fn independence_identities_fail_for_dependent_vectors() {
        let s = spec();
        // E(Y)·CRE(X) + E(X)·CRE(Y) for the four-point marginals
        let v = four_point(0.1).unwrap();
        let (mx, my) = v.marginals().unwrap().clone();
        let cre_x = crate::entropy::cre(&mx, &s).unwrap().value;
        let cre_y = crate::entropy::cre(&my, &s).unwrap().value;
        let rhs = my.mean().unwrap() * cre_x + mx.mean().unwrap() * cre_y;
        let lhs = joint_cre(&v, &s).unwrap().value;
        assert!(
            (lhs - rhs).abs() > 0.01,
            "the independence identity must fail for theta = 0.1: {lhs} vs {rhs}"
        );

        // and holds at theta = 0 (independent coin pair)
        let v0 = four_point(0.0).unwrap();
        let lhs0 = joint_cre(&v0, &s).unwrap().value;
        let rhs0 = 0.5 * cre_x + 0.5 * cre_y;
        assert!(
            (lhs0 - rhs0).abs() <= 1e-7 * (1.0 + rhs0),
            "{lhs0} vs {rhs0}"
        );
    }

    #[test]
    fn odds_form_2d() {
        let s = spec();
        // beta = 0 returns the area of S
        let t = triangle_uniform();
        let area = odds2(&t, 0.0, &s).unwrap();
        assert_relative_eq!(area.value, 0.5, max_relative = 1e-8);
        let sq = sum_density();
        let area = odds2(&sq, 0.0, &s).unwrap();
        assert_relative_eq!(area.value, 1.0, max_relative = 1e-8);

        // equal CDF and SF make the odds ratio one for every beta
        let v = four_point(0.1).unwrap();
        for b in [0.5, 1.0, 2.0] {
            assert_relative_eq!(odds2(&v, b, &s).unwrap().value, 1.0, max_relative = 1e-10);
        }

        // the triangle at beta = 1 needs G(-1, 1), which diverges:
        // both routes refuse
        assert!(odds2(&t, 1.0, &s).is_err());
        assert!(cigf2(&t, ParamPair::new(-1.0, 1.0), &s).is_err());
    }
}
