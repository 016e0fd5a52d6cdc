//! Univariate distributions: the parametric families with closed-form
//! CDF/SF/quantile, empirical laws built from samples, and the
//! equilibrium / proportional-hazard / proportional-reversed-hazard /
//! affine transforms.
//!
//! A [`Distribution`] is an immutable handle (cheap to clone, safe to
//! share across threads) exposing the distribution function F, the
//! survival function F̄ = 1 − F, the right-continuous quantile
//! F⁻¹(u) = sup{x : F(x) ≤ u}, and optionally a density and a moment
//! generating function.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::quad::{integrate_1d, QuadSpec};

/// Closed interval of the real line, possibly unbounded. For a
/// distribution these are the essential support limits
/// l = inf{x : F(x) > 0} and r = sup{x : F̄(x) > 0}; degenerate laws have
/// l = r.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SupportInterval {
    pub lo: f64,
    pub hi: f64,
}

impl SupportInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::domain(format!("invalid support [{lo}, {hi}]")));
        }
        Ok(SupportInterval { lo, hi })
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Overlap of two closed intervals; a single shared point counts.
    pub fn intersect(&self, other: &SupportInterval) -> Option<SupportInterval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(SupportInterval { lo, hi })
    }

    pub fn approx_eq(&self, other: &SupportInterval, tol: f64) -> bool {
        let close = |a: f64, b: f64| {
            (a.is_infinite() && b.is_infinite() && a.signum() == b.signum()) || (a - b).abs() <= tol
        };
        close(self.lo, other.lo) && close(self.hi, other.hi)
    }
}

/// Family identifier carried alongside the function table; closed-form
/// dispatch and domain checks key off it.
#[derive(Debug, Clone)]
pub enum Tag {
    Bernoulli {
        p: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    Power {
        theta: f64,
    },
    Exponential {
        rate: f64,
    },
    Laplace {
        scale: f64,
    },
    Erlang2 {
        rate: f64,
    },
    Degenerate {
        at: f64,
    },
    Empirical(Arc<EmpiricalDiscrete>),
    /// A transform of another law with no closed-form table entry.
    Derived(String),
}

impl Tag {
    pub fn label(&self) -> String {
        match self {
            Tag::Bernoulli { p } => format!("bern:{p}"),
            Tag::Uniform { lo, hi } => format!("unif:{lo}:{hi}"),
            Tag::Power { theta } => format!("power:{theta}"),
            Tag::Exponential { rate } => format!("exp:{rate}"),
            Tag::Laplace { scale } => format!("laplace:{scale}"),
            Tag::Erlang2 { rate } => format!("erlang2:{rate}"),
            Tag::Degenerate { at } => format!("degen:{at}"),
            Tag::Empirical(e) => format!("emp[n={}]", e.len()),
            Tag::Derived(s) => s.clone(),
        }
    }
}

trait Law: Send + Sync {
    fn cdf(&self, x: f64) -> f64;
    fn sf(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }
    fn quantile(&self, u: f64) -> f64;
    fn pdf(&self, _x: f64) -> Option<f64> {
        None
    }
    fn mgf(&self, _s: f64) -> Option<f64> {
        None
    }
    fn support(&self) -> SupportInterval;
    fn mean(&self) -> Option<f64>;
}

/// An immutable univariate law.
#[derive(Clone)]
pub struct Distribution {
    law: Arc<dyn Law>,
    tag: Tag,
}

impl std::fmt::Debug for Distribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Distribution({})", self.tag.label())
    }
}

impl Distribution {
    pub fn cdf(&self, x: f64) -> f64 {
        self.law.cdf(x)
    }

    pub fn sf(&self, x: f64) -> f64 {
        self.law.sf(x)
    }

    /// Right-continuous inverse of the CDF, F⁻¹(u) = sup{x : F(x) ≤ u}.
    pub fn quantile(&self, u: f64) -> f64 {
        self.law.quantile(u.clamp(0.0, 1.0))
    }

    /// Density at `x`, if the law is absolutely continuous.
    pub fn pdf(&self, x: f64) -> Option<f64> {
        self.law.pdf(x)
    }

    /// Moment generating function E[e^{sX}], `None` where unavailable or
    /// infinite.
    pub fn mgf(&self, s: f64) -> Option<f64> {
        self.law.mgf(s)
    }

    pub fn support(&self) -> SupportInterval {
        self.law.support()
    }

    pub fn mean(&self) -> Option<f64> {
        self.law.mean()
    }

    pub fn tag(&self) -> &Tag {
        &self.tag
    }

    pub fn is_degenerate(&self) -> bool {
        match &self.tag {
            Tag::Degenerate { .. } => true,
            Tag::Empirical(e) => e.len() == 1,
            _ => self.support().width() == 0.0,
        }
    }

    pub fn has_pdf(&self) -> bool {
        let s = self.support();
        let probe = if s.is_bounded() {
            0.5 * (s.lo + s.hi)
        } else {
            self.quantile(0.5)
        };
        self.law.pdf(probe).is_some()
    }

    /// Cumulative hazard Λ(x) = −log F̄(x); nondecreasing.
    pub fn cum_hazard(&self, x: f64) -> f64 {
        -self.sf(x).ln()
    }

    /// Cumulative reversed hazard T(x) = −log F(x); nonincreasing.
    pub fn cum_rev_hazard(&self, x: f64) -> f64 {
        -self.cdf(x).ln()
    }

    /// Odds function F̄(x)/F(x) on the open support.
    pub fn odds(&self, x: f64) -> Result<f64> {
        let f = self.cdf(x);
        let s = self.sf(x);
        if !(f > 0.0) || !(s > 0.0) {
            return Err(Error::domain(format!(
                "odds undefined at x = {x}: needs F(x) and F̄(x) both positive"
            )));
        }
        Ok(s / f)
    }

    /// Inverse-transform sample from a uniform draw in (0, 1).
    pub fn sample_from_u(&self, u: f64) -> f64 {
        self.quantile(u)
    }

    // --- constructors ---------------------------------------------------

    pub fn bernoulli(p: f64) -> Result<Distribution> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!(
                "bernoulli requires p in (0,1), got {p}"
            )));
        }
        Ok(Distribution {
            law: Arc::new(Bernoulli { p }),
            tag: Tag::Bernoulli { p },
        })
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Distribution> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::domain(format!(
                "uniform requires finite lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Distribution {
            law: Arc::new(Uniform { lo, hi }),
            tag: Tag::Uniform { lo, hi },
        })
    }

    /// F(x) = x^θ on (0, 1).
    pub fn power(theta: f64) -> Result<Distribution> {
        if !(theta > 0.0) {
            return Err(Error::domain(format!(
                "power requires theta > 0, got {theta}"
            )));
        }
        Ok(Distribution {
            law: Arc::new(PowerLaw { theta }),
            tag: Tag::Power { theta },
        })
    }

    pub fn exponential(rate: f64) -> Result<Distribution> {
        if !(rate > 0.0) {
            return Err(Error::domain(format!(
                "exponential requires rate > 0, got {rate}"
            )));
        }
        Ok(Distribution {
            law: Arc::new(Exponential { rate }),
            tag: Tag::Exponential { rate },
        })
    }

    /// Symmetric Laplace law centered at 0 with the given scale.
    pub fn laplace(scale: f64) -> Result<Distribution> {
        if !(scale > 0.0) {
            return Err(Error::domain(format!(
                "laplace requires scale > 0, got {scale}"
            )));
        }
        Ok(Distribution {
            law: Arc::new(Laplace { scale }),
            tag: Tag::Laplace { scale },
        })
    }

    /// Gamma law with shape 2: F(x) = 1 − e^{−λx} − λx e^{−λx}.
    pub fn erlang2(rate: f64) -> Result<Distribution> {
        if !(rate > 0.0) {
            return Err(Error::domain(format!(
                "erlang2 requires rate > 0, got {rate}"
            )));
        }
        Ok(Distribution {
            law: Arc::new(Erlang2 { rate }),
            tag: Tag::Erlang2 { rate },
        })
    }

    pub fn degenerate(at: f64) -> Result<Distribution> {
        if !at.is_finite() {
            return Err(Error::domain(format!(
                "degenerate point must be finite, got {at}"
            )));
        }
        Ok(Distribution {
            law: Arc::new(Degenerate { at }),
            tag: Tag::Degenerate { at },
        })
    }

    pub fn from_samples(xs: &[f64]) -> Result<Distribution> {
        Ok(EmpiricalDiscrete::from_samples(xs)?.into_distribution())
    }

    pub fn from_empirical(e: EmpiricalDiscrete) -> Distribution {
        e.into_distribution()
    }

    // --- transforms -----------------------------------------------------

    /// Law of γX + δ, γ ≠ 0. Negative γ reflects the CDF/SF pair.
    pub fn affine(&self, gamma: f64, delta: f64) -> Result<Distribution> {
        if gamma == 0.0 || !gamma.is_finite() || !delta.is_finite() {
            return Err(Error::domain(format!(
                "affine requires finite gamma != 0, got gamma={gamma}, delta={delta}"
            )));
        }
        // exact rewrites where the family is closed under the map
        match self.tag {
            Tag::Uniform { lo, hi } => {
                let (a, b) = (gamma * lo + delta, gamma * hi + delta);
                return Distribution::uniform(a.min(b), a.max(b));
            }
            Tag::Degenerate { at } => return Distribution::degenerate(gamma * at + delta),
            Tag::Exponential { rate } if gamma > 0.0 && delta == 0.0 => {
                return Distribution::exponential(rate / gamma);
            }
            Tag::Erlang2 { rate } if gamma > 0.0 && delta == 0.0 => {
                return Distribution::erlang2(rate / gamma);
            }
            Tag::Laplace { scale } if delta == 0.0 => {
                return Distribution::laplace(scale * gamma.abs());
            }
            _ => {}
        }
        let tag = Tag::Derived(format!("affine({}, {gamma}, {delta})", self.tag.label()));
        Ok(Distribution {
            law: Arc::new(Affine {
                inner: self.clone(),
                gamma,
                delta,
            }),
            tag,
        })
    }

    /// Equilibrium law, with density F̄(x)/E[X] on (0, r); requires a
    /// nonnegative parent with finite positive mean.
    pub fn equilibrium(&self) -> Result<Distribution> {
        let sup = self.support();
        if !(sup.lo >= 0.0) {
            return Err(Error::domain(
                "equilibrium transform requires a nonnegative random variable",
            ));
        }
        let mean = self
            .mean()
            .filter(|m| m.is_finite() && *m > 0.0)
            .ok_or_else(|| Error::domain("equilibrium transform requires 0 < E[X] < inf"))?;
        match self.tag {
            // memorylessness: the exponential is its own equilibrium law
            Tag::Exponential { rate } => return Distribution::exponential(rate),
            Tag::Degenerate { at } if at > 0.0 => return Distribution::uniform(0.0, at),
            _ => {}
        }
        let tag = Tag::Derived(format!("equilibrium({})", self.tag.label()));
        Ok(Distribution {
            law: Arc::new(Equilibrium {
                inner: self.clone(),
                mean,
            }),
            tag,
        })
    }

    /// Proportional hazards: survival function raised to the γ.
    pub fn prop_hazard(&self, gamma: f64) -> Result<Distribution> {
        if !(gamma > 0.0) {
            return Err(Error::domain(format!(
                "proportional hazards requires gamma > 0, got {gamma}"
            )));
        }
        if gamma == 1.0 {
            return Ok(self.clone());
        }
        if let Tag::Exponential { rate } = self.tag {
            return Distribution::exponential(rate * gamma);
        }
        let tag = Tag::Derived(format!("phm({}, {gamma})", self.tag.label()));
        Ok(Distribution {
            law: Arc::new(PropHazard {
                inner: self.clone(),
                gamma,
            }),
            tag,
        })
    }

    /// Proportional reversed hazards: CDF raised to the θ.
    pub fn prop_rev_hazard(&self, theta: f64) -> Result<Distribution> {
        if !(theta > 0.0) {
            return Err(Error::domain(format!(
                "proportional reversed hazards requires theta > 0, got {theta}"
            )));
        }
        if theta == 1.0 {
            return Ok(self.clone());
        }
        match self.tag {
            Tag::Uniform { lo, hi } if lo == 0.0 && hi == 1.0 => {
                return Distribution::power(theta);
            }
            Tag::Power { theta: a } => return Distribution::power(a * theta),
            _ => {}
        }
        let tag = Tag::Derived(format!("prhm({}, {theta})", self.tag.label()));
        Ok(Distribution {
            law: Arc::new(PropRevHazard {
                inner: self.clone(),
                theta,
            }),
            tag,
        })
    }
}

// --- parametric families --------------------------------------------------

struct Uniform {
    lo: f64,
    hi: f64,
}

impl Law for Uniform {
    fn cdf(&self, x: f64) -> f64 {
        ((x - self.lo) / (self.hi - self.lo)).clamp(0.0, 1.0)
    }
    fn quantile(&self, u: f64) -> f64 {
        self.lo + u * (self.hi - self.lo)
    }
    fn pdf(&self, x: f64) -> Option<f64> {
        Some(if x >= self.lo && x <= self.hi {
            1.0 / (self.hi - self.lo)
        } else {
            0.0
        })
    }
    fn mgf(&self, s: f64) -> Option<f64> {
        if s == 0.0 {
            Some(1.0)
        } else {
            Some(((s * self.hi).exp() - (s * self.lo).exp()) / (s * (self.hi - self.lo)))
        }
    }
    fn support(&self) -> SupportInterval {
        SupportInterval {
            lo: self.lo,
            hi: self.hi,
        }
    }
    fn mean(&self) -> Option<f64> {
        Some(0.5 * (self.lo + self.hi))
    }
}

struct PowerLaw {
    theta: f64,
}

impl Law for PowerLaw {
    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else if x >= 1.0 {
            1.0
        } else {
            x.powf(self.theta)
        }
    }
    fn quantile(&self, u: f64) -> f64 {
        u.powf(1.0 / self.theta)
    }
    fn pdf(&self, x: f64) -> Option<f64> {
        Some(if x > 0.0 && x < 1.0 {
            self.theta * x.powf(self.theta - 1.0)
        } else {
            0.0
        })
    }
    fn mgf(&self, s: f64) -> Option<f64> {
        if s == 0.0 {
            return Some(1.0);
        }
        // no elementary form; the integrand is smooth on (0,1)
        let theta = self.theta;
        integrate_1d(
            |x: f64| (s * x).exp() * theta * x.powf(theta - 1.0),
            0.0,
            1.0,
            &QuadSpec::default(),
        )
        .ok()
        .map(|e| e.value)
    }
    fn support(&self) -> SupportInterval {
        SupportInterval { lo: 0.0, hi: 1.0 }
    }
    fn mean(&self) -> Option<f64> {
        Some(self.theta / (self.theta + 1.0))
    }
}

struct Exponential {
    rate: f64,
}

impl Law for Exponential {
    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -(-self.rate * x).exp_m1()
        }
    }
    fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else {
            (-self.rate * x).exp()
        }
    }
    fn quantile(&self, u: f64) -> f64 {
        if u >= 1.0 {
            f64::INFINITY
        } else {
            -(-u).ln_1p() / self.rate
        }
    }
    fn pdf(&self, x: f64) -> Option<f64> {
        Some(if x >= 0.0 {
            self.rate * (-self.rate * x).exp()
        } else {
            0.0
        })
    }
    fn mgf(&self, s: f64) -> Option<f64> {
        (s < self.rate).then(|| self.rate / (self.rate - s))
    }
    fn support(&self) -> SupportInterval {
        SupportInterval {
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }
    fn mean(&self) -> Option<f64> {
        Some(1.0 / self.rate)
    }
}

struct Laplace {
    scale: f64,
}

impl Law for Laplace {
    fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.5 * (x / self.scale).exp()
        } else {
            1.0 - 0.5 * (-x / self.scale).exp()
        }
    }
    fn sf(&self, x: f64) -> f64 {
        if x < 0.0 {
            1.0 - 0.5 * (x / self.scale).exp()
        } else {
            0.5 * (-x / self.scale).exp()
        }
    }
    fn quantile(&self, u: f64) -> f64 {
        if u <= 0.0 {
            f64::NEG_INFINITY
        } else if u >= 1.0 {
            f64::INFINITY
        } else if u < 0.5 {
            self.scale * (2.0 * u).ln()
        } else {
            -self.scale * (2.0 * (1.0 - u)).ln()
        }
    }
    fn pdf(&self, x: f64) -> Option<f64> {
        Some((-x.abs() / self.scale).exp() / (2.0 * self.scale))
    }
    fn mgf(&self, s: f64) -> Option<f64> {
        let b = self.scale;
        (s.abs() * b < 1.0).then(|| 1.0 / (1.0 - b * b * s * s))
    }
    fn support(&self) -> SupportInterval {
        SupportInterval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }
    fn mean(&self) -> Option<f64> {
        Some(0.0)
    }
}

struct Erlang2 {
    rate: f64,
}

impl Law for Erlang2 {
    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            let lx = self.rate * x;
            1.0 - (1.0 + lx) * (-lx).exp()
        }
    }
    fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else {
            let lx = self.rate * x;
            (1.0 + lx) * (-lx).exp()
        }
    }
    fn quantile(&self, u: f64) -> f64 {
        // monotone bisection on the closed-form CDF
        if u <= 0.0 {
            return 0.0;
        }
        if u >= 1.0 {
            return f64::INFINITY;
        }
        let mut lo = 0.0_f64;
        let mut hi = 1.0 / self.rate;
        let mut guard = 0;
        while self.cdf(hi) < u && guard < 200 {
            lo = hi;
            hi *= 2.0;
            guard += 1;
        }
        while hi - lo > 1e-12 * (1.0 + hi) {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
    fn pdf(&self, x: f64) -> Option<f64> {
        Some(if x >= 0.0 {
            self.rate * self.rate * x * (-self.rate * x).exp()
        } else {
            0.0
        })
    }
    fn mgf(&self, s: f64) -> Option<f64> {
        (s < self.rate).then(|| {
            let d = self.rate - s;
            self.rate * self.rate / (d * d)
        })
    }
    fn support(&self) -> SupportInterval {
        SupportInterval {
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }
    fn mean(&self) -> Option<f64> {
        Some(2.0 / self.rate)
    }
}

struct Bernoulli {
    p: f64,
}

impl Law for Bernoulli {
    fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else if x < 1.0 {
            1.0 - self.p
        } else {
            1.0
        }
    }
    fn quantile(&self, u: f64) -> f64 {
        if u < 1.0 - self.p {
            0.0
        } else {
            1.0
        }
    }
    fn mgf(&self, s: f64) -> Option<f64> {
        Some(1.0 - self.p + self.p * s.exp())
    }
    fn support(&self) -> SupportInterval {
        SupportInterval { lo: 0.0, hi: 1.0 }
    }
    fn mean(&self) -> Option<f64> {
        Some(self.p)
    }
}

struct Degenerate {
    at: f64,
}

impl Law for Degenerate {
    fn cdf(&self, x: f64) -> f64 {
        if x >= self.at {
            1.0
        } else {
            0.0
        }
    }
    fn quantile(&self, _u: f64) -> f64 {
        self.at
    }
    fn mgf(&self, s: f64) -> Option<f64> {
        Some((s * self.at).exp())
    }
    fn support(&self) -> SupportInterval {
        SupportInterval {
            lo: self.at,
            hi: self.at,
        }
    }
    fn mean(&self) -> Option<f64> {
        Some(self.at)
    }
}

/// A finitely supported law given by sorted atoms and probabilities.
#[derive(Debug, Clone)]
pub struct EmpiricalDiscrete {
    points: Vec<f64>,
    probs: Vec<f64>,
    cum: Vec<f64>,
}

impl EmpiricalDiscrete {
    /// Builds the empirical law of a sample: each distinct value gets
    /// probability multiplicity/n.
    pub fn from_samples(xs: &[f64]) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::domain("empirical law needs a nonempty sample"));
        }
        if xs.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("empirical law needs finite samples"));
        }
        let mut sorted = xs.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = sorted.len() as f64;
        let mut points = Vec::new();
        let mut probs = Vec::new();
        let mut i = 0;
        while i < sorted.len() {
            let v = sorted[i];
            let mut count = 0usize;
            while i < sorted.len() && sorted[i] == v {
                count += 1;
                i += 1;
            }
            points.push(v);
            probs.push(count as f64 / n);
        }
        Self::from_weighted(points, probs)
    }

    /// Builds a law from explicit atoms; probabilities must sum to 1.
    pub fn from_weighted(points: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != probs.len() {
            return Err(Error::domain(
                "empirical law needs matching nonempty atom lists",
            ));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("empirical atoms must be strictly increasing"));
        }
        if probs.iter().any(|p| !(*p > 0.0)) {
            return Err(Error::domain("empirical probabilities must be positive"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "empirical probabilities must sum to 1 (got {total})"
            )));
        }
        let mut cum = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in &probs {
            acc += p;
            cum.push(acc);
        }
        *cum.last_mut().unwrap() = 1.0;
        Ok(EmpiricalDiscrete { points, probs, cum })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Cumulative probabilities P_k = p_1 + … + p_k.
    pub fn cumulative(&self) -> &[f64] {
        &self.cum
    }

    pub fn into_distribution(self) -> Distribution {
        let e = Arc::new(self);
        Distribution {
            law: Arc::new(EmpiricalLaw(e.clone())),
            tag: Tag::Empirical(e),
        }
    }
}

struct EmpiricalLaw(Arc<EmpiricalDiscrete>);

impl Law for EmpiricalLaw {
    fn cdf(&self, x: f64) -> f64 {
        let e = &self.0;
        match e.points.iter().rposition(|&p| p <= x) {
            Some(i) => e.cum[i],
            None => 0.0,
        }
    }
    fn quantile(&self, u: f64) -> f64 {
        let e = &self.0;
        for (i, &c) in e.cum.iter().enumerate() {
            if c > u {
                return e.points[i];
            }
        }
        *e.points.last().unwrap()
    }
    fn mgf(&self, s: f64) -> Option<f64> {
        let e = &self.0;
        Some(
            e.points
                .iter()
                .zip(&e.probs)
                .map(|(&x, &p)| p * (s * x).exp())
                .sum(),
        )
    }
    fn support(&self) -> SupportInterval {
        let e = &self.0;
        SupportInterval {
            lo: e.points[0],
            hi: *e.points.last().unwrap(),
        }
    }
    fn mean(&self) -> Option<f64> {
        let e = &self.0;
        Some(e.points.iter().zip(&e.probs).map(|(&x, &p)| x * p).sum())
    }
}

// --- transforms -------------------------------------------------------------

struct Affine {
    inner: Distribution,
    gamma: f64,
    delta: f64,
}

impl Affine {
    fn back(&self, y: f64) -> f64 {
        (y - self.delta) / self.gamma
    }
}

impl Law for Affine {
    fn cdf(&self, y: f64) -> f64 {
        if self.gamma > 0.0 {
            self.inner.cdf(self.back(y))
        } else {
            // continuous-case reflection: P(γX + δ ≤ y) = F̄((y−δ)/γ)
            self.inner.sf(self.back(y))
        }
    }
    fn sf(&self, y: f64) -> f64 {
        if self.gamma > 0.0 {
            self.inner.sf(self.back(y))
        } else {
            self.inner.cdf(self.back(y))
        }
    }
    fn quantile(&self, u: f64) -> f64 {
        if self.gamma > 0.0 {
            self.gamma * self.inner.quantile(u) + self.delta
        } else {
            self.gamma * self.inner.quantile(1.0 - u) + self.delta
        }
    }
    fn pdf(&self, y: f64) -> Option<f64> {
        self.inner.pdf(self.back(y)).map(|f| f / self.gamma.abs())
    }
    fn mgf(&self, s: f64) -> Option<f64> {
        self.inner
            .mgf(self.gamma * s)
            .map(|m| (self.delta * s).exp() * m)
    }
    fn support(&self) -> SupportInterval {
        let s = self.inner.support();
        let a = self.gamma * s.lo + self.delta;
        let b = self.gamma * s.hi + self.delta;
        SupportInterval {
            lo: a.min(b),
            hi: a.max(b),
        }
    }
    fn mean(&self) -> Option<f64> {
        self.inner.mean().map(|m| self.gamma * m + self.delta)
    }
}

struct PropHazard {
    inner: Distribution,
    gamma: f64,
}

impl Law for PropHazard {
    fn cdf(&self, x: f64) -> f64 {
        1.0 - self.sf(x)
    }
    fn sf(&self, x: f64) -> f64 {
        self.inner.sf(x).powf(self.gamma)
    }
    fn quantile(&self, u: f64) -> f64 {
        self.inner.quantile(1.0 - (1.0 - u).powf(1.0 / self.gamma))
    }
    fn pdf(&self, x: f64) -> Option<f64> {
        self.inner
            .pdf(x)
            .map(|f| self.gamma * self.inner.sf(x).powf(self.gamma - 1.0) * f)
    }
    fn support(&self) -> SupportInterval {
        self.inner.support()
    }
    fn mean(&self) -> Option<f64> {
        None
    }
}

struct PropRevHazard {
    inner: Distribution,
    theta: f64,
}

impl Law for PropRevHazard {
    fn cdf(&self, x: f64) -> f64 {
        self.inner.cdf(x).powf(self.theta)
    }
    fn quantile(&self, u: f64) -> f64 {
        self.inner.quantile(u.powf(1.0 / self.theta))
    }
    fn pdf(&self, x: f64) -> Option<f64> {
        self.inner
            .pdf(x)
            .map(|f| self.theta * self.inner.cdf(x).powf(self.theta - 1.0) * f)
    }
    fn support(&self) -> SupportInterval {
        self.inner.support()
    }
    fn mean(&self) -> Option<f64> {
        None
    }
}

struct Equilibrium {
    inner: Distribution,
    mean: f64,
}

impl Equilibrium {
    fn cdf_closed(&self, x: f64) -> Option<f64> {
        if let Tag::Uniform { lo, hi } = self.inner.tag {
            if lo == 0.0 {
                let r = hi;
                let t = (x / r).clamp(0.0, 1.0);
                return Some(1.0 - (1.0 - t) * (1.0 - t));
            }
        }
        None
    }
}

impl Law for Equilibrium {
    fn cdf(&self, x: f64) -> f64 {
        if let Some(v) = self.cdf_closed(x) {
            return v;
        }
        let hi = self.support().hi;
        if x <= 0.0 {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        let spec = QuadSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-11,
            ..QuadSpec::default()
        };
        let inner = self.inner.clone();
        integrate_1d(|t| inner.sf(t), 0.0, x, &spec)
            .map(|e| (e.value / self.mean).clamp(0.0, 1.0))
            .unwrap_or(f64::NAN)
    }
    fn quantile(&self, u: f64) -> f64 {
        if let Tag::Uniform { lo, hi } = self.inner.tag {
            if lo == 0.0 {
                return hi * (1.0 - (1.0 - u).sqrt());
            }
        }
        if u <= 0.0 {
            return 0.0;
        }
        let sup_hi = self.support().hi;
        if u >= 1.0 {
            return sup_hi;
        }
        let mut lo = 0.0_f64;
        let mut hi = if sup_hi.is_finite() {
            sup_hi
        } else {
            self.inner.quantile(0.99) + 1.0
        };
        let mut guard = 0;
        while self.cdf(hi) < u && guard < 200 {
            lo = hi;
            hi *= 2.0;
            guard += 1;
        }
        for _ in 0..200 {
            if hi - lo <= 1e-11 * (1.0 + hi) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
    fn pdf(&self, x: f64) -> Option<f64> {
        let hi = self.support().hi;
        Some(if x > 0.0 && x < hi {
            self.inner.sf(x) / self.mean
        } else {
            0.0
        })
    }
    fn mgf(&self, s: f64) -> Option<f64> {
        if s == 0.0 {
            return Some(1.0);
        }
        self.inner.mgf(s).map(|m| (m - 1.0) / (s * self.mean))
    }
    fn support(&self) -> SupportInterval {
        SupportInterval {
            lo: 0.0,
            hi: self.inner.support().hi,
        }
    }
    fn mean(&self) -> Option<f64> {
        if let Tag::Uniform { lo, hi } = self.inner.tag {
            if lo == 0.0 {
                return Some(hi / 3.0);
            }
        }
        None
    }
}

/// Marginal law of the planar density x + y on the unit square:
/// F(t) = t(t+1)/2 on (0, 1), with a closed-form quantile.
pub(crate) fn sum_density_marginal() -> Distribution {
    Distribution {
        law: Arc::new(SumDensityMarginal),
        tag: Tag::Derived("sum-density-marginal".into()),
    }
}

struct SumDensityMarginal;

impl Law for SumDensityMarginal {
    fn cdf(&self, x: f64) -> f64 {
        let t = x.clamp(0.0, 1.0);
        0.5 * t * (t + 1.0)
    }
    fn quantile(&self, u: f64) -> f64 {
        ((1.0 + 8.0 * u).sqrt() - 1.0) * 0.5
    }
    fn pdf(&self, x: f64) -> Option<f64> {
        Some(if (0.0..=1.0).contains(&x) {
            x + 0.5
        } else {
            0.0
        })
    }
    fn support(&self) -> SupportInterval {
        SupportInterval { lo: 0.0, hi: 1.0 }
    }
    fn mean(&self) -> Option<f64> {
        Some(7.0 / 12.0)
    }
}

// --- CLI distribution spec strings ------------------------------------------

/// Parses a distribution spec string such as `exp:1.5`, `unif:0:1`,
/// `power:2`, `bern:0.3`, `laplace:1`, `erlang2:1`, `degen:2`, or
/// `emp:@samples.csv` (one sample per line).
pub fn parse_spec(spec: &str) -> Result<Distribution> {
    let parts: Vec<&str> = spec.trim().split(':').collect();
    let num = |s: &str| -> Result<f64> {
        s.parse::<f64>().map_err(|_| {
            Error::Parse(format!(
                "invalid number {s:?} in distribution spec {spec:?}"
            ))
        })
    };
    match parts.as_slice() {
        ["exp", l] => Distribution::exponential(num(l)?),
        ["unif", a, b] => Distribution::uniform(num(a)?, num(b)?),
        ["power", t] => Distribution::power(num(t)?),
        ["bern", p] => Distribution::bernoulli(num(p)?),
        ["laplace", s] => Distribution::laplace(num(s)?),
        ["erlang2", l] => Distribution::erlang2(num(l)?),
        ["degen", c] => Distribution::degenerate(num(c)?),
        ["emp", path] => {
            let path = path
                .strip_prefix('@')
                .ok_or_else(|| Error::Parse(format!("emp spec must be emp:@file, got {spec:?}")))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read sample file {path}: {e}")))?;
            let mut xs = Vec::new();
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                xs.push(line.parse::<f64>().map_err(|_| {
                    Error::Parse(format!(
                        "bad sample {line:?} on line {} of {path}",
                        lineno + 1
                    ))
                })?);
            }
            Distribution::from_samples(&xs)
        }
        _ => Err(Error::Parse(format!(
            "unrecognized distribution spec {spec:?}"
        ))),
    }
}
