//! Order statistics and multi-component stress–strength reliability.
//!
//! The generating functions of the sample maximum and minimum expand into
//! binomial series over the one-argument marginals; k-out-of-n system
//! means are finite sums of generating-function values; and the
//! reliability of a system in which at least k of n i.i.d. strengths
//! must exceed a common random stress,
//!
//! ```text
//! R(k, n) = Σ_{j=k}^{n} C(n, j) ∫ F̄(t)^j F(t)^{n−j} dF_T(t),
//! ```
//!
//! is evaluated by quadrature, by generating-function sums and a
//! recurrence when the stress is uniform, in closed form under a power
//! law, and by Monte Carlo as an independent check.

use rand::{Rng, SeedableRng};

use crate::cigf::{cigf, MeasureReport, Method, ParamPair};
use crate::distributions::{Distribution, Tag};
use crate::error::{Error, Result};
use crate::numerics::quad::{integrate_1d, QuadSpec};
use crate::numerics::series::alternating_series;
use crate::numerics::special::{gen_binomial, log_gamma};

/// A stress–strength system: n i.i.d. strengths, survival threshold k,
/// and an independent common stress.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    pub n: u32,
    pub k: u32,
    pub strength: Distribution,
    pub stress: Distribution,
}

impl SystemSpec {
    pub fn new(n: u32, k: u32, strength: Distribution, stress: Distribution) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("a system needs at least one component"));
        }
        if k > n {
            return Err(Error::domain(format!("threshold k = {k} exceeds n = {n}")));
        }
        Ok(SystemSpec {
            n,
            k,
            strength,
            stress,
        })
    }
}

/// Trial budget and seeding for the Monte Carlo paths. The same seed and
/// stream count always reproduce the same estimate.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct MonteCarloConfig {
    pub n_trials: u64,
    pub seed: u64,
    pub n_streams: u32,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        MonteCarloConfig {
            n_trials: 1_000_000,
            seed: 0x5EED,
            n_streams: 1,
        }
    }
}

impl MonteCarloConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_trials < 1 || self.n_streams < 1 {
            return Err(Error::domain(
                "Monte Carlo needs n_trials >= 1 and n_streams >= 1",
            ));
        }
        Ok(())
    }

    pub(crate) fn stream_rng(&self, stream: u32) -> rand_chacha::ChaCha8Rng {
        rand_chacha::ChaCha8Rng::seed_from_u64(splitmix64(
            self.seed ^ (stream as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        ))
    }

    pub(crate) fn stream_trials(&self, stream: u32) -> u64 {
        let base = self.n_trials / self.n_streams as u64;
        let extra = self.n_trials % self.n_streams as u64;
        base + if (stream as u64) < extra { 1 } else { 0 }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Binomial coefficient C(n, j) as a float.
fn binom(n: u32, j: u32) -> f64 {
    gen_binomial(n as f64, j)
}

/// Generating function of the sample maximum of n i.i.d. copies:
/// Σᵢ (−1)ⁱ C(β, i) H(n(i + α)). Requires H finite along the series,
/// which rules out laws with an unbounded right support end.
pub fn cigf_max_series(
    x: &Distribution,
    n: u32,
    p: ParamPair,
    spec: &QuadSpec,
) -> Result<MeasureReport> {
    if n < 1 {
        return Err(Error::domain("sample size must be at least 1"));
    }
    let term = |i: u32| -> Result<f64> {
        let c = gen_binomial(p.beta, i);
        if c == 0.0 {
            return Ok(0.0);
        }
        let h = cigf(
            x,
            ParamPair::new(n as f64 * (i as f64 + p.alpha), 0.0),
            spec,
        )?
        .value;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        Ok(sign * c * h)
    };
    let s = alternating_series(term, spec)?;
    Ok(MeasureReport::new(
        s.value,
        s.err_est,
        Method::Series,
        format!(
            "maximum order statistic series, n = {n}, {} terms",
            s.n_terms
        ),
    ))
}

/// Generating function of the sample minimum of n i.i.d. copies:
/// Σⱼ (−1)ʲ C(α, j) K(n(j + β)).
pub fn cigf_min_series(
    x: &Distribution,
    n: u32,
    p: ParamPair,
    spec: &QuadSpec,
) -> Result<MeasureReport> {
    if n < 1 {
        return Err(Error::domain("sample size must be at least 1"));
    }
    let term = |j: u32| -> Result<f64> {
        let c = gen_binomial(p.alpha, j);
        if c == 0.0 {
            return Ok(0.0);
        }
        let k = cigf(x, ParamPair::new(0.0, n as f64 * (j as f64 + p.beta)), spec)?.value;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        Ok(sign * c * k)
    };
    let s = alternating_series(term, spec)?;
    Ok(MeasureReport::new(
        s.value,
        s.err_est,
        Method::Series,
        format!(
            "minimum order statistic series, n = {n}, {} terms",
            s.n_terms
        ),
    ))
}

/// Mean of the k-th order statistic out of n:
/// E X₍k:n₎ = Σ_{j=0}^{k−1} C(n, j) G(j, n−j); k = 1 collapses to K(n).
pub fn korn_mean(x: &Distribution, k: u32, n: u32, spec: &QuadSpec) -> Result<MeasureReport> {
    if !(1 <= k && k <= n) {
        return Err(Error::domain(format!(
            "need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    let mut total = 0.0;
    let mut err = 0.0;
    for j in 0..k {
        let g = cigf(x, ParamPair::new(j as f64, (n - j) as f64), spec)?;
        let c = binom(n, j);
        total += c * g.value;
        err += c * g.err_est;
    }
    Ok(MeasureReport::new(
        total,
        err,
        Method::Quadrature,
        format!("order-statistic mean, k = {k}, n = {n}"),
    ))
}

/// Atoms of a finitely supported stress, if it is one.
pub(crate) fn stress_atoms(d: &Distribution) -> Option<Vec<(f64, f64)>> {
    match d.tag() {
        Tag::Empirical(e) => Some(
            e.points()
                .iter()
                .copied()
                .zip(e.probs().iter().copied())
                .collect(),
        ),
        Tag::Bernoulli { p } => Some(vec![(0.0, 1.0 - p), (1.0, *p)]),
        Tag::Degenerate { at } => Some(vec![(*at, 1.0)]),
        _ => None,
    }
}

/// Reliability of the k-out-of-n stress–strength system under a general
/// stress law: quadrature against the stress density, or an atom sum for
/// a discrete stress. R(0, n) = 1 by convention.
pub fn rkn_general(sys: &SystemSpec, spec: &QuadSpec) -> Result<MeasureReport> {
    if sys.k == 0 {
        return Ok(MeasureReport::new(1.0, 0.0, Method::ClosedForm, "k = 0"));
    }
    let n = sys.n;
    let k = sys.k;
    let x = &sys.strength;
    let kernel = |t: f64| -> f64 {
        let f = x.cdf(t);
        let s = x.sf(t);
        let mut acc = 0.0;
        for j in k..=n {
            acc += binom(n, j) * s.powi(j as i32) * f.powi((n - j) as i32);
        }
        acc
    };

    if let Some(atoms) = stress_atoms(&sys.stress) {
        let v = atoms.iter().map(|&(t, p)| p * kernel(t)).sum::<f64>();
        return Ok(MeasureReport::new(
            v,
            1e-14,
            Method::ClosedForm,
            "discrete stress atom sum",
        ));
    }

    if !sys.stress.has_pdf() {
        return Err(Error::domain(
            "the stress law must be discrete or have a density".to_string(),
        ));
    }
    let t_sup = sys.stress.support();
    let lo = if t_sup.lo.is_finite() {
        t_sup.lo
    } else {
        sys.stress.quantile(spec.tail_mass)
    };
    let hi = if t_sup.hi.is_finite() {
        t_sup.hi
    } else {
        sys.stress.quantile(1.0 - spec.tail_mass)
    };
    let stress = sys.stress.clone();
    let est = integrate_1d(
        |t: f64| kernel(t) * stress.pdf(t).unwrap_or(f64::NAN),
        lo,
        hi,
        spec,
    )?;
    let tail = if t_sup.is_bounded() {
        0.0
    } else {
        2.0 * spec.tail_mass
    };
    Ok(MeasureReport::new(
        est.value.clamp(0.0, 1.0),
        est.err_est + tail,
        Method::Quadrature,
        "stress-density quadrature",
    ))
}

/// Reliability under a stress uniform on (l, r) shared with the strength
/// support: R(k, n) = (1/(r−l)) Σ_{j=k}^n C(n, j) G(n−j, j).
pub fn rkn_uniform_stress(
    x: &Distribution,
    k: u32,
    n: u32,
    lo: f64,
    hi: f64,
    spec: &QuadSpec,
) -> Result<MeasureReport> {
    if k > n || n < 1 {
        return Err(Error::domain(format!(
            "need 0 <= k <= n, n >= 1; got k = {k}, n = {n}"
        )));
    }
    let sup = x.support();
    if !(sup.lo - lo).abs().le(&1e-12) || !(sup.hi - hi).abs().le(&1e-12) {
        return Err(Error::domain(format!(
            "strength support [{}, {}] must match the stress support [{lo}, {hi}]",
            sup.lo, sup.hi
        )));
    }
    if sys_width(lo, hi).is_err() {
        return Err(Error::domain("stress support must be bounded"));
    }
    if k == 0 {
        return Ok(MeasureReport::new(1.0, 0.0, Method::ClosedForm, "k = 0"));
    }
    let mut total = 0.0;
    let mut err = 0.0;
    for j in k..=n {
        let g = cigf(x, ParamPair::new((n - j) as f64, j as f64), spec)?;
        let c = binom(n, j);
        total += c * g.value;
        err += c * g.err_est;
    }
    let w = hi - lo;
    Ok(MeasureReport::new(
        total / w,
        err / w,
        Method::Quadrature,
        format!("uniform-stress sum, k = {k}, n = {n}"),
    ))
}

fn sys_width(lo: f64, hi: f64) -> Result<f64> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(hi - lo)
    } else {
        Err(Error::domain(format!("invalid support [{lo}, {hi}]")))
    }
}

/// The whole reliability profile R(0, n) … R(n, n) under a uniform
/// stress, from the downward recurrence
/// R(k+1, n) = R(k, n) − C(n, k) G(n−k, k) / (r − l), seeded at 1.
pub fn rkn_recurrence(
    x: &Distribution,
    n: u32,
    lo: f64,
    hi: f64,
    spec: &QuadSpec,
) -> Result<Vec<f64>> {
    let w = sys_width(lo, hi)?;
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut r = 1.0;
    out.push(r);
    for k in 0..n {
        let g = cigf(x, ParamPair::new((n - k) as f64, k as f64), spec)?.value;
        r -= binom(n, k) * g / w;
        out.push(r);
    }
    Ok(out)
}

/// Closed-form reliability for strengths with distribution function
/// x^θ on (0, 1) under a uniform stress:
///
/// ```text
/// R(k, n) = Γ(n+1) Γ(n−k+1+1/θ) / (Γ(n+1+1/θ) Γ(n−k+1))
/// ```
///
/// θ = 1 reduces to 1 − k/(n+1).
pub fn rkn_power_closed(theta: f64, k: u32, n: u32) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(Error::domain(format!(
            "theta must be positive, got {theta}"
        )));
    }
    if k > n {
        return Err(Error::domain(format!("k = {k} exceeds n = {n}")));
    }
    if k == 0 {
        return Ok(1.0);
    }
    let it = 1.0 / theta;
    let ln = log_gamma(n as f64 + 1.0)? + log_gamma((n - k) as f64 + 1.0 + it)?
        - log_gamma(n as f64 + 1.0 + it)?
        - log_gamma((n - k) as f64 + 1.0)?;
    Ok(ln.exp())
}

/// Monte Carlo estimate of R(k, n): the fraction of trials in which at
/// least k of n sampled strengths exceed the sampled stress.
/// Deterministic for a fixed (seed, n_streams) pair.
pub fn rkn_monte_carlo(sys: &SystemSpec, mc: &MonteCarloConfig) -> Result<MeasureReport> {
    mc.validate()?;
    if sys.k == 0 {
        return Ok(MeasureReport::new(1.0, 0.0, Method::MonteCarlo, "k = 0"));
    }
    let mut survivors: u64 = 0;
    for stream in 0..mc.n_streams {
        let mut rng = mc.stream_rng(stream);
        let trials = mc.stream_trials(stream);
        for _ in 0..trials {
            let t = sys.stress.sample_from_u(rng.gen::<f64>());
            let mut exceed = 0u32;
            for _ in 0..sys.n {
                if sys.strength.sample_from_u(rng.gen::<f64>()) > t {
                    exceed += 1;
                }
            }
            if exceed >= sys.k {
                survivors += 1;
            }
        }
    }
    let n = mc.n_trials as f64;
    let r = survivors as f64 / n;
    let err = 3.0 * (r * (1.0 - r) / n).sqrt();
    Ok(MeasureReport::new(
        r,
        err,
        Method::MonteCarlo,
        format!(
            "{} trials, seed {}, {} streams",
            mc.n_trials, mc.seed, mc.n_streams
        ),
    ))
}

/// Reliability profiles R(k, n) for k = 0..n under a power-law strength,
/// one row (θ, k, R) per point; ready for CSV output.
pub fn figure1_data(thetas: &[f64], n: u32) -> Result<Vec<(f64, u32, f64)>> {
    let mut rows = Vec::with_capacity(thetas.len() * (n as usize + 1));
    for &theta in thetas {
        for k in 0..=n {
            rows.push((theta, k, rkn_power_closed(theta, k, n)?));
        }
    }
    Ok(rows)
}
