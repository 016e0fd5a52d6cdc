//! Adaptive quadrature.
//!
//! The workhorse is a globally adaptive bisection scheme on 21-point
//! Gauss–Kronrod panels. Panels that touch an endpoint of the original
//! interval and keep dominating the error budget are handed to a
//! tanh-sinh (double exponential) rule, which absorbs algebraic and
//! logarithmic endpoint singularities of the form u^a (1−u)^b with
//! a, b > −1. Infinite intervals are mapped to finite ones first.

use std::cell::{Cell, RefCell};

use crate::error::{Error, Result};

/// Tolerances and budgets for quadrature and series evaluation.
#[derive(Debug, Clone, serde::Serialize)]
pub struct QuadSpec {
    /// Absolute tolerance on the integral value.
    pub abs_tol: f64,
    /// Relative tolerance on the integral value.
    pub rel_tol: f64,
    /// Maximum number of panel bisections.
    pub max_subdiv: u32,
    /// Probability mass allowed outside the truncated integration window
    /// when an infinite support has to be cut; must lie in (0, 1e-6).
    pub tail_mass: f64,
    /// Maximum number of series terms.
    pub series_terms_max: u32,
    /// Series terminates once a term falls below this magnitude.
    pub series_tail_tol: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_subdiv: 2000,
            tail_mass: 1e-12,
            series_terms_max: 10_000,
            series_tail_tol: 1e-12,
        }
    }
}

impl QuadSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::domain("QuadSpec: abs_tol must be > 0"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::domain("QuadSpec: rel_tol must be > 0"));
        }
        if self.max_subdiv < 1 {
            return Err(Error::domain("QuadSpec: max_subdiv must be >= 1"));
        }
        if !(self.tail_mass > 0.0 && self.tail_mass < 1e-6) {
            return Err(Error::domain("QuadSpec: tail_mass must lie in (0, 1e-6)"));
        }
        if self.series_terms_max < 1 {
            return Err(Error::domain("QuadSpec: series_terms_max must be >= 1"));
        }
        if !(self.series_tail_tol > 0.0) {
            return Err(Error::domain("QuadSpec: series_tail_tol must be > 0"));
        }
        Ok(())
    }

    /// Convergence target for a value of the given magnitude.
    pub(crate) fn tol_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// A value together with its estimated absolute error.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub err_est: f64,
}

// 21-point Gauss–Kronrod nodes and weights (10-point Gauss embedded).
const XGK21: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WG21: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
const WGK21: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// One Gauss–Kronrod pass over [a, b]. Non-finite samples yield an
/// infinite error estimate so the adaptive driver keeps splitting.
fn qk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    if !fc.is_finite() {
        return (0.0, f64::INFINITY);
    }
    let mut res_gauss = 0.0;
    let mut res_kronrod = fc * WGK21[10];
    let mut res_abs = res_kronrod.abs();
    let mut fv = [0.0_f64; 21];
    fv[20] = fc;
    let mut bad = false;

    for (j, xk) in XGK21.iter().enumerate().take(10) {
        let dx = half * xk;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        if !f1.is_finite() || !f2.is_finite() {
            bad = true;
            break;
        }
        fv[j] = f1;
        fv[10 + j] = f2;
        let fsum = f1 + f2;
        res_kronrod += WGK21[j] * fsum;
        res_abs += WGK21[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG21[j / 2] * fsum;
        }
    }
    if bad {
        return (0.0, f64::INFINITY);
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK21[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK21[j] * ((fv[j] - mean).abs() + (fv[10 + j] - mean).abs());
    }

    let value = res_kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * ((200.0 * err / res_asc).powf(1.5)).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Tanh-sinh quadrature on a finite interval. Nodes are generated from
/// their distance to the nearer endpoint, so integrands singular at the
/// endpoints are sampled without catastrophic cancellation down to the
/// spacing of floats around the endpoint; nodes whose coordinate rounds
/// into an endpoint contribute zero. Integrands singular at an endpoint
/// with a large coordinate are therefore resolved to roughly the mass
/// carried below one float-spacing of that endpoint; the adaptive driver
/// uses geometric peeling with tail extrapolation instead where that
/// limit matters.
pub fn tanh_sinh<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Estimate> {
    const MAX_LEVEL: u32 = 11;
    const T_MAX: f64 = 6.8;

    let half = 0.5 * (b - a);
    if half <= 0.0 {
        return Ok(Estimate {
            value: 0.0,
            err_est: 0.0,
        });
    }

    // weighted sample at the node with abscissa parameter t
    let eval_node = |t: f64| -> f64 {
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        // 1 − tanh(u) = 2 e^{−2u} / (1 + e^{−2u}), stable for u > 0
        let r = (-2.0 * u.abs()).exp();
        let dist = 2.0 * r / (1.0 + r); // distance factor to the near endpoint
        let offset = half * dist;
        if offset == 0.0 {
            return 0.0;
        }
        // w = (π/2) cosh t · sech²(u), and sech²(u) = (1−tanh u)(1+tanh u)
        let w = std::f64::consts::FRAC_PI_2 * t.cosh() * (dist * (2.0 - dist));
        let x = if t >= 0.0 { b - offset } else { a + offset };
        if x == a || x == b {
            return 0.0;
        }
        let fx = f(x);
        if fx.is_finite() {
            fx * w * half
        } else {
            0.0
        }
    };

    let mut h = 1.0;
    let mut sum = eval_node(0.0);
    {
        let mut j = 1;
        while (j as f64) * h <= T_MAX {
            let t = j as f64 * h;
            sum += eval_node(t) + eval_node(-t);
            j += 1;
        }
    }
    let mut estimate = sum * h;
    let mut prev = f64::NAN;

    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut j = 1;
        while (j as f64) * h <= T_MAX {
            let t = j as f64 * h;
            sum += eval_node(t) + eval_node(-t);
            j += 2; // only the new, odd-indexed nodes
        }
        prev = estimate;
        estimate = sum * h;
        if !estimate.is_finite() {
            return Err(Error::Divergent(format!(
                "tanh-sinh sum over [{a}, {b}] is not finite at level {level}"
            )));
        }
        let delta = (estimate - prev).abs();
        if level >= 3 && estimate.abs() > 1e8 && estimate.abs() > 1e4 * prev.abs().max(1.0) {
            return Err(Error::Divergent(format!(
                "tanh-sinh estimate over [{a}, {b}] grows without bound"
            )));
        }
        // one spare level: the last refinement step understates the error
        if level >= 2 && delta <= 0.05 * abs_tol.max(rel_tol * estimate.abs()) {
            let err = (4.0 * delta).max(2.0 * f64::EPSILON * estimate.abs());
            return Ok(Estimate {
                value: estimate,
                err_est: err,
            });
        }
    }
    Err(Error::Accuracy {
        what: format!("tanh-sinh over [{a}, {b}]"),
        best: estimate,
        err_est: (estimate - prev).abs(),
    })
}

struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
    depth: u32,
    terminal: bool,
}

/// Integrates an endpoint panel by peeling geometric slices toward the
/// (possibly singular) endpoint and extrapolating the remaining tail from
/// the observed slice-sum ratio.
///
/// For an algebraic singularity f ≍ C s^p (p > −1, s the distance to the
/// endpoint) the slice sums decay exactly geometrically with ratio
/// 2^{−(p+1)}, so the tail estimate converges to the true mass without a
/// single evaluation near the endpoint — which is where coordinates stop
/// being representable in doubles. Regular and vanishing integrands come
/// out with ratios ≤ 1/2 and are handled by the same formula.
fn peel_endpoint<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    singular_at_hi: bool,
    abs_tol: f64,
    spec: &QuadSpec,
) -> Result<Estimate> {
    const MAX_SLICES: u32 = 60;
    let endpoint = if singular_at_hi { hi } else { lo };
    // Peeling is noise-limited by the float spacing around the endpoint:
    // at distance s the coordinate error eps·|endpoint| perturbs a steep
    // integrand by ~eps·|endpoint|/s relative. Steep singularities
    // (slice ratio > 0.6, i.e. exponent below about −1/4) must stop at
    // 1e-8·|endpoint|; milder ones can afford 1e-11.
    let s_steep = (1e-8 * endpoint.abs()).max(1e-280);
    let s_mild = (1e-11 * endpoint.abs()).max(1e-280);

    let mut width = hi - lo;
    let mut total = 0.0;
    let mut err = 0.0;
    let mut prev_slice: Option<f64> = None;
    let mut ratios: [f64; 3] = [f64::NAN; 3];
    let mut last_slice = 0.0;

    for k in 0..MAX_SLICES {
        let next = width * 0.5;
        let (slo, shi) = if singular_at_hi {
            (hi - width, hi - next)
        } else {
            (lo + next, lo + width)
        };
        if !(slo < shi) {
            break;
        }
        let (mut v, mut e) = qk21(f, slo, shi);
        if !e.is_finite() || e > 1e-3 * v.abs().max(abs_tol) {
            // slice not smooth enough for a single pass
            let sub = QuadSpec {
                abs_tol: (abs_tol * 0.1).max(1e-15),
                max_subdiv: 400,
                ..spec.clone()
            };
            match adaptive_plain(f, slo, shi, &sub) {
                Ok(est) => {
                    v = est.value;
                    e = est.err_est;
                }
                Err(Error::Accuracy { best, err_est, .. }) => {
                    v = best;
                    e = err_est;
                }
                Err(other) => return Err(other),
            }
        }
        total += v;
        err += e;
        if let Some(prev) = prev_slice {
            if prev != 0.0 {
                ratios.rotate_left(1);
                ratios[2] = v / prev;
            }
        }
        prev_slice = Some(v);
        last_slice = v;
        width = next;

        let steep = ratios[2].is_finite() && ratios[2] > 0.6;
        let s_stop = if steep { s_steep } else { s_mild };
        let deep_enough = width <= s_stop || k + 1 == MAX_SLICES;
        let negligible = v.abs() <= 0.01 * abs_tol && k >= 6;
        if deep_enough || negligible {
            let rho = ratios[2];
            if rho.is_finite() && rho > 0.0 && rho < 0.999 {
                let tail = last_slice * rho / (1.0 - rho);
                let drift = (ratios[2] - ratios[1]).abs().min(0.1);
                total += tail;
                err += tail.abs() * (drift / (1.0 - rho)).min(1.0) + 1e-12 * tail.abs();
            } else if rho.is_finite() && rho >= 0.999 {
                return Err(Error::Divergent(format!(
                    "slice sums toward {endpoint} do not decay (ratio {rho:.4})"
                )));
            } else {
                err += last_slice.abs();
            }
            return Ok(Estimate {
                value: total,
                err_est: err,
            });
        }
    }
    Ok(Estimate {
        value: total,
        err_est: err + last_slice.abs(),
    })
}

/// Globally adaptive bisection without the endpoint-peeling escape
/// hatch; used for slice refinement inside [`peel_endpoint`].
fn adaptive_plain<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadSpec) -> Result<Estimate> {
    adaptive_driver(f, a, b, spec, false)
}

/// Globally adaptive integration over a finite interval.
fn adaptive_finite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadSpec) -> Result<Estimate> {
    adaptive_driver(f, a, b, spec, true)
}

fn adaptive_driver<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadSpec,
    allow_peel: bool,
) -> Result<Estimate> {
    let (v0, e0) = qk21(f, a, b);
    let mut panels = vec![Panel {
        lo: a,
        hi: b,
        value: v0,
        err: e0,
        depth: 0,
        terminal: false,
    }];
    let mut splits: u32 = 0;

    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let toterr: f64 = panels.iter().map(|p| p.err).sum();
        if toterr <= spec.tol_for(total) {
            return Ok(Estimate {
                value: total,
                err_est: toterr,
            });
        }

        // worst refinable panel
        let mut worst: Option<usize> = None;
        for (i, p) in panels.iter().enumerate() {
            if p.terminal {
                continue;
            }
            if worst.is_none_or(|w| p.err > panels[w].err) {
                worst = Some(i);
            }
        }
        let Some(i) = worst else {
            return Err(Error::Accuracy {
                what: format!("adaptive quadrature over [{a}, {b}]"),
                best: total,
                err_est: toterr,
            });
        };
        // splitting cannot help once terminal panels own the error budget
        if panels[i].err < 1e-3 * toterr {
            return Err(Error::Accuracy {
                what: format!("adaptive quadrature over [{a}, {b}] (error floor reached)"),
                best: total,
                err_est: toterr,
            });
        }
        if splits >= spec.max_subdiv {
            if total.abs() > 1e12 && toterr > total.abs() {
                return Err(Error::Divergent(format!(
                    "integral over [{a}, {b}] keeps growing under subdivision"
                )));
            }
            return Err(Error::Accuracy {
                what: format!("adaptive quadrature over [{a}, {b}] (budget exhausted)"),
                best: total,
                err_est: toterr,
            });
        }

        let touches_lo = panels[i].lo == a;
        let touches_hi = panels[i].hi == b;
        if allow_peel && (touches_lo ^ touches_hi) && panels[i].depth >= 3 {
            // endpoint panel resisting bisection: peel toward the endpoint
            let p = &panels[i];
            let share = (spec.abs_tol * 0.25).max(spec.rel_tol * 0.1 * total.abs());
            let est = peel_endpoint(f, p.lo, p.hi, touches_hi, share, spec)?;
            let p = &mut panels[i];
            p.value = est.value;
            p.err = est.err_est;
            p.terminal = true;
            continue;
        }

        let Panel { lo, hi, depth, .. } = panels[i];
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            // interval no longer splittable in f64
            panels[i].terminal = true;
            continue;
        }
        let (v1, e1) = qk21(f, lo, mid);
        let (v2, e2) = qk21(f, mid, hi);
        panels[i] = Panel {
            lo,
            hi: mid,
            value: v1,
            err: e1,
            depth: depth + 1,
            terminal: false,
        };
        panels.push(Panel {
            lo: mid,
            hi,
            value: v2,
            err: e2,
            depth: depth + 1,
            terminal: false,
        });
        splits += 1;
    }
}

/// Adaptive quadrature of `f` over (lo, hi); either bound may be infinite,
/// in which case a rational change of variables maps the interval onto a
/// finite one first. Endpoints are never sampled.
pub fn integrate_1d<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    spec: &QuadSpec,
) -> Result<Estimate> {
    spec.validate()?;
    if lo.is_nan() || hi.is_nan() || !(lo < hi) {
        return Err(Error::domain(format!(
            "integrate_1d requires lo < hi, got [{lo}, {hi}]"
        )));
    }
    match (lo.is_infinite(), hi.is_infinite()) {
        (false, false) => adaptive_finite(&f, lo, hi, spec),
        (false, true) => adaptive_finite(
            &|t: f64| {
                let d = 1.0 - t;
                f(lo + t / d) / (d * d)
            },
            0.0,
            1.0,
            spec,
        ),
        (true, false) => adaptive_finite(
            &|t: f64| {
                let d = 1.0 - t;
                f(hi - t / d) / (d * d)
            },
            0.0,
            1.0,
            spec,
        ),
        (true, true) => adaptive_finite(
            &|t: f64| {
                let d = 1.0 - t * t;
                f(t / d) * (1.0 + t * t) / (d * d)
            },
            -1.0,
            1.0,
            spec,
        ),
    }
}

/// A planar integration region: an x-interval with y-limits that may
/// depend on x. Rectangles use constant limits; a triangle hangs its
/// hypotenuse on the upper limit.
pub struct Region2 {
    pub x_lo: f64,
    pub x_hi: f64,
    y_lo: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    y_hi: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl Region2 {
    pub fn rect(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Self {
        Region2 {
            x_lo,
            x_hi,
            y_lo: Box::new(move |_| y_lo),
            y_hi: Box::new(move |_| y_hi),
        }
    }

    pub fn new(
        x_lo: f64,
        x_hi: f64,
        y_lo: impl Fn(f64) -> f64 + Send + Sync + 'static,
        y_hi: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Region2 {
            x_lo,
            x_hi,
            y_lo: Box::new(y_lo),
            y_hi: Box::new(y_hi),
        }
    }

    pub fn y_limits(&self, x: f64) -> (f64, f64) {
        ((self.y_lo)(x), (self.y_hi)(x))
    }
}

/// Nested adaptive quadrature of `f(x, y)` over the region.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    region: &Region2,
    spec: &QuadSpec,
) -> Result<Estimate> {
    spec.validate()?;
    let width = region.x_hi - region.x_lo;
    if !(width > 0.0) {
        return Err(Error::domain(
            "integrate_2d requires a region of positive width",
        ));
    }
    // inner errors are averaged, not adversarial: half the budget each
    let inner_spec = QuadSpec {
        abs_tol: (spec.abs_tol * 0.5).max(1e-15),
        rel_tol: (spec.rel_tol * 0.5).max(1e-14),
        ..spec.clone()
    };
    let inner_err_sum = Cell::new(0.0_f64);
    let inner_count = Cell::new(0u64);
    let inner_fail: RefCell<Option<Error>> = RefCell::new(None);

    let g = |x: f64| -> f64 {
        let (ylo, yhi) = region.y_limits(x);
        if !(yhi - ylo > 1e-300) {
            return 0.0;
        }
        match integrate_1d(|y| f(x, y), ylo, yhi, &inner_spec) {
            Ok(est) => {
                inner_err_sum.set(inner_err_sum.get() + est.err_est);
                inner_count.set(inner_count.get() + 1);
                est.value
            }
            Err(e) => {
                let mut slot = inner_fail.borrow_mut();
                if slot.is_none() {
                    *slot = Some(e);
                }
                f64::NAN
            }
        }
    };

    let outer = integrate_1d(g, region.x_lo, region.x_hi, spec);
    if let Some(e) = inner_fail.into_inner() {
        return Err(e);
    }
    let outer = outer?;
    let mean_inner = if inner_count.get() > 0 {
        inner_err_sum.get() / inner_count.get() as f64
    } else {
        0.0
    };
    Ok(Estimate {
        value: outer.value,
        err_est: outer.err_est + mean_inner * width,
    })
}
