//! Summation of (eventually) decaying series, typically alternating
//! generalized-binomial expansions whose tail is bounded by the first
//! omitted term.

use crate::error::{Error, Result};
use crate::numerics::quad::QuadSpec;

/// Outcome of a series summation.
#[derive(Debug, Clone, Copy)]
pub struct SeriesSum {
    pub value: f64,
    /// Magnitude of the first omitted term.
    pub err_est: f64,
    /// Number of terms actually summed.
    pub n_terms: u32,
}

/// Sums `term(0) + term(1) + ...` until a term falls below
/// `spec.series_tail_tol` in magnitude or the term budget runs out.
///
/// Terms carry their own sign. For series that terminate exactly (integer
/// binomial exponents) the first vanishing term stops the sum with a zero
/// error estimate.
pub fn alternating_series(
    mut term: impl FnMut(u32) -> Result<f64>,
    spec: &QuadSpec,
) -> Result<SeriesSum> {
    spec.validate()?;
    let mut sum = 0.0;
    let mut last_mag = f64::INFINITY;
    for n in 0..spec.series_terms_max {
        let t = term(n)?;
        if !t.is_finite() {
            return Err(Error::Divergent(format!("series term {n} is not finite")));
        }
        let mag = t.abs();
        if n >= 1 && mag <= spec.series_tail_tol && mag <= last_mag {
            return Ok(SeriesSum {
                value: sum,
                err_est: mag,
                n_terms: n,
            });
        }
        sum += t;
        last_mag = mag;
    }
    Err(Error::Accuracy {
        what: format!(
            "series did not decay below {:e} within {} terms",
            spec.series_tail_tol, spec.series_terms_max
        ),
        best: sum,
        err_est: last_mag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn geometric_alternating() {
        let s =
            alternating_series(|i| Ok((-0.5_f64).powi(i as i32)), &QuadSpec::default()).unwrap();
        assert_relative_eq!(s.value, 2.0 / 3.0, epsilon = 1e-11);
    }

    #[test]
    fn terminating_series() {
        // 1 + 0 + 0 + ... stops immediately with zero error
        let s = alternating_series(|i| Ok(if i == 0 { 1.0 } else { 0.0 }), &QuadSpec::default())
            .unwrap();
        assert_eq!(s.value, 1.0);
        assert_eq!(s.err_est, 0.0);
        assert_eq!(s.n_terms, 1);
    }

    #[test]
    fn non_decaying_terms_error_out() {
        let spec = QuadSpec {
            series_terms_max: 50,
            ..QuadSpec::default()
        };
        let res = alternating_series(|_| Ok(1.0), &spec);
        match res {
            Err(Error::Accuracy { best, .. }) => assert_relative_eq!(best, 50.0),
            other => panic!("expected accuracy error, got {other:?}"),
        }
    }

    #[test]
    fn term_failure_propagates() {
        let res = alternating_series(
            |i| {
                if i < 3 {
                    Ok(1.0 / (i as f64 + 1.0))
                } else {
                    Err(Error::Domain("boom".into()))
                }
            },
            &QuadSpec::default(),
        );
        assert!(matches!(res, Err(Error::Domain(_))));
    }
}
