//! Plain key=value configuration files presetting the numerical
//! tolerances and the Monte Carlo budget. Flags override the file,
//! defaults fill the rest. The file is looked up through `--config` or
//! the `CIGF_CONFIG` environment variable.

use cigf::reliability::MonteCarloConfig;
use cigf::{Error, QuadSpec, Result};

#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_subdiv: Option<u32>,
    pub tail_mass: Option<f64>,
    pub series_terms_max: Option<u32>,
    pub series_tail_tol: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub streams: Option<u32>,
}

impl Overrides {
    pub fn from_file(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read config {path}: {e}")))?;
        let mut o = Overrides::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!(
                    "config line {} is not key=value: {line:?}",
                    lineno + 1
                ))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |e: &str| Error::Parse(format!("config {key}: bad value {value:?} ({e})"));
            match key {
                "abs_tol" => o.abs_tol = Some(value.parse().map_err(|_| bad("float"))?),
                "rel_tol" => o.rel_tol = Some(value.parse().map_err(|_| bad("float"))?),
                "max_subdiv" => o.max_subdiv = Some(value.parse().map_err(|_| bad("int"))?),
                "tail_mass" => o.tail_mass = Some(value.parse().map_err(|_| bad("float"))?),
                "series_terms_max" => {
                    o.series_terms_max = Some(value.parse().map_err(|_| bad("int"))?)
                }
                "series_tail_tol" => {
                    o.series_tail_tol = Some(value.parse().map_err(|_| bad("float"))?)
                }
                "trials" => o.trials = Some(value.parse().map_err(|_| bad("int"))?),
                "seed" => o.seed = Some(value.parse().map_err(|_| bad("int"))?),
                "streams" => o.streams = Some(value.parse().map_err(|_| bad("int"))?),
                other => {
                    return Err(Error::Parse(format!("unknown config key {other:?}")));
                }
            }
        }
        Ok(o)
    }

    /// File layer resolved from --config or CIGF_CONFIG; empty otherwise.
    pub fn load(flag: Option<&str>) -> Result<Self> {
        if let Some(path) = flag {
            return Self::from_file(path);
        }
        if let Ok(path) = std::env::var("CIGF_CONFIG") {
            if !path.is_empty() {
                return Self::from_file(&path);
            }
        }
        Ok(Overrides::default())
    }

    pub fn quad_spec(&self) -> QuadSpec {
        let d = QuadSpec::default();
        QuadSpec {
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            max_subdiv: self.max_subdiv.unwrap_or(d.max_subdiv),
            tail_mass: self.tail_mass.unwrap_or(d.tail_mass),
            series_terms_max: self.series_terms_max.unwrap_or(d.series_terms_max),
            series_tail_tol: self.series_tail_tol.unwrap_or(d.series_tail_tol),
        }
    }

    pub fn mc_config(&self) -> MonteCarloConfig {
        let d = MonteCarloConfig::default();
        MonteCarloConfig {
            n_trials: self.trials.unwrap_or(d.n_trials),
            seed: self.seed.unwrap_or(d.seed),
            n_streams: self.streams.unwrap_or(d.n_streams),
        }
    }
}
