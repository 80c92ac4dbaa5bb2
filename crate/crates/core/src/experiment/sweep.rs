use serde::{Deserialize, Serialize};

use crate::error::{QcorrError, Result};
use crate::hawking::{bogoliubov, FieldMode, Temperature};
use crate::measures::{consonance, uin, UinConvention};
use crate::state::{reduced_state, reduced_state_via_trace, Bipartition, GisinParams};

/// Closed-form and channel reductions farther apart than this get flagged.
pub const CROSS_CHECK_TOL: f64 = 1e-12;

/// Environment variable capping sweep parallelism.
pub const WORKERS_ENV: &str = "QCORR_WORKERS";

/// Temperatures given either explicitly or as a log-spaced range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TemperatureGrid {
    Values(Vec<f64>),
    LogSpaced(LogSpaced),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogSpaced {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl TemperatureGrid {
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            TemperatureGrid::Values(v) => Ok(v.clone()),
            TemperatureGrid::LogSpaced(r) => log_space(r.start, r.stop, r.count),
        }
    }
}

/// `count` points from `start` to `stop` (both included), evenly spaced in
/// log10.
pub fn log_space(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && stop > 0.0 && start.is_finite() && stop.is_finite()) {
        return Err(QcorrError::Usage(format!(
            "log-spaced range needs positive finite endpoints, got [{start}, {stop}]"
        )));
    }
    match count {
        0 => Err(QcorrError::Usage(
            "log-spaced range with zero points".into(),
        )),
        1 => Ok(vec![start]),
        _ => {
            let (a, b) = (start.log10(), stop.log10());
            let step = (b - a) / (count - 1) as f64;
            Ok((0..count)
                .map(|i| match i {
                    0 => start,
                    i if i == count - 1 => stop,
                    i => 10f64.powf(a + step * i as f64),
                })
                .collect())
        }
    }
}

/// `count` evenly spaced points on `[start, stop]`.
pub fn lin_space(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![start],
        _ => (0..count)
            .map(|i| {
                if i == count - 1 {
                    stop
                } else {
                    start + (stop - start) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

/// A Cartesian grid of evaluation points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub lambda_values: Vec<f64>,
    pub psi_values: Vec<f64>,
    pub omega_values: Vec<f64>,
    pub t_hawking_values: TemperatureGrid,
    pub bipartitions: Vec<Bipartition>,
    pub convention: UinConvention,
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SweepSpec = serde_json::from_str(text)
            .map_err(|e| QcorrError::Usage(format!("bad sweep config: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let temps = self.t_hawking_values.values()?;
        for (name, len) in [
            ("lambda_values", self.lambda_values.len()),
            ("psi_values", self.psi_values.len()),
            ("omega_values", self.omega_values.len()),
            ("t_hawking_values", temps.len()),
            ("bipartitions", self.bipartitions.len()),
        ] {
            if len == 0 {
                return Err(QcorrError::Usage(format!("{name} is empty")));
            }
        }
        for &l in &self.lambda_values {
            GisinParams::new(l, 0.0)?;
        }
        for &psi in &self.psi_values {
            GisinParams::new(0.0, psi)?;
        }
        for &w in &self.omega_values {
            FieldMode::new(w)?;
        }
        for &t in &temps {
            Temperature::new(t)?;
        }
        Ok(())
    }

    /// Number of records a sweep produces.
    pub fn len(&self) -> Result<usize> {
        Ok(self.lambda_values.len()
            * self.psi_values.len()
            * self.omega_values.len()
            * self.t_hawking_values.values()?.len()
            * self.bipartitions.len())
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.len()? == 0)
    }
}

/// One evaluated grid point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureRecord {
    pub lambda: f64,
    pub psi: f64,
    pub omega: f64,
    pub t_hawking: f64,
    pub varpi: f64,
    pub epsilon: f64,
    pub region: Bipartition,
    pub convention: UinConvention,
    pub consonance: f64,
    pub uin: f64,
    pub flags: Vec<String>,
}

/// Evaluates both measures for one region at one parameter point.
///
/// The reduced state comes from its closed form; the channel-plus-partial-trace
/// construction runs alongside, and if the two differ by more than
/// [`CROSS_CHECK_TOL`] the channel result is used and the row is flagged.
pub fn run_point(
    lambda: f64,
    psi: f64,
    omega: f64,
    t_hawking: f64,
    region: Bipartition,
    convention: UinConvention,
) -> Result<MeasureRecord> {
    let params = GisinParams::new(lambda, psi)?;
    let coeffs = bogoliubov(FieldMode::new(omega)?, Temperature::new(t_hawking)?);

    let mut flags = Vec::new();
    let closed = reduced_state(params, coeffs, region)?;
    let state = if region == Bipartition::Initial {
        closed
    } else {
        let channel = reduced_state_via_trace(params, coeffs, region)?;
        let distance = closed.matrix().frobenius_distance(channel.matrix())?;
        if distance > CROSS_CHECK_TOL {
            flags.push(format!("closed-form-mismatch={distance:.3e}"));
            channel
        } else {
            closed
        }
    };

    Ok(MeasureRecord {
        lambda,
        psi,
        omega,
        t_hawking,
        varpi: coeffs.varpi,
        epsilon: coeffs.epsilon,
        region,
        convention,
        consonance: consonance(&state)?,
        uin: uin(&state, convention)?,
        flags,
    })
}

#[derive(Clone, Copy, Debug)]
struct GridPoint {
    lambda: f64,
    psi: f64,
    omega: f64,
    t_hawking: f64,
    region: Bipartition,
}

/// Evaluates the whole grid, λ outermost and region innermost. The output
/// order and values do not depend on `workers`.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<Vec<MeasureRecord>> {
    spec.validate()?;
    let temps = spec.t_hawking_values.values()?;
    let mut points = Vec::with_capacity(spec.len()?);
    for &lambda in &spec.lambda_values {
        for &psi in &spec.psi_values {
            for &omega in &spec.omega_values {
                for &t_hawking in &temps {
                    for &region in &spec.bipartitions {
                        points.push(GridPoint {
                            lambda,
                            psi,
                            omega,
                            t_hawking,
                            region,
                        });
                    }
                }
            }
        }
    }

    let eval = |p: &GridPoint| {
        run_point(
            p.lambda,
            p.psi,
            p.omega,
            p.t_hawking,
            p.region,
            spec.convention,
        )
        .map_err(|e| QcorrError::Grid {
            coords: format!(
                "lambda={}, psi={}, omega={}, t_hawking={}, region={}",
                p.lambda, p.psi, p.omega, p.t_hawking, p.region
            ),
            source: Box::new(e),
        })
    };

    let results: Vec<Result<MeasureRecord>> = if workers <= 1 {
        points.iter().map(eval).collect()
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| QcorrError::Numeric(format!("cannot start worker pool: {e}")))?;
        pool.install(|| points.par_iter().map(eval).collect())
    };
    results.into_iter().collect()
}

/// Reads [`WORKERS_ENV`]; absent means one worker.
pub fn workers_from_env() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(1),
        Ok(raw) => parse_workers(&raw),
    }
}

pub fn parse_workers(raw: &str) -> Result<usize> {
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(QcorrError::Usage(format!(
            "{WORKERS_ENV} must be a positive integer, got '{raw}'"
        ))),
    }
}
