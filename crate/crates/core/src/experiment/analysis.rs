//! Series extraction and shape checks on sweep output: monotonicity along T_H
//! and location of interior minima.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::state::Bipartition;

use super::presets::XAxis;
use super::sweep::MeasureRecord;

/// Slack allowed when checking monotonicity of computed values.
pub const MONOTONE_TOL: f64 = 1e-12;

/// A dip must sit this far below the largest value on each side of it to
/// count as an interior minimum rather than a flat floor.
pub const DIP_PROMINENCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Consonance,
    Uin,
}

impl Measure {
    pub fn label(self) -> &'static str {
        match self {
            Measure::Consonance => "consonance",
            Measure::Uin => "uin",
        }
    }

    pub fn of(self, r: &MeasureRecord) -> f64 {
        match self {
            Measure::Consonance => r.consonance,
            Measure::Uin => r.uin,
        }
    }
}

/// Everything that identifies a curve apart from the swept coordinate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesKey {
    pub region: Bipartition,
    pub lambda: Option<f64>,
    pub psi: f64,
    pub omega: f64,
    pub t_hawking: Option<f64>,
}

impl SeriesKey {
    pub fn label(&self) -> String {
        let mut parts = vec![self.region.label().to_string()];
        if let Some(l) = self.lambda {
            parts.push(format!("lambda={l}"));
        }
        parts.push(format!("psi={:.4}", self.psi));
        parts.push(format!("omega={}", self.omega));
        if let Some(t) = self.t_hawking {
            parts.push(format!("T_H={t}"));
        }
        parts.join(" ")
    }
}

#[derive(Clone, Debug)]
pub struct Series<'a> {
    pub key: SeriesKey,
    pub records: Vec<&'a MeasureRecord>,
}

impl Series<'_> {
    pub fn xs(&self, axis: XAxis) -> Vec<f64> {
        self.records
            .iter()
            .map(|r| match axis {
                XAxis::Lambda => r.lambda,
                XAxis::THawking => r.t_hawking,
            })
            .collect()
    }

    pub fn ys(&self, measure: Measure) -> Vec<f64> {
        self.records.iter().map(|r| measure.of(r)).collect()
    }
}

/// Splits records into curves along `axis`, in order of first appearance;
/// points within a curve keep sweep order.
pub fn split_series(records: &[MeasureRecord], axis: XAxis) -> Vec<Series<'_>> {
    let mut order: Vec<SeriesKey> = Vec::new();
    let mut groups: BTreeMap<usize, Vec<&MeasureRecord>> = BTreeMap::new();
    for r in records {
        let key = SeriesKey {
            region: r.region,
            lambda: (axis != XAxis::Lambda).then_some(r.lambda),
            psi: r.psi,
            omega: r.omega,
            t_hawking: (axis != XAxis::THawking).then_some(r.t_hawking),
        };
        let idx = match order.iter().position(|k| *k == key) {
            Some(i) => i,
            None => {
                order.push(key);
                order.len() - 1
            }
        };
        groups.entry(idx).or_default().push(r);
    }
    order
        .into_iter()
        .enumerate()
        .map(|(i, key)| Series {
            key,
            records: groups.remove(&i).unwrap_or_default(),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trend {
    NonIncreasing,
    NonDecreasing,
}

/// Number of consecutive steps that break `trend` by more than [`MONOTONE_TOL`].
pub fn monotonicity_violations(ys: &[f64], trend: Trend) -> usize {
    ys.windows(2)
        .filter(|w| match trend {
            Trend::NonIncreasing => w[1] > w[0] + MONOTONE_TOL,
            Trend::NonDecreasing => w[1] < w[0] - MONOTONE_TOL,
        })
        .count()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimumReport {
    pub series: String,
    pub index: usize,
    pub t_hawking: f64,
    pub value: f64,
    /// Largest drop into the minimum from the left and rise out of it to the right.
    pub left_prominence: f64,
    pub right_prominence: f64,
    pub interior: bool,
}

/// Locates the global minimum of a curve (first occurrence) and decides
/// whether it is a genuine interior dip: not at either end and at least
/// [`DIP_PROMINENCE`] below the maximum on each side.
pub fn locate_minimum(series: &str, xs: &[f64], ys: &[f64]) -> Option<MinimumReport> {
    let (index, &value) = ys
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))?;
    let left = ys[..index]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let right = ys[index + 1..]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let left_prominence = (left - value).max(0.0);
    let right_prominence = (right - value).max(0.0);
    Some(MinimumReport {
        series: series.to_string(),
        index,
        t_hawking: xs[index],
        value,
        left_prominence,
        right_prominence,
        interior: index > 0
            && index + 1 < ys.len()
            && left_prominence > DIP_PROMINENCE
            && right_prominence > DIP_PROMINENCE,
    })
}

/// Minimum of every T_H curve of `measure` in the records.
pub fn minima_along_temperature(records: &[MeasureRecord], measure: Measure) -> Vec<MinimumReport> {
    split_series(records, XAxis::THawking)
        .iter()
        .filter_map(|s| locate_minimum(&s.key.label(), &s.xs(XAxis::THawking), &s.ys(measure)))
        .collect()
}
