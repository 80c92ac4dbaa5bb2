//! Fixed sweep grids for the standard figure set.
//!
//! The grids are chosen so that two reference values are hit exactly:
//! accessible consonance 0.9 as T_H → 0, and ≈ 0.65 at large T_H for ω = 10.
//! Every such choice is listed in the preset's `assumptions`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{QcorrError, Result};
use crate::measures::UinConvention;
use crate::state::Bipartition;

use super::sweep::{lin_space, LogSpaced, SweepSpec, TemperatureGrid};

/// Bump when any preset grid changes.
pub const PRESET_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig1,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        FigureId::Fig1,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FigureId {
    type Err = QcorrError;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.label() == s)
            .ok_or_else(|| QcorrError::Usage(format!("unknown figure '{s}'")))
    }
}

/// What the horizontal axis of a figure sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum XAxis {
    Lambda,
    THawking,
}

#[derive(Clone, Debug, Serialize)]
pub struct FigurePreset {
    pub id: FigureId,
    pub version: u32,
    pub caption: &'static str,
    pub x_axis: XAxis,
    pub spec: SweepSpec,
    pub assumptions: Vec<&'static str>,
}

fn temperature_grid() -> TemperatureGrid {
    TemperatureGrid::LogSpaced(LogSpaced {
        start: 1e-2,
        stop: 1e2,
        count: 201,
    })
}

const T_RANGE_NOTE: &str =
    "T_H axis: 201 log-spaced points on [1e-2, 1e2]; T_H = 100 stands in for the infinite-temperature limit";
const STATE_GRID_NOTE: &str =
    "lambda in {0.3, 0.6, 0.9} and psi in {pi/8, pi/6, pi/4} with omega = 1 (chosen, not given)";
const FREQ_GRID_NOTE: &str =
    "lambda = 0.9, psi = pi/4 (zero-temperature consonance 0.9) and omega in {1, 3, 10} (omega = 10 gives the 0.65 high-temperature floor)";
const FIRST_SUBSYSTEM_NOTE: &str =
    "UIN is taken with respect to the first mode of each pair (A, A, B_I)";
const RADIAL_NOTE: &str =
    "UIN uses the radial-limit convention (v-hat -> z-hat when the marginal is maximally mixed)";

fn state_sweep(region: Bipartition) -> SweepSpec {
    SweepSpec {
        lambda_values: vec![0.3, 0.6, 0.9],
        psi_values: vec![PI / 8.0, PI / 6.0, PI / 4.0],
        omega_values: vec![1.0],
        t_hawking_values: temperature_grid(),
        bipartitions: vec![region],
        convention: UinConvention::RadialLimit,
    }
}

fn frequency_sweep(regions: Vec<Bipartition>) -> SweepSpec {
    SweepSpec {
        lambda_values: vec![0.9],
        psi_values: vec![PI / 4.0],
        omega_values: vec![1.0, 3.0, 10.0],
        t_hawking_values: temperature_grid(),
        bipartitions: regions,
        convention: UinConvention::RadialLimit,
    }
}

pub fn figure_preset(id: FigureId) -> FigurePreset {
    let (caption, x_axis, spec, mut assumptions) = match id {
        FigureId::Fig1 => (
            "Figure 1: consonance and UIN of the initial Gisin state as functions of the mixing parameter lambda",
            XAxis::Lambda,
            SweepSpec {
                lambda_values: lin_space(0.0, 1.0, 101),
                psi_values: vec![PI / 5.0, PI / 4.0],
                omega_values: vec![1.0],
                t_hawking_values: TemperatureGrid::Values(vec![0.0]),
                bipartitions: vec![Bipartition::Initial],
                convention: UinConvention::RadialLimit,
            },
            vec!["lambda: 101 points on [0, 1]; psi in {pi/5, pi/4}; no channel (T_H = 0)"],
        ),
        FigureId::Fig3 => (
            "Figure 3: accessible-region (A, B_I) correlations versus T_H for different state parameters",
            XAxis::THawking,
            state_sweep(Bipartition::Accessible),
            vec![STATE_GRID_NOTE, T_RANGE_NOTE],
        ),
        FigureId::Fig4 => (
            "Figure 4: accessible-region (A, B_I) correlations versus T_H for different frequency modes omega",
            XAxis::THawking,
            frequency_sweep(vec![Bipartition::Accessible]),
            vec![FREQ_GRID_NOTE, T_RANGE_NOTE],
        ),
        FigureId::Fig5 => (
            "Figure 5: inaccessible-region (A, B_II) correlations versus T_H for different state parameters",
            XAxis::THawking,
            state_sweep(Bipartition::Inaccessible),
            vec![STATE_GRID_NOTE, T_RANGE_NOTE],
        ),
        FigureId::Fig6 => (
            "Figure 6: correlations versus T_H for different frequency modes omega in the inaccessible (A, B_II) and spacetime (B_I, B_II) regions",
            XAxis::THawking,
            frequency_sweep(vec![Bipartition::Inaccessible, Bipartition::Spacetime]),
            vec![
                FREQ_GRID_NOTE,
                T_RANGE_NOTE,
                "regions: both inaccessible and spacetime are emitted, since either may be meant",
            ],
        ),
        FigureId::Fig7 => (
            "Figure 7: spacetime-region (B_I, B_II) correlations versus T_H for different state parameters",
            XAxis::THawking,
            state_sweep(Bipartition::Spacetime),
            vec![STATE_GRID_NOTE, T_RANGE_NOTE],
        ),
        FigureId::Fig8 => (
            "Figure 8: spacetime-region (B_I, B_II) correlations versus T_H for different frequency modes omega",
            XAxis::THawking,
            frequency_sweep(vec![Bipartition::Spacetime]),
            vec![FREQ_GRID_NOTE, T_RANGE_NOTE],
        ),
    };
    assumptions.push(FIRST_SUBSYSTEM_NOTE);
    assumptions.push(RADIAL_NOTE);
    FigurePreset {
        id,
        version: PRESET_VERSION,
        caption,
        x_axis,
        spec,
        assumptions,
    }
}
