//! Parameter sweeps, the figure presets and their CSV/SVG output.

pub mod analysis;
pub mod output;
pub mod presets;
pub mod sweep;

pub use analysis::{Measure, MinimumReport, Trend};
pub use output::{regenerate_figure, render_svg, write_csv};
pub use presets::{figure_preset, FigureId, FigurePreset, XAxis};
pub use sweep::{
    run_point, run_sweep, workers_from_env, MeasureRecord, SweepSpec, TemperatureGrid,
};
