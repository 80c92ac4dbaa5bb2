use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{QcorrError, Result};
use crate::state::Bipartition;

use super::analysis::{minima_along_temperature, split_series, Measure, MinimumReport};
use super::presets::{figure_preset, FigureId, FigurePreset, XAxis};
use super::sweep::{run_sweep, MeasureRecord};

pub const CSV_HEADER: [&str; 11] = [
    "lambda",
    "psi",
    "omega",
    "t_hawking",
    "varpi",
    "epsilon",
    "region",
    "convention",
    "consonance",
    "uin",
    "flags",
];

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_error(path: &Path, e: csv::Error) -> QcorrError {
    let source = match e.into_kind() {
        csv::ErrorKind::Io(io) => io,
        other => std::io::Error::other(format!("{other:?}")),
    };
    QcorrError::io(path, source)
}

pub fn csv_string(records: &[MeasureRecord]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let here = Path::new("<memory>");
    w.write_record(CSV_HEADER).map_err(|e| csv_error(here, e))?;
    for r in records {
        w.write_record([
            num(r.lambda),
            num(r.psi),
            num(r.omega),
            num(r.t_hawking),
            num(r.varpi),
            num(r.epsilon),
            r.region.label().to_string(),
            r.convention.label().to_string(),
            num(r.consonance),
            num(r.uin),
            r.flags.join(";"),
        ])
        .map_err(|e| csv_error(here, e))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| QcorrError::io(here, std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}

pub fn write_csv(records: &[MeasureRecord], path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(QcorrError::Usage("no records to write".into()));
    }
    fs::write(path, csv_string(records)?).map_err(|e| QcorrError::io(path, e))
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 250.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 9] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
    "#7f7f7f",
];

/// A line chart of `measure` against `x_axis`, one polyline per series. The
/// x axis is logarithmic for temperature sweeps with positive temperatures.
pub fn svg_string(
    records: &[MeasureRecord],
    x_axis: XAxis,
    measure: Measure,
    title: &str,
) -> String {
    let series = split_series(records, x_axis);
    let xs_all: Vec<f64> = series.iter().flat_map(|s| s.xs(x_axis)).collect();
    let ys_all: Vec<f64> = series.iter().flat_map(|s| s.ys(measure)).collect();
    let log_x = x_axis == XAxis::THawking && xs_all.iter().all(|&x| x > 0.0);
    let tx = |x: f64| if log_x { x.log10() } else { x };
    let (x_lo, x_hi) = bounds(xs_all.iter().map(|&x| tx(x)));
    let (y_lo, y_hi) = bounds(ys_all.iter().copied().chain([0.0]));
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (tx(x) - x_lo) / (x_hi - x_lo) * plot_w;
    let py = |y: f64| TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{LEFT}" y="20" font-size="13">{}</text>"#,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );

    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let y = y_lo + f * (y_hi - y_lo);
        let yp = py(y);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{yp:.2}" x2="{:.2}" y2="{yp:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{y:.3}</text>"##,
            LEFT + plot_w,
            LEFT - 6.0,
            yp + 4.0
        );
        let xv = x_lo + f * (x_hi - x_lo);
        let xp = LEFT + f * plot_w;
        let label = if log_x {
            format!("1e{xv:.1}")
        } else {
            format!("{xv:.2}")
        };
        let _ = writeln!(
            s,
            r#"<text x="{xp:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#,
            TOP + plot_h + 16.0
        );
    }
    let x_name = match x_axis {
        XAxis::Lambda => "lambda",
        XAxis::THawking => "T_H",
    };
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{x_name}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 18.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" transform="rotate(-90 16 {:.2})" text-anchor="middle">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        measure.label()
    );

    for (k, ser) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let points: Vec<String> = ser
            .xs(x_axis)
            .iter()
            .zip(ser.ys(measure))
            .map(|(&x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let ly = TOP + 14.0 * k as f64 + 8.0;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 18.0,
            lx + 22.0,
            ly + 4.0,
            escape(&ser.key.label())
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn render_svg(
    records: &[MeasureRecord],
    path: &Path,
    x_axis: XAxis,
    measure: Measure,
    title: &str,
) -> Result<()> {
    if records.is_empty() {
        return Err(QcorrError::Usage("no records to plot".into()));
    }
    fs::write(path, svg_string(records, x_axis, measure, title))
        .map_err(|e| QcorrError::io(path, e))
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Companion metadata written next to each figure's CSV.
#[derive(Clone, Debug, Serialize)]
pub struct FigureMetadata<'a> {
    pub preset: &'a FigurePreset,
    pub rows: usize,
    pub flagged_rows: usize,
    /// Located UIN minima along T_H; filled for spacetime-region figures.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub uin_minima: Vec<MinimumReport>,
}

pub fn figure_metadata<'a>(
    preset: &'a FigurePreset,
    records: &[MeasureRecord],
) -> FigureMetadata<'a> {
    let spacetime: Vec<MeasureRecord> = records
        .iter()
        .filter(|r| r.region == Bipartition::Spacetime)
        .cloned()
        .collect();
    let uin_minima = if preset.x_axis == XAxis::THawking && !spacetime.is_empty() {
        minima_along_temperature(&spacetime, Measure::Uin)
    } else {
        Vec::new()
    };
    FigureMetadata {
        preset,
        rows: records.len(),
        flagged_rows: records.iter().filter(|r| !r.flags.is_empty()).count(),
        uin_minima,
    }
}

#[derive(Clone, Debug)]
pub struct FigureOutput {
    pub records: Vec<MeasureRecord>,
    pub files: Vec<PathBuf>,
}

/// Runs a preset and writes `<id>.csv`, `<id>.meta.json` and, when asked,
/// one SVG per measure into `out_dir`.
pub fn regenerate_figure(
    id: FigureId,
    out_dir: &Path,
    svg: bool,
    workers: usize,
) -> Result<FigureOutput> {
    let preset = figure_preset(id);
    let records = run_sweep(&preset.spec, workers)?;
    fs::create_dir_all(out_dir).map_err(|e| QcorrError::io(out_dir, e))?;

    let mut files = Vec::new();
    let csv_path = out_dir.join(format!("{id}.csv"));
    write_csv(&records, &csv_path)?;
    files.push(csv_path);

    let meta_path = out_dir.join(format!("{id}.meta.json"));
    let meta = figure_metadata(&preset, &records);
    let mut json = serde_json::to_string_pretty(&meta)
        .map_err(|e| QcorrError::Numeric(format!("cannot serialize metadata: {e}")))?;
    json.push('\n');
    fs::write(&meta_path, json).map_err(|e| QcorrError::io(&meta_path, e))?;
    files.push(meta_path);

    if svg {
        for measure in [Measure::Consonance, Measure::Uin] {
            let path = out_dir.join(format!("{id}_{}.svg", measure.label()));
            let title = format!("{} [{}]", preset.caption, measure.label());
            render_svg(&records, &path, preset.x_axis, measure, &title)?;
            files.push(path);
        }
    }
    Ok(FigureOutput { records, files })
}
