//! Acceptance suite. Every test writes exactly one `PASS`/`FAIL` line to
//! stderr with the measured quantity next to its tolerance, then asserts on
//! it.
//!
//! Run with `cargo test -p qcorr --test acceptance`.

mod common;

use std::f64::consts::{FRAC_PI_4, PI};
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qcorr::experiment::analysis::{
    minima_along_temperature, monotonicity_violations, split_series,
};
use qcorr::experiment::sweep::{lin_space, log_space};
use qcorr::experiment::{
    figure_preset, regenerate_figure, run_sweep, FigureId, Measure, Trend, XAxis,
};
use qcorr::hawking::dilate_second_qubit;
use qcorr::matrix::hermitian_eig;
use qcorr::measures::conjugate;
use qcorr::state::{
    evolved_tripartite, evolved_via_channel, gisin_state, reduced_state, reduced_state_via_trace,
};
use qcorr::{
    bogoliubov, consonance, uin, uin_bruteforce, Bipartition, BogoliubovCoefficients,
    DensityMatrix, FieldMode, GisinParams, Temperature, UinConvention,
};

use common::{local_unitary, random_two_qubit, random_unbiased_two_qubit};

const EQUIVALENCE_TOL: f64 = 1e-12;
const EQUIVALENCE_BUDGET: Duration = Duration::from_secs(5);
const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;
const NORMALIZATION_TOL: f64 = 1e-12;
const ORACLE_TOL: f64 = 2e-3;
const ORACLE_GRID: usize = 10_000;
const ORACLE_RANDOM_STATES: usize = 200;
const ORACLE_BUDGET: Duration = Duration::from_secs(60);
const FLOOR_TARGET: f64 = 0.652;
const FLOOR_TOL: f64 = 0.005;
const CEILING_TARGET: f64 = 0.9;
const CEILING_TOL: f64 = 1e-6;
const ASYMPTOTE_TOL: f64 = 1e-3;
/// The inaccessible-region limit as quoted (1/√2 to four places).
#[allow(clippy::approx_constant)]
const INACCESSIBLE_LIMIT: f64 = 0.7071;
const SPACETIME_LIMIT: f64 = 0.5;
const DIP_CEILING: f64 = 0.05;
const FIG1_TOL: f64 = 1e-12;
const ALL_PRESETS_BUDGET: Duration = Duration::from_secs(10);

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    // Written to the raw handle so the line shows up even when libtest
    // captures the output of passing tests.
    let line = format!(
        "{} [{id:>2}] {name}: {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    std::io::stderr().write_all(line.as_bytes()).unwrap();
}

fn coeffs(omega: f64, t: f64) -> BogoliubovCoefficients {
    bogoliubov(FieldMode::new(omega).unwrap(), Temperature::new(t).unwrap())
}

/// The 6×6×6×3 (λ, ψ, T_H, ω) grid shared by the equivalence and validity checks.
fn state_grid() -> Vec<(GisinParams, BogoliubovCoefficients)> {
    let mut out = Vec::new();
    for &lambda in &lin_space(0.0, 1.0, 6) {
        for &psi in &lin_space(0.0, PI / 2.0, 6) {
            for t in [0.0, 0.05, 0.3, 1.0, 7.5, 100.0] {
                for omega in [0.5, 1.0, 10.0] {
                    out.push((GisinParams::new(lambda, psi).unwrap(), coeffs(omega, t)));
                }
            }
        }
    }
    out
}

const REGIONS: [Bipartition; 3] = [
    Bipartition::Accessible,
    Bipartition::Inaccessible,
    Bipartition::Spacetime,
];

#[test]
fn channel_and_closed_forms_agree_on_grid() {
    let start = Instant::now();
    let mut worst_joint = 0.0f64;
    let mut worst_reduced = 0.0f64;
    let grid = state_grid();
    for &(p, k) in &grid {
        let rho = gisin_state(p).unwrap();
        let channel = dilate_second_qubit(&rho, k).unwrap();
        let closed = evolved_tripartite(p, k).unwrap();
        worst_joint = worst_joint.max(
            channel
                .matrix()
                .frobenius_distance(closed.matrix())
                .unwrap(),
        );
        for region in REGIONS {
            let traced = channel.reduce(&region.kept_modes().unwrap()).unwrap();
            let formula = reduced_state(p, k, region).unwrap();
            worst_reduced = worst_reduced.max(
                traced
                    .matrix()
                    .frobenius_distance(formula.matrix())
                    .unwrap(),
            );
        }
    }
    let elapsed = start.elapsed();
    let pass = worst_joint <= EQUIVALENCE_TOL
        && worst_reduced <= EQUIVALENCE_TOL
        && elapsed < EQUIVALENCE_BUDGET;
    report(
        1,
        "channel/closed-form equivalence",
        pass,
        &format!(
            "{} points, max joint distance {worst_joint:.2e}, max reduced distance {worst_reduced:.2e} (tol {EQUIVALENCE_TOL:.0e}), {:.2} s (budget {} s)",
            grid.len(),
            elapsed.as_secs_f64(),
            EQUIVALENCE_BUDGET.as_secs()
        ),
    );
    assert!(pass);
}

#[test]
fn every_constructed_state_is_a_density_matrix() {
    let mut worst_herm = 0.0f64;
    let mut worst_trace = 0.0f64;
    let mut lowest_eig = f64::INFINITY;
    let mut count = 0usize;
    let mut check = |m: &DensityMatrix| {
        let m = m.matrix();
        worst_herm = worst_herm.max(m.hermiticity_defect());
        worst_trace = worst_trace.max((m.trace() - 1.0).norm());
        lowest_eig = lowest_eig.min(hermitian_eig(m).unwrap().min_eigenvalue());
        count += 1;
    };
    for (p, k) in state_grid() {
        check(&gisin_state(p).unwrap());
        check(&evolved_tripartite(p, k).unwrap());
        check(&evolved_via_channel(p, k).unwrap());
        for region in REGIONS {
            check(&reduced_state(p, k, region).unwrap());
            check(&reduced_state_via_trace(p, k, region).unwrap());
        }
    }
    let pass = worst_herm <= HERMITIAN_TOL && worst_trace <= TRACE_TOL && lowest_eig >= -PSD_TOL;
    report(
        2,
        "state validity",
        pass,
        &format!(
            "{count} matrices, hermiticity {worst_herm:.2e} (tol {HERMITIAN_TOL:.0e}), trace error {worst_trace:.2e} (tol {TRACE_TOL:.0e}), min eigenvalue {lowest_eig:.2e} (floor -{PSD_TOL:.0e})"
        ),
    );
    assert!(pass);
}

#[test]
fn bogoliubov_amplitudes_are_normalized() {
    let omegas = log_space(1e-2, 1e2, 25).unwrap();
    let mut temps = vec![0.0, 1e3];
    temps.extend(log_space(1e-3, 1e2, 38).unwrap());
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for &omega in &omegas {
        for &t in &temps {
            let k = coeffs(omega, t);
            worst = worst.max((k.varpi * k.varpi + k.epsilon * k.epsilon - 1.0).abs());
            count += 1;
        }
    }
    let pass = count == 1000 && worst <= NORMALIZATION_TOL;
    report(
        3,
        "Bogoliubov normalization",
        pass,
        &format!("{count} (omega, T_H) pairs incl. T_H = 0 and 1e3, max |varpi^2 + epsilon^2 - 1| = {worst:.2e} (tol {NORMALIZATION_TOL:.0e})"),
    );
    assert!(pass);
}

/// Distinct reduced states behind every figure preset.
fn preset_states() -> Vec<DensityMatrix> {
    let mut seen: Vec<(u64, u64, u64, u64, Bipartition)> = Vec::new();
    let mut states = Vec::new();
    for id in FigureId::ALL {
        let spec = figure_preset(id).spec;
        let temps = spec.t_hawking_values.values().unwrap();
        for &lambda in &spec.lambda_values {
            for &psi in &spec.psi_values {
                for &omega in &spec.omega_values {
                    for &t in &temps {
                        for &region in &spec.bipartitions {
                            let key = (
                                lambda.to_bits(),
                                psi.to_bits(),
                                omega.to_bits(),
                                t.to_bits(),
                                region,
                            );
                            if seen.contains(&key) {
                                continue;
                            }
                            seen.push(key);
                            let p = GisinParams::new(lambda, psi).unwrap();
                            states.push(reduced_state(p, coeffs(omega, t), region).unwrap());
                        }
                    }
                }
            }
        }
    }
    states
}

#[test]
fn closed_form_uin_matches_bruteforce_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut random = Vec::with_capacity(ORACLE_RANDOM_STATES);
    while random.len() < ORACLE_RANDOM_STATES {
        let s = random_two_qubit(&mut rng);
        if qcorr::measures::bloch_vector(&s).unwrap().norm() >= 1e-3 {
            random.push(s);
        }
    }
    let unbiased: Vec<DensityMatrix> = (0..20)
        .map(|_| random_unbiased_two_qubit(&mut rng))
        .collect();
    let presets = preset_states();

    let worst = |states: &[DensityMatrix]| {
        states.iter().fold(0.0f64, |acc, s| {
            let closed = uin(s, UinConvention::Strict).unwrap();
            let brute = uin_bruteforce(s, ORACLE_GRID).unwrap();
            acc.max((closed - brute).abs())
        })
    };
    let worst_random = worst(&random);
    let worst_unbiased = worst(&unbiased);
    let worst_preset = worst(&presets);
    let elapsed = start.elapsed();
    let pass = worst_random <= ORACLE_TOL
        && worst_unbiased <= ORACLE_TOL
        && worst_preset <= ORACLE_TOL
        && elapsed < ORACLE_BUDGET;
    report(
        4,
        "UIN oracle agreement",
        pass,
        &format!(
            "max |closed - bruteforce|: {worst_random:.2e} on {} random states, {worst_unbiased:.2e} on {} zero-Bloch-vector states, {worst_preset:.2e} on {} preset states (tol {ORACLE_TOL:.0e}), {:.1} s (budget {} s)",
            random.len(),
            unbiased.len(),
            presets.len(),
            elapsed.as_secs_f64(),
            ORACLE_BUDGET.as_secs()
        ),
    );
    assert!(pass);
}

fn region_consonance(lambda: f64, psi: f64, omega: f64, t: f64, region: Bipartition) -> f64 {
    let p = GisinParams::new(lambda, psi).unwrap();
    consonance(&reduced_state(p, coeffs(omega, t), region).unwrap()).unwrap()
}

#[test]
fn accessible_consonance_floor_at_high_temperature() {
    let value = region_consonance(0.9, FRAC_PI_4, 10.0, 100.0, Bipartition::Accessible);
    let pass = (value - FLOOR_TARGET).abs() <= FLOOR_TOL;
    report(
        5,
        "accessible consonance floor (lambda=0.9, psi=pi/4, omega=10, T_H=100)",
        pass,
        &format!("{value:.6} (target {FLOOR_TARGET} +/- {FLOOR_TOL})"),
    );
    assert!(pass);
}

#[test]
fn accessible_consonance_ceiling_at_zero_temperature() {
    let p = GisinParams::new(0.9, FRAC_PI_4).unwrap();
    let initial = consonance(&gisin_state(p).unwrap()).unwrap();
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for t in [0.0, 1e-3, 1e-2] {
        let value = region_consonance(0.9, FRAC_PI_4, 1.0, t, Bipartition::Accessible);
        worst = worst
            .max((value - CEILING_TARGET).abs())
            .max((value - initial).abs());
        detail.push_str(&format!("T_H={t}: {value:.9}; "));
    }
    let pass = worst <= CEILING_TOL;
    report(
        6,
        "accessible consonance ceiling (lambda=0.9, psi=pi/4, T_H -> 0)",
        pass,
        &format!(
            "{detail}initial state {initial:.9}; max deviation {worst:.2e} (tol {CEILING_TOL:.0e})"
        ),
    );
    assert!(pass);
}

#[test]
fn high_temperature_asymptotes() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let p = GisinParams::new(1.0, FRAC_PI_4).unwrap();
    let k = coeffs(1.0, 1e3);
    let mut pass = true;
    let mut detail = String::new();
    for (region, target) in [
        (Bipartition::Inaccessible, INACCESSIBLE_LIMIT),
        (Bipartition::Spacetime, SPACETIME_LIMIT),
    ] {
        let closed = consonance(&reduced_state(p, k, region).unwrap()).unwrap();
        // Independent route: channel + partial trace, scrambled by a random
        // local unitary so the eigenbasis search inside the measure is exercised.
        let traced = reduced_state_via_trace(p, k, region).unwrap();
        let scrambled = conjugate(&traced, &local_unitary(&mut rng)).unwrap();
        let brute = consonance(&scrambled).unwrap();
        let ok =
            (closed - target).abs() <= ASYMPTOTE_TOL && (brute - closed).abs() <= ASYMPTOTE_TOL;
        pass &= ok;
        detail.push_str(&format!(
            "{region}: {closed:.7} (target {target} +/- {ASYMPTOTE_TOL:.0e}, channel+local-unitary route {brute:.7}); "
        ));
    }
    report(
        7,
        "asymptotic constants at T_H = 1e3 (lambda=1, psi=pi/4)",
        pass,
        detail.trim_end_matches("; "),
    );
    assert!(pass);
}

#[test]
fn consonance_is_monotone_in_temperature() {
    let mut total = 0usize;
    let mut series = 0usize;
    let mut detail = String::new();
    for (id, trend) in [
        (FigureId::Fig3, Trend::NonIncreasing),
        (FigureId::Fig5, Trend::NonDecreasing),
        (FigureId::Fig7, Trend::NonDecreasing),
    ] {
        let records = run_sweep(&figure_preset(id).spec, 1).unwrap();
        let mut violations = 0;
        for s in split_series(&records, XAxis::THawking) {
            violations += monotonicity_violations(&s.ys(Measure::Consonance), trend);
            series += 1;
        }
        total += violations;
        detail.push_str(&format!("{id} ({trend:?}): {violations}; "));
    }
    let pass = total == 0;
    report(
        8,
        "consonance monotonicity along T_H",
        pass,
        &format!("{series} series, violations {}(required 0)", detail),
    );
    assert!(pass);
}

#[test]
fn spacetime_uin_has_interior_dip() {
    let records = run_sweep(&figure_preset(FigureId::Fig7).spec, 1).unwrap();
    let minima = minima_along_temperature(&records, Measure::Uin);
    let pass = !minima.is_empty() && minima.iter().all(|m| m.interior && m.value <= DIP_CEILING);
    let detail = minima
        .iter()
        .map(|m| {
            format!(
                "[{}] min {:.3e} at T_H={:.3e} ({})",
                m.series,
                m.value,
                m.t_hawking,
                if m.interior {
                    "interior"
                } else {
                    "endpoint/flat, no dip"
                }
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    report(
        9,
        "spacetime UIN interior minimum (radial-limit, fig7)",
        pass,
        &format!("required interior minimum <= {DIP_CEILING} in every series; {detail}"),
    );
    assert!(
        pass,
        "no interior UIN minimum along T_H in the spacetime region"
    );
}

fn run_figure_cli(out: &Path) {
    let status = Command::new(env!("CARGO_BIN_EXE_qcorr"))
        .args(["figure", "fig3", "--svg", "--out"])
        .arg(out)
        .env_remove("QCORR_WORKERS")
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn figure_output_is_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_figure_cli(a.path());
    run_figure_cli(b.path());
    let mut names: Vec<String> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    let differing: Vec<&String> = names
        .iter()
        .filter(|n| std::fs::read(a.path().join(n)).ok() != std::fs::read(b.path().join(n)).ok())
        .collect();
    let has_outputs =
        names.iter().any(|n| n.ends_with(".csv")) && names.iter().any(|n| n.ends_with(".svg"));
    let pass = has_outputs && differing.is_empty();
    report(
        10,
        "determinism of `qcorr figure fig3 --svg`",
        pass,
        &format!("files {names:?}, differing {differing:?}"),
    );
    assert!(pass);
}

#[test]
fn figure_one_regeneration() {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    for id in FigureId::ALL {
        regenerate_figure(id, dir.path(), true, 1).unwrap();
    }
    let elapsed = start.elapsed();

    let mut reader = csv::Reader::from_path(dir.path().join("fig1.csv")).unwrap();
    let headers = reader.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let (lam, psi, cons, u) = (col("lambda"), col("psi"), col("consonance"), col("uin"));
    let rows: Vec<[f64; 4]> = reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            [lam, psi, cons, u].map(|i| r[i].parse::<f64>().unwrap())
        })
        .collect();

    let worst_formula = rows
        .iter()
        .map(|r| (r[2] - r[0] * (2.0 * r[1]).sin()).abs())
        .fold(0.0f64, f64::max);

    let curve = |psi: f64, m: usize| -> Vec<f64> {
        rows.iter()
            .filter(|r| (r[1] - psi).abs() < 1e-15)
            .map(|r| r[m])
            .collect()
    };
    let mut shape_ok = true;
    for psi in [PI / 5.0, FRAC_PI_4] {
        for m in [2, 3] {
            let ys = curve(psi, m);
            let max = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            shape_ok &= ys.len() == 101
                && monotonicity_violations(&ys, Trend::NonDecreasing) == 0
                && *ys.last().unwrap() >= max - FIG1_TOL;
        }
    }
    let mut dominated = true;
    for m in [2, 3] {
        let low = curve(PI / 5.0, m);
        let high = curve(FRAC_PI_4, m);
        dominated &=
            low.len() == high.len() && low.iter().zip(&high).all(|(l, h)| *h >= *l - FIG1_TOL);
    }

    let pass = worst_formula <= FIG1_TOL && shape_ok && dominated && elapsed < ALL_PRESETS_BUDGET;
    report(
        11,
        "figure 1 regeneration",
        pass,
        &format!(
            "{} rows, max |consonance - lambda sin 2psi| {worst_formula:.2e} (tol {FIG1_TOL:.0e}), non-decreasing with max at lambda=1: {shape_ok}, psi=pi/4 dominates psi=pi/5: {dominated}; all presets in {:.2} s (budget {} s)",
            rows.len(),
            elapsed.as_secs_f64(),
            ALL_PRESETS_BUDGET.as_secs()
        ),
    );
    assert!(pass);
}
