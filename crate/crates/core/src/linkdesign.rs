//! Named studies over scenarios: degraded-region angles, the leakage versus
//! sacrifice-rate trade-off, and angular/radial leakage maps.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exponents::{sacrifice_exponent, spatial_leakage, ExponentMode, SpatialPoint};
use crate::geometry::{degradation_angle, main_lobe_edge, Degradation};
use crate::infotheory::{capacity_surface, format_f64, write_capacity_csv, BpskAwgn};
use crate::scenario::{Frame, Scenario, Study, Target};

/// Allowed gap between a computed threshold and its reference angle.
pub const REGION_TOLERANCE_DEG: f64 = 1.5;

#[derive(Debug, Clone, PartialEq)]
pub struct RegionRow {
    pub scenario: String,
    pub theta_star: Degradation,
    /// First exit from the non-degraded main lobe, ignoring side lobes.
    pub main_lobe_edge_deg: Option<f64>,
    pub target: Option<Target>,
    /// `theta* - target` when both are angles.
    pub residual_deg: Option<f64>,
    /// Computed verdict agrees with the target within tolerance.
    pub matches_target: Option<bool>,
}

impl RegionRow {
    pub fn verdict(&self) -> &'static str {
        match self.theta_star {
            Degradation::Never => "never degraded",
            Degradation::Beyond { theta_deg: 0.0 } => "degraded everywhere",
            Degradation::Beyond { .. } => "degraded beyond theta*",
        }
    }
}

/// Degradation angle per scenario, compared to its reference when present.
pub fn run_region_study(scenarios: &[Scenario]) -> Result<Vec<RegionRow>> {
    scenarios
        .par_iter()
        .map(|sc| {
            let theta_star = degradation_angle(&sc.pattern, &sc.eve, &sc.geometry)?;
            let edge = main_lobe_edge(&sc.pattern, &sc.eve, &sc.geometry)?;
            let (residual_deg, matches_target) = match (sc.target, theta_star) {
                (Some(Target::Angle(t)), Degradation::Beyond { theta_deg }) => {
                    let r = theta_deg - t;
                    (Some(r), Some(r.abs() <= REGION_TOLERANCE_DEG))
                }
                (Some(Target::Never), Degradation::Never) => (None, Some(true)),
                (Some(_), _) => (None, Some(false)),
                (None, _) => (None, None),
            };
            Ok(RegionRow {
                scenario: sc.name.clone(),
                theta_star,
                main_lobe_edge_deg: edge,
                target: sc.target,
                residual_deg,
                matches_target,
            })
        })
        .collect()
}

fn opt(v: Option<f64>) -> String {
    v.map(format_f64).unwrap_or_default()
}

pub fn region_csv(rows: &[RegionRow]) -> String {
    let mut s = String::from("scenario,theta_star_deg,verdict,main_lobe_edge_deg,target_deg,residual_deg,matches_target\n");
    for r in rows {
        let target = match r.target {
            Some(Target::Angle(t)) => format_f64(t),
            Some(Target::Never) => "never".to_string(),
            None => String::new(),
        };
        let matches = r.matches_target.map(|m| m.to_string()).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.scenario,
            opt(r.theta_star.threshold()),
            r.verdict(),
            opt(r.main_lobe_edge_deg),
            target,
            opt(r.residual_deg),
            matches
        );
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffRow {
    pub rho_sac: f64,
    pub s_star: f64,
    pub exponent_bits: f64,
    pub bound: f64,
    /// Fraction of the inner-code rate given to secrecy, `rho_sac / rho`.
    pub x: f64,
    /// Remaining secret-message rate `(1 - x) rho`.
    pub rho_s: f64,
    pub grid_fallback: bool,
}

/// `rho_sac = x / 3` for `x = 0.01, 0.02, ..., 1`.
pub fn default_rho_sac_grid() -> Vec<f64> {
    (1..=100).map(|i| i as f64 / 100.0 * Frame::RATE).collect()
}

/// Optimal leakage bound across sacrifice rates for one frame size.
pub fn run_tradeoff(
    frame: Frame,
    gamma_g0: f64,
    n_b: f64,
    rho_sac_grid: &[f64],
    mode: ExponentMode,
) -> Result<Vec<TradeoffRow>> {
    if let Some(&bad) = rho_sac_grid.iter().find(|v| !(0.0..=Frame::RATE + 1e-12).contains(*v)) {
        return Err(Error::Domain { what: "rho_sac", value: bad, expected: "within [0, 1/3]" });
    }
    let ch = BpskAwgn::new(gamma_g0, n_b)?;
    rho_sac_grid
        .par_iter()
        .map(|&rho_sac| {
            let lb = sacrifice_exponent(rho_sac, frame.n(), &ch, mode)?;
            let x = rho_sac / Frame::RATE;
            Ok(TradeoffRow {
                rho_sac,
                s_star: lb.s_star,
                exponent_bits: lb.exponent,
                bound: lb.bound,
                x,
                rho_s: ((1.0 - x) * Frame::RATE).max(0.0),
                grid_fallback: lb.grid_fallback,
            })
        })
        .collect()
}

pub fn tradeoff_csv(rows: &[TradeoffRow]) -> String {
    let mut s = String::from("rho_sac,s_star,exponent_bits,bound,x,rho_s\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            format_f64(r.rho_sac),
            format_f64(r.s_star),
            format_f64(r.exponent_bits),
            format_f64(r.bound),
            format_f64(r.x),
            format_f64(r.rho_s)
        );
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialRow {
    pub rho_e_km: f64,
    pub point: SpatialPoint,
}

/// Leakage bound over angles, and over Eve distances when `rho_e_grid` is
/// given. Cells are guaranteed only where Eve is degraded and the bound is
/// below 1.
pub fn run_spatial_map(
    frame: Frame,
    scenario: &Scenario,
    rho_sac: f64,
    thetas: &[f64],
    rho_e_grid: Option<&[f64]>,
) -> Result<Vec<SpatialRow>> {
    let radii: Vec<f64> = match rho_e_grid {
        Some(g) if !g.is_empty() => g.to_vec(),
        _ => vec![scenario.geometry.rho_e_km],
    };
    let mut rows = Vec::with_capacity(radii.len() * thetas.len());
    for rho_e_km in radii {
        let geom = scenario.geometry.with_rho_e(rho_e_km);
        geom.validate()?;
        let points = spatial_leakage(&scenario.pattern, &scenario.eve, &geom, scenario.n_b, rho_sac, frame.n(), 1.0, thetas)?;
        rows.extend(points.into_iter().map(|point| SpatialRow { rho_e_km, point }));
    }
    Ok(rows)
}

/// Long-format CSV; the `rho_e_km` column is present only for 2-D maps.
pub fn spatial_csv(rows: &[SpatialRow], two_d: bool) -> String {
    let mut s = String::new();
    if two_d {
        s.push_str("rho_e_km,");
    }
    s.push_str("theta_deg,gamma_g0,exponent_bits,bound,guaranteed\n");
    for r in rows {
        if two_d {
            s.push_str(&format_f64(r.rho_e_km));
            s.push(',');
        }
        let p = &r.point;
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            format_f64(p.theta_deg),
            format_f64(p.gamma_g0),
            format_f64(p.exponent_bits),
            format_f64(p.bound),
            p.guaranteed
        );
    }
    s
}

/// Result of running a scenario's `[experiment]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyOutput {
    pub scenario: String,
    pub study: Study,
    pub csv: String,
    /// One line with the key numbers.
    pub summary: String,
}

impl StudyOutput {
    pub fn file_name(&self) -> String {
        format!("{}_{}.csv", self.scenario, self.study.name())
    }
}

/// Runs the study named in the scenario's experiment table (region study
/// when absent).
pub fn run_experiment(scenario: &Scenario) -> Result<StudyOutput> {
    let exp = scenario.experiment.clone().unwrap_or_else(|| crate::scenario::Experiment::new(Study::Region));
    let (csv, summary) = match exp.study {
        Study::Region => {
            let rows = run_region_study(std::slice::from_ref(scenario))?;
            let r = &rows[0];
            let summary = match r.theta_star {
                Degradation::Never => format!("{}: never degraded", r.scenario),
                Degradation::Beyond { theta_deg } => format!("{}: theta* = {theta_deg:.2} deg", r.scenario),
            };
            (region_csv(&rows), summary)
        }
        Study::Tradeoff => {
            let grid = if exp.rho_sac_grid.is_empty() { default_rho_sac_grid() } else { exp.rho_sac_grid.clone() };
            let rows = run_tradeoff(scenario.frame, exp.gamma_g0, scenario.n_b, &grid, ExponentMode::Tightest)?;
            let best = rows.iter().map(|r| r.bound).fold(f64::INFINITY, f64::min);
            (tradeoff_csv(&rows), format!("{}: smallest bound = {best:.3e}", scenario.name))
        }
        Study::Spatial => {
            let thetas = exp.theta_grid()?;
            let grid = (!exp.rho_e_grid_km.is_empty()).then_some(exp.rho_e_grid_km.as_slice());
            let rows = run_spatial_map(scenario.frame, scenario, scenario.rho_sac, &thetas, grid)?;
            let guaranteed = rows.iter().filter(|r| r.point.guaranteed).count();
            let summary = format!("{}: {guaranteed} of {} cells guaranteed", scenario.name, rows.len());
            (spatial_csv(&rows, grid.is_some()), summary)
        }
        Study::Capacity => {
            let gammas: Vec<f64> = (0..20).map(|i| i as f64 / 19.0).collect();
            let snrs: Vec<f64> = (0..20).map(|i| -10.0 + 30.0 * i as f64 / 19.0).collect();
            let cells = capacity_surface(&gammas, &snrs)?;
            let mut buf = Vec::new();
            write_capacity_csv(&cells, &mut buf).expect("in-memory write");
            let peak = cells.iter().map(|c| c.cs_bits).fold(0.0, f64::max);
            (String::from_utf8(buf).expect("ascii csv"), format!("{}: max C_s = {peak:.6} bits", scenario.name))
        }
    };
    Ok(StudyOutput { scenario: scenario.name.clone(), study: exp.study, csv, summary })
}

/// Writes `contents` to `dir/name` through a temporary file and rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}
