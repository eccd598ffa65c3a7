//! Scenario files (TOML) and the built-in preset catalogue.
//!
//! External units: distances in km, angles in degrees, `mu_dB` as an
//! amplitude ratio (20 log10), `gamma_n_dB` as a power ratio (10 log10).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::CodeParams;
use crate::geometry::{AntennaPattern, EveSystem, LinkGeometry};

/// DVB-S2 LDPC frame sizes; the inner code rate is fixed at 1/3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    #[default]
    Short,
    Medium,
}

impl Frame {
    pub const RATE: f64 = 1.0 / 3.0;

    pub fn n(self) -> u64 {
        match self {
            Frame::Short => 16200,
            Frame::Medium => 32400,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Frame::Short => "short",
            Frame::Medium => "medium",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "short" => Ok(Frame::Short),
            "medium" => Ok(Frame::Medium),
            other => Err(Error::invalid("frame", format!("{other:?} is not one of short, medium"))),
        }
    }

    pub fn code_params(self, rho_sac: f64, epsilon_b: f64) -> Result<CodeParams> {
        CodeParams::from_rates(self.n(), Frame::RATE, rho_sac, epsilon_b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternName {
    #[default]
    Bessel,
    Mask,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Study {
    Region,
    Tradeoff,
    Spatial,
    Capacity,
}

impl Study {
    pub fn name(self) -> &'static str {
        match self {
            Study::Region => "region",
            Study::Tradeoff => "tradeoff",
            Study::Spatial => "spatial",
            Study::Capacity => "capacity",
        }
    }
}

/// Optional `[experiment]` table choosing a study and its grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    pub study: Study,
    #[serde(default = "default_theta_min")]
    pub theta_min_deg: f64,
    #[serde(default = "default_theta_max")]
    pub theta_max_deg: f64,
    #[serde(default = "default_theta_step")]
    pub theta_step_deg: f64,
    /// Radial grid for 2-D spatial maps; empty means the scenario's `rho_E_km`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rho_e_grid_km: Vec<f64>,
    /// Sacrifice-rate grid for trade-off sweeps; empty means `x rho` for
    /// `x = 0.01, 0.02, ..., 1`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rho_sac_grid: Vec<f64>,
    /// Eve's regularised amplitude for trade-off sweeps.
    #[serde(default = "default_gamma")]
    pub gamma_g0: f64,
}

fn default_theta_min() -> f64 {
    0.0
}
fn default_theta_max() -> f64 {
    90.0
}
fn default_theta_step() -> f64 {
    0.5
}
fn default_gamma() -> f64 {
    0.5
}
fn default_unit() -> f64 {
    1.0
}
fn default_n_b() -> f64 {
    1.0
}
fn default_rho_sac() -> f64 {
    0.18
}

impl Experiment {
    pub fn new(study: Study) -> Self {
        Experiment {
            study,
            theta_min_deg: default_theta_min(),
            theta_max_deg: default_theta_max(),
            theta_step_deg: default_theta_step(),
            rho_e_grid_km: Vec::new(),
            rho_sac_grid: Vec::new(),
            gamma_g0: default_gamma(),
        }
    }

    /// Inclusive angle grid; the last point is clipped to `theta_max_deg`.
    pub fn theta_grid(&self) -> Result<Vec<f64>> {
        theta_grid(self.theta_min_deg, self.theta_max_deg, self.theta_step_deg)
    }
}

pub fn theta_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(0.0..=90.0).contains(&min) || !(0.0..=90.0).contains(&max) || min > max {
        return Err(Error::invalid("theta_min_deg/theta_max_deg", "need 0 <= min <= max <= 90"));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::invalid("theta_step_deg", "must be > 0"));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=count).map(|i| min + i as f64 * step).collect();
    if max - grid[grid.len() - 1] > 1e-9 {
        grid.push(max);
    }
    Ok(grid)
}

/// On-disk scenario, in external units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    #[serde(rename = "rho_B_km")]
    pub rho_b_km: f64,
    #[serde(rename = "rho_E_km")]
    pub rho_e_km: f64,
    #[serde(rename = "theta_E_deg", default)]
    pub theta_e_deg: f64,
    pub r: f64,
    #[serde(rename = "mu_dB")]
    pub mu_db: f64,
    #[serde(rename = "gamma_n_dB")]
    pub gamma_n_db: f64,
    #[serde(rename = "theta_3dB_deg")]
    pub theta_3db_deg: f64,
    #[serde(default)]
    pub pattern: PatternName,
    /// `(angle_deg, gain_dB)` pairs, used when `pattern = "mask"`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mask: Vec<[f64; 2]>,
    #[serde(default = "default_unit")]
    pub unit_km: f64,
    #[serde(rename = "n_B", default = "default_n_b")]
    pub n_b: f64,
    #[serde(default)]
    pub frame: Frame,
    #[serde(default = "default_rho_sac")]
    pub rho_sac: f64,
    #[serde(default)]
    pub epsilon_b: f64,
    /// Reference threshold angle to compare against.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_theta_deg: Option<f64>,
    /// Reference verdict: never degraded.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub target_never: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
}

/// Reference outcome attached to a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Angle(f64),
    Never,
}

/// Validated scenario in internal units.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub geometry: LinkGeometry,
    pub pattern: AntennaPattern,
    pub eve: EveSystem,
    pub n_b: f64,
    /// Symbol energy; fixed at 1 so that `n_B` is the inverse SNR.
    pub e_s: f64,
    pub frame: Frame,
    pub rho_sac: f64,
    pub code: CodeParams,
    pub target: Option<Target>,
    pub experiment: Option<Experiment>,
}

/// Rename a core error so it names the scenario-file key.
fn field_error(key: &str, e: Error) -> Error {
    match e {
        Error::Domain { value, expected, .. } => Error::invalid(key, format!("{value} is not {expected}")),
        Error::Invalid { reason, .. } => Error::invalid(key, reason),
        other => Error::invalid(key, other.to_string()),
    }
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let msg = e.message().to_string();
            Error::invalid("scenario file", msg)
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serialises")
    }

    pub fn resolve(&self) -> Result<Scenario> {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(Error::invalid("name", "must be non-empty and contain no path separators"));
        }
        let geometry = LinkGeometry {
            rho_b_km: self.rho_b_km,
            rho_e_km: self.rho_e_km,
            theta_e_deg: self.theta_e_deg,
            r: self.r,
            unit_km: self.unit_km,
        };
        let checks: [(&str, Result<()>); 6] = [
            ("rho_B_km", positive(self.rho_b_km)),
            ("rho_E_km", positive(self.rho_e_km)),
            ("unit_km", positive(self.unit_km)),
            ("theta_E_deg", in_range(self.theta_e_deg, 0.0, 90.0)),
            ("r", if self.r.is_finite() && self.r >= 2.0 { Ok(()) } else { Err(Error::invalid("r", "must be >= 2")) }),
            ("n_B", positive(self.n_b)),
        ];
        for (key, check) in checks {
            check.map_err(|e| field_error(key, e))?;
        }
        geometry.validate().map_err(|e| field_error("geometry", e))?;
        let pattern = match self.pattern {
            PatternName::Bessel => AntennaPattern::bessel(self.theta_3db_deg),
            PatternName::Mask => AntennaPattern::mask(self.theta_3db_deg, self.mask.iter().map(|p| (p[0], p[1])).collect()),
        }
        .map_err(|e| field_error(if self.pattern == PatternName::Mask { "mask" } else { "theta_3dB_deg" }, e))?;
        let eve = EveSystem::from_db(self.mu_db, self.gamma_n_db).map_err(|e| {
            field_error(if self.mu_db.is_finite() { "gamma_n_dB" } else { "mu_dB" }, e)
        })?;
        let code = self.frame.code_params(self.rho_sac, self.epsilon_b).map_err(|e| {
            field_error(if (0.0..=1.0).contains(&self.epsilon_b) { "rho_sac" } else { "epsilon_b" }, e)
        })?;
        let target = match (self.target_theta_deg, self.target_never) {
            (Some(_), true) => {
                return Err(Error::invalid("target_theta_deg", "conflicts with target_never = true"));
            }
            (Some(t), false) => Some(Target::Angle(t)),
            (None, true) => Some(Target::Never),
            (None, false) => None,
        };
        if let Some(exp) = &self.experiment {
            exp.theta_grid().map_err(|e| field_error("experiment", e))?;
            if let Some(bad) = exp.rho_e_grid_km.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
                return Err(Error::invalid("experiment.rho_e_grid_km", format!("{bad} is not > 0")));
            }
            if let Some(bad) = exp.rho_sac_grid.iter().find(|v| !(0.0..=Frame::RATE).contains(*v)) {
                return Err(Error::invalid("experiment.rho_sac_grid", format!("{bad} is outside [0, 1/3]")));
            }
            if !(exp.gamma_g0.is_finite() && exp.gamma_g0 >= 0.0) {
                return Err(Error::invalid("experiment.gamma_g0", "must be >= 0"));
            }
        }
        Ok(Scenario {
            name: self.name.clone(),
            geometry,
            pattern,
            eve,
            n_b: self.n_b,
            e_s: 1.0,
            frame: self.frame,
            rho_sac: self.rho_sac,
            code,
            target,
            experiment: self.experiment.clone(),
        })
    }
}

fn positive(v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("value", format!("{v} is not > 0")))
    }
}

fn in_range(v: f64, lo: f64, hi: f64) -> Result<()> {
    if (lo..=hi).contains(&v) {
        Ok(())
    } else {
        Err(Error::invalid("value", format!("{v} is outside [{lo}, {hi}]")))
    }
}

pub const GEO_KM: f64 = 35786.0;
pub const MEO_KM: f64 = 15000.0;
pub const LEO_KM: f64 = 1200.0;

/// `mu = 0.05` expressed in dB.
pub fn mu_lin_db() -> f64 {
    20.0 * 0.05f64.log10()
}

/// `gamma_n = 3` expressed in dB.
pub fn gamma_n_lin_db() -> f64 {
    10.0 * 3f64.log10()
}

#[allow(clippy::too_many_arguments)]
fn preset(name: &str, rho_b: f64, rho_e: f64, r: f64, mu_db: f64, gamma_n_db: f64, bw: f64, target: Option<Target>) -> ScenarioFile {
    ScenarioFile {
        name: name.to_string(),
        rho_b_km: rho_b,
        rho_e_km: rho_e,
        theta_e_deg: 0.0,
        r,
        mu_db,
        gamma_n_db,
        theta_3db_deg: bw,
        pattern: PatternName::Bessel,
        mask: Vec::new(),
        unit_km: 1.0,
        n_b: 1.0,
        frame: Frame::Short,
        rho_sac: 0.18,
        epsilon_b: 0.0,
        target_theta_deg: match target {
            Some(Target::Angle(t)) => Some(t),
            _ => None,
        },
        target_never: target == Some(Target::Never),
        experiment: None,
    }
}

/// Built-in scenarios: GEO Bob with LEO/MEO Eve for two beamwidths and two
/// antenna ratios, and MEO Bob with three UAV altitudes. Reference angles
/// are paired with the Eve distance whose model result they match (the
/// closer Eve always needs the larger angle).
pub fn presets() -> Vec<ScenarioFile> {
    use Target::{Angle, Never};
    let mut out = Vec::new();
    for (bw, mu_db, leo_target, meo_target) in [(5.0, 0.0, 13.0, 7.0), (5.0, 6.0, 18.0, 10.0), (10.0, 0.0, 26.0, 15.0), (10.0, 6.0, 28.0, 20.0)] {
        let tag = format!("bw{bw}-mu{mu_db}");
        out.push(preset(&format!("geo-leo-{tag}"), GEO_KM, LEO_KM, 2.0, mu_db, 0.0, bw, Some(Angle(leo_target))));
        out.push(preset(&format!("geo-meo-{tag}"), GEO_KM, MEO_KM, 2.0, mu_db, 0.0, bw, Some(Angle(meo_target))));
    }
    let uav = [("low", 1.0, 3.0, Never), ("medium", 5.0, 2.0, Angle(18.0)), ("high", 10.0, 2.0, Angle(12.0))];
    for (label, rho_e, r, target) in uav {
        out.push(preset(&format!("uav-{label}"), MEO_KM, rho_e, r, -25.0, 4.77, 5.0, Some(target)));
    }
    for (label, rho_e, r, target) in uav {
        out.push(preset(&format!("uav-{label}-mu-lin"), MEO_KM, rho_e, r, mu_lin_db(), 4.77, 5.0, Some(target)));
    }
    for (label, rho_e, r, target) in uav {
        out.push(preset(&format!("uav-{label}-gn-lin"), MEO_KM, rho_e, r, -25.0, gamma_n_lin_db(), 5.0, Some(target)));
    }
    out
}

/// Scenario for the angular leakage map: the row whose reference
/// degradation angle is 15 degrees.
pub const SPATIAL_PRESET: &str = "geo-meo-bw10-mu0";

pub fn preset_by_name(name: &str) -> Result<ScenarioFile> {
    presets()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::invalid("preset", format!("unknown preset {name:?}")))
}

/// The eleven reference rows (no `-mu-lin`/`-gn-lin` variants).
pub fn reference_presets() -> Vec<ScenarioFile> {
    presets().into_iter().filter(|p| !p.name.ends_with("-lin")).collect()
}
