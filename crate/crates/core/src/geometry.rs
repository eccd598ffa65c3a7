//! Satellite wiretap geometry: antenna pattern, relative path loss, and the
//! stochastic degradation test for an eavesdropper placement.
//!
//! Angles are in degrees at this API boundary and converted to radians only
//! inside the pattern evaluation. Amplitudes are linear (square roots of
//! power ratios); the scenario layer converts from dB.

use crate::error::{Error, Result};
use crate::numeric::bessel_j;

/// Half-power argument of the side-lobed Bessel pattern.
pub const HALF_POWER_ARGUMENT: f64 = 2.0712;

/// Smallest pattern amplitude used in the channel coefficient (-240 dB).
pub const AMPLITUDE_FLOOR: f64 = 1e-12;

const SCAN_STEP_DEG: f64 = 0.01;

/// Alice-Bob-Eve placement in polar coordinates around Alice's antenna,
/// Bob on boresight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    pub rho_b_km: f64,
    pub rho_e_km: f64,
    pub theta_e_deg: f64,
    /// Path-loss exponent of Eve's channel.
    pub r: f64,
    /// Distances are divided by this many kilometres before exponentiation.
    pub unit_km: f64,
}

impl LinkGeometry {
    pub fn new(rho_b_km: f64, rho_e_km: f64, theta_e_deg: f64, r: f64) -> Result<Self> {
        let g = LinkGeometry { rho_b_km, rho_e_km, theta_e_deg, r, unit_km: 1.0 };
        g.validate()?;
        Ok(g)
    }

    pub fn with_unit_km(mut self, unit_km: f64) -> Result<Self> {
        self.unit_km = unit_km;
        self.validate()?;
        Ok(self)
    }

    pub fn with_theta(mut self, theta_e_deg: f64) -> Self {
        self.theta_e_deg = theta_e_deg;
        self
    }

    pub fn with_rho_e(mut self, rho_e_km: f64) -> Self {
        self.rho_e_km = rho_e_km;
        self
    }

    pub fn validate(&self) -> Result<()> {
        positive("rho_b_km", self.rho_b_km)?;
        positive("rho_e_km", self.rho_e_km)?;
        positive("unit_km", self.unit_km)?;
        angle("theta_e_deg", self.theta_e_deg)?;
        if !(self.r.is_finite() && self.r >= 2.0) {
            return Err(Error::Domain { what: "r", value: self.r, expected: "finite and >= 2" });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PatternKind {
    /// `J1(x)/(2x) + 36 J3(x)/x^3` with `x = k sin(theta)`.
    BesselLobes,
    /// Emission mask: `(angle_deg, gain_dB)` pairs, linear in dB between
    /// points and held constant outside the table.
    RegulatoryMask(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AntennaPattern {
    pub theta_3db_deg: f64,
    pub kind: PatternKind,
}

impl AntennaPattern {
    pub fn bessel(theta_3db_deg: f64) -> Result<Self> {
        let p = AntennaPattern { theta_3db_deg, kind: PatternKind::BesselLobes };
        p.validate()?;
        Ok(p)
    }

    pub fn mask(theta_3db_deg: f64, table: Vec<(f64, f64)>) -> Result<Self> {
        let p = AntennaPattern { theta_3db_deg, kind: PatternKind::RegulatoryMask(table) };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta_3db_deg > 0.0 && self.theta_3db_deg < 90.0) {
            return Err(Error::Domain {
                what: "theta_3db_deg",
                value: self.theta_3db_deg,
                expected: "in (0, 90)",
            });
        }
        if let PatternKind::RegulatoryMask(table) = &self.kind {
            if table.is_empty() {
                return Err(Error::invalid("mask", "empty table"));
            }
            if table.iter().any(|(a, g)| !a.is_finite() || !g.is_finite()) {
                return Err(Error::invalid("mask", "non-finite entry"));
            }
            if table.windows(2).any(|w| w[1].0 <= w[0].0) {
                return Err(Error::invalid("mask", "angles must be strictly increasing"));
            }
        }
        Ok(())
    }

    /// Scale factor `k` of the Bessel pattern.
    pub fn bessel_scale(&self) -> f64 {
        HALF_POWER_ARGUMENT / self.theta_3db_deg.to_radians().sin()
    }
}

/// Eavesdropper capability envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EveSystem {
    /// Eve-to-Bob antenna amplitude ratio (worst case, angle independent).
    pub mu: f64,
    /// Eve-to-Bob noise power ratio.
    pub gamma_n: f64,
}

impl EveSystem {
    pub fn new(mu: f64, gamma_n: f64) -> Result<Self> {
        positive("mu", mu)?;
        positive("gamma_n", gamma_n)?;
        Ok(EveSystem { mu, gamma_n })
    }

    /// `mu_db` is an amplitude ratio in dB (20 log10), `gamma_n_db` a power
    /// ratio (10 log10).
    pub fn from_db(mu_db: f64, gamma_n_db: f64) -> Result<Self> {
        EveSystem::new(db_to_amplitude(mu_db), db_to_power(gamma_n_db))
    }
}

/// Regularised scalar wiretap model consumed by the information-theoretic
/// kernels: Eve sees `gamma_g0 X + sqrt(n_B) N`, Bob sees `X + sqrt(n_B) N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WiretapChannel {
    pub gamma_g0: f64,
    pub n_b: f64,
}

impl WiretapChannel {
    /// Eve's channel is stochastically degraded w.r.t. Bob's.
    pub fn degraded(&self) -> bool {
        self.gamma_g0 < 1.0
    }
}

pub fn db_to_amplitude(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

pub fn db_to_power(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn amplitude_to_db(a: f64) -> f64 {
    20.0 * a.log10()
}

pub fn power_to_db(p: f64) -> f64 {
    10.0 * p.log10()
}

fn positive(what: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { what, value: v, expected: "finite and > 0" })
    }
}

fn angle(what: &'static str, v: f64) -> Result<()> {
    if (0.0..=90.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Domain { what, value: v, expected: "in [0, 90] degrees" })
    }
}

/// Signed pattern amplitude `alpha(theta)`, boresight-normalised.
pub fn antenna_amplitude(pattern: &AntennaPattern, theta_deg: f64) -> Result<f64> {
    angle("theta", theta_deg)?;
    match &pattern.kind {
        PatternKind::BesselLobes => {
            let x = pattern.bessel_scale() * theta_deg.to_radians().sin();
            Ok(bessel_lobes(x))
        }
        PatternKind::RegulatoryMask(table) => Ok(db_to_amplitude(interpolate_db(table, theta_deg))),
    }
}

fn bessel_lobes(x: f64) -> f64 {
    // series limits: J1(x)/(2x) -> 1/4 - x^2/32, 36 J3(x)/x^3 -> 3/4 - 3x^2/64
    if x.abs() < 1e-4 {
        return 1.0 - 5.0 * x * x / 64.0;
    }
    bessel_j(1, x) / (2.0 * x) + 36.0 * bessel_j(3, x) / (x * x * x)
}

fn interpolate_db(table: &[(f64, f64)], theta: f64) -> f64 {
    let first = table[0];
    let last = table[table.len() - 1];
    if theta <= first.0 {
        return first.1;
    }
    if theta >= last.0 {
        return last.1;
    }
    let i = table.partition_point(|&(a, _)| a <= theta);
    let (a0, g0) = table[i - 1];
    let (a1, g1) = table[i];
    g0 + (g1 - g0) * (theta - a0) / (a1 - a0)
}

/// Relative path-loss amplitude `beta = sqrt(rho_B^2 / rho_E^r)` with both
/// distances expressed in `geom.unit_km`.
pub fn path_loss_ratio(geom: &LinkGeometry) -> f64 {
    let rb = geom.rho_b_km / geom.unit_km;
    let re = geom.rho_e_km / geom.unit_km;
    // sqrt(rb^2 / re^r) = rb * re^(-r/2)
    rb * re.powf(-geom.r / 2.0)
}

/// Eve's deterministic channel coefficient `|alpha(theta_E)| mu beta`.
pub fn channel_coefficient(pattern: &AntennaPattern, eve: &EveSystem, geom: &LinkGeometry) -> Result<f64> {
    let alpha = antenna_amplitude(pattern, geom.theta_e_deg)?.abs().max(AMPLITUDE_FLOOR);
    Ok(alpha * eve.mu * path_loss_ratio(geom))
}

pub fn regularize(gamma_g: f64, eve: &EveSystem, n_b: f64) -> WiretapChannel {
    WiretapChannel { gamma_g0: gamma_g / eve.gamma_n.sqrt(), n_b }
}

/// `gamma_g0` at polar angle `theta_deg`, other coordinates from `geom`.
pub fn regularized_coefficient(
    pattern: &AntennaPattern,
    eve: &EveSystem,
    geom: &LinkGeometry,
    theta_deg: f64,
) -> Result<f64> {
    let g = channel_coefficient(pattern, eve, &geom.with_theta(theta_deg))?;
    Ok(g / eve.gamma_n.sqrt())
}

/// Outcome of the angular degradation search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Degradation {
    /// Every angle in `(theta_deg, 90]` is degraded.
    Beyond { theta_deg: f64 },
    /// Eve is not degraded even at 90 degrees.
    Never,
}

impl Degradation {
    pub fn threshold(&self) -> Option<f64> {
        match self {
            Degradation::Beyond { theta_deg } => Some(*theta_deg),
            Degradation::Never => None,
        }
    }
}

/// Smallest angle beyond which Eve's channel is degraded at every larger
/// angle up to 90 degrees. `geom.theta_e_deg` is ignored.
///
/// A 0.01 degree scan locates the last non-degraded sample; bisection then
/// refines the crossing to 1e-9 degrees.
pub fn degradation_angle(pattern: &AntennaPattern, eve: &EveSystem, geom: &LinkGeometry) -> Result<Degradation> {
    let g0 = |theta: f64| regularized_coefficient(pattern, eve, geom, theta);
    if g0(90.0)? >= 1.0 {
        return Ok(Degradation::Never);
    }
    let steps = (90.0 / SCAN_STEP_DEG).round() as usize;
    let mut last_bad = None;
    for i in (0..steps).rev() {
        let theta = i as f64 * SCAN_STEP_DEG;
        if g0(theta)? >= 1.0 {
            last_bad = Some(theta);
            break;
        }
    }
    let Some(lo) = last_bad else {
        return Ok(Degradation::Beyond { theta_deg: 0.0 });
    };
    let (mut lo, mut hi) = (lo, (lo + SCAN_STEP_DEG).min(90.0));
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if g0(mid)? >= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Degradation::Beyond { theta_deg: hi })
}

/// First angle at which Eve leaves the non-degraded main lobe, ignoring
/// side lobes that climb back above the threshold further out.
pub fn main_lobe_edge(pattern: &AntennaPattern, eve: &EveSystem, geom: &LinkGeometry) -> Result<Option<f64>> {
    let g0 = |theta: f64| regularized_coefficient(pattern, eve, geom, theta);
    if g0(0.0)? < 1.0 {
        return Ok(Some(0.0));
    }
    let steps = (90.0 / SCAN_STEP_DEG).round() as usize;
    for i in 1..=steps {
        let theta = i as f64 * SCAN_STEP_DEG;
        if g0(theta)? < 1.0 {
            let (mut lo, mut hi) = (theta - SCAN_STEP_DEG, theta);
            while hi - lo > 1e-9 {
                let mid = 0.5 * (lo + hi);
                if g0(mid)? >= 1.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(Some(hi));
        }
    }
    Ok(None)
}
