//! Parameter sweeps, figure presets and critical-point searches.
//!
//! Grid points are independent pure evaluations and run on the current rayon
//! pool; results are always collected back into axis order, so output does
//! not depend on the number of worker threads.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::{concurrence, eof_from_concurrence, mutual_information, quantum_discord};
use crate::device::{thermal_state, DeviceParams, EffectiveParams, ThermalSpec};
use crate::error::{Error, Result};
use crate::optimize::{bisect_predicate, golden_section_max};
use crate::qmath::Subsystem;

pub const DEFAULT_STEPS_1D: usize = 501;
pub const DEFAULT_STEPS_2D: usize = 101;
/// Concurrence above this value counts as entangled.
pub const ENTANGLED_THRESHOLD: f64 = 1e-12;
pub const DEFAULT_ESD_TOL: f64 = 1e-6;
/// Bracket width at which [`optimal_ratio`] stops.
pub const RATIO_TOL: f64 = 1e-6;
/// `ε` used by [`optimal_ratio`], K.
pub const RATIO_EPS: f64 = 1.0;
const RATIO_SCAN_POINTS: usize = 64;

/// Swept quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// `J₁₂/ε₁`, holding `ε` fixed.
    RatioJOverEps,
    /// Temperature, K.
    Temperature,
    /// `Φ_X1/Φ₀ = Φ_X2/Φ₀`.
    PhiXCommon,
    PhiX1,
    PhiX2,
    /// `V_X1 = V_X2`, V.
    Voltage,
}

impl Axis {
    pub const ALL: [Axis; 6] = [
        Axis::RatioJOverEps,
        Axis::Temperature,
        Axis::PhiXCommon,
        Axis::PhiX1,
        Axis::PhiX2,
        Axis::Voltage,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axis::RatioJOverEps => "ratio_j_over_eps",
            Axis::Temperature => "temperature",
            Axis::PhiXCommon => "phi_x_common",
            Axis::PhiX1 => "phi_x1",
            Axis::PhiX2 => "phi_x2",
            Axis::Voltage => "voltage",
        }
    }

    fn needs_device(self) -> bool {
        matches!(
            self,
            Axis::PhiXCommon | Axis::PhiX1 | Axis::PhiX2 | Axis::Voltage
        )
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Axis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown sweep variable '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Discord,
    Eof,
    Concurrence,
    MutualInformation,
    ClassicalCorrelation,
}

impl Measure {
    pub const ALL: [Measure; 5] = [
        Measure::Discord,
        Measure::Eof,
        Measure::Concurrence,
        Measure::MutualInformation,
        Measure::ClassicalCorrelation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Discord => "discord",
            Measure::Eof => "eof",
            Measure::Concurrence => "concurrence",
            Measure::MutualInformation => "mutual_information",
            Measure::ClassicalCorrelation => "classical_correlation",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown measure '{s}'")))
    }
}

/// Parameters held fixed during a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fixed {
    Effective(EffectiveParams),
    Device(DeviceParams),
}

impl Fixed {
    fn effective(&self) -> Result<EffectiveParams> {
        match self {
            Fixed::Effective(e) => {
                e.validate()?;
                Ok(*e)
            }
            Fixed::Device(d) => d.effective(),
        }
    }
}

/// One swept axis together with everything held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: Axis,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub fixed: Fixed,
    pub thermal: ThermalSpec,
    pub measures: Vec<Measure>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || !self.stop.is_finite() || !(self.start < self.stop) {
            return Err(Error::InvalidSpec(format!(
                "need finite start < stop, got [{}, {}]",
                self.start, self.stop
            )));
        }
        if self.steps < 2 {
            return Err(Error::InvalidSpec(format!("steps = {} < 2", self.steps)));
        }
        if self.measures.is_empty() {
            return Err(Error::InvalidSpec("no measures requested".into()));
        }
        if self.variable.needs_device() && !matches!(self.fixed, Fixed::Device(_)) {
            return Err(Error::InvalidSpec(format!(
                "sweeping {} needs device parameters",
                self.variable
            )));
        }
        if self.variable == Axis::Temperature && self.start < 0.0 {
            return Err(Error::InvalidSpec("temperature sweep starts below 0 K".into()));
        }
        self.thermal
            .validate()
            .map_err(|e| Error::InvalidSpec(e.to_string()))?;
        Ok(())
    }

    /// Uniform grid including both endpoints.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..self.steps)
            .map(|k| {
                if k == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * k as f64 / n as f64
                }
            })
            .collect()
    }
}

/// Axis value(s) and one entry per requested measure.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis: Vec<f64>,
    pub values: Vec<f64>,
}

/// Working point: fixed parameters with some axes applied.
#[derive(Debug, Clone, Copy)]
struct Point {
    fixed: Fixed,
    thermal: ThermalSpec,
    /// Set by a ratio axis; applied after device conversion.
    ratio: Option<f64>,
}

impl Point {
    fn apply(mut self, axis: Axis, v: f64) -> Result<Self> {
        match (axis, &mut self.fixed) {
            (Axis::RatioJOverEps, _) => self.ratio = Some(v),
            (Axis::Temperature, _) => self.thermal = ThermalSpec::new(v)?,
            (Axis::PhiXCommon, Fixed::Device(d)) => *d = d.with_phi_x(v),
            (Axis::PhiX1, Fixed::Device(d)) => d.phi_x1 = v,
            (Axis::PhiX2, Fixed::Device(d)) => d.phi_x2 = v,
            (Axis::Voltage, Fixed::Device(d)) => *d = d.with_voltage(v),
            (axis, Fixed::Effective(_)) => {
                return Err(Error::InvalidSpec(format!("{axis} needs device parameters")))
            }
        }
        Ok(self)
    }

    fn effective(&self) -> Result<EffectiveParams> {
        let mut eff = self.fixed.effective()?;
        if let Some(r) = self.ratio {
            eff.j12 = r * eff.eps1;
        }
        Ok(eff)
    }
}

/// Evaluates the requested measures on the thermal state of `eff`.
pub fn evaluate_measures(
    eff: &EffectiveParams,
    thermal: ThermalSpec,
    measures: &[Measure],
) -> Result<Vec<f64>> {
    let rho = thermal_state(eff, thermal)?;
    let needs_discord = measures
        .iter()
        .any(|m| matches!(m, Measure::Discord | Measure::ClassicalCorrelation));
    if needs_discord {
        let r = quantum_discord(&rho, Subsystem::First)?;
        return Ok(measures
            .iter()
            .map(|m| match m {
                Measure::Discord => r.discord,
                Measure::Eof => r.eof,
                Measure::Concurrence => r.concurrence,
                Measure::MutualInformation => r.mutual_information,
                Measure::ClassicalCorrelation => r.classical_correlation,
            })
            .collect());
    }
    let c = if measures
        .iter()
        .any(|m| matches!(m, Measure::Eof | Measure::Concurrence))
    {
        concurrence(&rho)?
    } else {
        0.0
    };
    measures
        .iter()
        .map(|m| match m {
            Measure::Eof => Ok(eof_from_concurrence(c)),
            Measure::Concurrence => Ok(c),
            Measure::MutualInformation => mutual_information(&rho),
            Measure::Discord | Measure::ClassicalCorrelation => unreachable!(),
        })
        .collect()
}

fn evaluate(point: Point, measures: &[Measure]) -> Result<Vec<f64>> {
    evaluate_measures(&point.effective()?, point.thermal, measures)
}

fn base_point(spec: &SweepSpec) -> Point {
    Point {
        fixed: spec.fixed,
        thermal: spec.thermal,
        ratio: None,
    }
}

/// Evaluates every grid point of `spec`, in ascending axis order.
pub fn sweep_1d(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let base = base_point(spec);
    spec.grid()
        .into_par_iter()
        .map(|x| {
            let values = evaluate(base.apply(spec.variable, x)?, &spec.measures)?;
            Ok(SweepRow {
                axis: vec![x],
                values,
            })
        })
        .collect()
}

/// Two-axis grid, `y` outer and `x` inner. Fixed parameters, temperature and
/// measures come from `spec_x`; rows carry `[x, y]`.
pub fn sweep_2d(spec_x: &SweepSpec, spec_y: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec_x.validate()?;
    spec_y.validate()?;
    if spec_x.variable == spec_y.variable {
        return Err(Error::InvalidSpec(format!(
            "both axes sweep {}",
            spec_x.variable
        )));
    }
    let overlapping = matches!(
        (spec_x.variable, spec_y.variable),
        (Axis::PhiXCommon, Axis::PhiX1 | Axis::PhiX2) | (Axis::PhiX1 | Axis::PhiX2, Axis::PhiXCommon)
    );
    if overlapping {
        return Err(Error::InvalidSpec("phi_x_common overlaps phi_x1/phi_x2".into()));
    }
    let base = base_point(spec_x);
    let xs = spec_x.grid();
    let ys = spec_y.grid();
    let points: Vec<(f64, f64)> = ys
        .iter()
        .flat_map(|&y| xs.iter().map(move |&x| (x, y)))
        .collect();
    points
        .into_par_iter()
        .map(|(x, y)| {
            let p = base.apply(spec_y.variable, y)?.apply(spec_x.variable, x)?;
            Ok(SweepRow {
                axis: vec![x, y],
                values: evaluate(p, &spec_x.measures)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalKind {
    EsdTemperature,
    OptimalRatio,
}

impl CriticalKind {
    pub fn name(self) -> &'static str {
        match self {
            CriticalKind::EsdTemperature => "esd_temperature",
            CriticalKind::OptimalRatio => "optimal_ratio",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub kind: CriticalKind,
    /// Temperature in K or a dimensionless ratio.
    pub location: f64,
    /// Discord at `location`, bits.
    pub value_at: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    /// The search ended against an edge of the requested bracket.
    pub boundary: bool,
}

fn thermal_concurrence(eff: &EffectiveParams, t: f64) -> Result<f64> {
    concurrence(&thermal_state(eff, ThermalSpec::new(t)?)?)
}

fn thermal_discord(eff: &EffectiveParams, t: f64) -> Result<f64> {
    let rho = thermal_state(eff, ThermalSpec::new(t)?)?;
    Ok(quantum_discord(&rho, Subsystem::First)?.discord)
}

/// Sudden-death temperature: bisection on `concurrence(T) > 1e-12` over `[0, t_max]`.
///
/// `location` is the upper end of the final bracket, where concurrence is zero.
pub fn esd_temperature(fixed: &EffectiveParams, t_max: f64, tol: f64) -> Result<CriticalPoint> {
    fixed.validate()?;
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidSpec(format!("t_max = {t_max} must be > 0")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidSpec(format!("tolerance {tol} must be > 0")));
    }
    if thermal_concurrence(fixed, 0.0)? <= ENTANGLED_THRESHOLD {
        return Err(Error::Bracket(
            "never entangled: concurrence is zero already at T = 0".into(),
        ));
    }
    if thermal_concurrence(fixed, t_max)? > ENTANGLED_THRESHOLD {
        return Err(Error::Bracket(format!(
            "still entangled at t_max = {t_max} K; raise t_max"
        )));
    }
    let mut failure = None;
    let (bracket, iterations) = bisect_predicate(
        |t| match thermal_concurrence(fixed, t) {
            Ok(c) => c > ENTANGLED_THRESHOLD,
            Err(e) => {
                failure.get_or_insert(e);
                false
            }
        },
        0.0,
        t_max,
        tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let location = bracket.1;
    Ok(CriticalPoint {
        kind: CriticalKind::EsdTemperature,
        location,
        value_at: thermal_discord(fixed, location)?,
        bracket,
        iterations,
        boundary: false,
    })
}

/// Coupling ratio `J/ε` (at `ε = 1 K`) that maximizes thermal discord at temperature `t`.
///
/// A coarse scan picks the best cell, then golden-section search narrows it to
/// [`RATIO_TOL`]. Maxima against an edge of `bracket` are flagged, not rejected.
pub fn optimal_ratio(t: f64, bracket: (f64, f64)) -> Result<CriticalPoint> {
    let (lo, hi) = bracket;
    if !(lo > 0.0) || !(hi > lo) || !hi.is_finite() {
        return Err(Error::InvalidSpec(format!(
            "ratio bracket must satisfy 0 < lo < hi, got ({lo}, {hi})"
        )));
    }
    ThermalSpec::new(t).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    let f = |r: f64| thermal_discord(&EffectiveParams::symmetric(RATIO_EPS, r * RATIO_EPS), t);

    let n = RATIO_SCAN_POINTS;
    let xs: Vec<f64> = (0..n)
        .map(|k| {
            if k == n - 1 {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (n - 1) as f64
            }
        })
        .collect();
    let values = xs
        .par_iter()
        .map(|&x| f(x))
        .collect::<Result<Vec<f64>>>()?;
    let best = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i)
        .unwrap();
    let a = xs[best.saturating_sub(1)];
    let b = xs[(best + 1).min(n - 1)];

    let mut failure = None;
    let g = golden_section_max(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            }
        },
        a,
        b,
        RATIO_TOL,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let boundary = g.bracket.0 - lo <= RATIO_TOL || hi - g.bracket.1 <= RATIO_TOL;
    Ok(CriticalPoint {
        kind: CriticalKind::OptimalRatio,
        location: g.x,
        value_at: g.value,
        bracket: g.bracket,
        iterations: n + g.iterations,
        boundary,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Figure {
    Fig2a,
    Fig2b,
    Fig3,
    Fig4,
    Fig5,
}

impl Figure {
    pub const ALL: [Figure; 5] = [
        Figure::Fig2a,
        Figure::Fig2b,
        Figure::Fig3,
        Figure::Fig4,
        Figure::Fig5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig2a => "fig2a",
            Figure::Fig2b => "fig2b",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
        }
    }
}

impl FromStr for Figure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown figure '{s}'")))
    }
}

/// One curve (or surface) of a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetSeries {
    pub label: String,
    pub x: SweepSpec,
    /// Second axis for surface plots.
    pub y: Option<SweepSpec>,
}

impl PresetSeries {
    pub fn run(&self) -> Result<Vec<SweepRow>> {
        match &self.y {
            None => sweep_1d(&self.x),
            Some(y) => sweep_2d(&self.x, y),
        }
    }
}

pub const FIG2B_TEMPERATURES: [f64; 5] = [0.1, 0.5, 1.0, 1.5, 2.0];
pub const FIG3_VOLTAGES: [f64; 3] = [7.5e-6, 50e-6, 100e-6];
pub const FIG4_TEMPERATURES: [f64; 3] = [0.0, 1e-3, 5e-3];
pub const FIG5_TEMPERATURES: [f64; 2] = [0.0, 0.01];
pub const FIG2_RATIO_RANGE: (f64, f64) = (0.1, 50.0);
pub const FIG3_TEMPERATURE_RANGE: (f64, f64) = (0.0, 0.05);
pub const FIG45_VOLTAGE: f64 = 20e-6;
pub const FIG45_FLUX_RANGE: (f64, f64) = (0.0, 2.0);

fn ratio_spec(t: f64) -> SweepSpec {
    SweepSpec {
        variable: Axis::RatioJOverEps,
        start: FIG2_RATIO_RANGE.0,
        stop: FIG2_RATIO_RANGE.1,
        steps: DEFAULT_STEPS_1D,
        fixed: Fixed::Effective(EffectiveParams::symmetric(RATIO_EPS, 0.0)),
        thermal: ThermalSpec { temperature_k: t },
        measures: vec![Measure::Discord],
    }
}

fn fig45_device() -> DeviceParams {
    DeviceParams::default().with_voltage(FIG45_VOLTAGE).with_phi_x(0.0)
}

/// Parameters of each figure preset as ready-to-run sweeps.
///
/// Device-mode figures use [`DeviceParams::default`] (L = 30 nH, C = 1 µF,
/// C_J0 = 10 µF, Φ_e = Φ₀/2) with `E_J0 = 0.02 K`.
pub fn figure_preset(which: Figure) -> Vec<PresetSeries> {
    match which {
        Figure::Fig2a => vec![PresetSeries {
            label: "T=0".into(),
            x: ratio_spec(0.0),
            y: None,
        }],
        Figure::Fig2b => FIG2B_TEMPERATURES
            .iter()
            .map(|&t| PresetSeries {
                label: format!("T={t}"),
                x: ratio_spec(t),
                y: None,
            })
            .collect(),
        Figure::Fig3 => FIG3_VOLTAGES
            .iter()
            .map(|&v| PresetSeries {
                label: format!("V_X={}uV", v * 1e6),
                x: SweepSpec {
                    variable: Axis::Temperature,
                    start: FIG3_TEMPERATURE_RANGE.0,
                    stop: FIG3_TEMPERATURE_RANGE.1,
                    steps: DEFAULT_STEPS_1D,
                    fixed: Fixed::Device(DeviceParams::default().with_voltage(v).with_phi_x(0.0)),
                    thermal: ThermalSpec::default(),
                    measures: vec![Measure::Discord, Measure::Eof, Measure::Concurrence],
                },
                y: None,
            })
            .collect(),
        Figure::Fig4 => FIG4_TEMPERATURES
            .iter()
            .map(|&t| PresetSeries {
                label: format!("T={t}"),
                x: SweepSpec {
                    variable: Axis::PhiXCommon,
                    start: FIG45_FLUX_RANGE.0,
                    stop: FIG45_FLUX_RANGE.1,
                    steps: DEFAULT_STEPS_1D,
                    fixed: Fixed::Device(fig45_device()),
                    thermal: ThermalSpec { temperature_k: t },
                    measures: vec![Measure::Discord, Measure::Eof],
                },
                y: None,
            })
            .collect(),
        Figure::Fig5 => FIG5_TEMPERATURES
            .iter()
            .map(|&t| {
                let axis = |variable| SweepSpec {
                    variable,
                    start: FIG45_FLUX_RANGE.0,
                    stop: FIG45_FLUX_RANGE.1,
                    steps: DEFAULT_STEPS_2D,
                    fixed: Fixed::Device(fig45_device()),
                    thermal: ThermalSpec { temperature_k: t },
                    measures: vec![Measure::Discord],
                };
                PresetSeries {
                    label: format!("T={t}"),
                    x: axis(Axis::PhiX1),
                    y: Some(axis(Axis::PhiX2)),
                }
            })
            .collect(),
    }
}
