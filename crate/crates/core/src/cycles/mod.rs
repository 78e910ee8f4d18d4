//! Limit cycles: polar reduction, Poincaré return maps on a ray, cycle scans,
//! characteristic multipliers and invariance of a cycle under a second field.
//!
//! Return maps are taken on a ray from a center point. A scan samples the
//! displacement `d(r) = P(r) - r` on a uniform grid, brackets sign changes
//! and bisects them. Refinement always runs in the time direction in which
//! the cycle attracts: for a repelling cycle the reversed field `-X` is used,
//! so integration errors contract instead of being amplified by the
//! multiplier.

mod polar;
mod trig;

pub use polar::{polar_reduce, polar_return_map, FloatPolar, PolarForm, Transversality};
pub use trig::{FloatTrig, TrigPoly};

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;
use thiserror::Error;

use crate::field::{divergence, VectorField2};
use crate::flow::{
    integrate, quadrature_along, run_to_event, Direction, EventKind, EventSpec, FlowError,
    IntegratorConfig,
};
use crate::linops::{centralizer_basis, CentralizerReport, LinopsError};
use crate::poly::Rat;

/// Grid size of a cycle scan.
pub const SCAN_POINTS: usize = 200;
/// Bisection stops once the bracket is this narrow.
pub const BISECTION_TOL: f64 = 1e-10;
/// `|d(r)|` below this counts as zero displacement.
pub const ZERO_DISPLACEMENT: f64 = 1e-9;
/// Minimum run of zero-displacement grid points reported as a center band.
pub const CENTER_BAND_MIN_RUN: usize = 3;
/// Largest accepted `|P(r*) - r*|` for a reported cycle.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Multipliers within this distance of 1 are non-hyperbolic.
pub const HYPERBOLICITY_TOL: f64 = 1e-6;
/// Points sampled along each reported cycle.
pub const CYCLE_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum CycleError {
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("orbit stops winding around the section center at t = {time}")]
    NonTransversal { time: f64 },
    #[error("all cycle samples are singular for one of the fields")]
    DegenerateSamples,
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

impl CycleError {
    pub fn name(&self) -> &'static str {
        match self {
            CycleError::Flow(f) => f.name(),
            CycleError::NonTransversal { .. } => "NonTransversal",
            CycleError::DegenerateSamples => "DegenerateSamples",
            CycleError::InvalidInput(_) => "InvalidInput",
        }
    }

    /// Errors that are numerical outcomes rather than bad input.
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            CycleError::InvalidInput(_) | CycleError::Flow(FlowError::InvalidInput(_))
        )
    }
}

/// A ray `center + r (cos angle, sin angle)`, `r > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Section {
    pub center: [f64; 2],
    pub angle: f64,
}

impl Default for Section {
    fn default() -> Self {
        Section::ray(0.0)
    }
}

impl Section {
    /// Ray from the origin.
    pub fn ray(angle: f64) -> Self {
        Section {
            center: [0.0, 0.0],
            angle,
        }
    }

    pub fn point(&self, r: f64) -> [f64; 2] {
        [
            self.center[0] + r * Float::cos(self.angle),
            self.center[1] + r * Float::sin(self.angle),
        ]
    }

    pub fn radius_of(&self, p: &[f64; 2]) -> f64 {
        Float::hypot(p[0] - self.center[0], p[1] - self.center[1])
    }

    /// `(p - c) × X(p)`, proportional to the angular velocity about the center.
    fn winding_rate(&self, v: &[f64; 2], p: &[f64; 2]) -> f64 {
        (p[0] - self.center[0]) * v[1] - (p[1] - self.center[1]) * v[0]
    }
}

/// First return to the section.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Return {
    pub radius: f64,
    pub time: f64,
    pub point: [f64; 2],
}

/// Integrates from `section.point(r0)` until the polar angle about the
/// center has advanced by a full turn in the direction of motion at the
/// start. Fails with `NonTransversal` if that direction ever reverses.
pub fn first_return(
    x: &VectorField2,
    r0: f64,
    section: &Section,
    cfg: &IntegratorConfig,
) -> Result<Return, CycleError> {
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(CycleError::InvalidInput("section radius must be positive"));
    }
    let ff = x.to_float();
    let start = section.point(r0);
    let w0 = section.winding_rate(&ff.eval(&start), &start);
    if w0 == 0.0 {
        return Err(CycleError::NonTransversal { time: 0.0 });
    }
    let sigma = w0.signum();
    let event = EventSpec {
        kind: EventKind::PolarAngle {
            center: section.center,
            target: sigma * 2.0 * PI,
        },
        direction: Direction::Either,
    };
    let hit = run_to_event(&ff, start, &event, cfg, |t, p| {
        if section.winding_rate(&ff.eval(p), p) * sigma <= 0.0 {
            Err(CycleError::NonTransversal { time: t })
        } else {
            Ok(())
        }
    })?;
    Ok(Return {
        radius: section.radius_of(&hit.point),
        time: hit.time,
        point: hit.point,
    })
}

/// Poincaré return map on the section.
pub fn return_map(
    x: &VectorField2,
    r0: f64,
    section: &Section,
    cfg: &IntegratorConfig,
) -> Result<f64, CycleError> {
    first_return(x, r0, section, cfg).map(|r| r.radius)
}

/// `P(r) - r`.
pub fn displacement(
    x: &VectorField2,
    r: f64,
    section: &Section,
    cfg: &IntegratorConfig,
) -> Result<f64, CycleError> {
    return_map(x, r, section, cfg).map(|p| p - r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
    NonHyperbolic,
}

impl Stability {
    pub fn from_multiplier(m: f64) -> Self {
        if m < 1.0 - HYPERBOLICITY_TOL {
            Stability::Stable
        } else if m > 1.0 + HYPERBOLICITY_TOL {
            Stability::Unstable
        } else {
            Stability::NonHyperbolic
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::NonHyperbolic => "non-hyperbolic",
        }
    }
}

/// A located limit cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleInfo {
    pub section: Section,
    /// Radius where the cycle crosses the section.
    pub radius: f64,
    pub period: f64,
    pub multiplier: f64,
    pub stability: Stability,
    /// Points along the cycle at equal time spacing.
    pub samples: Vec<[f64; 2]>,
    /// `|P(r*) - r*|` for the return map in the attracting time direction.
    pub residual: f64,
    /// Refinement integrated `-X` because the cycle repels in forward time.
    pub refined_in_reverse: bool,
}

/// The field whose flow attracts towards the cycle.
fn attracting_field(x: &VectorField2, reverse: bool) -> VectorField2 {
    if reverse {
        x.reversed()
    } else {
        x.clone()
    }
}

/// `exp(∮ div X dt)` over one period, evaluated along the attracting flow.
pub fn multiplier(
    x: &VectorField2,
    cycle: &CycleInfo,
    cfg: &IntegratorConfig,
) -> Result<f64, CycleError> {
    let field = attracting_field(x, cycle.refined_in_reverse);
    let start = cycle.section.point(cycle.radius);
    let integral = quadrature_along(&field, start, &divergence(&field), cycle.period, cfg)?;
    Ok(if cycle.refined_in_reverse {
        Float::exp(-integral)
    } else {
        Float::exp(integral)
    })
}

/// Max over the cycle samples of `|det(X, Y)| / (|X| |Y|)`, skipping points
/// where either field is below `1e-14` in norm. Zero means `Y` is tangent to
/// the cycle everywhere sampled.
pub fn invariance_defect(
    x: &VectorField2,
    y: &VectorField2,
    cycle: &CycleInfo,
) -> Result<f64, CycleError> {
    let fx = x.to_float();
    let fy = y.to_float();
    let mut worst: Option<f64> = None;
    for p in &cycle.samples {
        let [a, b] = fx.eval(p);
        let [c, d] = fy.eval(p);
        let (nx, ny) = (Float::hypot(a, b), Float::hypot(c, d));
        if nx < 1e-14 || ny < 1e-14 {
            continue;
        }
        let v = (a * d - b * c).abs() / (nx * ny);
        worst = Some(worst.map_or(v, |w: f64| w.max(v)));
    }
    worst.ok_or(CycleError::DegenerateSamples)
}

/// One grid point of a scan.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSample {
    pub radius: f64,
    pub displacement: Result<f64, CycleError>,
    /// `P⁻¹(r) - r` from the reversed field, computed only when the forward
    /// map fails for a reason other than escape. Its sign is opposite to the
    /// forward displacement since `P` is increasing.
    pub backward: Option<Result<f64, CycleError>>,
}

impl GridSample {
    /// Sign-bearing value: escapes count as outward motion, and a failed
    /// forward map falls back to the negated backward displacement.
    pub fn signed_value(&self) -> Option<f64> {
        match &self.displacement {
            Ok(v) => Some(*v),
            Err(CycleError::Flow(FlowError::Blowup { .. })) => Some(f64::INFINITY),
            Err(_) => match &self.backward {
                Some(Ok(v)) => Some(-v),
                _ => None,
            },
        }
    }
}

/// Why a bracketed sign change did not become a reported cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct RefinementFailure {
    pub bracket: (f64, f64),
    pub error: Option<CycleError>,
    /// Set when the refined point failed the residual certificate.
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CycleScan {
    pub section: Section,
    pub samples: Vec<GridSample>,
    /// Ordered by radius.
    pub cycles: Vec<CycleInfo>,
    /// Radius intervals where the displacement vanished on consecutive points.
    pub center_bands: Vec<(f64, f64)>,
    pub failures: Vec<RefinementFailure>,
}

/// Uniform grid of [`SCAN_POINTS`] radii including both ends.
pub fn scan_radii(r_min: f64, r_max: f64) -> Vec<f64> {
    let n = SCAN_POINTS;
    (0..n)
        .map(|i| {
            if i == n - 1 {
                r_max
            } else {
                r_min + (r_max - r_min) * (i as f64) / ((n - 1) as f64)
            }
        })
        .collect()
}

pub fn check_range(r_min: f64, r_max: f64) -> Result<(), CycleError> {
    if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
        return Err(CycleError::InvalidInput("need 0 < r_min < r_max"));
    }
    Ok(())
}

/// Evaluates one grid point.
pub fn grid_sample(
    x: &VectorField2,
    r: f64,
    section: &Section,
    cfg: &IntegratorConfig,
) -> GridSample {
    let forward = displacement(x, r, section, cfg);
    let backward = match forward {
        Ok(_) | Err(CycleError::Flow(FlowError::Blowup { .. })) => None,
        Err(_) => Some(displacement(&x.reversed(), r, section, cfg)),
    };
    GridSample {
        radius: r,
        displacement: forward,
        backward,
    }
}

/// Scans `[r_min, r_max]` on the section through the origin at angle 0.
pub fn find_cycles(
    x: &VectorField2,
    r_min: f64,
    r_max: f64,
    cfg: &IntegratorConfig,
) -> Result<CycleScan, CycleError> {
    find_cycles_on(x, r_min, r_max, &Section::default(), cfg)
}

pub fn find_cycles_on(
    x: &VectorField2,
    r_min: f64,
    r_max: f64,
    section: &Section,
    cfg: &IntegratorConfig,
) -> Result<CycleScan, CycleError> {
    check_range(r_min, r_max)?;
    cfg.validate()?;
    let samples = scan_radii(r_min, r_max)
        .into_iter()
        .map(|r| grid_sample(x, r, section, cfg))
        .collect();
    Ok(analyze_scan(x, section, samples, cfg))
}

/// Turns precomputed grid samples into a scan report: center bands,
/// bracketed sign changes, refined cycles. Deterministic in the samples.
pub fn analyze_scan(
    x: &VectorField2,
    section: &Section,
    samples: Vec<GridSample>,
    cfg: &IntegratorConfig,
) -> CycleScan {
    let n = samples.len();
    let values: Vec<Option<f64>> = samples.iter().map(GridSample::signed_value).collect();
    let near: Vec<bool> = values
        .iter()
        .map(|v| v.is_some_and(|d| d.abs() < ZERO_DISPLACEMENT))
        .collect();

    let mut in_band = alloc::vec![false; n];
    let mut center_bands = Vec::new();
    let mut i = 0;
    while i < n {
        if !near[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < n && near[i] {
            i += 1;
        }
        if i - start >= CENTER_BAND_MIN_RUN {
            in_band[start..i].iter_mut().for_each(|b| *b = true);
            center_bands.push((samples[start].radius, samples[i - 1].radius));
        }
    }

    // Sign changes between consecutive sign-bearing points, allowing short
    // runs of near-zero points in between.
    let mut brackets = Vec::new();
    let mut prev: Option<(usize, f64)> = None;
    for k in 0..n {
        match values[k] {
            Some(v) if !near[k] => {
                if let Some((j, pv)) = prev {
                    if pv.signum() != v.signum() {
                        brackets.push((j, k));
                    }
                }
                prev = Some((k, v));
            }
            Some(_) if !in_band[k] => {}
            _ => prev = None,
        }
    }

    let mut cycles = Vec::new();
    let mut failures = Vec::new();
    for (lo, hi) in brackets {
        let reverse = values[lo].is_some_and(|v| v < 0.0);
        let bracket = (samples[lo].radius, samples[hi].radius);
        match refine_cycle(x, bracket, reverse, section, cfg) {
            Ok(c) if c.residual <= RESIDUAL_TOL => cycles.push(c),
            Ok(c) => failures.push(RefinementFailure {
                bracket,
                error: None,
                residual: Some(c.residual),
            }),
            Err(e) => failures.push(RefinementFailure {
                bracket,
                error: Some(e),
                residual: None,
            }),
        }
    }

    CycleScan {
        section: *section,
        samples,
        cycles,
        center_bands,
        failures,
    }
}

/// Bisects a bracket on the attracting return map and builds the cycle data.
///
/// `reverse` selects `-X`; in either case the attracting displacement is
/// positive at the inner end and negative at the outer end.
pub fn refine_cycle(
    x: &VectorField2,
    bracket: (f64, f64),
    reverse: bool,
    section: &Section,
    cfg: &IntegratorConfig,
) -> Result<CycleInfo, CycleError> {
    let field = attracting_field(x, reverse);
    let (mut lo, mut hi) = bracket;
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if displacement(&field, mid, section, cfg)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let radius = 0.5 * (lo + hi);
    let ret = first_return(&field, radius, section, cfg)?;
    let period = ret.time;
    let traj = integrate(&field, section.point(radius), period, cfg)?;
    let samples = (0..CYCLE_SAMPLES)
        .map(|k| traj.state_at(period * k as f64 / CYCLE_SAMPLES as f64))
        .collect();
    let mut info = CycleInfo {
        section: *section,
        radius,
        period,
        multiplier: f64::NAN,
        stability: Stability::NonHyperbolic,
        samples,
        residual: (ret.radius - radius).abs(),
        refined_in_reverse: reverse,
    };
    info.multiplier = multiplier(x, &info, cfg)?;
    info.stability = Stability::from_multiplier(info.multiplier);
    Ok(info)
}

/// Centralizer of the perturbed field `X + εE`; a second, independent
/// commuting field exists within degree `n` exactly when the dimension is at
/// least 2.
pub fn commuting_perturbation_probe(
    x: &VectorField2,
    e: &VectorField2,
    eps: &Rat,
    n: u32,
) -> Result<CentralizerReport, LinopsError> {
    centralizer_basis(&x.add(&e.scale(eps)), n)
}
