//! Adaptive Dormand-Prince 5(4) integration with dense output and event
//! location.
//!
//! Steps are controlled by the embedded fourth-order estimate with a
//! proportional-integral step-size rule; every accepted step carries the
//! standard quartic continuous extension, which event location and
//! trajectory queries use. All arithmetic is `f64` in a fixed order, so
//! identical inputs produce bit-identical outputs.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;
use thiserror::Error;

use crate::field::{FloatField, VectorField2};
use crate::poly::{FloatPoly, Poly2};

/// Max-norm beyond which a trajectory is declared to escape.
pub const BLOWUP_NORM: f64 = 1e12;
/// Width of the final event bracket.
pub const EVENT_TIME_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum FlowError {
    #[error("step limit of {steps} accepted steps exceeded at t = {time}")]
    StepLimitExceeded { steps: usize, time: f64 },
    #[error("state norm exceeded 1e12 at t = {time} (finite-time escape)")]
    Blowup { time: f64 },
    #[error("step size underflow at t = {time}")]
    StepSizeUnderflow { time: f64 },
    #[error("no event before t = {horizon}")]
    NoEvent { horizon: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

impl FlowError {
    /// Short stable name used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            FlowError::StepLimitExceeded { .. } => "StepLimitExceeded",
            FlowError::Blowup { .. } => "Blowup",
            FlowError::StepSizeUnderflow { .. } => "StepSizeUnderflow",
            FlowError::NoEvent { .. } => "NoEvent",
            FlowError::InvalidInput(_) => "InvalidInput",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    /// Zero selects the step automatically.
    pub initial_step: f64,
    pub max_step: f64,
    pub max_steps: usize,
    /// Event searches give up with `NoEvent` past this time.
    pub event_horizon: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rtol: 1e-10,
            atol: 1e-12,
            initial_step: 0.0,
            max_step: 1.0,
            max_steps: 10_000_000,
            event_horizon: 1e4,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        IntegratorConfig {
            rtol,
            atol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), FlowError> {
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return Err(FlowError::InvalidInput("tolerances must be positive"));
        }
        if !(self.max_step > 0.0) {
            return Err(FlowError::InvalidInput("max step must be positive"));
        }
        if !(self.initial_step >= 0.0) || !(self.event_horizon > 0.0) {
            return Err(FlowError::InvalidInput("initial step and horizon"));
        }
        Ok(())
    }
}

/// Autonomous or time-dependent right-hand side `y' = f(t, y)`.
pub trait OdeSystem<const D: usize> {
    fn rhs(&self, t: f64, y: &[f64; D]) -> [f64; D];

    /// Norm compared against [`BLOWUP_NORM`].
    fn escape_norm(&self, y: &[f64; D]) -> f64 {
        y.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl<F, const D: usize> OdeSystem<D> for F
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    fn rhs(&self, t: f64, y: &[f64; D]) -> [f64; D] {
        self(t, y)
    }
}

impl OdeSystem<2> for FloatField {
    fn rhs(&self, _t: f64, y: &[f64; 2]) -> [f64; 2] {
        self.eval(y)
    }
}

/// A planar field augmented with `q' = g(x, y)`.
pub struct QuadratureSystem {
    field: FloatField,
    integrand: FloatPoly<2>,
}

impl QuadratureSystem {
    pub fn new(x: &VectorField2, g: &Poly2) -> Self {
        QuadratureSystem {
            field: x.to_float(),
            integrand: FloatPoly::from_poly(g),
        }
    }
}

impl OdeSystem<3> for QuadratureSystem {
    fn rhs(&self, _t: f64, y: &[f64; 3]) -> [f64; 3] {
        let p = [y[0], y[1]];
        let [a, b] = self.field.eval(&p);
        [a, b, self.integrand.eval(&p)]
    }

    fn escape_norm(&self, y: &[f64; 3]) -> f64 {
        y[0].abs().max(y[1].abs())
    }
}

// Dormand-Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// Continuous extension.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

// Step-size controller.
const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// Dense output over one accepted step `[t0, t0 + h]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DenseSegment<const D: usize> {
    pub t0: f64,
    pub h: f64,
    coeffs: [[f64; D]; 5],
}

impl<const D: usize> DenseSegment<D> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn start(&self) -> [f64; D] {
        self.coeffs[0]
    }

    pub fn end(&self) -> [f64; D] {
        self.eval(self.t1())
    }

    pub fn eval(&self, t: f64) -> [f64; D] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let [c0, c1, c2, c3, c4] = &self.coeffs;
        core::array::from_fn(|i| c0[i] + s * (c1[i] + s1 * (c2[i] + s * (c3[i] + s1 * c4[i]))))
    }
}

fn axpy<const D: usize>(y: &[f64; D], h: f64, terms: &[(f64, &[f64; D])]) -> [f64; D] {
    core::array::from_fn(|i| {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        y[i] + h * acc
    })
}

/// Single-trajectory stepping state.
pub struct Stepper<'a, S: OdeSystem<D>, const D: usize> {
    sys: &'a S,
    cfg: IntegratorConfig,
    t: f64,
    y: [f64; D],
    f: [f64; D],
    h: f64,
    facold: f64,
    accepted: usize,
    last_rejected: bool,
}

impl<'a, S: OdeSystem<D>, const D: usize> Stepper<'a, S, D> {
    pub fn new(
        sys: &'a S,
        t0: f64,
        y0: [f64; D],
        cfg: &IntegratorConfig,
    ) -> Result<Self, FlowError> {
        cfg.validate()?;
        if y0.iter().any(|v| !v.is_finite()) {
            return Err(FlowError::InvalidInput("start must be finite"));
        }
        let f = sys.rhs(t0, &y0);
        let mut st = Stepper {
            sys,
            cfg: *cfg,
            t: t0,
            y: y0,
            f,
            h: 0.0,
            facold: 1e-4,
            accepted: 0,
            last_rejected: false,
        };
        st.h = if cfg.initial_step > 0.0 {
            cfg.initial_step.min(cfg.max_step)
        } else {
            st.initial_step()
        };
        Ok(st)
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> [f64; D] {
        self.y
    }

    pub fn accepted_steps(&self) -> usize {
        self.accepted
    }

    fn scaled_norm(&self, v: &[f64; D], y0: &[f64; D], y1: &[f64; D]) -> f64 {
        let mut sum = 0.0;
        for i in 0..D {
            let sc = self.cfg.atol + self.cfg.rtol * y0[i].abs().max(y1[i].abs());
            let r = v[i] / sc;
            sum += r * r;
        }
        Float::sqrt(sum / D as f64)
    }

    fn initial_step(&self) -> f64 {
        let y0 = &self.y;
        let f0 = &self.f;
        let d0 = self.scaled_norm(y0, y0, y0);
        let d1 = self.scaled_norm(f0, y0, y0);
        let mut h0 = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        h0 = h0.min(self.cfg.max_step);
        let y1 = axpy(y0, h0, &[(1.0, f0)]);
        let f1 = self.sys.rhs(self.t + h0, &y1);
        let diff: [f64; D] = core::array::from_fn(|i| f1[i] - f0[i]);
        let d2 = self.scaled_norm(&diff, y0, y0) / h0;
        let dm = d1.max(d2);
        let h1 = if dm <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            Float::powf(0.01 / dm, 0.2)
        };
        let h = (100.0 * h0).min(h1).min(self.cfg.max_step);
        if h.is_finite() && h > 0.0 {
            h
        } else {
            1e-6
        }
    }

    /// Takes one accepted step, never passing `t_end`.
    pub fn step(&mut self, t_end: f64) -> Result<DenseSegment<D>, FlowError> {
        loop {
            if self.accepted >= self.cfg.max_steps {
                return Err(FlowError::StepLimitExceeded {
                    steps: self.accepted,
                    time: self.t,
                });
            }
            let remaining = t_end - self.t;
            let mut h = self.h.min(self.cfg.max_step);
            if h >= remaining {
                h = remaining;
            }
            if h <= 16.0 * f64::EPSILON * self.t.abs().max(1.0) && h < remaining {
                // Superlinear escapes can exhaust the time resolution before
                // reaching the blowup norm.
                if self.sys.escape_norm(&self.y) > Float::sqrt(BLOWUP_NORM) {
                    return Err(FlowError::Blowup { time: self.t });
                }
                return Err(FlowError::StepSizeUnderflow { time: self.t });
            }

            let (t, y, k1) = (self.t, &self.y, &self.f);
            let sys = self.sys;
            let k2 = sys.rhs(t + C2 * h, &axpy(y, h, &[(A21, k1)]));
            let k3 = sys.rhs(t + C3 * h, &axpy(y, h, &[(A31, k1), (A32, &k2)]));
            let k4 = sys.rhs(
                t + C4 * h,
                &axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = sys.rhs(
                t + C5 * h,
                &axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = sys.rhs(
                t + h,
                &axpy(
                    y,
                    h,
                    &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y_new = axpy(
                y,
                h,
                &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let k7 = sys.rhs(t + h, &y_new);
            let err_vec = axpy(
                &[0.0; D],
                h,
                &[
                    (E1, k1),
                    (E3, &k3),
                    (E4, &k4),
                    (E5, &k5),
                    (E6, &k6),
                    (E7, &k7),
                ],
            );
            let err = self.scaled_norm(&err_vec, y, &y_new);

            if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
                if sys.escape_norm(y) > Float::sqrt(BLOWUP_NORM) {
                    return Err(FlowError::Blowup { time: t });
                }
                self.h = h * FAC_MIN;
                self.last_rejected = true;
                continue;
            }

            let fac11 = Float::powf(err, EXPO1);
            if err <= 1.0 {
                let fac = (fac11 / Float::powf(self.facold, BETA) / SAFETY)
                    .clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
                let mut h_next = h / fac;
                if self.last_rejected {
                    h_next = h_next.min(h);
                }
                self.facold = err.max(1e-4);
                self.last_rejected = false;

                let ydiff: [f64; D] = core::array::from_fn(|i| y_new[i] - y[i]);
                let bspl: [f64; D] = core::array::from_fn(|i| h * k1[i] - ydiff[i]);
                let c3: [f64; D] = core::array::from_fn(|i| ydiff[i] - h * k7[i] - bspl[i]);
                let c4 = axpy(
                    &[0.0; D],
                    h,
                    &[
                        (D1, k1),
                        (D3, &k3),
                        (D4, &k4),
                        (D5, &k5),
                        (D6, &k6),
                        (D7, &k7),
                    ],
                );
                let seg = DenseSegment {
                    t0: t,
                    h,
                    coeffs: [*y, ydiff, bspl, c3, c4],
                };

                self.t = if h == remaining { t_end } else { t + h };
                self.y = y_new;
                self.f = k7;
                self.h = h_next;
                self.accepted += 1;
                if sys.escape_norm(&y_new) > BLOWUP_NORM {
                    return Err(FlowError::Blowup { time: self.t });
                }
                return Ok(seg);
            }
            self.h = h / (1.0 / FAC_MIN).min(fac11 / SAFETY);
            self.last_rejected = true;
        }
    }
}

/// Accepted steps of one integration with their dense output.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<const D: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; D]>,
    pub segments: Vec<DenseSegment<D>>,
}

impl<const D: usize> Trajectory<D> {
    pub fn start_time(&self) -> f64 {
        self.times[0]
    }

    pub fn end_time(&self) -> f64 {
        *self.times.last().expect("empty trajectory")
    }

    pub fn final_state(&self) -> [f64; D] {
        *self.states.last().expect("empty trajectory")
    }

    /// Dense state at any `t` inside the span (clamped to the ends).
    pub fn state_at(&self, t: f64) -> [f64; D] {
        if self.segments.is_empty() || t <= self.start_time() {
            return self.states[0];
        }
        if t >= self.end_time() {
            return self.final_state();
        }
        let idx = self.segments.partition_point(|s| s.t1() < t);
        self.segments[idx.min(self.segments.len() - 1)].eval(t)
    }
}

/// Integrates a general system over `[0, duration]`.
pub fn integrate_system<S: OdeSystem<D>, const D: usize>(
    sys: &S,
    start: [f64; D],
    duration: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<D>, FlowError> {
    if !(duration > 0.0) || !duration.is_finite() {
        return Err(FlowError::InvalidInput("duration must be positive"));
    }
    let mut st = Stepper::new(sys, 0.0, start, cfg)?;
    let mut traj = Trajectory {
        times: alloc::vec![0.0],
        states: alloc::vec![start],
        segments: Vec::new(),
    };
    while st.time() < duration {
        let seg = st.step(duration)?;
        traj.segments.push(seg);
        traj.times.push(st.time());
        traj.states.push(st.state());
    }
    Ok(traj)
}

/// Flow of a planar field from `start` over `[0, duration]`.
pub fn integrate(
    x: &VectorField2,
    start: [f64; 2],
    duration: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<2>, FlowError> {
    integrate_system(&x.to_float(), start, duration, cfg)
}

/// `∫_0^T g(x(t), y(t)) dt` along the trajectory of `x`, integrated as an
/// extra state component under the same error control.
pub fn quadrature_along(
    x: &VectorField2,
    start: [f64; 2],
    g: &Poly2,
    duration: f64,
    cfg: &IntegratorConfig,
) -> Result<f64, FlowError> {
    let sys = QuadratureSystem::new(x, g);
    let traj = integrate_system(&sys, [start[0], start[1], 0.0], duration, cfg)?;
    Ok(traj.final_state()[2])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Rising,
    Falling,
    Either,
}

impl Direction {
    pub fn opposite(self) -> Self {
        match self {
            Direction::Rising => Direction::Falling,
            Direction::Falling => Direction::Rising,
            Direction::Either => Direction::Either,
        }
    }

    fn crossed(self, g0: f64, g1: f64) -> bool {
        let rising = g0 < 0.0 && g1 >= 0.0;
        let falling = g0 > 0.0 && g1 <= 0.0;
        match self {
            Direction::Rising => rising,
            Direction::Falling => falling,
            Direction::Either => rising || falling,
        }
    }
}

/// Event function catalog.
#[derive(Clone, Debug, PartialEq)]
pub enum EventKind {
    /// Polar angle about `center`, accumulated continuously from the start
    /// point, minus `target` (radians).
    PolarAngle { center: [f64; 2], target: f64 },
    /// Coordinate minus `value`.
    Crossing { axis: Axis, value: f64 },
    /// Value of a polynomial.
    PolynomialZero(Poly2),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EventSpec {
    pub kind: EventKind,
    pub direction: Direction,
}

impl EventSpec {
    pub fn angle(target: f64) -> Self {
        EventSpec {
            kind: EventKind::PolarAngle {
                center: [0.0, 0.0],
                target,
            },
            direction: Direction::Either,
        }
    }

    pub fn crossing(axis: Axis, value: f64, direction: Direction) -> Self {
        EventSpec {
            kind: EventKind::Crossing { axis, value },
            direction,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EventHit {
    pub time: f64,
    pub point: [f64; 2],
}

fn wrap_angle(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    } else if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// Substeps used to unwrap the polar angle inside one step.
const ANGLE_SUBSTEPS: usize = 4;

enum Tracker {
    Angle {
        center: [f64; 2],
        target: f64,
        /// Accumulated angle at the start of the current step.
        acc: f64,
    },
    Scalar(ScalarEvent),
}

enum ScalarEvent {
    Coord(Axis, f64),
    Poly(FloatPoly<2>),
}

impl Tracker {
    fn new(kind: &EventKind) -> Self {
        match kind {
            EventKind::PolarAngle { center, target } => Tracker::Angle {
                center: *center,
                target: *target,
                acc: 0.0,
            },
            EventKind::Crossing { axis, value } => {
                Tracker::Scalar(ScalarEvent::Coord(*axis, *value))
            }
            EventKind::PolynomialZero(p) => {
                Tracker::Scalar(ScalarEvent::Poly(FloatPoly::from_poly(p)))
            }
        }
    }

    fn initial_value(&self, y0: &[f64; 2]) -> f64 {
        match self {
            Tracker::Angle { target, acc, .. } => acc - target,
            Tracker::Scalar(s) => s.value(y0),
        }
    }

    /// Event function at time `t` inside `seg`.
    fn value(&self, seg: &DenseSegment<2>, t: f64) -> f64 {
        match self {
            Tracker::Angle {
                center,
                target,
                acc,
            } => {
                let polar = |p: [f64; 2]| Float::atan2(p[1] - center[1], p[0] - center[0]);
                let mut a_prev = polar(seg.start());
                let mut total = *acc;
                for k in 1..=ANGLE_SUBSTEPS {
                    let tk = seg.t0 + (t - seg.t0) * (k as f64) / (ANGLE_SUBSTEPS as f64);
                    let a = polar(seg.eval(tk));
                    total += wrap_angle(a - a_prev);
                    a_prev = a;
                }
                total - target
            }
            Tracker::Scalar(s) => s.value(&seg.eval(t)),
        }
    }

    fn advance(&mut self, seg: &DenseSegment<2>) {
        let g1 = self.value(seg, seg.t1());
        if let Tracker::Angle { target, acc, .. } = self {
            *acc = g1 + *target;
        }
    }
}

impl ScalarEvent {
    fn value(&self, y: &[f64; 2]) -> f64 {
        match self {
            ScalarEvent::Coord(Axis::X, v) => y[0] - v,
            ScalarEvent::Coord(Axis::Y, v) => y[1] - v,
            ScalarEvent::Poly(p) => p.eval(y),
        }
    }
}

/// Bisects the bracket `[seg.t0, t_hi]` on the dense output. Returns the
/// upper end, which lies on the post-crossing side.
fn locate(tracker: &Tracker, seg: &DenseSegment<2>, g0: f64) -> f64 {
    let pre_negative = g0 < 0.0;
    let (mut a, mut b) = (seg.t0, seg.t1());
    for _ in 0..200 {
        if b - a <= EVENT_TIME_TOL {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = tracker.value(seg, m);
        let still_pre = if pre_negative { gm < 0.0 } else { gm > 0.0 };
        if still_pre {
            a = m;
        } else {
            b = m;
        }
    }
    b
}

/// Drives a stepper until the event fires, checking `guard` after every
/// accepted step.
pub(crate) fn run_to_event<S, G>(
    sys: &S,
    start: [f64; 2],
    event: &EventSpec,
    cfg: &IntegratorConfig,
    mut guard: G,
) -> Result<EventHit, crate::cycles::CycleError>
where
    S: OdeSystem<2>,
    G: FnMut(f64, &[f64; 2]) -> Result<(), crate::cycles::CycleError>,
{
    let mut st = Stepper::new(sys, 0.0, start, cfg)?;
    let mut tracker = Tracker::new(&event.kind);
    let mut g_prev = tracker.initial_value(&start);
    let horizon = cfg.event_horizon;
    while st.time() < horizon {
        let seg = st.step(horizon)?;
        let g1 = tracker.value(&seg, seg.t1());
        if event.direction.crossed(g_prev, g1) {
            let time = locate(&tracker, &seg, g_prev);
            return Ok(EventHit {
                time,
                point: seg.eval(time),
            });
        }
        guard(seg.t1(), &st.state())?;
        tracker.advance(&seg);
        g_prev = g1;
    }
    Err(FlowError::NoEvent { horizon }.into())
}

/// Integrates `x` from `start` until the event function crosses zero in the
/// requested direction. A start exactly on the event surface does not count.
pub fn flow_to_event(
    x: &VectorField2,
    start: [f64; 2],
    event: &EventSpec,
    cfg: &IntegratorConfig,
) -> Result<EventHit, FlowError> {
    run_to_event(&x.to_float(), start, event, cfg, |_, _| Ok(())).map_err(|e| match e {
        crate::cycles::CycleError::Flow(f) => f,
        _ => unreachable!("no guard installed"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::presets::*;
    use crate::poly::rat_int;

    fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
        (a[0] - b[0]).abs().max((a[1] - b[1]).abs())
    }

    #[test]
    fn rotation_full_turn() {
        let cfg = IntegratorConfig::default();
        let tr = integrate(&rotation(), [1.0, 0.0], 2.0 * PI, &cfg).unwrap();
        assert!(dist(tr.final_state(), [1.0, 0.0]) < 1e-8);
        assert_eq!(tr.end_time(), 2.0 * PI);
    }

    #[test]
    fn dilation_doubles() {
        let cfg = IntegratorConfig::default();
        let tr = integrate(&dilation(), [1.0, 1.0], 2.0f64.ln(), &cfg).unwrap();
        assert!(dist(tr.final_state(), [2.0, 2.0]) < 1e-8);
    }

    #[test]
    fn quadratic_escape_is_blowup() {
        let f = VectorField2::new(Poly2::x().pow(2), Poly2::zero());
        let err = integrate(&f, [1.0, 0.0], 2.0, &IntegratorConfig::default()).unwrap_err();
        match err {
            FlowError::Blowup { time } => assert!((time - 1.0).abs() < 1e-6, "{time}"),
            other => panic!("expected blowup, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        let cfg = IntegratorConfig::default();
        assert!(matches!(
            integrate(&rotation(), [1.0, 0.0], -1.0, &cfg),
            Err(FlowError::InvalidInput(_))
        ));
        assert!(matches!(
            integrate(&rotation(), [f64::NAN, 0.0], 1.0, &cfg),
            Err(FlowError::InvalidInput(_))
        ));
        let bad = IntegratorConfig { rtol: 0.0, ..cfg };
        assert!(integrate(&rotation(), [1.0, 0.0], 1.0, &bad).is_err());
    }

    #[test]
    fn step_limit() {
        let cfg = IntegratorConfig {
            max_steps: 5,
            ..IntegratorConfig::default()
        };
        assert!(matches!(
            integrate(&rotation(), [1.0, 0.0], 100.0, &cfg),
            Err(FlowError::StepLimitExceeded { steps: 5, .. })
        ));
    }

    #[test]
    fn dense_output_hits_sample_states() {
        let cfg = IntegratorConfig::default();
        let tr = integrate(&van_der_pol(), [0.5, 0.5], 10.0, &cfg).unwrap();
        for (t, s) in tr.times.iter().zip(&tr.states) {
            assert!(dist(tr.state_at(*t), *s) <= cfg.atol);
        }
        for w in tr.times.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn rotation_angle_event() {
        let cfg = IntegratorConfig::default();
        let hit =
            flow_to_event(&rotation(), [1.0, 0.0], &EventSpec::angle(-2.0 * PI), &cfg).unwrap();
        assert!((hit.time - 2.0 * PI).abs() < 1e-9, "{}", hit.time);
    }

    #[test]
    fn example1_y_turn_takes_pi() {
        let cfg = IntegratorConfig::default();
        let hit = flow_to_event(
            &example1_y(),
            [1.0, 0.0],
            &EventSpec::angle(-2.0 * PI),
            &cfg,
        )
        .unwrap();
        assert!((hit.time - PI).abs() < 1e-8, "{}", hit.time);
    }

    #[test]
    fn dilation_never_crosses_axis() {
        let cfg = IntegratorConfig {
            event_horizon: 10.0,
            ..IntegratorConfig::default()
        };
        let ev = EventSpec::crossing(Axis::Y, 0.0, Direction::Rising);
        assert!(matches!(
            flow_to_event(&dilation(), [1.0, 0.0], &ev, &cfg),
            Err(FlowError::NoEvent { .. })
        ));
    }

    #[test]
    fn polynomial_event() {
        // Rotation from (1, 0) reaches x = y on the circle at angle -3pi/4.
        let cfg = IntegratorConfig::default();
        let g = &Poly2::x() - &Poly2::y();
        let ev = EventSpec {
            kind: EventKind::PolynomialZero(g),
            direction: Direction::Either,
        };
        let hit = flow_to_event(&rotation(), [1.0, 0.0], &ev, &cfg).unwrap();
        assert!((hit.time - 0.75 * PI).abs() < 1e-9);
    }

    #[test]
    fn quadrature_cases() {
        let cfg = IntegratorConfig::default();
        let q =
            quadrature_along(&rotation(), [1.0, 0.0], &Poly2::x().pow(2), 2.0 * PI, &cfg).unwrap();
        assert!((q - PI).abs() < 1e-8);
        let z = quadrature_along(&example1_x(), [0.3, 0.1], &Poly2::zero(), 1.0, &cfg).unwrap();
        assert_eq!(z, 0.0);
        // The unit circle repels with multiplier e^{4π}; forward integration
        // along it needs tolerances well below the default.
        let tight = IntegratorConfig::with_tolerances(1e-13, 1e-15);
        let div = crate::field::divergence(&example1_x());
        let q = quadrature_along(&example1_x(), [1.0, 0.0], &div, 2.0 * PI, &tight).unwrap();
        assert!((q - 4.0 * PI).abs() < 1e-6, "{q}");
        let two = Poly2::constant(rat_int(2));
        let q = quadrature_along(&dilation(), [1.0, 0.0], &two, 0.5, &cfg).unwrap();
        assert!((q - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wrap_is_symmetric() {
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap_angle(-3.0 * PI / 2.0) - PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap_angle(PI), PI);
    }
}
