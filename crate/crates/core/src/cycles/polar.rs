//! Polar reduction `dr/dθ = r (xP + yQ) / (xQ - yP)` with exact
//! trigonometric coefficients.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::trig::{FloatTrig, TrigPoly};
use super::{CycleError, Section};
use crate::field::VectorField2;
use crate::flow::{integrate_system, IntegratorConfig};
use crate::poly::Poly2;

/// `dr/dθ = (sum_k A_k(θ) r^k) / (sum_k B_k(θ) r^k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarForm {
    /// `A_k`, indexed by the power of `r`.
    pub numerator: Vec<TrigPoly>,
    /// `B_k`, indexed by the power of `r`.
    pub denominator: Vec<TrigPoly>,
    /// Common power of `r` cancelled from both sides.
    pub cancelled_power: u32,
    pub source: VectorField2,
}

/// Sign behaviour of the denominator as `r -> 0+`.
#[derive(Clone, Debug, PartialEq)]
pub enum Transversality {
    /// The leading denominator coefficient provably keeps one sign.
    SignDefinite(i8),
    /// Angles in `[0, 2π)` where the leading coefficient changes sign.
    Zeros(Vec<f64>),
    /// `xQ - yP` vanishes identically: the field is radial.
    Degenerate,
}

/// Substitutes `x = r cos θ`, `y = r sin θ`; entry `d` holds the `r^d` part.
fn polar_coefficients(p: &Poly2) -> Vec<TrigPoly> {
    let deg = p.degree().map_or(0, |d| d as usize);
    let mut out = vec![TrigPoly::zero(); deg + 1];
    let cos = TrigPoly::cos();
    let sin = TrigPoly::sin();
    for (m, c) in p.terms() {
        let [i, j] = m.0;
        let t = cos.pow(i).mul(&sin.pow(j)).scale(c);
        out[(i + j) as usize] = out[(i + j) as usize].add(&t);
    }
    out
}

fn lowest_power(coeffs: &[TrigPoly]) -> Option<usize> {
    coeffs.iter().position(|t| !t.is_zero())
}

fn trim(mut v: Vec<TrigPoly>) -> Vec<TrigPoly> {
    while v.last().is_some_and(TrigPoly::is_zero) {
        v.pop();
    }
    v
}

pub fn polar_reduce(x: &VectorField2) -> PolarForm {
    let xx = Poly2::x();
    let yy = Poly2::y();
    let radial = &(&xx * &x.p) + &(&yy * &x.q);
    let angular = &(&xx * &x.q) - &(&yy * &x.p);

    // Numerator carries the extra factor r.
    let mut num = vec![TrigPoly::zero()];
    num.extend(polar_coefficients(&radial));
    let den = polar_coefficients(&angular);

    let shift = match (lowest_power(&num), lowest_power(&den)) {
        (Some(a), Some(b)) => a.min(b),
        (None, Some(b)) => b,
        (Some(a), None) => a,
        (None, None) => 0,
    };
    let numerator = trim(num.into_iter().skip(shift).collect());
    let denominator = trim(den.into_iter().skip(shift).collect());
    PolarForm {
        numerator,
        denominator,
        cancelled_power: shift as u32,
        source: x.clone(),
    }
}

/// Grid size for locating sign changes of the leading coefficient.
const ZERO_SCAN_POINTS: usize = 4096;

impl PolarForm {
    pub fn float(&self) -> FloatPolar {
        FloatPolar {
            numerator: self.numerator.iter().map(TrigPoly::to_float).collect(),
            denominator: self.denominator.iter().map(TrigPoly::to_float).collect(),
        }
    }

    /// Lowest-order nonzero denominator coefficient.
    pub fn leading_denominator(&self) -> Option<&TrigPoly> {
        self.denominator.iter().find(|t| !t.is_zero())
    }

    /// Symbolic constant-sign test on the leading denominator coefficient,
    /// falling back to a numerical sign-change search.
    pub fn transversality_near_origin(&self) -> Transversality {
        let Some(lead) = self.leading_denominator() else {
            return Transversality::Degenerate;
        };
        if let Some(s) = lead.dominant_sign() {
            return Transversality::SignDefinite(s);
        }
        let f = lead.to_float();
        let step = 2.0 * PI / ZERO_SCAN_POINTS as f64;
        // Irrational offset keeps grid points off rational multiples of π.
        let offset = core::f64::consts::FRAC_1_PI * step;
        let theta = |i: usize| offset + step * i as f64;
        let mut zeros = Vec::new();
        for i in 0..ZERO_SCAN_POINTS {
            let (a, b) = (theta(i), theta(i + 1));
            let (fa, fb) = (f.eval(a), f.eval(b));
            if fa.signum() == fb.signum() {
                continue;
            }
            let (mut lo, mut hi, flo) = (a, b, fa);
            while hi - lo > 1e-14 {
                let m = 0.5 * (lo + hi);
                if f.eval(m).signum() == flo.signum() {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            let mut z = 0.5 * (lo + hi) % (2.0 * PI);
            if z < 1e-9 || 2.0 * PI - z < 1e-9 {
                z = 0.0;
            }
            zeros.push(z);
        }
        if zeros.is_empty() {
            // No sign change seen; treat as definite with the sampled sign.
            return Transversality::SignDefinite(if f.eval(offset) > 0.0 { 1 } else { -1 });
        }
        zeros.sort_by(f64::total_cmp);
        Transversality::Zeros(zeros)
    }
}

/// Float evaluator of a [`PolarForm`].
#[derive(Clone, Debug)]
pub struct FloatPolar {
    numerator: Vec<FloatTrig>,
    denominator: Vec<FloatTrig>,
}

fn horner(coeffs: &[FloatTrig], r: f64, theta: f64) -> f64 {
    coeffs
        .iter()
        .rev()
        .fold(0.0, |acc, t| acc * r + t.eval(theta))
}

impl FloatPolar {
    pub fn numerator(&self, r: f64, theta: f64) -> f64 {
        horner(&self.numerator, r, theta)
    }

    pub fn denominator(&self, r: f64, theta: f64) -> f64 {
        horner(&self.denominator, r, theta)
    }

    pub fn rhs(&self, r: f64, theta: f64) -> f64 {
        self.numerator(r, theta) / self.denominator(r, theta)
    }
}

/// Return map computed by integrating `dr/dθ` over one full turn about the
/// origin, in the direction of motion at the start.
pub fn polar_return_map(
    form: &PolarForm,
    r0: f64,
    section: &Section,
    cfg: &IntegratorConfig,
) -> Result<f64, CycleError> {
    if section.center != [0.0, 0.0] {
        return Err(CycleError::InvalidInput(
            "polar form is centred at the origin",
        ));
    }
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(CycleError::InvalidInput("radius must be positive"));
    }
    let fp = form.float();
    let alpha = section.angle;
    let d0 = fp.denominator(r0, alpha);
    if d0 == 0.0 {
        return Err(CycleError::NonTransversal { time: 0.0 });
    }
    let sigma = d0.signum();
    let sys = |s: f64, y: &[f64; 1]| [sigma * fp.rhs(y[0], alpha + sigma * s)];
    let traj = integrate_system(&sys, [r0], 2.0 * PI, cfg)?;
    Ok(traj.final_state()[0])
}
