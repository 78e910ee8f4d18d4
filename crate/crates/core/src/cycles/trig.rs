//! Trigonometric polynomials with exact coefficients.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Float, One, Signed, Zero};

use crate::poly::{rat, rat_to_f64, Rat};

/// `sum_k c_k cos(k θ) + s_k sin(k θ)`; pairs that are both zero are not
/// stored, and `s_0` is always zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TrigPoly {
    harmonics: BTreeMap<u32, (Rat, Rat)>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut t = Self::zero();
        t.add_harmonic(0, c, Rat::zero());
        t
    }

    pub fn cos() -> Self {
        let mut t = Self::zero();
        t.add_harmonic(1, Rat::one(), Rat::zero());
        t
    }

    pub fn sin() -> Self {
        let mut t = Self::zero();
        t.add_harmonic(1, Rat::zero(), Rat::one());
        t
    }

    pub fn is_zero(&self) -> bool {
        self.harmonics.is_empty()
    }

    /// `(cos, sin)` coefficients of harmonic `k`.
    pub fn harmonic(&self, k: u32) -> (Rat, Rat) {
        self.harmonics
            .get(&k)
            .cloned()
            .unwrap_or_else(|| (Rat::zero(), Rat::zero()))
    }

    pub fn harmonics(&self) -> impl Iterator<Item = (u32, &(Rat, Rat))> {
        self.harmonics.iter().map(|(k, v)| (*k, v))
    }

    /// Highest harmonic present.
    pub fn order(&self) -> Option<u32> {
        self.harmonics.keys().next_back().copied()
    }

    /// Adds `c cos(kθ) + s sin(kθ)`.
    pub fn add_harmonic(&mut self, k: u32, c: Rat, s: Rat) {
        let s = if k == 0 { Rat::zero() } else { s };
        let entry = self
            .harmonics
            .entry(k)
            .or_insert_with(|| (Rat::zero(), Rat::zero()));
        entry.0 += c;
        entry.1 += s;
        if entry.0.is_zero() && entry.1.is_zero() {
            self.harmonics.remove(&k);
        }
    }

    /// Adds `c cos(kθ) + s sin(kθ)` for a signed harmonic index.
    fn add_signed(&mut self, k: i64, c: Rat, s: Rat) {
        if k < 0 {
            self.add_harmonic((-k) as u32, c, -s);
        } else {
            self.add_harmonic(k as u32, c, s);
        }
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        let mut out = self.clone();
        for (k, (c, s)) in &other.harmonics {
            out.add_harmonic(*k, c.clone(), s.clone());
        }
        out
    }

    pub fn scale(&self, f: &Rat) -> TrigPoly {
        let mut out = TrigPoly::zero();
        for (k, (c, s)) in &self.harmonics {
            out.add_harmonic(*k, c * f, s * f);
        }
        out
    }

    /// Product, linearized with the product-to-sum identities.
    pub fn mul(&self, other: &TrigPoly) -> TrigPoly {
        let half = rat(1, 2);
        let mut out = TrigPoly::zero();
        for (&a, (ca, sa)) in &self.harmonics {
            for (&b, (cb, sb)) in &other.harmonics {
                let (a, b) = (a as i64, b as i64);
                // cos a cos b = (cos(a-b) + cos(a+b)) / 2
                let cc = ca * cb * &half;
                // sin a sin b = (cos(a-b) - cos(a+b)) / 2
                let ss = sa * sb * &half;
                // sin a cos b = (sin(a+b) + sin(a-b)) / 2
                let sc = sa * cb * &half;
                // cos a sin b = (sin(a+b) - sin(a-b)) / 2
                let cs = ca * sb * &half;
                out.add_signed(a - b, &cc + &ss, &sc - &cs);
                out.add_signed(a + b, &cc - &ss, &sc + &cs);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> TrigPoly {
        let mut acc = TrigPoly::constant(Rat::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.to_float().eval(theta)
    }

    pub fn to_float(&self) -> FloatTrig {
        FloatTrig {
            terms: self
                .harmonics
                .iter()
                .map(|(k, (c, s))| (*k as f64, rat_to_f64(c), rat_to_f64(s)))
                .collect(),
        }
    }

    /// Proves the sign is constant when the constant term dominates the sum
    /// of all other coefficient magnitudes. Returns that sign, or `None` if
    /// the test is inconclusive.
    pub fn dominant_sign(&self) -> Option<i8> {
        let (c0, _) = self.harmonic(0);
        if c0.is_zero() {
            return None;
        }
        let rest = self
            .harmonics
            .iter()
            .filter(|(k, _)| **k > 0)
            .fold(Rat::zero(), |acc, (_, (c, s))| acc + c.abs() + s.abs());
        (c0.abs() > rest).then_some(if c0.is_positive() { 1 } else { -1 })
    }
}

impl fmt::Display for TrigPoly {
    /// `1/2 - cos(t) + 3*sin(2*t)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, (c, s)) in &self.harmonics {
            for (coef, name) in [(c, "cos"), (s, "sin")] {
                if coef.is_zero() {
                    continue;
                }
                let mag = coef.abs();
                match (first, coef.is_negative()) {
                    (true, true) => f.write_str("-")?,
                    (false, true) => f.write_str(" - ")?,
                    (false, false) => f.write_str(" + ")?,
                    (true, false) => {}
                }
                first = false;
                let arg = if *k == 1 {
                    "t".into()
                } else {
                    alloc::format!("{k}*t")
                };
                match (*k, mag.is_one()) {
                    (0, _) => write!(f, "{mag}")?,
                    (_, true) => write!(f, "{name}({arg})")?,
                    (_, false) => write!(f, "{mag}*{name}({arg})")?,
                }
            }
        }
        Ok(())
    }
}

/// Floating-point copy of a [`TrigPoly`].
#[derive(Clone, Debug, PartialEq)]
pub struct FloatTrig {
    terms: Vec<(f64, f64, f64)>,
}

impl FloatTrig {
    pub fn eval(&self, theta: f64) -> f64 {
        self.terms
            .iter()
            .map(|(k, c, s)| {
                let a = k * theta;
                c * Float::cos(a) + s * Float::sin(a)
            })
            .sum()
    }
}
