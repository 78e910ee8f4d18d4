//! Planar polynomial vector fields and the exact operations on them.

use core::fmt;

use thiserror::Error;

use crate::poly::{rat, rat_int, FloatPoly, Poly1, Poly2, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    /// `(x^2 + y^2)^(n/2)` is not a polynomial for odd `n`.
    #[error("odd exponent {0}: (x^2+y^2)^(n/2) is not polynomial")]
    OddExponent(u32),
}

/// The field `x' = p(x, y), y' = q(x, y)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct VectorField2 {
    pub p: Poly2,
    pub q: Poly2,
}

impl VectorField2 {
    pub fn new(p: Poly2, q: Poly2) -> Self {
        VectorField2 { p, q }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// `max(deg P, deg Q)`, `None` for the zero field.
    pub fn degree(&self) -> Option<u32> {
        match (self.p.degree(), self.q.degree()) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(0).max(b.unwrap_or(0))),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        VectorField2::new(self.p.scale(c), self.q.scale(c))
    }

    /// The time-reversed field `-X`.
    pub fn reversed(&self) -> Self {
        VectorField2::new(-&self.p, -&self.q)
    }

    pub fn add(&self, other: &VectorField2) -> Self {
        VectorField2::new(&self.p + &other.p, &self.q + &other.q)
    }

    pub fn sub(&self, other: &VectorField2) -> Self {
        VectorField2::new(&self.p - &other.p, &self.q - &other.q)
    }

    pub fn evaluate(&self, point: &[Rat; 2]) -> [Rat; 2] {
        [self.p.evaluate(point), self.q.evaluate(point)]
    }

    /// Float copy for numerical integration.
    pub fn to_float(&self) -> FloatField {
        FloatField {
            p: FloatPoly::from_poly(&self.p),
            q: FloatPoly::from_poly(&self.q),
        }
    }
}

impl fmt::Display for VectorField2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// Floating-point evaluator for a [`VectorField2`].
#[derive(Clone, Debug, PartialEq)]
pub struct FloatField {
    p: FloatPoly<2>,
    q: FloatPoly<2>,
}

impl FloatField {
    pub fn eval(&self, point: &[f64; 2]) -> [f64; 2] {
        [self.p.eval(point), self.q.eval(point)]
    }
}

/// Lie bracket `[X, Y] = DY·X - DX·Y`.
///
/// With `X = (P, Q)` and `Y = (R, S)` the components are
/// `P R_x + Q R_y - R P_x - S P_y` and `P S_x + Q S_y - R Q_x - S Q_y`.
pub fn lie_bracket(x: &VectorField2, y: &VectorField2) -> VectorField2 {
    let first = &directional_derivative(x, &y.p) - &directional_derivative(y, &x.p);
    let second = &directional_derivative(x, &y.q) - &directional_derivative(y, &x.q);
    VectorField2::new(first, second)
}

/// `P_x + Q_y`.
pub fn divergence(x: &VectorField2) -> Poly2 {
    &x.p.partial(0) + &x.q.partial(1)
}

/// `(f P, f Q)`.
pub fn scale_field(f: &Poly2, x: &VectorField2) -> VectorField2 {
    VectorField2::new(f * &x.p, f * &x.q)
}

/// Derivative of `g` along trajectories: `P g_x + Q g_y`.
pub fn directional_derivative(x: &VectorField2, g: &Poly2) -> Poly2 {
    &(&x.p * &g.partial(0)) + &(&x.q * &g.partial(1))
}

/// `det(X, Y) = P_X S - Q_X R`; vanishes exactly where the fields are parallel.
pub fn wedge(x: &VectorField2, y: &VectorField2) -> Poly2 {
    &(&x.p * &y.q) - &(&x.q * &y.p)
}

/// Liénard field `(y - F(x), -x)`.
pub fn make_lienard(f: &Poly1) -> VectorField2 {
    VectorField2::new(&Poly2::y() - &f.to_poly2_in_x(), -Poly2::x())
}

/// `(y (x^2+y^2)^(n/2), -x (x^2+y^2)^(n/2))`, homogeneous of degree `n + 1`.
pub fn make_homogeneous_center(n: u32) -> Result<VectorField2, FieldError> {
    if n % 2 == 1 {
        return Err(FieldError::OddExponent(n));
    }
    let r2 = presets::r_squared().pow(n / 2);
    Ok(scale_field(&r2, &presets::rotation()))
}

/// Fields that appear repeatedly in examples and checks.
pub mod presets {
    use super::*;

    pub fn r_squared() -> Poly2 {
        &Poly2::x().pow(2) + &Poly2::y().pow(2)
    }

    /// `x^2 + y^2 - 1`.
    pub fn unit_circle() -> Poly2 {
        &r_squared() - &Poly2::one()
    }

    /// Linear center `(y, -x)`.
    pub fn rotation() -> VectorField2 {
        VectorField2::new(Poly2::y(), -Poly2::x())
    }

    /// `(x, y)`.
    pub fn dilation() -> VectorField2 {
        VectorField2::new(Poly2::x(), Poly2::y())
    }

    /// `(k y + x u, -k x + y u)` with `u = x^2 + y^2 - 1`.
    fn spiral(k: i64, sign: i64) -> VectorField2 {
        let u = unit_circle().scale(&rat_int(sign));
        VectorField2::new(
            &Poly2::y().scale(&rat_int(k)) + &(&Poly2::x() * &u),
            &Poly2::x().scale(&rat_int(-k)) + &(&Poly2::y() * &u),
        )
    }

    /// `(y + x u, -x + y u)`: the unit circle is an unstable limit cycle.
    pub fn example1_x() -> VectorField2 {
        spiral(1, 1)
    }

    /// `(2y + x u, -2x + y u)`: commutes with [`example1_x`].
    pub fn example1_y() -> VectorField2 {
        spiral(2, 1)
    }

    /// `(y - x u, -x - y u)`: the unit circle becomes a stable cycle.
    pub fn example1_mirrored() -> VectorField2 {
        spiral(1, -1)
    }

    /// `F(x) = x^3/3 - x`.
    pub fn van_der_pol_f() -> Poly1 {
        &Poly1::term(crate::Monomial([3]), rat(1, 3)) - &Poly1::var(0)
    }

    /// Liénard form of van der Pol with unit parameter.
    pub fn van_der_pol() -> VectorField2 {
        make_lienard(&van_der_pol_f())
    }

    /// `(x, -y)`.
    pub fn saddle() -> VectorField2 {
        VectorField2::new(Poly2::x(), -Poly2::y())
    }

    /// `x^2 + y^2 + 1`.
    pub fn rescaling_factor() -> Poly2 {
        &r_squared() + &Poly2::one()
    }

    pub fn constant_field(a: i64, b: i64) -> VectorField2 {
        VectorField2::new(Poly2::constant(rat_int(a)), Poly2::constant(rat_int(b)))
    }
}

/// `true` when `[X, Y]` is identically zero.
pub fn commute(x: &VectorField2, y: &VectorField2) -> bool {
    lie_bracket(x, y).is_zero()
}
