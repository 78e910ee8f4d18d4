//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`SparsePoly<V>`] maps exponent vectors to nonzero coefficients. Zero
//! coefficients are never stored, so two polynomials are equal exactly when
//! their term maps are equal.
//!
//! Monomials are ordered graded-lexicographically: lower total degree first,
//! then by exponent vector with `x` most significant. The canonical printed
//! form walks this order backwards, so `x^3 + x*y^2 - x + y`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact coefficient type: a reduced fraction of unbounded integers.
pub type Rat = BigRational;

/// Builds the rational `n / d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Nearest `f64` to an exact rational (infinite if out of range).
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

const VAR_NAMES: [&str; 4] = ["x", "y", "z", "w"];

/// Exponent vector of a monomial in `V` variables.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial<const V: usize>(pub [u32; V]);

impl<const V: usize> Monomial<V> {
    pub const ONE: Self = Monomial([0; V]);

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn var(index: usize) -> Self {
        let mut e = [0; V];
        e[index] = 1;
        Monomial(e)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        Monomial(e)
    }
}

impl<const V: usize> Ord for Monomial<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl<const V: usize> PartialOrd for Monomial<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const V: usize> fmt::Display for Monomial<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(VAR_NAMES[i])?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial in `V` variables over [`Rat`].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SparsePoly<const V: usize> {
    terms: BTreeMap<Monomial<V>, Rat>,
}

/// Univariate polynomial in `x`.
pub type Poly1 = SparsePoly<1>;
/// Polynomial in the plane variables `x, y`.
pub type Poly2 = SparsePoly<2>;
/// Polynomial in `x, y` and the conjugate momenta `z, w`.
pub type Poly4 = SparsePoly<4>;

impl<const V: usize> SparsePoly<V> {
    pub fn zero() -> Self {
        SparsePoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(Monomial::ONE, c)
    }

    /// The variable with the given index (0 is `x`).
    pub fn var(index: usize) -> Self {
        Self::term(Monomial::var(index), Rat::one())
    }

    pub fn term(m: Monomial<V>, c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// Sums an arbitrary list of terms; repeated monomials are combined.
    pub fn from_terms<I: IntoIterator<Item = (Monomial<V>, Rat)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c * m` in place, keeping the no-stored-zeros invariant.
    pub fn add_term(&mut self, m: Monomial<V>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial<V>, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial<V>) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparsePoly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut dm = *m;
            dm.0[var] -= 1;
            out.add_term(dm, c * Rat::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Exact substitution of a rational point.
    pub fn evaluate(&self, point: &[Rat; V]) -> Rat {
        let mut sum = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[v].clone(), e as usize);
                }
            }
            sum += t;
        }
        sum
    }

    /// Floating-point evaluation in a fixed term order.
    pub fn eval_f64(&self, point: &[f64; V]) -> f64 {
        FloatPoly::from_poly(self).eval(point)
    }
}

impl Poly2 {
    pub fn x() -> Self {
        Self::var(0)
    }

    pub fn y() -> Self {
        Self::var(1)
    }

    /// `c * x^i * y^j`.
    pub fn monomial(i: u32, j: u32, c: Rat) -> Self {
        Self::term(Monomial([i, j]), c)
    }

    /// Embeds into `Q[x, y, z, w]` with no momentum dependence.
    pub fn to_poly4(&self) -> Poly4 {
        Poly4::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (Monomial([m.0[0], m.0[1], 0, 0]), c.clone())),
        )
    }
}

impl Poly1 {
    /// Reads a univariate polynomial as a polynomial in `x` on the plane.
    pub fn to_poly2_in_x(&self) -> Poly2 {
        Poly2::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (Monomial([m.0[0], 0]), c.clone())),
        )
    }
}

impl<const V: usize> fmt::Display for SparsePoly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if m.degree() == 0 {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", mag, m)?;
            }
        }
        Ok(())
    }
}

impl<const V: usize> fmt::Debug for SparsePoly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl<const V: usize> SparsePoly<V> {
    /// Canonical text form (same as `Display`).
    pub fn to_canonical_string(&self) -> String {
        alloc::format!("{}", self)
    }
}

impl<'a, const V: usize> Add<&'a SparsePoly<V>> for &'a SparsePoly<V> {
    type Output = SparsePoly<V>;
    fn add(self, rhs: &SparsePoly<V>) -> SparsePoly<V> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<const V: usize> Add for SparsePoly<V> {
    type Output = SparsePoly<V>;
    fn add(mut self, rhs: SparsePoly<V>) -> SparsePoly<V> {
        self += &rhs;
        self
    }
}

impl<const V: usize> AddAssign<&SparsePoly<V>> for SparsePoly<V> {
    fn add_assign(&mut self, rhs: &SparsePoly<V>) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl<const V: usize> SubAssign<&SparsePoly<V>> for SparsePoly<V> {
    fn sub_assign(&mut self, rhs: &SparsePoly<V>) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl<'a, const V: usize> Sub<&'a SparsePoly<V>> for &'a SparsePoly<V> {
    type Output = SparsePoly<V>;
    fn sub(self, rhs: &SparsePoly<V>) -> SparsePoly<V> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<const V: usize> Sub for SparsePoly<V> {
    type Output = SparsePoly<V>;
    fn sub(mut self, rhs: SparsePoly<V>) -> SparsePoly<V> {
        self -= &rhs;
        self
    }
}

impl<const V: usize> Neg for &SparsePoly<V> {
    type Output = SparsePoly<V>;
    fn neg(self) -> SparsePoly<V> {
        SparsePoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl<const V: usize> Neg for SparsePoly<V> {
    type Output = SparsePoly<V>;
    fn neg(self) -> SparsePoly<V> {
        -&self
    }
}

impl<'a, const V: usize> Mul<&'a SparsePoly<V>> for &'a SparsePoly<V> {
    type Output = SparsePoly<V>;
    fn mul(self, rhs: &SparsePoly<V>) -> SparsePoly<V> {
        let mut out = SparsePoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl<const V: usize> Mul for SparsePoly<V> {
    type Output = SparsePoly<V>;
    fn mul(self, rhs: SparsePoly<V>) -> SparsePoly<V> {
        &self * &rhs
    }
}

/// Floating-point copy of a polynomial for fast repeated evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatPoly<const V: usize> {
    terms: Vec<([u32; V], f64)>,
    max_exp: [u32; V],
}

impl<const V: usize> FloatPoly<V> {
    pub fn from_poly(p: &SparsePoly<V>) -> Self {
        let mut max_exp = [0u32; V];
        let terms = p
            .terms
            .iter()
            .map(|(m, c)| {
                for (mx, &e) in max_exp.iter_mut().zip(m.0.iter()) {
                    *mx = (*mx).max(e);
                }
                (m.0, rat_to_f64(c))
            })
            .collect();
        FloatPoly { terms, max_exp }
    }

    pub fn eval(&self, point: &[f64; V]) -> f64 {
        if self.terms.is_empty() {
            return 0.0;
        }
        // powers[v][e] = point[v]^e
        let mut powers: [Vec<f64>; V] = core::array::from_fn(|_| Vec::new());
        for v in 0..V {
            let n = self.max_exp[v] as usize + 1;
            let mut row = Vec::with_capacity(n);
            let mut acc = 1.0;
            for _ in 0..n {
                row.push(acc);
                acc *= point[v];
            }
            powers[v] = row;
        }
        let mut sum = 0.0;
        for (e, c) in &self.terms {
            let mut t = *c;
            for v in 0..V {
                t *= powers[v][e[v] as usize];
            }
            sum += t;
        }
        sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly2 {
        Poly2::x()
    }
    fn y() -> Poly2 {
        Poly2::y()
    }

    #[test]
    fn additive_inverse_is_zero() {
        let x2 = x().pow(2);
        assert!((&x2 - &x2).is_zero());
        assert_eq!(&x2 + &(-&x2), Poly2::zero());
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&x() + &y()) * &(&x() - &y());
        assert_eq!(p, &x().pow(2) - &y().pow(2));
    }

    #[test]
    fn power_rule() {
        let p = &x().pow(2) * &y();
        assert_eq!(p.partial(0), Poly2::monomial(1, 1, rat_int(2)));
        assert_eq!(p.partial(1), x().pow(2));
    }

    #[test]
    fn zero_has_no_degree() {
        assert_eq!(Poly2::zero().degree(), None);
        assert_eq!(Poly2::one().degree(), Some(0));
        assert_eq!((&x().pow(3) + &y()).degree(), Some(3));
    }

    #[test]
    fn evaluate_exact() {
        let circle = &(&x().pow(2) + &y().pow(2)) - &Poly2::one();
        assert_eq!(circle.evaluate(&[rat_int(1), rat_int(0)]), rat_int(0));
        assert_eq!(circle.evaluate(&[rat(1, 2), rat(1, 2)]), rat(-1, 2));
    }

    #[test]
    fn canonical_print() {
        assert_eq!(Poly2::zero().to_canonical_string(), "0");
        let u = &(&x().pow(2) + &y().pow(2)) - &Poly2::one();
        let p = &y() + &(&x() * &u);
        assert_eq!(p.to_canonical_string(), "x^3 + x*y^2 - x + y");
        let third = Poly2::monomial(3, 0, rat(1, 3));
        assert_eq!(third.to_canonical_string(), "1/3*x^3");
        let neg = &Poly2::constant(rat(-5, 2)) - &y();
        assert_eq!(neg.to_canonical_string(), "-y - 5/2");
    }

    #[test]
    fn float_eval_matches_exact() {
        let p = &(&x().pow(3) * &y()) - &Poly2::constant(rat(7, 4));
        let exact = rat_to_f64(&p.evaluate(&[rat(3, 2), rat(-1, 3)]));
        let float = p.eval_f64(&[1.5, -1.0 / 3.0]);
        assert!((exact - float).abs() < 1e-14);
    }

    #[test]
    fn grlex_order() {
        let a = Monomial([0u32, 2]);
        let b = Monomial([1u32, 1]);
        let c = Monomial([1u32, 0]);
        assert!(c < a);
        assert!(a < b);
    }
}
