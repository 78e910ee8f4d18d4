//! Hamiltonian lift of planar fields to R^4.
//!
//! A field `X = (P, Q)` lifts to `H = zP + wQ` with `(x, y)` as positions and
//! `(z, w)` as their momenta. With `G = zR + wS` for `Y = (R, S)` the
//! canonical bracket satisfies `{H, G} = -(z [X,Y]_1 + w [X,Y]_2)`, so fields
//! commute exactly when their lifts Poisson-commute.

use alloc::vec::Vec;

use crate::exactla::{self, ExactMatrix};
use crate::field::{lie_bracket, VectorField2};
use crate::poly::{rat, Poly4, Rat};

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;
const W: usize = 3;

/// `H = zP + wQ` together with its source field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedHamiltonian {
    pub hamiltonian: Poly4,
    pub source: VectorField2,
}

/// `z * a + w * b` on R^4.
fn pair_with_momenta(a: &VectorField2) -> Poly4 {
    &(&Poly4::var(Z) * &a.p.to_poly4()) + &(&Poly4::var(W) * &a.q.to_poly4())
}

pub fn lift(x: &VectorField2) -> LiftedHamiltonian {
    LiftedHamiltonian {
        hamiltonian: pair_with_momenta(x),
        source: x.clone(),
    }
}

/// `G = zR + wS` for `Y = (R, S)`.
pub fn moment(y: &VectorField2) -> Poly4 {
    pair_with_momenta(y)
}

/// `{F, G} = F_x G_z + F_y G_w - F_z G_x - F_w G_y`.
pub fn poisson(f: &Poly4, g: &Poly4) -> Poly4 {
    let mut out = &f.partial(X) * &g.partial(Z);
    out += &(&f.partial(Y) * &g.partial(W));
    out -= &(&f.partial(Z) * &g.partial(X));
    out -= &(&f.partial(W) * &g.partial(Y));
    out
}

/// `{H, G} + z [X,Y]_1 + w [X,Y]_2`; identically zero for every pair.
pub fn remark_defect(x: &VectorField2, y: &VectorField2) -> Poly4 {
    let pb = poisson(&lift(x).hamiltonian, &moment(y));
    &pb + &pair_with_momenta(&lie_bracket(x, y))
}

/// Evidence that `G` is a second integral of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrabilityCertificate {
    pub hamiltonian: Poly4,
    pub integral: Poly4,
    /// `{H, G}` vanishes identically.
    pub poisson_commute: bool,
    /// Largest rank of the 2x4 gradient matrix of `(H, G)` over the sample
    /// points; 2 means functionally independent somewhere.
    pub generic_gradient_rank: usize,
}

/// Sample points for the gradient-rank test, chosen off any line or circle
/// where the preset fields degenerate.
fn sample_points() -> Vec<[Rat; 4]> {
    let vals = [(1, 3), (-2, 5), (3, 7), (5, 4), (-7, 9), (2, 11)];
    (0..vals.len())
        .map(|i| {
            let v = |k: usize| {
                let (n, d) = vals[(i + k) % vals.len()];
                rat(n, d)
            };
            [v(0), v(1), v(2), v(3)]
        })
        .collect()
}

pub fn integrability_certificate(x: &VectorField2, y: &VectorField2) -> IntegrabilityCertificate {
    let h = lift(x).hamiltonian;
    let g = moment(y);
    let poisson_commute = poisson(&h, &g).is_zero();
    let gh: Vec<Poly4> = (0..4).map(|v| h.partial(v)).collect();
    let gg: Vec<Poly4> = (0..4).map(|v| g.partial(v)).collect();
    let generic_gradient_rank = sample_points()
        .iter()
        .map(|pt| {
            let rows = [&gh, &gg]
                .iter()
                .map(|grad| grad.iter().map(|d| d.evaluate(pt)).collect())
                .collect();
            exactla::rank(&ExactMatrix::from_rows(rows))
        })
        .max()
        .unwrap_or(0);
    IntegrabilityCertificate {
        hamiltonian: h,
        integral: g,
        poisson_commute,
        generic_gradient_rank,
    }
}

/// `true` when `H` is linear in the momenta, as every lift is.
pub fn is_momentum_linear(h: &Poly4) -> bool {
    h.terms().all(|(m, _)| m.0[Z] + m.0[W] == 1) || h.is_zero()
}
