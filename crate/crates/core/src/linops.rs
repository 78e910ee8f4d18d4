//! Linear operators on degree-truncated polynomial spaces built from a field.
//!
//! `ad_X : Y -> [X, Y]` acts on fields of degree at most `N`; its kernel is the
//! truncated centralizer `C_N(X)`. `L_X : g -> X·∇g` acts on scalars of degree
//! at most `N`; its kernel holds the polynomial first integrals and its
//! corank is the codimension of its range.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use thiserror::Error;

use crate::exactla::{self, ExactMatrix, SubspaceBasis};
use crate::field::{directional_derivative, lie_bracket, scale_field, VectorField2};
use crate::poly::{Monomial, Poly2, Rat};

/// Default degree bound.
pub const DEFAULT_DEGREE: u32 = 3;
/// Largest accepted degree bound.
pub const MAX_DEGREE: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinopsError {
    #[error("the zero field has no meaningful centralizer")]
    ZeroField,
    #[error("degree bound {n} outside {min}..={max}")]
    DegreeBound { n: u32, min: u32, max: u32 },
}

fn check_degree(n: u32, min: u32) -> Result<(), LinopsError> {
    if n < min || n > MAX_DEGREE {
        return Err(LinopsError::DegreeBound {
            n,
            min,
            max: MAX_DEGREE,
        });
    }
    Ok(())
}

/// Monomials `x^i y^j` with `i + j <= n`, ascending graded-lex.
pub fn monomials_up_to(n: u32) -> Vec<Monomial<2>> {
    let mut out = Vec::with_capacity(((n + 1) * (n + 2) / 2) as usize);
    for d in 0..=n {
        for i in 0..=d {
            out.push(Monomial([i, d - i]));
        }
    }
    out
}

fn monomial_index(m: &Monomial<2>) -> usize {
    let d = m.degree() as usize;
    d * (d + 1) / 2 + m.0[0] as usize
}

/// Coordinates on scalars of degree at most `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarSpaceIndex {
    degree: u32,
    monomials: Vec<Monomial<2>>,
}

impl ScalarSpaceIndex {
    pub fn new(degree: u32) -> Self {
        ScalarSpaceIndex {
            degree,
            monomials: monomials_up_to(degree),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Monomial<2>] {
        &self.monomials
    }

    /// Panics if `p` has degree above the bound.
    pub fn coords(&self, p: &Poly2) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim()];
        for (m, c) in p.terms() {
            assert!(m.degree() <= self.degree, "polynomial exceeds degree bound");
            v[monomial_index(m)] = c.clone();
        }
        v
    }

    pub fn poly(&self, coords: &[Rat]) -> Poly2 {
        Poly2::from_terms(
            self.monomials
                .iter()
                .zip(coords)
                .map(|(m, c)| (*m, c.clone())),
        )
    }
}

/// Coordinates on fields of degree at most `N`: the monomial fields
/// `(x^i y^j, 0)` in graded-lex order, then `(0, x^i y^j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpaceIndex {
    scalars: ScalarSpaceIndex,
}

impl FieldSpaceIndex {
    pub fn new(degree: u32) -> Self {
        FieldSpaceIndex {
            scalars: ScalarSpaceIndex::new(degree),
        }
    }

    pub fn degree(&self) -> u32 {
        self.scalars.degree
    }

    /// `(N + 1)(N + 2)`.
    pub fn dim(&self) -> usize {
        2 * self.scalars.dim()
    }

    pub fn basis_field(&self, k: usize) -> VectorField2 {
        let half = self.scalars.dim();
        let m = self.scalars.monomials[k % half];
        let e = Poly2::term(m, Rat::from_integer(1.into()));
        if k < half {
            VectorField2::new(e, Poly2::zero())
        } else {
            VectorField2::new(Poly2::zero(), e)
        }
    }

    pub fn coords(&self, f: &VectorField2) -> Vec<Rat> {
        let mut v = self.scalars.coords(&f.p);
        v.extend(self.scalars.coords(&f.q));
        v
    }

    pub fn field(&self, coords: &[Rat]) -> VectorField2 {
        let half = self.scalars.dim();
        VectorField2::new(
            self.scalars.poly(&coords[..half]),
            self.scalars.poly(&coords[half..]),
        )
    }
}

/// Degree of the image space for an operator built from `x` acting on degree `n`.
fn image_degree(x: &VectorField2, n: u32) -> u32 {
    n + x.degree().unwrap_or(0).max(1) - 1
}

/// Matrix of `Y -> [X, Y]` from fields of degree `<= n` to fields of degree
/// `<= n + deg X - 1`.
pub fn ad_matrix(x: &VectorField2, n: u32) -> ExactMatrix {
    let domain = FieldSpaceIndex::new(n);
    let codomain = FieldSpaceIndex::new(image_degree(x, n));
    let mut m = ExactMatrix::zeros(codomain.dim(), domain.dim());
    for k in 0..domain.dim() {
        let image = lie_bracket(x, &domain.basis_field(k));
        for (r, c) in codomain.coords(&image).into_iter().enumerate() {
            if !c.is_zero() {
                m.set(r, k, c);
            }
        }
    }
    m
}

fn kernel_fields(x: &VectorField2, n: u32) -> Vec<VectorField2> {
    let index = FieldSpaceIndex::new(n);
    exactla::nullspace(&ad_matrix(x, n))
        .into_vectors()
        .iter()
        .map(|v| index.field(v))
        .collect()
}

/// Truncated centralizer `C_N(X)` with its bracket table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerReport {
    pub degree: u32,
    pub dimension: usize,
    pub basis: Vec<VectorField2>,
    /// Degree of the centralizer whose basis indexes the last axis of
    /// `structure_constants`: `degree` when closed, `2 * degree - 1` otherwise.
    pub structure_degree: u32,
    pub structure_basis: Vec<VectorField2>,
    /// `[B_a, B_b] = sum_e c[a][b][e] * structure_basis[e]`.
    pub structure_constants: Vec<Vec<Vec<Rat>>>,
    /// Every bracket of two basis fields stayed within degree `degree`.
    pub closed_within_degree: bool,
    pub abelian: bool,
}

/// Basis, bracket table and flags of `C_N(X)`.
pub fn centralizer_basis(x: &VectorField2, n: u32) -> Result<CentralizerReport, LinopsError> {
    if x.is_zero() {
        return Err(LinopsError::ZeroField);
    }
    check_degree(n, 1)?;
    let basis = kernel_fields(x, n);
    let dim = basis.len();

    let mut brackets = vec![vec![VectorField2::zero(); dim]; dim];
    let mut closed = true;
    let mut abelian = true;
    for a in 0..dim {
        for b in (a + 1)..dim {
            let br = lie_bracket(&basis[a], &basis[b]);
            if !br.is_zero() {
                abelian = false;
            }
            if br.degree().is_some_and(|d| d > n) {
                closed = false;
            }
            brackets[b][a] = br.scale(&Rat::from_integer((-1).into()));
            brackets[a][b] = br;
        }
    }

    // Brackets commute with X by the Jacobi identity, so they lie in C_N
    // when closed and always in C_{2N-1}.
    let structure_degree = if closed { n } else { 2 * n - 1 };
    let structure_basis = if closed {
        basis.clone()
    } else {
        kernel_fields(x, structure_degree)
    };
    let index = FieldSpaceIndex::new(structure_degree);
    let span = SubspaceBasis::span(
        index.dim(),
        &structure_basis
            .iter()
            .map(|f| index.coords(f))
            .collect::<Vec<_>>(),
    );
    let structure_constants = brackets
        .iter()
        .map(|row| {
            row.iter()
                .map(|br| {
                    span.coordinates(&index.coords(br))
                        .expect("bracket of centralizer elements left the centralizer")
                })
                .collect()
        })
        .collect();

    Ok(CentralizerReport {
        degree: n,
        dimension: dim,
        basis,
        structure_degree,
        structure_basis,
        structure_constants,
        closed_within_degree: closed,
        abelian,
    })
}

impl CentralizerReport {
    /// Rebuilds `[B_a, B_b]` from the structure constants.
    pub fn reconstruct_bracket(&self, a: usize, b: usize) -> VectorField2 {
        let mut acc = VectorField2::zero();
        for (c, e) in self.structure_constants[a][b]
            .iter()
            .zip(&self.structure_basis)
        {
            if !c.is_zero() {
                acc = acc.add(&e.scale(c));
            }
        }
        acc
    }

    /// Whether `f` (of degree at most `degree`) lies in the span of the basis.
    pub fn contains(&self, f: &VectorField2) -> bool {
        if f.degree().is_some_and(|d| d > self.degree) {
            return false;
        }
        let index = FieldSpaceIndex::new(self.degree);
        let span = SubspaceBasis::span(
            index.dim(),
            &self
                .basis
                .iter()
                .map(|b| index.coords(b))
                .collect::<Vec<_>>(),
        );
        span.contains(&index.coords(f))
    }
}

/// All pairwise brackets of the basis vanish.
pub fn is_abelian(report: &CentralizerReport) -> bool {
    let b = &report.basis;
    (0..b.len()).all(|i| ((i + 1)..b.len()).all(|j| lie_bracket(&b[i], &b[j]).is_zero()))
}

/// Side-by-side comparison of `C_N(X)` and `C_N(fX)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerComparison {
    pub original: CentralizerReport,
    pub rescaled: CentralizerReport,
    pub dimensions_equal: bool,
    pub abelian_flags_equal: bool,
}

impl CentralizerComparison {
    /// Both necessary conditions for an isomorphism hold. `false` proves the
    /// truncated algebras differ; `true` proves nothing.
    pub fn necessary_conditions_hold(&self) -> bool {
        self.dimensions_equal && self.abelian_flags_equal
    }
}

pub fn compare_centralizers(
    x: &VectorField2,
    f: &Poly2,
    n: u32,
) -> Result<CentralizerComparison, LinopsError> {
    if f.is_zero() {
        return Err(LinopsError::ZeroField);
    }
    let original = centralizer_basis(x, n)?;
    let rescaled = centralizer_basis(&scale_field(f, x), n)?;
    Ok(CentralizerComparison {
        dimensions_equal: original.dimension == rescaled.dimension,
        abelian_flags_equal: original.abelian == rescaled.abelian,
        original,
        rescaled,
    })
}

/// Rank data of `g -> X·∇g` on scalars of degree `<= N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorReport {
    pub degree: u32,
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub rank: usize,
    pub corank: usize,
    pub kernel: Vec<Poly2>,
}

pub fn derivative_matrix(x: &VectorField2, n: u32) -> ExactMatrix {
    let domain = ScalarSpaceIndex::new(n);
    let codomain = ScalarSpaceIndex::new(image_degree(x, n));
    let mut m = ExactMatrix::zeros(codomain.dim(), domain.dim());
    for (k, mono) in domain.monomials().iter().enumerate() {
        let g = Poly2::term(*mono, Rat::from_integer(1.into()));
        for (r, c) in codomain
            .coords(&directional_derivative(x, &g))
            .into_iter()
            .enumerate()
        {
            if !c.is_zero() {
                m.set(r, k, c);
            }
        }
    }
    m
}

pub fn derivative_operator_report(x: &VectorField2, n: u32) -> Result<OperatorReport, LinopsError> {
    check_degree(n, 0)?;
    let m = derivative_matrix(x, n);
    let rank = exactla::rank(&m);
    let domain = ScalarSpaceIndex::new(n);
    let kernel = exactla::nullspace(&m)
        .into_vectors()
        .iter()
        .map(|v| domain.poly(v))
        .collect();
    Ok(OperatorReport {
        degree: n,
        domain_dim: m.cols(),
        codomain_dim: m.rows(),
        rank,
        corank: m.rows() - rank,
        kernel,
    })
}

/// Nonconstant polynomial first integrals of degree `<= N` (a basis modulo
/// constants). Empty when none exist.
pub fn first_integrals(x: &VectorField2, n: u32) -> Result<Vec<Poly2>, LinopsError> {
    check_degree(n, 1)?;
    let report = derivative_operator_report(x, n)?;
    // In normal form the constant 1 owns coordinate 0, so no other kernel
    // vector carries a constant term.
    Ok(report
        .kernel
        .into_iter()
        .filter(|g| g.degree() != Some(0))
        .collect())
}

/// `(N, dim C_N(X))` for `N = 1..=n_max`.
pub fn dimension_profile(x: &VectorField2, n_max: u32) -> Result<Vec<(u32, usize)>, LinopsError> {
    if x.is_zero() {
        return Err(LinopsError::ZeroField);
    }
    check_degree(n_max, 1)?;
    Ok((1..=n_max)
        .map(|n| {
            let m = ad_matrix(x, n);
            (n, m.cols() - exactla::rank(&m))
        })
        .collect())
}
