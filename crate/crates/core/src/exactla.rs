//! Exact dense linear algebra over the rationals.
//!
//! Elimination is fraction-free: each row is first cleared of denominators,
//! then a Bareiss-style Gauss-Jordan sweep runs over integers, so every
//! intermediate entry is a minor of the scaled matrix and every division is
//! exact. Rationals only reappear in the final normalization.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::poly::Rat;

/// Row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            entries.extend(row);
        }
        ExactMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }
}

/// Reduced row-echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    /// Nonzero rows only; row `i` has a leading 1 in column `pivots[i]`.
    pub rows: Vec<Vec<Rat>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

fn bit_len(x: &BigInt) -> u64 {
    x.bits()
}

/// Multiplies a rational row by the lcm of its denominators.
fn integer_row(row: &[Rat]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    row.iter().map(|r| r.numer() * (&lcm / r.denom())).collect()
}

/// Fraction-free Gauss-Jordan elimination.
///
/// The pivot in each column is the nonzero candidate with the fewest bits.
/// Returns the integer rows (pivot rows first, in pivot order) and pivots.
fn bareiss_jordan(m: &ExactMatrix) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows).map(|r| integer_row(m.row(r))).collect();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..m.cols {
        if next == a.len() {
            break;
        }
        let choice = (next..a.len())
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| bit_len(&a[r][col]));
        let Some(pr) = choice else { continue };
        a.swap(next, pr);
        let pivot_row = core::mem::take(&mut a[next]);
        let p = pivot_row[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == next {
                continue;
            }
            let factor = row[col].clone();
            for j in 0..m.cols {
                // Every row is rescaled, including settled rows above, so
                // all entries stay minors of the scaled matrix.
                let v = &p * &row[j] - &factor * &pivot_row[j];
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact Bareiss division");
                row[j] = q;
            }
        }
        a[next] = pivot_row;
        prev = p;
        pivots.push(col);
        next += 1;
    }
    a.truncate(pivots.len());
    (a, pivots)
}

/// Unique reduced row-echelon form over the rationals.
pub fn rref(m: &ExactMatrix) -> Rref {
    let (rows, pivots) = bareiss_jordan(m);
    let rows = rows
        .into_iter()
        .zip(&pivots)
        .map(|(row, &pc)| {
            let lead = row[pc].clone();
            row.into_iter().map(|v| Rat::new(v, lead.clone())).collect()
        })
        .collect();
    Rref {
        rows,
        pivots,
        cols: m.cols,
    }
}

/// Exact rank over the rationals.
pub fn rank(m: &ExactMatrix) -> usize {
    bareiss_jordan(m).1.len()
}

/// A subspace of `Q^n` in normal form.
///
/// Every basis vector's *last* nonzero coordinate is 1 and that coordinate
/// is zero in every other basis vector; vectors are sorted by that
/// coordinate. This is reduced-echelon form read from the right, and it is
/// exactly the free-variable basis produced by [`nullspace`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceBasis {
    ambient: usize,
    vectors: Vec<Vec<Rat>>,
}

impl SubspaceBasis {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Rat>] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<Vec<Rat>> {
        self.vectors
    }

    /// Normal-form basis of the span of arbitrary vectors.
    pub fn span(ambient: usize, vectors: &[Vec<Rat>]) -> Self {
        if vectors.is_empty() {
            return SubspaceBasis {
                ambient,
                vectors: Vec::new(),
            };
        }
        let reversed: Vec<Vec<Rat>> = vectors
            .iter()
            .map(|v| {
                assert_eq!(v.len(), ambient);
                v.iter().rev().cloned().collect()
            })
            .collect();
        let r = rref(&ExactMatrix::from_rows(reversed));
        let mut out: Vec<Vec<Rat>> = r
            .rows
            .into_iter()
            .map(|row| row.into_iter().rev().collect())
            .collect();
        out.reverse();
        SubspaceBasis {
            ambient,
            vectors: out,
        }
    }

    /// Coordinate index of each vector's trailing 1.
    pub fn pivots(&self) -> Vec<usize> {
        self.vectors
            .iter()
            .map(|v| {
                v.iter()
                    .rposition(|c| !c.is_zero())
                    .expect("zero basis vector")
            })
            .collect()
    }

    /// Coordinates of `v` in this basis, or `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(v.len(), self.ambient);
        let coords: Vec<Rat> = self.pivots().iter().map(|&p| v[p].clone()).collect();
        let mut residual: Vec<Rat> = v.to_vec();
        for (c, b) in coords.iter().zip(&self.vectors) {
            if c.is_zero() {
                continue;
            }
            for (r, bi) in residual.iter_mut().zip(b) {
                if !bi.is_zero() {
                    *r -= c * bi;
                }
            }
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coordinates(v).is_some()
    }
}

/// Basis of `{v : M v = 0}` in [`SubspaceBasis`] normal form.
pub fn nullspace(m: &ExactMatrix) -> SubspaceBasis {
    let r = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let vectors = (0..m.cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rat::zero(); m.cols];
            v[f] = Rat::one();
            for (row, &pc) in r.rows.iter().zip(&r.pivots) {
                if !row[f].is_zero() {
                    v[pc] = -row[f].clone();
                }
            }
            v
        })
        .collect();
    SubspaceBasis {
        ambient: m.cols,
        vectors,
    }
}

/// `true` if every entry of the vector is zero.
pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Largest bit length among numerators and denominators; used in reports.
pub fn max_entry_bits(m: &ExactMatrix) -> u64 {
    m.entries
        .iter()
        .map(|r| bit_len(r.numer()).max(bit_len(r.denom())))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, rat_int};
    use proptest::prelude::*;

    fn m(rows: &[&[(i64, i64)]]) -> ExactMatrix {
        ExactMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(n, d)| rat(n, d)).collect())
                .collect(),
        )
    }

    fn ints(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&n| rat_int(n)).collect())
                .collect(),
        )
    }

    /// Plain rational Gauss-Jordan, kept independent of the Bareiss path.
    fn oracle_rref(mat: &ExactMatrix) -> (Vec<Vec<Rat>>, Vec<usize>) {
        let mut a: Vec<Vec<Rat>> = (0..mat.rows()).map(|r| mat.row(r).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..mat.cols() {
            let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(row, p);
            let lead = a[row][col].clone();
            for v in a[row].iter_mut() {
                *v = &*v / &lead;
            }
            for r in 0..a.len() {
                if r != row && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..mat.cols() {
                        let t = &f * &a[row][c];
                        a[r][c] -= t;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        a.truncate(row);
        (a, pivots)
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&ExactMatrix::identity(3)), 3);
        assert_eq!(rank(&ints(&[&[1, 2], &[2, 4]])), 1);
        let hilbert = m(&[
            &[(1, 1), (1, 2), (1, 3)],
            &[(1, 2), (1, 3), (1, 4)],
            &[(1, 3), (1, 4), (1, 5)],
        ]);
        assert_eq!(rank(&hilbert), 3);
        assert_eq!(rank(&ExactMatrix::zeros(3, 4)), 0);
    }

    #[test]
    fn nullspaces() {
        let ns = nullspace(&ints(&[&[1, 2], &[2, 4]]));
        assert_eq!(ns.vectors(), &[vec![rat_int(-2), rat_int(1)]]);
        assert_eq!(nullspace(&ExactMatrix::identity(2)).dim(), 0);
        let z = nullspace(&ExactMatrix::zeros(3, 4));
        assert_eq!(z.dim(), 4);
        for (i, v) in z.vectors().iter().enumerate() {
            for (j, c) in v.iter().enumerate() {
                assert_eq!(*c, if i == j { rat_int(1) } else { rat_int(0) });
            }
        }
    }

    #[test]
    fn span_normal_form_matches_nullspace_form() {
        let a = ints(&[&[1, 1, 0, 2], &[0, 0, 1, -1]]);
        let ns = nullspace(&a);
        let scrambled: Vec<Vec<Rat>> = vec![
            ns.vectors()[0]
                .iter()
                .zip(&ns.vectors()[1])
                .map(|(p, q)| p * rat_int(3) + q)
                .collect(),
            ns.vectors()[1].iter().map(|v| v * rat(-1, 7)).collect(),
        ];
        assert_eq!(SubspaceBasis::span(4, &scrambled), ns);
    }

    #[test]
    fn coordinates_roundtrip() {
        let ns = nullspace(&ints(&[&[1, 1, 1]]));
        let v = vec![rat_int(-5), rat_int(2), rat_int(3)];
        let c = ns.coordinates(&v).unwrap();
        assert_eq!(c, vec![rat_int(2), rat_int(3)]);
        assert!(ns
            .coordinates(&[rat_int(1), rat_int(0), rat_int(0)])
            .is_none());
    }

    fn small_matrix() -> impl Strategy<Value = ExactMatrix> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-4i64..5, 1i64..4), r * c).prop_map(move |vals| {
                let mut mat = ExactMatrix::zeros(r, c);
                for (k, (n, d)) in vals.into_iter().enumerate() {
                    // Bias towards zeros and repeated rows for rank deficiency.
                    let v = if n.abs() == 4 { 0 } else { n };
                    mat.set(k / c, k % c, rat(v, d));
                }
                if r > 2 {
                    for j in 0..c {
                        let v = mat.get(0, j) * rat_int(2) - mat.get(1, j);
                        mat.set(r - 1, j, v);
                    }
                }
                mat
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(mat in small_matrix()) {
            let ns = nullspace(&mat);
            prop_assert_eq!(rank(&mat) + ns.dim(), mat.cols());
            for v in ns.vectors() {
                prop_assert!(is_zero_vec(&mat.mul_vec(v)));
            }
        }

        #[test]
        fn rref_matches_rational_oracle(mat in small_matrix()) {
            let r = rref(&mat);
            let (rows, pivots) = oracle_rref(&mat);
            prop_assert_eq!(r.pivots, pivots);
            prop_assert_eq!(r.rows, rows);
        }

        #[test]
        fn nullspace_is_deterministic(mat in small_matrix()) {
            let a = nullspace(&mat);
            prop_assert_eq!(&a, &nullspace(&mat.clone()));
            prop_assert_eq!(&SubspaceBasis::span(mat.cols(), a.vectors()), &a);
        }
    }
}
