//! Smith normal form over ℤ with unimodular transforms.
//!
//! Each step moves the nonzero entry of least absolute value in the trailing
//! block to the pivot position, clears its row and column by Euclidean
//! division, and repeats until the pivot divides every remaining entry. Both
//! transforms are tracked together with their inverses, which the kernel and
//! image computations in [`crate::hom`] need.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::matrix::IntMatrix;

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal with a divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    /// The nonzero diagonal entries of `D`, in order. Unit entries are kept;
    /// group construction drops them.
    pub invariant_factors: Vec<BigInt>,
}

impl SmithDecomposition {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

struct Reduction {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reduction {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// row[dst] += c·row[src] on D; U tracks it on the left, U⁻¹ on the right.
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.d.add_row_multiple(dst, src, c);
        self.u.add_row_multiple(dst, src, c);
        self.u_inv.add_col_multiple(src, dst, &-c);
    }

    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.d.add_col_multiple(dst, src, c);
        self.v.add_col_multiple(dst, src, c);
        self.v_inv.add_row_multiple(src, dst, &-c);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Position of the smallest nonzero |entry| in the block starting at (t, t).
    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let e = &self.d[(i, j)];
                if e.is_zero() {
                    continue;
                }
                let a = e.abs();
                if best.as_ref().is_none_or(|(_, b)| a < *b) {
                    best = Some(((i, j), a));
                }
            }
        }
        best.map(|(p, _)| p)
    }

    fn reduce_pivot(&mut self, t: usize) -> bool {
        let Some((i, j)) = self.min_entry(t) else {
            return false;
        };
        self.swap_rows(t, i);
        self.swap_cols(t, j);
        loop {
            let mut dirty = false;
            for i in t + 1..self.d.rows() {
                if self.d[(i, t)].is_zero() {
                    continue;
                }
                let q = self.d[(i, t)].div_floor(&self.d[(t, t)]);
                self.add_row(i, t, &-q);
                if !self.d[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..self.d.cols() {
                if self.d[(t, j)].is_zero() {
                    continue;
                }
                let q = self.d[(t, j)].div_floor(&self.d[(t, t)]);
                self.add_col(j, t, &-q);
                if !self.d[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // A remainder survived: it is smaller than the pivot, so restart from it.
                let (i, j) = self.min_entry_in_cross(t);
                self.swap_rows(t, i);
                self.swap_cols(t, j);
                continue;
            }
            // Row and column are clear; the pivot must also divide the rest of the block.
            let offender = (t + 1..self.d.rows()).find_map(|i| {
                (t + 1..self.d.cols())
                    .find(|&j| !self.d[(i, j)].is_multiple_of(&self.d[(t, t)]))
                    .map(|_| i)
            });
            match offender {
                Some(i) => self.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if self.d[(t, t)].is_negative() {
            self.negate_row(t);
        }
        true
    }

    /// Smallest nonzero entry restricted to the pivot's row and column.
    fn min_entry_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = ((t, t), self.d[(t, t)].abs());
        for i in t + 1..self.d.rows() {
            let a = self.d[(i, t)].abs();
            if !a.is_zero() && a < best.1 {
                best = ((i, t), a);
            }
        }
        for j in t + 1..self.d.cols() {
            let a = self.d[(t, j)].abs();
            if !a.is_zero() && a < best.1 {
                best = ((t, j), a);
            }
        }
        best.0
    }
}

/// Computes the Smith normal form of any rectangular integer matrix.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut r = Reduction {
        d: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    let mut rank = 0;
    while rank < m.min(n) && r.reduce_pivot(rank) {
        rank += 1;
    }
    let invariant_factors = (0..rank).map(|i| r.d[(i, i)].clone()).collect();
    SmithDecomposition {
        u: r.u,
        d: r.d,
        v: r.v,
        u_inv: r.u_inv,
        v_inv: r.v_inv,
        invariant_factors,
    }
}
