//! Homomorphisms between finitely generated abelian groups, and their kernels,
//! images and cokernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::group::{group_from_presentation, FgGroup};
use crate::localize::{localize, LocalizationRing};
use crate::matrix::IntMatrix;
use crate::snf::smith_normal_form;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomError {
    #[error(
        "matrix is {rows}x{cols} but the target has {target_gens} generators and the source {source_gens}"
    )]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        target_gens: usize,
        source_gens: usize,
    },
    #[error("not a homomorphism: source generator {generator} of order {order} maps to an element whose order does not divide {order}")]
    IllDefined { generator: usize, order: BigInt },
    #[error("cannot compose: target of the first map is {0}, source of the second is {1}")]
    NotComposable(FgGroup, FgGroup),
}

/// A map `source → target` given on canonical generators: column `j` is the
/// image of source generator `j`.
///
/// `ring` records the localization the map lives over. Kernel, image and
/// cokernel are computed over ℤ and then localized, which is exact because
/// localizations of ℤ are flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: FgGroup,
    target: FgGroup,
    matrix: IntMatrix,
    ring: LocalizationRing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomInvariants {
    pub kernel: FgGroup,
    pub image: FgGroup,
    pub cokernel: FgGroup,
}

impl GroupHom {
    /// Checks dimensions and well-definedness.
    pub fn new(source: FgGroup, target: FgGroup, matrix: IntMatrix) -> Result<Self, HomError> {
        let h = Self::unchecked(source, target, matrix);
        h.check()?;
        Ok(h)
    }

    /// No validation; see [`hom_well_defined`] to inspect such a value.
    pub fn unchecked(source: FgGroup, target: FgGroup, matrix: IntMatrix) -> Self {
        GroupHom {
            source,
            target,
            matrix,
            ring: LocalizationRing::integers(),
        }
    }

    pub fn zero(source: FgGroup, target: FgGroup) -> Self {
        let matrix = IntMatrix::zeros(target.generator_count(), source.generator_count());
        Self::unchecked(source, target, matrix)
    }

    /// Multiplication by `c` on `g`.
    pub fn scalar(g: FgGroup, c: impl Into<BigInt>) -> Self {
        let matrix = IntMatrix::identity(g.generator_count()).scaled(&c.into());
        Self::unchecked(g.clone(), g, matrix)
    }

    pub fn source(&self) -> &FgGroup {
        &self.source
    }

    pub fn target(&self) -> &FgGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn ring(&self) -> &LocalizationRing {
        &self.ring
    }

    pub(crate) fn with_ring(mut self, ring: LocalizationRing) -> Self {
        self.ring = ring;
        self
    }

    pub fn neg(&self) -> Self {
        GroupHom {
            matrix: self.matrix.neg(),
            ..self.clone()
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GroupHom) -> Result<GroupHom, HomError> {
        if first.target != self.source {
            return Err(HomError::NotComposable(
                first.target.clone(),
                self.source.clone(),
            ));
        }
        Ok(GroupHom {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: &self.matrix * &first.matrix,
            ring: self.ring.join(&first.ring),
        })
    }

    /// Image of a coordinate vector in source generators, reduced into canonical
    /// target coordinates (torsion coordinates in `[0, order)`).
    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        let y = self.matrix.mul_vec(x);
        reduce_coordinates(&self.target, y)
    }

    fn check_dimensions(&self) -> Result<(), HomError> {
        let (rows, cols) = (self.matrix.rows(), self.matrix.cols());
        let (tg, sg) = (self.target.generator_count(), self.source.generator_count());
        if rows != tg || cols != sg {
            return Err(HomError::DimensionMismatch {
                rows,
                cols,
                target_gens: tg,
                source_gens: sg,
            });
        }
        Ok(())
    }

    fn check(&self) -> Result<(), HomError> {
        self.check_dimensions()?;
        for j in 0..self.source.generator_count() {
            let Some(d) = self.source.generator_order(j) else {
                continue;
            };
            for i in 0..self.target.generator_count() {
                let c = &self.matrix[(i, j)];
                let ok = match self.target.generator_order(i) {
                    None => c.is_zero(),
                    Some(e) => (d * c).is_multiple_of(e),
                };
                if !ok {
                    return Err(HomError::IllDefined {
                        generator: j,
                        order: d.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Reduces torsion coordinates of an element of `g` into `[0, order)`.
pub fn reduce_coordinates(g: &FgGroup, mut x: Vec<BigInt>) -> Vec<BigInt> {
    for (i, v) in x.iter_mut().enumerate() {
        if let Some(e) = g.generator_order(i) {
            *v = v.mod_floor(e);
        }
    }
    x
}

/// Whether `h` respects the orders of the source torsion generators.
/// A matrix of the wrong shape is an error, not `false`.
pub fn hom_well_defined(h: &GroupHom) -> Result<bool, HomError> {
    match h.check() {
        Ok(()) => Ok(true),
        Err(HomError::IllDefined { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Kernel, image and cokernel of a well-defined map.
///
/// With `F` the matrix on free covers and `R_G`, `R_H` the relation matrices:
/// the cokernel presents as `[F | R_H]`; the preimage lattice `L` of `im R_H`
/// is read off the null space of `[F | R_H]`; the image is `ℤ^n / L` and the
/// kernel is `L / im R_G`, written in a basis of `L`.
pub fn hom_invariants(h: &GroupHom) -> Result<HomInvariants, HomError> {
    h.check()?;
    let n_src = h.source.generator_count();
    let n_tgt = h.target.generator_count();
    let stacked = h.matrix.augment(&h.target.relation_matrix());
    let cokernel = group_from_presentation(&stacked, n_tgt);

    let s = smith_normal_form(&stacked);
    let null_cols: Vec<Vec<BigInt>> = (s.rank()..stacked.cols())
        .map(|j| s.v.column(j)[..n_src].to_vec())
        .collect();
    let spanning = IntMatrix::from_columns(n_src, &null_cols);

    let sp = smith_normal_form(&spanning);
    let lattice_rank = sp.rank();
    let image = FgGroup::from_factors(n_src - lattice_rank, &sp.invariant_factors);

    // Coordinates of the source relations in the basis u_inv[:, i] * d_i of L.
    let relations = h.source.relation_matrix();
    let mut coords = IntMatrix::zeros(lattice_rank, relations.cols());
    for j in 0..relations.cols() {
        let w = sp.u.mul_vec(&relations.column(j));
        for i in 0..lattice_rank {
            let (q, r) = w[i].div_rem(&sp.invariant_factors[i]);
            debug_assert!(r.is_zero(), "source relation outside the preimage lattice");
            coords[(i, j)] = q;
        }
        debug_assert!(w[lattice_rank..].iter().all(Zero::is_zero));
    }
    let kernel = group_from_presentation(&coords, lattice_rank);

    let ring = &h.ring;
    Ok(HomInvariants {
        kernel: localize(&kernel, ring),
        image: localize(&image, ring),
        cokernel: localize(&cokernel, ring),
    })
}

/// Convenience: `true` when the map is injective and surjective.
pub fn is_isomorphism(h: &GroupHom) -> Result<bool, HomError> {
    let inv = hom_invariants(h)?;
    Ok(inv.kernel.is_zero() && inv.cokernel.is_zero())
}

#[cfg(test)]
fn unit_vector(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::from(1);
    v
}


#[cfg(test)]
mod tests {
    use super::*;

    fn hom(src: FgGroup, tgt: FgGroup, m: &[&[i64]]) -> GroupHom {
        let matrix = if m.is_empty() {
            IntMatrix::zeros(tgt.generator_count(), src.generator_count())
        } else {
            IntMatrix::from_i64(m)
        };
        GroupHom::unchecked(src, tgt, matrix)
    }

    #[test]
    fn well_definedness_examples() {
        let z = FgGroup::free(1);
        let z12 = FgGroup::cyclic(12);
        let z2 = FgGroup::cyclic(2);
        let z3 = FgGroup::cyclic(3);
        assert_eq!(
            hom_well_defined(&hom(z.clone(), z12.clone(), &[&[1]])),
            Ok(true)
        );
        assert_eq!(hom_well_defined(&hom(z2, z.clone(), &[&[1]])), Ok(false));
        assert_eq!(hom_well_defined(&hom(z12.clone(), z3, &[&[1]])), Ok(true));
        assert!(matches!(
            hom_well_defined(&hom(z, z12, &[&[1, 0]])),
            Err(HomError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn multiplication_on_integers() {
        for s in [2i64, 3, 5, 12, -7] {
            let inv = hom_invariants(&GroupHom::scalar(FgGroup::free(1), s)).unwrap();
            assert_eq!(inv.kernel, FgGroup::zero());
            assert_eq!(inv.image, FgGroup::free(1));
            assert_eq!(inv.cokernel, FgGroup::cyclic(s));
        }
        let inv = hom_invariants(&GroupHom::scalar(FgGroup::free(1), 0)).unwrap();
        assert_eq!(inv.kernel, FgGroup::free(1));
        assert_eq!(inv.image, FgGroup::zero());
        assert_eq!(inv.cokernel, FgGroup::free(1));
    }

    #[test]
    fn surjection_onto_z12() {
        let inv = hom_invariants(&hom(FgGroup::free(1), FgGroup::cyclic(12), &[&[1]])).unwrap();
        assert_eq!(inv.kernel, FgGroup::free(1));
        assert_eq!(inv.image, FgGroup::cyclic(12));
        assert_eq!(inv.cokernel, FgGroup::zero());
    }

    #[test]
    fn reduction_z12_to_z3() {
        // Elements x of ℤ/12 with x ≡ 0 mod 3 are {0,3,6,9}: a cyclic group of order 4.
        let brute: Vec<i64> = (0..12).filter(|x| x % 3 == 0).collect();
        assert_eq!(brute, vec![0, 3, 6, 9]);
        let inv = hom_invariants(&hom(FgGroup::cyclic(12), FgGroup::cyclic(3), &[&[1]])).unwrap();
        assert_eq!(inv.kernel, FgGroup::cyclic(4));
        assert_eq!(inv.image, FgGroup::cyclic(3));
        assert_eq!(inv.cokernel, FgGroup::zero());
    }

    #[test]
    fn rejects_ill_defined() {
        let h = hom(FgGroup::cyclic(2), FgGroup::free(1), &[&[1]]);
        assert!(matches!(
            hom_invariants(&h),
            Err(HomError::IllDefined { .. })
        ));
    }

    #[test]
    fn empty_groups_are_total() {
        let inv = hom_invariants(&GroupHom::zero(FgGroup::zero(), FgGroup::zero())).unwrap();
        assert!(inv.kernel.is_zero() && inv.image.is_zero() && inv.cokernel.is_zero());
        let inv = hom_invariants(&GroupHom::zero(FgGroup::of(1, &[2]), FgGroup::zero())).unwrap();
        assert_eq!(inv.kernel, FgGroup::of(1, &[2]));
        let inv =
            hom_invariants(&GroupHom::zero(FgGroup::zero(), FgGroup::of(0, &[3, 3]))).unwrap();
        assert_eq!(inv.cokernel, FgGroup::of(0, &[3, 3]));
    }

    #[test]
    fn mixed_free_and_torsion() {
        // ℤ ⊕ ℤ/4 → ℤ/2 ⊕ ℤ/8, (a, b) ↦ (a, 2b + 4a).
        let h = hom(
            FgGroup::of(1, &[4]),
            FgGroup::of(0, &[2, 8]),
            &[&[1, 0], &[4, 2]],
        );
        assert_eq!(hom_well_defined(&h), Ok(true));
        let inv = hom_invariants(&h).unwrap();
        assert_eq!(inv.cokernel, FgGroup::cyclic(2));
        assert_eq!(inv.image, FgGroup::of(0, &[2, 4]));
        assert_eq!(inv.kernel, FgGroup::free(1));
    }

    #[test]
    fn composition_and_negation() {
        let a = hom(FgGroup::free(1), FgGroup::cyclic(12), &[&[1]]);
        let b = hom(FgGroup::cyclic(12), FgGroup::cyclic(3), &[&[1]]);
        let c = b.compose(&a).unwrap();
        assert_eq!(hom_well_defined(&c), Ok(true));
        assert_eq!(hom_invariants(&c).unwrap().kernel, FgGroup::free(1));
        assert!(a.compose(&b).is_err());
        assert_eq!(
            hom_invariants(&a.neg()).unwrap(),
            hom_invariants(&a).unwrap()
        );
    }

    #[test]
    fn apply_reduces() {
        let h = hom(FgGroup::free(1), FgGroup::cyclic(12), &[&[5]]);
        assert_eq!(h.apply(&[BigInt::from(3)]), vec![BigInt::from(3)]);
        assert_eq!(h.apply(&unit_vector(1, 0)), vec![BigInt::from(5)]);
    }
}
