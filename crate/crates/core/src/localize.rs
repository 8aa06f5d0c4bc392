//! Localization at a subring of ℚ obtained by inverting a set of primes.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::group::FgGroup;
use crate::hom::GroupHom;
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocalizationError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
}

/// `ℤ[1/p : p ∈ primes]`, or all of ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LocalizationRing {
    Primes(BTreeSet<u64>),
    All,
}

impl Default for LocalizationRing {
    fn default() -> Self {
        LocalizationRing::integers()
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

impl LocalizationRing {
    pub fn integers() -> Self {
        LocalizationRing::Primes(BTreeSet::new())
    }

    pub fn rationals() -> Self {
        LocalizationRing::All
    }

    pub fn inverting(primes: impl IntoIterator<Item = u64>) -> Result<Self, LocalizationError> {
        let set: BTreeSet<u64> = primes.into_iter().collect();
        if let Some(&p) = set.iter().find(|&&p| !is_prime(p)) {
            return Err(LocalizationError::NotPrime(p));
        }
        Ok(LocalizationRing::Primes(set))
    }

    pub fn is_integers(&self) -> bool {
        matches!(self, LocalizationRing::Primes(s) if s.is_empty())
    }

    /// The ring obtained by inverting the primes of both.
    pub fn join(&self, other: &LocalizationRing) -> LocalizationRing {
        match (self, other) {
            (LocalizationRing::Primes(a), LocalizationRing::Primes(b)) => {
                LocalizationRing::Primes(a.union(b).copied().collect())
            }
            _ => LocalizationRing::All,
        }
    }

    /// `n` with every inverted prime divided out; `1` when every prime is inverted.
    pub fn strip(&self, n: &BigInt) -> BigInt {
        match self {
            LocalizationRing::All => BigInt::one(),
            LocalizationRing::Primes(ps) => {
                let mut n = n.clone();
                for &p in ps {
                    let p = BigInt::from(p);
                    while !n.is_zero() && n.is_multiple_of(&p) {
                        n /= &p;
                    }
                }
                n
            }
        }
    }
}

impl fmt::Display for LocalizationRing {
    /// `ℤ`, `ℤ[1/2,1/3]` or `ℚ`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalizationRing::All => write!(f, "ℚ"),
            LocalizationRing::Primes(ps) if ps.is_empty() => write!(f, "ℤ"),
            LocalizationRing::Primes(ps) => {
                let inv: Vec<String> = ps.iter().map(|p| format!("1/{p}")).collect();
                write!(f, "ℤ[{}]", inv.join(","))
            }
        }
    }
}

/// `g ⊗ ℙ`, described by its rank and the surviving torsion.
pub fn localize(g: &FgGroup, ring: &LocalizationRing) -> FgGroup {
    let torsion: Vec<BigInt> = g
        .torsion()
        .iter()
        .map(|t| ring.strip(t))
        .filter(|t| !t.is_one())
        .collect();
    // Stripping the same primes from every factor keeps the divisibility chain.
    FgGroup::from_parts_unchecked(g.rank(), torsion)
}

/// The induced map `h ⊗ ℙ` on the localized groups.
///
/// Generators whose order becomes a unit disappear; the remaining entries are
/// kept, with target torsion coordinates reduced modulo the new orders.
pub fn localize_hom(h: &GroupHom, ring: &LocalizationRing) -> GroupHom {
    let ring = h.ring().join(ring);
    let keep = |g: &FgGroup| -> Vec<usize> {
        (0..g.generator_count())
            .filter(|&i| g.generator_order(i).is_none_or(|o| !ring.strip(o).is_one()))
            .collect()
    };
    let (src, tgt) = (h.source(), h.target());
    let cols = keep(src);
    let rows = keep(tgt);
    let new_src = localize(src, &ring);
    let new_tgt = localize(tgt, &ring);
    let mut m: IntMatrix = h.matrix().select(&rows, &cols);
    for (a, &i) in rows.iter().enumerate() {
        if let Some(o) = tgt.generator_order(i) {
            let o = ring.strip(o);
            for b in 0..cols.len() {
                m[(a, b)] = m[(a, b)].mod_floor(&o);
            }
        }
    }
    GroupHom::unchecked(new_src, new_tgt, m).with_ring(ring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::direct_sum;
    use crate::hom::{hom_invariants, hom_well_defined};
    use proptest::prelude::*;

    fn p(ps: &[u64]) -> LocalizationRing {
        LocalizationRing::inverting(ps.iter().copied()).unwrap()
    }

    #[test]
    fn group_examples() {
        assert_eq!(
            localize(&FgGroup::of(1, &[2]), &LocalizationRing::All),
            FgGroup::free(1)
        );
        // 60 = 2²·15
        assert_eq!(
            localize(&FgGroup::cyclic(60), &p(&[2])),
            FgGroup::cyclic(15)
        );
        let g = FgGroup::of(2, &[6, 12]);
        assert_eq!(localize(&g, &LocalizationRing::integers()), g);
        assert_eq!(localize(&g, &p(&[2])), FgGroup::of(2, &[3, 3]));
        assert_eq!(localize(&g, &p(&[2, 3])), FgGroup::free(2));
    }

    #[test]
    fn rejects_non_primes() {
        assert_eq!(
            LocalizationRing::inverting([4]),
            Err(LocalizationError::NotPrime(4))
        );
        assert_eq!(
            LocalizationRing::inverting([1]),
            Err(LocalizationError::NotPrime(1))
        );
    }

    #[test]
    fn display() {
        assert_eq!(LocalizationRing::integers().to_string(), "ℤ");
        assert_eq!(LocalizationRing::All.to_string(), "ℚ");
        assert_eq!(p(&[3, 2]).to_string(), "ℤ[1/2,1/3]");
    }

    #[test]
    fn times_six_becomes_iso_rationally() {
        let h = localize_hom(
            &GroupHom::scalar(FgGroup::free(1), 6),
            &LocalizationRing::All,
        );
        let inv = hom_invariants(&h).unwrap();
        assert_eq!(inv.kernel, FgGroup::zero());
        assert_eq!(inv.cokernel, FgGroup::zero());
        assert_eq!(inv.image, FgGroup::free(1));
    }

    #[test]
    fn z12_to_z3_inverting_three() {
        let h = GroupHom::new(
            FgGroup::cyclic(12),
            FgGroup::cyclic(3),
            IntMatrix::from_i64(&[&[1]]),
        )
        .unwrap();
        let l = localize_hom(&h, &p(&[3]));
        assert_eq!(l.source(), &FgGroup::cyclic(4));
        assert_eq!(l.target(), &FgGroup::zero());
        assert_eq!(hom_well_defined(&l), Ok(true));
        let inv = hom_invariants(&l).unwrap();
        assert_eq!(inv.kernel, FgGroup::cyclic(4));
        assert_eq!(inv.cokernel, FgGroup::zero());
    }

    #[test]
    fn zero_map_stays_zero() {
        for ring in [LocalizationRing::All, p(&[2]), LocalizationRing::integers()] {
            let h = GroupHom::zero(FgGroup::of(1, &[4]), FgGroup::of(0, &[6]));
            assert!(localize_hom(&h, &ring).matrix().is_zero());
        }
    }

    fn arb_group() -> impl Strategy<Value = FgGroup> {
        (0usize..3, proptest::collection::vec(0i64..50, 0..4)).prop_map(|(r, f)| {
            FgGroup::from_factors(r, &f.into_iter().map(BigInt::from).collect::<Vec<_>>())
        })
    }

    fn arb_ring() -> impl Strategy<Value = LocalizationRing> {
        prop_oneof![
            Just(LocalizationRing::All),
            proptest::sample::subsequence(vec![2u64, 3, 5, 7], 0..4)
                .prop_map(|ps| LocalizationRing::inverting(ps).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn localization_commutes_with_sums(g in arb_group(), h in arb_group(), ring in arb_ring()) {
            prop_assert_eq!(
                localize(&direct_sum(&g, &h), &ring),
                direct_sum(&localize(&g, &ring), &localize(&h, &ring))
            );
        }

        #[test]
        fn localized_hom_invariants_are_localized_invariants(
            src in arb_group(), tgt in arb_group(), ring in arb_ring(),
            raw in proptest::collection::vec(-30i64..30, 64),
        ) {
            let h = crate::hom::tests_support::well_defined_from(&src, &tgt, &raw);
            let direct = hom_invariants(&h).unwrap();
            let l = localize_hom(&h, &ring);
            prop_assert_eq!(hom_well_defined(&l), Ok(true));
            let via = hom_invariants(&l).unwrap();
            prop_assert_eq!(via.kernel, localize(&direct.kernel, &ring));
            prop_assert_eq!(via.image, localize(&direct.image, &ring));
            prop_assert_eq!(via.cokernel, localize(&direct.cokernel, &ring));
        }
    }
}
