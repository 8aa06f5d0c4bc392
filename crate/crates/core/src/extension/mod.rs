//! Abelian extensions `0 → A → G → C → 0`: which groups `G` can occur.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::finite::{abelian_groups_of_order, FiniteGroup};
use crate::group::{direct_sum, group_from_presentation, FgGroup};
use crate::matrix::IntMatrix;

mod local;

pub use local::{lr_support, lr_tableau_exists, Partition};

/// Largest number of cocycle tuples [`enumerate_extensions`] visits directly;
/// bigger problems go through [`classify_by_primes`].
pub const DEFAULT_COCYCLE_LIMIT: u64 = 1 << 14;

/// Default order bound for [`brute_force_extensions`].
pub const DEFAULT_BRUTE_FORCE_BOUND: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtensionError {
    #[error("{count} cocycle representatives exceed the enumeration limit {limit}")]
    TooManyCocycles { count: BigInt, limit: u64 },
    #[error("brute force needs finite groups, got sub {sub} and quot {quot}")]
    Infinite { sub: FgGroup, quot: FgGroup },
    #[error("order {order} exceeds the brute-force bound {bound}")]
    BoundExceeded { order: BigInt, bound: u64 },
}

/// Sub `A` and quotient `C` of an unknown middle group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ExtensionProblem {
    pub sub: FgGroup,
    pub quot: FgGroup,
}

impl ExtensionProblem {
    pub fn new(sub: FgGroup, quot: FgGroup) -> Self {
        ExtensionProblem { sub, quot }
    }
}

/// Every isomorphism class of middle group, canonically sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionAnswer {
    pub candidates: Vec<FgGroup>,
    pub split_member: FgGroup,
    pub forced_unique: bool,
}

impl ExtensionAnswer {
    fn from_set(set: BTreeSet<FgGroup>, split_member: FgGroup) -> Self {
        debug_assert!(set.contains(&split_member));
        ExtensionAnswer {
            forced_unique: set.len() == 1,
            candidates: set.into_iter().collect(),
            split_member,
        }
    }

    pub fn unique(&self) -> Option<&FgGroup> {
        self.forced_unique.then(|| &self.candidates[0])
    }
}

/// `A/mA` as a list of cyclic orders: `ℤ/m` per free generator of `A`,
/// `ℤ/gcd(t, m)` per torsion factor `t`.
fn quotient_by_multiple(a: &FgGroup, m: &BigInt) -> Vec<BigInt> {
    std::iter::repeat_n(m.clone(), a.rank())
        .chain(a.torsion().iter().map(|t| t.gcd(m)))
        .collect()
}

/// `Ext¹(C, A) = ⊕_{m ∈ torsion(C)} A/mA`.
pub fn ext_classes(c: &FgGroup, a: &FgGroup) -> FgGroup {
    let factors: Vec<BigInt> = c
        .torsion()
        .iter()
        .flat_map(|m| quotient_by_multiple(a, m))
        .collect();
    FgGroup::from_factors(0, &factors)
}

/// Every middle group, by cocycle enumeration when the tuple count is at most
/// [`DEFAULT_COCYCLE_LIMIT`] and by [`classify_by_primes`] otherwise.
pub fn enumerate_extensions(p: &ExtensionProblem) -> ExtensionAnswer {
    match enumerate_by_cocycles(p, DEFAULT_COCYCLE_LIMIT) {
        Ok(answer) => answer,
        Err(_) => classify_by_primes(p),
    }
}

/// Number of cocycle tuples [`enumerate_by_cocycles`] would visit.
pub fn cocycle_count(p: &ExtensionProblem) -> BigInt {
    p.quot
        .torsion()
        .iter()
        .flat_map(|m| quotient_by_multiple(&p.sub, m))
        .product()
}

/// Runs over every cocycle tuple.
///
/// The free part of the quotient always splits off. For torsion factors
/// `m₁ … m_t` of the quotient, each tuple `(a₁ … a_t)` with `aⱼ` a coset
/// representative of `A/mⱼA` gives the presentation
/// `⟨A, x̃₁ … x̃_t | relations of A, mⱼ·x̃ⱼ = aⱼ⟩`.
pub fn enumerate_by_cocycles(
    p: &ExtensionProblem,
    limit: u64,
) -> Result<ExtensionAnswer, ExtensionError> {
    let a = &p.sub;
    let quot_torsion = p.quot.torsion();
    let free_quot = p.quot.free_part();
    let split = direct_sum(a, &p.quot);

    // Per quotient factor, the ranges of each coordinate of a representative.
    let ranges: Vec<Vec<BigInt>> = quot_torsion
        .iter()
        .map(|m| quotient_by_multiple(a, m))
        .collect();
    let count = cocycle_count(p);
    if count > BigInt::from(limit) {
        return Err(ExtensionError::TooManyCocycles { count, limit });
    }
    let flat: Vec<u64> = ranges
        .iter()
        .flatten()
        .map(|r| r.to_u64().expect("bounded by the limit"))
        .collect();

    let n_a = a.generator_count();
    let t = quot_torsion.len();
    let gens = n_a + t;
    let base = {
        let mut m = IntMatrix::zeros(gens, a.torsion().len() + t);
        for (j, alpha) in a.torsion().iter().enumerate() {
            m[(a.rank() + j, j)] = alpha.clone();
        }
        for (j, mj) in quot_torsion.iter().enumerate() {
            m[(n_a + j, a.torsion().len() + j)] = mj.clone();
        }
        m
    };

    let mut found = BTreeSet::new();
    let mut tuple = vec![0u64; flat.len()];
    loop {
        let mut rel = base.clone();
        for j in 0..t {
            let col = a.torsion().len() + j;
            for i in 0..n_a {
                let v = tuple[j * n_a + i];
                if v != 0 {
                    rel[(i, col)] = -BigInt::from(v);
                }
            }
        }
        let middle = group_from_presentation(&rel, gens);
        found.insert(direct_sum(&middle, &free_quot));

        // Odometer, last coordinate fastest.
        let mut k = flat.len();
        loop {
            if k == 0 {
                return Ok(ExtensionAnswer::from_set(found, split));
            }
            k -= 1;
            tuple[k] += 1;
            if tuple[k] < flat[k] {
                break;
            }
            tuple[k] = 0;
        }
    }
}

/// Every middle group, assembled from one Littlewood–Richardson computation
/// per prime dividing the torsion of the quotient. Cost does not grow with the
/// size of `Ext¹`.
pub fn classify_by_primes(p: &ExtensionProblem) -> ExtensionAnswer {
    ExtensionAnswer::from_set(
        local::local_extensions(&p.sub, &p.quot),
        direct_sum(&p.sub, &p.quot),
    )
}

/// Exhaustive search over groups of the right order, for finite inputs with
/// `|sub|·|quot| ≤ 64`.
pub fn brute_force_extensions(p: &ExtensionProblem) -> Result<ExtensionAnswer, ExtensionError> {
    ExtensionOracle::new(DEFAULT_BRUTE_FORCE_BOUND).extensions(p)
}

/// Brute-force extension search that remembers the subgroup structure of every
/// group it has enumerated, so that many problems can share the work.
///
/// For each abelian group `G` of order `|sub|·|quot|` (one per choice of
/// prime-exponent partitions), every subgroup `S` is generated elementwise and
/// `G` is kept when some `S ≅ sub` has `G/S ≅ quot`.
#[derive(Debug, Default)]
pub struct ExtensionOracle {
    bound: u64,
    pairs: HashMap<FgGroup, BTreeSet<(FgGroup, FgGroup)>>,
}

impl ExtensionOracle {
    pub fn new(bound: u64) -> Self {
        ExtensionOracle {
            bound,
            pairs: HashMap::new(),
        }
    }

    pub fn extensions(&mut self, p: &ExtensionProblem) -> Result<ExtensionAnswer, ExtensionError> {
        let (Some(a), Some(c)) = (p.sub.order(), p.quot.order()) else {
            return Err(ExtensionError::Infinite {
                sub: p.sub.clone(),
                quot: p.quot.clone(),
            });
        };
        let order = &a * &c;
        if order > BigInt::from(self.bound) {
            return Err(ExtensionError::BoundExceeded {
                order,
                bound: self.bound,
            });
        }
        let order = order.to_u64().expect("bounded");
        let mut found = BTreeSet::new();
        for g in abelian_groups_of_order(order) {
            let pairs = self.pairs.entry(g.clone()).or_insert_with(|| {
                let f = FiniteGroup::new(&g).expect("bounded order is enumerable");
                f.subgroups()
                    .iter()
                    .map(|s| (f.classify_subgroup(s), f.classify_quotient(s)))
                    .collect()
            });
            if pairs.contains(&(p.sub.clone(), p.quot.clone())) {
                found.insert(g);
            }
        }
        Ok(ExtensionAnswer::from_set(
            found,
            direct_sum(&p.sub, &p.quot),
        ))
    }
}

/// Number of elements of `Ext¹(C, A)` when finite, for reporting.
pub fn ext_order(c: &FgGroup, a: &FgGroup) -> BigInt {
    ext_classes(c, a).order().unwrap_or_else(BigInt::zero)
}

/// `true` when the split extension is the only possibility for structural
/// reasons: the quotient is free or `Ext¹` vanishes.
pub fn splitting_forced(p: &ExtensionProblem) -> bool {
    p.quot.is_free() || ext_order(&p.quot.torsion_part(), &p.sub).is_one()
}
