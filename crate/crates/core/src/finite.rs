//! Element-level arithmetic in small finite abelian groups.
//!
//! Nothing here goes through Smith normal form: isomorphism classes are read
//! off element counts. `|{x : p^j·x = 0}| = p^(Σ min(λᵢ, j))` for the p-primary
//! part of type λ, so these counts determine the group. That keeps the module
//! usable as an independent check on [`crate::hom`] and [`crate::extension`].

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::group::FgGroup;

/// Hard ceiling on group order for element enumeration.
pub const MAX_ENUMERABLE_ORDER: u64 = 4096;

/// A finite group `ℤ/m₁ ⊕ … ⊕ ℤ/m_r` with elements indexed `0..order`
/// in mixed radix (first coordinate most significant).
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    moduli: Vec<u64>,
    coords: Vec<Vec<u64>>,
    add: Vec<u32>,
}

impl FiniteGroup {
    /// `None` if `g` is infinite or larger than [`MAX_ENUMERABLE_ORDER`].
    pub fn new(g: &FgGroup) -> Option<Self> {
        if !g.is_finite() {
            return None;
        }
        let moduli: Vec<u64> = g
            .torsion()
            .iter()
            .map(|t| t.to_u64())
            .collect::<Option<_>>()?;
        Self::from_moduli(moduli)
    }

    /// Any list of moduli ≥ 1, not necessarily canonical.
    pub fn from_moduli(moduli: Vec<u64>) -> Option<Self> {
        let mut order: u64 = 1;
        for &m in &moduli {
            if m == 0 {
                return None;
            }
            order = order.checked_mul(m)?;
            if order > MAX_ENUMERABLE_ORDER {
                return None;
            }
        }
        let n = order as usize;
        let coords: Vec<Vec<u64>> = (0..n)
            .map(|mut idx| {
                let mut c = vec![0; moduli.len()];
                for (k, &m) in moduli.iter().enumerate().rev() {
                    c[k] = (idx as u64) % m;
                    idx /= m as usize;
                }
                c
            })
            .collect();
        let mut g = FiniteGroup {
            moduli,
            coords,
            add: Vec::new(),
        };
        let mut add = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let sum: Vec<u64> = g.coords[a]
                    .iter()
                    .zip(&g.coords[b])
                    .zip(&g.moduli)
                    .map(|((x, y), m)| (x + y) % m)
                    .collect();
                add[a * n + b] = g.index(&sum) as u32;
            }
        }
        g.add = add;
        Some(g)
    }

    pub fn order(&self) -> usize {
        self.coords.len()
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn coords(&self, x: usize) -> &[u64] {
        &self.coords[x]
    }

    /// Index of a coordinate vector; entries are reduced modulo the moduli.
    pub fn index(&self, c: &[u64]) -> usize {
        c.iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (v, m)| acc * (*m as usize) + (v % m) as usize)
    }

    /// Index of a vector of arbitrary integers, reduced into the group.
    pub fn index_of_big(&self, c: &[BigInt]) -> usize {
        let reduced: Vec<u64> = c
            .iter()
            .zip(&self.moduli)
            .map(|(v, m)| {
                let m = BigInt::from(*m);
                ((v % &m + &m) % &m).to_u64().unwrap()
            })
            .collect();
        self.index(&reduced)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order() + b] as usize
    }

    pub fn scale(&self, k: u64, a: usize) -> usize {
        let c: Vec<u64> = self.coords[a]
            .iter()
            .zip(&self.moduli)
            .map(|(x, m)| (x * (k % m)) % m)
            .collect();
        self.index(&c)
    }

    pub fn element_order(&self, a: usize) -> u64 {
        self.coords[a]
            .iter()
            .zip(&self.moduli)
            .map(|(x, m)| m / gcd(*x, *m))
            .fold(1, lcm)
    }

    /// All subgroups, as sorted element lists, each containing 0.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let words = n.div_ceil(64);
        let key = |set: &[usize]| {
            let mut bits = vec![0u64; words];
            for &x in set {
                bits[x / 64] |= 1 << (x % 64);
            }
            bits
        };
        let trivial = vec![0usize];
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        seen.insert(key(&trivial));
        let mut queue = VecDeque::from([trivial]);
        let mut out = Vec::new();
        while let Some(s) = queue.pop_front() {
            let bits = key(&s);
            for g in 0..n {
                if bits[g / 64] & (1 << (g % 64)) != 0 {
                    continue;
                }
                let t = self.extend(&s, &bits, g);
                if seen.insert(key(&t)) {
                    queue.push_back(t);
                }
            }
            out.push(s);
        }
        out
    }

    /// `S + ⟨g⟩`, built as the union of cosets `S + k·g` until `k·g ∈ S`.
    fn extend(&self, s: &[usize], bits: &[u64], g: usize) -> Vec<usize> {
        let mut out = s.to_vec();
        let mut kg = g;
        while bits[kg / 64] & (1 << (kg % 64)) == 0 {
            out.extend(s.iter().map(|&x| self.add(x, kg)));
            kg = self.add(kg, g);
        }
        out.sort_unstable();
        out
    }

    /// Isomorphism class of a subgroup given by its elements.
    pub fn classify_subgroup(&self, s: &[usize]) -> FgGroup {
        let orders: Vec<u64> = s.iter().map(|&x| self.element_order(x)).collect();
        classify_by_counts(s.len() as u64, |m| {
            orders.iter().filter(|&&o| m % o == 0).count() as u64
        })
    }

    /// Isomorphism class of `G / S`.
    pub fn classify_quotient(&self, s: &[usize]) -> FgGroup {
        let mut member = vec![false; self.order()];
        for &x in s {
            member[x] = true;
        }
        let quotient_order = (self.order() / s.len()) as u64;
        classify_by_counts(quotient_order, |m| {
            let lifts = (0..self.order())
                .filter(|&x| member[self.scale(m, x)])
                .count();
            (lifts / s.len()) as u64
        })
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Recovers a finite abelian group of the given order from
/// `killed(m) = |{x : m·x = 0}|`, evaluated at prime powers.
pub fn classify_by_counts(order: u64, killed: impl Fn(u64) -> u64) -> FgGroup {
    let mut factors: Vec<BigInt> = Vec::new();
    for (p, e) in prime_factors(order) {
        // parts_at_least[j-1] = number of cyclic p-summands of exponent ≥ j
        let mut parts_at_least = Vec::new();
        let mut prev_log = 0u32;
        for j in 1..=e {
            let log = ilog_exact(killed(p.pow(j)), p);
            parts_at_least.push(log - prev_log);
            prev_log = log;
            if log == e {
                break;
            }
        }
        // Conjugate partition: summand i has exponent #{j : parts_at_least[j] > i}.
        let count = parts_at_least.first().copied().unwrap_or(0);
        for i in 0..count {
            let exp = parts_at_least.iter().filter(|&&c| c > i).count() as u32;
            factors.push(BigInt::from(p.pow(exp)));
        }
    }
    FgGroup::from_factors(0, &factors)
}

fn ilog_exact(n: u64, p: u64) -> u32 {
    let mut k = 0;
    let mut m = n;
    while m > 1 {
        assert_eq!(m % p, 0, "count {n} is not a power of {p}");
        m /= p;
        k += 1;
    }
    k
}

/// Every partition of `n` as a non-increasing list.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// All isomorphism classes of abelian groups of order `n`, one per choice of a
/// partition of each prime exponent. Sorted.
pub fn abelian_groups_of_order(n: u64) -> Vec<FgGroup> {
    let mut acc: Vec<Vec<BigInt>> = vec![Vec::new()];
    for (p, e) in prime_factors(n) {
        let mut next = Vec::new();
        for part in partitions(e) {
            for prefix in &acc {
                let mut f = prefix.clone();
                f.extend(part.iter().map(|&k| BigInt::from(p.pow(k))));
                next.push(f);
            }
        }
        acc = next;
    }
    let mut out: Vec<FgGroup> = acc.iter().map(|f| FgGroup::from_factors(0, f)).collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_counts_match_partition_numbers() {
        // Number of abelian groups of order n: product of p(e) over prime powers.
        let expected = [
            (1, 1),
            (4, 2),
            (8, 3),
            (16, 5),
            (32, 7),
            (64, 11),
            (72, 6),
            (60, 2),
            (9, 2),
        ];
        for (n, c) in expected {
            assert_eq!(abelian_groups_of_order(n).len(), c, "order {n}");
        }
        assert_eq!(abelian_groups_of_order(1), vec![FgGroup::zero()]);
    }

    #[test]
    fn classification_recovers_each_group() {
        for n in 1..=64 {
            for g in abelian_groups_of_order(n) {
                let f = FiniteGroup::new(&g).unwrap();
                let all: Vec<usize> = (0..f.order()).collect();
                assert_eq!(f.classify_subgroup(&all), g);
                assert_eq!(f.classify_quotient(&[0]), g);
                assert_eq!(f.classify_quotient(&all), FgGroup::zero());
            }
        }
    }

    #[test]
    fn subgroup_counts() {
        // Known subgroup counts: ℤ/12 has one per divisor (6); (ℤ/2)² has 5; (ℤ/2)³ has 16.
        let count = |g: FgGroup| FiniteGroup::new(&g).unwrap().subgroups().len();
        assert_eq!(count(FgGroup::cyclic(12)), 6);
        assert_eq!(count(FgGroup::of(0, &[2, 2])), 5);
        assert_eq!(count(FgGroup::of(0, &[2, 2, 2])), 16);
        assert_eq!(count(FgGroup::of(0, &[2, 2, 2, 2, 2, 2])), 2825);
        assert_eq!(count(FgGroup::zero()), 1);
    }

    #[test]
    fn element_orders() {
        let f = FiniteGroup::new(&FgGroup::of(0, &[2, 4])).unwrap();
        let x = f.index(&[1, 2]);
        assert_eq!(f.element_order(x), 2);
        assert_eq!(f.element_order(f.index(&[1, 1])), 4);
        assert_eq!(f.scale(2, f.index(&[1, 3])), f.index(&[0, 2]));
    }

    #[test]
    fn refuses_large_or_infinite() {
        assert!(FiniteGroup::new(&FgGroup::free(1)).is_none());
        assert!(FiniteGroup::new(&FgGroup::cyclic(5000)).is_none());
    }
}
