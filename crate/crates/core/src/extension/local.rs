//! Middle groups one prime at a time.
//!
//! For finite abelian p-groups, Green's theorem says a group of type λ has a
//! subgroup of type μ with quotient of type ν exactly when the
//! Littlewood–Richardson coefficient `c^λ_{μν}` is nonzero. Free summands of
//! the sub are truncated to `ℤ/p^N` with `N` above every exponent the torsion of
//! the middle group can reach. That truncation leaves `Ext¹` unchanged, and the
//! free part reappears as the parts of size at least `N`.
//!
//! `Ext¹(C, A)` splits over the primes dividing `|tors C|`, so the answer is a
//! product of independent local answers.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use crate::group::FgGroup;

/// A partition, parts non-increasing; part `k` stands for a summand `ℤ/p^k`.
pub type Partition = Vec<u32>;

/// Torsion of `g` as prime → partition of exponents.
fn primary_types(g: &FgGroup) -> BTreeMap<BigInt, Partition> {
    let mut out: BTreeMap<BigInt, Partition> = BTreeMap::new();
    for (p, e) in g.primary_decomposition() {
        out.entry(p).or_default().push(e);
    }
    for parts in out.values_mut() {
        parts.sort_unstable_by(|a, b| b.cmp(a));
    }
    out
}

/// All middle groups of `0 → sub → G → quot → 0`.
pub(super) fn local_extensions(sub: &FgGroup, quot: &FgGroup) -> BTreeSet<FgGroup> {
    let rank = sub.rank() + quot.rank();
    let a_types = primary_types(sub);
    let c_types = primary_types(quot);

    // Primes untouched by the quotient keep the sub's summands.
    let mut fixed: Vec<BigInt> = Vec::new();
    for (p, parts) in &a_types {
        if !c_types.contains_key(p) {
            fixed.extend(parts.iter().map(|&k| p.pow(k)));
        }
    }

    let mut choices: Vec<Vec<Vec<BigInt>>> = Vec::new();
    for (p, nu) in &c_types {
        let mu_a = a_types.get(p).cloned().unwrap_or_default();
        let n = mu_a.first().copied().unwrap_or(0) + nu[0] + 1;
        let mut mu = vec![n; sub.rank()];
        mu.extend(&mu_a);
        let local: Vec<Vec<BigInt>> = lr_support(&mu, nu)
            .into_iter()
            .map(|lambda| {
                debug_assert_eq!(lambda.iter().filter(|&&k| k >= n).count(), sub.rank());
                lambda
                    .iter()
                    .filter(|&&k| k < n)
                    .map(|&k| p.pow(k))
                    .collect()
            })
            .collect();
        choices.push(local);
    }

    let mut out = BTreeSet::new();
    let mut pick = vec![0usize; choices.len()];
    loop {
        let mut factors = fixed.clone();
        for (c, &i) in choices.iter().zip(&pick) {
            factors.extend(c[i].iter().cloned());
        }
        out.insert(FgGroup::from_factors(rank, &factors));
        let mut k = pick.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            pick[k] += 1;
            if pick[k] < choices[k].len() {
                break;
            }
            pick[k] = 0;
        }
    }
}

/// Part `i` of a partition, zero past its length.
fn at(v: &[u32], i: usize) -> u32 {
    v.get(i).copied().unwrap_or(0)
}

/// Every λ with `c^λ_{μν} ≠ 0`, sorted.
pub fn lr_support(mu: &[u32], nu: &[u32]) -> Vec<Partition> {
    // c^λ_{μν} = c^λ_{νμ}; fill with the smaller content.
    let (mu, nu) = if nu.iter().sum::<u32>() <= mu.iter().sum::<u32>() {
        (mu, nu)
    } else {
        (nu, mu)
    };
    let mu: Vec<u32> = mu.iter().copied().filter(|&k| k > 0).collect();
    let nu: Vec<u32> = nu.iter().copied().filter(|&k| k > 0).collect();
    let boxes: u32 = nu.iter().sum();

    let mut shapes = Vec::new();
    let mut lambda = Vec::with_capacity(mu.len() + nu.len());
    fn go(
        i: usize,
        left: u32,
        lambda: &mut Vec<u32>,
        mu: &[u32],
        nu: &[u32],
        shapes: &mut Vec<Partition>,
    ) {
        let rows = mu.len() + nu.len();
        if i == rows || left == 0 {
            if left == 0 {
                let mut shape = lambda.clone();
                shape.extend((i..rows).map(|j| at(mu, j)));
                shape.retain(|&k| k > 0);
                shapes.push(shape);
            }
            return;
        }
        let lo = at(mu, i).max(at(nu, i));
        let mut hi = (at(mu, i) + nu[0]).min(at(mu, i) + left);
        if i > 0 {
            hi = hi.min(lambda[i - 1]);
        }
        // Columns of λ/μ have at most ℓ(ν) cells.
        if i >= nu.len() {
            hi = hi.min(at(mu, i - nu.len()));
        }
        for li in lo..=hi {
            lambda.push(li);
            go(i + 1, left - (li - at(mu, i)), lambda, mu, nu, shapes);
            lambda.pop();
        }
    }
    go(0, boxes, &mut lambda, &mu, &nu, &mut shapes);

    let mut out: Vec<Partition> = shapes
        .into_iter()
        .filter(|l| lr_tableau_exists(l, &mu, &nu))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Whether `λ/μ` admits a semistandard filling of content `ν` whose reverse
/// reading word is a lattice word.
pub fn lr_tableau_exists(lambda: &[u32], mu: &[u32], nu: &[u32]) -> bool {
    let row = |v: &[u32], i: usize| at(v, i) as usize;
    if (0..lambda.len().max(mu.len())).any(|i| row(mu, i) > row(lambda, i)) {
        return false;
    }
    let skew: usize = (0..lambda.len()).map(|i| row(lambda, i) - row(mu, i)).sum();
    if skew != nu.iter().map(|&k| k as usize).sum::<usize>() {
        return false;
    }
    // Reading order: rows top to bottom, each row right to left.
    let mut cells = Vec::with_capacity(skew);
    for (i, _) in lambda.iter().enumerate() {
        for j in (row(mu, i)..row(lambda, i)).rev() {
            cells.push((i, j));
        }
    }
    let mut grid: Vec<Vec<usize>> = lambda.iter().map(|&l| vec![0; l as usize]).collect();
    let mut count = vec![0usize; nu.len() + 1];

    fn fill(
        idx: usize,
        cells: &[(usize, usize)],
        grid: &mut [Vec<usize>],
        count: &mut [usize],
        lambda: &[u32],
        mu: &[u32],
        nu: &[u32],
    ) -> bool {
        let Some(&(i, j)) = cells.get(idx) else {
            return true;
        };
        let row = |v: &[u32], i: usize| at(v, i) as usize;
        let hi = if j + 1 < row(lambda, i) {
            grid[i][j + 1]
        } else {
            nu.len()
        };
        let lo = if i > 0 && j >= row(mu, i - 1) {
            grid[i - 1][j] + 1
        } else {
            1
        };
        for label in lo..=hi {
            if count[label] == nu[label - 1] as usize {
                continue;
            }
            if label > 1 && count[label] + 1 > count[label - 1] {
                continue;
            }
            grid[i][j] = label;
            count[label] += 1;
            if fill(idx + 1, cells, grid, count, lambda, mu, nu) {
                return true;
            }
            count[label] -= 1;
        }
        grid[i][j] = 0;
        false
    }
    fill(0, &cells, &mut grid, &mut count, lambda, mu, nu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn support(mu: &[u32], nu: &[u32]) -> Vec<Partition> {
        lr_support(mu, nu)
    }

    #[test]
    fn pieri_for_single_boxes() {
        assert_eq!(support(&[1], &[1]), vec![vec![1, 1], vec![2]]);
        assert_eq!(support(&[], &[2, 1]), vec![vec![2, 1]]);
        assert_eq!(support(&[2, 1], &[]), vec![vec![2, 1]]);
    }

    #[test]
    fn square_of_two_one() {
        // s₂₁ · s₂₁ = s₄₂ + s₄₁₁ + s₃₃ + 2s₃₂₁ + s₃₁₁₁ + s₂₂₂ + s₂₂₁₁
        let mut expected = vec![
            vec![4, 2],
            vec![4, 1, 1],
            vec![3, 3],
            vec![3, 2, 1],
            vec![3, 1, 1, 1],
            vec![2, 2, 2],
            vec![2, 2, 1, 1],
        ];
        expected.sort();
        assert_eq!(support(&[2, 1], &[2, 1]), expected);
    }

    #[test]
    fn lattice_condition_matters() {
        // λ/μ = (2)/(0) with content (1,1) would need the word "2 1" read right to left.
        assert!(!lr_tableau_exists(&[2], &[], &[1, 1]));
        assert!(lr_tableau_exists(&[1, 1], &[], &[1, 1]));
    }

    #[test]
    fn free_sub_by_cyclic() {
        let got = local_extensions(&FgGroup::free(1), &FgGroup::cyclic(2));
        assert_eq!(
            got,
            BTreeSet::from([FgGroup::free(1), FgGroup::of(1, &[2])])
        );
    }

    #[test]
    fn coprime_parts_combine() {
        let got = local_extensions(&FgGroup::cyclic(6), &FgGroup::cyclic(6));
        let expected: BTreeSet<FgGroup> = [
            FgGroup::of(0, &[6, 6]),
            FgGroup::of(0, &[3, 12]),
            FgGroup::of(0, &[2, 18]),
            FgGroup::of(0, &[36]),
        ]
        .into();
        assert_eq!(got, expected);
    }
}
