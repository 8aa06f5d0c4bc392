//! Finitely generated abelian groups in invariant-factor form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::matrix::IntMatrix;
use crate::snf::smith_normal_form;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("torsion factor {0} is smaller than 2")]
    FactorTooSmall(BigInt),
    #[error("torsion factors are not a divisibility chain: {0} does not divide {1}")]
    NotAChain(BigInt, BigInt),
    #[error("cannot parse group literal {0:?}: {1}")]
    Parse(String, String),
}

/// `ℤ^rank ⊕ ℤ/t₁ ⊕ … ⊕ ℤ/t_m` with `2 ≤ t₁ | t₂ | … | t_m`.
///
/// The canonical form is a complete invariant, so derived equality is isomorphism.
/// Generators are ordered free first, then torsion in list order; every matrix
/// in the crate uses that order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FgGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl FgGroup {
    /// Validating constructor for an already canonical description.
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self, GroupError> {
        for t in &torsion {
            if *t < BigInt::from(2) {
                return Err(GroupError::FactorTooSmall(t.clone()));
            }
        }
        for w in torsion.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(GroupError::NotAChain(w[0].clone(), w[1].clone()));
            }
        }
        Ok(FgGroup { rank, torsion })
    }

    pub fn zero() -> Self {
        FgGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        FgGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// `ℤ/n`; `n = 0` gives ℤ and `n = ±1` the zero group.
    pub fn cyclic(n: impl Into<BigInt>) -> Self {
        Self::from_factors(0, &[n.into()])
    }

    /// Canonicalizes an arbitrary list of cyclic orders. Zero factors count as
    /// free summands and units are dropped.
    pub fn from_factors(rank: usize, factors: &[BigInt]) -> Self {
        let diag = IntMatrix::diagonal(factors.len(), factors.len(), factors);
        let g = group_from_presentation(&diag, factors.len());
        FgGroup {
            rank: rank + g.rank,
            torsion: g.torsion,
        }
    }

    /// Shorthand for tests and tables: `FgGroup::of(1, &[2])` is ℤ ⊕ ℤ/2.
    /// Panics on a non-canonical torsion list.
    pub fn of(rank: usize, torsion: &[u64]) -> Self {
        Self::new(rank, torsion.iter().map(|&t| BigInt::from(t)).collect())
            .expect("non-canonical group literal")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Number of canonical generators.
    pub fn generator_count(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Order of canonical generator `i`, `None` for a free generator.
    pub fn generator_order(&self, i: usize) -> Option<&BigInt> {
        if i < self.rank {
            None
        } else {
            self.torsion.get(i - self.rank)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// `None` when the group is infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Largest torsion factor, `1` for a torsion-free group.
    pub fn exponent(&self) -> BigInt {
        self.torsion.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn free_part(&self) -> FgGroup {
        FgGroup::free(self.rank)
    }

    pub fn torsion_part(&self) -> FgGroup {
        FgGroup {
            rank: 0,
            torsion: self.torsion.clone(),
        }
    }

    /// Relation matrix of the canonical presentation: one column per torsion
    /// generator, with its order in that generator's row.
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.generator_count();
        let mut r = IntMatrix::zeros(n, self.torsion.len());
        for (j, t) in self.torsion.iter().enumerate() {
            r[(self.rank + j, j)] = t.clone();
        }
        r
    }

    /// Prime-power cyclic summands `(p, e)` of the torsion part, sorted.
    /// Display-only view; the invariant-factor form stays canonical.
    pub fn primary_decomposition(&self) -> Vec<(BigInt, u32)> {
        let mut out: Vec<(BigInt, u32)> = self
            .torsion
            .iter()
            .flat_map(|t| factorize(t).into_iter())
            .collect();
        out.sort();
        out
    }

    /// Human form of [`Self::primary_decomposition`], e.g. `ℤ ⊕ ℤ/4 ⊕ ℤ/3` for ℤ ⊕ ℤ/12.
    pub fn primary_display(&self) -> String {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(power("ℤ", self.rank));
        }
        for (p, e) in self.primary_decomposition() {
            parts.push(format!("ℤ/{}", p.pow(e)));
        }
        if parts.is_empty() {
            "0".to_owned()
        } else {
            parts.join(" ⊕ ")
        }
    }
}

/// Trial-division factorization into `(prime, exponent)` pairs.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Cokernel of `relations : ℤ^cols → ℤ^generators`, canonicalized; unit factors are dropped.
pub fn group_from_presentation(relations: &IntMatrix, generators: usize) -> FgGroup {
    assert_eq!(
        relations.rows(),
        generators,
        "relation matrix must have one row per generator"
    );
    let s = smith_normal_form(relations);
    let torsion = s
        .invariant_factors
        .iter()
        .filter(|d| !d.is_one())
        .cloned()
        .collect();
    FgGroup {
        rank: generators - s.rank(),
        torsion,
    }
}

/// Canonical form of `g ⊕ h`.
pub fn direct_sum(g: &FgGroup, h: &FgGroup) -> FgGroup {
    let factors: Vec<BigInt> = g.torsion.iter().chain(&h.torsion).cloned().collect();
    FgGroup::from_factors(g.rank + h.rank, &factors)
}

const SUPERSCRIPTS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];

fn superscript(n: usize) -> String {
    n.to_string()
        .chars()
        .map(|c| SUPERSCRIPTS[c.to_digit(10).unwrap() as usize])
        .collect()
}

fn power(base: &str, n: usize) -> String {
    if n == 1 {
        base.to_owned()
    } else {
        format!("{base}{}", superscript(n))
    }
}

impl fmt::Display for FgGroup {
    /// `0`, `ℤ`, `ℤ² ⊕ ℤ/2`, `(ℤ/2)³ ⊕ ℤ/4`: repeated factors are collapsed into powers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(power("ℤ", self.rank));
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let t = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == t).count();
            if run == 1 {
                parts.push(format!("ℤ/{t}"));
            } else {
                parts.push(format!("(ℤ/{t}){}", superscript(run)));
            }
            i += run;
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

impl fmt::Debug for FgGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgGroup({self})")
    }
}

impl FromStr for FgGroup {
    type Err = GroupError;

    /// Accepts the compact literal `rank,[d1,d2,…]` and the rendered form
    /// produced by `Display` (ASCII `Z`, `+` and `^n` are accepted too).
    /// Summands in the rendered form may be in any order.
    fn from_str(s: &str) -> Result<Self, GroupError> {
        let err = |why: &str| GroupError::Parse(s.to_owned(), why.to_owned());
        let t = s.trim();
        if let Some((rank, rest)) = t.split_once(',') {
            if rest.trim_start().starts_with('[') {
                let rank: usize = rank.trim().parse().map_err(|_| err("bad rank"))?;
                let inner = rest
                    .trim()
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| err("torsion list must be bracketed"))?;
                let torsion = inner
                    .split(',')
                    .map(str::trim)
                    .filter(|x| !x.is_empty())
                    .map(|x| x.parse::<BigInt>().map_err(|_| err("bad torsion factor")))
                    .collect::<Result<Vec<_>, _>>()?;
                return FgGroup::new(rank, torsion);
            }
        }
        if t == "0" {
            return Ok(FgGroup::zero());
        }
        let mut rank = 0usize;
        let mut factors = Vec::new();
        for part in t.split(['⊕', '+']) {
            let part = part.trim().replace('Z', "ℤ");
            let (base, exp) = split_exponent(&part).ok_or_else(|| err("bad exponent"))?;
            let base = base
                .strip_prefix('(')
                .and_then(|b| b.strip_suffix(')'))
                .unwrap_or(base);
            if base == "ℤ" {
                rank += exp;
            } else if let Some(n) = base.strip_prefix("ℤ/") {
                let n: BigInt = n.trim().parse().map_err(|_| err("bad cyclic order"))?;
                if n < BigInt::from(2) {
                    return Err(err("cyclic order must be at least 2"));
                }
                factors.extend(std::iter::repeat_n(n, exp));
            } else {
                return Err(err("expected ℤ or ℤ/n summands"));
            }
        }
        Ok(FgGroup::from_factors(rank, &factors))
    }
}

fn split_exponent(part: &str) -> Option<(&str, usize)> {
    if let Some((b, e)) = part.split_once('^') {
        return Some((b.trim(), e.trim().parse().ok()?));
    }
    let idx = part
        .char_indices()
        .find(|(_, c)| SUPERSCRIPTS.contains(c))
        .map(|(i, _)| i);
    match idx {
        None => Some((part, 1)),
        Some(i) => {
            let digits: String = part[i..]
                .chars()
                .map(|c| {
                    SUPERSCRIPTS
                        .iter()
                        .position(|s| *s == c)
                        .map(|d| char::from(b'0' + d as u8))
                })
                .collect::<Option<String>>()?;
            Some((&part[..i], digits.parse().ok()?))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Literal {
    rank: usize,
    #[serde(with = "bigint_list")]
    torsion: Vec<BigInt>,
}

/// JSON numbers when they fit in an `i64`, decimal strings otherwise.
pub(crate) mod bigint_list {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Small(i64),
        Big(String),
    }

    impl From<&BigInt> for Repr {
        fn from(b: &BigInt) -> Self {
            b.to_i64()
                .map_or_else(|| Repr::Big(b.to_string()), Repr::Small)
        }
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(Repr::from).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(|r| match r {
                Repr::Small(n) => Ok(BigInt::from(n)),
                Repr::Big(t) => t.parse().map_err(serde::de::Error::custom),
            })
            .collect()
    }
}

impl Serialize for FgGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Literal {
            rank: self.rank,
            torsion: self.torsion.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FgGroup {
    /// Either `{"rank": r, "torsion": [...]}` or a string accepted by `FromStr`.
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Lit(Literal),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Lit(l) => FgGroup::new(l.rank, l.torsion).map_err(serde::de::Error::custom),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl FgGroup {
    pub(crate) fn from_parts_unchecked(rank: usize, torsion: Vec<BigInt>) -> Self {
        debug_assert!(FgGroup::new(rank, torsion.clone()).is_ok());
        FgGroup { rank, torsion }
    }
}
