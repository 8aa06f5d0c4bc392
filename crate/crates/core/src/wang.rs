//! The long exact Wang sequence of a bundle of algebras over `S^k`.
//!
//! For the section algebra `A` of a bundle with fibre `B` the sequence reads
//!
//! ```text
//! … → π_n(A) → π_n(B) --d--> π_{n+k-1}(B) → π_{n-1}(A) → …
//! ```
//!
//! so every degree yields a short exact sequence
//! `0 → coker(d: π_{n+1} → π_{n+k}) → π_n(A) → ker(d: π_n → π_{n+k-1}) → 0`.
//! The same holds for K-theory with indices read modulo 2.
//!
//! The differential is `d(a) = −g·[κ, a]`. Only kernels and cokernels of `d`
//! enter the answer and these do not see the sign, so callers may supply
//! either sign.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::extension::{enumerate_extensions, ExtensionProblem};
use crate::group::FgGroup;
use crate::hom::{hom_invariants, hom_well_defined, GroupHom, HomError};
use crate::localize::{localize, localize_hom, LocalizationRing};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WangError {
    #[error("sphere dimension k = {0} is below 2")]
    SphereTooSmall(u32),
    #[error("the sequence is not asserted in degree {0}; degrees start at 1")]
    DegreeBelowOne(i64),
    #[error("operation needs a {expected} problem")]
    WrongGrading { expected: Grading },
    #[error("coefficient range is empty")]
    EmptyRange,
    #[error("differential at degree {degree} has {which} {found}, expected {expected}")]
    DifferentialType {
        degree: i64,
        which: &'static str,
        expected: FgGroup,
        found: FgGroup,
    },
    #[error("differential at degree {degree} leaves the coefficient range")]
    DifferentialOutOfRange { degree: i64 },
    #[error("differential at degree {degree} is not a homomorphism")]
    DifferentialIllDefined { degree: i64 },
    #[error("differential at degree {degree}: {source}")]
    Hom { degree: i64, source: HomError },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    Homotopy,
    KTheory,
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grading::Homotopy => "homotopy",
            Grading::KTheory => "ktheory",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)] // one per problem; boxing buys nothing
enum Data {
    /// `groups[i]` is `π_{q_min + i}`; `differential[n] : π_n → π_{n+k-1}`.
    Homotopy {
        q_min: i64,
        groups: Vec<FgGroup>,
        differential: BTreeMap<i64, GroupHom>,
    },
    /// `d[p] : K_p → K_{(p+k-1) mod 2}`.
    KTheory {
        k: [FgGroup; 2],
        d: [Option<GroupHom>; 2],
    },
}

/// One bundle: sphere dimension, coefficient groups of the fibre, differential
/// and the ring everything is tensored with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WangProblem {
    k: u32,
    data: Data,
    localization: LocalizationRing,
}

fn check_hom(
    degree: i64,
    h: &GroupHom,
    source: &FgGroup,
    target: &FgGroup,
) -> Result<(), WangError> {
    if h.source() != source {
        return Err(WangError::DifferentialType {
            degree,
            which: "source",
            expected: source.clone(),
            found: h.source().clone(),
        });
    }
    if h.target() != target {
        return Err(WangError::DifferentialType {
            degree,
            which: "target",
            expected: target.clone(),
            found: h.target().clone(),
        });
    }
    match hom_well_defined(h) {
        Ok(true) => Ok(()),
        Ok(false) => Err(WangError::DifferentialIllDefined { degree }),
        Err(source) => Err(WangError::Hom { degree, source }),
    }
}

impl WangProblem {
    /// Homotopy problem with `groups[i] = π_{q_min+i}(U₀B)`. Degrees missing
    /// from `differential` carry the zero map.
    pub fn homotopy(
        k: u32,
        q_min: i64,
        groups: Vec<FgGroup>,
        differential: BTreeMap<i64, GroupHom>,
    ) -> Result<Self, WangError> {
        if k < 2 {
            return Err(WangError::SphereTooSmall(k));
        }
        if groups.is_empty() {
            return Err(WangError::EmptyRange);
        }
        let p = WangProblem {
            k,
            data: Data::Homotopy {
                q_min,
                groups,
                differential,
            },
            localization: LocalizationRing::integers(),
        };
        if let Data::Homotopy { differential, .. } = &p.data {
            for (&n, h) in differential {
                let (Some(s), Some(t)) = (p.coefficient(n), p.coefficient(n + k as i64 - 1)) else {
                    return Err(WangError::DifferentialOutOfRange { degree: n });
                };
                check_hom(n, h, s, t)?;
            }
        }
        Ok(p)
    }

    /// K-theory problem with `K₀(B)`, `K₁(B)` and `d[p] : K_p → K_{p+k-1}`;
    /// `None` is the zero map.
    pub fn ktheory(
        k: u32,
        k0: FgGroup,
        k1: FgGroup,
        d: [Option<GroupHom>; 2],
    ) -> Result<Self, WangError> {
        if k < 2 {
            return Err(WangError::SphereTooSmall(k));
        }
        let groups = [k0, k1];
        let shift = ((k - 1) % 2) as usize;
        for (p, h) in d.iter().enumerate() {
            if let Some(h) = h {
                check_hom(p as i64, h, &groups[p], &groups[(p + shift) % 2])?;
            }
        }
        Ok(WangProblem {
            k,
            data: Data::KTheory { k: groups, d },
            localization: LocalizationRing::integers(),
        })
    }

    /// Bundle over `S³` with differential multiplication by `−Δ` for the
    /// Dixmier–Douady integer `Δ`.
    pub fn dixmier_douady(delta: i64, k0: FgGroup, k1: FgGroup) -> Result<Self, WangError> {
        let d = d3_from_dixmier_douady(delta, &k0, &k1);
        Self::ktheory(3, k0, k1, d.map(Some))
    }

    pub fn with_localization(mut self, ring: LocalizationRing) -> Self {
        self.localization = ring;
        self
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn grading(&self) -> Grading {
        match self.data {
            Data::Homotopy { .. } => Grading::Homotopy,
            Data::KTheory { .. } => Grading::KTheory,
        }
    }

    pub fn localization(&self) -> &LocalizationRing {
        &self.localization
    }

    /// Coefficient range `(q_min, q_max)` of a homotopy problem.
    pub fn range(&self) -> Option<(i64, i64)> {
        match &self.data {
            Data::Homotopy { q_min, groups, .. } => Some((*q_min, q_min + groups.len() as i64 - 1)),
            Data::KTheory { .. } => None,
        }
    }

    /// `π_q(U₀B)` for homotopy problems, `K_{q mod 2}(B)` for K-theory.
    pub fn coefficient(&self, q: i64) -> Option<&FgGroup> {
        match &self.data {
            Data::Homotopy { q_min, groups, .. } => {
                usize::try_from(q - q_min).ok().and_then(|i| groups.get(i))
            }
            Data::KTheory { k, .. } => Some(&k[q.rem_euclid(2) as usize]),
        }
    }

    /// The differential leaving degree `n`, if both ends are known.
    pub fn differential(&self, n: i64) -> Option<GroupHom> {
        let shift = self.k as i64 - 1;
        let source = self.coefficient(n)?.clone();
        let target = self.coefficient(n + shift)?.clone();
        let explicit = match &self.data {
            Data::Homotopy { differential, .. } => differential.get(&n).cloned(),
            Data::KTheory { d, .. } => d[n.rem_euclid(2) as usize].clone(),
        };
        Some(explicit.unwrap_or_else(|| GroupHom::zero(source, target)))
    }

    /// The same problem with every differential negated.
    pub fn negated(&self) -> Self {
        let data = match &self.data {
            Data::Homotopy {
                q_min,
                groups,
                differential,
            } => Data::Homotopy {
                q_min: *q_min,
                groups: groups.clone(),
                differential: differential.iter().map(|(n, h)| (*n, h.neg())).collect(),
            },
            Data::KTheory { k, d } => Data::KTheory {
                k: k.clone(),
                d: [
                    d[0].as_ref().map(GroupHom::neg),
                    d[1].as_ref().map(GroupHom::neg),
                ],
            },
        };
        WangProblem {
            data,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    /// A single candidate, not obtained by splitting off a free quotient.
    Unique,
    /// Nontrivial sub and a free nonzero quotient: the sequence splits.
    SplitForced,
    /// The count of distinct candidates.
    Ambiguous(usize),
    /// Some coefficient the degree depends on is outside the supplied range.
    InsufficientData,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Unique => write!(f, "unique"),
            Status::SplitForced => write!(f, "split-forced"),
            Status::Ambiguous(n) => write!(f, "ambiguous({n})"),
            Status::InsufficientData => write!(f, "insufficient-data"),
        }
    }
}

impl std::str::FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "unique" => Ok(Status::Unique),
            "split-forced" => Ok(Status::SplitForced),
            "insufficient-data" => Ok(Status::InsufficientData),
            _ => s
                .strip_prefix("ambiguous(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|n| n.parse().ok())
                .map(Status::Ambiguous)
                .ok_or_else(|| format!("unknown status {s:?}")),
        }
    }
}

/// Outcome for one degree (or one parity, for K-theory).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeResult {
    pub degree: i64,
    /// `coker(d_{n+1})`, the subgroup in the short exact sequence.
    pub sub: Option<FgGroup>,
    /// `ker(d_n)`, the quotient.
    pub quot: Option<FgGroup>,
    pub candidates: Vec<FgGroup>,
    pub status: Status,
}

impl DegreeResult {
    fn insufficient(degree: i64) -> Self {
        DegreeResult {
            degree,
            sub: None,
            quot: None,
            candidates: Vec::new(),
            status: Status::InsufficientData,
        }
    }

    fn solved(degree: i64, sub: FgGroup, quot: FgGroup) -> Result<Self, WangError> {
        let answer = enumerate_extensions(&ExtensionProblem::new(sub.clone(), quot.clone()));
        let status = if answer.candidates.len() > 1 {
            Status::Ambiguous(answer.candidates.len())
        } else if !sub.is_zero() && !quot.is_zero() && quot.is_free() {
            Status::SplitForced
        } else {
            Status::Unique
        };
        Ok(DegreeResult {
            degree,
            sub: Some(sub),
            quot: Some(quot),
            candidates: answer.candidates,
            status,
        })
    }

    /// The extension problem of this degree, when the data sufficed.
    pub fn extension_problem(&self) -> Option<ExtensionProblem> {
        Some(ExtensionProblem::new(self.sub.clone()?, self.quot.clone()?))
    }
}

fn hom_parts(p: &WangProblem, n: i64) -> Result<Option<(FgGroup, FgGroup)>, WangError> {
    let (Some(d_out), Some(d_in)) = (p.differential(n), p.differential(n + 1)) else {
        return Ok(None);
    };
    let inv_out = hom_invariants(&d_out).map_err(|source| WangError::Hom { degree: n, source })?;
    let inv_in = hom_invariants(&d_in).map_err(|source| WangError::Hom {
        degree: n + 1,
        source,
    })?;
    let ring = &p.localization;
    Ok(Some((
        localize(&inv_in.cokernel, ring),
        localize(&inv_out.kernel, ring),
    )))
}

/// Solves degree `n ≥ 1` of a homotopy problem.
pub fn solve_homotopy_degree(p: &WangProblem, n: i64) -> Result<DegreeResult, WangError> {
    if p.grading() != Grading::Homotopy {
        return Err(WangError::WrongGrading {
            expected: Grading::Homotopy,
        });
    }
    if n < 1 {
        return Err(WangError::DegreeBelowOne(n));
    }
    match hom_parts(p, n)? {
        Some((sub, quot)) => DegreeResult::solved(n, sub, quot),
        None => Ok(DegreeResult::insufficient(n)),
    }
}

/// Every degree `max(1, q_min) ≤ n ≤ q_max − k`, in order.
pub fn solve_homotopy_range(p: &WangProblem) -> Result<Vec<DegreeResult>, WangError> {
    let Some((q_min, q_max)) = p.range() else {
        return Err(WangError::WrongGrading {
            expected: Grading::Homotopy,
        });
    };
    (q_min.max(1)..=q_max - p.k as i64)
        .map(|n| solve_homotopy_degree(p, n))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTheoryResult {
    pub k0: DegreeResult,
    pub k1: DegreeResult,
}

/// Both K-groups of the section algebra.
pub fn solve_ktheory(p: &WangProblem) -> Result<KTheoryResult, WangError> {
    if p.grading() != Grading::KTheory {
        return Err(WangError::WrongGrading {
            expected: Grading::KTheory,
        });
    }
    let solve = |n: i64| -> Result<DegreeResult, WangError> {
        let (sub, quot) = hom_parts(p, n)?.expect("K-theory coefficients are total");
        DegreeResult::solved(n, sub, quot)
    };
    Ok(KTheoryResult {
        k0: solve(0)?,
        k1: solve(1)?,
    })
}

/// Differential of a bundle over `S³` with Dixmier–Douady integer `delta`:
/// multiplication by `−delta` on `K₀` and on `K₁`. Its sign never changes the
/// solved groups.
pub fn d3_from_dixmier_douady(delta: i64, k0: &FgGroup, k1: &FgGroup) -> [GroupHom; 2] {
    [
        GroupHom::scalar(k0.clone(), -delta),
        GroupHom::scalar(k1.clone(), -delta),
    ]
}

/// What the even-`k`, `K₁(B) = 0` case forces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvenSphereCheck {
    pub k1_is_zero: bool,
    /// `0 → K_k(B) → K₀(A) → K₀(B) → 0`
    pub ses: ExtensionProblem,
}

/// For even `k` and `K₁(B) = 0`, the sequence collapses to `K₁(A) = 0` and
/// `0 → K₀(B) → K₀(A) → K₀(B) → 0`. Returns that conclusion after checking it
/// against [`solve_ktheory`], or `None` when the hypotheses fail.
pub fn easy_thom_check(p: &WangProblem) -> Result<Option<EvenSphereCheck>, WangError> {
    if p.grading() != Grading::KTheory {
        return Err(WangError::WrongGrading {
            expected: Grading::KTheory,
        });
    }
    let ring = &p.localization;
    let k0 = localize(p.coefficient(0).expect("total"), ring);
    let k1 = localize(p.coefficient(1).expect("total"), ring);
    if !p.k.is_multiple_of(2) || !k1.is_zero() {
        return Ok(None);
    }
    let check = EvenSphereCheck {
        k1_is_zero: true,
        ses: ExtensionProblem::new(k0.clone(), k0),
    };
    let solved = solve_ktheory(p)?;
    if solved.k1.candidates != vec![FgGroup::zero()] {
        return Err(WangError::Inconsistent(format!(
            "K1 of the section algebra should vanish, solver found {:?}",
            solved.k1.candidates
        )));
    }
    if solved.k0.extension_problem().as_ref() != Some(&check.ses) {
        return Err(WangError::Inconsistent(
            "K0 extension problem differs from (K0(B), K0(B))".to_owned(),
        ));
    }
    Ok(Some(check))
}

/// Tensors every coefficient group and differential with `ring`.
pub fn localize_problem(p: &WangProblem, ring: &LocalizationRing) -> WangProblem {
    let data = match &p.data {
        Data::Homotopy {
            q_min,
            groups,
            differential,
        } => Data::Homotopy {
            q_min: *q_min,
            groups: groups.iter().map(|g| localize(g, ring)).collect(),
            differential: differential
                .iter()
                .map(|(n, h)| (*n, localize_hom(h, ring)))
                .collect(),
        },
        Data::KTheory { k, d } => Data::KTheory {
            k: [localize(&k[0], ring), localize(&k[1], ring)],
            d: [
                d[0].as_ref().map(|h| localize_hom(h, ring)),
                d[1].as_ref().map(|h| localize_hom(h, ring)),
            ],
        },
    };
    WangProblem {
        k: p.k,
        data,
        localization: p.localization.join(ring),
    }
}
