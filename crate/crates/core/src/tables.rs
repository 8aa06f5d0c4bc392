//! Built-in coefficient data: `π_n(U(2))` for `1 ≤ n ≤ 12`, the Samelson
//! pairing `[ι, −]` that gives the Wang differential of the quaternionic Hopf
//! bundle `S⁷ → S⁴`, and K-theory of the standard fibres.
//!
//! The data lives in `data/u2_tables.json`, one row per group or product, each
//! with its literature source.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::group::FgGroup;
use crate::hom::GroupHom;
use crate::matrix::IntMatrix;
use crate::wang::WangProblem;

const DOCUMENT: &str = include_str!("../data/u2_tables.json");

/// Range covered by [`u2_homotopy`].
pub const U2_RANGE: (i64, i64) = (1, 12);
/// Range covered by [`hopf_samelson_d4`].
pub const PAIRING_RANGE: (i64, i64) = (1, 9);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TablesError {
    #[error("degree {degree} outside the tabulated range {lo}..={hi}")]
    OutOfRange { degree: i64, lo: i64, hi: i64 },
    #[error("unknown algebra {0:?}; expected complex-numbers, compacts or matrix(n)")]
    UnknownAlgebra(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedGenerator {
    #[serde(default)]
    pub degree: i64,
    pub label: String,
    /// `None` for infinite order.
    pub order: Option<u64>,
}

#[derive(Deserialize)]
struct GroupRow {
    degree: i64,
    group: FgGroup,
    generators: Vec<NamedGenerator>,
    source: String,
}

#[derive(Deserialize)]
struct PairingRow {
    source_degree: i64,
    matrix: Vec<Vec<i64>>,
    value: String,
    source: String,
}

#[derive(Deserialize)]
struct Document {
    u2_homotopy: Vec<GroupRow>,
    samelson_pairing: Vec<PairingRow>,
}

/// One tabulated `[ι, −] : π_n(U(2)) → π_{n+3}(U(2))`.
#[derive(Clone, Debug)]
pub struct PairingEntry {
    pub hom: GroupHom,
    pub value: String,
    pub source: String,
}

/// `[ι, −]` by source degree.
pub type PairingTable = BTreeMap<i64, PairingEntry>;

struct Tables {
    groups: BTreeMap<i64, (FgGroup, Vec<NamedGenerator>, String)>,
    pairing: PairingTable,
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let doc: Document = serde_json::from_str(DOCUMENT).expect("embedded table document parses");
        let groups: BTreeMap<_, _> = doc
            .u2_homotopy
            .into_iter()
            .map(|r| {
                let gens = r
                    .generators
                    .into_iter()
                    .map(|g| NamedGenerator {
                        degree: r.degree,
                        ..g
                    })
                    .collect();
                (r.degree, (r.group, gens, r.source))
            })
            .collect();
        let pairing = doc
            .samelson_pairing
            .into_iter()
            .map(|r| {
                let n = r.source_degree;
                let source = groups[&n].0.clone();
                let target = groups[&(n + 3)].0.clone();
                let cols = r.matrix.first().map_or(0, Vec::len);
                let matrix = IntMatrix::from_rows(&r.matrix, cols).expect("rectangular matrix");
                let hom = GroupHom::new(source, target, matrix)
                    .expect("tabulated pairing is well-defined");
                (
                    n,
                    PairingEntry {
                        hom,
                        value: r.value,
                        source: r.source,
                    },
                )
            })
            .collect();
        Tables { groups, pairing }
    })
}

fn check_range(n: i64, (lo, hi): (i64, i64)) -> Result<(), TablesError> {
    if (lo..=hi).contains(&n) {
        Ok(())
    } else {
        Err(TablesError::OutOfRange { degree: n, lo, hi })
    }
}

/// `π_n(U(2))` for `1 ≤ n ≤ 12`.
pub fn u2_homotopy(n: i64) -> Result<FgGroup, TablesError> {
    check_range(n, U2_RANGE)?;
    Ok(tables().groups[&n].0.clone())
}

/// Named generators of `π_n(U(2))`; empty where the group is 0 or unnamed.
pub fn u2_generators(n: i64) -> Result<Vec<NamedGenerator>, TablesError> {
    check_range(n, U2_RANGE)?;
    Ok(tables().groups[&n].1.clone())
}

/// Literature source for `π_n(U(2))`.
pub fn u2_source(n: i64) -> Result<&'static str, TablesError> {
    check_range(n, U2_RANGE)?;
    Ok(&tables().groups[&n].2)
}

/// `[ι, −] : π_n(U(2)) → π_{n+3}(U(2))` for `1 ≤ n ≤ 9`.
///
/// The Hopf bundle's clutching map is `ι` itself, so this is the Wang
/// differential `d₄(a) = −g[ι, a]` up to a sign that does not affect any
/// kernel or cokernel. The sign is not applied.
pub fn hopf_samelson_d4(n: i64) -> Result<GroupHom, TablesError> {
    check_range(n, PAIRING_RANGE)?;
    Ok(tables().pairing[&n].hom.clone())
}

pub fn pairing_table() -> &'static PairingTable {
    &tables().pairing
}

/// `(K₀, K₁)` of `ℂ`, `M_n(ℂ)` or the compact operators. All are `(ℤ, 0)`.
///
/// Accepted names: `complex-numbers`, `compacts`, `matrix(n)` with `n ≥ 1`.
pub fn k_coefficients(name: &str) -> Result<(FgGroup, FgGroup), TablesError> {
    let name = name.trim();
    let known = match name {
        "complex-numbers" | "compacts" => true,
        _ => name
            .strip_prefix("matrix(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|n| n.trim().parse::<u64>().ok())
            .is_some_and(|n| n >= 1),
    };
    if known {
        Ok((FgGroup::free(1), FgGroup::zero()))
    } else {
        Err(TablesError::UnknownAlgebra(name.to_owned()))
    }
}

/// The bundle `S⁷ ×_{S³} M₂ → S⁴`: `k = 4`, coefficients `π_q(U(2))` for
/// `1 ≤ q ≤ 12`, differential the tabulated pairing.
pub fn build_hopf_m2_problem() -> WangProblem {
    let groups = (U2_RANGE.0..=U2_RANGE.1)
        .map(|n| u2_homotopy(n).expect("in range"))
        .collect();
    let differential = pairing_table()
        .iter()
        .map(|(n, e)| (*n, e.hom.clone()))
        .collect();
    WangProblem::homotopy(4, U2_RANGE.0, groups, differential).expect("builtin problem is valid")
}

/// K-theory version of the same bundle: `k = 4` with `K_*(M₂) = (ℤ, 0)`. The
/// differential `K₀ → K₁` has zero target.
pub fn build_hopf_m2_ktheory_problem() -> WangProblem {
    let (k0, k1) = k_coefficients("matrix(2)").expect("known algebra");
    WangProblem::ktheory(4, k0, k1, [None, None]).expect("builtin problem is valid")
}

/// `ν′ = 3·a₆` as an element of `π₆(U(2)) = ℤ/12` with `a₆ ↦ 1`.
pub fn nu_prime() -> BigInt {
    BigInt::from(3)
}
