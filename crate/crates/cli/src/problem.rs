//! Problem files read by `wang solve`.
//!
//! ```json
//! {"kind": "homotopy", "k": 4,
//!  "coefficients": {"q_min": 1, "q_max": 12, "groups": ["1,[]", "0,[]", …]},
//!  "differential": {"builtin": "hopf-su2-m2"},
//!  "localize": {"invert": [2, 3]}}
//! ```
//!
//! K-theory files use `{"K0": …, "K1": …}` or `{"algebra": "matrix(2)"}` as
//! coefficients and `{"dixmier_douady": Δ}` (with `k = 3`) or an entry list as
//! differential. A bare `{"builtin": "hopf-su2-m2"}` names a whole problem.
//! Every schema or validation failure carries the key path it came from.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;
use wang_core::tables::{self, PAIRING_RANGE};
use wang_core::wang::{d3_from_dixmier_douady, WangError, WangProblem};
use wang_core::{FgGroup, GroupHom, HomError, IntMatrix, LocalizationRing};

pub const HOPF_BUILTIN: &str = "hopf-su2-m2";
pub const HOPF_KTHEORY_BUILTIN: &str = "hopf-su2-m2-ktheory";

/// A schema or validation failure at a key path such as `differential[2].matrix`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl SchemaError {
    pub fn new(path: impl Into<String>, message: impl fmt::Display) -> Self {
        SchemaError {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for SchemaError {}

fn join(prefix: &str, inner: &str) -> String {
    match (prefix.is_empty(), inner.is_empty() || inner == ".") {
        (_, true) => prefix.to_owned(),
        (true, false) => inner.to_owned(),
        (false, false) if inner.starts_with('[') => format!("{prefix}{inner}"),
        (false, false) => format!("{prefix}.{inner}"),
    }
}

/// Deserializes `value`, reporting failures at `prefix` + the inner key path.
fn typed<T: DeserializeOwned>(value: Value, prefix: &str) -> Result<T, SchemaError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        SchemaError::new(join(prefix, &inner), e.into_inner())
    })
}

/// Parses a problem document from JSON text.
pub fn parse(text: &str) -> Result<ProblemFile, SchemaError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: Value = serde_path_to_error::deserialize(&mut de)
        .map_err(|e| SchemaError::new("", format!("malformed JSON: {}", e.into_inner())))?;
    if !value.is_object() {
        return Err(SchemaError::new(
            "",
            "problem document must be a JSON object",
        ));
    }
    typed(value, "")
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default)]
    pub builtin: Option<String>,
    #[serde(default)]
    pub kind: Option<Kind>,
    #[serde(default)]
    pub k: Option<u32>,
    #[serde(default)]
    pub localize: Option<Localize>,
    #[serde(default)]
    pub coefficients: Option<Value>,
    #[serde(default)]
    pub differential: Option<Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Homotopy,
    Ktheory,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Localize {
    pub invert: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HomotopyCoefficients {
    q_min: i64,
    q_max: i64,
    groups: Vec<FgGroup>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KCoefficients {
    #[serde(rename = "K0", default)]
    k0: Option<FgGroup>,
    #[serde(rename = "K1", default)]
    k1: Option<FgGroup>,
    #[serde(default)]
    algebra: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Rule {
    #[serde(default)]
    builtin: Option<String>,
    #[serde(default)]
    dixmier_douady: Option<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    degree: i64,
    matrix: Vec<Vec<i64>>,
}

/// `"all"` or a list of primes.
pub fn parse_ring(value: Value, path: &str) -> Result<LocalizationRing, SchemaError> {
    match value {
        Value::String(s) if s == "all" => Ok(LocalizationRing::rationals()),
        Value::String(s) => Err(SchemaError::new(
            path,
            format!("expected \"all\" or a list of primes, found {s:?}"),
        )),
        other => {
            let primes: Vec<u64> = typed(other, path)?;
            LocalizationRing::inverting(primes).map_err(|e| SchemaError::new(path, e))
        }
    }
}

/// A validated problem plus provenance notes for the built-in data it uses.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub problem: WangProblem,
    pub provenance: Vec<String>,
}

/// Notes attached whenever the tabulated Samelson differential is used.
pub fn hopf_provenance(from: i64, to: i64) -> Vec<String> {
    let mut notes = vec![
        "differential d₄(a) = −g[ι, a] for the quaternionic Hopf bundle S⁷ → S⁴, whose clutching map is ι; the sign never changes a kernel or cokernel, so the tabulated [ι, a] is used as is".to_owned(),
    ];
    for (n, e) in tables::pairing_table().range(from..=to) {
        notes.push(format!("[ι, −] on π_{n}(U(2)): {} ({})", e.value, e.source));
    }
    notes
}

fn hopf_coefficient_note() -> String {
    "coefficients π_q(U(2)) for 1 ≤ q ≤ 12 from the built-in table (sources in `wang tables u2`)"
        .to_owned()
}

fn dixmier_douady_note(delta: i64) -> String {
    format!(
        "d₃ is multiplication by −Δ with Δ = {delta}, following Rosenberg for continuous-trace algebras over S³; the sign never changes the answer"
    )
}

fn wang_error(e: WangError, differential_path: &str) -> SchemaError {
    match &e {
        WangError::DifferentialType { .. }
        | WangError::DifferentialOutOfRange { .. }
        | WangError::DifferentialIllDefined { .. }
        | WangError::Hom { .. } => SchemaError::new(differential_path, e),
        WangError::SphereTooSmall(_) => SchemaError::new("k", e),
        WangError::EmptyRange => SchemaError::new("coefficients.groups", e),
        _ => SchemaError::new("", e),
    }
}

impl ProblemFile {
    /// Validates the document. `localize` overrides the file's own setting.
    pub fn build(self, localize: Option<LocalizationRing>) -> Result<Loaded, SchemaError> {
        let file_ring = match self.localize {
            Some(l) => Some(parse_ring(l.invert, "localize.invert")?),
            None => None,
        };
        let ring = localize.or(file_ring).unwrap_or_default();
        let mut loaded = if let Some(name) = &self.builtin {
            for (key, present) in [
                ("kind", self.kind.is_some()),
                ("k", self.k.is_some()),
                ("coefficients", self.coefficients.is_some()),
                ("differential", self.differential.is_some()),
            ] {
                if present {
                    return Err(SchemaError::new(
                        key,
                        "not allowed together with a top-level builtin",
                    ));
                }
            }
            builtin_problem(name)?
        } else {
            let kind = self.kind.ok_or_else(|| {
                SchemaError::new("kind", "missing; expected \"homotopy\" or \"ktheory\"")
            })?;
            let k = self.k.ok_or_else(|| SchemaError::new("k", "missing"))?;
            let coefficients = self
                .coefficients
                .ok_or_else(|| SchemaError::new("coefficients", "missing"))?;
            match kind {
                Kind::Homotopy => build_homotopy(k, coefficients, self.differential)?,
                Kind::Ktheory => build_ktheory(k, coefficients, self.differential)?,
            }
        };
        loaded.problem = loaded.problem.with_localization(ring);
        Ok(loaded)
    }
}

pub fn builtin_problem(name: &str) -> Result<Loaded, SchemaError> {
    match name {
        HOPF_BUILTIN => {
            let mut provenance = vec![hopf_coefficient_note()];
            provenance.extend(hopf_provenance(PAIRING_RANGE.0, PAIRING_RANGE.1));
            Ok(Loaded {
                problem: tables::build_hopf_m2_problem(),
                provenance,
            })
        }
        HOPF_KTHEORY_BUILTIN => Ok(Loaded {
            problem: tables::build_hopf_m2_ktheory_problem(),
            provenance: vec![
                "K_*(M₂) = (ℤ, 0) by Morita invariance; with K₁ = 0 every differential vanishes"
                    .to_owned(),
            ],
        }),
        other => Err(SchemaError::new(
            "builtin",
            format!(
                "unknown builtin {other:?}; expected {HOPF_BUILTIN:?} or {HOPF_KTHEORY_BUILTIN:?}"
            ),
        )),
    }
}

fn matrix_for(
    rows: &[Vec<i64>],
    source: &FgGroup,
    target: &FgGroup,
    path: &str,
) -> Result<IntMatrix, SchemaError> {
    let (r, c) = (target.generator_count(), source.generator_count());
    let shape_ok = rows.len() == r && rows.iter().all(|row| row.len() == c);
    if !shape_ok {
        return Err(SchemaError::new(
            path,
            format!(
                "expected a {r}×{c} matrix (rows: generators of {target}, columns: generators of {source})"
            ),
        ));
    }
    Ok(IntMatrix::from_rows(rows, c).expect("shape checked"))
}

fn entry_hom(
    e: &Entry,
    source: &FgGroup,
    target: &FgGroup,
    path: &str,
) -> Result<GroupHom, SchemaError> {
    let matrix = matrix_for(&e.matrix, source, target, &format!("{path}.matrix"))?;
    GroupHom::new(source.clone(), target.clone(), matrix).map_err(|err| match err {
        HomError::IllDefined { .. } => SchemaError::new(
            format!("{path}.matrix"),
            format!("not a homomorphism: {err}"),
        ),
        other => SchemaError::new(format!("{path}.matrix"), other),
    })
}

fn build_homotopy(
    k: u32,
    coefficients: Value,
    differential: Option<Value>,
) -> Result<Loaded, SchemaError> {
    let c: HomotopyCoefficients = typed(coefficients, "coefficients")?;
    if c.q_max < c.q_min {
        return Err(SchemaError::new(
            "coefficients.q_max",
            "must be at least q_min",
        ));
    }
    let expected = (c.q_max - c.q_min + 1) as usize;
    if c.groups.len() != expected {
        return Err(SchemaError::new(
            "coefficients.groups",
            format!(
                "expected {expected} groups for q = {}..={}, found {}",
                c.q_min,
                c.q_max,
                c.groups.len()
            ),
        ));
    }
    let coefficient = |q: i64| -> Option<&FgGroup> {
        usize::try_from(q - c.q_min)
            .ok()
            .and_then(|i| c.groups.get(i))
    };
    let mut provenance = Vec::new();
    let mut maps: BTreeMap<i64, GroupHom> = BTreeMap::new();
    let mut path = "differential".to_owned();
    match differential {
        None => {}
        Some(Value::Array(items)) => {
            let entries: Vec<Entry> = typed(Value::Array(items), "differential")?;
            for (i, e) in entries.iter().enumerate() {
                let here = format!("differential[{i}]");
                let (Some(s), Some(t)) =
                    (coefficient(e.degree), coefficient(e.degree + k as i64 - 1))
                else {
                    return Err(SchemaError::new(
                        format!("{here}.degree"),
                        format!(
                            "degree {} needs coefficients at {} and {}",
                            e.degree,
                            e.degree,
                            e.degree + k as i64 - 1
                        ),
                    ));
                };
                if maps.insert(e.degree, entry_hom(e, s, t, &here)?).is_some() {
                    return Err(SchemaError::new(
                        format!("{here}.degree"),
                        "duplicate degree",
                    ));
                }
            }
        }
        Some(other) => {
            let rule: Rule = typed(other, "differential")?;
            if rule.dixmier_douady.is_some() {
                return Err(SchemaError::new(
                    "differential.dixmier_douady",
                    "only valid for kind \"ktheory\" with k = 3",
                ));
            }
            match rule.builtin.as_deref() {
                Some(HOPF_BUILTIN) => {
                    path = "differential.builtin".to_owned();
                    if k != 4 {
                        return Err(SchemaError::new(
                            &path,
                            format!("{HOPF_BUILTIN} needs k = 4, found k = {k}"),
                        ));
                    }
                    let (lo, hi) = (
                        c.q_min.max(PAIRING_RANGE.0),
                        (c.q_max - 3).min(PAIRING_RANGE.1),
                    );
                    for n in lo..=hi {
                        let hom = tables::hopf_samelson_d4(n).expect("in range");
                        maps.insert(n, hom);
                    }
                    provenance = hopf_provenance(lo, hi);
                }
                Some(other) => {
                    return Err(SchemaError::new(
                        "differential.builtin",
                        format!("unknown builtin {other:?}; expected {HOPF_BUILTIN:?}"),
                    ))
                }
                None => {
                    return Err(SchemaError::new(
                        "differential",
                        "expected an entry list or a builtin rule",
                    ))
                }
            }
        }
    }
    let problem =
        WangProblem::homotopy(k, c.q_min, c.groups, maps).map_err(|e| wang_error(e, &path))?;
    Ok(Loaded {
        problem,
        provenance,
    })
}

fn build_ktheory(
    k: u32,
    coefficients: Value,
    differential: Option<Value>,
) -> Result<Loaded, SchemaError> {
    let c: KCoefficients = typed(coefficients, "coefficients")?;
    let mut provenance = Vec::new();
    let (k0, k1) = match (c.k0, c.k1, c.algebra) {
        (Some(k0), Some(k1), None) => (k0, k1),
        (None, None, Some(name)) => {
            let groups = tables::k_coefficients(&name)
                .map_err(|e| SchemaError::new("coefficients.algebra", e))?;
            provenance.push(format!(
                "K_*({}) = ({}, {}) by Morita invariance",
                name.trim(),
                groups.0,
                groups.1
            ));
            groups
        }
        (_, _, Some(_)) => {
            return Err(SchemaError::new(
                "coefficients.algebra",
                "give either K0 and K1 or algebra, not both",
            ))
        }
        (None, _, None) => return Err(SchemaError::new("coefficients.K0", "missing")),
        (_, None, None) => return Err(SchemaError::new("coefficients.K1", "missing")),
    };
    let groups = [k0.clone(), k1.clone()];
    let shift = ((k.max(1) - 1) % 2) as usize;
    let mut d: [Option<GroupHom>; 2] = [None, None];
    let mut path = "differential".to_owned();
    match differential {
        None => {}
        Some(Value::Array(items)) => {
            let entries: Vec<Entry> = typed(Value::Array(items), "differential")?;
            for (i, e) in entries.iter().enumerate() {
                let here = format!("differential[{i}]");
                let p = match e.degree {
                    0 => 0,
                    1 => 1,
                    other => {
                        return Err(SchemaError::new(
                            format!("{here}.degree"),
                            format!("K-theory degrees are 0 or 1, found {other}"),
                        ))
                    }
                };
                if d[p].is_some() {
                    return Err(SchemaError::new(
                        format!("{here}.degree"),
                        "duplicate degree",
                    ));
                }
                d[p] = Some(entry_hom(e, &groups[p], &groups[(p + shift) % 2], &here)?);
            }
        }
        Some(other) => {
            let rule: Rule = typed(other, "differential")?;
            match (rule.builtin.as_deref(), rule.dixmier_douady) {
                (None, Some(delta)) => {
                    path = "differential.dixmier_douady".to_owned();
                    if k != 3 {
                        return Err(SchemaError::new(
                            &path,
                            format!("needs k = 3, found k = {k}"),
                        ));
                    }
                    d = d3_from_dixmier_douady(delta, &k0, &k1).map(Some);
                    provenance.push(dixmier_douady_note(delta));
                }
                (Some(HOPF_BUILTIN), None) => {
                    path = "differential.builtin".to_owned();
                    if k != 4 {
                        return Err(SchemaError::new(
                            &path,
                            format!("{HOPF_BUILTIN} needs k = 4, found k = {k}"),
                        ));
                    }
                    if !k1.is_zero() {
                        return Err(SchemaError::new(
                            &path,
                            "the K-theory form of the Hopf rule is only tabulated for K₁ = 0",
                        ));
                    }
                    provenance.push(
                        "with K₁(B) = 0 every K-theory differential of the Hopf bundle vanishes"
                            .to_owned(),
                    );
                }
                (Some(other), None) => {
                    return Err(SchemaError::new(
                        "differential.builtin",
                        format!("unknown builtin {other:?}; expected {HOPF_BUILTIN:?}"),
                    ))
                }
                (Some(_), Some(_)) => {
                    return Err(SchemaError::new(
                        "differential",
                        "give either builtin or dixmier_douady, not both",
                    ))
                }
                (None, None) => {
                    return Err(SchemaError::new(
                        "differential",
                        "expected an entry list, a builtin or dixmier_douady",
                    ))
                }
            }
        }
    }
    let problem = WangProblem::ktheory(k, k0, k1, d).map_err(|e| wang_error(e, &path))?;
    Ok(Loaded {
        problem,
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use wang_core::wang::Grading;

    fn load(text: &str) -> Result<Loaded, SchemaError> {
        parse(text)?.build(None)
    }

    #[test]
    fn builtin_documents() {
        let l = load(r#"{"builtin": "hopf-su2-m2"}"#).unwrap();
        assert_eq!(l.problem, tables::build_hopf_m2_problem());
        assert!(l.provenance.iter().any(|n| n.contains("James")));
        let l = load(r#"{"builtin": "hopf-su2-m2", "localize": {"invert": "all"}}"#).unwrap();
        assert_eq!(l.problem.localization(), &LocalizationRing::rationals());
    }

    #[test]
    fn builtin_differential_matches_builtin_problem() {
        let groups: Vec<String> = (1..=12)
            .map(|n| format!("\"{}\"", tables::u2_homotopy(n).unwrap()))
            .collect();
        let text = format!(
            r#"{{"kind": "homotopy", "k": 4,
                "coefficients": {{"q_min": 1, "q_max": 12, "groups": [{}]}},
                "differential": {{"builtin": "hopf-su2-m2"}}}}"#,
            groups.join(", ")
        );
        assert_eq!(
            load(&text).unwrap().problem,
            tables::build_hopf_m2_problem()
        );
    }

    #[test]
    fn ktheory_forms() {
        let l = load(r#"{"kind": "ktheory", "k": 3, "coefficients": {"K0": "1,[]", "K1": "0,[]"}, "differential": {"dixmier_douady": 5}}"#).unwrap();
        assert_eq!(l.problem.grading(), Grading::KTheory);
        assert_eq!(
            l.problem.differential(0).unwrap(),
            GroupHom::scalar(FgGroup::free(1), -5)
        );
        let l = load(r#"{"kind": "ktheory", "k": 4, "coefficients": {"algebra": "compacts"}}"#)
            .unwrap();
        assert_eq!(l.problem.coefficient(0), Some(&FgGroup::free(1)));
        let l = load(r#"{"kind": "ktheory", "k": 2, "coefficients": {"K0": "ℤ", "K1": "ℤ/2"}, "differential": [{"degree": 1, "matrix": [[0]]}]}"#).unwrap();
        assert_eq!(
            l.problem.differential(1).unwrap().target(),
            &FgGroup::free(1)
        );
    }

    fn path_of(text: &str) -> String {
        load(text).unwrap_err().path
    }

    #[test]
    fn diagnostics_name_the_key() {
        assert_eq!(path_of(r#"{"k": 4, "coefficients": {}}"#), "kind");
        assert_eq!(
            path_of(
                r#"{"kind": "homotopy", "k": 4, "coefficients": {"q_min": 1, "q_max": 2, "groups": ["ℤ", "ℤ/x"]}}"#
            ),
            "coefficients.groups[1]"
        );
        assert_eq!(
            path_of(
                r#"{"kind": "homotopy", "k": 4, "coefficients": {"q_min": 1, "q_max": 3, "groups": ["ℤ"]}}"#
            ),
            "coefficients.groups"
        );
        assert_eq!(
            path_of(
                r#"{"kind": "homotopy", "k": 2, "coefficients": {"q_min": 1, "q_max": 2, "groups": ["ℤ", "ℤ/4"]}, "differential": [{"degree": 1, "matrix": [[1, 2]]}]}"#
            ),
            "differential[0].matrix"
        );
        assert_eq!(
            path_of(
                r#"{"kind": "homotopy", "k": 2, "coefficients": {"q_min": 1, "q_max": 2, "groups": ["ℤ/4", "ℤ"]}, "differential": [{"degree": 1, "matrix": [[1]]}]}"#
            ),
            "differential[0].matrix"
        );
        assert_eq!(
            path_of(
                r#"{"kind": "homotopy", "k": 2, "coefficients": {"q_min": 1, "q_max": 2, "groups": ["ℤ", "ℤ"]}, "differential": [{"degree": 2, "matrix": [[1]]}]}"#
            ),
            "differential[0].degree"
        );
        assert_eq!(
            path_of(
                r#"{"kind": "ktheory", "k": 4, "coefficients": {"K0": "ℤ", "K1": "0"}, "differential": {"dixmier_douady": 1}}"#
            ),
            "differential.dixmier_douady"
        );
        assert_eq!(
            path_of(r#"{"kind": "ktheory", "k": 4, "coefficients": {"algebra": "quaternions"}}"#),
            "coefficients.algebra"
        );
        assert_eq!(
            path_of(r#"{"builtin": "hopf-su2-m2", "localize": {"invert": [4]}}"#),
            "localize.invert"
        );
        assert_eq!(path_of(r#"{"builtin": "nope"}"#), "builtin");
        assert_eq!(path_of(r#"{"builtin": "hopf-su2-m2", "k": 4}"#), "k");
        assert_eq!(path_of(r#"{"kind": "cohomology"}"#), "kind");
        assert_eq!(
            path_of(
                r#"{"kind": "homotopy", "k": 1, "coefficients": {"q_min": 1, "q_max": 1, "groups": ["ℤ"]}}"#
            ),
            "k"
        );
        assert_eq!(path_of(r#"{"extra": 1}"#), "extra");
    }

    #[test]
    fn malformed_json_is_reported() {
        let e = parse("{\"kind\": ").unwrap_err();
        assert!(e.message.starts_with("malformed JSON"));
        assert!(parse("[1, 2]").is_err());
    }
}
