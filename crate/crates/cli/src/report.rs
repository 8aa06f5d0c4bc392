//! Solver reports and their two renderings.
//!
//! The table rendering is line-oriented and parses back into the same
//! [`Report`], so `--format table` and `--format json` carry identical data.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use wang_core::wang::{DegreeResult, Status};
use wang_core::FgGroup;

/// Groups travel as their display strings (`ℤ ⊕ ℤ/2`, `(ℤ/2)³`).
mod display {
    use serde::{Deserialize, Deserializer, Serializer};
    use wang_core::FgGroup;

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(g: &Option<FgGroup>, s: S) -> Result<S::Ok, S::Error> {
            match g {
                Some(g) => s.collect_str(g),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<FgGroup>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|t| t.parse().map_err(serde::de::Error::custom))
                .transpose()
        }
    }

    pub mod list {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(gs: &[FgGroup], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(gs.len()))?;
            for g in gs {
                seq.serialize_element(&g.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<FgGroup>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|t| t.parse().map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

mod status {
    use serde::{Deserialize, Deserializer, Serializer};
    use wang_core::wang::Status;

    pub fn serialize<S: Serializer>(st: &Status, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(st)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Status, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// One degree of a homotopy report, or one parity of a K-theory report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub n: i64,
    #[serde(with = "display::option")]
    pub sub: Option<FgGroup>,
    #[serde(with = "display::option")]
    pub quot: Option<FgGroup>,
    #[serde(with = "display::list")]
    pub candidates: Vec<FgGroup>,
    #[serde(with = "status")]
    pub status: Status,
}

impl From<&DegreeResult> for Record {
    fn from(r: &DegreeResult) -> Self {
        Record {
            n: r.degree,
            sub: r.sub.clone(),
            quot: r.quot.clone(),
            candidates: r.candidates.clone(),
            status: r.status,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRecords {
    #[serde(rename = "K0")]
    pub k0: Record,
    #[serde(rename = "K1")]
    pub k1: Record,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub kind: String,
    pub k: u32,
    pub localization: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degrees: Vec<Record>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ktheory: Option<KRecords>,
    pub notes: Vec<String>,
}

const HEADER: &str = "n | sub | quot | candidates | status";
const NONE: &str = "-";

fn cell(g: &Option<FgGroup>) -> String {
    g.as_ref()
        .map_or_else(|| NONE.to_owned(), FgGroup::to_string)
}

fn row(label: &str, r: &Record) -> String {
    let candidates = if r.candidates.is_empty() {
        NONE.to_owned()
    } else {
        r.candidates
            .iter()
            .map(FgGroup::to_string)
            .collect::<Vec<_>>()
            .join(" or ")
    };
    format!(
        "{label} | {} | {} | {candidates} | {}",
        cell(&r.sub),
        cell(&r.quot),
        r.status
    )
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "kind: {}", self.kind);
        let _ = writeln!(out, "k: {}", self.k);
        let _ = writeln!(out, "localization: {}", self.localization);
        let _ = writeln!(out, "{HEADER}");
        for r in &self.degrees {
            let _ = writeln!(out, "{}", row(&r.n.to_string(), r));
        }
        if let Some(kr) = &self.ktheory {
            let _ = writeln!(out, "{}", row("K0", &kr.k0));
            let _ = writeln!(out, "{}", row("K1", &kr.k1));
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }

    /// Inverse of [`Report::to_table`].
    pub fn from_table(text: &str) -> Result<Report, String> {
        let mut lines = text.lines();
        let mut field = |name: &str| -> Result<String, String> {
            let line = lines.next().ok_or_else(|| format!("missing {name} line"))?;
            line.strip_prefix(&format!("{name}: "))
                .map(str::to_owned)
                .ok_or_else(|| format!("expected {name:?}, found {line:?}"))
        };
        let kind = field("kind")?;
        let k = field("k")?.parse().map_err(|e| format!("k: {e}"))?;
        let localization = field("localization")?;
        match lines.next() {
            Some(HEADER) => {}
            other => return Err(format!("expected column header, found {other:?}")),
        }
        let mut report = Report {
            kind,
            k,
            localization,
            degrees: Vec::new(),
            ktheory: None,
            notes: Vec::new(),
        };
        let mut k_rows = Vec::new();
        for line in lines {
            if let Some(note) = line.strip_prefix("note: ") {
                report.notes.push(note.to_owned());
                continue;
            }
            let cols: Vec<&str> = line.split(" | ").collect();
            let [label, sub, quot, candidates, status] = cols[..] else {
                return Err(format!("malformed row {line:?}"));
            };
            let group = |t: &str| -> Result<Option<FgGroup>, String> {
                if t == NONE {
                    Ok(None)
                } else {
                    t.parse().map(Some).map_err(|e| format!("{t:?}: {e}"))
                }
            };
            let candidates = if candidates == NONE {
                Vec::new()
            } else {
                candidates
                    .split(" or ")
                    .map(|t| t.parse().map_err(|e| format!("{t:?}: {e}")))
                    .collect::<Result<_, _>>()?
            };
            let (n, is_k) = match label {
                "K0" => (0, true),
                "K1" => (1, true),
                _ => (
                    label.parse().map_err(|e| format!("n {label:?}: {e}"))?,
                    false,
                ),
            };
            let record = Record {
                n,
                sub: group(sub)?,
                quot: group(quot)?,
                candidates,
                status: status.parse()?,
            };
            if is_k {
                k_rows.push(record);
            } else {
                report.degrees.push(record);
            }
        }
        match <[Record; 2]>::try_from(k_rows) {
            Ok([k0, k1]) => report.ktheory = Some(KRecords { k0, k1 }),
            Err(rows) if rows.is_empty() => {}
            Err(rows) => return Err(format!("expected K0 and K1 rows, found {}", rows.len())),
        }
        Ok(report)
    }
}
