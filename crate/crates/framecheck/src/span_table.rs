//! Allowable-span lookup tables for joists and rafters.
//!
//! Tables are external configuration keyed by cross-section in millimeters
//! (`"WxD"`, e.g. `"38x235"`). Production users supply code-book derived
//! tables; a documented fixture table ships for tests and the bundled
//! generator.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A lumber cross-section in millimeters, stored small-side first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SectionKey {
    pub width_mm: u32,
    pub depth_mm: u32,
}

impl SectionKey {
    pub fn new(width_mm: u32, depth_mm: u32) -> Self {
        Self {
            width_mm: width_mm.min(depth_mm),
            depth_mm: width_mm.max(depth_mm),
        }
    }
}

impl fmt::Display for SectionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width_mm, self.depth_mm)
    }
}

#[derive(Debug, Error)]
pub enum SpanTableError {
    #[error("failed to read span table: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed span table: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("bad section key {key:?}: expected \"WxD\" in millimeters")]
    BadKey { key: String },
    #[error("span for {key} must be positive, got {span}")]
    NonPositiveSpan { key: String, span: f64 },
}

/// Lookup from cross-section to allowable clear span in meters.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpanTable {
    pub joist_spans: BTreeMap<SectionKey, f64>,
    pub rafter_spans: BTreeMap<SectionKey, f64>,
}

#[derive(Serialize, Deserialize)]
struct SpanTableDocument {
    joist: BTreeMap<String, f64>,
    rafter: BTreeMap<String, f64>,
}

fn parse_key(key: &str) -> Result<SectionKey, SpanTableError> {
    let bad = || SpanTableError::BadKey { key: key.to_string() };
    let (w, d) = key.split_once('x').ok_or_else(bad)?;
    let w: u32 = w.trim().parse().map_err(|_| bad())?;
    let d: u32 = d.trim().parse().map_err(|_| bad())?;
    Ok(SectionKey::new(w, d))
}

fn parse_map(raw: BTreeMap<String, f64>) -> Result<BTreeMap<SectionKey, f64>, SpanTableError> {
    let mut out = BTreeMap::new();
    for (key, span) in raw {
        if span <= 0.0 || !span.is_finite() {
            return Err(SpanTableError::NonPositiveSpan { key, span });
        }
        out.insert(parse_key(&key)?, span);
    }
    Ok(out)
}

impl SpanTable {
    pub fn from_json(bytes: &[u8]) -> Result<Self, SpanTableError> {
        let doc: SpanTableDocument = serde_json::from_slice(bytes)?;
        Ok(Self {
            joist_spans: parse_map(doc.joist)?,
            rafter_spans: parse_map(doc.rafter)?,
        })
    }

    pub fn from_path(path: &Path) -> Result<Self, SpanTableError> {
        Self::from_json(&std::fs::read(path)?)
    }

    pub fn to_json(&self) -> Vec<u8> {
        let doc = SpanTableDocument {
            joist: self
                .joist_spans
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            rafter: self
                .rafter_spans
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
        };
        let mut bytes = serde_json::to_vec_pretty(&doc).expect("span table serialization");
        bytes.push(b'\n');
        bytes
    }

    /// The fixture table used by the test suite and the bundled generator.
    /// Values are deliberately conservative; they are not code-book data.
    pub fn fixture() -> Self {
        let entries = [
            ((38, 89), 1.4),
            ((38, 140), 2.2),
            ((38, 184), 3.0),
            ((38, 235), 4.2),
            ((38, 286), 4.6),
            ((89, 89), 2.0),
            ((140, 140), 3.4),
        ];
        let map: BTreeMap<SectionKey, f64> = entries
            .iter()
            .map(|&((w, d), s)| (SectionKey::new(w, d), s))
            .collect();
        Self {
            joist_spans: map.clone(),
            rafter_spans: map,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let table = SpanTable::fixture();
        let bytes = table.to_json();
        let reparsed = SpanTable::from_json(&bytes).unwrap();
        assert_eq!(table, reparsed);
        assert_eq!(
            table.joist_spans[&SectionKey::new(38, 235)],
            4.2,
            "fixture anchor entry"
        );
    }

    #[test]
    fn rejects_bad_keys_and_spans() {
        assert!(matches!(
            SpanTable::from_json(br#"{"joist": {"38by235": 4.2}, "rafter": {}}"#),
            Err(SpanTableError::BadKey { .. })
        ));
        assert!(matches!(
            SpanTable::from_json(br#"{"joist": {"38x235": -1.0}, "rafter": {}}"#),
            Err(SpanTableError::NonPositiveSpan { .. })
        ));
    }

    #[test]
    fn key_normalizes_small_side_first() {
        assert_eq!(SectionKey::new(235, 38), SectionKey::new(38, 235));
        assert_eq!(SectionKey::new(38, 235).to_string(), "38x235");
    }
}
