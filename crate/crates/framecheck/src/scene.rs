//! Structural scene model: member taxonomy, scene files, and naming rules.
//!
//! A scene is an ordered list of named members, each an axis-aligned box in
//! world meters, optionally accompanied by building metadata. Member names
//! must start with their taxonomy prefix (case-sensitive); categories may
//! also be stored explicitly, in which case they must agree with the
//! name-derived one.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Axis, Box3, GeomError};

/// Construction phase a category belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Foundation,
    Floor,
    Walls,
    Roof,
}

macro_rules! taxonomy {
    ($(($variant:ident, $phase:ident)),+ $(,)?) => {
        /// The 19 member categories, grouped by construction phase.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum Category {
            $($variant,)+
        }

        impl Category {
            /// Every category, in build-order listing.
            pub const ALL: &'static [Category] = &[$(Category::$variant,)+];

            /// The name prefix enforced on members of this category.
            pub fn prefix(self) -> &'static str {
                match self {
                    $(Category::$variant => stringify!($variant),)+
                }
            }

            /// The construction phase this category belongs to.
            pub fn phase(self) -> Phase {
                match self {
                    $(Category::$variant => Phase::$phase,)+
                }
            }
        }
    };
}

taxonomy![
    (Sill, Foundation),
    (BeamPost, Foundation),
    (Post, Foundation),
    (Rim, Floor),
    (Joist, Floor),
    (CenterBeam, Floor),
    (SolePlate, Walls),
    (TopPlate, Walls),
    (Stud, Walls),
    (GableStud, Walls),
    (Header, Walls),
    (King, Walls),
    (Trimmer, Walls),
    (Cripple, Walls),
    (Ridge, Roof),
    (Rafter, Roof),
    (Collar, Roof),
    (Lookout, Roof),
    (Purlin, Roof),
];

impl Category {
    /// Parses an exact category name such as `"Joist"`.
    pub fn from_name(name: &str) -> Option<Category> {
        Category::ALL.iter().copied().find(|c| c.prefix() == name)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.prefix())
    }
}

/// Resolves a member name to its taxonomy category by case-sensitive
/// prefix match; the longest matching prefix wins so overlapping prefixes
/// (e.g. a future `Stud`/`GableStud`-style collision) resolve to the more
/// specific category. Returns `None` when no prefix matches.
pub fn classify_member(name: &str) -> Option<Category> {
    Category::ALL
        .iter()
        .copied()
        .filter(|c| name.starts_with(c.prefix()))
        .max_by_key(|c| c.prefix().len())
}

/// Roof archetype recorded in scene metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoofType {
    Gable,
    Hip,
    Gambrel,
    Shed,
}

/// Building-level metadata carried alongside the member list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneMeta {
    pub lot_width: f64,
    pub lot_depth: f64,
    pub stories: u32,
    pub roof_type: RoofType,
    #[serde(rename = "style", skip_serializing_if = "Option::is_none")]
    pub style_tag: Option<String>,
}

/// One structural element: a named, categorized axis-aligned box.
#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub name: String,
    pub category: Category,
    pub box3: Box3,
}

impl Member {
    /// Longest horizontal extent of the member's box, `max(dx, dy)`, used
    /// as the clear span of joists and rafters.
    pub fn span(&self) -> f64 {
        f64::max(self.box3.extent(Axis::X), self.box3.extent(Axis::Y))
    }
}

/// Ordered member collection plus optional metadata. Member names are
/// unique within a scene; scenes are immutable once constructed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scene {
    pub members: Vec<Member>,
    pub meta: Option<SceneMeta>,
}

impl Scene {
    /// Builds a scene, enforcing name uniqueness.
    pub fn new(members: Vec<Member>, meta: Option<SceneMeta>) -> Result<Self, SceneError> {
        let mut seen = HashSet::new();
        for m in &members {
            if m.name.is_empty() {
                return Err(SceneError::EmptyName);
            }
            if !seen.insert(m.name.clone()) {
                return Err(SceneError::DuplicateName { name: m.name.clone() });
            }
        }
        Ok(Scene { members, meta })
    }

    /// Members of one category, with their indices.
    pub fn members_of(&self, category: Category) -> impl Iterator<Item = (usize, &Member)> {
        self.members
            .iter()
            .enumerate()
            .filter(move |(_, m)| m.category == category)
    }

    pub fn has_category(&self, category: Category) -> bool {
        self.members.iter().any(|m| m.category == category)
    }

    /// Bounding box of all members; `None` for an empty scene.
    pub fn bounds(&self) -> Option<Box3> {
        let mut it = self.members.iter();
        let first = it.next()?.box3;
        Some(it.fold(first, |acc, m| acc.union(&m.box3)))
    }
}

/// Scene ingestion and validation errors.
#[derive(Debug, Error)]
pub enum SceneError {
    #[error("malformed scene document at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("member name must be non-empty")]
    EmptyName,
    #[error("duplicate member name: {name}")]
    DuplicateName { name: String },
    #[error("invalid box for member {name}: {source}")]
    InvalidBox { name: String, source: GeomError },
    #[error("unknown category {given:?} for member {name}")]
    UnknownCategory { name: String, given: String },
    #[error(
        "member {name}: stored category {stored} conflicts with name-derived category {derived}"
    )]
    CategoryMismatch {
        name: String,
        stored: Category,
        derived: Category,
    },
    #[error("member {name} has no taxonomy prefix and no stored category")]
    Unclassifiable { name: String },
}

#[derive(Serialize, Deserialize)]
struct MemberRecord {
    name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    category: Option<String>,
    min: [f64; 3],
    max: [f64; 3],
}

#[derive(Serialize, Deserialize)]
struct SceneDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<SceneMeta>,
    members: Vec<MemberRecord>,
}

/// Parses a scene document (JSON) into a validated [`Scene`], preserving
/// member order.
pub fn parse_scene(document: &[u8]) -> Result<Scene, SceneError> {
    let doc: SceneDocument = serde_json::from_slice(document).map_err(|e| SceneError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let mut members = Vec::with_capacity(doc.members.len());
    for rec in doc.members {
        if rec.name.is_empty() {
            return Err(SceneError::EmptyName);
        }
        let derived = classify_member(&rec.name);
        let stored = match &rec.category {
            Some(s) => Some(Category::from_name(s).ok_or_else(|| SceneError::UnknownCategory {
                name: rec.name.clone(),
                given: s.clone(),
            })?),
            None => None,
        };
        let category = match (stored, derived) {
            (Some(s), Some(d)) if s != d => {
                return Err(SceneError::CategoryMismatch {
                    name: rec.name,
                    stored: s,
                    derived: d,
                })
            }
            (Some(s), _) => s,
            (None, Some(d)) => d,
            (None, None) => return Err(SceneError::Unclassifiable { name: rec.name }),
        };
        let box3 = Box3::new(rec.min, rec.max).map_err(|source| SceneError::InvalidBox {
            name: rec.name.clone(),
            source,
        })?;
        members.push(Member {
            name: rec.name,
            category,
            box3,
        });
    }
    Scene::new(members, doc.meta)
}

/// Serializes a scene to its canonical document form. Round-trips through
/// [`parse_scene`] to a structurally equal scene, bit-stably.
pub fn serialize_scene(scene: &Scene) -> Vec<u8> {
    let doc = SceneDocument {
        meta: scene.meta.clone(),
        members: scene
            .members
            .iter()
            .map(|m| MemberRecord {
                name: m.name.clone(),
                category: Some(m.category.prefix().to_string()),
                min: m.box3.min(),
                max: m.box3.max(),
            })
            .collect(),
    };
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("scene serialization cannot fail");
    bytes.push(b'\n');
    bytes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_prefix_rules() {
        assert_eq!(classify_member("Sill_front"), Some(Category::Sill));
        assert_eq!(classify_member("beam_001"), None);
        assert_eq!(classify_member("GableStud_07"), Some(Category::GableStud));
        assert_eq!(classify_member("Joist_floor1_001"), Some(Category::Joist));
        // Bare prefix is itself a valid name.
        for c in Category::ALL {
            assert_eq!(classify_member(c.prefix()), Some(*c));
        }
    }

    #[test]
    fn parse_empty_and_single() {
        let scene = parse_scene(br#"{"members": []}"#).unwrap();
        assert!(scene.members.is_empty());

        let scene = parse_scene(
            br#"{"members": [{"name": "Stud_a", "min": [0,0,0], "max": [0.04,0.09,2.4]}]}"#,
        )
        .unwrap();
        assert_eq!(scene.members.len(), 1);
        assert_eq!(scene.members[0].category, Category::Stud);
    }

    #[test]
    fn parse_rejects_duplicates() {
        let doc = br#"{"members": [
            {"name": "Joist_1", "min": [0,0,0], "max": [1,1,1]},
            {"name": "Joist_1", "min": [2,0,0], "max": [3,1,1]}
        ]}"#;
        assert!(matches!(
            parse_scene(doc),
            Err(SceneError::DuplicateName { name }) if name == "Joist_1"
        ));
    }

    #[test]
    fn parse_rejects_inverted_box() {
        let doc = br#"{"members": [{"name": "Joist_1", "min": [2,0,0], "max": [1,1,1]}]}"#;
        assert!(matches!(parse_scene(doc), Err(SceneError::InvalidBox { name, .. }) if name == "Joist_1"));
    }

    #[test]
    fn stored_category_must_agree_when_prefix_matches() {
        let doc =
            br#"{"members": [{"name": "Joist_1", "category": "Stud", "min": [0,0,0], "max": [1,1,1]}]}"#;
        assert!(matches!(parse_scene(doc), Err(SceneError::CategoryMismatch { .. })));
        // Stored category carries a prefix-free name.
        let doc = br#"{"members": [{"name": "rim", "category": "Rim", "min": [0,0,0], "max": [1,1,1]}]}"#;
        assert_eq!(parse_scene(doc).unwrap().members[0].category, Category::Rim);
    }

    #[test]
    fn member_span_is_longest_horizontal_extent() {
        let m = Member {
            name: "Joist_1".into(),
            category: Category::Joist,
            box3: Box3::new([0.0, 0.0, 0.0], [4.0, 0.038, 0.235]).unwrap(),
        };
        assert_eq!(m.span(), 4.0);
        let m = Member {
            box3: Box3::new([0.0, 0.0, 0.0], [0.038, 3.5, 0.235]).unwrap(),
            ..m
        };
        assert_eq!(m.span(), 3.5);
        let m = Member {
            box3: Box3::new([0.0, 0.0, 0.0], [1.0, 1.0, 1.0]).unwrap(),
            ..m
        };
        assert_eq!(m.span(), 1.0);
    }

    #[test]
    fn round_trip_preserves_order_and_is_stable() {
        let doc = br#"{"meta": {"lot_width": 7.0, "lot_depth": 5.0, "stories": 1, "roof_type": "gable"},
            "members": [
            {"name": "Sill_front", "min": [0,0,0], "max": [7,0.089,0.089]},
            {"name": "Joist_001", "min": [0,0,0.065], "max": [0.038,5,0.3]}
        ]}"#;
        let scene = parse_scene(doc).unwrap();
        let bytes = serialize_scene(&scene);
        let reparsed = parse_scene(&bytes).unwrap();
        assert_eq!(scene, reparsed);
        assert_eq!(bytes, serialize_scene(&reparsed));
        assert_eq!(reparsed.members[0].name, "Sill_front");
        assert_eq!(reparsed.members[1].name, "Joist_001");
    }
}
