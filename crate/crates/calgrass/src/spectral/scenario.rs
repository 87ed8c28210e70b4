//! Scenario files describing a fibration whose spectral sequence is to be
//! searched: fiber and base homology, total-space groups, and which slots
//! are unknown.
//!
//! JSON layout:
//!
//! ```json
//! {
//!   "name": "v2r5_s4",
//!   "direction": "homological",
//!   "fiber": ["Z", "0", "0", "Z"],
//!   "base": ["Z", "0", "0", "0", "Z"],
//!   "total": ["Z", "0", "0", "Z2", {"unknown": ["0", "Z", "Z2"]}],
//!   "base_simply_connected": true
//! }
//! ```
//!
//! `fiber` and `base` always list integral homology from degree 0 up.
//! `total` lists integral homology for homological scenarios and integral
//! cohomology for cohomological ones, matching what the pages converge to.
//! Any entry may be an `unknown` slot carrying its candidate groups.

use crate::fgab::group::{parse_group, FgAbGroup};
use crate::{Error, Result};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Homological,
    Cohomological,
}

/// One graded slot: either a known group or a finite candidate list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlotValue {
    Known(FgAbGroup),
    Unknown(Vec<FgAbGroup>),
}

impl SlotValue {
    pub fn candidates(&self) -> &[FgAbGroup] {
        match self {
            SlotValue::Known(g) => std::slice::from_ref(g),
            SlotValue::Unknown(c) => c,
        }
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, SlotValue::Unknown(_))
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub direction: Direction,
    pub fiber: Vec<SlotValue>,
    pub base: Vec<SlotValue>,
    pub total: Vec<SlotValue>,
    pub base_simply_connected: bool,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawSlot {
    Literal(String),
    Unknown { unknown: Vec<String> },
}

#[derive(Deserialize)]
struct RawScenario {
    name: String,
    direction: String,
    fiber: Vec<RawSlot>,
    base: Vec<RawSlot>,
    total: Vec<RawSlot>,
    base_simply_connected: bool,
}

fn parse_slot(raw: &RawSlot, what: &str, idx: usize) -> Result<SlotValue> {
    match raw {
        RawSlot::Literal(s) => Ok(SlotValue::Known(parse_group(s)?)),
        RawSlot::Unknown { unknown } => {
            if unknown.is_empty() {
                return Err(Error::Parse(format!(
                    "{}[{}]: unknown slot needs at least one candidate",
                    what, idx
                )));
            }
            let mut cands = Vec::with_capacity(unknown.len());
            for s in unknown {
                cands.push(parse_group(s)?);
            }
            Ok(SlotValue::Unknown(cands))
        }
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawScenario =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("scenario: {e}")))?;
        let direction = match raw.direction.as_str() {
            "homological" => Direction::Homological,
            "cohomological" => Direction::Cohomological,
            other => {
                return Err(Error::Parse(format!(
                    "direction must be homological or cohomological, got '{}'",
                    other
                )))
            }
        };
        let parse_list = |list: &[RawSlot], what: &str| -> Result<Vec<SlotValue>> {
            list.iter()
                .enumerate()
                .map(|(i, r)| parse_slot(r, what, i))
                .collect()
        };
        Ok(Scenario {
            name: raw.name,
            direction,
            fiber: parse_list(&raw.fiber, "fiber")?,
            base: parse_list(&raw.base, "base")?,
            total: parse_list(&raw.total, "total")?,
            base_simply_connected: raw.base_simply_connected,
        })
    }

    /// Unknown slots in fiber and base, the ones that shape the pages.
    /// Returned as (list-name, index).
    pub fn structural_unknowns(&self) -> Vec<(&'static str, usize)> {
        let mut out = Vec::new();
        for (i, s) in self.fiber.iter().enumerate() {
            if s.is_unknown() {
                out.push(("fiber", i));
            }
        }
        for (i, s) in self.base.iter().enumerate() {
            if s.is_unknown() {
                out.push(("base", i));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_mixed_slots() {
        let text = r#"{
            "name": "toy",
            "direction": "homological",
            "fiber": ["Z", "Z2"],
            "base": ["Z", "0", {"unknown": ["0", "Z2"]}],
            "total": ["Z", {"unknown": ["0", "Z", "Z2"]}, "0", "0"],
            "base_simply_connected": true
        }"#;
        let sc = Scenario::from_json(text).unwrap();
        assert_eq!(sc.name, "toy");
        assert_eq!(sc.direction, Direction::Homological);
        assert_eq!(sc.fiber.len(), 2);
        assert!(sc.base[2].is_unknown());
        assert_eq!(sc.base[2].candidates().len(), 2);
        assert_eq!(sc.structural_unknowns(), vec![("base", 2)]);
        assert!(!sc.total[0].is_unknown());
    }

    #[test]
    fn bad_direction_rejected() {
        let text = r#"{"name":"x","direction":"sideways","fiber":[],"base":[],"total":[],"base_simply_connected":true}"#;
        assert!(Scenario::from_json(text).is_err());
    }
}
