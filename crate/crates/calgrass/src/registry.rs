//! The registry: every homology, homotopy, ring, and free-dimension table
//! the laboratory checks against, shipped as embedded JSON with a citation
//! tag on each entry, plus the embedded scenario and chain complex corpus.

use crate::fgab::group::{parse_group, FgAbGroup};
use crate::fgab::homology::ChainComplex;
use crate::ring::{parse_monomial, Coeff, Monomial, RingComponent, TruncatedRing};
use crate::spectral::Scenario;
use crate::{Error, Result};
use serde::Deserialize;
use std::collections::BTreeMap;

pub const PAPERTABLES_JSON: &str = include_str!("../data/papertables.json");

const SCENARIO_FILES: &[(&str, &str)] = &[
    ("v2r5_s4", include_str!("../data/scenarios/v2r5_s4.json")),
    ("v3r6_s5", include_str!("../data/scenarios/v3r6_s5.json")),
    ("su3_slag", include_str!("../data/scenarios/su3_slag.json")),
    ("so3_g3r6", include_str!("../data/scenarios/so3_g3r6.json")),
    (
        "lemma41_hypothetical",
        include_str!("../data/scenarios/lemma41_hypothetical.json"),
    ),
];

const COMPLEX_FILES: &[(&str, &str)] = &[
    ("rp2", include_str!("../data/complexes/rp2.json")),
    ("torus", include_str!("../data/complexes/torus.json")),
    ("s2", include_str!("../data/complexes/s2.json")),
];

pub fn scenario_names() -> Vec<&'static str> {
    SCENARIO_FILES.iter().map(|(n, _)| *n).collect()
}

pub fn complex_names() -> Vec<&'static str> {
    COMPLEX_FILES.iter().map(|(n, _)| *n).collect()
}

pub fn embedded_scenario(name: &str) -> Result<Scenario> {
    let key = name.strip_suffix(".json").unwrap_or(name);
    match SCENARIO_FILES.iter().find(|(n, _)| *n == key) {
        Some((_, text)) => Scenario::from_json(text),
        None => Err(Error::UnknownName(format!(
            "no embedded scenario '{}'; known: {}",
            name,
            scenario_names().join(", ")
        ))),
    }
}

pub fn embedded_complex(name: &str) -> Result<ChainComplex> {
    let key = name.strip_suffix(".json").unwrap_or(name);
    match COMPLEX_FILES.iter().find(|(n, _)| *n == key) {
        Some((_, text)) => ChainComplex::from_json(text),
        None => Err(Error::UnknownName(format!(
            "no embedded complex '{}'; known: {}",
            name,
            complex_names().join(", ")
        ))),
    }
}

#[derive(Clone, Debug)]
pub struct SpaceEntry {
    pub label: String,
    pub dimension: usize,
    pub closed_oriented: bool,
    pub simply_connected: bool,
    pub homology: Vec<FgAbGroup>,
    /// Homotopy groups from pi_0 up, as far as the sources state them;
    /// empty when not recorded.
    pub homotopy: Vec<FgAbGroup>,
    pub ring: Option<String>,
    pub citations: BTreeMap<String, String>,
}

#[derive(Clone, Debug)]
pub struct RingEntry {
    pub citation: String,
    pub ring: TruncatedRing,
}

#[derive(Clone, Debug)]
pub struct RingHomEntry {
    pub citation: String,
    pub description: String,
    pub source: String,
    pub target: String,
    pub images: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct FreeDimRow {
    pub calibration: String,
    pub explanation: String,
    pub ambient: String,
    pub free_dimension: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct FreeDimInstance {
    pub name: String,
    pub free_dimension: usize,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ScenarioMeta {
    pub citation: String,
    pub description: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Note {
    pub citation: String,
    pub note: String,
}

#[derive(Clone, Debug)]
pub struct Registry {
    pub spaces: BTreeMap<String, SpaceEntry>,
    pub rings: BTreeMap<String, RingEntry>,
    pub ring_homs: BTreeMap<String, RingHomEntry>,
    pub free_citation: String,
    pub free_table: Vec<FreeDimRow>,
    pub free_instances: Vec<FreeDimInstance>,
    pub scenarios: BTreeMap<String, ScenarioMeta>,
    pub notes: Vec<Note>,
}

#[derive(Deserialize)]
struct RawSpace {
    label: String,
    dimension: usize,
    closed_oriented: bool,
    simply_connected: bool,
    homology: Vec<String>,
    #[serde(default)]
    homotopy: Vec<String>,
    #[serde(default)]
    ring: Option<String>,
    citations: BTreeMap<String, String>,
}

#[derive(Deserialize)]
struct RawRingComponent {
    coeff: String,
    gens: BTreeMap<String, u32>,
    #[serde(default)]
    zero: Vec<String>,
}

#[derive(Deserialize)]
struct RawRing {
    citation: String,
    top_degree: u32,
    components: Vec<RawRingComponent>,
}

#[derive(Deserialize)]
struct RawRingHom {
    citation: String,
    #[serde(default)]
    description: String,
    source: String,
    target: String,
    images: BTreeMap<String, String>,
}

#[derive(Deserialize)]
struct RawFreeDims {
    citation: String,
    table: Vec<FreeDimRow>,
    instances: Vec<FreeDimInstance>,
}

#[derive(Deserialize)]
struct RawRegistry {
    spaces: BTreeMap<String, RawSpace>,
    rings: BTreeMap<String, RawRing>,
    ring_homs: BTreeMap<String, RawRingHom>,
    free_dimensions: RawFreeDims,
    scenarios: BTreeMap<String, ScenarioMeta>,
    #[serde(default)]
    notes: Vec<Note>,
}

fn parse_groups(list: &[String], what: &str) -> Result<Vec<FgAbGroup>> {
    list.iter()
        .enumerate()
        .map(|(i, s)| {
            parse_group(s).map_err(|e| Error::Parse(format!("{}[{}]: {}", what, i, e)))
        })
        .collect()
}

fn build_ring(name: &str, raw: &RawRing) -> Result<TruncatedRing> {
    let mut components = Vec::new();
    for (ci, rc) in raw.components.iter().enumerate() {
        let coeff = match rc.coeff.as_str() {
            "Z" => Coeff::Z,
            "Z2" => Coeff::Z2,
            other => {
                return Err(Error::Parse(format!(
                    "ring {}: component {} has unsupported coefficient '{}'",
                    name, ci, other
                )))
            }
        };
        let mut zero_monomials: Vec<Monomial> = Vec::new();
        for z in &rc.zero {
            zero_monomials.push(parse_monomial(z)?);
        }
        components.push(RingComponent { coeff, gens: rc.gens.clone(), zero_monomials });
    }
    Ok(TruncatedRing {
        name: name.to_string(),
        components,
        top_degree: raw.top_degree,
    })
}

impl Registry {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawRegistry = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("registry: {e}")))?;
        let mut spaces = BTreeMap::new();
        for (name, rs) in &raw.spaces {
            spaces.insert(
                name.clone(),
                SpaceEntry {
                    label: rs.label.clone(),
                    dimension: rs.dimension,
                    closed_oriented: rs.closed_oriented,
                    simply_connected: rs.simply_connected,
                    homology: parse_groups(&rs.homology, &format!("{name}.homology"))?,
                    homotopy: parse_groups(&rs.homotopy, &format!("{name}.homotopy"))?,
                    ring: rs.ring.clone(),
                    citations: rs.citations.clone(),
                },
            );
        }
        let mut rings = BTreeMap::new();
        for (name, rr) in &raw.rings {
            rings.insert(
                name.clone(),
                RingEntry { citation: rr.citation.clone(), ring: build_ring(name, rr)? },
            );
        }
        let mut ring_homs = BTreeMap::new();
        for (name, rh) in &raw.ring_homs {
            if !rings.contains_key(&rh.source) || !rings.contains_key(&rh.target) {
                return Err(Error::Parse(format!(
                    "ring hom {}: source or target ring missing",
                    name
                )));
            }
            ring_homs.insert(
                name.clone(),
                RingHomEntry {
                    citation: rh.citation.clone(),
                    description: rh.description.clone(),
                    source: rh.source.clone(),
                    target: rh.target.clone(),
                    images: rh.images.clone(),
                },
            );
        }
        Ok(Registry {
            spaces,
            rings,
            ring_homs,
            free_citation: raw.free_dimensions.citation,
            free_table: raw.free_dimensions.table,
            free_instances: raw.free_dimensions.instances,
            scenarios: raw.scenarios,
            notes: raw.notes,
        })
    }

    pub fn load_default() -> Result<Self> {
        Self::from_json(PAPERTABLES_JSON)
    }

    pub fn load_from_path(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read registry {}: {}", path, e)))?;
        Self::from_json(&text)
    }

    pub fn space(&self, name: &str) -> Result<&SpaceEntry> {
        self.spaces.get(name).ok_or_else(|| {
            Error::UnknownName(format!(
                "no space '{}'; known: {}",
                name,
                self.spaces.keys().cloned().collect::<Vec<_>>().join(", ")
            ))
        })
    }

    pub fn ring(&self, name: &str) -> Result<&RingEntry> {
        self.rings.get(name).ok_or_else(|| {
            Error::UnknownName(format!(
                "no ring '{}'; known: {}",
                name,
                self.rings.keys().cloned().collect::<Vec<_>>().join(", ")
            ))
        })
    }

    pub fn ring_hom(&self, name: &str) -> Result<&RingHomEntry> {
        self.ring_homs.get(name).ok_or_else(|| {
            Error::UnknownName(format!(
                "no ring hom '{}'; known: {}",
                name,
                self.ring_homs.keys().cloned().collect::<Vec<_>>().join(", ")
            ))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::homology::{
        euler_characteristic, homology_from_cohomology, hurewicz_check,
        poincare_duality_check, poincare_polynomial, uct_cohomology, uct_with_coefficients,
    };
    use crate::ring::{duality_pairing_check, ring_matches_cohomology, verify_ring_hom};
    use crate::spectral::{solve, SolveOptions};

    fn groups(names: &[&str]) -> Vec<FgAbGroup> {
        names.iter().map(|s| parse_group(s).unwrap()).collect()
    }

    #[test]
    fn default_registry_parses_completely() {
        let reg = Registry::load_default().unwrap();
        assert_eq!(reg.spaces.len(), 6);
        assert_eq!(reg.rings.len(), 5);
        assert_eq!(reg.ring_homs.len(), 2);
        assert_eq!(reg.free_table.len(), 6);
        assert_eq!(reg.free_instances.len(), 3);
        assert_eq!(reg.scenarios.len(), 5);
        assert_eq!(reg.space("g3r6").unwrap().dimension, 9);
        assert!(reg.space("nope").is_err());
        for (name, entry) in &reg.spaces {
            assert!(!entry.citations.is_empty(), "{name} lacks citations");
        }
    }

    #[test]
    fn duality_euler_and_hurewicz_across_the_table() {
        let reg = Registry::load_default().unwrap();
        let g = reg.space("g3r6").unwrap();
        assert!(poincare_duality_check(&g.homology, 9));
        let slag = reg.space("slag").unwrap();
        assert!(poincare_duality_check(&slag.homology, 5));
        // free part of the Grassmannian carries the product polynomial
        assert_eq!(
            poincare_polynomial(&g.homology),
            vec![1, 0, 0, 0, 1, 1, 0, 0, 0, 1]
        );
        for (name, entry) in &reg.spaces {
            if entry.dimension % 2 == 1 {
                assert_eq!(euler_characteristic(&entry.homology), 0, "{name}");
            }
            if entry.simply_connected && !entry.homotopy.is_empty() {
                let rep = hurewicz_check(&entry.homology, &entry.homotopy);
                assert!(rep.consistent, "{name}: {}", rep.detail);
            }
        }
        // cohomology round trip on a closed oriented entry
        let hc = uct_cohomology(&g.homology);
        assert_eq!(hc, groups(&["Z", "0", "0", "Z2", "Z", "Z", "0", "Z2", "0", "Z"]));
        assert_eq!(homology_from_cohomology(&hc), g.homology);
        let mod2 = uct_with_coefficients(&g.homology, 2);
        assert_eq!(
            mod2,
            groups(&["Z2", "0", "Z2", "Z2", "Z2", "Z2", "Z2", "Z2", "0", "Z2"])
        );
    }

    #[test]
    fn rings_match_their_spaces_and_pair_dually() {
        let reg = Registry::load_default().unwrap();
        for name in ["g3r6", "v2r5", "v3r6", "slag"] {
            let space = reg.space(name).unwrap();
            let ring = &reg.ring(name).unwrap().ring;
            assert!(
                ring_matches_cohomology(ring, &space.homology),
                "{name} ring does not match its cohomology"
            );
        }
        // whenever a registry ring matches the cohomology of a closed
        // oriented space whose homology table satisfies Poincare duality,
        // the multiplicative pairing must be perfect as well
        let mut paired = 0;
        for (name, entry) in &reg.rings {
            let Ok(space) = reg.space(name) else { continue };
            if !space.closed_oriented
                || !poincare_duality_check(&space.homology, space.dimension)
                || !ring_matches_cohomology(&entry.ring, &space.homology)
            {
                continue;
            }
            let rep = duality_pairing_check(&entry.ring, space.dimension as u32);
            assert!(rep.ok, "{name}: {:?}", rep.issues);
            paired += 1;
        }
        assert!(paired >= 4, "expected at least four dually paired rings, got {paired}");
        for hom_name in ["slag_pullback", "pont_pullback"] {
            let hom = reg.ring_hom(hom_name).unwrap();
            let source = &reg.ring(&hom.source).unwrap().ring;
            let target = &reg.ring(&hom.target).unwrap().ring;
            let rep = verify_ring_hom(source, target, &hom.images).unwrap();
            assert!(rep.ok, "{hom_name}: {:?}", rep.issues);
        }
    }

    #[test]
    fn embedded_complexes_have_textbook_homology() {
        let rp2 = embedded_complex("rp2").unwrap();
        assert_eq!(rp2.homology(), groups(&["Z", "Z2", "0"]));
        let torus = embedded_complex("torus").unwrap();
        assert_eq!(torus.homology(), groups(&["Z", "Z^2", "Z"]));
        let s2 = embedded_complex("s2").unwrap();
        assert_eq!(s2.homology(), groups(&["Z", "0", "Z"]));
        assert!(embedded_complex("s3").is_err());
    }

    #[test]
    fn stiefel_scenarios_resolve_to_the_published_lists() {
        let opts = SolveOptions::default();
        // transgression multiplication by 2 and the full homology list
        let sc = embedded_scenario("v2r5_s4").unwrap();
        let rep = solve(&sc, &opts).unwrap();
        assert!(rep.consistent && rep.audit_ok);
        assert_eq!(rep.survivor_classes, 1);
        let total = rep.resolved_total.expect("all slots pinned");
        assert_eq!(total, vec!["Z", "0", "0", "Z2", "0", "0", "0", "Z"]);
        let forced = rep
            .forced
            .iter()
            .find(|f| f.page == 4 && f.from == (4, 0))
            .expect("the transgression must be forced");
        assert_eq!(forced.matrix, vec![vec!["2".to_string()]]);

        // all differentials vanish and the 13 unknown slots settle
        let sc = embedded_scenario("v3r6_s5").unwrap();
        let rep = solve(&sc, &opts).unwrap();
        assert!(rep.consistent && rep.audit_ok);
        assert_eq!(rep.survivor_classes, 1);
        assert!(rep.ambiguous_maps.is_empty());
        for f in &rep.forced {
            assert!(
                f.matrix.iter().all(|row| row.iter().all(|e| e == "0")),
                "unexpected nonzero differential {:?} -> {:?}",
                f.from,
                f.to
            );
        }
        let total = rep.resolved_total.expect("all slots pinned");
        assert_eq!(
            total,
            vec!["Z", "0", "0", "0", "Z2", "Z", "0", "Z", "0", "Z2", "0", "0", "Z"]
        );
        let recovered = homology_from_cohomology(&groups(
            &total.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        ));
        let reg = Registry::load_default().unwrap();
        assert_eq!(recovered, reg.space("v3r6").unwrap().homology);
    }

    #[test]
    fn face_scenario_pins_low_homology_and_flags_the_extension() {
        let sc = embedded_scenario("su3_slag").unwrap();
        let rep = solve(&sc, &SolveOptions::default()).unwrap();
        assert!(rep.consistent && rep.audit_ok);
        assert_eq!(rep.resolved.get("base[2]").unwrap(), "Z2");
        assert_eq!(rep.resolved.get("base[3]").unwrap(), "0");
        let flag = rep
            .extension_flags
            .iter()
            .find(|f| f.diagonal == 3)
            .expect("diagonal 3 assembles Z from Z2 and Z pieces");
        assert!(flag.nonsplit);
    }

    #[test]
    fn frame_bundle_scenario_forces_free_fourth_homology() {
        let sc = embedded_scenario("so3_g3r6").unwrap();
        let rep = solve(&sc, &SolveOptions::default()).unwrap();
        assert!(rep.consistent && rep.audit_ok);
        assert_eq!(rep.resolved.get("base[4]").unwrap(), "Z");
        // the same conclusion must fall out of the homological mirror run
        let reg = Registry::load_default().unwrap();
        let v3 = reg.space("v3r6").unwrap();
        let mirror_total: Vec<String> =
            v3.homology.iter().map(|g| g.to_string()).collect();
        let mirror = format!(
            r#"{{
              "name": "so3_g3r6_homological",
              "direction": "homological",
              "fiber": ["Z", "Z2", "0", "Z"],
              "base": ["Z", "0", "Z2", "0",
                       {{"unknown": ["Z", "Z+Z2", "Z+Z4", "Z+Z2^2"]}},
                       "Z", "Z2", "0", "0", "Z"],
              "total": [{}],
              "base_simply_connected": true
            }}"#,
            mirror_total
                .iter()
                .map(|s| format!("\"{}\"", s))
                .collect::<Vec<_>>()
                .join(", ")
        );
        let sc2 = Scenario::from_json(&mirror).unwrap();
        let rep2 = solve(&sc2, &SolveOptions::default()).unwrap();
        assert!(rep2.consistent);
        assert_eq!(rep2.resolved.get("base[4]").unwrap(), "Z");
    }

    #[test]
    fn hypothetical_table_is_refused_with_an_attributed_blockage() {
        let sc = embedded_scenario("lemma41_hypothetical").unwrap();
        let rep = solve(&sc, &SolveOptions::default()).unwrap();
        assert!(!rep.consistent);
        assert_eq!(rep.survivor_classes, 0);
        let b = rep.blocked.expect("blockage must be attributed");
        assert_eq!(b.position, (4, 2));
        assert_eq!(b.diagonal, 6);
    }
}
