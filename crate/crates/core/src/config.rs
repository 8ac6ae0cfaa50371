//! Section configuration files.
//!
//! ```toml
//! # optional analytic fuselage used as ground truth by the simulator
//! [cylinder]
//! h0 = 2.0
//! r0 = 2.0
//!
//! [[section]]
//! name = "fuselage"
//! kind = "fuselage"        # fuselage | tail | stabiliser | wing
//! half = "back"            # front | back
//! min = [-2.0, 0.0, 2.0]
//! max = [0.4, 20.0, 4.0]
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CylinderModel, Vec3};
use crate::surface::{Aabb, AircraftHalf, SectionKind, SectionSpec};

/// Parse error carrying the 1-based line of the offending span.
pub(crate) fn toml_error(text: &str, origin: &str, e: &toml::de::Error) -> Error {
    let line = e
        .span()
        .map(|s| text[..s.start].matches('\n').count() as u64 + 1)
        .unwrap_or(0);
    Error::parse(origin, line, e.message().to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SectionEntry {
    name: String,
    kind: SectionKind,
    half: AircraftHalf,
    min: [f64; 3],
    max: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSections {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cylinder: Option<CylinderModel>,
    section: Vec<SectionEntry>,
}

/// Parsed sections file.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionsConfig {
    pub cylinder: Option<CylinderModel>,
    pub sections: Vec<SectionSpec>,
}

impl SectionsConfig {
    pub fn from_toml(text: &str, origin: &str) -> Result<Self> {
        let raw: RawSections = toml::from_str(text).map_err(|e| toml_error(text, origin, &e))?;
        if raw.section.is_empty() {
            return Err(Error::InvalidArgument(format!("{origin}: no sections defined")));
        }
        let mut sections = Vec::with_capacity(raw.section.len());
        for s in raw.section {
            if sections.iter().any(|o: &SectionSpec| o.name == s.name) {
                return Err(Error::InvalidArgument(format!("{origin}: duplicate section '{}'", s.name)));
            }
            let bounds = Aabb::new(Vec3::new(s.min[0], s.min[1], s.min[2]), Vec3::new(s.max[0], s.max[1], s.max[2]))?;
            sections.push(SectionSpec::new(s.name, s.kind, bounds, s.half));
        }
        if let Some(c) = raw.cylinder {
            CylinderModel::new(c.h0, c.r0)?;
        }
        Ok(Self {
            cylinder: raw.cylinder,
            sections,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text, &path.display().to_string())
    }

    pub fn to_toml(&self) -> String {
        let raw = RawSections {
            cylinder: self.cylinder,
            section: self
                .sections
                .iter()
                .map(|s| SectionEntry {
                    name: s.name.clone(),
                    kind: s.kind,
                    half: s.half,
                    min: s.bounds.min.to_array(),
                    max: s.bounds.max.to_array(),
                })
                .collect(),
        };
        toml::to_string(&raw).expect("sections serialise")
    }

    /// Analytic ground truth for a section, if any: the cylinder applies to
    /// fuselage sections only.
    pub fn analytic_for(&self, kind: SectionKind) -> Option<CylinderModel> {
        (kind == SectionKind::Fuselage).then_some(self.cylinder).flatten()
    }
}
