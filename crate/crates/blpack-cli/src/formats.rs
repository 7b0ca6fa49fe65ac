//! On-disk formats. JSON with string-encoded rationals, so exactness
//! survives serialization and files diff cleanly.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use blpack::engine::PackingTrace;
use blpack::instance::Instance;
use blpack::packing::{Packing, Placement};
use blpack::rational::Rational;

#[derive(Debug)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for FormatError {}

fn parse_rational(text: &str, what: &str) -> Result<Rational, FormatError> {
    Rational::from_str(text).map_err(|e| FormatError(format!("{what}: {e}")))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ItemEntry {
    pub id: usize,
    pub w: String,
    pub h: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Metadata {
    pub construction: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub width: String,
    pub items: Vec<ItemEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance, metadata: Option<Metadata>) -> Self {
        InstanceFile {
            width: instance.width().to_string(),
            items: instance
                .items()
                .iter()
                .map(|it| ItemEntry {
                    id: it.id,
                    w: it.width.to_string(),
                    h: it.height.to_string(),
                })
                .collect(),
            metadata,
        }
    }

    pub fn to_instance(&self) -> Result<Instance, FormatError> {
        let width = parse_rational(&self.width, "width")?;
        let mut sizes = vec![None; self.items.len()];
        for entry in &self.items {
            let slot = sizes
                .get_mut(entry.id)
                .ok_or_else(|| FormatError(format!("item id {} out of range", entry.id)))?;
            if slot.is_some() {
                return Err(FormatError(format!("duplicate item id {}", entry.id)));
            }
            *slot = Some((
                parse_rational(&entry.w, &format!("item {} width", entry.id))?,
                parse_rational(&entry.h, &format!("item {} height", entry.id))?,
            ));
        }
        let sizes = sizes
            .into_iter()
            .enumerate()
            .map(|(id, s)| s.ok_or_else(|| FormatError(format!("missing item id {id}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Instance::new(width, sizes).map_err(|e| FormatError(e.to_string()))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrderingFile {
    pub order: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlacementEntry {
    pub id: usize,
    pub x: String,
    pub y: String,
}

impl PlacementEntry {
    fn from_placement(p: &Placement) -> Self {
        PlacementEntry {
            id: p.id,
            x: p.x.to_string(),
            y: p.y.to_string(),
        }
    }

    fn to_placement(&self) -> Result<Placement, FormatError> {
        Ok(Placement {
            id: self.id,
            x: parse_rational(&self.x, &format!("item {} x", self.id))?,
            y: parse_rational(&self.y, &format!("item {} y", self.id))?,
        })
    }
}

/// A finished packing; placements sorted by item id.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PackingFile {
    pub instance: InstanceFile,
    pub placements: Vec<PlacementEntry>,
    pub height: String,
}

impl PackingFile {
    pub fn from_packing(packing: &Packing, metadata: Option<Metadata>) -> Self {
        PackingFile {
            instance: InstanceFile::from_instance(packing.instance(), metadata),
            placements: packing
                .placements()
                .iter()
                .map(PlacementEntry::from_placement)
                .collect(),
            height: packing.height().to_string(),
        }
    }

    pub fn to_packing(&self) -> Result<Packing, FormatError> {
        let instance = self.instance.to_instance()?;
        let placements = self
            .placements
            .iter()
            .map(PlacementEntry::to_placement)
            .collect::<Result<Vec<_>, _>>()?;
        let packing = Packing::new(instance, placements).map_err(|e| FormatError(e.to_string()))?;
        let height = parse_rational(&self.height, "height")?;
        if height != packing.height() {
            return Err(FormatError(format!(
                "recorded height {height} does not match recomputed {}",
                packing.height()
            )));
        }
        Ok(packing)
    }
}

/// A packing run with its placement order retained, which is what the
/// structural analysis needs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceFile {
    pub instance: InstanceFile,
    pub placements: Vec<PlacementEntry>,
    pub height: String,
}

impl TraceFile {
    pub fn from_trace(trace: &PackingTrace, metadata: Option<Metadata>) -> Self {
        TraceFile {
            instance: InstanceFile::from_instance(trace.instance(), metadata),
            placements: trace
                .steps()
                .iter()
                .map(PlacementEntry::from_placement)
                .collect(),
            height: trace.height().to_string(),
        }
    }

    pub fn to_trace(&self) -> Result<PackingTrace, FormatError> {
        let instance = self.instance.to_instance()?;
        let steps = self
            .placements
            .iter()
            .map(PlacementEntry::to_placement)
            .collect::<Result<Vec<_>, _>>()?;
        let trace = PackingTrace::from_placements(instance, steps)
            .map_err(|e| FormatError(e.to_string()))?;
        let height = parse_rational(&self.height, "height")?;
        if height != trace.height() {
            return Err(FormatError(format!(
                "recorded height {height} does not match recomputed {}",
                trace.height()
            )));
        }
        Ok(trace)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Machine-readable outcome of a search, analysis, or repro run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportFile {
    pub command: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
    pub checks: Vec<CheckEntry>,
    pub pass: bool,
}

impl ReportFile {
    pub fn new(command: &str, params: BTreeMap<String, String>, checks: Vec<CheckEntry>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        ReportFile {
            command: command.to_string(),
            params,
            checks,
            pass,
        }
    }
}
