use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::spec::UomSpec;
use crate::error::{Error, Result};

const CATALOG_JSON: &str = include_str!("catalog.json");

fn entries() -> &'static [UomSpec] {
    static CATALOG: OnceLock<Vec<UomSpec>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let specs: Vec<UomSpec> = serde_json::from_str(CATALOG_JSON).expect("embedded catalog parses");
        for s in &specs {
            s.validate().expect("embedded catalog validates");
        }
        specs
    })
}

/// Parses a catalog file: a JSON array of specs in the embedded format.
/// Every entry is validated; duplicate names are rejected.
pub fn parse_catalog(text: &str) -> Result<Vec<UomSpec>> {
    let specs: Vec<UomSpec> = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    for (i, s) in specs.iter().enumerate() {
        s.validate().map_err(|e| match e {
            Error::Parse { location, message } => Error::Parse { location: format!("[{i}].{location}"), message },
            other => other,
        })?;
        if specs[..i].iter().any(|t| t.name == s.name) {
            return Err(Error::Parse { location: format!("[{i}].name"), message: format!("duplicate name {}", s.name) });
        }
    }
    Ok(specs)
}

/// The embedded catalog as JSON text.
pub fn catalog_json() -> &'static str {
    CATALOG_JSON
}

/// Every catalogued UOM by name: the six 4-qubit families, their
/// constrained special cases, and the 3-qubit `SHIFTS3`.
pub fn catalog() -> BTreeMap<String, UomSpec> {
    entries().iter().map(|s| (s.name.clone(), s.clone())).collect()
}

/// Catalog names in their transcription order.
pub fn catalog_names() -> Vec<&'static str> {
    entries().iter().map(|s| s.name.as_str()).collect()
}

pub fn lookup(name: &str) -> Result<UomSpec> {
    entries()
        .iter()
        .find(|s| s.name == name)
        .cloned()
        .ok_or_else(|| Error::UnknownUom(name.to_string()))
}

/// The six base families `F1`..`F6`.
pub fn families() -> Vec<UomSpec> {
    (1..=6).map(|j| lookup(&format!("F{j}")).expect("base family present")).collect()
}
