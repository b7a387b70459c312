use std::fs;

use serde_json::Value;
use upb_core::unextend::{drop_row, SearchOptions};
use upb_core::uom::{catalog_json, instantiate, parse_catalog, Instantiation, UomSpec};
use upb_core::{PartySplit, ProductVectorSet};

use crate::cert::{Certificate, CliError};

/// The UOMs commands may name: the embedded catalog or one read from a
/// file in the same format.
#[derive(Clone, Debug)]
pub struct Catalog {
    pub specs: Vec<UomSpec>,
    /// `"embedded"` or the file path.
    pub source: String,
}

impl Catalog {
    pub fn embedded() -> Self {
        Catalog { specs: parse_catalog(catalog_json()).expect("embedded catalog parses"), source: "embedded".into() }
    }

    pub fn from_file(path: &str) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        Ok(Catalog { specs: parse_catalog(&text)?, source: path.into() })
    }

    pub fn lookup(&self, name: &str) -> Result<UomSpec, CliError> {
        self.specs
            .iter()
            .find(|s| s.name == name)
            .cloned()
            .ok_or_else(|| upb_core::Error::UnknownUom(name.into()).into())
    }

    /// `F1` to `F6` from this catalog.
    pub fn families(&self) -> Result<Vec<UomSpec>, CliError> {
        (1..=6).map(|j| self.lookup(&format!("F{j}"))).collect()
    }
}

/// Inputs shared by every command.
#[derive(Clone, Debug)]
pub struct Context {
    pub catalog: Catalog,
    pub seed: u64,
    pub opts: SearchOptions,
    /// The command line as echoed into certificates.
    pub command: String,
}

impl Context {
    /// Instantiates `name` with the context seed, then drops row `drop`
    /// (1-based) if given.
    pub fn instance(&self, name: &str, drop: Option<usize>) -> Result<(Instantiation, ProductVectorSet), CliError> {
        let spec = self.catalog.lookup(name)?;
        let (inst, set) = instantiate(&spec, self.seed)?;
        let set = match drop {
            Some(i) => drop_row(&set, i)?,
            None => set,
        };
        Ok((inst, set))
    }

    pub fn cert(&self, uom: Option<&str>, split: Option<&PartySplit>, verdicts: Value) -> Certificate {
        Certificate {
            command: self.command.clone(),
            seed: Some(self.seed),
            uom: uom.map(str::to_string),
            split: split.map(PartySplit::to_string),
            ..Certificate::new(verdicts)
        }
    }
}

/// Parses a split for an `n`-qubit set; `None` means one party per qubit.
pub fn parse_split(s: Option<&str>, n: usize) -> Result<PartySplit, CliError> {
    match s {
        Some(s) => Ok(PartySplit::parse(s, n)?),
        None => Ok(PartySplit::finest(n)),
    }
}
