//! On-disk cache of KL polynomials, structure constants and cells, as JSON with a versioned header.
//!
//! The cache is advisory: unreadable, mismatched or stale entries are ignored and rebuilt.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cells::CellDecomposition;
use crate::error::{Error, Result};
use crate::hecke::{CRow, HTable, KlTable};
use crate::weyl::WeylGroup;

pub const FORMAT_VERSION: u32 = 1;
pub const CACHE_DIR_ENV: &str = "HECKESTRAT_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PayloadKind {
    Kl,
    Hconst,
    Cells,
}

impl PayloadKind {
    fn stem(self) -> &'static str {
        match self {
            PayloadKind::Kl => "kl",
            PayloadKind::Hconst => "hconst",
            PayloadKind::Cells => "cells",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheHeader {
    pub format_version: u32,
    pub coxeter_type: String,
    pub payload_kind: PayloadKind,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry<T> {
    pub header: CacheHeader,
    pub payload: T,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, coxeter_type: &str, kind: PayloadKind) -> PathBuf {
        self.dir.join(format!("{coxeter_type}.{}.json", kind.stem()))
    }

    /// The payload, if an entry with the expected header exists and parses.
    pub fn load<T: DeserializeOwned>(&self, coxeter_type: &str, kind: PayloadKind) -> Option<T> {
        let text = fs::read_to_string(self.path(coxeter_type, kind)).ok()?;
        let entry: CacheEntry<T> = serde_json::from_str(&text).ok()?;
        let expected = CacheHeader { format_version: FORMAT_VERSION, coxeter_type: coxeter_type.to_string(), payload_kind: kind };
        (entry.header == expected).then_some(entry.payload)
    }

    pub fn store<T: Serialize>(&self, coxeter_type: &str, kind: PayloadKind, payload: &T) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(|e| Error::Cache(e.to_string()))?;
        let header = CacheHeader { format_version: FORMAT_VERSION, coxeter_type: coxeter_type.to_string(), payload_kind: kind };
        let text = serde_json::to_string(&CacheEntry { header, payload }).map_err(|e| Error::Cache(e.to_string()))?;
        let path = self.path(coxeter_type, kind);
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, text).map_err(|e| Error::Cache(e.to_string()))?;
        fs::rename(&tmp, &path).map_err(|e| Error::Cache(e.to_string()))
    }

    pub fn kl_table(&self, g: &WeylGroup) -> Result<KlTable> {
        let ty = g.coxeter_type().to_string();
        if let Some(t) = self.load::<KlTable>(&ty, PayloadKind::Kl) {
            return Ok(t);
        }
        let t = KlTable::new(g)?;
        self.store(&ty, PayloadKind::Kl, &t)?;
        Ok(t)
    }

    pub fn h_table<'a>(&self, g: &'a WeylGroup, kl: &'a KlTable) -> Result<HTable<'a>> {
        let ty = g.coxeter_type().to_string();
        if let Some(rows) = self.load::<Vec<Vec<CRow>>>(&ty, PayloadKind::Hconst) {
            if let Ok(h) = HTable::with_rows(g, kl, rows) {
                return Ok(h);
            }
        }
        let h = HTable::new(g, kl);
        self.store(&ty, PayloadKind::Hconst, &h.export_rows())?;
        Ok(h)
    }

    pub fn cells(&self, h: &HTable) -> Result<CellDecomposition> {
        let ty = h.group().coxeter_type().to_string();
        if let Some(c) = self.load::<CellDecomposition>(&ty, PayloadKind::Cells) {
            return Ok(c);
        }
        let c = CellDecomposition::compute(h)?;
        self.store(&ty, PayloadKind::Cells, &c)?;
        Ok(c)
    }
}
