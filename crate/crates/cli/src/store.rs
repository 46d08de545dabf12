//! Append-only JSON Lines store of classification records.
//!
//! The first line is a header naming the schema, its version and the scope;
//! every further line is one record. Records are keyed by canonical code and
//! the first occurrence of a key wins.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use octant_core::{ClassificationRecord, Scope};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA: &str = "octant-classification";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub schema: String,
    pub version: u32,
    pub scope: Scope,
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {msg}")]
    Io { path: PathBuf, msg: String },
    #[error("{path}: schema mismatch: found {found}, expected {SCHEMA} version {VERSION}")]
    SchemaMismatch { path: PathBuf, found: String },
    #[error("{path}: store holds scope {found}, not {wanted}")]
    ScopeMismatch { path: PathBuf, found: Scope, wanted: Scope },
    #[error("{path}:{line}: corrupt record: {msg}")]
    Corrupt { path: PathBuf, line: usize, msg: String },
}

pub struct Store {
    path: PathBuf,
    file: File,
    records: Records,
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> StoreError + '_ {
    move |e| StoreError::Io {
        path: path.to_path_buf(),
        msg: e.to_string(),
    }
}

type Records = BTreeMap<String, ClassificationRecord>;

/// Header and records of an existing store, plus the byte length of its
/// complete lines (an unterminated last line is ignored).
fn read(path: &Path) -> Result<Option<(Scope, Records, u64)>, StoreError> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(io_err(path)(e)),
    };
    let mut reader = BufReader::new(file);
    let mut line = String::new();
    let mut good = 0u64;
    let mut header: Option<Header> = None;
    let mut records = BTreeMap::new();
    let mut lineno = 0;
    loop {
        line.clear();
        let k = reader.read_line(&mut line).map_err(io_err(path))?;
        if k == 0 || !line.ends_with('\n') {
            break;
        }
        lineno += 1;
        let text = line.trim_end();
        match &header {
            None => {
                let h: Header = serde_json::from_str(text).map_err(|_| StoreError::SchemaMismatch {
                    path: path.to_path_buf(),
                    found: text.chars().take(80).collect(),
                })?;
                if h.schema != SCHEMA || h.version != VERSION {
                    return Err(StoreError::SchemaMismatch {
                        path: path.to_path_buf(),
                        found: format!("{} version {}", h.schema, h.version),
                    });
                }
                header = Some(h);
            }
            Some(_) => {
                let r: ClassificationRecord = serde_json::from_str(text).map_err(|e| StoreError::Corrupt {
                    path: path.to_path_buf(),
                    line: lineno,
                    msg: e.to_string(),
                })?;
                records.entry(r.code.clone()).or_insert(r);
            }
        }
        good += k as u64;
    }
    Ok(header.map(|h| (h.scope, records, good)))
}

impl Store {
    /// Opens or creates a store for `scope`, refusing stores of another
    /// schema or scope.
    pub fn open(path: &Path, scope: Scope) -> Result<Store, StoreError> {
        let existing = read(path)?;
        let mut file = OpenOptions::new()
            .create(true)
            .read(true)
            .write(true)
            .truncate(false)
            .open(path)
            .map_err(io_err(path))?;
        let records = match existing {
            Some((found, records, good)) => {
                if found != scope {
                    return Err(StoreError::ScopeMismatch {
                        path: path.to_path_buf(),
                        found,
                        wanted: scope,
                    });
                }
                // drop a partially written last line
                file.set_len(good).map_err(io_err(path))?;
                records
            }
            None => {
                file.set_len(0).map_err(io_err(path))?;
                let h = Header {
                    schema: SCHEMA.into(),
                    version: VERSION,
                    scope,
                };
                let text = serde_json::to_string(&h).expect("header serializes");
                writeln!(file, "{text}").map_err(io_err(path))?;
                BTreeMap::new()
            }
        };
        file.seek(SeekFrom::End(0)).map_err(io_err(path))?;
        Ok(Store {
            path: path.to_path_buf(),
            file,
            records,
        })
    }

    /// Reads a store without modifying it.
    pub fn load(path: &Path) -> Result<(Scope, Records), StoreError> {
        match read(path)? {
            Some((scope, records, _)) => Ok((scope, records)),
            None => Err(StoreError::SchemaMismatch {
                path: path.to_path_buf(),
                found: "no header".into(),
            }),
        }
    }

    pub fn records(&self) -> &Records {
        &self.records
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&mut self, r: &ClassificationRecord) -> Result<(), StoreError> {
        if self.records.contains_key(&r.code) {
            return Ok(());
        }
        let text = serde_json::to_string(r).expect("record serializes");
        writeln!(self.file, "{text}").map_err(io_err(&self.path))?;
        self.file.flush().map_err(io_err(&self.path))?;
        self.records.insert(r.code.clone(), r.clone());
        Ok(())
    }
}
