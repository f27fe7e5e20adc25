//! Append-only result cache: one JSON object per line, newest entry wins.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::record::ResultRecord;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub command: String,
    pub n: i64,
    pub bits: Option<u32>,
}

impl CacheKey {
    pub fn new(command: &str, n: i64, bits: Option<u32>) -> Self {
        CacheKey {
            command: command.to_owned(),
            n,
            bits,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: CacheKey,
    record: ResultRecord,
}

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    entries: HashMap<CacheKey, ResultRecord>,
}

impl Cache {
    /// Loads the cache; a missing file is an empty cache. Lines that fail to
    /// parse (e.g. a torn final write) are skipped.
    pub fn open(path: &Path) -> io::Result<Self> {
        let mut entries = HashMap::new();
        match File::open(path) {
            Ok(file) => {
                for line in BufReader::new(file).lines() {
                    let line = line?;
                    if let Ok(e) = serde_json::from_str::<Entry>(&line) {
                        entries.insert(e.key, e.record);
                    }
                }
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        Ok(Cache {
            path: path.to_owned(),
            entries,
        })
    }

    pub fn get(&self, key: &CacheKey) -> Option<&ResultRecord> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Appends entries in the given order with a single write.
    pub fn append(&mut self, items: Vec<(CacheKey, ResultRecord)>) -> io::Result<()> {
        if items.is_empty() {
            return Ok(());
        }
        let mut buf = String::new();
        for (key, record) in items {
            let entry = Entry { key, record };
            buf.push_str(&serde_json::to_string(&entry).map_err(io::Error::other)?);
            buf.push('\n');
            self.entries.insert(entry.key, entry.record);
        }
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        file.write_all(buf.as_bytes())?;
        file.flush()
    }
}
