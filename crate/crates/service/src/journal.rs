//! Append-only JSONL command journal. Each entry is fsynced before the
//! command it carries is applied; a torn final line left by a crash is cut off
//! on open.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::Command;

#[derive(Debug, Error)]
pub enum JournalError {
    #[error("journal {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("journal {path} is corrupt at line {line}: {message}")]
    Corrupt {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub seq: u64,
    /// Unix milliseconds at append time; informational only.
    pub at: u64,
    pub command: Command,
}

pub struct Journal {
    path: PathBuf,
    file: File,
}

fn now_millis() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

/// Reads entries without modifying the file. Returns the entries and the byte
/// length of the valid prefix.
pub fn read_entries(path: &Path) -> Result<(Vec<Entry>, u64), JournalError> {
    let io = |source| JournalError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((Vec::new(), 0)),
        Err(e) => return Err(io(e)),
    };
    let mut reader = BufReader::new(file);
    let mut entries: Vec<Entry> = Vec::new();
    let mut valid = 0u64;
    let mut line = String::new();
    let mut line_no = 0;
    let mut pending_error: Option<(usize, String)> = None;
    loop {
        line.clear();
        let n = reader.read_line(&mut line).map_err(io)?;
        if n == 0 {
            break;
        }
        line_no += 1;
        if let Some((l, message)) = pending_error.take() {
            // a bad line followed by more data is not a torn tail
            return Err(JournalError::Corrupt {
                path: path.to_path_buf(),
                line: l,
                message,
            });
        }
        if !line.ends_with('\n') {
            log::warn!("{}: discarding torn final line", path.display());
            break;
        }
        match serde_json::from_str::<Entry>(line.trim_end()) {
            Ok(e) => {
                if entries.last().is_some_and(|p| e.seq <= p.seq) {
                    return Err(JournalError::Corrupt {
                        path: path.to_path_buf(),
                        line: line_no,
                        message: format!("sequence {} does not increase", e.seq),
                    });
                }
                entries.push(e);
                valid += n as u64;
            }
            Err(e) => pending_error = Some((line_no, e.to_string())),
        }
    }
    if pending_error.is_some() {
        log::warn!("{}: discarding unparsable final line", path.display());
    }
    Ok((entries, valid))
}

impl Journal {
    /// Opens (creating if needed) and truncates any torn tail.
    pub fn open(path: &Path) -> Result<(Self, Vec<Entry>), JournalError> {
        let io = |source| JournalError::Io {
            path: path.to_path_buf(),
            source,
        };
        let (entries, valid) = read_entries(path)?;
        let mut file = OpenOptions::new()
            .create(true)
            .read(true)
            .write(true)
            .truncate(false)
            .open(path)
            .map_err(io)?;
        if file.metadata().map_err(io)?.len() != valid {
            file.set_len(valid).map_err(io)?;
            file.sync_all().map_err(io)?;
        }
        file.seek(SeekFrom::End(0)).map_err(io)?;
        Ok((
            Self {
                path: path.to_path_buf(),
                file,
            },
            entries,
        ))
    }

    /// Appends and syncs one entry.
    pub fn append(&mut self, seq: u64, command: &Command) -> Result<(), JournalError> {
        let entry = Entry {
            seq,
            at: now_millis(),
            command: command.clone(),
        };
        let mut line = serde_json::to_vec(&entry).expect("commands serialize");
        line.push(b'\n');
        let io = |source| JournalError::Io {
            path: self.path.clone(),
            source,
        };
        self.file.write_all(&line).map_err(io)?;
        self.file.sync_data().map_err(io)
    }

    /// Empties the journal after a checkpoint made its entries redundant.
    pub fn reset(&mut self) -> Result<(), JournalError> {
        let io = |source| JournalError::Io {
            path: self.path.clone(),
            source,
        };
        self.file.set_len(0).map_err(io)?;
        self.file.seek(SeekFrom::Start(0)).map_err(io)?;
        self.file.sync_all().map_err(io)
    }
}
