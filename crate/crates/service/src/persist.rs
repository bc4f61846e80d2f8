//! Snapshot plus journal persistence. Recovery loads the snapshot and replays
//! the journal entries newer than it; checkpoints write a fresh snapshot by
//! atomic rename and then empty the journal.

use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use kgrec_core::curation::{AcceptancePolicy, Curation};
use kgrec_core::store::seed::seed_graph;
use kgrec_core::store::snapshot::{self, SnapshotError};
use thiserror::Error;

use crate::engine::{Command, Engine, EngineError, Outcome};
use crate::journal::{read_entries, Journal, JournalError};

#[derive(Debug, Error)]
pub enum PersistError {
    #[error("snapshot {path}: {source}")]
    CorruptSnapshot {
        path: PathBuf,
        source: SnapshotError,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Journal(#[from] JournalError),
}

/// Files kept next to a snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Paths {
    pub snapshot: PathBuf,
    pub journal: PathBuf,
    pub secret: PathBuf,
}

impl Paths {
    pub fn for_snapshot(snapshot: impl Into<PathBuf>) -> Self {
        let snapshot = snapshot.into();
        let with = |ext: &str| {
            let mut s = snapshot.clone().into_os_string();
            s.push(ext);
            PathBuf::from(s)
        };
        Self {
            journal: with(".journal"),
            secret: with(".secret"),
            snapshot,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PersistError + '_ {
    move |source| PersistError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `bytes` to `path` through a synced temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), PersistError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut f = File::create(&tmp).map_err(io_err(&tmp))?;
    f.write_all(bytes).map_err(io_err(&tmp))?;
    f.sync_all().map_err(io_err(&tmp))?;
    drop(f);
    fs::rename(&tmp, path).map_err(io_err(path))?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        if let Ok(d) = File::open(dir) {
            let _ = d.sync_all();
        }
    }
    Ok(())
}

pub fn load_snapshot(path: &Path) -> Result<snapshot::Snapshot, PersistError> {
    let file = File::open(path).map_err(io_err(path))?;
    snapshot::import(BufReader::new(file), AcceptancePolicy::default()).map_err(|source| {
        PersistError::CorruptSnapshot {
            path: path.to_path_buf(),
            source,
        }
    })
}

pub fn encode_snapshot(engine: &Engine, sequence: u64) -> Vec<u8> {
    let mut buf = Vec::new();
    snapshot::export(&mut buf, &engine.graph, &engine.curation, sequence)
        .expect("writing to memory");
    buf
}

/// Outcome of loading persisted state.
#[derive(Debug, Clone, PartialEq)]
pub struct Recovery {
    pub snapshot_sequence: u64,
    pub replayed: usize,
    /// Replayed commands that failed, as they did when first applied.
    pub rejected: usize,
    pub sequence: u64,
}

/// Rebuilds state from the snapshot and journal without touching either file.
pub fn recover(paths: &Paths) -> Result<(Engine, Recovery), PersistError> {
    let snap = load_snapshot(&paths.snapshot)?;
    let snapshot_sequence = snap.sequence;
    let mut engine = Engine::from(snap);
    let (entries, _) = read_entries(&paths.journal)?;
    let mut rec = Recovery {
        snapshot_sequence,
        replayed: 0,
        rejected: 0,
        sequence: snapshot_sequence,
    };
    for e in entries.iter().filter(|e| e.seq > snapshot_sequence) {
        if engine.apply(&e.command).is_err() {
            rec.rejected += 1;
        }
        rec.replayed += 1;
        rec.sequence = e.seq;
    }
    Ok((engine, rec))
}

/// Writes the built-in seed graph as a snapshot if `path` does not exist.
pub fn init_seed(path: &Path) -> Result<bool, PersistError> {
    if path.exists() {
        return Ok(false);
    }
    let engine = Engine::new(seed_graph(), Curation::default());
    write_atomic(path, &encode_snapshot(&engine, 0))?;
    Ok(true)
}

/// Single-writer owner of the persisted state.
pub struct Durable {
    paths: Paths,
    journal: Journal,
    engine: Engine,
    sequence: u64,
    snapshot_sequence: u64,
    pub checkpoint_every: u64,
}

impl Durable {
    pub fn open(paths: Paths, checkpoint_every: u64) -> Result<(Self, Recovery), PersistError> {
        let (engine, rec) = recover(&paths)?;
        let (journal, _) = Journal::open(&paths.journal)?;
        Ok((
            Self {
                paths,
                journal,
                engine,
                sequence: rec.sequence,
                snapshot_sequence: rec.snapshot_sequence,
                checkpoint_every,
            },
            rec,
        ))
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn paths(&self) -> &Paths {
        &self.paths
    }

    /// Sequence number of the last applied command.
    pub fn sequence(&self) -> u64 {
        self.sequence
    }

    /// Journals `cmd`, then applies it. The outer error means nothing was
    /// made durable; the inner result is the command's own outcome.
    pub fn execute(&mut self, cmd: &Command) -> Result<Result<Outcome, EngineError>, PersistError> {
        let seq = self.sequence + 1;
        self.journal.append(seq, cmd)?;
        self.sequence = seq;
        let outcome = self.engine.apply(cmd);
        if self.checkpoint_every > 0 && seq - self.snapshot_sequence >= self.checkpoint_every {
            self.checkpoint()?;
        }
        Ok(outcome)
    }

    pub fn checkpoint(&mut self) -> Result<(), PersistError> {
        write_atomic(
            &self.paths.snapshot,
            &encode_snapshot(&self.engine, self.sequence),
        )?;
        self.snapshot_sequence = self.sequence;
        self.journal.reset()?;
        Ok(())
    }
}
