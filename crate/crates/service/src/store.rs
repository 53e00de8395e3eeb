//! In-memory session table with optional on-disk snapshots.
//!
//! Layout: `<data_dir>/<token>/session.json` next to `<data_dir>/<token>/image`.
//! Only sessions created with consent are written.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use tactichart_core::session::{ChartSession, SessionState, SessionToken};

pub const SNAPSHOT_FILE: &str = "session.json";
pub const IMAGE_FILE: &str = "image";

pub type SessionHandle = Arc<Mutex<ChartSession>>;

#[derive(Default)]
pub struct Store {
    sessions: RwLock<HashMap<SessionToken, SessionHandle>>,
    data_dir: Option<PathBuf>,
}

impl Store {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens `dir`, creating it if needed, and loads every snapshot in it.
    /// Unreadable entries are skipped with a warning.
    pub fn open(dir: impl Into<PathBuf>) -> anyhow::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        let mut sessions = HashMap::new();
        for entry in fs::read_dir(&dir)? {
            let path = entry?.path();
            if !path.is_dir() {
                continue;
            }
            match load(&path) {
                Ok(s) => {
                    sessions.insert(s.token().clone(), Arc::new(Mutex::new(s)));
                }
                Err(e) => tracing::warn!("skipping unreadable session directory: {e}"),
            }
        }
        tracing::info!(count = sessions.len(), "loaded persisted sessions");
        Ok(Self {
            sessions: RwLock::new(sessions),
            data_dir: Some(dir),
        })
    }

    pub fn data_dir(&self) -> Option<&Path> {
        self.data_dir.as_deref()
    }

    pub fn insert(&self, session: ChartSession) -> anyhow::Result<SessionHandle> {
        self.persist(&session)?;
        let token = session.token().clone();
        let handle = Arc::new(Mutex::new(session));
        self.sessions
            .write()
            .expect("session table lock")
            .insert(token, handle.clone());
        Ok(handle)
    }

    pub fn get(&self, token: &str) -> Option<SessionHandle> {
        let token = SessionToken::parse(token)?;
        self.sessions.read().expect("session table lock").get(&token).cloned()
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session table lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Writes the snapshot if the session has consent and a data
    /// directory is configured. Files are replaced atomically.
    pub fn persist(&self, session: &ChartSession) -> anyhow::Result<()> {
        let Some(root) = &self.data_dir else {
            return Ok(());
        };
        if !session.consent() {
            return Ok(());
        }
        let dir = root.join(session.token().as_str());
        fs::create_dir_all(&dir)?;
        let image = dir.join(IMAGE_FILE);
        if !image.exists() {
            write_atomic(&image, session.image_bytes())?;
        }
        write_atomic(&dir.join(SNAPSHOT_FILE), &snapshot_bytes(session.state())?)?;
        Ok(())
    }
}

pub fn snapshot_bytes(state: &SessionState) -> anyhow::Result<Vec<u8>> {
    Ok(serde_json::to_vec_pretty(state)?)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn load(dir: &Path) -> anyhow::Result<ChartSession> {
    let state: SessionState = serde_json::from_slice(&fs::read(dir.join(SNAPSHOT_FILE))?)?;
    let image = fs::read(dir.join(IMAGE_FILE))?;
    Ok(ChartSession::restore(state, image)?)
}
