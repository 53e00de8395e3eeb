use std::collections::VecDeque;
use std::fmt;

use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine as _;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::command::{Command, CommandError};
use super::Chart;
use crate::line_extraction::{ExtractionError, RasterImage};

pub const HISTORY_DEPTH: usize = 200;
const TOKEN_BYTES: usize = 16;

/// Opaque session identifier: 128 random bits, URL-safe base64 without
/// padding. `Debug` hides the value so it does not end up in logs.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SessionToken(String);

impl SessionToken {
    pub fn generate() -> Self {
        let mut bytes = [0u8; TOKEN_BYTES];
        rand::rng().fill_bytes(&mut bytes);
        Self(URL_SAFE_NO_PAD.encode(bytes))
    }

    pub fn parse(text: &str) -> Option<Self> {
        let bytes = URL_SAFE_NO_PAD.decode(text).ok()?;
        (bytes.len() == TOKEN_BYTES).then(|| Self(text.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for SessionToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SessionToken(<redacted>)")
    }
}

impl TryFrom<String> for SessionToken {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        Self::parse(&s).ok_or_else(|| "malformed session token".to_string())
    }
}

impl From<SessionToken> for String {
    fn from(t: SessionToken) -> String {
        t.0
    }
}

/// One accepted patch: what to replay and how to take it back. Inverses
/// are stored in the order they must run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub forward: Vec<Command>,
    pub inverse: Vec<Command>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct History {
    pub undo: VecDeque<HistoryEntry>,
    pub redo: Vec<HistoryEntry>,
    pub depth: usize,
}

impl Default for History {
    fn default() -> Self {
        Self {
            undo: VecDeque::new(),
            redo: Vec::new(),
            depth: HISTORY_DEPTH,
        }
    }
}

impl History {
    fn record(&mut self, entry: HistoryEntry) {
        self.redo.clear();
        self.push_undo(entry);
    }

    fn push_undo(&mut self, entry: HistoryEntry) {
        self.undo.push_back(entry);
        while self.undo.len() > self.depth.max(1) {
            self.undo.pop_front();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionPatch {
    pub base_version: u64,
    pub commands: Vec<Command>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum PatchOutcome {
    Applied { version: u64 },
    /// Someone else wrote first; nothing was applied.
    Conflict { version: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum HistoryOutcome {
    Applied { version: u64 },
    EmptyHistory { version: u64 },
}

/// The persisted part of a session. Serializing it and reading it back
/// yields an equal value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionState {
    pub token: SessionToken,
    pub version: u64,
    pub consent: bool,
    pub chart: Chart,
    pub history: History,
}

/// A conversion session: the chart, its edit history and the source image.
#[derive(Clone, Debug)]
pub struct ChartSession {
    state: SessionState,
    image: RasterImage,
    image_bytes: Vec<u8>,
}

impl ChartSession {
    /// Starts a session on an uploaded PNG or JPEG.
    pub fn create(image_bytes: Vec<u8>, consent: bool) -> Result<Self, ExtractionError> {
        let image = RasterImage::decode(&image_bytes)?;
        let (w, h) = image.dimensions();
        let chart = Chart::new(w, h).map_err(|e| ExtractionError::InvalidInput(e.to_string()))?;
        Ok(Self {
            state: SessionState {
                token: SessionToken::generate(),
                version: 0,
                consent,
                chart,
                history: History::default(),
            },
            image,
            image_bytes,
        })
    }

    /// Replaces the render options of a session that has no history yet.
    pub fn with_options(mut self, options: super::RenderOptions) -> Self {
        self.state.chart.options = options;
        self
    }

    /// Rebuilds a session from a snapshot and the original image bytes.
    pub fn restore(state: SessionState, image_bytes: Vec<u8>) -> Result<Self, ExtractionError> {
        let image = RasterImage::decode(&image_bytes)?;
        if image.dimensions() != state.chart.image_size {
            return Err(ExtractionError::DimensionMismatch {
                expected: state.chart.image_size,
                actual: image.dimensions(),
            });
        }
        Ok(Self {
            state,
            image,
            image_bytes,
        })
    }

    pub fn state(&self) -> &SessionState {
        &self.state
    }

    pub fn token(&self) -> &SessionToken {
        &self.state.token
    }

    pub fn version(&self) -> u64 {
        self.state.version
    }

    pub fn consent(&self) -> bool {
        self.state.consent
    }

    pub fn chart(&self) -> &Chart {
        &self.state.chart
    }

    pub fn history(&self) -> &History {
        &self.state.history
    }

    pub fn image(&self) -> &RasterImage {
        &self.image
    }

    pub fn image_bytes(&self) -> &[u8] {
        &self.image_bytes
    }

    /// Applies every command or none. A stale `base_version` is a
    /// conflict, not an error.
    pub fn apply_patch(&mut self, patch: &SessionPatch) -> Result<PatchOutcome, CommandError> {
        if patch.commands.is_empty() {
            return Err(CommandError::EmptyPatch);
        }
        if patch.base_version != self.state.version {
            return Ok(PatchOutcome::Conflict {
                version: self.state.version,
            });
        }
        let mut chart = self.state.chart.clone();
        let mut forward = Vec::with_capacity(patch.commands.len());
        let mut inverse = Vec::with_capacity(patch.commands.len());
        for cmd in &patch.commands {
            let applied = cmd.apply(&mut chart)?;
            forward.push(applied.forward);
            inverse.push(applied.inverse);
        }
        inverse.reverse();
        self.state.chart = chart;
        self.state.history.record(HistoryEntry { forward, inverse });
        self.state.version += 1;
        Ok(PatchOutcome::Applied {
            version: self.state.version,
        })
    }

    fn replay(&self, commands: &[Command]) -> Result<Chart, CommandError> {
        let mut chart = self.state.chart.clone();
        for cmd in commands {
            cmd.apply(&mut chart)?;
        }
        Ok(chart)
    }

    pub fn undo(&mut self) -> Result<HistoryOutcome, CommandError> {
        let Some(entry) = self.state.history.undo.back() else {
            return Ok(HistoryOutcome::EmptyHistory {
                version: self.state.version,
            });
        };
        let chart = self.replay(&entry.inverse)?;
        let entry = self.state.history.undo.pop_back().expect("checked above");
        self.state.chart = chart;
        self.state.history.redo.push(entry);
        self.state.version += 1;
        Ok(HistoryOutcome::Applied {
            version: self.state.version,
        })
    }

    pub fn redo(&mut self) -> Result<HistoryOutcome, CommandError> {
        let Some(entry) = self.state.history.redo.last() else {
            return Ok(HistoryOutcome::EmptyHistory {
                version: self.state.version,
            });
        };
        let chart = self.replay(&entry.forward)?;
        let entry = self.state.history.redo.pop().expect("checked above");
        self.state.chart = chart;
        self.state.history.push_undo(entry);
        self.state.version += 1;
        Ok(HistoryOutcome::Applied {
            version: self.state.version,
        })
    }
}
