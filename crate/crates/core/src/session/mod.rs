//! Chart state, typed edit commands and versioned sessions with undo.

mod chart;
mod command;
mod state;

pub use chart::{
    label_value, Chart, Completeness, IncompleteSession, RenderOptions, SeriesData, SeriesEntry, MISSING_CALIBRATION,
    MISSING_SERIES,
};
pub use command::{Applied, AnchorValue, Command, CommandError, ANCHOR_SLACK};
pub use state::{
    ChartSession, History, HistoryEntry, HistoryOutcome, PatchOutcome, SessionPatch, SessionState, SessionToken,
    HISTORY_DEPTH,
};
