//! HTTP session service and headless conversion for tactichart.

pub mod api;
pub mod config;
pub mod pipeline;
pub mod store;
