//! Pipeline, reporting and rendering behind the `pwe` command.

pub mod fsio;
pub mod pipeline;
pub mod render;
pub mod report;
