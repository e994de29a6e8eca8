//! Command-line front end: spec text, report documents, scan files.

pub mod app;
pub mod report;
pub mod scan_io;
pub mod spec_text;

pub use app::run;
