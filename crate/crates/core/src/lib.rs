//! Core engine: the self-describing array model, calendar and filename
//! templates, data-set URIs, the virtual filesystem, data-source plug-ins,
//! aggregation, the application DOM, and plot rendering.

pub mod calendar;
pub mod qdataset;
pub mod datasource;
pub mod uri;
pub mod vfs;
pub mod aggregation;
pub mod engine;
pub mod dom;
pub mod render;
pub mod samples;
