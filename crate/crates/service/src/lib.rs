//! HTTP service and command-line front end: stateless plot, data and
//! completion endpoints, DOM sessions, and PNG walks.

pub mod cli;
pub mod error;
pub mod pngwalk;
pub mod requests;
pub mod server;
pub mod session;

pub use error::{ErrorBody, ServiceError, Status};
pub use requests::{DataFormat, PlotRequest};
pub use server::{router, serve, ServiceConfig, REVISION_HEADER};
pub use session::{dom_document, Sessions};
