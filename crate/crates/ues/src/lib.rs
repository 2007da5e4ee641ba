//! Elicitation service: a file-backed session store, an HTTP JSON API and
//! the batch pipeline that scores submitted sessions.

pub mod api;
pub mod error;
pub mod pipeline;
pub mod report;
pub mod session;
pub mod store;

pub use error::{Result, ServiceError};
pub use session::{Session, SessionState};
pub use store::Store;
