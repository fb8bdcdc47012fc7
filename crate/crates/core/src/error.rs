use thiserror::Error;

/// Failure of a library operation. Every variant names the operation that raised it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: domain error: {msg}")]
    Domain { op: &'static str, msg: String },
    #[error("{op}: resource limit exceeded: {msg}")]
    Resource { op: &'static str, msg: String },
    #[error("{op}: numerical failure: {msg}")]
    Numeric { op: &'static str, msg: String },
    #[error("{op}: invariant violated: {msg}")]
    Invariant { op: &'static str, msg: String },
    #[error("{op}: lookup failed: {msg}")]
    Lookup { op: &'static str, msg: String },
    #[error("{op}: invalid parameter: {msg}")]
    Validation { op: &'static str, msg: String },
}

impl Error {
    pub fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }

    pub fn resource(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Resource {
            op,
            msg: msg.into(),
        }
    }

    pub fn numeric(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Numeric {
            op,
            msg: msg.into(),
        }
    }

    pub fn invariant(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Invariant {
            op,
            msg: msg.into(),
        }
    }

    pub fn lookup(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Lookup {
            op,
            msg: msg.into(),
        }
    }

    pub fn validation(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Validation {
            op,
            msg: msg.into(),
        }
    }

    /// Name of the operation that failed.
    pub fn op(&self) -> &'static str {
        match self {
            Error::Domain { op, .. }
            | Error::Resource { op, .. }
            | Error::Numeric { op, .. }
            | Error::Invariant { op, .. }
            | Error::Lookup { op, .. }
            | Error::Validation { op, .. } => op,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
