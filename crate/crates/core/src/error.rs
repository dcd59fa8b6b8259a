use thiserror::Error;

use crate::model::{ChannelKind, ChannelRef};

/// Errors raised by the model constructors and structural queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid identifier: {0}")]
    InvalidIdentifier(String),

    #[error("duplicate component `{0}`")]
    DuplicateComponent(String),

    #[error("unknown component `{0}`")]
    UnknownComponent(String),

    #[error("duplicate {kind} `{name}`")]
    DuplicateChannel { kind: ChannelKind, name: String },

    #[error("duplicate medium `{0}`")]
    DuplicateMedium(String),

    #[error("{kind} `{channel}` has more than one server: `{first}` and `{second}`")]
    MultipleServers {
        kind: ChannelKind,
        channel: String,
        first: String,
        second: String,
    },

    #[error("medium `{medium}` has no members")]
    EmptyMedium { medium: String },

    #[error("medium `{medium}` references `{member}` which resolves to no connection")]
    DanglingMediumMember { medium: String, member: ChannelRef },
}
