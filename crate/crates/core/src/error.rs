//! Error type shared by all modules.

use thiserror::Error;

/// Everything fallible in this crate returns this error.
///
/// The variants matter operationally: `Capacity` means a configured size
/// guard tripped (the computation was refused, not wrong), `Invalid` means
/// the input was malformed or out of domain, and `Verification` means an
/// expected-to-pass mathematical check failed — which signals a bug in the
/// engine or a genuine counterexample, and always carries a witness in the
/// message.
#[derive(Debug, Error)]
pub enum Error {
    /// A configured size bound was exceeded; the result was not computed.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// The input does not satisfy the operation's preconditions.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A structure failed its defining axioms at construction time.
    #[error("axiom violation: {0}")]
    Axiom(String),

    /// An expected-to-pass verification failed; the message carries a witness.
    #[error("verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
