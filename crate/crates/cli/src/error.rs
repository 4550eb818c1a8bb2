use std::fmt;
use std::path::Path;

use solvcrypt::composite::CompositeError;
use solvcrypt::cyclic::CyclicError;
use solvcrypt::groups::GroupError;
use solvcrypt::numtheory::NumError;

/// Error kinds with stable exit codes.
#[derive(Debug)]
pub enum CliError {
    NotSolvable(String),
    SizeBudget(String),
    KeyMismatch(String),
    Malformed(String),
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Other(_) => 1,
            CliError::NotSolvable(_) => 2,
            CliError::SizeBudget(_) => 3,
            CliError::KeyMismatch(_) => 4,
            CliError::Malformed(_) => 5,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Other(format!("{}: {e}", path.display()))
    }

    /// Prefixes the message with the file it came from.
    pub fn in_file(self, path: &Path) -> Self {
        let p = path.display();
        match self {
            CliError::NotSolvable(m) => CliError::NotSolvable(format!("{p}: {m}")),
            CliError::SizeBudget(m) => CliError::SizeBudget(format!("{p}: {m}")),
            CliError::KeyMismatch(m) => CliError::KeyMismatch(format!("{p}: {m}")),
            CliError::Malformed(m) => CliError::Malformed(format!("{p}: {m}")),
            CliError::Other(m) => CliError::Other(format!("{p}: {m}")),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::NotSolvable(m)
            | CliError::SizeBudget(m)
            | CliError::KeyMismatch(m)
            | CliError::Malformed(m)
            | CliError::Other(m) => f.write_str(m),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::NotSolvable { .. } => CliError::NotSolvable(e.to_string()),
            GroupError::SizeBudgetExceeded { .. } => CliError::SizeBudget(e.to_string()),
            GroupError::Format(_) | GroupError::Invalid(_) => CliError::Malformed(e.to_string()),
            _ => CliError::Other(e.to_string()),
        }
    }
}

impl From<CyclicError> for CliError {
    fn from(e: CyclicError) -> Self {
        match e {
            CyclicError::Format(_) | CyclicError::InvalidKey(_) => CliError::Malformed(e.to_string()),
            _ => CliError::Other(e.to_string()),
        }
    }
}

impl From<NumError> for CliError {
    fn from(e: NumError) -> Self {
        CliError::Other(e.to_string())
    }
}

impl From<CompositeError> for CliError {
    fn from(e: CompositeError) -> Self {
        match e {
            CompositeError::Group(g) => g.into(),
            CompositeError::KeyMismatch { .. } => CliError::KeyMismatch(e.to_string()),
            CompositeError::Cyclic(c) => c.into(),
            CompositeError::Word(_)
            | CompositeError::Format(_)
            | CompositeError::Plaintext(_)
            | CompositeError::InvalidKey(_)
            | CompositeError::Subgroup(_) => CliError::Malformed(e.to_string()),
            CompositeError::Proof(_) => CliError::Other(e.to_string()),
        }
    }
}
