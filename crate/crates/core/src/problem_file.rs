//! TOML problem descriptions.
//!
//! ```toml
//! name = "fl23-5"
//! n = 5
//! alpha = [2, 3]
//!
//! [[conditions]]
//! perm = [1, 3, 2, 4, 5]
//! count = 4
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::schubert::{
    validate_problem, FlagType, InvalidReason, Permutation, SchubertError, SchubertProblem, Validity,
};

#[derive(Debug, Error)]
pub enum ProblemFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed problem file: {0}")]
    Parse(#[from] toml::de::Error),
    #[error(transparent)]
    Schubert(#[from] SchubertError),
    #[error("invalid problem: {0}")]
    Invalid(InvalidReason),
}

impl ProblemFileError {
    /// True for errors in the file's syntax or shape rather than its content.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, ProblemFileError::Io { .. } | ProblemFileError::Parse(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionSpec {
    pub perm: Vec<usize>,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default)]
    pub name: Option<String>,
    pub n: usize,
    pub alpha: Vec<usize>,
    pub conditions: Vec<ConditionSpec>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, ProblemFileError> {
        Ok(toml::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self, ProblemFileError> {
        let text = std::fs::read_to_string(path).map_err(|source| ProblemFileError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn to_problem(&self) -> Result<SchubertProblem, SchubertError> {
        let ft = FlagType::new(self.alpha.clone(), self.n)?;
        let conditions = self
            .conditions
            .iter()
            .map(|c| Ok((Permutation::new(c.perm.clone())?, c.count)))
            .collect::<Result<Vec<_>, SchubertError>>()?;
        Ok(SchubertProblem::new(ft, conditions))
    }
}

/// A validated problem together with the id used in result files.
#[derive(Clone, Debug)]
pub struct LoadedProblem {
    pub id: String,
    pub problem: SchubertProblem,
}

impl LoadedProblem {
    pub fn from_file(file: &ProblemFile) -> Result<Self, ProblemFileError> {
        let problem = file.to_problem()?;
        if let Validity::Invalid(reason) = validate_problem(&problem) {
            return Err(ProblemFileError::Invalid(reason));
        }
        let id = file.name.clone().unwrap_or_else(|| problem.canonical_id());
        Ok(LoadedProblem { id, problem })
    }
}

/// Reads, parses and validates a problem file.
pub fn load_problem(path: &Path) -> Result<LoadedProblem, ProblemFileError> {
    LoadedProblem::from_file(&ProblemFile::read(path)?)
}
