use std::path::PathBuf;

use clap::Args;
use fsparse_core::query::ConceptClass;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BuiltinClass {
    Point,
    Linear,
    Subspace,
}

/// Concept-class selection shared by the query-learning subcommands: either
/// a builtin family with its size parameters or a JSON class file.
#[derive(Debug, Args)]
pub struct ClassArgs {
    /// Builtin class family.
    #[arg(long, value_enum, conflicts_with = "class_file")]
    pub class: Option<BuiltinClass>,
    /// Domain size for the point class.
    #[arg(long = "N")]
    pub n_points: Option<usize>,
    /// Number of variables for the linear and subspace classes.
    #[arg(long)]
    pub n: Option<usize>,
    /// Sparsity parameter of the subspace class (power of two).
    #[arg(long)]
    pub k: Option<usize>,
    /// JSON class file: {"N": ..., "concepts": [...], "mu": [...]}.
    #[arg(long = "class-file")]
    pub class_file: Option<PathBuf>,
}

impl ClassArgs {
    pub fn load(&self) -> Result<ConceptClass, CliError> {
        if let Some(path) = &self.class_file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            return ConceptClass::from_json(&text)
                .map_err(|e| CliError::Usage(format!("malformed class file: {e}")));
        }
        match self.class {
            Some(BuiltinClass::Point) => {
                let n = self
                    .n_points
                    .ok_or_else(|| CliError::Usage("point class needs --N".into()))?;
                if n < 1 {
                    return Err(CliError::Usage("--N must be at least 1".into()));
                }
                Ok(ConceptClass::point(n))
            }
            Some(BuiltinClass::Linear) => {
                let n = self
                    .n
                    .ok_or_else(|| CliError::Usage("linear class needs --n".into()))?;
                if n == 0 || n > 12 {
                    return Err(CliError::Usage("--n must be in 1..=12".into()));
                }
                Ok(ConceptClass::linear(n))
            }
            Some(BuiltinClass::Subspace) => {
                let n = self
                    .n
                    .ok_or_else(|| CliError::Usage("subspace class needs --n".into()))?;
                let k = self
                    .k
                    .ok_or_else(|| CliError::Usage("subspace class needs --k".into()))?;
                ConceptClass::subspace(n, k)
                    .map_err(|e| CliError::Usage(format!("bad subspace class: {e}")))
            }
            None => Err(CliError::Usage(
                "choose a class with --class or --class-file".into(),
            )),
        }
    }

    pub fn describe(&self) -> String {
        if let Some(path) = &self.class_file {
            return format!("file:{}", path.display());
        }
        match self.class {
            Some(BuiltinClass::Point) => format!("point(N={})", self.n_points.unwrap_or(0)),
            Some(BuiltinClass::Linear) => format!("linear(n={})", self.n.unwrap_or(0)),
            Some(BuiltinClass::Subspace) => format!(
                "subspace(n={}, k={})",
                self.n.unwrap_or(0),
                self.k.unwrap_or(0)
            ),
            None => "unspecified".into(),
        }
    }
}
