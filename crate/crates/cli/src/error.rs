use std::path::PathBuf;

use zeta_resonance::Error;

#[derive(Debug)]
pub enum CliError {
    Clap(clap::Error),
    Usage(String),
    Io { path: PathBuf, source: std::io::Error },
    Lib(Error),
}

impl CliError {
    /// 2 usage, 3 domain or I/O, 4 internal consistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) => e.exit_code(),
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Lib(e) if e.is_internal() => 4,
            CliError::Lib(_) => 3,
        }
    }

    pub fn report(&self) {
        match self {
            CliError::Clap(e) => {
                let _ = e.print();
            }
            CliError::Usage(msg) => eprintln!("usage error: {msg}"),
            CliError::Io { path, source } => eprintln!("error: cannot access {}: {source}", path.display()),
            CliError::Lib(e) => eprintln!("error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}
