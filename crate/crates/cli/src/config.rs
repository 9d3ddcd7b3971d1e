//! Config-file layering: values from the file are appended as flags unless the
//! same flag already came from the command line or a ZRES_* variable.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::parser::ValueSource;
use clap::CommandFactory;
use serde_json::Value;

use crate::args::Cli;
use crate::error::CliError;

pub fn resolve_argv(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut cmd = Cli::command();
    let matches = cmd.clone().try_get_matches_from(&argv).map_err(CliError::Clap)?;
    let Some(path) = matches.get_one::<PathBuf>("config").cloned() else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("config file {} is not valid JSON: {e}", path.display())))?;
    let Value::Object(entries) = value else {
        return Err(CliError::Usage(format!(
            "config file {} must hold a flat JSON object",
            path.display()
        )));
    };

    let (sub_name, sub_matches) = matches.subcommand().expect("subcommand is required");
    cmd.build();
    let sub = cmd.find_subcommand(sub_name).expect("parsed subcommand exists");

    let mut extra = Vec::new();
    for (key, val) in entries {
        if key == "config" {
            return Err(CliError::Usage("config files cannot name another config file".into()));
        }
        let Some(arg) = sub.get_arguments().find(|a| a.get_long() == Some(key.as_str())) else {
            return Err(CliError::Usage(format!("unknown config key '{key}' for '{sub_name}'")));
        };
        let source = sub_matches.value_source(arg.get_id().as_str());
        if matches!(source, Some(ValueSource::CommandLine | ValueSource::EnvVariable)) {
            continue;
        }
        match val {
            Value::Null | Value::Bool(false) => {}
            Value::Bool(true) => extra.push(OsString::from(format!("--{key}"))),
            Value::Number(n) => extra.push(OsString::from(format!("--{key}={n}"))),
            Value::String(s) => extra.push(OsString::from(format!("--{key}={s}"))),
            Value::Array(_) | Value::Object(_) => {
                return Err(CliError::Usage(format!("config key '{key}' must hold a scalar")));
            }
        }
    }
    let mut argv = argv;
    argv.extend(extra);
    Ok(argv)
}
