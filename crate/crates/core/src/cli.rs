//! Command-line front end.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;

use crate::rules::Options;
use crate::{schema, translate, Config, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_TRANSLATION: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

/// Translate an XML Schema (XSD 1.0) document into JSON Schema (Draft 04).
#[derive(Debug, Clone, Parser)]
#[command(name = "xsd2jsonschema", version)]
pub struct CliConfig {
    /// XSD file to translate, or `-` for standard input.
    #[arg(default_value = "-")]
    pub input: PathBuf,

    /// Emit compact JSON instead of pretty-printed output.
    #[arg(long)]
    pub compact: bool,

    /// Spaces per indentation level in pretty output.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=8))]
    pub indent: u8,

    /// Wrap every sequence member in an array schema, including maxOccurs="1".
    #[arg(long)]
    pub always_array: bool,

    /// Keep the `@` prefix on properties translated from XML attributes.
    #[arg(long)]
    pub keep_at_prefix: bool,

    /// Fail on any construct that cannot be translated.
    #[arg(long)]
    pub strict: bool,

    /// Add "$schema": "http://json-schema.org/draft-04/schema#" to the output.
    #[arg(long)]
    pub emit_schema_key: bool,

    /// Print the fact store after default injection and exit.
    #[arg(long)]
    pub dump_facts: bool,
}

impl CliConfig {
    pub fn pretty(&self) -> bool {
        !self.compact
    }

    pub fn translation_config(&self) -> Config {
        Config {
            rules: Options {
                always_array: self.always_array,
            },
            keep_at_prefix: self.keep_at_prefix,
            strict: self.strict,
            emit_schema_key: self.emit_schema_key,
        }
    }
}

/// Runs the tool with explicit streams and returns the process exit code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };

    let input = match read_input(&config, stdin) {
        Ok(bytes) => bytes,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_INPUT;
        }
    };

    if config.dump_facts {
        return match crate::load_facts(&input) {
            Ok(store) => {
                let _ = write!(stdout, "{}", store.dump());
                EXIT_OK
            }
            Err(e) => report(stderr, &e),
        };
    }

    match translate(&input, &config.translation_config()) {
        Ok(report) => {
            for w in &report.warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            let text = schema::serialize(&report.schema, config.pretty(), config.indent.into());
            if writeln!(stdout, "{text}").is_err() {
                return EXIT_INPUT;
            }
            EXIT_OK
        }
        Err(e) => report(stderr, &e),
    }
}

fn read_input(config: &CliConfig, stdin: &mut dyn Read) -> Result<Vec<u8>, String> {
    let mut bytes = Vec::new();
    if config.input.as_os_str() == "-" {
        stdin
            .read_to_end(&mut bytes)
            .map_err(|e| format!("cannot read standard input: {e}"))?;
    } else {
        bytes = std::fs::read(&config.input)
            .map_err(|e| format!("cannot read {}: {e}", config.input.display()))?;
    }
    Ok(bytes)
}

fn report(stderr: &mut dyn Write, error: &Error) -> i32 {
    let _ = writeln!(stderr, "error: {error}");
    match error {
        Error::Xml(_) => EXIT_INPUT,
        Error::Rule(_) | Error::Strict { .. } => EXIT_TRANSLATION,
    }
}
