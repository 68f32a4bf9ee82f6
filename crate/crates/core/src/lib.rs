//! Translation of XML Schema (XSD 1.0) documents into JSON Schema Draft-04.
//!
//! The pipeline runs in fixed stages:
//!
//! 1. [`xml::parse_document`] reads the XSD into a namespace-aware tree.
//! 2. [`facts::flatten`] turns the tree into node, attribute and text facts.
//! 3. [`defaults::inject_defaults`] adds implied attributes such as `minOccurs="1"`.
//! 4. [`rules::run_to_fixpoint`] applies the translation rules until nothing new fires.
//! 5. [`finalize::wrap_definitions`] picks the root and collects global types.
//! 6. [`finalize::cleanup_at_prefix`] drops the `@` marker from attribute properties.
//!
//! [`translate`] runs all of them.

pub mod cli;
pub mod defaults;
pub mod facts;
pub mod finalize;
pub mod rules;
pub mod schema;
pub mod xml;

use thiserror::Error;

pub use finalize::{RootSchema, Warning};
pub use rules::{Options, RuleError};
pub use schema::SchemaValue;

pub const DRAFT_04_URI: &str = "http://json-schema.org/draft-04/schema#";

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Xml(#[from] xml::XmlError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("{message} (at {path})")]
    Strict { message: String, path: String },
}

/// Settings for a full translation run.
#[derive(Debug, Clone, Default)]
pub struct Config {
    pub rules: Options,
    pub keep_at_prefix: bool,
    /// Treat every warning as an error.
    pub strict: bool,
    pub emit_schema_key: bool,
}

#[derive(Debug, Clone)]
pub struct TranslationReport {
    pub schema: SchemaValue,
    pub warnings: Vec<Warning>,
}

/// Runs the flattening and defaults stages.
pub fn load_facts(input: &[u8]) -> Result<facts::FactStore, Error> {
    let tree = xml::parse_document(input)?;
    let mut store = facts::flatten(&tree);
    defaults::inject_defaults(&mut store);
    Ok(store)
}

/// Translates an XSD document into a JSON Schema document.
pub fn translate(input: &[u8], config: &Config) -> Result<TranslationReport, Error> {
    let store = load_facts(input)?;
    translate_store(&store, config)
}

pub fn translate_store(
    store: &facts::FactStore,
    config: &Config,
) -> Result<TranslationReport, Error> {
    let outcome = rules::run_to_fixpoint(store, &config.rules)?;
    let root = finalize::wrap_definitions(store, &outcome);
    let mut root = finalize::cleanup_at_prefix(root, config.keep_at_prefix);
    if config.strict {
        if let Some(w) = root.warnings.first() {
            return Err(Error::Strict {
                message: w.message.clone(),
                path: w.path.clone().unwrap_or_else(|| "<document>".into()),
            });
        }
    }
    if config.emit_schema_key {
        if let SchemaValue::Object(members) = &mut root.value {
            members.insert(0, ("$schema".into(), SchemaValue::str(DRAFT_04_URI)));
        }
    }
    schema::canonicalize(&mut root.value);
    Ok(TranslationReport {
        schema: root.value,
        warnings: root.warnings,
    })
}
