//! Root selection, `definitions` wrapping and `@`-prefix cleanup.

use crate::facts::FactStore;
use crate::rules::FixpointOutcome;
use crate::schema::SchemaValue;

pub use crate::rules::Warning;

#[derive(Debug, Clone, PartialEq)]
pub struct RootSchema {
    pub value: SchemaValue,
    pub warnings: Vec<Warning>,
}

/// Builds the document schema from the fragment of the first global
/// `xs:element` and the fragments of all global named types.
pub fn wrap_definitions(store: &FactStore, outcome: &FixpointOutcome) -> RootSchema {
    let mut warnings = outcome.warnings.clone();
    let Some(schema) = store.root().filter(|r| r.is_xsd("schema")) else {
        if let Some(root) = store.root() {
            warnings.push(Warning::at(
                store,
                root.id,
                "not-a-schema",
                format!(
                    "document root {{{}}}{} is not xs:schema",
                    root.namespace, root.name
                ),
            ));
        }
        return RootSchema {
            value: SchemaValue::empty_object(),
            warnings,
        };
    };
    let globals = store.children_of(schema.id).unwrap_or_default();

    let elements: Vec<_> = globals.iter().filter(|n| n.is_xsd("element")).collect();
    let mut value = elements
        .first()
        .and_then(|e| outcome.fragments.get(&e.id).cloned())
        .unwrap_or_else(SchemaValue::empty_object);
    if let [first, rest @ ..] = elements.as_slice() {
        if !rest.is_empty() {
            warnings.push(Warning::at(
                store,
                first.id,
                "multiple-roots",
                format!(
                    "{} global elements declared, using the first as the document root",
                    elements.len()
                ),
            ));
        }
    }

    let mut definitions: Vec<(String, SchemaValue)> = Vec::new();
    for node in globals
        .iter()
        .filter(|n| n.is_xsd("simpleType") || n.is_xsd("complexType"))
    {
        let Some(name) = store.attr(node.id, "name").ok().flatten() else {
            continue;
        };
        let fragment = outcome
            .fragments
            .get(&node.id)
            .cloned()
            .unwrap_or_else(SchemaValue::empty_object);
        definitions.push((name.to_owned(), fragment));
    }
    if !definitions.is_empty() {
        value.insert("definitions", SchemaValue::Object(definitions));
    }
    RootSchema { value, warnings }
}

/// Renames `"@n"` properties to `"n"` wherever no sibling property `"n"`
/// exists, updating the sibling `required` list to match.
pub fn cleanup_at_prefix(mut root: RootSchema, keep: bool) -> RootSchema {
    if !keep {
        strip(&mut root.value);
    }
    root
}

fn strip(value: &mut SchemaValue) {
    if let SchemaValue::Object(members) = value {
        {
            let mut renames: Vec<(String, String)> = Vec::new();
            if let Some((_, SchemaValue::Object(props))) =
                members.iter_mut().find(|(k, _)| k == "properties")
            {
                let names: Vec<String> = props.iter().map(|(k, _)| k.clone()).collect();
                for (key, _) in props.iter_mut() {
                    if let Some(bare) = key.strip_prefix('@') {
                        if !bare.is_empty() && !names.iter().any(|n| n == bare) {
                            renames.push((key.clone(), bare.to_owned()));
                            *key = bare.to_owned();
                        }
                    }
                }
            }
            if let Some((_, SchemaValue::Array(required))) =
                members.iter_mut().find(|(k, _)| k == "required")
            {
                for item in required.iter_mut() {
                    if let SchemaValue::Str(s) = item {
                        if let Some((_, to)) = renames.iter().find(|(from, _)| from == s) {
                            *s = to.clone();
                        }
                    }
                }
            }
            for (key, v) in members.iter_mut() {
                match (key.as_str(), v) {
                    ("properties" | "definitions", SchemaValue::Object(entries)) => {
                        entries.iter_mut().for_each(|(_, sub)| strip(sub));
                    }
                    ("items", SchemaValue::Array(subs)) => subs.iter_mut().for_each(strip),
                    ("items", sub) => strip(sub),
                    _ => {}
                }
            }
        }
    }
}
