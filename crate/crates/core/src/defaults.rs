//! Default attribute injection.
//!
//! Runs in two steps: every XSD node matching a [`DefaultRule`] receives a
//! `default` fact for the rule's key, then every `default` fact that has an
//! `explicit` fact with the same node and key is removed again.

use std::collections::HashSet;

use crate::facts::{AttributeFact, FactStore, Source};
use crate::xml::XSD_NAMESPACE;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DefaultRule {
    pub namespace: &'static str,
    pub element: &'static str,
    /// Local name of the required parent element, if any.
    pub context: Option<&'static str>,
    pub key: &'static str,
    pub value: &'static str,
}

/// Built-in defaults from XML Schema 1.0.
pub const DEFAULT_RULES: &[DefaultRule] = &[
    DefaultRule {
        namespace: XSD_NAMESPACE,
        element: "element",
        context: None,
        key: "minOccurs",
        value: "1",
    },
    DefaultRule {
        namespace: XSD_NAMESPACE,
        element: "element",
        context: None,
        key: "maxOccurs",
        value: "1",
    },
    DefaultRule {
        namespace: XSD_NAMESPACE,
        element: "attribute",
        context: None,
        key: "use",
        value: "optional",
    },
];

pub fn inject_defaults(store: &mut FactStore) {
    inject_with(store, DEFAULT_RULES);
}

pub fn inject_with(store: &mut FactStore, rules: &[DefaultRule]) {
    // propagation: one default fact per (node, key) combination
    let mut present: HashSet<(_, String)> = store
        .attributes()
        .iter()
        .filter(|a| a.source == Source::Default)
        .map(|a| (a.node_id, a.key.clone()))
        .collect();
    let mut pending = Vec::new();
    for rule in rules {
        for &id in store.nodes_named(rule.namespace, rule.element) {
            if let Some(ctx) = rule.context {
                match store.parent_of(id) {
                    Some(p) if p.namespace == rule.namespace && p.name == ctx => {}
                    _ => continue,
                }
            }
            if present.insert((id, rule.key.to_owned())) {
                pending.push(AttributeFact {
                    node_id: id,
                    key: rule.key.to_owned(),
                    value: rule.value.to_owned(),
                    source: Source::Default,
                });
            }
        }
    }
    for fact in pending {
        store.push_attribute(fact);
    }

    // simpagation: an explicit fact removes the default for the same key
    let explicit: HashSet<(_, String)> = store
        .attributes()
        .iter()
        .filter(|a| a.source == Source::Explicit)
        .map(|a| (a.node_id, a.key.clone()))
        .collect();
    store.retain_attributes(|a| {
        a.source == Source::Explicit || !explicit.contains(&(a.node_id, a.key.clone()))
    });
}
