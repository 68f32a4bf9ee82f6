//! Translation rules and the fixpoint engine that applies them.
//!
//! Every rule enumerates *candidates* from the fact store: the node that
//! receives the emitted fragment, the facts matched by the rule head, and the
//! nodes whose fragments the rule reads. The engine fires a candidate once
//! all nodes it reads are complete, i.e. no rule can add anything to them
//! anymore, and records the firing so that it never happens twice for the
//! same head. Fragments emitted for the same node are merged with
//! [`merge_schemas`]. A scan that fires nothing ends the run.

mod catalog;
mod types;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::facts::{FactError, FactStore, NodeId};
use crate::schema::{merge_schemas, MergeConflict, SchemaValue};
use crate::xml::XSD_NAMESPACE;

pub use catalog::{
    rule_attribute_property, rule_documentation, rule_inline_complex_type,
    rule_named_type_reference, rule_primitive_typed_element, rule_restriction_facets,
    rule_sequence_element, FACET_NAMES,
};
pub use types::{convert_primitive_type, type_mappings, TypeMapping};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Options {
    /// Wrap every sequence member in an array schema, even for `maxOccurs="1"`.
    pub always_array: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleId(pub &'static str);

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiringRecord {
    pub rule: RuleId,
    pub head_ids: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemaFragment {
    pub node_id: NodeId,
    pub value: SchemaValue,
}

/// Merged fragment per node.
pub type Fragments = BTreeMap<NodeId, SchemaValue>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub code: &'static str,
    pub message: String,
    pub node_id: Option<NodeId>,
    pub path: Option<String>,
}

impl Warning {
    pub(crate) fn at(store: &FactStore, node: NodeId, code: &'static str, message: String) -> Self {
        Self {
            code,
            message,
            node_id: Some(node),
            path: Some(store.path_of(node)),
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.code, self.message)?;
        if let Some(path) = &self.path {
            write!(f, " (at {path})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RuleErrorKind {
    #[error(transparent)]
    Merge(#[from] MergeConflict),
    #[error("invalid occurrence value {0:?}, expected a nonnegative integer or \"unbounded\"")]
    InvalidOccurs(String),
    #[error("facet {facet} has non-numeric value {value:?}")]
    NonNumericFacetValue { facet: String, value: String },
    #[error(transparent)]
    Fact(#[from] FactError),
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("rule {rule} failed at {path}: {kind}")]
pub struct RuleError {
    pub rule: RuleId,
    pub nodes: Vec<NodeId>,
    pub path: String,
    pub kind: RuleErrorKind,
}

/// One possible rule firing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Candidate {
    /// Node receiving the emitted fragment.
    pub target: NodeId,
    pub heads: Vec<NodeId>,
    /// Nodes whose fragments the rule reads; always descendants of `target`.
    pub reads: Vec<NodeId>,
}

impl Candidate {
    pub fn new(target: NodeId, heads: Vec<NodeId>, reads: Vec<NodeId>) -> Self {
        Self {
            target,
            heads,
            reads,
        }
    }
}

pub(crate) struct Ctx<'a> {
    pub store: &'a FactStore,
    pub fragments: &'a Fragments,
    pub options: &'a Options,
    pub warnings: &'a mut Vec<Warning>,
}

pub(crate) trait Rule {
    fn id(&self) -> RuleId;
    fn candidates(&self, store: &FactStore) -> Result<Vec<Candidate>, FactError>;
    /// Fragment for `c.target`, or `None` when a fragment the head needs is absent.
    fn fire(&self, cx: &mut Ctx<'_>, c: &Candidate) -> Result<Option<SchemaValue>, RuleErrorKind>;
}

#[derive(Debug, Clone, Default)]
pub struct FixpointOutcome {
    pub fragments: Fragments,
    pub warnings: Vec<Warning>,
    pub history: Vec<FiringRecord>,
}

/// XSD element names that never carry a fragment of their own.
const PASSIVE: &[&str] = &["schema", "annotation", "documentation", "appinfo"];

pub fn run_to_fixpoint(store: &FactStore, options: &Options) -> Result<FixpointOutcome, RuleError> {
    let rules = catalog::catalog();
    let mut pending: Vec<(usize, Candidate)> = Vec::new();
    for (ri, rule) in rules.iter().enumerate() {
        let mut cands = rule.candidates(store).map_err(|e| RuleError {
            rule: rule.id(),
            nodes: Vec::new(),
            path: String::new(),
            kind: e.into(),
        })?;
        cands.sort_by(|a, b| a.heads.cmp(&b.heads));
        pending.extend(cands.into_iter().map(|c| (ri, c)));
    }

    let mut outcome = FixpointOutcome::default();
    let mut fired: HashSet<FiringRecord> = HashSet::new();
    let mut settled = vec![false; pending.len()];

    loop {
        let complete = completeness(store, &pending, &settled);
        let ready: Vec<bool> = pending
            .iter()
            .zip(&settled)
            .map(|((_, c), done)| !done && c.reads.iter().all(|n| complete.contains(n)))
            .collect();
        // fire a target's candidates together, in catalog order, once all are ready
        let waiting: HashSet<NodeId> = pending
            .iter()
            .zip(settled.iter().zip(&ready))
            .filter(|(_, (done, ready))| !**done && !**ready)
            .map(|((_, c), _)| c.target)
            .collect();
        let grouped = pending
            .iter()
            .zip(&ready)
            .any(|((_, c), r)| *r && !waiting.contains(&c.target));
        let mut progressed = false;
        for (i, (ri, cand)) in pending.iter().enumerate() {
            if !ready[i] || (grouped && waiting.contains(&cand.target)) {
                continue;
            }
            settled[i] = true;
            progressed = true;
            let rule = &rules[*ri];
            let record = FiringRecord {
                rule: rule.id(),
                head_ids: cand.heads.clone(),
            };
            if fired.contains(&record) {
                continue;
            }
            let fail = |kind: RuleErrorKind| RuleError {
                rule: rule.id(),
                nodes: cand.heads.clone(),
                path: store.path_of(cand.target),
                kind,
            };
            let emitted = {
                let mut cx = Ctx {
                    store,
                    fragments: &outcome.fragments,
                    options,
                    warnings: &mut outcome.warnings,
                };
                rule.fire(&mut cx, cand).map_err(fail)?
            };
            let Some(value) = emitted else { continue };
            fired.insert(record.clone());
            outcome.history.push(record);
            let merged = match outcome.fragments.get(&cand.target) {
                Some(existing) => merge_schemas(existing, &value).map_err(|e| fail(e.into()))?,
                None => value,
            };
            outcome.fragments.insert(cand.target, merged);
        }
        if !progressed {
            break;
        }
    }

    report_untranslated(store, &outcome.fragments, &mut outcome.warnings);
    Ok(outcome)
}

/// Nodes whose subtree and own candidates are all settled.
fn completeness(
    store: &FactStore,
    pending: &[(usize, Candidate)],
    settled: &[bool],
) -> HashSet<NodeId> {
    let blocked: HashSet<NodeId> = pending
        .iter()
        .zip(settled)
        .filter(|(_, done)| !**done)
        .map(|((_, c), _)| c.target)
        .collect();
    let mut complete = HashSet::new();
    // children carry larger ids than their parents
    let nodes: Vec<_> = store.nodes().collect();
    for node in nodes.into_iter().rev() {
        let children_done = node
            .child_ids
            .iter()
            .all(|c| store.text(*c).is_some() || complete.contains(c));
        if children_done && !blocked.contains(&node.id) {
            complete.insert(node.id);
        }
    }
    complete
}

fn report_untranslated(store: &FactStore, fragments: &Fragments, warnings: &mut Vec<Warning>) {
    let mut reported: HashSet<NodeId> = warnings.iter().filter_map(|w| w.node_id).collect();
    let nodes: Vec<_> = store.nodes().collect();
    let mut found = Vec::new();
    for node in nodes.into_iter().rev() {
        let below = node.child_ids.iter().any(|c| reported.contains(c));
        if below {
            reported.insert(node.id);
        }
        if node.namespace != XSD_NAMESPACE
            || PASSIVE.contains(&node.name.as_str())
            || FACET_NAMES.contains(&node.name.as_str())
            || below
        {
            continue;
        }
        let message = if fragments.contains_key(&node.id) {
            let nested = node.is_xsd("sequence")
                && store
                    .parent_of(node.id)
                    .is_some_and(|p| p.is_xsd("sequence"));
            if !nested {
                continue;
            }
            "nested xs:sequence is not translated".to_owned()
        } else if node.is_xsd("element") && store.attr(node.id, "ref").ok().flatten().is_some() {
            "element references (ref) are not supported".to_owned()
        } else if node.is_xsd("attribute") && store.attr(node.id, "ref").ok().flatten().is_some() {
            "attribute references (ref) are not supported".to_owned()
        } else {
            format!("no rule translates xs:{}", node.name)
        };
        reported.insert(node.id);
        found.push(Warning::at(store, node.id, "untranslated", message));
    }
    found.reverse();
    warnings.extend(found);
}
