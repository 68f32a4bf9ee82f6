//! Flattened fact representation of an XSD document.
//!
//! Every element becomes a [`NodeFact`], every attribute an [`AttributeFact`]
//! and every text child a [`TextFact`]. Element and text facts share one
//! identifier space allocated in document pre-order, so comparing two ids
//! compares document positions.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::xml::{Child, QualifiedName, XmlElement, XSD_NAMESPACE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeFact {
    pub namespace: String,
    pub name: String,
    pub id: NodeId,
    /// Element and text children in document order.
    pub child_ids: Vec<NodeId>,
    pub parent_id: Option<NodeId>,
}

impl NodeFact {
    pub fn is_xsd(&self, name: &str) -> bool {
        self.namespace == XSD_NAMESPACE && self.name == name
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    Explicit,
    Default,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Explicit => "explicit",
            Source::Default => "default",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeFact {
    pub node_id: NodeId,
    pub key: String,
    pub value: String,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextFact {
    pub id: NodeId,
    pub text: String,
    pub parent_id: NodeId,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactError {
    #[error("unknown node id {0}")]
    UnknownId(NodeId),
    #[error("node {node} has {count} facts for attribute {key:?}")]
    AmbiguousAttribute {
        node: NodeId,
        key: String,
        count: usize,
    },
}

#[derive(Debug, Clone, Default)]
pub struct FactStore {
    nodes: BTreeMap<NodeId, NodeFact>,
    texts: BTreeMap<NodeId, TextFact>,
    attributes: Vec<AttributeFact>,
    /// Namespace declarations made on each element, `(prefix, uri)`.
    declarations: BTreeMap<NodeId, Vec<(String, String)>>,
    by_attribute: HashMap<(NodeId, String), Vec<usize>>,
    by_name: HashMap<(String, String), Vec<NodeId>>,
    root: Option<NodeId>,
    next_id: u32,
}

/// Flattens an element tree into facts, allocating ids in pre-order.
pub fn flatten(root: &XmlElement) -> FactStore {
    let mut store = FactStore::default();
    let id = store.add_element(root, None);
    store.root = Some(id);
    store
}

impl FactStore {
    fn allocate(&mut self) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        id
    }

    fn add_element(&mut self, element: &XmlElement, parent: Option<NodeId>) -> NodeId {
        let id = self.allocate();
        self.nodes.insert(
            id,
            NodeFact {
                namespace: element.name.namespace_uri().to_owned(),
                name: element.name.local_name().to_owned(),
                id,
                child_ids: Vec::new(),
                parent_id: parent,
            },
        );
        self.by_name
            .entry((
                element.name.namespace_uri().to_owned(),
                element.name.local_name().to_owned(),
            ))
            .or_default()
            .push(id);
        if !element.namespaces.is_empty() {
            self.declarations.insert(id, element.namespaces.clone());
        }
        for (key, value) in &element.attributes {
            self.push_attribute(AttributeFact {
                node_id: id,
                key: key.clone(),
                value: value.clone(),
                source: Source::Explicit,
            });
        }

        let mut child_ids = Vec::with_capacity(element.children.len());
        for child in &element.children {
            let child_id = match child {
                Child::Element(e) => self.add_element(e, Some(id)),
                Child::RawText(text) => {
                    let tid = self.allocate();
                    self.texts.insert(
                        tid,
                        TextFact {
                            id: tid,
                            text: text.clone(),
                            parent_id: id,
                        },
                    );
                    tid
                }
            };
            child_ids.push(child_id);
        }
        self.nodes.get_mut(&id).expect("just inserted").child_ids = child_ids;
        id
    }

    pub(crate) fn push_attribute(&mut self, fact: AttributeFact) {
        self.by_attribute
            .entry((fact.node_id, fact.key.clone()))
            .or_default()
            .push(self.attributes.len());
        self.attributes.push(fact);
    }

    /// Drops every attribute fact rejected by `keep` and rebuilds the index.
    pub(crate) fn retain_attributes(&mut self, keep: impl FnMut(&AttributeFact) -> bool) {
        self.attributes.retain(keep);
        self.by_attribute.clear();
        for (i, fact) in self.attributes.iter().enumerate() {
            self.by_attribute
                .entry((fact.node_id, fact.key.clone()))
                .or_default()
                .push(i);
        }
    }

    pub fn root(&self) -> Option<&NodeFact> {
        self.root.and_then(|id| self.nodes.get(&id))
    }

    pub fn node(&self, id: NodeId) -> Result<&NodeFact, FactError> {
        self.nodes.get(&id).ok_or(FactError::UnknownId(id))
    }

    pub fn text(&self, id: NodeId) -> Option<&TextFact> {
        self.texts.get(&id)
    }

    /// All element facts in document order.
    pub fn nodes(&self) -> impl Iterator<Item = &NodeFact> {
        self.nodes.values()
    }

    pub fn texts(&self) -> impl Iterator<Item = &TextFact> {
        self.texts.values()
    }

    pub fn attributes(&self) -> &[AttributeFact] {
        &self.attributes
    }

    pub fn parent_of(&self, id: NodeId) -> Option<&NodeFact> {
        self.nodes
            .get(&id)
            .and_then(|n| n.parent_id)
            .and_then(|p| self.nodes.get(&p))
    }

    /// Element children of `parent` in document order; text children are skipped.
    pub fn children_of(&self, parent: NodeId) -> Result<Vec<&NodeFact>, FactError> {
        let node = self.node(parent)?;
        Ok(node
            .child_ids
            .iter()
            .filter_map(|id| self.nodes.get(id))
            .collect())
    }

    /// Text children of `parent` in document order.
    pub fn texts_of(&self, parent: NodeId) -> Result<Vec<&TextFact>, FactError> {
        let node = self.node(parent)?;
        Ok(node
            .child_ids
            .iter()
            .filter_map(|id| self.texts.get(id))
            .collect())
    }

    /// Element children of `parent` in the XSD namespace named `name`.
    pub fn xsd_children<'a>(
        &'a self,
        parent: NodeId,
        name: &'a str,
    ) -> impl Iterator<Item = &'a NodeFact> + 'a {
        self.nodes
            .get(&parent)
            .into_iter()
            .flat_map(|n| n.child_ids.iter())
            .filter_map(|id| self.nodes.get(id))
            .filter(move |n| n.is_xsd(name))
    }

    /// Nodes with the given namespace and local name, in document order.
    pub fn nodes_named(&self, namespace: &str, name: &str) -> &[NodeId] {
        self.by_name
            .get(&(namespace.to_owned(), name.to_owned()))
            .map(Vec::as_slice)
            .unwrap_or_default()
    }

    pub fn attribute_of(
        &self,
        node: NodeId,
        key: &str,
    ) -> Result<Option<(&str, Source)>, FactError> {
        self.node(node)?;
        match self.by_attribute.get(&(node, key.to_owned())) {
            None => Ok(None),
            Some(idx) if idx.len() == 1 => {
                let f = &self.attributes[idx[0]];
                Ok(Some((f.value.as_str(), f.source)))
            }
            Some(idx) => Err(FactError::AmbiguousAttribute {
                node,
                key: key.to_owned(),
                count: idx.len(),
            }),
        }
    }

    /// Shorthand for [`attribute_of`](Self::attribute_of) when only the value matters.
    pub fn attr(&self, node: NodeId, key: &str) -> Result<Option<&str>, FactError> {
        Ok(self.attribute_of(node, key)?.map(|(v, _)| v))
    }

    /// Namespace URI bound to `prefix` at `node`, walking up the ancestors.
    /// The empty prefix looks up the default namespace.
    pub fn lookup_namespace(&self, node: NodeId, prefix: &str) -> Option<&str> {
        if prefix == "xml" {
            return Some("http://www.w3.org/XML/1998/namespace");
        }
        let mut current = self.nodes.get(&node);
        while let Some(n) = current {
            if let Some(decls) = self.declarations.get(&n.id) {
                if let Some((_, uri)) = decls.iter().find(|(p, _)| p == prefix) {
                    return Some(uri);
                }
            }
            current = n.parent_id.and_then(|p| self.nodes.get(&p));
        }
        None
    }

    /// Resolves a QName-valued attribute such as `xs:string` in the scope of `node`.
    ///
    /// Returns `None` for a syntactically invalid value or an undeclared prefix.
    pub fn resolve_qname(&self, node: NodeId, value: &str) -> Option<QualifiedName> {
        let value = value.trim();
        let (prefix, local) = value.split_once(':').unwrap_or(("", value));
        let uri = match self.lookup_namespace(node, prefix) {
            Some(uri) => uri,
            None if prefix.is_empty() => "",
            None => return None,
        };
        QualifiedName::new(uri, local)
    }

    /// Human-readable location of `id`, e.g. `schema/element[percentages]/complexType`.
    pub fn path_of(&self, id: NodeId) -> String {
        let mut parts = Vec::new();
        let mut current = self.nodes.get(&id);
        while let Some(n) = current {
            match self.attr(n.id, "name").ok().flatten() {
                Some(name) => parts.push(format!("{}[{}]", n.name, name)),
                None => parts.push(n.name.clone()),
            }
            current = n.parent_id.and_then(|p| self.nodes.get(&p));
        }
        parts.reverse();
        parts.join("/")
    }

    /// Rebuilds the element tree from the facts alone. Default attributes are
    /// not part of the original document and are left out.
    pub fn to_tree(&self) -> Option<XmlElement> {
        self.root.map(|id| self.rebuild(id))
    }

    fn rebuild(&self, id: NodeId) -> XmlElement {
        let node = &self.nodes[&id];
        let name = QualifiedName::new(node.namespace.clone(), node.name.clone())
            .expect("names in the store come from parsed elements");
        let mut element = XmlElement::new(name);
        element.namespaces = self.declarations.get(&id).cloned().unwrap_or_default();
        element.attributes = self
            .attributes
            .iter()
            .filter(|a| a.node_id == id && a.source == Source::Explicit)
            .map(|a| (a.key.clone(), a.value.clone()))
            .collect();
        element.children = node
            .child_ids
            .iter()
            .map(|c| match self.texts.get(c) {
                Some(t) => Child::RawText(t.text.clone()),
                None => Child::Element(self.rebuild(*c)),
            })
            .collect();
        element
    }

    /// Checks that every index and link agrees with the base collections.
    pub fn audit(&self) -> Result<(), String> {
        let roots: Vec<_> = self
            .nodes
            .values()
            .filter(|n| n.parent_id.is_none())
            .collect();
        if roots.len() != 1 || Some(roots[0].id) != self.root {
            return Err(format!("expected exactly one root, found {}", roots.len()));
        }
        for node in self.nodes.values() {
            if let Some(p) = node.parent_id {
                let parent = self.nodes.get(&p).ok_or(format!("dangling parent {p}"))?;
                let hits = parent.child_ids.iter().filter(|c| **c == node.id).count();
                if hits != 1 {
                    return Err(format!("node {} listed {hits} times under {p}", node.id));
                }
            }
            for c in &node.child_ids {
                let back = match (self.nodes.get(c), self.texts.get(c)) {
                    (Some(n), None) => n.parent_id,
                    (None, Some(t)) => Some(t.parent_id),
                    _ => return Err(format!("child id {c} of {} does not resolve", node.id)),
                };
                if back != Some(node.id) {
                    return Err(format!("child {c} does not point back to {}", node.id));
                }
            }
            if !node.child_ids.windows(2).all(|w| w[0] < w[1]) {
                return Err(format!("children of {} out of document order", node.id));
            }
            let indexed = self.nodes_named(&node.namespace, &node.name);
            if !indexed.contains(&node.id) {
                return Err(format!("node {} missing from name index", node.id));
            }
        }
        for text in self.texts.values() {
            if text.text.trim().is_empty() {
                return Err(format!("whitespace-only text fact {}", text.id));
            }
            if !self.nodes.contains_key(&text.parent_id) {
                return Err(format!("text {} has dangling parent", text.id));
            }
        }
        let name_total: usize = self.by_name.values().map(Vec::len).sum();
        if name_total != self.nodes.len() {
            return Err("name index size disagrees with node count".into());
        }
        let attr_total: usize = self.by_attribute.values().map(Vec::len).sum();
        if attr_total != self.attributes.len() {
            return Err("attribute index size disagrees with attribute count".into());
        }
        for ((node, key), idx) in &self.by_attribute {
            for i in idx {
                let f = self
                    .attributes
                    .get(*i)
                    .ok_or("attribute index out of range")?;
                if f.node_id != *node || &f.key != key {
                    return Err(format!("attribute index entry ({node}, {key}) is stale"));
                }
            }
            if !self.nodes.contains_key(node) {
                return Err(format!("attribute on unknown node {node}"));
            }
        }
        Ok(())
    }

    /// Debug dump, one fact per line with tab-separated fields:
    ///
    /// ```text
    /// node       <id> <namespace> <name> <child ids, comma-separated> <parent id or ->
    /// attribute  <node id> <key> <value> <explicit|default>
    /// text       <id> <parent id> <text>
    /// ```
    ///
    /// Tabs, newlines and backslashes inside values are escaped as `\t`, `\n`, `\\`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for n in self.nodes.values() {
            let children: Vec<String> = n.child_ids.iter().map(ToString::to_string).collect();
            let parent = n.parent_id.map_or("-".to_owned(), |p| p.to_string());
            let _ = writeln!(
                out,
                "node\t{}\t{}\t{}\t{}\t{}",
                n.id,
                escape(&n.namespace),
                escape(&n.name),
                children.join(","),
                parent
            );
        }
        let mut attrs: Vec<&AttributeFact> = self.attributes.iter().collect();
        attrs.sort_by_key(|a| a.node_id);
        for a in attrs {
            let _ = writeln!(
                out,
                "attribute\t{}\t{}\t{}\t{}",
                a.node_id,
                escape(&a.key),
                escape(&a.value),
                a.source
            );
        }
        for t in self.texts.values() {
            let _ = writeln!(out, "text\t{}\t{}\t{}", t.id, t.parent_id, escape(&t.text));
        }
        out
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}
