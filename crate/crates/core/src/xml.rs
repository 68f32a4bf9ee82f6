//! Namespace-aware element tree for XSD documents.
//!
//! The tree keeps exactly what the later stages need: resolved element
//! names, attributes in document order, namespace declarations made on each
//! element (needed to resolve QName-valued attributes such as `type="xs:string"`)
//! and non-whitespace text. Comments, processing instructions and the XML
//! declaration are dropped.

use std::fmt;

use thiserror::Error;

/// Namespace URI of XML Schema 1.0.
pub const XSD_NAMESPACE: &str = "http://www.w3.org/2001/XMLSchema";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum XmlError {
    #[error("malformed XML at {position}: {message}")]
    MalformedXml { position: String, message: String },
    #[error("encoding error: {0}")]
    EncodingError(String),
}

/// An XML name with its prefix resolved to a namespace URI.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QualifiedName {
    namespace_uri: String,
    local_name: String,
}

impl QualifiedName {
    /// Returns `None` when `local_name` is empty or contains a colon or whitespace.
    pub fn new(namespace_uri: impl Into<String>, local_name: impl Into<String>) -> Option<Self> {
        let local_name = local_name.into();
        if local_name.is_empty()
            || local_name.contains(':')
            || local_name.chars().any(char::is_whitespace)
        {
            return None;
        }
        Some(Self {
            namespace_uri: namespace_uri.into(),
            local_name,
        })
    }

    pub fn xsd(local_name: &str) -> Self {
        Self::new(XSD_NAMESPACE, local_name).expect("valid XSD local name")
    }

    pub fn namespace_uri(&self) -> &str {
        &self.namespace_uri
    }

    pub fn local_name(&self) -> &str {
        &self.local_name
    }

    pub fn is_xsd(&self) -> bool {
        self.namespace_uri == XSD_NAMESPACE
    }
}

impl fmt::Display for QualifiedName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.namespace_uri.is_empty() {
            f.write_str(&self.local_name)
        } else {
            write!(f, "{{{}}}{}", self.namespace_uri, self.local_name)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Child {
    Element(XmlElement),
    RawText(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XmlElement {
    pub name: QualifiedName,
    /// Attributes other than namespace declarations, as written.
    pub attributes: Vec<(String, String)>,
    /// Namespace declarations made on this element: `(prefix, uri)`, where
    /// the empty prefix stands for the default namespace.
    pub namespaces: Vec<(String, String)>,
    pub children: Vec<Child>,
}

impl XmlElement {
    pub fn new(name: QualifiedName) -> Self {
        Self {
            name,
            attributes: Vec::new(),
            namespaces: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn attribute(&self, key: &str) -> Option<&str> {
        self.attributes
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn elements(&self) -> impl Iterator<Item = &XmlElement> {
        self.children.iter().filter_map(|c| match c {
            Child::Element(e) => Some(e),
            Child::RawText(_) => None,
        })
    }
}

/// Parses a UTF-8 XML document into its root element.
///
/// Text children are trimmed; text that is empty after trimming is dropped.
/// CDATA sections are treated as ordinary text.
pub fn parse_document(input: &[u8]) -> Result<XmlElement, XmlError> {
    let text = std::str::from_utf8(input)
        .map_err(|e| XmlError::EncodingError(format!("input is not valid UTF-8: {e}")))?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    check_declared_encoding(text)?;

    let doc = roxmltree::Document::parse(text).map_err(|e| {
        let pos = e.pos();
        XmlError::MalformedXml {
            position: format!("{}:{}", pos.row, pos.col),
            message: e.to_string(),
        }
    })?;
    Ok(convert(doc.root_element(), None))
}

fn check_declared_encoding(text: &str) -> Result<(), XmlError> {
    let Some(rest) = text.strip_prefix("<?xml") else {
        return Ok(());
    };
    let Some(end) = rest.find("?>") else {
        return Ok(());
    };
    let decl = &rest[..end];
    let Some(idx) = decl.find("encoding") else {
        return Ok(());
    };
    let after = decl[idx + "encoding".len()..].trim_start();
    let Some(after) = after.strip_prefix('=') else {
        return Ok(());
    };
    let after = after.trim_start();
    let Some(quote) = after.chars().next().filter(|c| *c == '"' || *c == '\'') else {
        return Ok(());
    };
    let value = after[1..].split(quote).next().unwrap_or_default();
    if value.eq_ignore_ascii_case("utf-8") || value.eq_ignore_ascii_case("utf8") {
        Ok(())
    } else {
        Err(XmlError::EncodingError(format!(
            "unsupported declared encoding {value:?}, only UTF-8 is accepted"
        )))
    }
}

fn convert(node: roxmltree::Node<'_, '_>, parent: Option<roxmltree::Node<'_, '_>>) -> XmlElement {
    let tag = node.tag_name();
    let name = QualifiedName {
        namespace_uri: tag.namespace().unwrap_or_default().to_owned(),
        local_name: tag.name().to_owned(),
    };

    let attributes = node
        .attributes()
        .map(|a| {
            let key = match a.namespace() {
                // keep prefixed keys recognizable, e.g. xml:lang
                Some(ns) => match node.lookup_prefix(ns) {
                    Some(p) if !p.is_empty() => format!("{p}:{}", a.name()),
                    _ => a.name().to_owned(),
                },
                None => a.name().to_owned(),
            };
            (key, a.value().to_owned())
        })
        .collect();

    let inherited: Vec<(String, String)> = parent
        .map(|p| {
            p.namespaces()
                .map(|ns| {
                    (
                        ns.name().unwrap_or_default().to_owned(),
                        ns.uri().to_owned(),
                    )
                })
                .collect()
        })
        .unwrap_or_default();
    let namespaces = node
        .namespaces()
        .map(|ns| {
            (
                ns.name().unwrap_or_default().to_owned(),
                ns.uri().to_owned(),
            )
        })
        .filter(|(prefix, _)| prefix != "xml")
        .filter(|decl| !inherited.contains(decl))
        .collect();

    let mut children = Vec::new();
    for child in node.children() {
        if child.is_element() {
            children.push(Child::Element(convert(child, Some(node))));
        } else if child.is_text() {
            let text = child.text().unwrap_or_default().trim();
            if !text.is_empty() {
                children.push(Child::RawText(text.to_owned()));
            }
        }
    }

    XmlElement {
        name,
        attributes,
        namespaces,
        children,
    }
}
