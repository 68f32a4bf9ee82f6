//! The rule catalog, in scan order.

use super::types::{convert_primitive_type, is_numeric};
use super::{
    Candidate, Ctx, Fragments, Options, Rule, RuleError, RuleErrorKind, RuleId, SchemaFragment,
    Warning,
};
use crate::facts::{FactError, FactStore, NodeId};
use crate::schema::{Decimal, SchemaValue};
use crate::xml::XSD_NAMESPACE;

/// Constraining facets recognised under `xs:restriction`.
pub const FACET_NAMES: &[&str] = &[
    "length",
    "minLength",
    "maxLength",
    "pattern",
    "enumeration",
    "minInclusive",
    "maxInclusive",
    "minExclusive",
    "maxExclusive",
    "whiteSpace",
    "totalDigits",
    "fractionDigits",
];

pub(super) fn catalog() -> Vec<Box<dyn Rule>> {
    vec![
        Box::new(PrimitiveTypedElement),
        Box::new(NamedTypeReference),
        Box::new(UntypedElement),
        Box::new(RestrictionFacets),
        Box::new(SimpleTypeRestriction),
        Box::new(InlineSimpleType),
        Box::new(SequenceElement),
        Box::new(ComplexTypeSequence),
        Box::new(AttributeProperty),
        Box::new(ComplexTypeBase),
        Box::new(InlineComplexType),
        Box::new(Documentation),
    ]
}

fn xsd<'a>(store: &'a FactStore, name: &str) -> &'a [NodeId] {
    store.nodes_named(XSD_NAMESPACE, name)
}

fn has_xsd_child(store: &FactStore, node: NodeId, name: &str) -> bool {
    store.xsd_children(node, name).next().is_some()
}

/// Concatenated `xs:documentation` text of the `xs:annotation` children of `node`.
fn documentation_text(store: &FactStore, node: NodeId) -> Option<String> {
    let mut parts = Vec::new();
    for annotation in store.xsd_children(node, "annotation") {
        for doc in store.xsd_children(annotation.id, "documentation") {
            if let Ok(texts) = store.texts_of(doc.id) {
                parts.extend(texts.into_iter().map(|t| t.text.as_str()));
            }
        }
    }
    (!parts.is_empty()).then(|| parts.join("\n"))
}

/// Fragment of `child` as adopted by `adopter`. The adopter's own
/// documentation takes precedence over the child's description.
fn adopt(cx: &Ctx<'_>, adopter: NodeId, child: NodeId) -> Option<SchemaValue> {
    let mut value = cx.fragments.get(&child)?.clone();
    if documentation_text(cx.store, adopter).is_some() {
        value.remove("description");
    }
    Some(value)
}

fn global_type(store: &FactStore, name: &str) -> Option<NodeId> {
    let schema = store.root().filter(|r| r.is_xsd("schema"))?;
    store
        .children_of(schema.id)
        .ok()?
        .into_iter()
        .filter(|n| n.is_xsd("simpleType") || n.is_xsd("complexType"))
        .find(|n| store.attr(n.id, "name").ok().flatten() == Some(name))
        .map(|n| n.id)
}

/// Nodes named `element` or `attribute` in the XSD namespace, in document order.
fn declarations(store: &FactStore) -> Vec<NodeId> {
    let mut ids: Vec<NodeId> = xsd(store, "element")
        .iter()
        .chain(xsd(store, "attribute"))
        .copied()
        .collect();
    ids.sort_unstable();
    ids
}

fn type_attr(store: &FactStore, node: NodeId) -> Result<Option<&str>, FactError> {
    store.attr(node, "type")
}

// ---------------------------------------------------------------------------

struct PrimitiveTypedElement;

impl Rule for PrimitiveTypedElement {
    fn id(&self) -> RuleId {
        RuleId("primitive-typed-element")
    }

    fn candidates(&self, store: &FactStore) -> Result<Vec<Candidate>, FactError> {
        let mut out = Vec::new();
        for id in declarations(store) {
            if let Some(ty) = type_attr(store, id)? {
                let resolved = store.resolve_qname(id, ty);
                if resolved.as_ref().and_then(convert_primitive_type).is_some() {
                    out.push(Candidate::new(id, vec![id], vec![]));
                }
            }
        }
        Ok(out)
    }

    fn fire(&self, cx: &mut Ctx<'_>, c: &Candidate) -> Result<Option<SchemaValue>, RuleErrorKind> {
        let ty = type_attr(cx.store, c.target)?.unwrap_or_default();
        Ok(cx
            .store
            .resolve_qname(c.target, ty)
            .as_ref()
            .and_then(convert_primitive_type))
    }
}

struct NamedTypeReference;

impl Rule for NamedTypeReference {
    fn id(&self) -> RuleId {
        RuleId("named-type-reference")
    }

    fn candidates(&self, store: &FactStore) -> Result<Vec<Candidate>, FactError> {
        let mut out = Vec::new();
        for id in declarations(store) {
            if let Some(ty) = type_attr(store, id)? {
                let resolved = store.resolve_qname(id, ty);
                if resolved.as_ref().and_then(convert_primitive_type).is_none() {
                    out.push(Candidate::new(id, vec![id], vec![]));
                }
            }
        }
        Ok(out)
    }

    fn fire(&self, cx: &mut Ctx<'_>, c: &Candidate) -> Result<Option<SchemaValue>, RuleErrorKind> {
        let raw = type_attr(cx.store, c.target)?.unwrap_or_default();
        let resolved = cx.store.resolve_qname(c.target, raw);
        let target = match &resolved {
            Some(q) if q.is_xsd() => None,
            Some(q) => global_type(cx.store, q.local_name()).map(|_| q.local_name()),
            None => None,
        };
        match target {
            Some(name) => Ok(Some(SchemaValue::object([(
                "$ref",
                SchemaValue::str(format!("#/definitions/{name}")),
            )]))),
            None => {
                let why = match &resolved {
                    Some(q) if q.is_xsd() => {
                        format!("built-in type {raw:?} has no JSON Schema mapping")
                    }
                    Some(_) => {
                        format!("type {raw:?} does not name a global simpleType or complexType")
                    }
                    None => format!("type {raw:?} uses an undeclared namespace prefix"),
                };
                cx.warnings
                    .push(Warning::at(cx.store, c.target, "unresolved-type", why));
                Ok(Some(SchemaValue::empty_object()))
            }
        }
    }
}

/// An `xs:element` with no type information at all accepts anything.
struct UntypedElement;

impl Rule for UntypedElement {
    fn id(&self) -> RuleId {
        RuleId("untyped-element")
    }

    fn candidates(&self, store: &FactStore) -> Result<Vec<Candidate>, FactError> {
        let mut out = Vec::new();
        for &id in xsd(store, "element") {
            if type_attr(store, id)?.is_none()
                && store.attr(id, "ref")?.is_none()
                && !has_xsd_child(store, id, "complexType")
                && !has_xsd_child(store, id, "simpleType")
            {
                out.push(Candidate::new(id, vec![id], vec![]));
            }
        }
        Ok(out)
    }

    fn fire(&self, _: &mut Ctx<'_>, _: &Candidate) -> Result<Option<SchemaValue>, RuleErrorKind> {
        Ok(Some(SchemaValue::empty_object()))
    }
}

struct RestrictionFacets;

impl Rule for RestrictionFacets {
    fn id(&self) -> RuleId {
        RuleId("restriction-facets")
    }

    fn candidates(&self, store: &FactStore) -> Result<Vec<Candidate>, FactError> {
        let mut out = Vec::new();
        for &id in xsd(store, "restriction") {
            if store.attr(id, "base")?.is_some() {
                out.push(Candidate::new(id, vec![id], vec![]));
            }
        }
        Ok(out)
    }

    fn fire(&self, cx: &mut Ctx<'_>, c: &Candidate) -> Result<Option<SchemaValue>, RuleErrorKind> {
        let store = cx.store;
        let base = store.attr(c.target, "base")?.unwrap_or_default();
        let mut schema = store
            .resolve_qname(c.target, base)
            .as_ref()
            .and_then(convert_primitive_type)
            .unwrap_or_else(SchemaValue::empty_object);
        let numeric = is_numeric(&schema);

        let mut enumeration: Vec<SchemaValue> = Vec::new();
        let mut patterns: Vec<String> = Vec::new();
        for facet in store.children_of(c.target)? {
            if facet.namespace != XSD_NAMESPACE || facet.name == "annotation" {
                continue;
            }
            let value = store.attr(facet.id, "value")?.unwrap_or_default();
            let number = || -> Result<SchemaValue, RuleErrorKind> {
                value.parse::<Decimal>().map(SchemaValue::Num).map_err(|_| {
                    RuleErrorKind::NonNumericFacetValue {
                        facet: facet.name.clone(),
                        value: value.to_owned(),
                    }
                })
            };
            let length = || -> Result<SchemaValue, RuleErrorKind> {
                match value.parse::<Decimal>() {
                    Ok(d) if d.is_integer() && !d.is_negative() => Ok(SchemaValue::Num(d)),
                    _ => Err(RuleErrorKind::NonNumericFacetValue {
                        facet: facet.name.clone(),
                        value: value.to_owned(),
                    }),
                }
            };
            match facet.name.as_str() {
                "length" => {
                    let n = length()?;
                    schema.insert("minLength", n.clone());
                    schema.insert("maxLength", n);
                }
                "minLength" | "maxLength" => schema.insert(facet.name.clone(), length()?),
                "pattern" => patterns.push(value.to_owned()),
                "enumeration" => {
                    let item = match value.parse::<Decimal>() {
                        Ok(d) if numeric => SchemaValue::Num(d),
                        _ => SchemaValue::str(value),
                    };
                    if !enumeration.contains(&item) {
                        enumeration.push(item);
                    }
                }
                "minInclusive" | "minExclusive" => {
                    schema.insert("minimum", number()?);
                    schema.insert("exclusiveMinimum", (facet.name == "minExclusive").into());
                }
                "maxInclusive" | "maxExclusive" => {
                    schema.insert("maximum", number()?);
                    schema.insert("exclusiveMaximum", (facet.name == "maxExclusive").into());
                }
                other => cx.warnings.push(Warning::at(
                    store,
                    facet.id,
                    "unsupported-facet",
                    format!("facet xs:{other} is not translated"),
                )),
            }
        }
        if !enumeration.is_empty() {
            schema.insert("enum", SchemaValue::Array(enumeration));
        }
        match patterns.len() {
            0 => {}
            1 => schema.insert("pattern", SchemaValue::str(patterns.remove(0))),
            // sibling patterns are alternatives
            _ => {
                let joined: Vec<String> = patterns.iter().map(|p| format!("(?:{p})")).collect();
                schema.insert("pattern", SchemaValue::str(joined.join("|")));
            }
        }
        Ok(Some(schema))
    }
}

struct SimpleTypeRestriction;

impl Rule for SimpleTypeRestriction {
    fn id(&self) -> RuleId {
        RuleId("simpleType-restriction")
    }

    fn candidates(&self, store: &FactStore) -> Result<Vec<Candidate>, FactError> {
        let mut out = Vec::new();
        for &id in xsd(store, "simpleType") {
            for r in store.xsd_children(id, "restriction") {
                out.push(Candidate::new(id, vec![id, r.id], vec![r.id]));
            }
        }
        Ok(out)
    }

    fn fire(&self, cx: &mut Ctx<'_>, c: &Candidate) -> Result<Option<SchemaValue>, RuleErrorKind> {
        Ok(adopt(cx, c.target, c.reads[0]))
    }
}

/// `xs:element` or `xs:attribute` without `type` adopts its inline `xs:simpleType`.
struct InlineSimpleType;

impl Rule for InlineSimpleType {
    fn id(&self) -> RuleId {
        RuleId("inline-simpleType")
    }

    fn candidates(&self, store: &FactStore) -> Result<Vec<Candidate>, FactError> {
        let mut out = Vec::new();
        for id in declarations(store) {
            if type_attr(store, id)?.is_some() {
                continue;
            }
            for st in store.xsd_children(id, "simpleType") {
                out.push(Candidate::new(id, vec![id, st.id], vec![st.id]));
            }
        }
        Ok(out)
    }

    fn fire(&self, cx: &mut Ctx<'_>, c: &Candidate) -> Result<Option<SchemaValue>, RuleErrorKind> {
        Ok(adopt(cx, c.target, c.reads[0]))
    }
}

enum Occurs {
    Bounded(Decimal),
    Unbounded,
}

fn parse_occurs(value: &str, allow_unbounded: bool) -> Result<Occurs, RuleErrorKind> {
    let invalid = || RuleErrorKind::InvalidOccurs(value.to_owned());
    let v = value.trim();
    if v == "unbounded" {
        return if allow_unbounded {
            Ok(Occurs::Unbounded)
        } else {
            Err(invalid())
        };
    }
    if v.is_empty() || !v.bytes().all(|b| b.is_ascii_digit()) {
        return Err(invalid());
    }
    v.parse::<Decimal>()
        .map(Occurs::Bounded)
        .map_err(|_| invalid())
}

struct SequenceElement;

impl Rule for SequenceElement {
    fn id(&self) -> RuleId {
        RuleId("sequence-element")
    }

    fn candidates(&self, store: &FactStore) -> Result<Vec<Candidate>, FactError> {
        let mut out = Vec::new();
        for &seq in xsd(store, "sequence") {
            for el in store.xsd_children(seq, "element") {
                let has_all = store.attr(el.id, "name")?.is_some()
                    && store.attr(el.id, "minOccurs")?.is_some()
                    && store.attr(el.id, "maxOccurs")?.is_some();
                if has_all {
                    out.push(Candidate::new(seq, vec![seq, el.id], vec![el.id]));
                }
            }
        }
        Ok(out)
    }

    fn fire(&self, cx: &mut Ctx<'_>, c: &Candidate) -> Result<Option<SchemaValue>, RuleErrorKind> {
        let el = c.reads[0];
        let Some(item) = cx.fragments.get(&el) else {
            return Ok(None);
        };
        let attr = |k| cx.store.attr(el, k).map(Option::unwrap_or_default);
        let name = attr("name")?;
        let min = match parse_occurs(attr("minOccurs")?, false)? {
            Occurs::Bounded(d) => d,
            Occurs::Unbounded => unreachable!("rejected by parse_occurs"),
        };
        let max = parse_occurs(attr("maxOccurs")?, true)?;
        let single = matches!(&max, Occurs::Bounded(d) if *d == Decimal::from(1u64));

        let wrapped = if single && !cx.options.always_array {
            item.clone()
        } else {
            let mut array = SchemaValue::object([
                ("type", SchemaValue::str("array")),
                ("items", item.clone()),
                ("minItems", SchemaValue::Num(min.clone())),
            ]);
            if let Occurs::Bounded(max) = max {
                array.insert("maxItems", SchemaValue::Num(max));
            }
            array
        };
        let mut fragment = SchemaValue::object([
            ("type", SchemaValue::str("object")),
            ("properties", SchemaValue::object([(name, wrapped)])),
        ]);
        if !min.is_zero() {
            fragment.insert("required", SchemaValue::Array(vec![SchemaValue::str(name)]));
        }
        Ok(Some(fragment))
    }
}

struct ComplexTypeSequence;

impl Rule for ComplexTypeSequence {
    fn id(&self) -> RuleId {
        RuleId("complexType-sequence")
    }

    fn candidates(&self, store: &FactStore) -> Result<Vec<Candidate>, FactError> {
        let mut out = Vec::new();
        for &ct in xsd(store, "complexType") {
            for seq in store.xsd_children(ct, "sequence") {
                out.push(Candidate::new(ct, vec![ct, seq.id], vec![seq.id]));
            }
        }
        Ok(out)
    }

    fn fire(&self, cx: &mut Ctx<'_>, c: &Candidate) -> Result<Option<SchemaValue>, RuleErrorKind> {
        Ok(adopt(cx, c.target, c.reads[0]))
    }
}

/// `xs:attribute` children of an `xs:complexType` become `@`-prefixed properties.
struct AttributeProperty;

impl Rule for AttributeProperty {
    fn id(&self) -> RuleId {
        RuleId("complexType-attributes")
    }

    fn candidates(&self, store: &FactStore) -> Result<Vec<Candidate>, FactError> {
        let mut out = Vec::new();
        for &ct in xsd(store, "complexType") {
            for at in store.xsd_children(ct, "attribute") {
                if store.attr(at.id, "name")?.is_some() {
                    out.push(Candidate::new(ct, vec![ct, at.id], vec![at.id]));
                }
            }
        }
        Ok(out)
    }

    fn fire(&self, cx: &mut Ctx<'_>, c: &Candidate) -> Result<Option<SchemaValue>, RuleErrorKind> {
        let at = c.reads[0];
        let name = cx.store.attr(at, "name")?.unwrap_or_default();
        let usage = cx.store.attr(at, "use")?.unwrap_or("optional");
        if usage == "prohibited" {
            return Ok(None);
        }
        let key = format!("@{name}");
        let schema = cx
            .fragments
            .get(&at)
            .cloned()
            .unwrap_or_else(SchemaValue::empty_object);
        let mut fragment = SchemaValue::object([
            ("type", SchemaValue::str("object")),
            ("properties", SchemaValue::object([(key.clone(), schema)])),
        ]);
        if usage == "required" {
            fragment.insert("required", SchemaValue::Array(vec![SchemaValue::str(key)]));
        }
        Ok(Some(fragment))
    }
}

/// Every complex type translates, at minimum, to the empty schema.
struct ComplexTypeBase;

impl Rule for ComplexTypeBase {
    fn id(&self) -> RuleId {
        RuleId("complexType")
    }

    fn candidates(&self, store: &FactStore) -> Result<Vec<Candidate>, FactError> {
        Ok(xsd(store, "complexType")
            .iter()
            .map(|&id| Candidate::new(id, vec![id], vec![]))
            .collect())
    }

    fn fire(&self, _: &mut Ctx<'_>, _: &Candidate) -> Result<Option<SchemaValue>, RuleErrorKind> {
        Ok(Some(SchemaValue::empty_object()))
    }
}

struct InlineComplexType;

impl Rule for InlineComplexType {
    fn id(&self) -> RuleId {
        RuleId("inline-complexType")
    }

    fn candidates(&self, store: &FactStore) -> Result<Vec<Candidate>, FactError> {
        let mut out = Vec::new();
        for &el in xsd(store, "element") {
            if type_attr(store, el)?.is_some() {
                continue;
            }
            for ct in store.xsd_children(el, "complexType") {
                out.push(Candidate::new(el, vec![el, ct.id], vec![ct.id]));
            }
        }
        Ok(out)
    }

    fn fire(&self, cx: &mut Ctx<'_>, c: &Candidate) -> Result<Option<SchemaValue>, RuleErrorKind> {
        Ok(adopt(cx, c.target, c.reads[0]))
    }
}

/// `xs:annotation/xs:documentation` text becomes the enclosing node's description.
struct Documentation;

impl Rule for Documentation {
    fn id(&self) -> RuleId {
        RuleId("documentation")
    }

    fn candidates(&self, store: &FactStore) -> Result<Vec<Candidate>, FactError> {
        let mut out = Vec::new();
        for node in store.nodes() {
            if node.namespace != XSD_NAMESPACE || node.name == "schema" {
                continue;
            }
            let annotations: Vec<NodeId> = store
                .xsd_children(node.id, "annotation")
                .map(|a| a.id)
                .collect();
            if !annotations.is_empty() {
                let mut heads = vec![node.id];
                heads.extend(annotations);
                out.push(Candidate::new(node.id, heads, vec![]));
            }
        }
        Ok(out)
    }

    fn fire(&self, cx: &mut Ctx<'_>, c: &Candidate) -> Result<Option<SchemaValue>, RuleErrorKind> {
        Ok(documentation_text(cx.store, c.target)
            .map(|text| SchemaValue::object([("description", SchemaValue::str(text))])))
    }
}

// ---------------------------------------------------------------------------
// Single-rule entry points: evaluate one rule over every candidate against a
// given set of fragments, without the fixpoint scheduling.

fn apply(
    rule: &dyn Rule,
    store: &FactStore,
    fragments: &Fragments,
    options: &Options,
) -> Result<(Vec<SchemaFragment>, Vec<Warning>), RuleError> {
    let mut warnings = Vec::new();
    let mut out = Vec::new();
    let cands = rule.candidates(store).map_err(|e| RuleError {
        rule: rule.id(),
        nodes: vec![],
        path: String::new(),
        kind: e.into(),
    })?;
    for c in cands {
        let mut cx = Ctx {
            store,
            fragments,
            options,
            warnings: &mut warnings,
        };
        let value = rule.fire(&mut cx, &c).map_err(|kind| RuleError {
            rule: rule.id(),
            nodes: c.heads.clone(),
            path: store.path_of(c.target),
            kind,
        })?;
        if let Some(value) = value {
            out.push(SchemaFragment {
                node_id: c.target,
                value,
            });
        }
    }
    Ok((out, warnings))
}

macro_rules! entry_point {
    ($(#[$doc:meta])* $name:ident => $rule:expr) => {
        $(#[$doc])*
        pub fn $name(
            store: &FactStore,
            fragments: &Fragments,
            options: &Options,
        ) -> Result<(Vec<SchemaFragment>, Vec<Warning>), RuleError> {
            apply(&$rule, store, fragments, options)
        }
    };
}

entry_point!(
    /// Elements and attributes whose `type` is a built-in XSD type.
    rule_primitive_typed_element => PrimitiveTypedElement
);
entry_point!(
    /// Elements and attributes whose `type` names a global type; emits `$ref`.
    rule_named_type_reference => NamedTypeReference
);
entry_point!(rule_restriction_facets => RestrictionFacets);
entry_point!(rule_sequence_element => SequenceElement);
entry_point!(rule_inline_complex_type => InlineComplexType);
entry_point!(rule_attribute_property => AttributeProperty);
entry_point!(rule_documentation => Documentation);
