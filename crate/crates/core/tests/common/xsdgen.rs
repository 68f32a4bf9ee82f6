//! Random XSD documents over the supported construct grammar.

use proptest::prelude::*;

pub const PRIMITIVES: &[&str] = &[
    "string",
    "decimal",
    "double",
    "nonNegativeInteger",
    "positiveInteger",
    "int",
    "boolean",
    "date",
];

#[derive(Debug, Clone)]
pub enum Facet {
    MinLength(u8),
    MaxLength(u8),
    Pattern,
    Enumeration(Vec<&'static str>),
    MinInclusive(i16),
    MaxExclusive(i16),
}

#[derive(Debug, Clone)]
pub enum Ty {
    Primitive(&'static str),
    /// Reference to the global simple type `Code`.
    Named,
    Untyped,
    Restriction {
        numeric: bool,
        facets: Vec<Facet>,
    },
    Complex(Complex),
}

#[derive(Debug, Clone)]
pub struct Complex {
    pub elements: Vec<Element>,
    pub attributes: Vec<Attribute>,
}

#[derive(Debug, Clone)]
pub struct Element {
    pub ty: Ty,
    pub min: Option<u8>,
    /// `None` keeps the default, `Some(None)` is "unbounded".
    pub max: Option<Option<u8>>,
}

#[derive(Debug, Clone)]
pub struct Attribute {
    /// Reuse the name of the element at the same index, forcing an `@` conflict.
    pub shadow: bool,
    pub primitive: &'static str,
    pub required: bool,
}

fn facet() -> impl Strategy<Value = Facet> {
    prop_oneof![
        (0u8..4).prop_map(Facet::MinLength),
        (4u8..12).prop_map(Facet::MaxLength),
        Just(Facet::Pattern),
        proptest::sample::subsequence(vec!["red", "green", "blue"], 1..=3)
            .prop_map(Facet::Enumeration),
        (-50i16..0).prop_map(Facet::MinInclusive),
        (1i16..50).prop_map(Facet::MaxExclusive),
    ]
}

fn leaf() -> impl Strategy<Value = Ty> {
    prop_oneof![
        4 => proptest::sample::select(PRIMITIVES).prop_map(Ty::Primitive),
        1 => Just(Ty::Named),
        1 => Just(Ty::Untyped),
        2 => (any::<bool>(), proptest::collection::vec(facet(), 0..3)).prop_map(|(numeric, facets)| {
            let facets = facets
                .into_iter()
                .filter(|f| match f {
                    Facet::MinInclusive(_) | Facet::MaxExclusive(_) => numeric,
                    _ => !numeric,
                })
                .collect();
            Ty::Restriction { numeric, facets }
        }),
    ]
}

fn occurs() -> impl Strategy<Value = (Option<u8>, Option<Option<u8>>)> {
    (
        proptest::option::of(0u8..3),
        proptest::option::of(proptest::option::of(1u8..6)),
    )
        .prop_map(|(min, max)| {
            // keep maxOccurs >= minOccurs
            let max = match (min, max) {
                (Some(lo), Some(Some(hi))) if hi < lo => Some(Some(lo.max(1))),
                (Some(lo), None) if lo > 1 => Some(None),
                (_, m) => m,
            };
            (min, max)
        })
}

fn attribute() -> impl Strategy<Value = Attribute> {
    (
        any::<bool>(),
        proptest::sample::select(PRIMITIVES),
        any::<bool>(),
    )
        .prop_map(|(shadow, primitive, required)| Attribute {
            shadow,
            primitive,
            required,
        })
}

/// Types nested at most `depth` complex levels deep.
pub fn ty(depth: u32) -> impl Strategy<Value = Ty> {
    leaf().prop_recursive(depth, 24, 3, |inner| {
        (
            proptest::collection::vec((inner, occurs()), 0..3),
            proptest::collection::vec(attribute(), 0..3),
        )
            .prop_map(|(els, attributes)| {
                Ty::Complex(Complex {
                    elements: els
                        .into_iter()
                        .map(|(ty, (min, max))| Element { ty, min, max })
                        .collect(),
                    attributes,
                })
            })
    })
}

/// A whole schema with one root element of a generated type.
pub fn schema() -> impl Strategy<Value = String> {
    // the root itself counts as one level
    ty(3).prop_map(|t| render(&t))
}

pub fn render(root: &Ty) -> String {
    let mut out = String::from(
        "<xs:schema xmlns:xs=\"http://www.w3.org/2001/XMLSchema\">\n\
         <xs:simpleType name=\"Code\"><xs:restriction base=\"xs:string\">\
         <xs:pattern value=\"[A-Z]{3}\"/></xs:restriction></xs:simpleType>\n",
    );
    render_element(&mut out, "root", root, "", 0);
    out.push_str("</xs:schema>\n");
    out
}

fn render_element(out: &mut String, name: &str, ty: &Ty, occurs: &str, depth: usize) {
    let pad = "  ".repeat(depth + 1);
    match ty {
        Ty::Primitive(p) => out.push_str(&format!(
            "{pad}<xs:element name=\"{name}\" type=\"xs:{p}\"{occurs}/>\n"
        )),
        Ty::Named => out.push_str(&format!(
            "{pad}<xs:element name=\"{name}\" type=\"Code\"{occurs}/>\n"
        )),
        Ty::Untyped => out.push_str(&format!("{pad}<xs:element name=\"{name}\"{occurs}/>\n")),
        Ty::Restriction { numeric, facets } => {
            out.push_str(&format!(
                "{pad}<xs:element name=\"{name}\"{occurs}><xs:simpleType>"
            ));
            render_restriction(out, *numeric, facets);
            out.push_str("</xs:simpleType></xs:element>\n");
        }
        Ty::Complex(c) => {
            out.push_str(&format!(
                "{pad}<xs:element name=\"{name}\"{occurs}>\n{pad}<xs:complexType>\n"
            ));
            if !c.elements.is_empty() {
                out.push_str(&format!("{pad}<xs:sequence>\n"));
                for (i, el) in c.elements.iter().enumerate() {
                    let mut occ = String::new();
                    if let Some(min) = el.min {
                        occ.push_str(&format!(" minOccurs=\"{min}\""));
                    }
                    match el.max {
                        Some(Some(max)) => occ.push_str(&format!(" maxOccurs=\"{max}\"")),
                        Some(None) => occ.push_str(" maxOccurs=\"unbounded\""),
                        None => {}
                    }
                    render_element(out, &format!("e{i}"), &el.ty, &occ, depth + 1);
                }
                out.push_str(&format!("{pad}</xs:sequence>\n"));
            }
            for (i, a) in c.attributes.iter().enumerate() {
                let name = if a.shadow {
                    format!("e{i}")
                } else {
                    format!("a{i}")
                };
                let usage = if a.required { " use=\"required\"" } else { "" };
                out.push_str(&format!(
                    "{pad}<xs:attribute name=\"{name}\" type=\"xs:{}\"{usage}/>\n",
                    a.primitive
                ));
            }
            out.push_str(&format!("{pad}</xs:complexType>\n{pad}</xs:element>\n"));
        }
    }
}

fn render_restriction(out: &mut String, numeric: bool, facets: &[Facet]) {
    let base = if numeric { "xs:integer" } else { "xs:string" };
    out.push_str(&format!("<xs:restriction base=\"{base}\">"));
    let mut seen = std::collections::HashSet::new();
    for f in facets {
        // one facet of each kind keeps the restriction well formed
        if !seen.insert(std::mem::discriminant(f)) {
            continue;
        }
        match f {
            Facet::MinLength(n) => out.push_str(&format!("<xs:minLength value=\"{n}\"/>")),
            Facet::MaxLength(n) => out.push_str(&format!("<xs:maxLength value=\"{n}\"/>")),
            Facet::Pattern => out.push_str("<xs:pattern value=\"[a-z]+\"/>"),
            Facet::Enumeration(values) => {
                for v in values {
                    out.push_str(&format!("<xs:enumeration value=\"{v}\"/>"));
                }
            }
            Facet::MinInclusive(n) => out.push_str(&format!("<xs:minInclusive value=\"{n}\"/>")),
            Facet::MaxExclusive(n) => out.push_str(&format!("<xs:maxExclusive value=\"{n}\"/>")),
        }
    }
    out.push_str("</xs:restriction>");
}
