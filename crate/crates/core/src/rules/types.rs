//! Built-in XSD data types and their JSON Schema equivalents.

use crate::schema::SchemaValue;
use crate::xml::QualifiedName;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Any,
    String,
    Number,
    Integer,
    Boolean,
    /// Integer bounded by zero: `(lower, exclusive)`.
    Bounded {
        lower: bool,
        exclusive: bool,
    },
}

const TABLE: &[(&str, Shape)] = &[
    ("string", Shape::String),
    ("float", Shape::Number),
    ("double", Shape::Number),
    ("decimal", Shape::Number),
    (
        "nonNegativeInteger",
        Shape::Bounded {
            lower: true,
            exclusive: false,
        },
    ),
    (
        "positiveInteger",
        Shape::Bounded {
            lower: true,
            exclusive: true,
        },
    ),
    (
        "nonPositiveInteger",
        Shape::Bounded {
            lower: false,
            exclusive: false,
        },
    ),
    (
        "negativeInteger",
        Shape::Bounded {
            lower: false,
            exclusive: true,
        },
    ),
    ("integer", Shape::Integer),
    ("long", Shape::Integer),
    ("int", Shape::Integer),
    ("short", Shape::Integer),
    ("byte", Shape::Integer),
    (
        "unsignedLong",
        Shape::Bounded {
            lower: true,
            exclusive: false,
        },
    ),
    (
        "unsignedInt",
        Shape::Bounded {
            lower: true,
            exclusive: false,
        },
    ),
    (
        "unsignedShort",
        Shape::Bounded {
            lower: true,
            exclusive: false,
        },
    ),
    (
        "unsignedByte",
        Shape::Bounded {
            lower: true,
            exclusive: false,
        },
    ),
    ("boolean", Shape::Boolean),
    ("anyURI", Shape::String),
    ("date", Shape::String),
    ("dateTime", Shape::String),
    ("time", Shape::String),
    ("duration", Shape::String),
    ("gYear", Shape::String),
    ("gYearMonth", Shape::String),
    ("gMonth", Shape::String),
    ("gMonthDay", Shape::String),
    ("gDay", Shape::String),
    ("normalizedString", Shape::String),
    ("token", Shape::String),
    ("language", Shape::String),
    ("Name", Shape::String),
    ("NCName", Shape::String),
    ("NMTOKEN", Shape::String),
    ("ID", Shape::String),
    ("IDREF", Shape::String),
    ("ENTITY", Shape::String),
    ("QName", Shape::String),
    ("NOTATION", Shape::String),
    ("base64Binary", Shape::String),
    ("hexBinary", Shape::String),
    ("anyType", Shape::Any),
    ("anySimpleType", Shape::Any),
];

/// One row of the built-in type table.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeMapping {
    pub xsd_type: &'static str,
    pub json_fragment: SchemaValue,
}

impl Shape {
    fn render(self) -> SchemaValue {
        let ty = |t: &str| ("type", SchemaValue::str(t));
        match self {
            Shape::Any => SchemaValue::empty_object(),
            Shape::String => SchemaValue::object([ty("string")]),
            Shape::Number => SchemaValue::object([ty("number")]),
            Shape::Integer => SchemaValue::object([ty("integer")]),
            Shape::Boolean => SchemaValue::object([ty("boolean")]),
            Shape::Bounded { lower, exclusive } => {
                let (bound, flag) = if lower {
                    ("minimum", "exclusiveMinimum")
                } else {
                    ("maximum", "exclusiveMaximum")
                };
                SchemaValue::object([
                    ty("integer"),
                    (bound, SchemaValue::num(0u64)),
                    (flag, SchemaValue::Bool(exclusive)),
                ])
            }
        }
    }
}

pub fn type_mappings() -> Vec<TypeMapping> {
    TABLE
        .iter()
        .map(|(name, shape)| TypeMapping {
            xsd_type: name,
            json_fragment: shape.render(),
        })
        .collect()
}

/// JSON Schema fragment for a built-in XSD type, if it has one.
pub fn convert_primitive_type(type_name: &QualifiedName) -> Option<SchemaValue> {
    if !type_name.is_xsd() {
        return None;
    }
    TABLE
        .iter()
        .find(|(name, _)| *name == type_name.local_name())
        .map(|(_, shape)| shape.render())
}

/// Whether values of the built-in type are JSON numbers.
pub(crate) fn is_numeric(fragment: &SchemaValue) -> bool {
    matches!(
        fragment.get("type").and_then(SchemaValue::as_str),
        Some("number" | "integer")
    )
}
