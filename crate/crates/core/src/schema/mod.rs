//! JSON Schema value model, fragment merging and serialization.

mod merge;
mod value;

pub use merge::{merge_schemas, MergeConflict};
pub use value::{Decimal, ParseDecimalError, SchemaValue};

/// Emission order for schema keywords. Keywords not listed follow in
/// insertion order.
pub const CANONICAL_KEY_ORDER: &[&str] = &[
    "$schema",
    "type",
    "properties",
    "items",
    "minItems",
    "maxItems",
    "minimum",
    "maximum",
    "exclusiveMinimum",
    "exclusiveMaximum",
    "enum",
    "pattern",
    "minLength",
    "maxLength",
    "required",
    "definitions",
];

/// Reorders keywords of `schema` and of every nested subschema into
/// [`CANONICAL_KEY_ORDER`]. Member order of `properties` and `definitions`
/// maps is left as built.
pub fn canonicalize(schema: &mut SchemaValue) {
    let SchemaValue::Object(members) = schema else {
        return;
    };
    let rank = |k: &str| {
        CANONICAL_KEY_ORDER
            .iter()
            .position(|c| *c == k)
            .unwrap_or(CANONICAL_KEY_ORDER.len())
    };
    // stable sort keeps insertion order among unlisted keys
    members.sort_by_key(|(k, _)| rank(k));
    for (key, value) in members.iter_mut() {
        match key.as_str() {
            "properties" | "definitions" => {
                if let SchemaValue::Object(entries) = value {
                    for (_, sub) in entries.iter_mut() {
                        canonicalize(sub);
                    }
                }
            }
            "items" => match value {
                SchemaValue::Array(subs) => subs.iter_mut().for_each(canonicalize),
                sub => canonicalize(sub),
            },
            _ => {}
        }
    }
}

/// Renders `value` as JSON text. Pretty mode puts each member on its own
/// line indented by `indent` spaces per level; compact mode emits no
/// insignificant whitespace.
pub fn serialize(value: &SchemaValue, pretty: bool, indent: usize) -> String {
    let mut out = String::new();
    write_value(&mut out, value, pretty, indent, 0);
    out
}

fn write_value(out: &mut String, value: &SchemaValue, pretty: bool, indent: usize, depth: usize) {
    match value {
        SchemaValue::Null => out.push_str("null"),
        SchemaValue::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        SchemaValue::Num(n) => out.push_str(&n.to_string()),
        SchemaValue::Str(s) => write_string(out, s),
        SchemaValue::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                newline(out, pretty, indent, depth + 1);
                write_value(out, item, pretty, indent, depth + 1);
            }
            newline(out, pretty, indent, depth);
            out.push(']');
        }
        SchemaValue::Object(members) => {
            if members.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (k, v)) in members.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                newline(out, pretty, indent, depth + 1);
                write_string(out, k);
                out.push_str(if pretty { ": " } else { ":" });
                write_value(out, v, pretty, indent, depth + 1);
            }
            newline(out, pretty, indent, depth);
            out.push('}');
        }
    }
}

fn newline(out: &mut String, pretty: bool, indent: usize, depth: usize) {
    if pretty {
        out.push('\n');
        out.extend(std::iter::repeat_n(' ', indent * depth));
    }
}

fn write_string(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '\u{08}' => out.push_str("\\b"),
            '\u{0c}' => out.push_str("\\f"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}
