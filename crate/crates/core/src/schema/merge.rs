use thiserror::Error;

use super::SchemaValue;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("conflicting values at {}: {left} vs {right}", if path.is_empty() { "<root>" } else { path })]
pub struct MergeConflict {
    /// Dotted key path, empty for the top level.
    pub path: String,
    pub left: Box<SchemaValue>,
    pub right: Box<SchemaValue>,
}

/// Deep-merges two schema fragments.
///
/// Keys present on one side only are unioned, `a`'s first. Objects merge
/// recursively, arrays concatenate with duplicates dropped (first occurrence
/// wins) and equal scalars collapse. Anything else is a conflict.
pub fn merge_schemas(a: &SchemaValue, b: &SchemaValue) -> Result<SchemaValue, MergeConflict> {
    merge_at(a, b, &mut Vec::new())
}

fn merge_at(
    a: &SchemaValue,
    b: &SchemaValue,
    path: &mut Vec<String>,
) -> Result<SchemaValue, MergeConflict> {
    match (a, b) {
        (SchemaValue::Object(left), SchemaValue::Object(right)) => {
            let mut out = left.clone();
            for (key, rv) in right {
                match out.iter_mut().find(|(k, _)| k == key) {
                    Some(slot) => {
                        path.push(key.clone());
                        slot.1 = merge_at(&slot.1, rv, path)?;
                        path.pop();
                    }
                    None => out.push((key.clone(), rv.clone())),
                }
            }
            Ok(SchemaValue::Object(out))
        }
        (SchemaValue::Array(left), SchemaValue::Array(right)) => {
            let mut out: Vec<SchemaValue> = Vec::with_capacity(left.len() + right.len());
            for v in left.iter().chain(right) {
                if !out.iter().any(|seen| seen.structurally_eq(v)) {
                    out.push(v.clone());
                }
            }
            Ok(SchemaValue::Array(out))
        }
        (x, y) if x.structurally_eq(y) => Ok(x.clone()),
        (x, y) => Err(MergeConflict {
            path: path.join("."),
            left: Box::new(x.clone()),
            right: Box::new(y.clone()),
        }),
    }
}
