//! Minimal Draft-04 validator used as an instance oracle.
//!
//! Covers type, properties, required, items, minItems, maxItems,
//! minimum/maximum with the boolean exclusive flags, enum, minLength,
//! maxLength, pattern and local `#/definitions/...` references. Unknown
//! keywords are ignored. Written independently of the translator.

use serde_json::Value;

pub fn is_valid(schema: &Value, instance: &Value) -> bool {
    validate(schema, instance, schema).is_ok()
}

pub fn validate(schema: &Value, instance: &Value, root: &Value) -> Result<(), String> {
    let Some(obj) = schema.as_object() else {
        return Err("schema is not an object".into());
    };

    if let Some(reference) = obj.get("$ref").and_then(Value::as_str) {
        let name = reference
            .strip_prefix("#/definitions/")
            .ok_or_else(|| format!("unsupported $ref {reference}"))?;
        let target = root
            .get("definitions")
            .and_then(|d| d.get(name))
            .ok_or_else(|| format!("dangling $ref {reference}"))?;
        return validate(target, instance, root);
    }

    if let Some(ty) = obj.get("type") {
        let allowed: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(Value::as_str).collect(),
            _ => return Err("bad type keyword".into()),
        };
        if !allowed.iter().any(|t| has_type(instance, t)) {
            return Err(format!("expected type {allowed:?}, got {instance}"));
        }
    }

    if let Some(options) = obj.get("enum").and_then(Value::as_array) {
        if !options.iter().any(|o| json_eq(o, instance)) {
            return Err(format!("{instance} not in enum"));
        }
    }

    if let Some(n) = instance.as_f64().filter(|_| instance.is_number()) {
        if let Some(min) = obj.get("minimum").and_then(Value::as_f64) {
            let exclusive = obj
                .get("exclusiveMinimum")
                .and_then(Value::as_bool)
                .unwrap_or(false);
            if n < min || (exclusive && n == min) {
                return Err(format!("{n} below minimum {min}"));
            }
        }
        if let Some(max) = obj.get("maximum").and_then(Value::as_f64) {
            let exclusive = obj
                .get("exclusiveMaximum")
                .and_then(Value::as_bool)
                .unwrap_or(false);
            if n > max || (exclusive && n == max) {
                return Err(format!("{n} above maximum {max}"));
            }
        }
    }

    if let Some(s) = instance.as_str() {
        let len = s.chars().count() as u64;
        if let Some(min) = obj.get("minLength").and_then(Value::as_u64) {
            if len < min {
                return Err(format!("string shorter than {min}"));
            }
        }
        if let Some(max) = obj.get("maxLength").and_then(Value::as_u64) {
            if len > max {
                return Err(format!("string longer than {max}"));
            }
        }
        if let Some(p) = obj.get("pattern").and_then(Value::as_str) {
            if !pattern_matches(p, s) {
                return Err(format!("{s:?} does not match {p}"));
            }
        }
    }

    if let Some(items) = instance.as_array() {
        let len = items.len() as u64;
        if let Some(min) = obj.get("minItems").and_then(Value::as_u64) {
            if len < min {
                return Err(format!("{len} items, minItems {min}"));
            }
        }
        if let Some(max) = obj.get("maxItems").and_then(Value::as_u64) {
            if len > max {
                return Err(format!("{len} items, maxItems {max}"));
            }
        }
        match obj.get("items") {
            Some(Value::Object(_)) => {
                for item in items {
                    validate(&obj["items"], item, root)?;
                }
            }
            Some(Value::Array(tuple)) => {
                for (item, sub) in items.iter().zip(tuple) {
                    validate(sub, item, root)?;
                }
            }
            _ => {}
        }
    }

    if let Some(members) = instance.as_object() {
        if let Some(required) = obj.get("required").and_then(Value::as_array) {
            for r in required.iter().filter_map(Value::as_str) {
                if !members.contains_key(r) {
                    return Err(format!("missing required property {r}"));
                }
            }
        }
        if let Some(props) = obj.get("properties").and_then(Value::as_object) {
            for (k, sub) in props {
                if let Some(v) = members.get(k) {
                    validate(sub, v, root).map_err(|e| format!("{k}: {e}"))?;
                }
            }
        }
    }
    Ok(())
}

fn has_type(v: &Value, ty: &str) -> bool {
    match ty {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "number" => v.is_number(),
        "integer" => v.is_number() && is_integral(v),
        _ => false,
    }
}

fn is_integral(v: &Value) -> bool {
    let text = v.to_string();
    match text.split_once('.') {
        Some((_, frac)) => frac.bytes().all(|b| b == b'0'),
        None => !text.contains(['e', 'E']) || v.as_f64().is_some_and(|f| f.fract() == 0.0),
    }
}

fn json_eq(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => x.as_f64() == y.as_f64(),
        _ => a == b,
    }
}

/// Unanchored search for the small regex subset used in fixtures:
/// literals, `.`, `\d`, `[...]` classes with ranges, and the quantifiers
/// `*`, `+`, `?`, `{n}`, `{n,m}`.
fn pattern_matches(pattern: &str, s: &str) -> bool {
    let atoms = compile(pattern);
    let chars: Vec<char> = s.chars().collect();
    (0..=chars.len()).any(|start| match_here(&atoms, &chars[start..]))
}

#[derive(Debug, Clone)]
enum Atom {
    Any,
    Class(Vec<(char, char)>),
}

#[derive(Debug, Clone)]
struct Piece {
    atom: Atom,
    min: usize,
    max: usize,
}

fn compile(p: &str) -> Vec<Piece> {
    let cs: Vec<char> = p.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let atom = match cs[i] {
            '.' => {
                i += 1;
                Atom::Any
            }
            '\\' => {
                let c = cs[i + 1];
                i += 2;
                if c == 'd' {
                    Atom::Class(vec![('0', '9')])
                } else {
                    Atom::Class(vec![(c, c)])
                }
            }
            '[' => {
                let mut ranges = Vec::new();
                i += 1;
                while cs[i] != ']' {
                    let lo = cs[i];
                    if cs.get(i + 1) == Some(&'-') && cs.get(i + 2) != Some(&']') {
                        ranges.push((lo, cs[i + 2]));
                        i += 3;
                    } else {
                        ranges.push((lo, lo));
                        i += 1;
                    }
                }
                i += 1;
                Atom::Class(ranges)
            }
            c => {
                i += 1;
                Atom::Class(vec![(c, c)])
            }
        };
        let (min, max) = match cs.get(i) {
            Some('*') => {
                i += 1;
                (0, usize::MAX)
            }
            Some('+') => {
                i += 1;
                (1, usize::MAX)
            }
            Some('?') => {
                i += 1;
                (0, 1)
            }
            Some('{') => {
                let end = i + cs[i..].iter().position(|c| *c == '}').unwrap();
                let body: String = cs[i + 1..end].iter().collect();
                i = end + 1;
                match body.split_once(',') {
                    Some((a, b)) => (a.parse().unwrap(), b.parse().unwrap_or(usize::MAX)),
                    None => {
                        let n = body.parse().unwrap();
                        (n, n)
                    }
                }
            }
            _ => (1, 1),
        };
        out.push(Piece { atom, min, max });
    }
    out
}

fn matches_atom(atom: &Atom, c: char) -> bool {
    match atom {
        Atom::Any => c != '\n',
        Atom::Class(ranges) => ranges.iter().any(|(lo, hi)| *lo <= c && c <= *hi),
    }
}

fn match_here(pieces: &[Piece], s: &[char]) -> bool {
    let Some((first, rest)) = pieces.split_first() else {
        return true;
    };
    let mut count = 0;
    while count < first.max && count < s.len() && matches_atom(&first.atom, s[count]) {
        count += 1;
    }
    (first.min..=count).rev().any(|n| match_here(rest, &s[n..]))
}
