use std::fmt;
use std::str::FromStr;

/// Arbitrary-precision decimal kept in canonical plain notation.
///
/// Values are stored as sign, integer digits and fraction digits, so `5`,
/// `5.0` and `5e0` compare equal and print as `5`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decimal {
    negative: bool,
    /// No leading zeros; `"0"` for zero magnitude below one.
    int: String,
    /// No trailing zeros.
    frac: String,
}

const MAX_EXPONENT: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDecimalError(pub String);

impl fmt::Display for ParseDecimalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a decimal number: {:?}", self.0)
    }
}

impl std::error::Error for ParseDecimalError {}

impl Decimal {
    pub fn zero() -> Self {
        Self {
            negative: false,
            int: "0".into(),
            frac: String::new(),
        }
    }

    fn from_parts(negative: bool, int: &str, frac: &str) -> Self {
        let int = int.trim_start_matches('0');
        let frac = frac.trim_end_matches('0');
        let int = if int.is_empty() { "0" } else { int };
        let zero = int == "0" && frac.is_empty();
        Self {
            negative: negative && !zero,
            int: int.to_owned(),
            frac: frac.to_owned(),
        }
    }

    pub fn is_integer(&self) -> bool {
        self.frac.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.int == "0" && self.frac.is_empty()
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }
}

impl FromStr for Decimal {
    type Err = ParseDecimalError;

    /// Accepts `[+-]digits[.digits][(e|E)[+-]digits]`, with digits on at
    /// least one side of the point.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseDecimalError(s.to_owned());
        let t = s.trim();
        let (negative, body) = match t.as_bytes().first() {
            Some(b'-') => (true, &t[1..]),
            Some(b'+') => (false, &t[1..]),
            _ => (false, t),
        };
        let (mantissa, exponent) = match body.find(['e', 'E']) {
            Some(i) => {
                let exp: i64 = body[i + 1..].parse().map_err(|_| err())?;
                if exp.abs() > MAX_EXPONENT {
                    return Err(err());
                }
                (&body[..i], exp)
            }
            None => (body, 0),
        };
        let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if (int.is_empty() && frac.is_empty())
            || !int.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(err());
        }
        if exponent == 0 {
            return Ok(Self::from_parts(negative, int, frac));
        }
        // shift the decimal point over the concatenated digits
        let digits = format!("{int}{frac}");
        let point = int.len() as i64 + exponent;
        let (int, frac) = if point <= 0 {
            (
                String::new(),
                format!("{}{}", "0".repeat((-point) as usize), digits),
            )
        } else if point as usize >= digits.len() {
            (
                format!("{}{}", digits, "0".repeat(point as usize - digits.len())),
                String::new(),
            )
        } else {
            let (a, b) = digits.split_at(point as usize);
            (a.to_owned(), b.to_owned())
        };
        Ok(Self::from_parts(negative, &int, &frac))
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        f.write_str(&self.int)?;
        if !self.frac.is_empty() {
            write!(f, ".{}", self.frac)?;
        }
        Ok(())
    }
}

macro_rules! decimal_from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Decimal {
            fn from(v: $t) -> Self {
                v.to_string().parse().expect("integers are decimals")
            }
        }
    )*};
}
decimal_from_int!(u8, u32, u64, i32, i64, usize);

/// A JSON value with ordered object members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemaValue {
    Object(Vec<(String, SchemaValue)>),
    Array(Vec<SchemaValue>),
    Str(String),
    Num(Decimal),
    Bool(bool),
    Null,
}

impl SchemaValue {
    pub fn empty_object() -> Self {
        SchemaValue::Object(Vec::new())
    }

    /// Builds an object from members; a repeated key replaces the earlier value.
    pub fn object<K: Into<String>>(members: impl IntoIterator<Item = (K, SchemaValue)>) -> Self {
        let mut obj = SchemaValue::empty_object();
        for (k, v) in members {
            obj.insert(k, v);
        }
        obj
    }

    pub fn str(s: impl Into<String>) -> Self {
        SchemaValue::Str(s.into())
    }

    pub fn num(d: impl Into<Decimal>) -> Self {
        SchemaValue::Num(d.into())
    }

    pub fn as_object(&self) -> Option<&[(String, SchemaValue)]> {
        match self {
            SchemaValue::Object(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            SchemaValue::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_object(&self) -> bool {
        matches!(self, SchemaValue::Object(_))
    }

    pub fn get(&self, key: &str) -> Option<&SchemaValue> {
        self.as_object()?
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v)
    }

    pub fn get_mut(&mut self, key: &str) -> Option<&mut SchemaValue> {
        match self {
            SchemaValue::Object(m) => m.iter_mut().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }

    /// Sets `key`, keeping its position if present. No-op on non-objects.
    pub fn insert(&mut self, key: impl Into<String>, value: SchemaValue) {
        if let SchemaValue::Object(m) = self {
            let key = key.into();
            match m.iter_mut().find(|(k, _)| *k == key) {
                Some(slot) => slot.1 = value,
                None => m.push((key, value)),
            }
        }
    }

    pub fn remove(&mut self, key: &str) -> Option<SchemaValue> {
        match self {
            SchemaValue::Object(m) => {
                let i = m.iter().position(|(k, _)| k == key)?;
                Some(m.remove(i).1)
            }
            _ => None,
        }
    }

    /// Equality that ignores the order of object members.
    pub fn structurally_eq(&self, other: &SchemaValue) -> bool {
        match (self, other) {
            (SchemaValue::Object(a), SchemaValue::Object(b)) => {
                a.len() == b.len()
                    && a.iter().all(|(k, v)| {
                        b.iter()
                            .find(|(k2, _)| k2 == k)
                            .is_some_and(|(_, v2)| v.structurally_eq(v2))
                    })
            }
            (SchemaValue::Array(a), SchemaValue::Array(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.structurally_eq(y))
            }
            (a, b) => a == b,
        }
    }
}

impl From<&str> for SchemaValue {
    fn from(s: &str) -> Self {
        SchemaValue::Str(s.to_owned())
    }
}

impl From<String> for SchemaValue {
    fn from(s: String) -> Self {
        SchemaValue::Str(s)
    }
}

impl From<bool> for SchemaValue {
    fn from(b: bool) -> Self {
        SchemaValue::Bool(b)
    }
}

impl From<Decimal> for SchemaValue {
    fn from(d: Decimal) -> Self {
        SchemaValue::Num(d)
    }
}

impl fmt::Display for SchemaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::serialize(self, false, 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> String {
        s.parse::<Decimal>().unwrap().to_string()
    }

    #[test]
    fn decimal_canonical_forms() {
        assert_eq!(d("5"), "5");
        assert_eq!(d("5.0"), "5");
        assert_eq!(d("+005.500"), "5.5");
        assert_eq!(d("-0"), "0");
        assert_eq!(d("-0.0"), "0");
        assert_eq!(d(".5"), "0.5");
        assert_eq!(d("5."), "5");
        assert_eq!(d("1e3"), "1000");
        assert_eq!(d("1.25E-2"), "0.0125");
        assert_eq!(d("-12.5e1"), "-125");
        assert_eq!(d("99999999999999999999999"), "99999999999999999999999");
        assert_eq!("5".parse::<Decimal>(), "5.000".parse::<Decimal>());
    }

    #[test]
    fn decimal_rejects() {
        for bad in [
            "", "-", ".", "abc", "1.2.3", "INF", "NaN", "1e", "1e99999", "0x10", "1 2",
        ] {
            assert!(bad.parse::<Decimal>().is_err(), "{bad}");
        }
    }

    #[test]
    fn decimal_predicates() {
        let x: Decimal = "-0.5".parse().unwrap();
        assert!(x.is_negative() && !x.is_integer() && !x.is_zero());
        assert!(Decimal::zero().is_zero());
        assert!(Decimal::from(7u64).is_integer());
    }

    #[test]
    fn object_insert_keeps_position() {
        let mut o = SchemaValue::object([("a", SchemaValue::Null), ("b", SchemaValue::Null)]);
        o.insert("a", true.into());
        assert_eq!(
            o.as_object().unwrap()[0],
            ("a".to_string(), SchemaValue::Bool(true))
        );
        assert_eq!(o.remove("a"), Some(SchemaValue::Bool(true)));
        assert!(o.get("a").is_none());
    }

    #[test]
    fn structural_equality_ignores_key_order() {
        let a = SchemaValue::object([("x", SchemaValue::Null), ("y", true.into())]);
        let b = SchemaValue::object([("y", true.into()), ("x", SchemaValue::Null)]);
        assert_ne!(a, b);
        assert!(a.structurally_eq(&b));
        let c = SchemaValue::Array(vec![a.clone(), b.clone()]);
        let e = SchemaValue::Array(vec![b, a]);
        assert!(c.structurally_eq(&e));
    }
}
