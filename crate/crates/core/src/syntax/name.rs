use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A channel name: a textual base plus a freshness index.
///
/// The printed form is `base` for uid 0 and `base_uid` otherwise, so that
/// every name has exactly one spelling and parsing a printed name gives it
/// back unchanged.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name {
    base: Arc<str>,
    uid: u32,
}

impl Name {
    /// Builds a name from a base identifier and a uid.
    ///
    /// Panics if `base` is not a valid base identifier (see [`Name::is_valid_base`]).
    pub fn new(base: &str, uid: u32) -> Name {
        assert!(Name::is_valid_base(base), "invalid name base {base:?}");
        Name {
            base: Arc::from(base),
            uid,
        }
    }

    /// Parses the printed spelling of a name (`x`, `x_3`, `chan'`).
    pub fn parse(text: &str) -> Option<Name> {
        if !is_identifier(text) {
            return None;
        }
        if let Some((base, digits)) = text.rsplit_once('_') {
            if let Some(uid) = canonical_uid(digits) {
                if Name::is_valid_base(base) {
                    return Some(Name::new(base, uid));
                }
            }
        }
        if Name::is_valid_base(text) {
            Some(Name::new(text, 0))
        } else {
            None
        }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn uid(&self) -> u32 {
        self.uid
    }

    /// A base is an identifier that does not itself end in a uid suffix.
    pub fn is_valid_base(base: &str) -> bool {
        if !is_identifier(base) {
            return false;
        }
        match base.rsplit_once('_') {
            Some((head, digits)) => head.is_empty() || canonical_uid(digits).is_none(),
            None => true,
        }
    }
}

fn is_identifier(text: &str) -> bool {
    let mut chars = text.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Decimal digits without a leading zero, denoting a uid >= 1.
fn canonical_uid(digits: &str) -> Option<u32> {
    if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.uid == 0 {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{}_{}", self.base, self.uid)
        }
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Returns the name with base `base` and the smallest uid not in `avoid`.
pub fn fresh(avoid: &BTreeSet<Name>, base: &str) -> Name {
    (0..)
        .map(|uid| Name::new(base, uid))
        .find(|n| !avoid.contains(n))
        .expect("uid space exhausted")
}

/// Shorthand used throughout the tests and examples: `nm("x")` parses a printed name.
pub fn nm(text: &str) -> Name {
    Name::parse(text).unwrap_or_else(|| panic!("not a name: {text:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_examples() {
        let x0 = Name::new("x", 0);
        assert_eq!(fresh(&BTreeSet::from([x0]), "x"), Name::new("x", 1));
        assert_eq!(fresh(&BTreeSet::new(), "w"), Name::new("w", 0));
        let ws = BTreeSet::from([Name::new("w", 0), Name::new("w", 1)]);
        assert_eq!(fresh(&ws, "w"), Name::new("w", 2));
    }

    #[test]
    fn spelling_round_trips() {
        for (base, uid) in [
            ("x", 0),
            ("x", 7),
            ("chan'", 2),
            ("a_b", 0),
            ("q_0", 0),
            ("q_0", 4),
        ] {
            let n = Name::new(base, uid);
            assert_eq!(Name::parse(&n.to_string()), Some(n));
        }
        assert_eq!(Name::parse("x_01"), Some(Name::new("x_01", 0)));
        assert_eq!(Name::parse("x_12"), Some(Name::new("x", 12)));
        assert_eq!(Name::parse("1x"), None);
        assert!(!Name::is_valid_base("x_3"));
    }

    #[test]
    fn equality_is_pairwise() {
        assert_ne!(Name::new("x", 0), Name::new("x", 1));
        assert_ne!(Name::new("x", 1), Name::new("y", 1));
        assert_eq!(nm("x_1"), Name::new("x", 1));
    }
}
