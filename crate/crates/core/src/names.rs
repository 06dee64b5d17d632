//! Fresh identifier supply shared by both calculi.

use std::collections::BTreeSet;

/// Returns `base` if it is not taken, otherwise the first `stemN` (N = 1, 2, ...)
/// that is free. The stem is `base` with trailing digits removed.
pub fn fresh(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let base = if base.is_empty() { "v" } else { base };
    if !taken(base) {
        return base.to_string();
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|cand| !taken(cand))
        .expect("identifier space exhausted")
}

/// Convenience wrapper over a set of taken identifiers.
pub fn fresh_in(base: &str, taken: &BTreeSet<String>) -> String {
    fresh(base, |s| taken.contains(s))
}

/// Identifiers accepted by the surface syntax: ASCII letter or underscore,
/// followed by letters, digits, underscores or primes.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Looks up the innermost binding of `a` on the left and `b` on the right;
/// both must be bound by the same binder pair, or both free and identical.
pub(crate) fn bound_match(env: &[(String, String)], a: &str, b: &str) -> bool {
    let i = env.iter().rposition(|(l, _)| l == a);
    let j = env.iter().rposition(|(_, r)| r == b);
    match (i, j) {
        (Some(i), Some(j)) => i == j,
        (None, None) => a == b,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_keeps_free_base() {
        assert_eq!(fresh("k", |_| false), "k");
    }

    #[test]
    fn fresh_strips_digits_and_counts() {
        let taken: BTreeSet<String> = ["k", "k1", "k2"].iter().map(|s| s.to_string()).collect();
        assert_eq!(fresh_in("k1", &taken), "k3");
        assert_eq!(fresh_in("", &taken), "v");
    }
}
