//! Positions inside target terms.
//!
//! Child indices: `λ` body is 0; application function 0, argument 1; pair
//! components 0 and 1; `let` scrutinee 0, body 1; pack payload 0.

use std::fmt;

use crate::target::TargetTerm;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn root() -> Self {
        Path(Vec::new())
    }

    pub fn child(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        Path(v)
    }

    pub fn join(&self, rel: &Path) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&rel.0);
        Path(v)
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ε" | "e" | "-" => Some(Path::root()),
            _ => s.split('.').map(|p| p.parse().ok()).collect::<Option<Vec<_>>>().map(Path),
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

pub fn child(t: &TargetTerm, i: usize) -> Option<&TargetTerm> {
    match (t, i) {
        (TargetTerm::Lam(_, _, b), 0) | (TargetTerm::Pack(_, b, _), 0) => Some(b),
        (TargetTerm::App(a, _), 0)
        | (TargetTerm::Pair(a, _), 0)
        | (TargetTerm::LetPair(_, _, a, _), 0)
        | (TargetTerm::LetPack(_, _, a, _), 0) => Some(a),
        (TargetTerm::App(_, b), 1)
        | (TargetTerm::Pair(_, b), 1)
        | (TargetTerm::LetPair(_, _, _, b), 1)
        | (TargetTerm::LetPack(_, _, _, b), 1) => Some(b),
        _ => None,
    }
}

fn child_mut(t: &mut TargetTerm, i: usize) -> Option<&mut TargetTerm> {
    match (t, i) {
        (TargetTerm::Lam(_, _, b), 0) | (TargetTerm::Pack(_, b, _), 0) => Some(b),
        (TargetTerm::App(a, _), 0)
        | (TargetTerm::Pair(a, _), 0)
        | (TargetTerm::LetPair(_, _, a, _), 0)
        | (TargetTerm::LetPack(_, _, a, _), 0) => Some(a),
        (TargetTerm::App(_, b), 1)
        | (TargetTerm::Pair(_, b), 1)
        | (TargetTerm::LetPair(_, _, _, b), 1)
        | (TargetTerm::LetPack(_, _, _, b), 1) => Some(b),
        _ => None,
    }
}

pub fn children(t: &TargetTerm) -> usize {
    match t {
        TargetTerm::Var(_) | TargetTerm::Star => 0,
        TargetTerm::Lam(..) | TargetTerm::Pack(..) => 1,
        _ => 2,
    }
}

pub fn get<'a>(t: &'a TargetTerm, path: &Path) -> Option<&'a TargetTerm> {
    path.0.iter().try_fold(t, |t, &i| child(t, i))
}

pub fn get_mut<'a>(t: &'a mut TargetTerm, path: &Path) -> Option<&'a mut TargetTerm> {
    path.0.iter().try_fold(t, |t, &i| child_mut(t, i))
}

/// All positions in pre-order (node before children, children left to right).
pub fn preorder(t: &TargetTerm) -> Vec<Path> {
    let mut out = Vec::new();
    let mut stack = vec![(Path::root(), t)];
    while let Some((p, t)) = stack.pop() {
        for i in (0..children(t)).rev() {
            stack.push((p.child(i), child(t, i).expect("child index in range")));
        }
        out.push(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_round_trip() {
        assert_eq!(Path::parse("ε"), Some(Path::root()));
        assert_eq!(Path::parse("0.1.1"), Some(Path(vec![0, 1, 1])));
        assert_eq!(Path(vec![1, 0]).to_string(), "1.0");
        assert_eq!(Path::parse("x"), None);
    }

    #[test]
    fn preorder_visits_parent_first() {
        let t = TargetTerm::app(TargetTerm::var("f"), TargetTerm::pair(TargetTerm::var("a"), TargetTerm::var("b")));
        let ps: Vec<String> = preorder(&t).iter().map(|p| p.to_string()).collect();
        assert_eq!(ps, ["ε", "0", "1", "1.0", "1.1"]);
    }
}
