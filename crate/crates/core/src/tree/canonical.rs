use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{parse_tree, Tree, TreeError};

/// Canonical parenthesis string of an unrooted tree.
///
/// Two trees have equal codes iff they are isomorphic. The code is itself
/// valid tree text, so `parse_tree(code.as_str())` rebuilds a representative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CanonicalCode(String);

impl CanonicalCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Number of vertices in the encoded tree.
    pub fn vertex_count(&self) -> usize {
        self.0.len() / 2
    }

    pub fn to_tree(&self) -> Tree {
        parse_tree(&self.0).expect("canonical codes are valid tree text")
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for CanonicalCode {
    type Err = TreeError;

    /// Accepts any tree text and canonicalizes it.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(ahu_code(&parse_tree(s)?))
    }
}

impl TryFrom<String> for CanonicalCode {
    type Error = TreeError;

    /// Accepts only strings that are already canonical.
    fn try_from(s: String) -> Result<Self, Self::Error> {
        let code: CanonicalCode = s.parse()?;
        if code.0 != s {
            return Err(TreeError::InvalidCode(s));
        }
        Ok(code)
    }
}

impl From<CanonicalCode> for String {
    fn from(c: CanonicalCode) -> Self {
        c.0
    }
}

/// AHU code of `t` rooted at `root`: every node is `(` + its children's
/// codes in lexicographic order + `)`.
pub fn rooted_code(t: &Tree, root: usize) -> String {
    let (parent, order) = t.rooted(root);
    let n = t.vertex_count();
    let mut child_codes: Vec<Vec<String>> = vec![Vec::new(); n];
    let mut codes: Vec<String> = vec![String::new(); n];
    for &v in order.iter().rev() {
        let mut children = std::mem::take(&mut child_codes[v]);
        children.sort_unstable();
        let mut code = String::with_capacity(2 + children.iter().map(String::len).sum::<usize>());
        code.push('(');
        for c in &children {
            code.push_str(c);
        }
        code.push(')');
        match parent[v] {
            Some(p) => child_codes[p].push(code),
            None => codes[v] = code,
        }
    }
    std::mem::take(&mut codes[root])
}

/// Root-independent canonical code: root at the center, and for a bicentral
/// tree take the lexicographically smaller of the two center-rooted codes.
pub fn ahu_code(t: &Tree) -> CanonicalCode {
    let code = t
        .centers()
        .into_iter()
        .map(|c| rooted_code(t, c))
        .min()
        .expect("a tree has at least one center");
    CanonicalCode(code)
}

pub fn trees_isomorphic(a: &Tree, b: &Tree) -> bool {
    a.vertex_count() == b.vertex_count() && ahu_code(a) == ahu_code(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_codes() {
        assert_eq!(ahu_code(&Tree::single()).as_str(), "()");
        assert_eq!(ahu_code(&Tree::path(2)).as_str(), "(())");
        assert_eq!(ahu_code(&Tree::path(3)).as_str(), "(()())");
        assert_eq!(ahu_code(&Tree::star(4)).as_str(), "(()()())");
        assert_eq!(ahu_code(&Tree::path(4)).as_str(), "((())())");
    }

    #[test]
    fn star_and_path_differ() {
        assert_ne!(ahu_code(&Tree::star(4)), ahu_code(&Tree::path(4)));
        assert!(!trees_isomorphic(&Tree::star(4), &Tree::path(4)));
        assert!(trees_isomorphic(&Tree::path(4), &Tree::path(4).relabel(&[2, 0, 3, 1])));
    }

    #[test]
    fn code_is_tree_text() {
        let t = parse_tree("((()())(()))").unwrap();
        let code = ahu_code(&t);
        assert_eq!(ahu_code(&code.to_tree()), code);
        assert_eq!(code.vertex_count(), t.vertex_count());
    }

    #[test]
    fn string_conversion_requires_canonical_form() {
        assert!(CanonicalCode::try_from("(()())".to_string()).is_ok());
        // Valid tree text, but rooted at a leaf rather than the center.
        assert!(CanonicalCode::try_from("((()))".to_string()).is_err());
        assert_eq!("((()))".parse::<CanonicalCode>().unwrap().as_str(), "(()())");
    }
}
