use super::{Tree, TreeError};

/// Parses the nested-parentheses tree text format.
///
/// A tree is `(` followed by zero or more child trees and then `)`.
/// Whitespace anywhere is ignored. The outermost group becomes vertex 0 and
/// vertices are numbered in order of their opening parenthesis; the choice of
/// root has no effect on [`ahu_code`](super::ahu_code).
pub fn parse_tree(text: &str) -> Result<Tree, TreeError> {
    let mut stack: Vec<usize> = Vec::new();
    let mut edges = Vec::new();
    let mut vertex_count = 0usize;
    let mut closed_root = false;

    for (pos, ch) in text.char_indices() {
        if ch.is_whitespace() {
            continue;
        }
        if closed_root {
            return Err(TreeError::Syntax {
                position: pos,
                message: format!("unexpected {ch:?} after the root group closed"),
            });
        }
        match ch {
            '(' => {
                let v = vertex_count;
                vertex_count += 1;
                if let Some(&parent) = stack.last() {
                    edges.push((parent, v));
                }
                stack.push(v);
            }
            ')' => {
                if stack.pop().is_none() {
                    return Err(TreeError::Syntax {
                        position: pos,
                        message: "unmatched ')'".into(),
                    });
                }
                if stack.is_empty() {
                    closed_root = true;
                }
            }
            other => {
                return Err(TreeError::Syntax {
                    position: pos,
                    message: format!("unexpected character {other:?}"),
                });
            }
        }
    }

    if vertex_count == 0 {
        return Err(TreeError::EmptyInput);
    }
    if !stack.is_empty() {
        return Err(TreeError::Syntax {
            position: text.len(),
            message: format!("{} unclosed '('", stack.len()),
        });
    }
    Tree::new(vertex_count, edges)
}
