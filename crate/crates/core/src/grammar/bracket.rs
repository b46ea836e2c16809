use std::fmt;

use crate::error::{Error, Result};

use super::tree::{BitTree, Node};

/// L-system bracketed string over `F + - [ ]`.
///
/// `[-F ...]` holds a left subtree and `[+F ...]` a right subtree; leaves
/// expand to nothing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BracketedString(String);

/// Tree shape recovered from a bracketed string.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

impl Shape {
    /// Perfect tree of the given depth.
    pub fn perfect(depth: u32) -> Shape {
        match depth {
            0 => Shape::Leaf,
            d => Shape::Node(
                Box::new(Shape::perfect(d - 1)),
                Box::new(Shape::perfect(d - 1)),
            ),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Node(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }
}

impl BracketedString {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Validates `s` and recovers the tree shape it encodes.
    pub fn parse(s: &str) -> Result<(BracketedString, Shape)> {
        let mut parser = Parser {
            bytes: s.as_bytes(),
            pos: 0,
        };
        let shape = parser.expansion()?;
        if parser.pos != s.len() {
            return Err(Error::MalformedBracket {
                offset: parser.pos,
                reason: "trailing symbols",
            });
        }
        Ok((BracketedString(s.to_owned()), shape))
    }

    pub fn shape(&self) -> Shape {
        Self::parse(&self.0)
            .expect("bracketed strings are validated on construction")
            .1
    }
}

impl fmt::Display for BracketedString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn expect(&mut self, token: &'static str, reason: &'static str) -> Result<()> {
        if self.bytes[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(Error::MalformedBracket {
                offset: self.pos,
                reason,
            })
        }
    }

    fn expansion(&mut self) -> Result<Shape> {
        if self.bytes.get(self.pos) != Some(&b'[') {
            return Ok(Shape::Leaf);
        }
        self.expect("[-F", "expected \"[-F\" to open a left subtree")?;
        let left = self.expansion()?;
        self.expect("][+F", "expected \"][+F\" between subtrees")?;
        let right = self.expansion()?;
        self.expect("]", "expected \"]\" to close a right subtree")?;
        Ok(Shape::Node(Box::new(left), Box::new(right)))
    }
}

/// Expands every internal node to `[-F<left>][+F<right>]`.
pub fn tree_to_bracketed(tree: &BitTree) -> BracketedString {
    fn expand(tree: &BitTree, node: Node, out: &mut String) {
        if let Some((left, right)) = tree.children(node) {
            out.push_str("[-F");
            expand(tree, left, out);
            out.push_str("][+F");
            expand(tree, right, out);
            out.push(']');
        }
    }
    let mut out = String::with_capacity(8 * tree.node_count());
    expand(tree, Node::ROOT, &mut out);
    BracketedString(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::BitString;

    fn bracketed(s: &str) -> BracketedString {
        tree_to_bracketed(&BitTree::new(BitString::parse_binary(s).unwrap()).unwrap())
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(bracketed("01").as_str(), "[-F][+F]");
        assert_eq!(bracketed("0101").as_str(), "[-F[-F][+F]][+F[-F][+F]]");
    }

    #[test]
    fn parse_recovers_shape() {
        for depth in 1..=6 {
            let bits = BitString::from(vec![false; 1 << depth]);
            let b = tree_to_bracketed(&BitTree::new(bits).unwrap());
            assert_eq!(b.shape(), Shape::perfect(depth));
            assert_eq!(b.shape().leaf_count(), 1 << depth);
        }
        let (_, shape) = BracketedString::parse("[-F[-F][+F]][+F]").unwrap();
        assert_eq!(
            shape,
            Shape::Node(
                Box::new(Shape::Node(Box::new(Shape::Leaf), Box::new(Shape::Leaf))),
                Box::new(Shape::Leaf)
            )
        );
    }

    #[test]
    fn parse_rejects_malformed() {
        for bad in [
            "[+F][-F]",
            "[-F][+F",
            "[-F]",
            "[F][+F]",
            "[-F][+F]]",
            "[-F][+F]x",
            "[-F[+F]",
        ] {
            assert!(
                matches!(
                    BracketedString::parse(bad),
                    Err(Error::MalformedBracket { .. })
                ),
                "{bad}"
            );
        }
        assert_eq!(BracketedString::parse("").unwrap().1, Shape::Leaf);
    }
}
