//! Depth-bounded rule isomorphism.
//!
//! Two rules are homomorphic (depth 0) when both are internal, or both are
//! terminal with the same bit. They are isomorphic on depth `X` when they
//! are homomorphic and their left children, and their right children, are
//! isomorphic on depth `X - 1`. Equivalently, two nodes are equivalent when
//! their label trees agree after truncation `X` levels below them.

use std::collections::HashMap;

use super::tree::{BitTree, Node};

/// Canonical, tree-independent form of a node's truncated label tree, in
/// preorder: `b'I'` internal, `b'0'`/`b'1'` leaf bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature(Vec<u8>);

impl Signature {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

/// Signature of `node` at isomorphism depth `depth`, computed directly from
/// the tree.
pub fn depth_signature(tree: &BitTree, node: Node, depth: u32) -> Signature {
    fn walk(tree: &BitTree, node: Node, depth: u32, out: &mut Vec<u8>) {
        match tree.bit(node) {
            Some(bit) => out.push(if bit { b'1' } else { b'0' }),
            None => {
                out.push(b'I');
                if depth > 0 {
                    walk(tree, node.left(), depth - 1, out);
                    walk(tree, node.right(), depth - 1, out);
                }
            }
        }
    }
    assert!(tree.contains(node), "node {node:?} is outside the tree");
    let mut out = Vec::new();
    walk(tree, node, depth, &mut out);
    Signature(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Key {
    Terminal(bool),
    Internal(Option<(u32, u32)>),
}

/// Interned signatures of every node at one isomorphism depth.
///
/// Built bottom-up in `O(nodes * depth)`; ids are only comparable within one
/// table.
pub(crate) struct SignatureTable {
    ids: Vec<u32>,
}

impl SignatureTable {
    pub(crate) fn build(tree: &BitTree, depth: u32) -> SignatureTable {
        let depth = depth.min(tree.depth());
        let mut interner: HashMap<Key, u32> = HashMap::new();
        let mut intern = |key: Key| {
            let next = interner.len() as u32;
            *interner.entry(key).or_insert(next)
        };

        // layers[x][bfs_index] holds the depth-x id; leaves are shared by all x.
        let nodes = tree.node_count();
        let mut layers = vec![vec![0u32; nodes]; depth as usize + 1];
        for level in (0..=tree.depth()).rev() {
            for offset in 0..1usize << level {
                let node = Node::new(level, offset);
                let i = node.bfs_index();
                match tree.bit(node) {
                    Some(bit) => {
                        let id = intern(Key::Terminal(bit));
                        layers.iter_mut().for_each(|layer| layer[i] = id);
                    }
                    None => {
                        let (l, r) = (node.left().bfs_index(), node.right().bfs_index());
                        layers[0][i] = intern(Key::Internal(None));
                        for x in 1..=depth as usize {
                            let key = Key::Internal(Some((layers[x - 1][l], layers[x - 1][r])));
                            layers[x][i] = intern(key);
                        }
                    }
                }
            }
        }
        SignatureTable {
            ids: layers.pop().expect("at least one layer"),
        }
    }

    pub(crate) fn id(&self, node: Node) -> u32 {
        self.ids[node.bfs_index()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::BitString;

    fn tree(s: &str) -> BitTree {
        BitTree::new(BitString::parse_binary(s).unwrap()).unwrap()
    }

    #[test]
    fn distinct_two_bit_patterns() {
        // "11" and "01" sit at (3, 3) and (3, 2) of 0010011100101101's right half.
        let t = tree("0010011100101101");
        assert_eq!(t.substring(Node::new(3, 6)).to_string(), "11");
        assert_eq!(t.substring(Node::new(3, 7)).to_string(), "01");
        assert_ne!(
            depth_signature(&t, Node::new(3, 6), 1),
            depth_signature(&t, Node::new(3, 7), 1)
        );
        // Homomorphic at depth 0 though.
        assert_eq!(
            depth_signature(&t, Node::new(3, 6), 0),
            depth_signature(&t, Node::new(3, 7), 0)
        );
    }

    #[test]
    fn leaves_with_same_bit_agree_at_any_depth() {
        let t = tree("0010011100101101");
        for x in 0..6 {
            assert_eq!(
                depth_signature(&t, Node::new(4, 5), x),
                depth_signature(&t, Node::new(4, 15), x)
            );
            assert_ne!(
                depth_signature(&t, Node::new(4, 0), x),
                depth_signature(&t, Node::new(4, 15), x)
            );
        }
    }

    #[test]
    fn root_matches_its_left_child_at_depth_two() {
        let t = tree("0010011100101101");
        assert_eq!(
            depth_signature(&t, Node::ROOT, 2),
            depth_signature(&t, Node::new(1, 0), 2)
        );
        assert_ne!(
            depth_signature(&t, Node::ROOT, 3),
            depth_signature(&t, Node::new(1, 0), 3)
        );
    }

    #[test]
    fn table_agrees_with_direct_signatures() {
        let t = tree("0110100110010110");
        for x in 0..6 {
            let table = SignatureTable::build(&t, x);
            for a in t.nodes() {
                for b in t.nodes() {
                    assert_eq!(
                        table.id(a) == table.id(b),
                        depth_signature(&t, a, x) == depth_signature(&t, b, x),
                        "x={x} a={a:?} b={b:?}"
                    );
                }
            }
        }
    }
}
