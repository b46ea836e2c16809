use std::ops::Range;

use serde::Serialize;

use crate::encoding::BitString;
use crate::error::{Error, Result};

/// Position of a node in a perfect binary tree. The root is `(0, 0)`; the
/// children of `(level, offset)` are `(level + 1, 2 * offset)` and
/// `(level + 1, 2 * offset + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Node {
    pub level: u32,
    pub offset: usize,
}

impl Node {
    pub const ROOT: Node = Node {
        level: 0,
        offset: 0,
    };

    pub fn new(level: u32, offset: usize) -> Node {
        Node { level, offset }
    }

    pub fn left(self) -> Node {
        Node {
            level: self.level + 1,
            offset: 2 * self.offset,
        }
    }

    pub fn right(self) -> Node {
        Node {
            level: self.level + 1,
            offset: 2 * self.offset + 1,
        }
    }

    /// Position in breadth-first, left-before-right order.
    pub fn bfs_index(self) -> usize {
        (1usize << self.level) - 1 + self.offset
    }
}

/// Perfect binary tree over a window of `2^depth` bits; node `(level,
/// offset)` spans bits `[offset * 2^(depth - level), (offset + 1) *
/// 2^(depth - level))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitTree {
    leaves: BitString,
    depth: u32,
}

impl BitTree {
    /// Requires a window whose length is a power of two, at least 2.
    pub fn new(window: BitString) -> Result<BitTree> {
        let len = window.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidWindow { len });
        }
        Ok(BitTree {
            depth: len.trailing_zeros(),
            leaves: window,
        })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn leaves(&self) -> &BitString {
        &self.leaves
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn node_count(&self) -> usize {
        2 * self.leaves.len() - 1
    }

    pub fn contains(&self, node: Node) -> bool {
        node.level <= self.depth && node.offset < 1usize << node.level
    }

    pub fn is_leaf(&self, node: Node) -> bool {
        node.level == self.depth
    }

    /// Levels between `node` and the leaves below it.
    pub fn height(&self, node: Node) -> u32 {
        self.depth - node.level
    }

    pub fn children(&self, node: Node) -> Option<(Node, Node)> {
        (!self.is_leaf(node)).then(|| (node.left(), node.right()))
    }

    /// Bit stored at a leaf.
    pub fn bit(&self, node: Node) -> Option<bool> {
        self.is_leaf(node).then(|| self.leaves[node.offset])
    }

    pub fn span(&self, node: Node) -> Range<usize> {
        let width = 1usize << self.height(node);
        node.offset * width..(node.offset + 1) * width
    }

    pub fn substring(&self, node: Node) -> BitString {
        let span = self.span(node);
        self.leaves
            .slice(span.start, span.end)
            .expect("span lies inside the window")
    }

    /// All nodes, breadth first, left before right.
    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        (0..=self.depth)
            .flat_map(|level| (0..1usize << level).map(move |offset| Node { level, offset }))
    }
}
