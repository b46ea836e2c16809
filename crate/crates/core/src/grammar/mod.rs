//! Rewriting rules of the perfect binary tree over a bit window, classified
//! into a context-free grammar.
//!
//! Each node contributes one rule `T -> [-F T_L][+F T_R]` (leaves: `T ->
//! null`). Rules are partitioned by [`depth_signature`]; class ids are
//! assigned in breadth-first, left-before-right order of first encounter,
//! so the root's class is always `C1`. Inside a class, rules whose
//! right-hand sides name the same pair of classes form one variant, and the
//! number of such rules is the variant's multiplicity.

mod bracket;
mod signature;
mod tree;

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use serde::Serialize;

pub use bracket::{tree_to_bracketed, BracketedString, Shape};
pub use signature::{depth_signature, Signature};
pub use tree::{BitTree, Node};

use crate::encoding::BitString;
use signature::SignatureTable;

/// Isomorphism depth used when none is given.
pub const DEFAULT_ISO_DEPTH: u32 = 2;

/// 1-based class id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ClassId(pub u32);

impl ClassId {
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.0)
    }
}

/// Right-hand side of a classified rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rhs {
    Internal { left: ClassId, right: ClassId },
    Terminal { bit: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Variant {
    pub rhs: Rhs,
    pub multiplicity: u32,
    /// Bits spanned by the first node (breadth first) using this variant.
    #[serde(serialize_with = "serialize_bits")]
    pub representative: BitString,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleClass {
    pub id: ClassId,
    pub variants: Vec<Variant>,
}

impl RuleClass {
    pub fn is_terminal(&self) -> bool {
        matches!(self.variants[0].rhs, Rhs::Terminal { .. })
    }

    /// Total number of rules in the class.
    pub fn rule_count(&self) -> u32 {
        self.variants.iter().map(|v| v.multiplicity).sum()
    }

    pub fn representative(&self) -> &BitString {
        &self.variants[0].representative
    }
}

/// Classified rewriting rules of one window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Grammar {
    pub classes: Vec<RuleClass>,
    pub root_class: ClassId,
    pub iso_depth: u32,
}

impl Grammar {
    pub fn class(&self, id: ClassId) -> &RuleClass {
        &self.classes[id.index()]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Aligned text table: one row per variant with its multiplicity, rule
    /// and representative substring.
    pub fn to_table(&self) -> String {
        let stats = grammar_stats(self);
        let mut rows = vec![[
            "class".to_owned(),
            "n_i".to_owned(),
            "n_ip".to_owned(),
            "rule".to_owned(),
            "substring".to_owned(),
        ]];
        for class in &self.classes {
            for (p, v) in class.variants.iter().enumerate() {
                let rule = match v.rhs {
                    Rhs::Internal { left, right } => format!("{} -> {left} {right}", class.id),
                    Rhs::Terminal { .. } => format!("{} -> null", class.id),
                };
                let (id, n_i) = if p == 0 {
                    (class.id.to_string(), class.variants.len().to_string())
                } else {
                    (String::new(), String::new())
                };
                rows.push([
                    id,
                    n_i,
                    v.multiplicity.to_string(),
                    rule,
                    v.representative.to_string(),
                ]);
            }
        }
        let widths: Vec<usize> = (0..5)
            .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();

        let mut out = format!(
            "n = {}  node_total = {}  iso_depth = {}\n",
            stats.n, stats.node_total, self.iso_depth
        );
        for row in rows {
            let mut line = String::new();
            for (c, cell) in row.iter().enumerate() {
                if c + 1 == row.len() {
                    line.push_str(cell);
                } else {
                    let _ = write!(line, "{cell:<w$}  ", w = widths[c]);
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

fn serialize_bits<S: serde::Serializer>(bits: &BitString, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(bits)
}

/// Partitions the tree's rules by isomorphism on depth `iso_depth`.
pub fn classify(tree: &BitTree, iso_depth: u32) -> Grammar {
    let table = SignatureTable::build(tree, iso_depth);

    let mut class_of_sig: HashMap<u32, ClassId> = HashMap::new();
    let mut class_of_node = vec![ClassId(0); tree.node_count()];
    for node in tree.nodes() {
        let next = ClassId(class_of_sig.len() as u32 + 1);
        class_of_node[node.bfs_index()] = *class_of_sig.entry(table.id(node)).or_insert(next);
    }

    let mut classes: Vec<RuleClass> = (1..=class_of_sig.len() as u32)
        .map(|id| RuleClass {
            id: ClassId(id),
            variants: Vec::new(),
        })
        .collect();
    for node in tree.nodes() {
        let rhs = match tree.children(node) {
            Some((l, r)) => Rhs::Internal {
                left: class_of_node[l.bfs_index()],
                right: class_of_node[r.bfs_index()],
            },
            None => Rhs::Terminal {
                bit: tree.bit(node).expect("leaf"),
            },
        };
        let class = &mut classes[class_of_node[node.bfs_index()].index()];
        match class.variants.iter_mut().find(|v| v.rhs == rhs) {
            Some(v) => v.multiplicity += 1,
            None => class.variants.push(Variant {
                rhs,
                multiplicity: 1,
                representative: tree.substring(node),
            }),
        }
    }

    Grammar {
        classes,
        root_class: class_of_node[Node::ROOT.bfs_index()],
        iso_depth,
    }
}

/// Counts exposed by a classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrammarStats {
    /// Number of classes.
    pub n: usize,
    /// Variants per class (`n_i`).
    pub per_class: Vec<usize>,
    /// Multiplicities per class and variant (`n_ip`).
    pub per_variant: Vec<Vec<u32>>,
    /// Sum of all multiplicities; equals the tree's node count.
    pub node_total: u64,
}

pub fn grammar_stats(g: &Grammar) -> GrammarStats {
    let per_variant: Vec<Vec<u32>> = g
        .classes
        .iter()
        .map(|c| c.variants.iter().map(|v| v.multiplicity).collect())
        .collect();
    GrammarStats {
        n: g.classes.len(),
        per_class: g.classes.iter().map(|c| c.variants.len()).collect(),
        node_total: per_variant.iter().flatten().map(|&m| u64::from(m)).sum(),
        per_variant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grammar(s: &str, x: u32) -> Grammar {
        classify(
            &BitTree::new(BitString::parse_binary(s).unwrap()).unwrap(),
            x,
        )
    }

    fn internal(l: u32, r: u32) -> Rhs {
        Rhs::Internal {
            left: ClassId(l),
            right: ClassId(r),
        }
    }

    #[test]
    fn table_window_classes() {
        let g = grammar("0010011100101101", 2);
        assert_eq!(g.len(), 10);
        assert_eq!(g.root_class, ClassId(1));
        // Breadth-first numbering: 0010 -> C2, 0111 -> C3, 1101 -> C4,
        // 00 -> C5, 10 -> C6, 01 -> C7, 11 -> C8, 0 -> C9, 1 -> C10.
        let rules: Vec<Vec<(Rhs, u32)>> = g
            .classes
            .iter()
            .map(|c| c.variants.iter().map(|v| (v.rhs, v.multiplicity)).collect())
            .collect();
        assert_eq!(
            rules,
            vec![
                vec![
                    (internal(1, 1), 1),
                    (internal(2, 3), 1),
                    (internal(2, 4), 1)
                ],
                vec![(internal(5, 6), 2)],
                vec![(internal(7, 8), 1)],
                vec![(internal(8, 7), 1)],
                vec![(internal(9, 9), 2)],
                vec![(internal(10, 9), 2)],
                vec![(internal(9, 10), 2)],
                vec![(internal(10, 10), 2)],
                vec![(Rhs::Terminal { bit: false }, 8)],
                vec![(Rhs::Terminal { bit: true }, 8)],
            ]
        );
        assert_eq!(
            g.class(ClassId(1)).variants[1].representative.to_string(),
            "00100111"
        );
        assert_eq!(g.class(ClassId(4)).representative().to_string(), "1101");
    }

    #[test]
    fn constant_windows() {
        // Heights 0..=X stay distinct; every taller node shares one class.
        for depth in 1..=9u32 {
            for x in 0..=4u32 {
                let g = grammar(&"0".repeat(1 << depth), x);
                assert_eq!(g.len() as u32, depth.min(x + 1) + 1, "depth {depth} x {x}");
                assert!(g.classes[1..].iter().all(|c| c.variants.len() == 1));
                // The merged top class rewrites to itself and to the next height down.
                let top = if depth > x + 1 { 2 } else { 1 };
                assert_eq!(g.classes[0].variants.len(), top, "depth {depth} x {x}");
                assert_eq!(g.classes.iter().filter(|c| c.is_terminal()).count(), 1);
            }
        }
        let g = grammar("00", 2);
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn stats_examples() {
        let s = grammar_stats(&grammar("0010011100101101", 2));
        assert_eq!(s.n, 10);
        assert_eq!(s.per_class[0], 3);
        assert_eq!(s.node_total, 31);

        let s = grammar_stats(&grammar(&"1".repeat(512), 2));
        assert_eq!(s.node_total, 1023);
        assert_eq!(s.n, 4);
        assert_eq!(
            s.per_variant,
            vec![vec![63, 64], vec![128], vec![256], vec![512]]
        );

        for v in 0u32..256 {
            let s: String = (0..8)
                .rev()
                .map(|i| if v >> i & 1 == 1 { '1' } else { '0' })
                .collect();
            assert_eq!(grammar_stats(&grammar(&s, 2)).node_total, 15);
        }
    }

    #[test]
    fn depth_zero_has_two_internal_free_classes() {
        let g = grammar("01010101", 0);
        assert_eq!(g.len(), 3);
        assert_eq!(g.class(ClassId(1)).variants.len(), 2);
    }

    #[test]
    fn table_rendering() {
        let text = grammar("0010011100101101", 2).to_table();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n = 10  node_total = 31  iso_depth = 2");
        assert!(lines[1].starts_with("class"));
        assert_eq!(lines.len(), 2 + 12);
        assert!(lines[2].starts_with("C1 ") && lines[2].ends_with("0010011100101101"));
        assert!(lines[3].contains("C1 -> C2 C3") && lines[3].ends_with("00100111"));
        assert!(lines.last().unwrap().contains("C10 -> null"));
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(grammar("01", 2)).unwrap();
        assert_eq!(v["root_class"], 1);
        assert_eq!(v["classes"][0]["variants"][0]["rhs"]["internal"]["left"], 2);
        assert_eq!(
            v["classes"][1]["variants"][0]["rhs"]["terminal"]["bit"],
            false
        );
        assert_eq!(v["classes"][0]["variants"][0]["representative"], "01");
    }
}
