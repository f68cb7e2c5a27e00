//! Straight-line programs over the free group.
//!
//! A [`WordProgram`] is a DAG whose nodes are the two generators, products,
//! inverses and commutators of earlier nodes. It describes the same group
//! element as its expanded [`Word`] but can be evaluated in a group with a
//! number of multiplications proportional to the node count rather than the
//! word length, which matters for words like `a_n(w, v)` with millions of
//! letters.

use crate::word::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Node {
    A,
    B,
    Identity,
    Mul(NodeId, NodeId),
    Inv(NodeId),
    /// `[x, y] = x y x⁻¹ y⁻¹`
    Comm(NodeId, NodeId),
    /// `c x c⁻¹` as `Conj(x, c)`
    Conj(NodeId, NodeId),
}

/// Minimal interface needed to evaluate a program in a group.
pub trait GroupOps {
    type Elem: Clone;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn inv(&self, x: &Self::Elem) -> Self::Elem;
    fn comm(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        let xy = self.mul(x, y);
        let xyx = self.mul(&xy, &self.inv(x));
        self.mul(&xyx, &self.inv(y))
    }
    /// `c x c⁻¹`
    fn conj(&self, x: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(c, x), &self.inv(c))
    }
}

#[derive(Clone, Debug)]
pub struct WordProgram {
    nodes: Vec<Node>,
    a: NodeId,
    b: NodeId,
}

impl Default for WordProgram {
    fn default() -> Self {
        Self::new()
    }
}

impl WordProgram {
    pub fn new() -> Self {
        WordProgram { nodes: vec![Node::A, Node::B], a: NodeId(0), b: NodeId(1) }
    }

    pub fn a(&self) -> NodeId {
        self.a
    }

    pub fn b(&self) -> NodeId {
        self.b
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn push(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        NodeId(self.nodes.len() - 1)
    }

    pub fn identity(&mut self) -> NodeId {
        self.push(Node::Identity)
    }

    pub fn mul(&mut self, x: NodeId, y: NodeId) -> NodeId {
        self.push(Node::Mul(x, y))
    }

    pub fn inv(&mut self, x: NodeId) -> NodeId {
        self.push(Node::Inv(x))
    }

    pub fn comm(&mut self, x: NodeId, y: NodeId) -> NodeId {
        self.push(Node::Comm(x, y))
    }

    /// `c · x · c⁻¹`
    pub fn conj(&mut self, x: NodeId, c: NodeId) -> NodeId {
        self.push(Node::Conj(x, c))
    }

    /// `x^n` by binary powering.
    pub fn power(&mut self, x: NodeId, n: i64) -> NodeId {
        if n == 0 {
            return self.identity();
        }
        let base = if n < 0 { self.inv(x) } else { x };
        let mut e = n.unsigned_abs();
        let mut acc: Option<NodeId> = None;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq,
                    Some(a) => self.mul(a, sq),
                });
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(sq, sq);
            }
        }
        acc.expect("n != 0")
    }

    /// Appends a linear chain spelling `w`.
    pub fn word(&mut self, w: &Word) -> NodeId {
        let a = self.a;
        let b = self.b;
        let mut ai = None;
        let mut bi = None;
        let mut acc: Option<NodeId> = None;
        for &l in w.letters() {
            let g = match l {
                Letter::A => a,
                Letter::B => b,
                Letter::AInv => *ai.get_or_insert_with(|| self.push(Node::Inv(a))),
                Letter::BInv => *bi.get_or_insert_with(|| self.push(Node::Inv(b))),
            };
            acc = Some(match acc {
                None => g,
                Some(p) => self.mul(p, g),
            });
        }
        acc.unwrap_or_else(|| self.identity())
    }

    /// Copies the nodes of `other` into `self`, substituting `a ↦ image_a`
    /// and `b ↦ image_b`. Returns the id map from `other` into `self`.
    pub fn embed(&mut self, other: &WordProgram, image_a: NodeId, image_b: NodeId) -> Vec<NodeId> {
        let mut map = Vec::with_capacity(other.nodes.len());
        for node in &other.nodes {
            let id = match *node {
                Node::A => image_a,
                Node::B => image_b,
                Node::Identity => self.identity(),
                Node::Mul(x, y) => self.mul(map[x.0], map[y.0]),
                Node::Inv(x) => self.inv(map[x.0]),
                Node::Comm(x, y) => self.comm(map[x.0], map[y.0]),
                Node::Conj(x, c) => self.conj(map[x.0], map[c.0]),
            };
            map.push(id);
        }
        map
    }

    /// Evaluates every node; `values[id.index()]` is the value of `id`.
    pub fn evaluate<G: GroupOps>(&self, group: &G, a: G::Elem, b: G::Elem) -> Vec<G::Elem> {
        let mut values: Vec<G::Elem> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match *node {
                Node::A => a.clone(),
                Node::B => b.clone(),
                Node::Identity => group.identity(),
                Node::Mul(x, y) => group.mul(&values[x.0], &values[y.0]),
                Node::Inv(x) => group.inv(&values[x.0]),
                Node::Comm(x, y) => group.comm(&values[x.0], &values[y.0]),
                Node::Conj(x, c) => group.conj(&values[x.0], &values[c.0]),
            };
            values.push(v);
        }
        values
    }

    /// Expands the nodes in `targets` to reduced words.
    pub fn expand_many(&self, targets: &[NodeId]) -> Vec<Word> {
        let max = targets.iter().map(|t| t.0).max().map_or(0, |m| m + 1);
        let prefix = WordProgram { nodes: self.nodes[..max].to_vec(), a: self.a, b: self.b };
        let values = prefix.evaluate(&FreeGroup, Word::generator_a(), Word::generator_b());
        targets.iter().map(|t| values[t.0].clone()).collect()
    }

    pub fn expand(&self, target: NodeId) -> Word {
        self.expand_many(&[target]).pop().expect("one target")
    }
}

/// The free group itself, for expanding programs into reduced words.
pub struct FreeGroup;

impl GroupOps for FreeGroup {
    type Elem = Word;

    fn identity(&self) -> Word {
        Word::identity()
    }

    fn mul(&self, x: &Word, y: &Word) -> Word {
        x.concat(y)
    }

    fn inv(&self, x: &Word) -> Word {
        x.invert()
    }

    fn comm(&self, x: &Word, y: &Word) -> Word {
        x.commutator(y)
    }

    fn conj(&self, x: &Word, c: &Word) -> Word {
        x.conjugate_by(c)
    }
}
