//! Addresses on the Cayley tree `Δ` of `Γ_n = Z/2 * … * Z/2`.
//!
//! A vertex is a reduced word in the generators `b_1, …, b_n`, stored
//! root-first. Colours are 1-based. An edge of colour `i` joins `v` and
//! `v·b_i`. A geodesic of colours `{i, j}` is the bi-infinite path alternating
//! between `i`- and `j`-edges; it is addressed by its vertex closest to the
//! root, `[v*; {i, j}]`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod fibonacci;
mod subtree;

pub use fibonacci::{fibonacci, for_each_fibonacci, multiplicity, sierpinski_vector};
pub use subtree::{ball, circular_set, Subtree};

pub type Color = u8;

pub const MIN_ARITY: usize = 3;
pub const MAX_ARITY: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("arity {0} outside the supported range 3..=16")]
    Arity(usize),
    #[error("colour {color} outside 1..={n}")]
    Color { color: Color, n: usize },
    #[error("word is not reduced: letter {0} repeats")]
    NotReduced(Color),
    #[error("geodesic colours must differ, got {{{0}, {0}}}")]
    SameColors(Color),
    #[error("geodesic {0} is not in A^0(e_n) ∪ A^-(e_n)")]
    OutsideSierpinskiDomain(Geodesic),
    #[error("subtree is empty")]
    EmptySubtree,
    #[error("subtree vertex set is not connected")]
    Disconnected,
    #[error("Fibonacci value overflowed u128")]
    Overflow,
    #[error("multiplicity scan met F = {m} at depth {depth}, beyond the cap {cap}")]
    DepthCap { m: u64, depth: usize, cap: usize },
}

pub fn check_arity(n: usize) -> Result<(), TreeError> {
    if (MIN_ARITY..=MAX_ARITY).contains(&n) {
        Ok(())
    } else {
        Err(TreeError::Arity(n))
    }
}

fn check_color(n: usize, c: Color) -> Result<(), TreeError> {
    if c >= 1 && (c as usize) <= n {
        Ok(())
    } else {
        Err(TreeError::Color { color: c, n })
    }
}

/// Reduced word, root first. The empty word is the root `v0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(Vec<Color>);

impl Vertex {
    pub fn root() -> Self {
        Vertex(Vec::new())
    }

    pub fn new(n: usize, letters: Vec<Color>) -> Result<Self, TreeError> {
        check_arity(n)?;
        let v = Vertex(letters);
        v.validate(n)?;
        Ok(v)
    }

    pub fn validate(&self, n: usize) -> Result<(), TreeError> {
        for (k, &c) in self.0.iter().enumerate() {
            check_color(n, c)?;
            if k > 0 && self.0[k - 1] == c {
                return Err(TreeError::NotReduced(c));
            }
        }
        Ok(())
    }

    pub fn letters(&self) -> &[Color] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// Colour of the edge towards the root.
    pub fn last(&self) -> Option<Color> {
        self.0.last().copied()
    }

    /// The vertex across the edge of colour `c`.
    pub fn neighbor(&self, c: Color) -> Vertex {
        let mut w = self.0.clone();
        if w.last() == Some(&c) {
            w.pop();
        } else {
            w.push(c);
        }
        Vertex(w)
    }

    pub fn parent(&self) -> Option<Vertex> {
        let mut w = self.0.clone();
        w.pop().map(|_| Vertex(w))
    }

    pub fn child(&self, c: Color) -> Vertex {
        debug_assert_ne!(self.last(), Some(c));
        let mut w = self.0.clone();
        w.push(c);
        Vertex(w)
    }

    /// Tree distance.
    pub fn distance(&self, other: &Vertex) -> usize {
        let common = self
            .0
            .iter()
            .zip(&other.0)
            .take_while(|(a, b)| a == b)
            .count();
        self.depth() + other.depth() - 2 * common
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "v0");
        }
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// Undirected edge, stored as its endpoint nearer the root plus colour.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub near: Vertex,
    pub color: Color,
}

impl Edge {
    pub fn new(v: &Vertex, color: Color) -> Edge {
        if v.last() == Some(color) {
            Edge { near: v.parent().expect("non-root"), color }
        } else {
            Edge { near: v.clone(), color }
        }
    }

    pub fn far(&self) -> Vertex {
        self.near.child(self.color)
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.near.clone(), self.far())
    }
}

/// Edge with an orientation, pointing from `tail` to `tail·b_color`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DirectedEdge {
    pub tail: Vertex,
    pub color: Color,
}

impl DirectedEdge {
    pub fn new(tail: Vertex, color: Color) -> Self {
        DirectedEdge { tail, color }
    }

    pub fn head(&self) -> Vertex {
        self.tail.neighbor(self.color)
    }

    pub fn reversed(&self) -> DirectedEdge {
        DirectedEdge { tail: self.head(), color: self.color }
    }

    pub fn undirected(&self) -> Edge {
        Edge::new(&self.tail, self.color)
    }
}

impl fmt::Display for DirectedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -{}-> {}", self.tail, self.color, self.head())
    }
}

/// `[v*; {i, j}]` with `v*` the vertex of the geodesic closest to the root and
/// `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Geodesic {
    #[serde(rename = "v")]
    root: Vertex,
    colors: [Color; 2],
}

impl Geodesic {
    /// Canonical address of the `{i, j}` geodesic through `v`.
    pub fn through(n: usize, v: &Vertex, i: Color, j: Color) -> Result<Geodesic, TreeError> {
        check_arity(n)?;
        v.validate(n)?;
        check_color(n, i)?;
        check_color(n, j)?;
        if i == j {
            return Err(TreeError::SameColors(i));
        }
        Ok(canonical_geodesic(v, i, j))
    }

    /// Caller guarantees `v` is reduced, `i != j` and the last letter of `v`
    /// is neither colour.
    pub(crate) fn rooted(v: Vertex, i: Color, j: Color) -> Geodesic {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        debug_assert!(v.last() != Some(lo) && v.last() != Some(hi));
        Geodesic { root: v, colors: [lo, hi] }
    }

    pub fn root_vertex(&self) -> &Vertex {
        &self.root
    }

    pub fn colors(&self) -> (Color, Color) {
        (self.colors[0], self.colors[1])
    }

    /// `d(γ)`: distance from `v0`.
    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn contains_color(&self, c: Color) -> bool {
        self.colors.contains(&c)
    }

    /// Vertex `v_m`; positive `m` starts with the smaller colour.
    pub fn vertex(&self, m: i64) -> Vertex {
        geodesic_vertex(self, m)
    }

    /// Colour of the edge joining `v_m` and `v_{m+1}`.
    pub fn edge_color(&self, m: i64) -> Color {
        if m.rem_euclid(2) == 0 {
            self.colors[0]
        } else {
            self.colors[1]
        }
    }

    /// Colours fixed along the geodesic, ascending.
    pub fn fixed_colors(&self, n: usize) -> Vec<Color> {
        (1..=n as Color).filter(|c| !self.contains_color(*c)).collect()
    }
}

impl fmt::Display for Geodesic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; {{{}, {}}}]", self.root, self.colors[0], self.colors[1])
    }
}

/// Strips the trailing `{i, j}`-alternating suffix of `v`.
pub fn canonical_geodesic(v: &Vertex, i: Color, j: Color) -> Geodesic {
    let mut w = v.0.clone();
    while matches!(w.last(), Some(&c) if c == i || c == j) {
        w.pop();
    }
    Geodesic::rooted(Vertex(w), i, j)
}

pub fn geodesic_vertex(g: &Geodesic, m: i64) -> Vertex {
    let (lo, hi) = g.colors();
    let (first, second) = if m >= 0 { (lo, hi) } else { (hi, lo) };
    let mut w = g.root.0.clone();
    w.extend((0..m.unsigned_abs()).map(|k| if k % 2 == 0 { first } else { second }));
    Vertex(w)
}

/// Index of the unordered pair `{i, j}` among the `n(n-1)/2` pairs, in
/// lexicographic order.
pub fn pair_index(n: usize, i: Color, j: Color) -> usize {
    let (a, b) = if i < j { (i as usize - 1, j as usize - 1) } else { (j as usize - 1, i as usize - 1) };
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

pub fn pairs(n: usize) -> impl Iterator<Item = (Color, Color)> {
    (1..=n as Color).flat_map(move |i| (i + 1..=n as Color).map(move |j| (i, j)))
}

/// Colour pairs of the geodesics whose root is `v`.
pub fn rooted_pairs(n: usize, v: &Vertex) -> impl Iterator<Item = (Color, Color)> + '_ {
    let last = v.last();
    pairs(n).filter(move |&(i, j)| Some(i) != last && Some(j) != last)
}

/// All vertices at depth exactly `d`, in lexicographic order.
pub fn vertices_at_depth(n: usize, d: usize) -> Vec<Vertex> {
    let mut layer = vec![Vertex::root()];
    for _ in 0..d {
        let mut next = Vec::with_capacity(layer.len() * (n - 1));
        for v in &layer {
            for c in 1..=n as Color {
                if v.last() != Some(c) {
                    next.push(v.child(c));
                }
            }
        }
        layer = next;
    }
    layer
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(letters: &[Color]) -> Vertex {
        Vertex(letters.to_vec())
    }

    #[test]
    fn neighbor_appends_or_pops() {
        assert_eq!(v(&[]).neighbor(1), v(&[1]));
        assert_eq!(v(&[1, 2]).neighbor(2), v(&[1]));
        assert_eq!(v(&[1, 2]).neighbor(3), v(&[1, 2, 3]));
    }

    #[test]
    fn validation() {
        assert!(Vertex::new(3, vec![1, 2, 3]).is_ok());
        assert_eq!(Vertex::new(3, vec![1, 1]), Err(TreeError::NotReduced(1)));
        assert_eq!(Vertex::new(3, vec![4]), Err(TreeError::Color { color: 4, n: 3 }));
        assert_eq!(Vertex::new(2, vec![]), Err(TreeError::Arity(2)));
        assert_eq!(Vertex::new(17, vec![]), Err(TreeError::Arity(17)));
    }

    #[test]
    fn canonical_strips_alternating_suffix() {
        let g = canonical_geodesic(&v(&[1, 2, 1]), 1, 2);
        assert_eq!(g.root_vertex(), &Vertex::root());
        let g = canonical_geodesic(&v(&[3, 1, 2]), 2, 1);
        assert_eq!(g.root_vertex(), &v(&[3]));
        assert_eq!(g.colors(), (1, 2));
        let g = canonical_geodesic(&v(&[1, 3]), 1, 2);
        assert_eq!(g.root_vertex(), &v(&[1, 3]));
    }

    #[test]
    fn geodesic_vertex_orientation() {
        let g = Geodesic::rooted(Vertex::root(), 1, 2);
        assert_eq!(g.vertex(1), v(&[1]));
        assert_eq!(g.vertex(-1), v(&[2]));
        assert_eq!(g.vertex(3), v(&[1, 2, 1]));
        assert_eq!(g.vertex(-2), v(&[2, 1]));
        for m in -6..6 {
            let a = g.vertex(m);
            let b = g.vertex(m + 1);
            assert_eq!(a.distance(&b), 1);
            assert_eq!(a.neighbor(g.edge_color(m)), b);
            assert_eq!(canonical_geodesic(&a, 1, 2), g);
        }
    }

    #[test]
    fn pair_index_is_a_bijection() {
        for n in 3..=8 {
            let idx: Vec<usize> = pairs(n).map(|(i, j)| pair_index(n, i, j)).collect();
            let expected: Vec<usize> = (0..n * (n - 1) / 2).collect();
            assert_eq!(idx, expected);
        }
    }

    #[test]
    fn layer_sizes() {
        for n in 3..=5 {
            for d in 0..5 {
                let expected = if d == 0 { 1 } else { n * (n - 1usize).pow(d as u32 - 1) };
                assert_eq!(vertices_at_depth(n, d).len(), expected);
            }
        }
    }

    #[test]
    fn serialised_form() {
        let g = Geodesic::through(3, &v(&[1, 2, 3]), 1, 2).unwrap();
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"v":[1,2,3],"colors":[1,2]}"#);
        let back: Geodesic = serde_json::from_str(r#"{"v":[1,2,3],"colors":[1,2]}"#).unwrap();
        assert_eq!(back, g);
    }
}
