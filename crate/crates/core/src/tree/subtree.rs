use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{check_arity, Color, DirectedEdge, Edge, TreeError, Vertex};

/// Finite connected subtree, given by its vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subtree {
    vertices: BTreeSet<Vertex>,
}

impl Subtree {
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Result<Self, TreeError> {
        let vertices: BTreeSet<Vertex> = vertices.into_iter().collect();
        if vertices.is_empty() {
            return Err(TreeError::EmptySubtree);
        }
        // Components of an induced forest = members whose parent is missing.
        let tops = vertices
            .iter()
            .filter(|v| v.parent().is_none_or(|p| !vertices.contains(&p)))
            .count();
        if tops != 1 {
            return Err(TreeError::Disconnected);
        }
        Ok(Subtree { vertices })
    }

    pub fn single(v: Vertex) -> Self {
        Subtree { vertices: BTreeSet::from([v]) }
    }

    pub fn from_edges<'a>(edges: impl IntoIterator<Item = &'a Edge>) -> Result<Self, TreeError> {
        let mut vs = BTreeSet::new();
        for e in edges {
            vs.insert(e.near.clone());
            vs.insert(e.far());
        }
        Subtree::new(vs)
    }

    pub fn vertices(&self) -> &BTreeSet<Vertex> {
        &self.vertices
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.vertices.contains(v)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.vertices
            .iter()
            .filter_map(|v| {
                let c = v.last()?;
                let p = v.parent()?;
                self.vertices.contains(&p).then_some(Edge { near: p, color: c })
            })
            .collect()
    }

    /// Member closest to the root.
    pub fn top(&self) -> &Vertex {
        self.vertices
            .iter()
            .find(|v| v.parent().is_none_or(|p| !self.vertices.contains(&p)))
            .expect("non-empty")
    }
}

/// `C(T)`: edges not in `T` with head in `T`, oriented towards `T`.
pub fn circular_set(n: usize, t: &Subtree) -> Result<Vec<DirectedEdge>, TreeError> {
    check_arity(n)?;
    let mut out = Vec::new();
    for v in t.vertices() {
        v.validate(n)?;
        for c in 1..=n as Color {
            let w = v.neighbor(c);
            if !t.contains(&w) {
                out.push(DirectedEdge::new(w, c));
            }
        }
    }
    Ok(out)
}

/// Closed ball of the given radius.
pub fn ball(n: usize, center: &Vertex, radius: usize) -> Result<Subtree, TreeError> {
    check_arity(n)?;
    center.validate(n)?;
    let mut all = BTreeSet::from([center.clone()]);
    let mut frontier = vec![(center.clone(), None::<Color>)];
    for _ in 0..radius {
        let mut next = Vec::new();
        for (v, from) in &frontier {
            for c in 1..=n as Color {
                if Some(c) != *from {
                    let w = v.neighbor(c);
                    all.insert(w.clone());
                    next.push((w, Some(c)));
                }
            }
        }
        frontier = next;
    }
    Ok(Subtree { vertices: all })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circular_set_sizes() {
        for n in 3..=7 {
            let root = Subtree::single(Vertex::root());
            assert_eq!(circular_set(n, &root).unwrap().len(), n);
            let edge = Subtree::new([Vertex::root(), Vertex::root().child(1)]).unwrap();
            assert_eq!(circular_set(n, &edge).unwrap().len(), 2 * (n - 1));
            let b1 = ball(n, &Vertex::root(), 1).unwrap();
            assert_eq!(circular_set(n, &b1).unwrap().len(), n * (n - 1));
        }
    }

    #[test]
    fn circular_edges_point_into_tree() {
        let t = ball(4, &Vertex::new(4, vec![2, 3]).unwrap(), 2).unwrap();
        for e in circular_set(4, &t).unwrap() {
            assert!(t.contains(&e.head()));
            assert!(!t.contains(&e.tail));
        }
    }

    #[test]
    fn rejects_disconnected() {
        let r = Subtree::new([Vertex::root().child(1), Vertex::root().child(2)]);
        assert_eq!(r, Err(TreeError::Disconnected));
        assert_eq!(Subtree::new([]), Err(TreeError::EmptySubtree));
    }

    #[test]
    fn ball_off_root_has_expected_size() {
        let c = Vertex::new(3, vec![1, 2, 3]).unwrap();
        let b = ball(3, &c, 2).unwrap();
        assert_eq!(b.len(), 1 + 3 + 6);
        assert_eq!(b.edges().len(), b.len() - 1);
    }
}
