//! The Fibonacci function `F_{v0}` on geodesics and the Sierpinski vector.
//!
//! `F = 1` on the geodesics through the root. Otherwise, with `k` the colour
//! of the root-ward edge at `v*`, `F([v*; {i, j}]) = F([v*; {i, k}]) +
//! F([v*; {j, k}])`; both terms are strictly closer to the root.

use std::cell::RefCell;
use std::collections::HashMap;

use super::{canonical_geodesic, check_arity, pair_index, pairs, Color, Geodesic, TreeError, Vertex};

thread_local! {
    static MEMO: RefCell<HashMap<Geodesic, u128>> = RefCell::new(HashMap::new());
}

pub fn fibonacci(g: &Geodesic) -> Result<u128, TreeError> {
    if let Some(f) = MEMO.with(|m| m.borrow().get(g).copied()) {
        return Ok(f);
    }
    let f = match g.root_vertex().last() {
        None => 1,
        Some(k) => {
            let (i, j) = g.colors();
            let v = g.root_vertex();
            let a = fibonacci(&canonical_geodesic(v, i, k))?;
            let b = fibonacci(&canonical_geodesic(v, j, k))?;
            a.checked_add(b).ok_or(TreeError::Overflow)?
        }
    };
    MEMO.with(|m| m.borrow_mut().insert(g.clone(), f));
    Ok(f)
}

/// Depth-first walk over geodesics, carrying the Fibonacci values of every
/// geodesic through the current vertex.
///
/// `visit` sees each geodesic once, at its root vertex. Descent below a
/// vertex stops when `depth == max_depth` or when `prune` returns true on the
/// values through that vertex (indexed by [`pair_index`]).
pub fn for_each_fibonacci(
    n: usize,
    max_depth: usize,
    mut prune: impl FnMut(&[u128]) -> bool,
    mut visit: impl FnMut(&Geodesic, u128),
) -> Result<(), TreeError> {
    check_arity(n)?;
    let np = n * (n - 1) / 2;
    let mut stack: Vec<(Vertex, Vec<u128>)> = vec![(Vertex::root(), vec![1; np])];
    while let Some((v, vals)) = stack.pop() {
        let last = v.last();
        for (i, j) in pairs(n) {
            if Some(i) != last && Some(j) != last {
                visit(&Geodesic::rooted(v.clone(), i, j), vals[pair_index(n, i, j)]);
            }
        }
        if v.depth() == max_depth || prune(&vals) {
            continue;
        }
        for c in (1..=n as Color).rev() {
            if last == Some(c) {
                continue;
            }
            let mut next = vals.clone();
            for (i, j) in pairs(n) {
                if i != c && j != c {
                    next[pair_index(n, i, j)] = vals[pair_index(n, i, c)]
                        .checked_add(vals[pair_index(n, j, c)])
                        .ok_or(TreeError::Overflow)?;
                }
            }
            stack.push((v.child(c), next));
        }
    }
    Ok(())
}

/// Number of geodesics with `F(γ) = m`.
///
/// Every geodesic rooted strictly below a vertex has `F` at least the sum of
/// the two smallest values through that vertex, so branches are cut once
/// that sum exceeds `m`. Counted geodesics must lie within depth `2(m-1)`.
pub fn multiplicity(n: usize, m: u64) -> Result<u64, TreeError> {
    check_arity(n)?;
    if m == 0 {
        return Ok(0);
    }
    let target = m as u128;
    let cap = 2 * (m as usize - 1);
    let mut count = 0u64;
    let mut beyond_cap = None;
    for_each_fibonacci(
        n,
        usize::MAX,
        |vals| two_smallest_sum(vals) > target,
        |g, f| {
            if f == target {
                count += 1;
                if g.depth() > cap {
                    beyond_cap = Some(g.depth());
                }
            }
        },
    )?;
    if let Some(depth) = beyond_cap {
        return Err(TreeError::DepthCap { m, depth, cap });
    }
    Ok(count)
}

fn two_smallest_sum(vals: &[u128]) -> u128 {
    let (mut a, mut b) = (u128::MAX, u128::MAX);
    for &x in vals {
        if x < a {
            b = a;
            a = x;
        } else if x < b {
            b = x;
        }
    }
    a.saturating_add(b)
}

/// `S(γ) ∈ Z^{n-1}` on `A^0(e_n) ∪ A^-(e_n)`, where `e_n` is the colour-`n`
/// edge at the root oriented towards `v0`.
///
/// `S([v0; {i, n}]) = e_i` and `S` obeys the same recursion as `F`.
pub fn sierpinski_vector(n: usize, g: &Geodesic) -> Result<Vec<u128>, TreeError> {
    check_arity(n)?;
    g.root_vertex().validate(n)?;
    let top = n as Color;
    let v = g.root_vertex();
    let (i, j) = g.colors();
    match v.letters().first() {
        None if j == top => {
            let mut s = vec![0u128; n - 1];
            s[i as usize - 1] = 1;
            Ok(s)
        }
        Some(&c) if c == top => {
            let k = v.last().expect("non-root");
            let a = sierpinski_vector(n, &canonical_geodesic(v, i, k))?;
            let b = sierpinski_vector(n, &canonical_geodesic(v, j, k))?;
            a.iter()
                .zip(&b)
                .map(|(x, y)| x.checked_add(*y).ok_or(TreeError::Overflow))
                .collect()
        }
        _ => Err(TreeError::OutsideSierpinskiDomain(g.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::vertices_at_depth;

    fn g(v: &[Color], i: Color, j: Color) -> Geodesic {
        canonical_geodesic(&Vertex::new(6, v.to_vec()).unwrap(), i, j)
    }

    #[test]
    fn small_values() {
        assert_eq!(fibonacci(&g(&[], 1, 2)).unwrap(), 1);
        // [1; {2,3}] = [1; {2,1}] + [1; {3,1}] = 1 + 1
        assert_eq!(fibonacci(&g(&[1], 2, 3)).unwrap(), 2);
        // [1,2; {1,3}] = F([v0;{1,2}]) + F([1;{3,2}]) = 1 + 2
        assert_eq!(fibonacci(&g(&[1, 2], 1, 3)).unwrap(), 3);
    }

    #[test]
    fn walk_agrees_with_recursion() {
        for n in 3..=5 {
            let mut seen = 0;
            for_each_fibonacci(n, 4, |_| false, |geo, f| {
                assert_eq!(fibonacci(geo).unwrap(), f, "{geo}");
                seen += 1;
            })
            .unwrap();
            let expected: usize = (0..=4)
                .map(|d| {
                    let per = if d == 0 { n * (n - 1) / 2 } else { (n - 1) * (n - 2) / 2 };
                    vertices_at_depth(n, d).len() * per
                })
                .sum();
            assert_eq!(seen, expected);
        }
    }

    #[test]
    fn value_bounds_depth() {
        for_each_fibonacci(4, 5, |_| false, |geo, f| assert!(f > geo.depth() as u128)).unwrap();
    }

    #[test]
    fn multiplicity_of_one() {
        for n in 3..=7 {
            assert_eq!(multiplicity(n, 1).unwrap(), (n * (n - 1) / 2) as u64);
        }
    }

    #[test]
    fn sierpinski_base_and_domain() {
        assert_eq!(sierpinski_vector(4, &g(&[], 2, 4)).unwrap(), vec![0, 1, 0]);
        assert!(matches!(
            sierpinski_vector(4, &g(&[], 1, 2)),
            Err(TreeError::OutsideSierpinskiDomain(_))
        ));
        assert!(matches!(
            sierpinski_vector(4, &g(&[1], 2, 3)),
            Err(TreeError::OutsideSierpinskiDomain(_))
        ));
        assert_eq!(sierpinski_vector(4, &g(&[4], 1, 2)).unwrap(), vec![1, 1, 0]);
    }
}
