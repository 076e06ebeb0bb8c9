//! Independent oracles shared by the integration tests. They work on raw
//! letter words and plain arithmetic rather than the library's tree walks.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use markoff_hurwitz::tree::{canonical_geodesic, Geodesic, Vertex};
use markoff_hurwitz::C64;

/// Positive solutions of `Σ x² = ∏ x` with entries `<= bound`, sorted
/// ascending. Scans `x_1 ≤ … ≤ x_{n-1}` in the box and solves the quadratic
/// `z² − P z + S = 0` for the last entry.
pub fn brute_force_solutions(n: usize, bound: i128) -> Vec<Vec<i128>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    scan(n - 1, bound, 1, &mut cur, &mut out);
    out.sort();
    out
}

fn scan(len: usize, bound: i128, min: i128, cur: &mut Vec<i128>, out: &mut Vec<Vec<i128>>) {
    if cur.len() == len {
        let s: i128 = cur.iter().map(|v| v * v).sum();
        let Some(p) = cur.iter().try_fold(1i128, |acc, &v| acc.checked_mul(v)) else { return };
        // z ≤ bound and z (P − z) = S give P ≤ bound + S
        if p > bound + s {
            return;
        }
        let disc = p * p - 4 * s;
        if disc < 0 {
            return;
        }
        let r = isqrt(disc);
        if r * r != disc {
            return;
        }
        for z in [(p - r) / 2, (p + r) / 2] {
            if (p - r) % 2 == 0 && z >= *cur.last().unwrap() && z <= bound && z * z - p * z + s == 0 {
                let mut t = cur.clone();
                t.push(z);
                if !out.contains(&t) {
                    out.push(t);
                }
            }
        }
        return;
    }
    for v in min..=bound {
        cur.push(v);
        scan(len, bound, v, cur, out);
        cur.pop();
    }
}

fn isqrt(v: i128) -> i128 {
    let mut r = (v as f64).sqrt() as i128;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

pub fn totient(m: u64) -> u64 {
    (1..=m).filter(|&k| gcd(k, m) == 1).count() as u64
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One step along colour `c` on reduced words.
pub fn step(v: &[u8], c: u8) -> Vec<u8> {
    let mut w = v.to_vec();
    if w.last() == Some(&c) {
        w.pop();
    } else {
        w.push(c);
    }
    w
}

/// Edges of the `{i, j}` geodesic through `v` within `len` steps either way,
/// as `(shorter endpoint, colour)`.
pub fn geodesic_edges(v: &[u8], i: u8, j: u8, len: usize) -> BTreeSet<(Vec<u8>, u8)> {
    let mut out = BTreeSet::new();
    for (first, second) in [(i, j), (j, i)] {
        let mut cur = v.to_vec();
        for s in 0..len {
            let c = if s % 2 == 0 { first } else { second };
            let next = step(&cur, c);
            let near = if next.len() < cur.len() { next.clone() } else { cur.clone() };
            out.insert((near, c));
            cur = next;
        }
    }
    out
}

/// `F` straight from its definition on words: 1 through the root, and
/// otherwise the sum over the two geodesics through the root-ward edge.
pub fn fibonacci_oracle(v: &[u8], i: u8, j: u8, memo: &mut HashMap<(Vec<u8>, u8, u8), u128>) -> u128 {
    let (i, j) = (i.min(j), i.max(j));
    // slide to the vertex of the geodesic nearest the root
    let mut v = v.to_vec();
    while let Some(&l) = v.last() {
        if l == i || l == j {
            v.pop();
        } else {
            break;
        }
    }
    let key = (v.clone(), i, j);
    if let Some(&f) = memo.get(&key) {
        return f;
    }
    let f = match v.last() {
        None => 1,
        Some(&k) => fibonacci_oracle(&v, i, k, memo) + fibonacci_oracle(&v, j, k, memo),
    };
    memo.insert(key, f);
    f
}

/// Every geodesic whose vertex nearest the root has depth `<= depth` and
/// whose `|φ|` is at most `k`, found by walking all vertices.
pub fn exhaustive_a_phi_k(a: &[C64], k: f64, depth: usize) -> BTreeSet<Geodesic> {
    let n = a.len();
    let mut out = BTreeSet::new();
    let mut queue = VecDeque::from([(Vec::<u8>::new(), a.to_vec())]);
    while let Some((v, x)) = queue.pop_front() {
        let last = v.last().copied();
        for i in 1..=n as u8 {
            for j in i + 1..=n as u8 {
                if last == Some(i) || last == Some(j) {
                    continue;
                }
                let phi: C64 = (0..n).filter(|&m| m + 1 != i as usize && m + 1 != j as usize).map(|m| x[m]).product();
                if phi.norm() <= k {
                    let vert = Vertex::new(n, v.clone()).unwrap();
                    out.insert(canonical_geodesic(&vert, i, j));
                }
            }
        }
        if v.len() == depth {
            continue;
        }
        for c in 1..=n as u8 {
            if last == Some(c) {
                continue;
            }
            let mut y = x.clone();
            let p: C64 = (0..n).filter(|&m| m + 1 != c as usize).map(|m| x[m]).product();
            y[c as usize - 1] = p - x[c as usize - 1];
            queue.push_back((step(&v, c), y));
        }
    }
    out
}

/// Whether the geodesics form one component under "share an edge".
pub fn edge_connected(gs: &[Geodesic], reach: usize) -> bool {
    if gs.is_empty() {
        return true;
    }
    let edges: Vec<BTreeSet<(Vec<u8>, u8)>> = gs
        .iter()
        .map(|g| {
            let (i, j) = g.colors();
            geodesic_edges(g.root_vertex().letters(), i, j, reach)
        })
        .collect();
    let mut seen = HashSet::from([0usize]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(p) = queue.pop_front() {
        for q in 0..gs.len() {
            if !seen.contains(&q) && !edges[p].is_disjoint(&edges[q]) {
                seen.insert(q);
                queue.push_back(q);
            }
        }
    }
    seen.len() == gs.len()
}
