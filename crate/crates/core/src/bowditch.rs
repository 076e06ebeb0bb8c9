//! Bowditch-type conditions and the membership test.
//!
//! Each edge of colour `i` is directed from the side where the `i`-th
//! coordinate is larger in modulus towards the side where it is smaller.
//! Descending along these directions from the root ends at a sink or at a
//! geodesic with `|φ| ≤ K`. From there the finite set
//! `A_φ(K) = {γ : |φ(γ)| ≤ K}` is grown across shared edges: any member
//! meeting `γ` in an edge meets it inside the window of edges where the
//! moving coordinate is at most `H*_μ(γ)`, so only finitely many edges of each
//! member are inspected. `A_φ(K)` is edge-connected, so the search is complete
//! once the queue drains.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cplx::{in_segment, pair};
use crate::hurwitz::{flip, GeodesicWalker, GeodesicWeights, HurwitzError, HurwitzPoint, Tolerances};
use crate::tree::{canonical_geodesic, circular_set, pairs, Color, DirectedEdge, Edge, Geodesic, Subtree, TreeError, Vertex};
use crate::C64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BowditchError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Hurwitz(#[from] HurwitzError),
    #[error("K must exceed 2, got {0}")]
    SmallK(f64),
    #[error("t must be positive, got {0}")]
    NonPositiveT(f64),
    #[error("point is dihedral: two coordinates vanish")]
    Dihedral,
    #[error("A_φ(2+t) is not known to be finite: {0:?}")]
    Incomplete(Box<SearchOutcome>),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BowditchConfig {
    pub k: f64,
    /// Geodesics popped from the search queue.
    pub bfs_budget: usize,
    pub descent_budget: usize,
    /// Steps along one geodesic while locating its window.
    pub window_budget: usize,
    pub tol: Tolerances,
}

impl Default for BowditchConfig {
    fn default() -> Self {
        BowditchConfig {
            k: 2.5,
            bfs_budget: 1_000_000,
            descent_budget: 10_000,
            window_budget: 100_000,
            tol: Tolerances::default(),
        }
    }
}

impl BowditchConfig {
    pub fn with_k(k: f64) -> Self {
        BowditchConfig { k, ..Default::default() }
    }
}

/// `edge` points the way `φ` decreases; `decisive` is false on ties, which
/// are broken towards the lexicographically smaller endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDirection {
    pub edge: DirectedEdge,
    pub decisive: bool,
}

fn equal_moduli(r: f64, s: f64, tol: &Tolerances) -> bool {
    (r - s).abs() <= tol.modulus * r.max(s).max(1.0)
}

/// Direction of the colour-`c` edge at `v`, given `x = Φ(v)`.
pub fn direct_from_coords(v: &Vertex, x: &[C64], c: Color, tol: &Tolerances) -> EdgeDirection {
    let mut y = x.to_vec();
    flip(&mut y, c);
    let k = c as usize - 1;
    let (r, s) = (x[k].norm(), y[k].norm());
    let w = v.neighbor(c);
    if equal_moduli(r, s, tol) {
        let tail = if v < &w { w } else { v.clone() };
        EdgeDirection { edge: DirectedEdge::new(tail, c), decisive: false }
    } else if r > s {
        EdgeDirection { edge: DirectedEdge::new(v.clone(), c), decisive: true }
    } else {
        EdgeDirection { edge: DirectedEdge::new(w, c), decisive: true }
    }
}

pub fn direct_edge(a: &HurwitzPoint, v: &Vertex, c: Color, tol: &Tolerances) -> Result<EdgeDirection, BowditchError> {
    let x = a.phi_vertex(v)?;
    if c == 0 || c as usize > a.arity() {
        return Err(TreeError::Color { color: c, n: a.arity() }.into());
    }
    Ok(direct_from_coords(v, &x, c, tol))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexType {
    Sink,
    Merge,
    Fork,
}

/// Colours of the edges at `v` pointing away from `v`.
fn outgoing(v: &Vertex, x: &[C64], tol: &Tolerances) -> Vec<Color> {
    (1..=x.len() as Color)
        .filter(|&c| direct_from_coords(v, x, c, tol).edge.tail == *v)
        .collect()
}

pub fn vertex_type(a: &HurwitzPoint, v: &Vertex, tol: &Tolerances) -> Result<VertexType, BowditchError> {
    let x = a.phi_vertex(v)?;
    Ok(match outgoing(v, &x, tol).len() {
        0 => VertexType::Sink,
        1 => VertexType::Merge,
        _ => VertexType::Fork,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForkReport {
    pub vertex_type: VertexType,
    pub outgoing: Vec<Color>,
    /// `[v; {i, j}]` and `φ` for each pair of outgoing colours.
    pub pairs: Vec<(Geodesic, [f64; 2])>,
    /// Every such pair has `|φ| ≤ 2`.
    pub holds: bool,
}

fn is_dihedral(x: &[C64]) -> bool {
    x.iter().filter(|z| z.norm() <= 1e-12).count() >= 2
}

/// Checks that any two outgoing edges `i, j` at `v` have `|φ([v; {i, j}])| ≤ 2`.
pub fn fork_check(a: &HurwitzPoint, v: &Vertex, tol: &Tolerances) -> Result<ForkReport, BowditchError> {
    if is_dihedral(a.coords()) {
        return Err(BowditchError::Dihedral);
    }
    let x = a.phi_vertex(v)?;
    let out = outgoing(v, &x, tol);
    let mut report = ForkReport {
        vertex_type: match out.len() {
            0 => VertexType::Sink,
            1 => VertexType::Merge,
            _ => VertexType::Fork,
        },
        outgoing: out.clone(),
        pairs: Vec::new(),
        holds: true,
    };
    for (p, &i) in out.iter().enumerate() {
        for &j in &out[p + 1..] {
            let g = canonical_geodesic(v, i, j);
            let w = GeodesicWeights::from_coords(&x, &g);
            if w.phi.norm() > 2.0 * (1.0 + tol.segment) {
                report.holds = false;
            }
            report.pairs.push((g, [w.phi.re, w.phi.im]));
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum DescentResult {
    Sink { vertex: Vertex, steps: usize },
    FoundSmall { geodesic: Geodesic, steps: usize },
    BudgetExceeded { vertex: Vertex, steps: usize },
}

/// Follows outgoing edges from `start`, stopping at a sink or at the first
/// vertex lying on a geodesic with `|φ| ≤ threshold`.
pub fn descend_to_sink(
    a: &HurwitzPoint,
    start: &Vertex,
    threshold: f64,
    budget: usize,
    tol: &Tolerances,
) -> Result<DescentResult, BowditchError> {
    let n = a.arity();
    let mut v = start.clone();
    let mut x = a.phi_vertex(&v)?;
    for steps in 0..=budget {
        if let Some(g) = small_geodesic_at(n, &v, &x, threshold) {
            return Ok(DescentResult::FoundSmall { geodesic: g, steps });
        }
        let out = outgoing(&v, &x, tol);
        if out.is_empty() {
            return Ok(DescentResult::Sink { vertex: v, steps });
        }
        // steepest: smallest ratio |x_c'| / |x_c|
        let mut best = (f64::INFINITY, out[0]);
        for &c in &out {
            let mut y = x.clone();
            flip(&mut y, c);
            let k = c as usize - 1;
            let ratio = y[k].norm() / x[k].norm();
            if ratio < best.0 {
                best = (ratio, c);
            }
        }
        flip(&mut x, best.1);
        v = v.neighbor(best.1);
    }
    Ok(DescentResult::BudgetExceeded { vertex: v, steps: budget })
}

fn small_geodesic_at(n: usize, v: &Vertex, x: &[C64], threshold: f64) -> Option<Geodesic> {
    let total_log: f64 = x.iter().map(|z| z.norm().ln()).sum();
    pairs(n)
        .find(|&(i, j)| {
            let (xi, xj) = (x[i as usize - 1].norm(), x[j as usize - 1].norm());
            let phi = if xi > 0.0 && xj > 0.0 && total_log.is_finite() {
                (total_log - xi.ln() - xj.ln()).exp()
            } else {
                product_except_pair(x, i, j).norm()
            };
            phi <= threshold
        })
        .map(|(i, j)| canonical_geodesic(v, i, j))
}

fn product_except_pair(x: &[C64], i: Color, j: Color) -> C64 {
    x.iter()
        .enumerate()
        .filter(|(k, _)| *k + 1 != i as usize && *k + 1 != j as usize)
        .map(|(_, z)| z)
        .product()
}

/// Which radius along a geodesic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Radius {
    /// `H_μ(γ)`.
    Base,
    /// `H*_μ(γ)` for the threshold `K`: also covers every edge shared with a
    /// member of `A_φ(K)`.
    Starred { k: f64 },
    /// `H^t_μ(γ)`, defining `J(γ; t)` and the attracting tree.
    Enlarged { t: f64 },
}

/// `H_μ(γ) = sqrt|(σ-μ)/(φ²-4)| · 2|λ|²/(|λ|-1)`, infinite when `φ ∈ [-2, 2]`
/// or `σ = μ`.
pub fn h_mu(w: &GeodesicWeights, mu: C64, tol: &Tolerances) -> f64 {
    if in_segment(w.phi, tol.segment) || (w.sigma - mu).norm() <= tol.sigma_mu * (1.0 + mu.norm()) {
        return f64::INFINITY;
    }
    let l = w.lambda.norm();
    if l <= 1.0 {
        return f64::INFINITY;
    }
    ((w.sigma - mu) / (w.phi * w.phi - 4.0)).norm().sqrt() * 2.0 * l * l / (l - 1.0)
}

/// The radius for `γ` given `x = Φ(v*)`.
pub fn radius_from_coords(x: &[C64], g: &Geodesic, mu: C64, which: Radius, tol: &Tolerances) -> f64 {
    let w = GeodesicWeights::from_coords(x, g);
    let base = h_mu(&w, mu, tol);
    let fixed: Vec<f64> = x
        .iter()
        .enumerate()
        .filter(|(k, _)| !g.contains_color(*k as Color + 1))
        .map(|(_, z)| z.norm())
        .collect();
    // max over i of c / |∏_{j≠i} x_j| taken over the fixed coordinates
    let tail = |c: f64| {
        (0..fixed.len())
            .map(|i| c / fixed.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, r)| r).product::<f64>())
            .fold(0.0, f64::max)
    };
    match which {
        Radius::Base => base,
        Radius::Starred { k } => base.max(tail(k)),
        Radius::Enlarged { t } => (base + t).max(tail(2.0 + t)),
    }
}

pub fn h_mu_bounds(a: &HurwitzPoint, g: &Geodesic, which: Radius, tol: &Tolerances) -> Result<f64, BowditchError> {
    let x = a.phi_vertex(g.root_vertex())?;
    Ok(radius_from_coords(&x, g, a.mu(), which, tol))
}

/// Edges `e_m` (joining `v_m` and `v_{m+1}`) with `|y_m| ≤ H`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum JInterval {
    /// `m` from `lo` to `hi` inclusive; `lo > hi` when empty.
    Edges { lo: i64, hi: i64 },
    WholeGeodesic,
}

#[derive(Clone, Debug)]
struct Window {
    lo: i64,
    hi: i64,
    /// `Φ(v_m)` for `m = lo..=hi`.
    coords: Vec<Vec<C64>>,
}

#[derive(Debug)]
enum WindowError {
    Budget,
    Overflow,
}

/// Scans outwards from `v*` in both directions. Outside the window `|y_m|`
/// is strictly monotone, so each scan stops once `|y_m|` exceeds `radius` and
/// is still growing.
fn scan_window(g: &Geodesic, x0: &[C64], radius: f64, budget: usize) -> Result<Window, WindowError> {
    let mut inside: Vec<(i64, Vec<C64>)> = Vec::new();
    for forward in [true, false] {
        let mut w = GeodesicWalker::new(g, x0.to_vec());
        if !forward {
            w.step_back().map_err(|_| WindowError::Overflow)?;
        }
        let mut y = w.value().norm();
        for steps in 0.. {
            if steps > budget {
                return Err(WindowError::Budget);
            }
            if y <= radius {
                inside.push((w.position(), w.coords().to_vec()));
            }
            let moved = if forward { w.step_forward() } else { w.step_back() };
            if moved.is_err() {
                if y > radius {
                    break;
                }
                return Err(WindowError::Overflow);
            }
            let next = w.value().norm();
            if y > radius && next > y {
                break;
            }
            y = next;
        }
    }
    inside.sort_by_key(|(m, _)| *m);
    let (Some(lo), Some(hi)) = (inside.first().map(|p| p.0), inside.last().map(|p| p.0)) else {
        return Ok(Window { lo: 0, hi: -1, coords: Vec::new() });
    };
    // Keep the values walked straight out from v*; only walk across gaps,
    // so the window stays an interval.
    let mut coords: Vec<Vec<C64>> = Vec::with_capacity((hi - lo + 1) as usize);
    let mut next = inside.into_iter().peekable();
    let mut w: Option<GeodesicWalker> = None;
    for m in lo..=hi {
        if next.peek().is_some_and(|p| p.0 == m) {
            let (_, x) = next.next().unwrap();
            w = Some(GeodesicWalker::at(g, m, x.clone()));
            coords.push(x);
        } else {
            let walker = w.as_mut().expect("window starts at a scanned edge");
            walker.step_forward().map_err(|_| WindowError::Overflow)?;
            coords.push(walker.coords().to_vec());
        }
    }
    Ok(Window { lo, hi, coords })
}

pub fn j_interval(a: &HurwitzPoint, g: &Geodesic, which: Radius, cfg: &BowditchConfig) -> Result<JInterval, BowditchError> {
    let x = a.phi_vertex(g.root_vertex())?;
    let r = radius_from_coords(&x, g, a.mu(), which, &cfg.tol);
    if !r.is_finite() {
        return Ok(JInterval::WholeGeodesic);
    }
    match scan_window(g, &x, r, cfg.window_budget) {
        Ok(w) => Ok(JInterval::Edges { lo: w.lo, hi: w.hi }),
        Err(_) => Ok(JInterval::WholeGeodesic),
    }
}

/// A member of `A_φ(K)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Member {
    pub geodesic: Geodesic,
    #[serde(with = "pair")]
    pub phi: C64,
    #[serde(with = "pair")]
    pub sigma: C64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfiniteReason {
    /// `φ(γ) ∈ [-2, 2]`.
    OnSegment,
    /// `σ(γ) = μ` with `|λ| > 1`: the moving coordinate tends to zero in one
    /// direction, so infinitely many neighbours are small.
    SigmaEqualsMu,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SearchOutcome {
    /// All of `A_φ(K)`, sorted. Empty sets carry the sink that certifies it.
    Complete { members: Vec<Member>, sink: Option<Vertex> },
    Infinite { witness: Member, reason: InfiniteReason },
    BudgetExceeded { explored: usize, reason: String },
}

#[allow(non_snake_case)]
pub fn search_A_phi_K(a: &HurwitzPoint, cfg: &BowditchConfig) -> Result<SearchOutcome, BowditchError> {
    let k = cfg.k;
    if !(k > 2.0) {
        return Err(BowditchError::SmallK(k));
    }
    let n = a.arity();
    let tol = &cfg.tol;
    let seed = match descend_to_sink(a, &Vertex::root(), k, cfg.descent_budget, tol)? {
        DescentResult::Sink { vertex, .. } => {
            return Ok(SearchOutcome::Complete { members: Vec::new(), sink: Some(vertex) });
        }
        DescentResult::FoundSmall { geodesic, .. } => geodesic,
        DescentResult::BudgetExceeded { steps, .. } => {
            return Ok(SearchOutcome::BudgetExceeded { explored: steps, reason: "descent".into() });
        }
    };
    let mut seen: HashSet<Geodesic> = HashSet::from([seed.clone()]);
    let mut queue = VecDeque::from([seed]);
    let mut members = Vec::new();
    let mut popped = 0usize;
    while let Some(g) = queue.pop_front() {
        popped += 1;
        if popped > cfg.bfs_budget {
            return Ok(SearchOutcome::BudgetExceeded { explored: popped - 1, reason: "search".into() });
        }
        let x = a.phi_vertex(g.root_vertex())?;
        let w = GeodesicWeights::from_coords(&x, &g);
        let member = Member { geodesic: g.clone(), phi: w.phi, sigma: w.sigma };
        if in_segment(w.phi, tol.segment) {
            return Ok(SearchOutcome::Infinite { witness: member, reason: InfiniteReason::OnSegment });
        }
        if (w.sigma - a.mu()).norm() <= tol.sigma_mu * (1.0 + a.mu().norm()) {
            return Ok(SearchOutcome::Infinite { witness: member, reason: InfiniteReason::SigmaEqualsMu });
        }
        let r = radius_from_coords(&x, &g, a.mu(), Radius::Starred { k }, tol);
        let window = match scan_window(&g, &x, r, cfg.window_budget) {
            Ok(win) => win,
            Err(e) => {
                return Ok(SearchOutcome::BudgetExceeded { explored: popped, reason: format!("window of {g}: {e:?}") })
            }
        };
        let fixed = g.fixed_colors(n);
        for (off, xm) in window.coords.iter().enumerate() {
            let m = window.lo + off as i64;
            let c = g.edge_color(m);
            for &kk in &fixed {
                if product_except_pair(xm, c, kk).norm() <= k {
                    let b = canonical_geodesic(&g.vertex(m), c, kk);
                    if seen.insert(b.clone()) {
                        queue.push_back(b);
                    }
                }
            }
        }
        members.push(member);
    }
    members.sort_by(|p, q| p.geodesic.cmp(&q.geodesic));
    Ok(SearchOutcome::Complete { members, sink: None })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttractingTree {
    pub edges: BTreeSet<Edge>,
    pub vertices: BTreeSet<Vertex>,
    pub parameter_t: f64,
    /// `J(γ; t)` as the edge range `lo..=hi` for each member of `A_φ(2+t)`.
    pub geodesic_intervals: Vec<(Geodesic, i64, i64)>,
}

impl AttractingTree {
    pub fn subtree(&self) -> Subtree {
        Subtree::new(self.vertices.iter().cloned()).expect("attracting tree is connected")
    }
}

/// `T_φ(t)`: the union of the windows `J(γ; t)` over `A_φ(2+t)`, or the sink
/// when that set is empty.
pub fn attracting_tree(a: &HurwitzPoint, t: f64, cfg: &BowditchConfig) -> Result<AttractingTree, BowditchError> {
    if !(t > 0.0) {
        return Err(BowditchError::NonPositiveT(t));
    }
    let c = BowditchConfig { k: 2.0 + t, ..*cfg };
    match search_A_phi_K(a, &c)? {
        SearchOutcome::Complete { members, sink } => tree_from_members(a, t, &members, sink, cfg),
        other => Err(BowditchError::Incomplete(Box::new(other))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TreeCheck {
    Ok,
    Disconnected,
    /// A circular-set edge not decisively directed into the tree.
    NotAttracting(DirectedEdge),
    WindowFailed(Geodesic),
}

fn tree_from_members(
    a: &HurwitzPoint,
    t: f64,
    members: &[Member],
    sink: Option<Vertex>,
    cfg: &BowditchConfig,
) -> Result<AttractingTree, BowditchError> {
    let mut tree = AttractingTree {
        edges: BTreeSet::new(),
        vertices: BTreeSet::new(),
        parameter_t: t,
        geodesic_intervals: Vec::new(),
    };
    if members.is_empty() {
        tree.vertices.insert(sink.unwrap_or_default());
        return Ok(tree);
    }
    for mem in members {
        let g = &mem.geodesic;
        let x = a.phi_vertex(g.root_vertex())?;
        let r = radius_from_coords(&x, g, a.mu(), Radius::Enlarged { t }, &cfg.tol);
        let win = scan_window(g, &x, r, cfg.window_budget).map_err(|_| {
            BowditchError::Incomplete(Box::new(SearchOutcome::BudgetExceeded {
                explored: 0,
                reason: format!("window of {g}"),
            }))
        })?;
        for m in win.lo..=win.hi {
            let v = g.vertex(m);
            let e = Edge::new(&v, g.edge_color(m));
            tree.vertices.insert(e.near.clone());
            tree.vertices.insert(e.far());
            tree.edges.insert(e);
        }
        tree.geodesic_intervals.push((g.clone(), win.lo, win.hi));
    }
    Ok(tree)
}

/// Connectedness plus inward direction on the circular set.
pub fn check_attracting(a: &HurwitzPoint, tree: &AttractingTree, tol: &Tolerances) -> Result<TreeCheck, BowditchError> {
    let Ok(sub) = Subtree::new(tree.vertices.iter().cloned()) else {
        return Ok(TreeCheck::Disconnected);
    };
    if sub.edges().len() != tree.edges.len() {
        return Ok(TreeCheck::Disconnected);
    }
    for e in circular_set(a.arity(), &sub)? {
        let d = direct_edge(a, &e.tail, e.color, tol)?;
        if !d.decisive || d.edge != e {
            return Ok(TreeCheck::NotAttracting(e));
        }
    }
    Ok(TreeCheck::Ok)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    InDomain,
    NotInDomain,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Witness {
    /// A geodesic with `φ ∈ [-2, 2]`.
    Segment(Member),
    /// A geodesic forcing `A_φ(K)` to be infinite.
    Infinite(Member),
    Budget { explored: usize, reason: String },
    /// The attracting-tree self-check failed.
    Check(TreeCheck),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub status: Status,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "aphiK")]
    pub a_phi_k: Vec<Member>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree: Option<AttractingTree>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Decides `a ∈ D` with threshold `cfg.k`.
///
/// `InDomain` comes with the complete `A_φ(K)` and the attracting tree
/// `T_φ(K - 2)`, which has been checked to be connected with every boundary
/// edge pointing inwards.
pub fn is_in_domain(a: &HurwitzPoint, cfg: &BowditchConfig) -> Result<MembershipVerdict, BowditchError> {
    let verdict = |status, a_phi_k, tree, witness| MembershipVerdict { status, k: cfg.k, a_phi_k, tree, witness };
    match search_A_phi_K(a, cfg)? {
        SearchOutcome::Complete { members, sink } => {
            let tree = match tree_from_members(a, cfg.k - 2.0, &members, sink, cfg) {
                Ok(t) => t,
                Err(BowditchError::Incomplete(o)) => {
                    let reason = match *o {
                        SearchOutcome::BudgetExceeded { reason, .. } => reason,
                        _ => "window".into(),
                    };
                    return Ok(verdict(Status::Undetermined, members, None, Some(Witness::Budget { explored: 0, reason })));
                }
                Err(e) => return Err(e),
            };
            match check_attracting(a, &tree, &cfg.tol)? {
                TreeCheck::Ok => Ok(verdict(Status::InDomain, members, Some(tree), None)),
                bad => Ok(verdict(Status::Undetermined, members, Some(tree), Some(Witness::Check(bad)))),
            }
        }
        SearchOutcome::Infinite { witness, reason } => {
            let w = match reason {
                InfiniteReason::OnSegment => Witness::Segment(witness),
                InfiniteReason::SigmaEqualsMu => Witness::Infinite(witness),
            };
            Ok(verdict(Status::NotInDomain, Vec::new(), None, Some(w)))
        }
        SearchOutcome::BudgetExceeded { explored, reason } => {
            Ok(verdict(Status::Undetermined, Vec::new(), None, Some(Witness::Budget { explored, reason })))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(x: &[f64]) -> HurwitzPoint {
        HurwitzPoint::real(x).unwrap()
    }

    #[test]
    fn root_edges_of_markoff_point_point_inwards() {
        let a = real(&[3.0, 3.0, 3.0]);
        let tol = Tolerances::default();
        for c in 1..=3 {
            let d = direct_edge(&a, &Vertex::root(), c, &tol).unwrap();
            assert!(d.decisive);
            assert_eq!(d.edge.head(), Vertex::root());
        }
        assert_eq!(vertex_type(&a, &Vertex::root(), &tol).unwrap(), VertexType::Sink);
    }

    #[test]
    fn ties_break_towards_smaller_word() {
        // x_1' = 1·1 - 0.5 has the same modulus as x_1
        let a = real(&[0.5, 1.0, 1.0]);
        let d = direct_edge(&a, &Vertex::root(), 1, &Tolerances::default()).unwrap();
        assert!(!d.decisive);
        assert_eq!(d.edge.head(), Vertex::root());
    }

    #[test]
    fn h_mu_of_root_geodesic() {
        let a = real(&[3.0, 3.0, 3.0]);
        let g = Geodesic::through(3, &Vertex::root(), 1, 2).unwrap();
        let h = h_mu_bounds(&a, &g, Radius::Base, &Tolerances::default()).unwrap();
        let l = (3.0 + 5f64.sqrt()) / 2.0;
        let expected = (9.0f64 / 5.0).sqrt() * 2.0 * l * l / (l - 1.0);
        assert!((h - expected).abs() < 1e-12);
        let j = j_interval(&a, &g, Radius::Base, &BowditchConfig::default()).unwrap();
        // y = …, 15, 6, 3, 3, 6, 15, … for m = -3..=2
        assert_eq!(j, JInterval::Edges { lo: -2, hi: 1 });
    }

    #[test]
    fn segment_geodesic_has_infinite_radius() {
        let a = real(&[3.0, 3.0, 1.5]);
        let g = Geodesic::through(3, &Vertex::root(), 1, 2).unwrap();
        assert_eq!(
            j_interval(&a, &g, Radius::Base, &BowditchConfig::default()).unwrap(),
            JInterval::WholeGeodesic
        );
    }

    #[test]
    fn markoff_point_is_in_domain_with_empty_set() {
        let v = is_in_domain(&real(&[3.0, 3.0, 3.0]), &BowditchConfig::default()).unwrap();
        assert_eq!(v.status, Status::InDomain);
        assert!(v.a_phi_k.is_empty());
        let json = serde_json::to_string(&v).unwrap();
        assert!(json.starts_with(r#"{"status":"InDomain","K":2.5,"aphiK":[],"tree":{"edges":[]"#), "{json}");
    }

    #[test]
    fn small_real_diagonal_is_not_in_domain() {
        let v = is_in_domain(&real(&[1.2, 1.2, 1.2]), &BowditchConfig::default()).unwrap();
        assert_eq!(v.status, Status::NotInDomain);
        match v.witness {
            Some(Witness::Segment(m)) => assert_eq!(m.geodesic.depth(), 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nonempty_finite_set() {
        let a = real(&[3.0, 3.0, 2.2]);
        let v = is_in_domain(&a, &BowditchConfig::default()).unwrap();
        assert_eq!(v.status, Status::InDomain, "{v:?}");
        assert!(!v.a_phi_k.is_empty());
        assert!(v.a_phi_k.iter().all(|m| m.phi.norm() <= 2.5));
        let tree = v.tree.unwrap();
        assert!(!tree.edges.is_empty());
    }

    #[test]
    fn k_at_most_two_rejected() {
        let a = real(&[3.0, 3.0, 3.0]);
        assert_eq!(search_A_phi_K(&a, &BowditchConfig::with_k(2.0)), Err(BowditchError::SmallK(2.0)));
    }

    #[test]
    fn dihedral_flagged() {
        let a = real(&[0.0, 0.0, 1.0]);
        assert_eq!(fork_check(&a, &Vertex::root(), &Tolerances::default()), Err(BowditchError::Dihedral));
        let v = is_in_domain(&a, &BowditchConfig::default()).unwrap();
        assert_eq!(v.status, Status::NotInDomain);
    }
}
