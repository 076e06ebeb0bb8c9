//! Edge weights and the McShane-type identity.
//!
//! For an edge of colour `i` oriented towards a vertex with coordinates `x`,
//! `ψ = x_i / ∏_{m≠i} x_m`. Opposite orientations sum to one, and around any
//! finite subtree `T`
//!
//! ```text
//! Σ_{e ∈ C(T)} ψ(e) − Σ_{v ∈ T} μ/φ(v) = 1.
//! ```
//!
//! Growing `T` outwards from an attracting tree turns this into
//! `Σ_γ h(φ(γ)) − Σ_v μ/φ(v) = 1` with `h(z) = 1 − sqrt(1 − 4/z²)`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bowditch::{is_in_domain, BowditchConfig, BowditchError, Status};
use crate::cplx::{in_segment, pair};
use crate::hurwitz::{flip_checked, GeodesicWeights, HurwitzError, HurwitzPoint};
use crate::sum::{ComplexSum, NeumaierSum};
use crate::tree::{
    canonical_geodesic, circular_set, pair_index, pairs, rooted_pairs, Color, DirectedEdge, Geodesic, Subtree,
    TreeError, Vertex,
};
use crate::C64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IdentityError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Hurwitz(#[from] HurwitzError),
    #[error(transparent)]
    Bowditch(#[from] BowditchError),
    #[error("h is undefined on [-2, 2], got {0}")]
    OnSegment(C64),
    #[error("zero product of coordinates at {0}")]
    ZeroProduct(Vertex),
    #[error("σ = μ ≠ 0 on {0}: pole of the weighted term")]
    Pole(Geodesic),
    #[error("tree-centred truncation needs a point of the domain, got {0:?}")]
    NotInDomain(Status),
    #[error("weights must be {expected} values summing to 1")]
    BadWeights { expected: usize },
}

const SEGMENT_TOL: f64 = 1e-9;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// `h(z) = 1 − sqrt(1 − 4/z²)`, principal root.
pub fn h(z: C64) -> Result<C64, IdentityError> {
    if in_segment(z, SEGMENT_TOL) {
        return Err(IdentityError::OnSegment(z));
    }
    Ok(h_unchecked(z))
}

fn h_unchecked(z: C64) -> C64 {
    if !z.norm().is_finite() {
        return C64::new(0.0, 0.0);
    }
    let w = 4.0 / (z * z);
    let s = (one() - w).sqrt();
    // 1 - s = w / (1 + s), and Re s ≥ 0 keeps the denominator away from 0
    w / (one() + s)
}

/// `𝔥_μ(γ, q) = 1 − (1 + qμ/(σ−μ)) sqrt(1 − 4/φ²)`.
pub fn frak_h(w: &GeodesicWeights, mu: C64, q: C64, g: &Geodesic) -> Result<C64, IdentityError> {
    if in_segment(w.phi, SEGMENT_TOL) {
        return Err(IdentityError::OnSegment(w.phi));
    }
    frak_h_unchecked(w.phi, w.sigma, mu, q).ok_or_else(|| IdentityError::Pole(g.clone()))
}

fn frak_h_unchecked(phi: C64, sigma: C64, mu: C64, q: C64) -> Option<C64> {
    if !phi.norm().is_finite() {
        return Some(C64::new(0.0, 0.0));
    }
    let hz = h_unchecked(phi);
    if mu.norm() == 0.0 {
        return Some(hz);
    }
    let d = sigma - mu;
    if d.norm() <= 1e-9 * (1.0 + mu.norm()) {
        return None;
    }
    let s = (one() - 4.0 / (phi * phi)).sqrt();
    Some(hz - q * mu / d * s)
}

/// `∏ x` is needed nonzero wherever `ψ` or `μ/φ(v)` is evaluated.
fn product_except(x: &[C64], k: usize) -> C64 {
    x.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, z)| z).product()
}

/// `ψ` of the colour-`c` edge oriented towards the vertex with coordinates `x`.
pub fn psi_quotient(x: &[C64], c: Color) -> C64 {
    let k = c as usize - 1;
    x[k] / product_except(x, k)
}

/// `½(1 − sqrt(1 − 4(Σ_{m≠i} x_m² − μ)/∏_{m≠i} x_m²))`, valid for the
/// orientation with `|x_i'| ≥ |x_i|` at the head.
pub fn psi_closed_form(x: &[C64], c: Color, mu: C64) -> C64 {
    let k = c as usize - 1;
    let p = product_except(x, k);
    let s2: C64 = x.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, z)| z * z).sum();
    let w = 4.0 * (s2 - mu) / (p * p);
    let s = (one() - w).sqrt();
    w / (2.0 * (one() + s))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeWeight {
    pub edge: DirectedEdge,
    /// The orientation is the one `φ` induces.
    pub phi_directed: bool,
    #[serde(with = "pair")]
    pub quotient: C64,
    #[serde(with = "pair")]
    pub closed_form: C64,
}

/// `ψ(e)` by the quotient and by the closed form.
pub fn psi_directed(a: &HurwitzPoint, e: &DirectedEdge) -> Result<EdgeWeight, IdentityError> {
    let head = e.head();
    let x = a.phi_vertex(&head)?;
    let k = e.color as usize - 1;
    if product_except(&x, k).norm() == 0.0 {
        return Err(IdentityError::ZeroProduct(head));
    }
    let mut y = x.clone();
    crate::hurwitz::flip(&mut y, e.color);
    let phi_directed = y[k].norm() >= x[k].norm();
    let quotient = psi_quotient(&x, e.color);
    let closed_form = if phi_directed {
        psi_closed_form(&x, e.color, a.mu())
    } else {
        one() - psi_closed_form(&y, e.color, a.mu())
    };
    Ok(EdgeWeight { edge: e.clone(), phi_directed, quotient, closed_form })
}

/// One truncation level of a series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// Truncation depth, or `None` for a finite-tree evaluation.
    pub depth: Option<usize>,
    pub tree_size: usize,
    #[serde(with = "pair")]
    pub partial_sum: C64,
    #[serde(with = "pair")]
    pub target: C64,
    /// `|partial_sum − target|`.
    pub residual: f64,
    pub term_count: usize,
    pub absolute_term_sum: f64,
    /// Absolute sum of the terms first included at this depth.
    pub shell_abs_sum: f64,
    /// Branches cut because the coordinates left the representable range.
    pub pruned: usize,
}

/// `Σ_{C(T)} ψ − Σ_{V(T)} μ/φ(v)`, which should equal 1.
pub fn finite_tree_identity(a: &HurwitzPoint, t: &Subtree) -> Result<IdentityReport, IdentityError> {
    let mut total = ComplexSum::new();
    let mut abs = NeumaierSum::new();
    let mut count = 0;
    for e in circular_set(a.arity(), t)? {
        let x = a.phi_vertex(&e.head())?;
        let k = e.color as usize - 1;
        if product_except(&x, k).norm() == 0.0 {
            return Err(IdentityError::ZeroProduct(e.head()));
        }
        let p = psi_quotient(&x, e.color);
        total.add(p);
        abs.add(p.norm());
        count += 1;
    }
    for v in t.vertices() {
        let phi: C64 = a.phi_vertex(v)?.iter().product();
        if phi.norm() == 0.0 {
            return Err(IdentityError::ZeroProduct(v.clone()));
        }
        let term = a.mu() / phi;
        total.add(-term);
        abs.add(term.norm());
        count += 1;
    }
    let s = total.value();
    Ok(IdentityReport {
        depth: None,
        tree_size: t.len(),
        partial_sum: s,
        target: one(),
        residual: (s - one()).norm(),
        term_count: count,
        absolute_term_sum: abs.value(),
        shell_abs_sum: abs.value(),
        pruned: 0,
    })
}

/// Per-colour-pair weights `q_ij` with `Σ q_ij = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PairWeights {
    /// `q_ij = 2/(n(n−1))`.
    Uniform,
    /// Indexed by [`pair_index`].
    Custom(Vec<[f64; 2]>),
}

impl PairWeights {
    fn resolve(&self, n: usize) -> Result<Vec<C64>, IdentityError> {
        let np = n * (n - 1) / 2;
        match self {
            PairWeights::Uniform => Ok(vec![C64::new(1.0 / np as f64, 0.0); np]),
            PairWeights::Custom(q) => {
                let q: Vec<C64> = q.iter().map(|p| C64::new(p[0], p[1])).collect();
                if q.len() != np || (q.iter().sum::<C64>() - one()).norm() > 1e-12 {
                    return Err(IdentityError::BadWeights { expected: np });
                }
                Ok(q)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum IdentityVariant {
    /// `Σ h(φ(γ)) − Σ μ/φ(v) = 1`.
    McShaneH,
    /// `Σ 𝔥_μ(γ, q_γ) = 1`.
    FrakH(PairWeights),
    /// `ψ(e) = Σ_{A⁰(e)} ½h + Σ_{A⁻(e)} h − Σ_{v behind e} μ/φ(v)`, summing
    /// over the side of the tail of `e`.
    RelativeEdge(DirectedEdge),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TruncationCenter {
    /// Distance from the attracting tree.
    AttractingTree,
    /// `d(γ)`, distance from `v0`.
    Root,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesOptions {
    pub center: TruncationCenter,
    pub bowditch: BowditchConfig,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions { center: TruncationCenter::AttractingTree, bowditch: BowditchConfig::default() }
    }
}

/// Vertices reached while walking away from a finite subtree.
struct OutwardVisit<'a> {
    vertex: &'a Vertex,
    x: &'a [C64],
    /// Colour of the edge back towards the subtree; `None` inside it.
    entry: Option<Color>,
    dist: usize,
}

/// Visits the subtree, then every vertex within `max_dist` of it, depth
/// first with colours ascending. `blocked` removes the far side of one edge.
fn walk_outward(
    a: &HurwitzPoint,
    t: &Subtree,
    max_dist: usize,
    blocked: Option<&DirectedEdge>,
    mut visit: impl FnMut(OutwardVisit<'_>),
) -> Result<usize, IdentityError> {
    let n = a.arity();
    let mut pruned = 0;
    let mut starts = Vec::new();
    for v in t.vertices() {
        let x = a.phi_vertex(v)?;
        visit(OutwardVisit { vertex: v, x: &x, entry: None, dist: 0 });
        for c in 1..=n as Color {
            let w = v.neighbor(c);
            if t.contains(&w) || blocked.is_some_and(|b| b.tail == *v && b.color == c) {
                continue;
            }
            starts.push((w, x.clone(), c));
        }
    }
    if max_dist == 0 {
        return Ok(0);
    }
    for (w, mut x, c) in starts {
        if !flip_checked(&mut x, c) {
            pruned += 1;
            continue;
        }
        let mut stack = vec![(w, x, c, 1usize)];
        while let Some((v, x, entry, dist)) = stack.pop() {
            visit(OutwardVisit { vertex: &v, x: &x, entry: Some(entry), dist });
            if dist == max_dist {
                continue;
            }
            for c in (1..=n as Color).rev() {
                if c == entry {
                    continue;
                }
                let mut y = x.clone();
                if !flip_checked(&mut y, c) {
                    pruned += 1;
                    continue;
                }
                stack.push((v.neighbor(c), y, c, dist + 1));
            }
        }
    }
    Ok(pruned)
}

fn phi_pair(x: &[C64], i: Color, j: Color) -> C64 {
    x.iter()
        .enumerate()
        .filter(|(k, _)| *k + 1 != i as usize && *k + 1 != j as usize)
        .map(|(_, z)| z)
        .product()
}

fn sigma_pair(x: &[C64], i: Color, j: Color) -> C64 {
    x.iter()
        .enumerate()
        .filter(|(k, _)| *k + 1 != i as usize && *k + 1 != j as usize)
        .map(|(_, z)| z * z)
        .sum()
}

fn truncation_tree(a: &HurwitzPoint, opts: &SeriesOptions) -> Result<Subtree, IdentityError> {
    match opts.center {
        TruncationCenter::Root => Ok(Subtree::single(Vertex::root())),
        TruncationCenter::AttractingTree => {
            let v = is_in_domain(a, &opts.bowditch)?;
            match (v.status, v.tree) {
                (Status::InDomain, Some(t)) => Ok(t.subtree()),
                (s, _) => Err(IdentityError::NotInDomain(s)),
            }
        }
    }
}

/// Partial sums of one of the identities for truncation depths `0..=max_depth`.
///
/// At depth `m` the geodesics within distance `m` of the centre are summed,
/// together with the vertex terms within distance `m + 1`.
pub fn identity_partial_sums(
    a: &HurwitzPoint,
    max_depth: usize,
    variant: &IdentityVariant,
    opts: &SeriesOptions,
) -> Result<Vec<IdentityReport>, IdentityError> {
    let n = a.arity();
    let mu = a.mu();
    let shells = max_depth + 2;
    let mut geo = vec![ComplexSum::new(); shells];
    let mut vert = vec![ComplexSum::new(); shells];
    let mut geo_abs = vec![NeumaierSum::new(); shells];
    let mut vert_abs = vec![NeumaierSum::new(); shells];
    let mut geo_count = vec![0usize; shells];
    let mut vert_count = vec![0usize; shells];
    let mut err = None;

    let (t, blocked, target, q) = match variant {
        IdentityVariant::RelativeEdge(e) => {
            e.tail.validate(n)?;
            let w = psi_directed(a, e)?;
            (Subtree::single(e.tail.clone()), Some(e.clone()), w.quotient, None)
        }
        IdentityVariant::FrakH(q) => (truncation_tree(a, opts)?, None, one(), Some(q.resolve(n)?)),
        IdentityVariant::McShaneH => (truncation_tree(a, opts)?, None, one(), None),
    };
    let mut seen_inside: HashSet<Geodesic> = HashSet::new();

    let mut term = |x: &[C64], v: &Vertex, i: Color, j: Color, weight: f64| -> Option<C64> {
        let phi = phi_pair(x, i, j);
        if in_segment(phi, SEGMENT_TOL) {
            err.get_or_insert(IdentityError::OnSegment(phi));
            return None;
        }
        let val = match &q {
            None => h_unchecked(phi),
            Some(q) => match frak_h_unchecked(phi, sigma_pair(x, i, j), mu, q[pair_index(n, i, j)]) {
                Some(z) => z,
                None => {
                    err.get_or_insert(IdentityError::Pole(canonical_geodesic(v, i, j)));
                    return None;
                }
            },
        };
        Some(val * weight)
    };
    let with_vertex_terms = q.is_none();

    let pruned = walk_outward(a, &t, max_depth + 1, blocked.as_ref(), |o| {
        let d = o.dist;
        if with_vertex_terms && mu.norm() != 0.0 {
            let phi: C64 = o.x.iter().product();
            let z = mu / phi;
            vert[d].add(z);
            vert_abs[d].add(z.norm());
            vert_count[d] += 1;
        }
        if d > max_depth {
            return;
        }
        let mut add = |val: Option<C64>| {
            if let Some(z) = val {
                geo[d].add(z);
                geo_abs[d].add(z.norm());
                geo_count[d] += 1;
            }
        };
        match o.entry {
            Some(c) => {
                for (i, j) in pairs(n).filter(|&(i, j)| i != c && j != c) {
                    add(term(o.x, o.vertex, i, j, 1.0));
                }
            }
            None => {
                for (i, j) in pairs(n) {
                    let weight = match &blocked {
                        Some(b) if b.color == i || b.color == j => 0.5,
                        _ => 1.0,
                    };
                    if blocked.is_none() && !seen_inside.insert(canonical_geodesic(o.vertex, i, j)) {
                        continue;
                    }
                    add(term(o.x, o.vertex, i, j, weight));
                }
            }
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }

    let mut out = Vec::with_capacity(max_depth + 1);
    let mut total = ComplexSum::new();
    let mut abs = NeumaierSum::new();
    let mut count = 0;
    // vertex terms run one shell ahead of the geodesic terms
    total.add(-vert[0].value());
    abs.add(vert_abs[0].value());
    count += vert_count[0];
    for d in 0..=max_depth {
        total.merge(&geo[d]);
        abs.add(geo_abs[d].value());
        count += geo_count[d];
        total.add(-vert[d + 1].value());
        abs.add(vert_abs[d + 1].value());
        count += vert_count[d + 1];
        let s = total.value();
        out.push(IdentityReport {
            depth: Some(d),
            tree_size: t.len(),
            partial_sum: s,
            target,
            residual: (s - target).norm(),
            term_count: count,
            absolute_term_sum: abs.value(),
            shell_abs_sum: geo_abs[d].value() + vert_abs[d + 1].value(),
            pruned,
        });
    }
    Ok(out)
}

/// Absolute sums `Σ |φ|^{-t}` over geodesics, vertices and the regions
/// `X_i = [v; all colours but i]`, by truncation depth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceShell {
    pub depth: usize,
    pub geodesics: f64,
    pub vertices: f64,
    pub regions: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCertificate {
    pub exponent: f64,
    /// Per-depth contributions.
    pub shells: Vec<ConvergenceShell>,
    /// Cumulative sums at the deepest level.
    pub totals: ConvergenceShell,
    /// Largest ratio of consecutive shell totals over the second half of the
    /// shells; below 1 indicates geometric decay.
    pub tail_ratio: f64,
    pub pruned: usize,
}

pub fn convergence_certificate(
    a: &HurwitzPoint,
    exponent: f64,
    max_depth: usize,
    opts: &SeriesOptions,
) -> Result<ConvergenceCertificate, IdentityError> {
    let n = a.arity();
    let t = truncation_tree(a, opts)?;
    let mut shells: Vec<[NeumaierSum; 3]> = vec![[NeumaierSum::new(); 3]; max_depth + 1];
    let mut seen_geo: HashSet<Geodesic> = HashSet::new();
    let mut seen_region: HashSet<(Color, Vertex)> = HashSet::new();
    let pow = |z: C64| z.norm().powf(-exponent);
    let pruned = walk_outward(a, &t, max_depth, None, |o| {
        let s = &mut shells[o.dist];
        s[1].add(pow(o.x.iter().product()));
        match o.entry {
            Some(c) => {
                for (i, j) in pairs(n).filter(|&(i, j)| i != c && j != c) {
                    s[0].add(pow(phi_pair(o.x, i, j)));
                }
                s[2].add(pow(o.x[c as usize - 1]));
            }
            None => {
                for (i, j) in pairs(n) {
                    if seen_geo.insert(canonical_geodesic(o.vertex, i, j)) {
                        s[0].add(pow(phi_pair(o.x, i, j)));
                    }
                }
                for i in 1..=n as Color {
                    let mut w = o.vertex.letters().to_vec();
                    while matches!(w.last(), Some(&c) if c != i) {
                        w.pop();
                    }
                    if seen_region.insert((i, Vertex::new(n, w).expect("prefix of a reduced word"))) {
                        s[2].add(pow(o.x[i as usize - 1]));
                    }
                }
            }
        }
    })?;
    let shells: Vec<ConvergenceShell> = shells
        .iter()
        .enumerate()
        .map(|(d, s)| ConvergenceShell { depth: d, geodesics: s[0].value(), vertices: s[1].value(), regions: s[2].value() })
        .collect();
    let mut tot = [NeumaierSum::new(); 3];
    for s in &shells {
        tot[0].add(s.geodesics);
        tot[1].add(s.vertices);
        tot[2].add(s.regions);
    }
    let shell_total = |s: &ConvergenceShell| s.geodesics + s.vertices + s.regions;
    let tail_ratio = shells
        .windows(2)
        .skip(max_depth / 2)
        .map(|w| shell_total(&w[1]) / shell_total(&w[0]))
        .fold(0.0, f64::max);
    Ok(ConvergenceCertificate {
        exponent,
        totals: ConvergenceShell { depth: max_depth, geodesics: tot[0].value(), vertices: tot[1].value(), regions: tot[2].value() },
        shells,
        tail_ratio,
        pruned,
    })
}

/// Result of comparing `log⁺|φ(γ)|` with `F(γ)` over `d(γ) ≤ depth`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FibonacciGrowthReport {
    pub depth: usize,
    pub scanned: usize,
    /// `log⁺|φ(γ)| ≤ c₂ F(γ) − D` with `D = log⁺|μ| + log⁺(2n)`.
    pub c2: f64,
    pub additive: f64,
    /// Steps where `log⁺|φ(α)| ≤ log⁺|φ(β)| + log⁺|φ(γ)| + D` fails for the
    /// two geodesics `β, γ` defining `F(α)`.
    pub upper_violations: Vec<Geodesic>,
    /// `{γ : |φ(γ)| ≤ K}` within the scan.
    pub exceptional_threshold: f64,
    pub exceptional: Vec<Geodesic>,
    /// `min log⁺|φ(γ)| / F(γ)` off the exceptional set.
    pub c1: f64,
    /// Exceptional geodesics in the outer half of the scan: for points of the
    /// domain the exceptional set is finite and stays near the root.
    pub lower_violations: Vec<Geodesic>,
}

fn log_plus(r: f64) -> f64 {
    r.ln().max(0.0)
}

pub fn fibonacci_growth_check(
    a: &HurwitzPoint,
    depth: usize,
    exceptional_threshold: f64,
) -> Result<FibonacciGrowthReport, IdentityError> {
    let n = a.arity();
    let np = n * (n - 1) / 2;
    let additive = log_plus(a.mu().norm()) + log_plus(2.0 * n as f64);
    let log_phi = |x: &[C64], i: Color, j: Color| -> f64 {
        x.iter()
            .enumerate()
            .filter(|(k, _)| *k + 1 != i as usize && *k + 1 != j as usize)
            .map(|(_, z)| z.norm().ln())
            .sum::<f64>()
    };
    let root_max = pairs(n).map(|(i, j)| log_plus(log_phi(a.coords(), i, j).exp())).fold(0.0, f64::max);
    let c2 = root_max + additive;
    let mut rep = FibonacciGrowthReport {
        depth,
        scanned: 0,
        c2,
        additive,
        upper_violations: Vec::new(),
        exceptional_threshold,
        exceptional: Vec::new(),
        c1: f64::INFINITY,
        lower_violations: Vec::new(),
    };
    let ln_thr = exceptional_threshold.ln();
    let mut stack = vec![(Vertex::root(), a.coords().to_vec(), vec![1u128; np])];
    while let Some((v, x, fv)) = stack.pop() {
        let last = v.last();
        for (i, j) in rooted_pairs(n, &v) {
            rep.scanned += 1;
            let lp = log_phi(&x, i, j);
            let f = lp.max(0.0);
            let fib = fv[pair_index(n, i, j)] as f64;
            let g = canonical_geodesic(&v, i, j);
            if let Some(k) = last {
                let fb = log_phi(&x, i, k).max(0.0);
                let fc = log_phi(&x, j, k).max(0.0);
                if f > fb + fc + additive + 1e-9 * (1.0 + f) || f > c2 * fib - additive + 1e-9 * (1.0 + f) {
                    rep.upper_violations.push(g.clone());
                }
            }
            if lp <= ln_thr {
                if 2 * v.depth() > depth {
                    rep.lower_violations.push(g.clone());
                }
                rep.exceptional.push(g);
            } else {
                rep.c1 = rep.c1.min(f / fib);
            }
        }
        if v.depth() == depth {
            continue;
        }
        for c in (1..=n as Color).rev() {
            if last == Some(c) {
                continue;
            }
            let mut y = x.clone();
            if !flip_checked(&mut y, c) {
                return Err(HurwitzError::Overflow.into());
            }
            let mut next = fv.clone();
            for (i, j) in pairs(n).filter(|&(i, j)| i != c && j != c) {
                next[pair_index(n, i, j)] = fv[pair_index(n, i, c)] + fv[pair_index(n, j, c)];
            }
            stack.push((v.child(c), y, next));
        }
    }
    rep.exceptional.sort();
    rep.lower_violations.sort();
    rep.upper_violations.sort();
    Ok(rep)
}

/// `|ψ(e) − ½h(φ(γ))| · |x_j|²` on the circular set of each distance shell
/// around the attracting tree, next to the bound
/// `2|σ(γ) − μ| / (|φ(γ)|² Re sqrt(1 − 4/φ(γ)²))`.
///
/// Here `e` has colour `i` and points at a vertex `v` outside the tree,
/// `j` is the colour of the edge at `v` leading back to the tree and
/// `γ = [v; {i, j}]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeEstimateShell {
    pub depth: usize,
    pub edges: usize,
    /// `max |ψ − ½h| |x_j|²`, with the difference taken in closed form.
    pub scaled_error: f64,
    /// Edges where the scaled error exceeds the per-geodesic bound.
    pub bound_failures: usize,
    /// Edges where `ψ` by quotient is accurate enough to resolve the
    /// difference directly.
    pub direct_checked: usize,
    pub direct_failures: usize,
}

pub fn edge_estimate_shells(a: &HurwitzPoint, max_depth: usize, opts: &SeriesOptions) -> Result<Vec<EdgeEstimateShell>, IdentityError> {
    let n = a.arity();
    let mu = a.mu();
    let t = truncation_tree(a, opts)?;
    let mut shells: Vec<EdgeEstimateShell> = (0..=max_depth)
        .map(|d| EdgeEstimateShell {
            depth: d,
            edges: 0,
            scaled_error: 0.0,
            bound_failures: 0,
            direct_checked: 0,
            direct_failures: 0,
        })
        .collect();
    walk_outward(a, &t, max_depth, None, |o| {
        let Some(p) = o.entry else { return };
        let s = &mut shells[o.dist];
        for c in (1..=n as Color).filter(|&c| c != p) {
            let phi = phi_pair(o.x, c, p);
            let sigma = sigma_pair(o.x, c, p);
            let xj = o.x[p as usize - 1];
            let u = one() - 4.0 / (phi * phi);
            let delta = 4.0 * (sigma - mu) / (xj * xj * phi * phi);
            let (ru, rd) = (u.sqrt(), (u - delta).sqrt());
            // ψ − ½h = ½(√u − √(u−δ)) = ½δ/(√u + √(u−δ))
            let err = (0.5 * delta / (ru + rd)).norm() * xj.norm_sqr();
            let bound = 2.0 * (sigma - mu).norm() / (phi.norm_sqr() * ru.re);
            s.edges += 1;
            s.scaled_error = s.scaled_error.max(err);
            if err > bound * (1.0 + 1e-9) {
                s.bound_failures += 1;
            }
            let psi = psi_quotient(o.x, c);
            let half_h = 0.5 * h_unchecked(phi);
            let noise = 8.0 * f64::EPSILON * (psi.norm() + half_h.norm()) * xj.norm_sqr();
            if noise < 1e-3 * bound {
                s.direct_checked += 1;
                if (psi - half_h).norm() * xj.norm_sqr() > bound * (1.0 + 1e-6) + noise {
                    s.direct_failures += 1;
                }
            }
        }
    })?;
    Ok(shells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::ball;

    #[test]
    fn h_values() {
        let z = h(C64::new(3.0, 0.0)).unwrap();
        assert!((z.re - (1.0 - 5f64.sqrt() / 3.0)).abs() < 1e-15);
        assert!(h(C64::new(1.0, 0.0)).is_err());
        assert!(h(C64::new(2.0, 0.0)).is_err());
        assert!(h(C64::new(1.0, 0.1)).is_ok());
    }

    #[test]
    fn psi_at_markoff_root() {
        let a = HurwitzPoint::real(&[3.0, 3.0, 3.0]).unwrap();
        for c in 1..=3 {
            let w = psi_directed(&a, &DirectedEdge::new(Vertex::root().child(c), c)).unwrap();
            assert!(w.phi_directed);
            assert!((w.quotient.re - 1.0 / 3.0).abs() < 1e-15);
            assert!((w.quotient - w.closed_form).norm() < 1e-12);
        }
        let back = psi_directed(&a, &DirectedEdge::new(Vertex::root(), 1)).unwrap();
        assert!(!back.phi_directed);
        assert!((back.quotient - back.closed_form).norm() < 1e-12);
    }

    #[test]
    fn opposite_orientations_sum_to_one() {
        let a = HurwitzPoint::new(vec![C64::new(2.0, 1.0), C64::new(-1.5, 0.3), C64::new(0.7, 2.2), C64::new(1.1, -0.4)])
            .unwrap();
        let e = DirectedEdge::new(Vertex::new(4, vec![2, 3]).unwrap(), 1);
        let s = psi_directed(&a, &e).unwrap().quotient + psi_directed(&a, &e.reversed()).unwrap().quotient;
        assert!((s - one()).norm() < 1e-12);
    }

    #[test]
    fn single_vertex_identity() {
        let a = HurwitzPoint::new(vec![C64::new(2.0, 1.0), C64::new(-1.5, 0.3), C64::new(0.7, 2.2)]).unwrap();
        let r = finite_tree_identity(&a, &Subtree::single(Vertex::root())).unwrap();
        assert!(r.residual < 1e-12, "{r:?}");
        let r = finite_tree_identity(&a, &ball(3, &Vertex::root(), 2).unwrap()).unwrap();
        assert!(r.residual < 1e-10, "{r:?}");
    }

    #[test]
    fn zero_product_rejected() {
        let a = HurwitzPoint::real(&[0.0, 1.0, 2.0]).unwrap();
        let e = DirectedEdge::new(Vertex::root().child(2), 2);
        assert!(matches!(psi_directed(&a, &e), Err(IdentityError::ZeroProduct(_))));
    }

    #[test]
    fn markoff_series_converges() {
        let a = HurwitzPoint::real(&[3.0, 3.0, 3.0]).unwrap();
        let reps = identity_partial_sums(&a, 8, &IdentityVariant::McShaneH, &SeriesOptions::default()).unwrap();
        assert!((reps[0].partial_sum.re - 3.0 * (1.0 - 5f64.sqrt() / 3.0)).abs() < 1e-14);
        assert!(reps[8].residual < 1e-4, "{:?}", reps[8]);
    }

    #[test]
    fn pole_reported() {
        // σ([v0;{1,2}]) = 9 = μ when 1 + y² = 3y
        let y = (3.0 + 5f64.sqrt()) / 2.0;
        let a = HurwitzPoint::real(&[1.0, y, 3.0]).unwrap();
        let g = Geodesic::through(3, &Vertex::root(), 1, 2).unwrap();
        let w = a.phi_geodesic(&g).unwrap();
        assert!(matches!(frak_h(&w, a.mu(), C64::new(1.0 / 3.0, 0.0), &g), Err(IdentityError::Pole(_))));
    }
}
