//! Points on the Hurwitz variety `H(x) = μ` and their orbit under `Γ_n`.
//!
//! `Φ(v) = g⁻¹(a)` for the word `g` of `v`; walking from the root this is
//! the composition of the generator moves along the word.

use std::collections::{HashSet, VecDeque};
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cplx::{in_segment, pair, pairs};
use crate::tree::{check_arity, Color, Geodesic, TreeError, Vertex};
use crate::C64;

/// Magnitude beyond which orbit values are flagged rather than computed.
pub const OVERFLOW_LIMIT: f64 = 1e150;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HurwitzError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("point has {got} coordinates, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("values left the representable range")]
    Overflow,
}

/// `H(x) = Σ x_k² − ∏ x_k`.
pub fn hurwitz_h(x: &[C64]) -> C64 {
    x.iter().map(|z| z * z).sum::<C64>() - x.iter().product::<C64>()
}

/// The generator move `b_i`: `x_i ↦ ∏_{j≠i} x_j − x_i`.
pub fn flip(x: &mut [C64], i: Color) {
    let k = i as usize - 1;
    let p: C64 = x.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, z)| z).product();
    x[k] = p - x[k];
}

/// `b_i` guarded against overflow. Returns false, leaving `x` untouched, when
/// the new value would exceed [`OVERFLOW_LIMIT`].
pub fn flip_checked(x: &mut [C64], i: Color) -> bool {
    let k = i as usize - 1;
    let p: f64 = x.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, z)| z.norm_sqr()).product();
    let too_big = if p.is_finite() && p > 1e-290 {
        p > OVERFLOW_LIMIT * OVERFLOW_LIMIT
    } else {
        // under- or overflow in the plain product; redo it in log space
        let log_p: f64 = x.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, z)| z.norm().ln()).sum();
        log_p > OVERFLOW_LIMIT.ln()
    };
    if too_big {
        return false;
    }
    let mut y = x[k];
    std::mem::swap(&mut y, &mut x[k]);
    flip(x, i);
    if !(x[k].norm() <= OVERFLOW_LIMIT) {
        x[k] = y;
        return false;
    }
    true
}

/// Thresholds for the numeric case distinctions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Distance to `[-2, 2]` treated as lying on it.
    pub segment: f64,
    /// `σ = μ` when `|σ - μ| <= sigma_mu·(1 + |μ|)`.
    pub sigma_mu: f64,
    /// Moduli `r, s` count as equal when `|r - s| <= modulus·max(1, r, s)`.
    pub modulus: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { segment: 1e-9, sigma_mu: 1e-9, modulus: 1e-12 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HurwitzPoint {
    #[serde(rename = "a", with = "pairs")]
    coords: Vec<C64>,
    #[serde(with = "pair")]
    mu: C64,
}

impl HurwitzPoint {
    pub fn new(coords: Vec<C64>) -> Result<Self, HurwitzError> {
        check_arity(coords.len())?;
        if coords.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(HurwitzError::NonFinite);
        }
        let mu = hurwitz_h(&coords);
        Ok(HurwitzPoint { coords, mu })
    }

    pub fn real(coords: &[f64]) -> Result<Self, HurwitzError> {
        HurwitzPoint::new(coords.iter().map(|&r| C64::new(r, 0.0)).collect())
    }

    /// `(z, …, z)`.
    pub fn diagonal(n: usize, z: C64) -> Result<Self, HurwitzError> {
        HurwitzPoint::new(vec![z; n])
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    pub fn mu(&self) -> C64 {
        self.mu
    }

    /// `Φ(v)`.
    pub fn phi_vertex(&self, v: &Vertex) -> Result<Vec<C64>, HurwitzError> {
        v.validate(self.arity())?;
        let mut x = self.coords.clone();
        for &c in v.letters() {
            flip(&mut x, c);
        }
        Ok(x)
    }

    /// `φ(v) = ∏ Φ(v)_k`.
    pub fn phi_of_vertex(&self, v: &Vertex) -> Result<C64, HurwitzError> {
        Ok(self.phi_vertex(v)?.iter().product())
    }

    pub fn phi_geodesic(&self, g: &Geodesic) -> Result<GeodesicWeights, HurwitzError> {
        let x = self.phi_vertex(g.root_vertex())?;
        Ok(GeodesicWeights::from_coords(&x, g))
    }

    /// `φ` of the subtree spanned by the edges with colours in `colors`
    /// through `v`: the product of the coordinates of `Φ(v)` it keeps fixed.
    /// An empty colour set gives `φ(v)`, two colours a geodesic, and all but
    /// `i` the complementary region `X_i`.
    pub fn extended_phi(&self, v: &Vertex, colors: &[Color]) -> Result<C64, HurwitzError> {
        let x = self.phi_vertex(v)?;
        Ok(x.iter()
            .enumerate()
            .filter(|(k, _)| !colors.contains(&(*k as Color + 1)))
            .map(|(_, z)| z)
            .product())
    }

    /// `y_m` for `m` in `range`: the coordinate left unchanged by the edge
    /// joining `v_m` and `v_{m+1}`.
    pub fn geodesic_values(&self, g: &Geodesic, range: RangeInclusive<i64>) -> Result<Vec<C64>, HurwitzError> {
        let x0 = self.phi_vertex(g.root_vertex())?;
        let (lo, hi) = (*range.start(), *range.end());
        let mut out = Vec::with_capacity((hi - lo + 1).max(0) as usize);
        if hi < lo {
            return Ok(out);
        }
        let mut walker = GeodesicWalker::new(g, x0);
        let mut m = 0i64;
        let first = lo.min(0);
        while m > first {
            walker.step_back()?;
            m -= 1;
        }
        while m <= hi {
            if m >= lo {
                out.push(walker.value());
            }
            walker.step_forward()?;
            m += 1;
        }
        Ok(out)
    }

    /// Level-order listing of `Φ` on all vertices up to `depth`.
    pub fn orbit_enumerate(&self, depth: usize) -> Vec<OrbitRecord> {
        let mut out = Vec::new();
        self.orbit_for_each(depth, |r| out.push(r.clone()));
        out
    }

    pub fn orbit_for_each(&self, depth: usize, mut f: impl FnMut(&OrbitRecord)) {
        let n = self.arity();
        let mut queue = VecDeque::from([OrbitRecord { v: Vertex::root(), x: self.coords.clone(), overflowed: false }]);
        while let Some(rec) = queue.pop_front() {
            f(&rec);
            if rec.v.depth() == depth {
                continue;
            }
            for c in 1..=n as Color {
                if rec.v.last() == Some(c) {
                    continue;
                }
                let mut x = rec.x.clone();
                let mut overflowed = rec.overflowed;
                if !overflowed && !flip_checked(&mut x, c) {
                    overflowed = true;
                }
                if overflowed {
                    let k = c as usize - 1;
                    let arg: f64 = x.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, z)| z.arg()).sum();
                    x[k] = C64::from_polar(OVERFLOW_LIMIT, arg);
                }
                queue.push_back(OrbitRecord { v: rec.v.child(c), x, overflowed });
            }
        }
    }
}

/// One line of an orbit listing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub v: Vertex,
    #[serde(with = "pairs")]
    pub x: Vec<C64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub overflowed: bool,
}

/// Moves along a geodesic one vertex at a time, tracking `Φ` and `y_m`.
#[derive(Clone, Debug)]
pub struct GeodesicWalker {
    colors: (Color, Color),
    pos: i64,
    x: Vec<C64>,
}

impl GeodesicWalker {
    /// `x0 = Φ(v*)`.
    pub fn new(g: &Geodesic, x0: Vec<C64>) -> Self {
        GeodesicWalker { colors: g.colors(), pos: 0, x: x0 }
    }

    /// `x = Φ(v_m)`.
    pub fn at(g: &Geodesic, m: i64, x: Vec<C64>) -> Self {
        GeodesicWalker { colors: g.colors(), pos: m, x }
    }

    pub fn position(&self) -> i64 {
        self.pos
    }

    pub fn coords(&self) -> &[C64] {
        &self.x
    }

    fn color(&self, m: i64) -> Color {
        if m.rem_euclid(2) == 0 {
            self.colors.0
        } else {
            self.colors.1
        }
    }

    /// `y_pos`, the value across the edge from `v_pos` to `v_{pos+1}`.
    pub fn value(&self) -> C64 {
        let c = self.color(self.pos);
        let other = if c == self.colors.0 { self.colors.1 } else { self.colors.0 };
        self.x[other as usize - 1]
    }

    pub fn step_forward(&mut self) -> Result<(), HurwitzError> {
        let c = self.color(self.pos);
        if !flip_checked(&mut self.x, c) {
            return Err(HurwitzError::Overflow);
        }
        self.pos += 1;
        Ok(())
    }

    pub fn step_back(&mut self) -> Result<(), HurwitzError> {
        let c = self.color(self.pos - 1);
        if !flip_checked(&mut self.x, c) {
            return Err(HurwitzError::Overflow);
        }
        self.pos -= 1;
        Ok(())
    }
}

/// `φ(γ)`, `σ(γ)` and the root `λ` of `z² - φz + 1` with `|λ| ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicWeights {
    #[serde(with = "pair")]
    pub phi: C64,
    #[serde(with = "pair")]
    pub sigma: C64,
    #[serde(with = "pair")]
    pub lambda: C64,
}

impl GeodesicWeights {
    /// From the coordinates at any vertex of `g`.
    pub fn from_coords(x: &[C64], g: &Geodesic) -> Self {
        let (mut phi, mut sigma) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        for (k, z) in x.iter().enumerate() {
            if !g.contains_color(k as Color + 1) {
                phi *= z;
                sigma += z * z;
            }
        }
        GeodesicWeights { phi, sigma, lambda: lambda_of(phi) }
    }
}

/// Root of `z² - φz + 1` with `|z| ≥ 1`; on the unit circle the one with
/// non-negative imaginary part.
pub fn lambda_of(phi: C64) -> C64 {
    let d = (phi * phi - 4.0).sqrt();
    let (a, b) = ((phi + d) / 2.0, (phi - d) / 2.0);
    let (na, nb) = (a.norm(), b.norm());
    if (na - nb).abs() <= 1e-12 * na.max(1.0) {
        if a.im >= b.im {
            a
        } else {
            b
        }
    } else if na > nb {
        a
    } else {
        b
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GrowthClass {
    /// `σ = μ`: `y_m = y_0 λ^{±m}`.
    ScalarGeometric,
    /// `φ ∉ [-2, 2]`, `σ ≠ μ`: exponential growth towards both ends.
    ExponentialBothEnds,
    /// `φ ∈ (-2, 2)`: bounded values.
    Bounded,
    /// `φ = 2`: `y_m = y_0 + m (μ - σ)^{1/2}`.
    LinearPlus2,
    /// `φ = -2`: `y_m = (-1)^m (y_0 + m (μ - σ)^{1/2})`.
    LinearMinus2,
}

pub fn growth_class(w: &GeodesicWeights, mu: C64, tol: &Tolerances) -> GrowthClass {
    if (w.sigma - mu).norm() <= tol.sigma_mu * (1.0 + mu.norm()) {
        GrowthClass::ScalarGeometric
    } else if !in_segment(w.phi, tol.segment) {
        GrowthClass::ExponentialBothEnds
    } else if (w.phi - 2.0).norm() <= tol.segment {
        GrowthClass::LinearPlus2
    } else if (w.phi + 2.0).norm() <= tol.segment {
        GrowthClass::LinearMinus2
    } else {
        GrowthClass::Bounded
    }
}

/// Positive integer solutions of `H(x) = 0` with all entries `<= bound`,
/// each sorted ascending, listed once per permutation class.
///
/// Every solution descends, by repeatedly lowering its largest entry, to a
/// fundamental one where that move no longer decreases it. Writing the
/// fundamental solution as `x_1 ≤ … ≤ x_n`, one gets `x_1⋯x_{n-2} = q ≤ n`,
/// `q ≥ 3` and `(q - 2) x_{n-1}² ≤ Σ_{k≤n-2} x_k²`, so those are listed
/// directly and the rest is reached by ascending moves.
pub fn integer_solutions(n: usize, bound: i128) -> Result<Vec<Vec<i128>>, TreeError> {
    check_arity(n)?;
    let mut seen: HashSet<Vec<i128>> = HashSet::new();
    let mut queue: VecDeque<Vec<i128>> = VecDeque::new();
    for f in fundamental_solutions(n) {
        if *f.last().unwrap() <= bound && seen.insert(f.clone()) {
            queue.push_back(f);
        }
    }
    while let Some(x) = queue.pop_front() {
        for i in 0..n {
            let Some(p) = product_except(&x, i) else { continue };
            let y = p - x[i];
            if y < 1 || y > bound {
                continue;
            }
            let mut next = x.clone();
            next[i] = y;
            next.sort_unstable();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let mut out: Vec<Vec<i128>> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

fn product_except(x: &[i128], i: usize) -> Option<i128> {
    x.iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .try_fold(1i128, |acc, (_, &v)| acc.checked_mul(v))
}

fn fundamental_solutions(n: usize) -> Vec<Vec<i128>> {
    let mut heads = Vec::new();
    nondecreasing_with_product_at_most(n - 2, n as i128, 1, &mut Vec::new(), &mut heads);
    let mut out = Vec::new();
    for head in heads {
        let q: i128 = head.iter().product();
        if q < 3 {
            continue;
        }
        let s: i128 = head.iter().map(|v| v * v).sum();
        let lo = *head.last().unwrap();
        let mut y = lo;
        while (q - 2) * y * y <= s {
            // z² - q y z + (y² + s) = 0, smaller root.
            let disc = q * q * y * y - 4 * (y * y + s);
            if disc >= 0 {
                let r = disc.isqrt();
                if r * r == disc && (q * y - r) % 2 == 0 {
                    let z = (q * y - r) / 2;
                    if z >= y {
                        let mut t = head.clone();
                        t.extend([y, z]);
                        out.push(t);
                    }
                }
            }
            y += 1;
        }
    }
    out
}

fn nondecreasing_with_product_at_most(len: usize, cap: i128, min: i128, cur: &mut Vec<i128>, out: &mut Vec<Vec<i128>>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    let p: i128 = cur.iter().product();
    let mut v = min;
    while p * v <= cap {
        cur.push(v);
        nondecreasing_with_product_at_most(len, cap, v, cur, out);
        cur.pop();
        v += 1;
    }
}
