//! The extended group `Γ_n* = Γ_n ⋊ (Υ_n ⋊ S_n)`.
//!
//! Elements are kept in normal form `w·λ`: a reduced word `w` in the
//! generators `b_i` followed by a linear part `λ = ε∘σ`, an even sign change
//! after a coordinate permutation. The permutation moves coordinate `i` to
//! position `σ(i)`. Words act right to left, so `b_1 b_2` applies `b_2` first.
//!
//! Linear parts are pulled to the right with `σ b_i σ⁻¹ = b_{σ(i)}` and
//! `ε b_i ε = b_i`.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hurwitz::{flip, hurwitz_h};
use crate::tree::{check_arity, Color, TreeError};
use crate::C64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("sign vector must have entries ±1 with an even number of -1")]
    BadSigns,
    #[error("perm is not a permutation of 1..={0}")]
    BadPerm(usize),
    #[error("H not preserved at {point:?}: {before} -> {after}")]
    NotPreserved { point: Vec<C64>, before: C64, after: C64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearPart {
    signs: Vec<i8>,
    /// `perm[i-1] = σ(i)`, 1-based.
    perm: Vec<Color>,
}

impl LinearPart {
    pub fn identity(n: usize) -> Self {
        LinearPart { signs: vec![1; n], perm: (1..=n as Color).collect() }
    }

    pub fn new(signs: Vec<i8>, perm: Vec<Color>) -> Result<Self, GroupError> {
        let n = signs.len();
        check_arity(n)?;
        if perm.len() != n {
            return Err(GroupError::ArityMismatch(n, perm.len()));
        }
        if signs.iter().any(|s| s.abs() != 1) || signs.iter().filter(|&&s| s < 0).count() % 2 != 0 {
            return Err(GroupError::BadSigns);
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            let k = p as usize;
            if k == 0 || k > n || seen[k - 1] {
                return Err(GroupError::BadPerm(n));
            }
            seen[k - 1] = true;
        }
        Ok(LinearPart { signs, perm })
    }

    pub fn arity(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn perm(&self) -> &[Color] {
        &self.perm
    }

    pub fn sigma(&self, i: Color) -> Color {
        self.perm[i as usize - 1]
    }

    fn sigma_inv(&self, j: Color) -> Color {
        self.perm.iter().position(|&p| p == j).unwrap() as Color + 1
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); x.len()];
        for (i, &xi) in x.iter().enumerate() {
            y[self.perm[i] as usize - 1] = xi;
        }
        for (yk, &s) in y.iter_mut().zip(&self.signs) {
            if s < 0 {
                *yk = -*yk;
            }
        }
        y
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearPart) -> LinearPart {
        let n = self.arity();
        let perm = (0..n).map(|i| self.sigma(other.perm[i])).collect();
        let signs = (1..=n as Color)
            .map(|m| self.signs[m as usize - 1] * other.signs[self.sigma_inv(m) as usize - 1])
            .collect();
        LinearPart { signs, perm }
    }

    pub fn inverse(&self) -> LinearPart {
        let n = self.arity();
        let mut perm = vec![0; n];
        for i in 1..=n as Color {
            perm[self.sigma(i) as usize - 1] = i;
        }
        let signs = (1..=n as Color).map(|m| self.signs[self.sigma(m) as usize - 1]).collect();
        LinearPart { signs, perm }
    }

    /// All `2^{n-1} n!` linear parts.
    pub fn enumerate(n: usize) -> Result<Vec<LinearPart>, GroupError> {
        check_arity(n)?;
        let mut perms: Vec<Vec<Color>> = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for p in &perms {
                for c in 1..=n as Color {
                    if !p.contains(&c) {
                        let mut q = p.clone();
                        q.push(c);
                        next.push(q);
                    }
                }
            }
            perms = next;
        }
        let mut out = Vec::with_capacity(perms.len() << (n - 1));
        for mask in 0u32..(1 << n) {
            if mask.count_ones() % 2 != 0 {
                continue;
            }
            let signs: Vec<i8> = (0..n).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
            for p in &perms {
                out.push(LinearPart { signs: signs.clone(), perm: p.clone() });
            }
        }
        Ok(out)
    }

    pub fn random<R: Rng>(n: usize, rng: &mut R) -> LinearPart {
        let mut perm: Vec<Color> = (1..=n as Color).collect();
        perm.shuffle(rng);
        let mut signs: Vec<i8> = (0..n).map(|_| if rng.gen_bool(0.5) { -1 } else { 1 }).collect();
        if signs.iter().filter(|&&s| s < 0).count() % 2 == 1 {
            signs[0] = -signs[0];
        }
        LinearPart { signs, perm }
    }
}

/// `w·λ` in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Wire", into = "Wire")]
pub struct GroupElement {
    word: Vec<Color>,
    linear: LinearPart,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    word: Vec<Color>,
    signs: Vec<i8>,
    perm: Vec<Color>,
}

impl From<GroupElement> for Wire {
    fn from(g: GroupElement) -> Self {
        Wire { word: g.word, signs: g.linear.signs, perm: g.linear.perm }
    }
}

impl TryFrom<Wire> for GroupElement {
    type Error = GroupError;
    fn try_from(w: Wire) -> Result<Self, GroupError> {
        GroupElement::new(w.word, LinearPart::new(w.signs, w.perm)?)
    }
}

fn push_letter(word: &mut Vec<Color>, c: Color) {
    if word.last() == Some(&c) {
        word.pop();
    } else {
        word.push(c);
    }
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        GroupElement { word: Vec::new(), linear: LinearPart::identity(n) }
    }

    /// Reduces `word` freely and attaches the linear part.
    pub fn new(word: Vec<Color>, linear: LinearPart) -> Result<Self, GroupError> {
        let n = linear.arity();
        let mut w = Vec::with_capacity(word.len());
        for c in word {
            if c == 0 || c as usize > n {
                return Err(TreeError::Color { color: c, n }.into());
            }
            push_letter(&mut w, c);
        }
        Ok(GroupElement { word: w, linear })
    }

    pub fn generator(n: usize, i: Color) -> Result<Self, GroupError> {
        check_arity(n)?;
        GroupElement::new(vec![i], LinearPart::identity(n))
    }

    pub fn arity(&self) -> usize {
        self.linear.arity()
    }

    pub fn word(&self) -> &[Color] {
        &self.word
    }

    pub fn linear(&self) -> &LinearPart {
        &self.linear
    }

    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>, GroupError> {
        if x.len() != self.arity() {
            return Err(GroupError::ArityMismatch(self.arity(), x.len()));
        }
        let mut y = self.linear.apply(x);
        for &c in self.word.iter().rev() {
            flip(&mut y, c);
        }
        Ok(y)
    }

    /// `self · other`: `w_g λ_g w_h λ_h = w_g σ_g(w_h) · λ_g λ_h`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        if self.arity() != other.arity() {
            return Err(GroupError::ArityMismatch(self.arity(), other.arity()));
        }
        let mut word = self.word.clone();
        for &c in &other.word {
            push_letter(&mut word, self.linear.sigma(c));
        }
        Ok(GroupElement { word, linear: self.linear.compose(&other.linear) })
    }

    /// `(w λ)⁻¹ = σ⁻¹(w reversed) · λ⁻¹`.
    pub fn inverse(&self) -> GroupElement {
        let linear = self.linear.inverse();
        let word = self.word.iter().rev().map(|&c| linear.sigma(c)).collect();
        GroupElement { word, linear }
    }

    /// Uniform reduced word of the given length with a uniform linear part.
    pub fn random<R: Rng>(n: usize, len: usize, rng: &mut R) -> GroupElement {
        let mut word = Vec::with_capacity(len);
        while word.len() < len {
            let c = rng.gen_range(1..=n as Color);
            if word.last() != Some(&c) {
                word.push(c);
            }
        }
        GroupElement { word, linear: LinearPart::random(n, rng) }
    }

    pub fn verify_preserves_h<R: Rng>(&self, trials: usize, radius: f64, rng: &mut R) -> Result<(), GroupError> {
        verify_map_preserves_h(self.arity(), |x| self.apply(x).unwrap(), trials, radius, rng)
    }
}

/// Uniform point of the polydisk of the given radius.
pub fn random_point<R: Rng>(n: usize, radius: f64, rng: &mut R) -> Vec<C64> {
    (0..n)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            C64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}

/// Checks `H(f(x)) = H(x)` at random points of the polydisk.
///
/// The tolerance is `1e-9` relative to `1 + |H(x)| + Σ|y_k|² + ∏|y_k|`, the
/// size of the terms in evaluating `H` at `y = f(x)`.
pub fn verify_map_preserves_h<R: Rng>(
    n: usize,
    f: impl Fn(&[C64]) -> Vec<C64>,
    trials: usize,
    radius: f64,
    rng: &mut R,
) -> Result<(), GroupError> {
    check_arity(n)?;
    for _ in 0..trials {
        let x = random_point(n, radius, rng);
        let y = f(&x);
        let (before, after) = (hurwitz_h(&x), hurwitz_h(&y));
        let scale = 1.0
            + before.norm()
            + y.iter().map(|z| z.norm_sqr()).sum::<f64>()
            + y.iter().map(|z| z.norm()).product::<f64>();
        if !((after - before).norm() <= 1e-9 * scale) {
            return Err(GroupError::NotPreserved { point: x, before, after });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: &[C64], b: &[C64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() <= 1e-12 * (1.0 + x.norm()))
    }

    #[test]
    fn group_order() {
        assert_eq!(LinearPart::enumerate(3).unwrap().len(), 4 * 6);
        assert_eq!(LinearPart::enumerate(4).unwrap().len(), 8 * 24);
        assert_eq!(LinearPart::enumerate(5).unwrap().len(), 16 * 120);
    }

    #[test]
    fn linear_parts_close_under_composition_and_inverse() {
        for n in 3..=5 {
            let all = LinearPart::enumerate(n).unwrap();
            let set: std::collections::HashSet<_> = all.iter().cloned().collect();
            let id = LinearPart::identity(n);
            for (k, a) in all.iter().enumerate() {
                assert_eq!(a.compose(&a.inverse()), id);
                assert_eq!(a.inverse().compose(a), id);
                let b = &all[(k * 7 + 3) % all.len()];
                assert!(set.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn associativity_n3_exhaustive() {
        let all = LinearPart::enumerate(3).unwrap();
        for a in &all {
            for b in &all {
                for c in &all {
                    assert_eq!(a.compose(b).compose(c), a.compose(&b.compose(c)));
                }
            }
        }
    }

    #[test]
    fn linear_compose_matches_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let all = LinearPart::enumerate(4).unwrap();
        let x = random_point(4, 3.0, &mut rng);
        for a in &all {
            for b in all.iter().step_by(11) {
                assert!(close(&a.compose(b).apply(&x), &a.apply(&b.apply(&x))));
            }
        }
    }

    #[test]
    fn conjugation_relations_hold_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 3..=5 {
            for lam in LinearPart::enumerate(n).unwrap().iter().step_by(5) {
                for i in 1..=n as Color {
                    let x = random_point(n, 3.0, &mut rng);
                    // λ b_i = b_{σ(i)} λ
                    let mut lhs = x.clone();
                    flip(&mut lhs, i);
                    let lhs = lam.apply(&lhs);
                    let mut rhs = lam.apply(&x);
                    flip(&mut rhs, lam.sigma(i));
                    assert!(close(&lhs, &rhs));
                }
            }
        }
    }

    #[test]
    fn element_compose_matches_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 3..=6 {
            for _ in 0..50 {
                let g = GroupElement::random(n, rng.gen_range(0..5), &mut rng);
                let h = GroupElement::random(n, rng.gen_range(0..5), &mut rng);
                let x = random_point(n, 1.0, &mut rng);
                let gh = g.compose(&h).unwrap();
                let direct = g.apply(&h.apply(&x).unwrap()).unwrap();
                assert!(close(&gh.apply(&x).unwrap(), &direct));
                assert_eq!(g.compose(&g.inverse()).unwrap(), GroupElement::identity(n));
                assert_eq!(g.inverse().inverse(), g);
            }
        }
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let g = GroupElement::identity(3);
        let h = GroupElement::identity(4);
        assert_eq!(g.compose(&h), Err(GroupError::ArityMismatch(3, 4)));
    }

    #[test]
    fn odd_sign_change_rejected() {
        assert_eq!(LinearPart::new(vec![-1, 1, 1], vec![1, 2, 3]), Err(GroupError::BadSigns));
        assert_eq!(LinearPart::new(vec![1, 1, 1], vec![1, 1, 3]), Err(GroupError::BadPerm(3)));
    }

    #[test]
    fn json_round_trip() {
        let g = GroupElement::new(vec![1, 2, 2, 3], LinearPart::new(vec![-1, -1, 1], vec![2, 3, 1]).unwrap())
            .unwrap();
        assert_eq!(g.word(), &[1, 3]);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"word":[1,3],"signs":[-1,-1,1],"perm":[2,3,1]}"#);
        assert_eq!(serde_json::from_str::<GroupElement>(&s).unwrap(), g);
        assert!(serde_json::from_str::<GroupElement>(r#"{"word":[],"signs":[-1,1,1],"perm":[1,2,3]}"#).is_err());
    }

    #[test]
    fn odd_sign_change_breaks_h() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let odd = |x: &[C64]| {
            let mut y = x.to_vec();
            y[0] = -y[0];
            y
        };
        assert!(verify_map_preserves_h(3, odd, 20, 3.0, &mut rng).is_err());
    }
}
