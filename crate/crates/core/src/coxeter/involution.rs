//! Diagram automorphisms, the involution `*`, the group `A_Lambda` and the
//! diamond involutions attached to hyperspecial vertices.

use std::fmt;
use std::str::FromStr;

use super::affine::{AffineElement, AffineSystem};
use super::ball::Ball;
use crate::error::{Error, Result};

/// Which involution of `(W, S)` is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InvolutionId {
    Star,
    /// The involution in `A_Lambda *` sending `s_0` to `s_k`.
    Diamond(usize),
}

impl fmt::Display for InvolutionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvolutionId::Star => f.write_str("*"),
            InvolutionId::Diamond(k) => write!(f, "diamond:{k}"),
        }
    }
}

impl FromStr for InvolutionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "*" || s == "star" {
            return Ok(InvolutionId::Star);
        }
        s.strip_prefix("diamond:")
            .and_then(|k| k.trim_start_matches('s').parse().ok())
            .map(InvolutionId::Diamond)
            .ok_or_else(|| Error::Config(format!("unknown involution {s:?} (expected * or diamond:N)")))
    }
}

/// An involutive automorphism `delta` of `(W, S)`, given by its permutation of `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Involution {
    id: InvolutionId,
    s_perm: Vec<usize>,
}

impl Involution {
    pub fn star(sys: &AffineSystem) -> Self {
        Self {
            id: InvolutionId::Star,
            s_perm: star_permutation(sys),
        }
    }

    /// The unique element of `A_Lambda *` sending `s_0` to `s_k`.
    pub fn diamond(sys: &AffineSystem, k: usize) -> Result<Self> {
        if k >= sys.num_generators() || sys.marks()[k] != 1 {
            return Err(Error::NotHyperspecial(k));
        }
        let star = star_permutation(sys);
        let candidates: Vec<Vec<usize>> = special_automorphisms(sys)
            .into_iter()
            .map(|a| compose(&a, &star))
            .filter(|p| p[0] == k)
            .collect();
        assert_eq!(
            candidates.len(),
            1,
            "exactly one element of A_Lambda * sends s_0 to s_{k}"
        );
        let s_perm = candidates.into_iter().next().unwrap();
        assert!(
            is_identity(&compose(&s_perm, &s_perm)),
            "elements of A_Lambda * are involutions"
        );
        let id = if k == 0 {
            InvolutionId::Star
        } else {
            InvolutionId::Diamond(k)
        };
        Ok(Self { id, s_perm })
    }

    pub fn from_id(sys: &AffineSystem, id: InvolutionId) -> Result<Self> {
        match id {
            InvolutionId::Star => Ok(Self::star(sys)),
            InvolutionId::Diamond(k) => Self::diamond(sys, k),
        }
    }

    pub fn id(&self) -> InvolutionId {
        self.id
    }

    pub fn s_perm(&self) -> &[usize] {
        &self.s_perm
    }

    pub fn on_generator(&self, s: usize) -> usize {
        self.s_perm[s]
    }

    /// `delta(w)`, computed through a reduced word.
    pub fn apply(&self, sys: &AffineSystem, w: &AffineElement) -> AffineElement {
        let word: Vec<usize> = sys.reduced_word(w).into_iter().map(|s| self.s_perm[s]).collect();
        sys.from_word(&word)
    }

    /// `delta` on every index of the ball.
    pub fn on_ball(&self, ball: &Ball) -> Vec<u32> {
        automorphism_on_ball(ball, &self.s_perm)
    }

    pub fn is_twisted_involution(&self, sys: &AffineSystem, w: &AffineElement) -> bool {
        self.apply(sys, w) == sys.inverse(w)
    }
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x)
}

/// `*` on `S`: fixes `s_0` and sends `s_i` to `w_J s_i w_J`.
pub fn star_permutation(sys: &AffineSystem) -> Vec<usize> {
    let n = sys.num_generators();
    (0..n)
        .map(|i| {
            let img = sys.star(sys.generator(i));
            (0..n)
                .find(|&j| sys.generator(j) == &img)
                .expect("* permutes the simple reflections")
        })
        .collect()
}

/// Permutations of `S` preserving the Coxeter matrix.
pub fn diagram_automorphisms(sys: &AffineSystem) -> Vec<Vec<usize>> {
    let n = sys.num_generators();
    let m = sys.coxeter_matrix();
    let mut out = Vec::new();
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(m: &[Vec<u32>], perm: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let i = perm.len();
        if i == m.len() {
            out.push(perm.clone());
            return;
        }
        for j in 0..m.len() {
            if used[j] || (0..i).any(|k| m[k][i] != m[perm[k]][j]) {
                continue;
            }
            used[j] = true;
            perm.push(j);
            rec(m, perm, used, out);
            perm.pop();
            used[j] = false;
        }
    }
    rec(m, &mut perm, &mut used, &mut out);
    out
}

/// The map induced on `Lambda` by a diagram automorphism, as columns (images of
/// the simple coroots), or `None` if some translation is not sent to a translation.
pub fn lattice_map(sys: &AffineSystem, perm: &[usize]) -> Option<Vec<Vec<i64>>> {
    let r = sys.rank();
    let mut cols = Vec::with_capacity(r);
    for i in 0..r {
        let mut unit = vec![0i64; r];
        unit[i] = 1;
        let word: Vec<usize> = sys
            .reduced_word(&sys.translation(&unit))
            .into_iter()
            .map(|s| perm[s])
            .collect();
        let img = sys.from_word(&word);
        if !img.is_translation() {
            return None;
        }
        cols.push(img.trans().to_vec());
    }
    Some(cols)
}

/// Whether the lattice map (given as columns) is the action of some `w` in `W_J`.
///
/// Sends the regular dominant vector `2 rho^vee` through the map and folds the
/// image back into the dominant chamber with simple reflections; the map is in
/// `W_J` exactly when the folding element undoes it.
fn is_finite_weyl_action(sys: &AffineSystem, cols: &[Vec<i64>]) -> bool {
    let r = sys.rank();
    let apply = |v: &[i64]| -> Vec<i64> { (0..r).map(|i| (0..r).map(|j| cols[j][i] * v[j]).sum()).collect() };
    let regular: Vec<i64> = (0..r)
        .map(|i| sys.root_data().pos_coroots.iter().map(|c| c[i]).sum())
        .collect();
    let mut y = apply(&regular);
    let mut u = sys.identity();
    while let Some(i) = (1..=r).find(|&i| sys.simple_pairing(i, &y) < 0) {
        u = sys.mul_gen_left(i, &u);
        y = sys.generator(i).fin().apply(&y);
    }
    (0..r).all(|j| {
        let mut unit = vec![0i64; r];
        unit[j] = 1;
        u.fin().apply(&apply(&unit)) == unit
    })
}

/// `A_Lambda`: diagram automorphisms acting on `Lambda` through `W_J`.
pub fn special_automorphisms(sys: &AffineSystem) -> Vec<Vec<usize>> {
    diagram_automorphisms(sys)
        .into_iter()
        .filter(|p| lattice_map(sys, p).is_some_and(|cols| is_finite_weyl_action(sys, &cols)))
        .collect()
}

/// A diagram automorphism on every index of the ball, via `delta(ws) = delta(w) delta(s)`.
pub fn automorphism_on_ball(ball: &Ball, perm: &[usize]) -> Vec<u32> {
    let n = ball.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&i| ball.length(i));
    let mut out = vec![0u32; n];
    for i in order {
        if i == 0 {
            continue;
        }
        let s = (0..perm.len())
            .find(|&s| ball.is_right_descent(i, s))
            .expect("nontrivial element has a right descent");
        let ws = ball.right_mul(i, s).unwrap();
        out[i as usize] = ball
            .right_mul(out[ws as usize], perm[s])
            .expect("automorphisms preserve length");
    }
    out
}
