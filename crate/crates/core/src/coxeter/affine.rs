//! The affine Weyl group `W = Lambda x| W_J` in normal form `t_lambda v`.

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::finite::FiniteWeylElement;
use super::roots::{Family, FiniteType, RootData};
use crate::error::{Error, Result};
use crate::linalg;

/// `t_lambda v` with `lambda` in simple-coroot coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineElement {
    trans: Vec<i64>,
    fin: FiniteWeylElement,
}

impl AffineElement {
    pub fn new(trans: Vec<i64>, fin: FiniteWeylElement) -> Self {
        assert_eq!(trans.len(), fin.rank());
        Self { trans, fin }
    }

    pub fn trans(&self) -> &[i64] {
        &self.trans
    }

    pub fn fin(&self) -> &FiniteWeylElement {
        &self.fin
    }

    pub fn is_translation(&self) -> bool {
        self.fin.is_identity()
    }

    pub fn in_finite_part(&self) -> bool {
        self.trans.iter().all(|&x| x == 0)
    }
}

/// JSON descriptor of a system, `{"type": "A", "rank": 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SystemId {
    #[serde(rename = "type")]
    pub family: Family,
    pub rank: usize,
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// JSON form of an element: translation plus a reduced word of the finite part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRepr {
    pub trans: Vec<i64>,
    pub fin: Vec<usize>,
}

/// An untwisted affine Weyl group with `s_0 = t_{-theta^vee} s_theta`.
#[derive(Debug)]
pub struct AffineSystem {
    ftype: FiniteType,
    roots: RootData,
    functionals: Vec<Vec<i64>>,
    affine_cartan: Vec<Vec<i64>>,
    marks: Vec<i64>,
    coxeter: Vec<Vec<u32>>,
    gens: Vec<AffineElement>,
    w_j: FiniteWeylElement,
}

impl AffineSystem {
    pub fn new(ftype: FiniteType) -> Result<Self> {
        let roots = RootData::new(ftype.cartan_matrix());
        let r = roots.rank();
        let a = &roots.cartan;
        let functionals: Vec<Vec<i64>> = roots.pos_roots.iter().map(|x| roots.functional(x)).collect();
        let theta = roots.highest_root().to_vec();
        let theta_co = roots.highest_coroot().to_vec();

        let mut affine_cartan = vec![vec![0i64; r + 1]; r + 1];
        affine_cartan[0][0] = 2;
        for j in 0..r {
            affine_cartan[0][j + 1] = -(0..r).map(|k| theta_co[k] * a[k][j]).sum::<i64>();
            affine_cartan[j + 1][0] = -(0..r).map(|k| theta[k] * a[j][k]).sum::<i64>();
            for k in 0..r {
                affine_cartan[j + 1][k + 1] = a[j][k];
            }
        }
        let kernel = linalg::kernel_basis(&affine_cartan);
        assert_eq!(
            kernel.len(),
            1,
            "affine Cartan matrix must have a one-dimensional kernel"
        );
        let marks: Vec<i64> = kernel[0].iter().map(|x| x.to_i64().expect("small mark")).collect();
        let mut expected = vec![1];
        expected.extend_from_slice(&theta);
        assert_eq!(marks, expected, "marks must be (1, theta)");

        let coxeter = (0..=r)
            .map(|i| {
                (0..=r)
                    .map(|j| {
                        if i == j {
                            return 1;
                        }
                        match affine_cartan[i][j] * affine_cartan[j][i] {
                            0 => 2,
                            1 => 3,
                            2 => 4,
                            3 => 6,
                            _ => 0,
                        }
                    })
                    .collect()
            })
            .collect();

        let mut gens = Vec::with_capacity(r + 1);
        let f_theta = roots.functional(&theta);
        let mut s_theta = vec![0i64; r * r];
        for m in 0..r {
            for k in 0..r {
                s_theta[m * r + k] = i64::from(m == k) - theta_co[m] * f_theta[k];
            }
        }
        gens.push(AffineElement::new(
            theta_co.iter().map(|x| -x).collect(),
            FiniteWeylElement::reflection(r, s_theta),
        ));
        for i in 0..r {
            let mut m = vec![0i64; r * r];
            for row in 0..r {
                for k in 0..r {
                    m[row * r + k] = i64::from(row == k) - if row == i { a[k][i] } else { 0 };
                }
            }
            gens.push(AffineElement::new(vec![0; r], FiniteWeylElement::reflection(r, m)));
        }

        let mut sys = Self {
            ftype,
            roots,
            functionals,
            affine_cartan,
            marks,
            coxeter,
            gens,
            w_j: FiniteWeylElement::identity(r),
        };
        sys.w_j = sys.compute_longest_finite();
        Ok(sys)
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::new(name.parse()?)
    }

    fn compute_longest_finite(&self) -> FiniteWeylElement {
        let r = self.rank();
        let mut v = FiniteWeylElement::identity(r);
        'outer: loop {
            for i in 0..r {
                // right ascent iff v(alpha_i) > 0
                let mut unit = vec![0i64; r];
                unit[i] = 1;
                if v.apply(&unit).iter().all(|&x| x >= 0) {
                    v = v.compose(self.gens[i + 1].fin());
                    continue 'outer;
                }
            }
            return v;
        }
    }

    pub fn finite_type(&self) -> FiniteType {
        self.ftype
    }

    pub fn id(&self) -> SystemId {
        SystemId {
            family: self.ftype.family(),
            rank: self.ftype.rank(),
        }
    }

    /// Rank of the finite system (`|S| - 1`).
    pub fn rank(&self) -> usize {
        self.roots.rank()
    }

    pub fn num_generators(&self) -> usize {
        self.rank() + 1
    }

    pub fn root_data(&self) -> &RootData {
        &self.roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.roots.pos_roots.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.roots.cartan
    }

    pub fn affine_cartan(&self) -> &[Vec<i64>] {
        &self.affine_cartan
    }

    pub fn marks(&self) -> &[i64] {
        &self.marks
    }

    /// `m(s_i, s_j)`, with `0` standing for infinity.
    pub fn coxeter_entry(&self, i: usize, j: usize) -> u32 {
        self.coxeter[i][j]
    }

    pub fn coxeter_matrix(&self) -> &[Vec<u32>] {
        &self.coxeter
    }

    pub fn highest_coroot(&self) -> &[i64] {
        self.roots.highest_coroot()
    }

    pub fn generator(&self, i: usize) -> &AffineElement {
        &self.gens[i]
    }

    pub fn identity(&self) -> AffineElement {
        AffineElement::new(vec![0; self.rank()], FiniteWeylElement::identity(self.rank()))
    }

    pub fn translation(&self, lambda: &[i64]) -> AffineElement {
        AffineElement::new(lambda.to_vec(), FiniteWeylElement::identity(self.rank()))
    }

    pub fn finite(&self, v: &FiniteWeylElement) -> AffineElement {
        AffineElement::new(vec![0; self.rank()], v.clone())
    }

    /// The longest element of `W_J` as a matrix.
    pub fn w_j_matrix(&self) -> &FiniteWeylElement {
        &self.w_j
    }

    pub fn w_j(&self) -> AffineElement {
        self.finite(&self.w_j)
    }

    /// `(lambda, u)(mu, v) = (lambda + u mu, uv)`
    pub fn mul(&self, x: &AffineElement, y: &AffineElement) -> AffineElement {
        let moved = x.fin.apply(&y.trans);
        let trans = x.trans.iter().zip(&moved).map(|(a, b)| a + b).collect();
        AffineElement::new(trans, x.fin.compose(&y.fin))
    }

    pub fn mul_gen_right(&self, w: &AffineElement, s: usize) -> AffineElement {
        self.mul(w, &self.gens[s])
    }

    pub fn mul_gen_left(&self, s: usize, w: &AffineElement) -> AffineElement {
        self.mul(&self.gens[s], w)
    }

    pub fn inverse(&self, w: &AffineElement) -> AffineElement {
        let inv = w.fin.inverse();
        let trans = inv.apply(&w.trans).into_iter().map(|x| -x).collect();
        AffineElement::new(trans, inv)
    }

    /// `<alpha, lambda>` for the positive root with the given index.
    pub fn root_pairing(&self, root: usize, lambda: &[i64]) -> i64 {
        self.functionals[root].iter().zip(lambda).map(|(a, b)| a * b).sum()
    }

    /// `<alpha_i, lambda>` for the simple root `alpha_i`, `i` in `1..=rank`.
    pub fn simple_pairing(&self, i: usize, lambda: &[i64]) -> i64 {
        (0..self.rank()).map(|k| self.roots.cartan[k][i - 1] * lambda[k]).sum()
    }

    /// `<rho, lambda>`; every simple coroot pairs to 1 with `rho`.
    pub fn rho_pairing(&self, lambda: &[i64]) -> i64 {
        lambda.iter().sum()
    }

    /// Sign of `v^{-1} alpha` for the positive root with the given index.
    fn inverse_sends_negative(&self, v: &FiniteWeylElement, root: usize) -> bool {
        v.apply_inverse(&self.roots.pos_coroots[root]).iter().any(|&x| x < 0)
    }

    /// `l(t_lambda v)`: sum over positive roots of `|<alpha,lambda>|` when
    /// `v^{-1} alpha > 0` and `|<alpha,lambda> + 1|` otherwise.
    pub fn length(&self, w: &AffineElement) -> u32 {
        (0..self.num_positive_roots())
            .map(|k| {
                let c = self.root_pairing(k, &w.trans);
                if self.inverse_sends_negative(&w.fin, k) {
                    (c + 1).unsigned_abs()
                } else {
                    c.unsigned_abs()
                }
            })
            .sum::<u64>() as u32
    }

    pub fn finite_length(&self, v: &FiniteWeylElement) -> u32 {
        (0..self.num_positive_roots())
            .filter(|&k| self.inverse_sends_negative(v, k))
            .count() as u32
    }

    pub fn is_left_descent(&self, s: usize, w: &AffineElement) -> bool {
        self.length(&self.mul_gen_left(s, w)) < self.length(w)
    }

    /// A reduced word, read left to right, built from greedy left descents.
    pub fn reduced_word(&self, w: &AffineElement) -> Vec<usize> {
        self.reduced_word_in(w, 0..self.num_generators())
    }

    fn reduced_word_in(&self, w: &AffineElement, gens: impl Iterator<Item = usize> + Clone) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = w.clone();
        let mut len = self.length(&cur);
        while len > 0 {
            let (s, next) = gens
                .clone()
                .map(|s| (s, self.mul_gen_left(s, &cur)))
                .find(|(_, x)| self.length(x) < len)
                .expect("nontrivial element has a left descent");
            word.push(s);
            cur = next;
            len -= 1;
        }
        word
    }

    pub fn from_word(&self, word: &[usize]) -> AffineElement {
        word.iter().fold(self.identity(), |acc, &s| self.mul_gen_right(&acc, s))
    }

    /// `"e"` or a reduced word such as `"s1s0s1"`.
    pub fn word_string(&self, w: &AffineElement) -> String {
        let word = self.reduced_word(w);
        if word.is_empty() {
            return "e".into();
        }
        word.iter().map(|s| format!("s{s}")).collect()
    }

    pub fn parse_word(&self, text: &str) -> Result<AffineElement> {
        let text = text.trim();
        if text == "e" || text.is_empty() {
            return Ok(self.identity());
        }
        let bad = || Error::Config(format!("cannot parse element {text:?}"));
        let mut word = Vec::new();
        for part in text.split('s').skip(1) {
            let s: usize = part.parse().map_err(|_| bad())?;
            if s >= self.num_generators() {
                return Err(bad());
            }
            word.push(s);
        }
        if !text.starts_with('s') {
            return Err(bad());
        }
        Ok(self.from_word(&word))
    }

    pub fn to_repr(&self, w: &AffineElement) -> ElementRepr {
        let fin = self.finite(&w.fin);
        ElementRepr {
            trans: w.trans.clone(),
            fin: self.reduced_word_in(&fin, 1..self.num_generators()),
        }
    }

    pub fn from_repr(&self, repr: &ElementRepr) -> Result<AffineElement> {
        if repr.trans.len() != self.rank() || repr.fin.iter().any(|&s| s == 0 || s > self.rank()) {
            return Err(Error::Config(format!(
                "element {repr:?} does not belong to {}",
                self.id()
            )));
        }
        let fin = self.from_word(&repr.fin);
        Ok(self.mul(&self.translation(&repr.trans), &fin))
    }

    /// The length test `l(lambda w_J) = l(lambda) + l(w_J)`.
    pub fn is_dominant(&self, lambda: &[i64]) -> bool {
        let t = self.translation(lambda);
        let d = self.mul(&t, &self.w_j());
        self.length(&d) == self.length(&t) + self.finite_length(&self.w_j)
    }

    /// `<alpha_i, lambda> >= 0` for every simple root.
    pub fn in_dominant_cone(&self, lambda: &[i64]) -> bool {
        (1..=self.rank()).all(|i| self.simple_pairing(i, lambda) >= 0)
    }

    /// Dominant `lambda` with `<rho, lambda> <= bound`, ordered by `(<rho,lambda>, lambda)`.
    pub fn dominant_list(&self, bound: u32) -> Vec<Vec<i64>> {
        let r = self.rank();
        let mut out = Vec::new();
        let mut cur = vec![0i64; r];
        fn rec(sys: &AffineSystem, cur: &mut Vec<i64>, pos: usize, left: i64, out: &mut Vec<Vec<i64>>) {
            if pos == cur.len() {
                let by_length = sys.is_dominant(cur);
                assert_eq!(
                    by_length,
                    sys.in_dominant_cone(cur),
                    "dominance tests disagree at {cur:?}"
                );
                if by_length {
                    out.push(cur.clone());
                }
                return;
            }
            for c in 0..=left {
                cur[pos] = c;
                rec(sys, cur, pos + 1, left - c, out);
            }
            cur[pos] = 0;
        }
        rec(self, &mut cur, 0, i64::from(bound), &mut out);
        out.sort_by_key(|l| (self.rho_pairing(l), l.clone()));
        out
    }

    /// `d_lambda = lambda w_J`, the longest element of `W_J lambda W_J`.
    pub fn d_lambda(&self, lambda: &[i64]) -> Result<AffineElement> {
        if !self.is_dominant(lambda) {
            return Err(Error::NotDominant(format!("{lambda:?}")));
        }
        Ok(self.mul(&self.translation(lambda), &self.w_j()))
    }

    /// `(lambda, v) -> (-w_J lambda, w_J v w_J)`.
    pub fn star(&self, w: &AffineElement) -> AffineElement {
        let trans = self.w_j.apply(&w.trans).into_iter().map(|x| -x).collect();
        AffineElement::new(trans, self.w_j.compose(&w.fin).compose(&self.w_j))
    }

    /// The vertices with mark 1.
    pub fn hyperspecial_vertices(&self) -> Vec<usize> {
        (0..self.num_generators()).filter(|&i| self.marks[i] == 1).collect()
    }
}
