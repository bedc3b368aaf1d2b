//! The Hecke algebra over `Z[q, q^{-1}]` and Kazhdan-Lusztig polynomials,
//! computed by the descent recursion with mu-correction and, independently,
//! by bar-involution elimination.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use parking_lot::RwLock;
use rayon::prelude::*;

use crate::coxeter::Ball;
use crate::error::{Error, Result};
use crate::poly::LaurentPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `sum_w c_w T_w`, keyed by ball index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HeckeElement {
    terms: BTreeMap<u32, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c T_w`
    pub fn basis(w: u32, c: LaurentPoly) -> Self {
        let mut out = Self::zero();
        out.add_term(w, &c);
        out
    }

    pub fn add_term(&mut self, w: u32, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&mut self, other: &Self) {
        for (&w, c) in &other.terms {
            self.add_term(w, c);
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        for (&w, x) in &self.terms {
            out.add_term(w, &(x * c));
        }
        out
    }

    pub fn coeff(&self, w: u32) -> LaurentPoly {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &LaurentPoly)> {
        self.terms.iter().map(|(&w, c)| (w, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `h T_s` (right) or `T_s h` (left), using `T_w T_s = T_{ws}` when
    /// `ws > w` and `q T_{ws} + (q - 1) T_w` otherwise.
    pub fn t_mul_simple(&self, ball: &Ball, s: usize, side: Side) -> Result<Self> {
        let q = LaurentPoly::q();
        let q_minus_one = &q - &LaurentPoly::one();
        let mut out = Self::zero();
        for (&w, c) in &self.terms {
            let ws = match side {
                Side::Right => ball.right_mul(w, s),
                Side::Left => ball.left_mul(s, w),
            }
            .ok_or_else(|| Error::OutOfRange(format!("{} * s{s}", ball.word(w)), ball.max_len()))?;
            if ball.length(ws) > ball.length(w) {
                out.add_term(ws, c);
            } else {
                out.add_term(ws, &(c * &q));
                out.add_term(w, &(c * &q_minus_one));
            }
        }
        Ok(out)
    }
}

/// One row `y -> P_{y,w}` of the table, over the interval `[e, w]`.
pub type KlRow = BTreeMap<u32, LaurentPoly>;

/// Kazhdan-Lusztig polynomials by the classical recursion: for `sw < w`, `v = sw`,
/// `P_{y,w} = q^{1-c} P_{sy,v} + q^c P_{y,v} - sum_z mu(z,v) q^{(l(w)-l(z))/2} P_{y,z}`
/// where `c = 1` if `sy < y` and the sum runs over `z` in `[y, v]` with `sz < z`.
pub struct KlTable {
    ball: Arc<Ball>,
    rows: RwLock<HashMap<u32, Arc<KlRow>>>,
}

impl KlTable {
    pub fn new(ball: Arc<Ball>) -> Self {
        Self {
            ball,
            rows: RwLock::new(HashMap::new()),
        }
    }

    pub fn ball(&self) -> &Arc<Ball> {
        &self.ball
    }

    /// Inserts a precomputed row (used when loading caches).
    pub fn insert_row(&self, w: u32, row: KlRow) {
        self.rows.write().entry(w).or_insert_with(|| Arc::new(row));
    }

    pub fn cached_rows(&self) -> Vec<(u32, Arc<KlRow>)> {
        let mut v: Vec<_> = self.rows.read().iter().map(|(&w, r)| (w, r.clone())).collect();
        v.sort_by_key(|(w, _)| *w);
        v
    }

    /// Computes every row with `l(w) <= max_len`, one length stratum at a time in parallel.
    pub fn fill(&self, max_len: u32) {
        for l in 0..=max_len.min(self.ball.max_len()) {
            let level: Vec<u32> = self.ball.of_length(l).collect();
            level.par_iter().for_each(|&w| {
                self.row(w);
            });
        }
    }

    pub fn row(&self, w: u32) -> Arc<KlRow> {
        if let Some(r) = self.rows.read().get(&w) {
            return r.clone();
        }
        let row = Arc::new(self.compute_row(w));
        self.rows.write().entry(w).or_insert(row).clone()
    }

    fn compute_row(&self, w: u32) -> KlRow {
        let ball = &*self.ball;
        let mut row = KlRow::new();
        let Some(s) = ball.first_left_descent(w) else {
            row.insert(w, LaurentPoly::one());
            return row;
        };
        let v = ball.left_mul(s, w).unwrap();
        let lw = i64::from(ball.length(w));
        let row_v = self.row(v);
        // z in [e, v] with sz < z and mu(z, v) != 0
        let corrections: Vec<(u32, LaurentPoly, Arc<KlRow>)> = row_v
            .iter()
            .filter(|(&z, _)| z != v && ball.is_left_descent(s, z))
            .filter_map(|(&z, p)| {
                let m = mu_of(p, ball.length(z), ball.length(v));
                (!m.is_zero()).then(|| {
                    let k = (lw - i64::from(ball.length(z))) / 2;
                    (z, LaurentPoly::monomial(m, k), self.row(z))
                })
            })
            .collect();
        let q = LaurentPoly::q();
        for y in ball.lower_interval(w) {
            let sy = ball.left_mul(s, y).expect("sy in range");
            let down = ball.length(sy) < ball.length(y);
            let p_sy = row_v.get(&sy).cloned().unwrap_or_default();
            let p_y = row_v.get(&y).cloned().unwrap_or_default();
            let mut p = if down {
                &p_sy + &(&q * &p_y)
            } else {
                &(&q * &p_sy) + &p_y
            };
            for (_, coeff, row_z) in &corrections {
                if let Some(pz) = row_z.get(&y) {
                    p -= &(coeff * pz);
                }
            }
            if !p.is_zero() {
                row.insert(y, p);
            }
        }
        row
    }

    /// `P_{y,w}`; an error when `y` is not below `w`.
    pub fn kl_poly(&self, y: u32, w: u32) -> Result<LaurentPoly> {
        if !self.ball.bruhat_leq(y, w) {
            return Err(Error::NotBelow(self.ball.word(y), self.ball.word(w)));
        }
        Ok(self.row(w).get(&y).cloned().expect("P_{y,w} != 0 for y <= w"))
    }

    /// Coefficient of `q^{(l(w)-l(y)-1)/2}` in `P_{y,w}`.
    pub fn mu(&self, y: u32, w: u32) -> Result<i64> {
        let (ly, lw) = (self.ball.length(y), self.ball.length(w));
        if ly >= lw {
            return Err(Error::Domain(format!("mu needs y < w, got lengths {ly} and {lw}")));
        }
        let p = self.row(w).get(&y).cloned().unwrap_or_default();
        Ok(mu_of(&p, ly, lw).to_i64().expect("small mu"))
    }

    /// `Z_w = sum_{y <= w} P_{y,w} q^{l(y)}`
    pub fn z_poly(&self, w: u32) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&y, p) in self.row(w).iter() {
            out += &p.shift(i64::from(self.ball.length(y)));
        }
        out
    }
}

fn mu_of(p: &LaurentPoly, ly: u32, lw: u32) -> BigInt {
    let gap = i64::from(lw) - i64::from(ly);
    if gap <= 0 || gap % 2 == 0 {
        return BigInt::zero();
    }
    p.coeff((gap - 1) / 2)
}

/// The independent route: bar-invariance elimination in the Hecke algebra.
pub struct KlOracle {
    ball: Arc<Ball>,
    bars: RwLock<HashMap<u32, Arc<HeckeElement>>>,
}

impl KlOracle {
    pub fn new(ball: Arc<Ball>) -> Self {
        Self {
            ball,
            bars: RwLock::new(HashMap::new()),
        }
    }

    /// `bar(T_y) = T_s^{-1} bar(T_{sy})` with `T_s^{-1} = q^{-1} T_s + (q^{-1} - 1)`.
    pub fn bar_t(&self, y: u32) -> Arc<HeckeElement> {
        if let Some(b) = self.bars.read().get(&y) {
            return b.clone();
        }
        let ball = &*self.ball;
        let out = match ball.first_left_descent(y) {
            None => HeckeElement::basis(y, LaurentPoly::one()),
            Some(s) => {
                let rest = self.bar_t(ball.left_mul(s, y).unwrap());
                let q_inv = LaurentPoly::monomial(1, -1);
                let mut h = rest
                    .t_mul_simple(ball, s, Side::Left)
                    .expect("bar(T_y) is supported below y")
                    .scale(&q_inv);
                h.add(&rest.scale(&(&q_inv - &LaurentPoly::one())));
                h
            }
        };
        let out = Arc::new(out);
        self.bars.write().entry(y).or_insert(out).clone()
    }

    /// `y -> P_{y,w}` for the self-dual element `q^{-l(w)/2} sum_y P_{y,w} T_y`.
    pub fn kl_row(&self, w: u32) -> Result<KlRow> {
        let ball = &*self.ball;
        let lw = i64::from(ball.length(w));
        let mut interval: Vec<u32> = (0..ball.len() as u32).filter(|&y| ball.bruhat_leq(y, w)).collect();
        interval.sort_by_key(|&y| std::cmp::Reverse((ball.length(y), y)));
        let mut row = KlRow::new();
        row.insert(w, LaurentPoly::one());
        let bars: Vec<(u32, Arc<HeckeElement>)> = interval.iter().map(|&y| (y, self.bar_t(y))).collect();
        for &x in interval.iter().skip(1) {
            let n = lw - i64::from(ball.length(x));
            let mut h = LaurentPoly::zero();
            for (y, bar_y) in &bars {
                if let Some(p) = row.get(y) {
                    h += &(&p.bar() * &bar_y.coeff(x));
                }
            }
            let h = h.shift(lw);
            // h = P_x - q^n bar(P_x)
            if h.bar().shift(n) != -h.clone() || (n % 2 == 0 && !h.coeff(n / 2).is_zero()) {
                return Err(Error::Integrality(format!(
                    "bar elimination at ({}, {}) produced a non-antisymmetric term {h}",
                    ball.word(x),
                    ball.word(w)
                )));
            }
            // exponents below n/2
            let p = h.truncate_below((n + 1) / 2);
            if !p.is_zero() {
                row.insert(x, p);
            }
        }
        Ok(row)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::AffineSystem;

    fn ball(name: &str, l: u32) -> Arc<Ball> {
        Arc::new(Ball::new(Arc::new(AffineSystem::from_name(name).unwrap()), l))
    }

    fn p(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(0, c.iter().copied())
    }

    #[test]
    fn t_mul_examples() {
        let b = ball("A1", 3);
        let s = b.index_of(b.system().generator(1)).unwrap();
        let te = HeckeElement::basis(0, LaurentPoly::one());
        assert_eq!(
            te.t_mul_simple(&b, 1, Side::Right).unwrap(),
            HeckeElement::basis(s, LaurentPoly::one())
        );
        let ts = HeckeElement::basis(s, LaurentPoly::one());
        let mut expect = HeckeElement::basis(0, LaurentPoly::q());
        expect.add_term(s, &p(&[-1, 1]));
        assert_eq!(ts.t_mul_simple(&b, 1, Side::Right).unwrap(), expect);
        let mut sum = ts.clone();
        sum.add(&te);
        let mut expect = HeckeElement::basis(0, LaurentPoly::q());
        expect.add_term(s, &LaurentPoly::q());
        assert_eq!(sum.t_mul_simple(&b, 1, Side::Right).unwrap(), expect);
    }

    #[test]
    fn a1_all_ones() {
        let b = ball("A1", 8);
        let kl = KlTable::new(b.clone());
        let oracle = KlOracle::new(b.clone());
        for w in 0..b.len() as u32 {
            let row = kl.row(w);
            assert!(row.values().all(LaurentPoly::is_one));
            assert_eq!(*row, oracle.kl_row(w).unwrap());
            for y in 0..b.len() as u32 {
                if b.length(y) < b.length(w) && b.bruhat_leq(y, w) {
                    let m = kl.mu(y, w).unwrap();
                    assert_eq!(m, i64::from(b.length(w) - b.length(y) == 1));
                }
            }
        }
    }

    #[test]
    fn a2_adjoint_value() {
        let b = ball("A2", 8);
        let sys = b.system().clone();
        let kl = KlTable::new(b.clone());
        let d0 = b.index_of(&sys.w_j()).unwrap();
        let d1 = b.index_of(&sys.d_lambda(&[1, 1]).unwrap()).unwrap();
        assert_eq!(kl.kl_poly(d0, d1).unwrap(), p(&[1, 1]));
        // the length gap is 4, so mu reads a half-integer exponent
        assert_eq!(kl.mu(d0, d1).unwrap(), 0);
        assert_eq!(KlOracle::new(b.clone()).kl_row(d1).unwrap().get(&d0), Some(&p(&[1, 1])));
        assert!(kl.kl_poly(d1, d0).is_err());
    }

    #[test]
    fn z_examples() {
        let b = ball("A1", 4);
        let sys = b.system().clone();
        let kl = KlTable::new(b.clone());
        assert!(kl.z_poly(0).is_one());
        let d = b.index_of(&sys.from_word(&[1, 0, 1])).unwrap();
        assert_eq!(kl.z_poly(d), p(&[1, 2, 2, 1]));
        let wj = b.index_of(&sys.w_j()).unwrap();
        assert_eq!(kl.z_poly(wj), p(&[1, 1]));
    }

    #[test]
    fn oracle_matches_primary_c2_g2() {
        for (name, l) in [("C2", 8), ("G2", 8)] {
            let b = ball(name, l);
            let kl = KlTable::new(b.clone());
            let oracle = KlOracle::new(b.clone());
            for w in 0..b.len() as u32 {
                assert_eq!(*kl.row(w), oracle.kl_row(w).unwrap(), "{name} {}", b.word(w));
            }
        }
    }
}
