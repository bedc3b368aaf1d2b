//! Twisted involutions `I_delta`, the module `M` over the Hecke algebra with
//! parameter `q^2`, its bar operator and canonical basis `P^sigma`, and the
//! statistic `phi` with the map `zeta` (for `delta = *`).

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;
use parking_lot::RwLock;
use rayon::prelude::*;

use crate::coxeter::{AffineElement, AffineSystem, Ball, Involution, InvolutionId};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{LaurentPoly, RationalFn};

/// How a twisted involution is reached from its predecessor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveTag {
    /// `sw = w delta(s)`; predecessor `sw`, one shorter.
    Double,
    /// `sw != w delta(s)`; predecessor `s w delta(s)`, two shorter.
    Conj,
}

#[derive(Debug, Clone, Copy)]
pub struct MemberInfo {
    pub descent: usize,
    pub tag: MoveTag,
    pub pred: u32,
}

/// `sum_w c_w a_w`, keyed by ball index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MElement {
    terms: BTreeMap<u32, LaurentPoly>,
}

impl MElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(w: u32) -> Self {
        let mut out = Self::zero();
        out.add_term(w, &LaurentPoly::one());
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

    pub fn add_scaled(&mut self, other: &Self, c: &LaurentPoly) {
        for (&w, x) in &other.terms {
            self.add_term(w, &(x * c));
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
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
}

/// One canonical-basis row `y -> P^sigma_{y,w}`.
pub type SigmaRow = BTreeMap<u32, LaurentPoly>;

/// `I_delta` up to a length bound together with the module `M` on it.
pub struct TwistedModule {
    ball: Arc<Ball>,
    delta: Involution,
    delta_map: Vec<u32>,
    max_len: u32,
    members: Vec<u32>,
    info: HashMap<u32, Option<MemberInfo>>,
    bars: RwLock<HashMap<u32, Arc<MElement>>>,
    rows: RwLock<HashMap<u32, Arc<SigmaRow>>>,
}

impl TwistedModule {
    /// Enumerates `I_delta` with `l(w) <= max_len` by closure from `e`.
    pub fn new(ball: Arc<Ball>, delta: Involution, max_len: u32) -> Result<Self> {
        if max_len > ball.max_len() {
            return Err(Error::Config(format!(
                "twisted range {max_len} exceeds the enumerated ball ({})",
                ball.max_len()
            )));
        }
        let delta_map = delta.on_ball(&ball);
        let n_gens = ball.system().num_generators();
        let mut found: HashMap<u32, Option<MemberInfo>> = HashMap::from([(0, None)]);
        let mut by_len: Vec<Vec<u32>> = vec![Vec::new(); max_len as usize + 1];
        by_len[0].push(0);
        for l in 0..=max_len as usize {
            let mut level = std::mem::take(&mut by_len[l]);
            level.sort_unstable();
            for &w in &level {
                for s in 0..n_gens {
                    let Some(sw) = ball.left_mul(s, w) else { continue };
                    if ball.length(sw) < ball.length(w) {
                        continue;
                    }
                    let ds = delta.on_generator(s);
                    let wd = ball.right_mul(w, ds);
                    let (next, tag) = if wd == Some(sw) {
                        (Some(sw), MoveTag::Double)
                    } else {
                        (ball.right_mul(sw, ds), MoveTag::Conj)
                    };
                    let Some(next) = next else { continue };
                    let nl = ball.length(next);
                    if nl > max_len || found.contains_key(&next) {
                        continue;
                    }
                    let expected = ball.length(w) + if tag == MoveTag::Double { 1 } else { 2 };
                    assert_eq!(nl, expected, "twisted moves raise length by 1 or 2");
                    found.insert(next, None);
                    by_len[nl as usize].push(next);
                }
            }
            by_len[l] = level;
        }
        let mut members: Vec<u32> = by_len.into_iter().flatten().collect();
        members.sort_by_key(|&w| (ball.length(w), w));
        // canonical descent data: first left descent
        for &w in members.iter().skip(1) {
            let s = ball.first_left_descent(w).unwrap();
            let sw = ball.left_mul(s, w).unwrap();
            let ds = delta.on_generator(s);
            let info = if ball.right_mul(w, ds) == Some(sw) {
                MemberInfo {
                    descent: s,
                    tag: MoveTag::Double,
                    pred: sw,
                }
            } else {
                let pred = ball.right_mul(sw, ds).unwrap();
                MemberInfo {
                    descent: s,
                    tag: MoveTag::Conj,
                    pred,
                }
            };
            assert!(
                found.contains_key(&info.pred),
                "predecessor of a twisted involution is one"
            );
            found.insert(w, Some(info));
        }
        Ok(Self {
            ball,
            delta,
            delta_map,
            max_len,
            members,
            info: found,
            bars: RwLock::new(HashMap::new()),
            rows: RwLock::new(HashMap::new()),
        })
    }

    pub fn ball(&self) -> &Arc<Ball> {
        &self.ball
    }

    pub fn system(&self) -> &Arc<AffineSystem> {
        self.ball.system()
    }

    pub fn involution(&self) -> &Involution {
        &self.delta
    }

    pub fn max_len(&self) -> u32 {
        self.max_len
    }

    /// Members sorted by `(length, index)`.
    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn contains(&self, w: u32) -> bool {
        self.info.contains_key(&w)
    }

    pub fn member_info(&self, w: u32) -> Option<MemberInfo> {
        self.info.get(&w).copied().flatten()
    }

    pub fn delta_of(&self, w: u32) -> u32 {
        self.delta_map[w as usize]
    }

    /// `I_delta` by filtering the ball with `delta(w) = w^{-1}`.
    pub fn brute_force_members(&self) -> Vec<u32> {
        let sys = self.system();
        let mut out: Vec<u32> = (0..self.ball.len() as u32)
            .filter(|&w| self.ball.length(w) <= self.max_len)
            .filter(|&w| self.ball.element(self.delta_map[w as usize]) == &sys.inverse(self.ball.element(w)))
            .collect();
        out.sort_by_key(|&w| (self.ball.length(w), w));
        out
    }

    fn require_member(&self, w: u32) -> Result<()> {
        if self.contains(w) {
            Ok(())
        } else if self.ball.length(w) > self.max_len {
            Err(Error::OutOfRange(self.ball.word(w), self.max_len))
        } else {
            Err(Error::NotTwistedInvolution(self.ball.word(w)))
        }
    }

    fn out_of_range(&self, what: String) -> Error {
        Error::OutOfRange(what, self.max_len)
    }

    /// `T_s m` by the four-case action.
    pub fn ts_action(&self, s: usize, m: &MElement) -> Result<MElement> {
        let ball = &*self.ball;
        let q = LaurentPoly::q();
        let one = LaurentPoly::one();
        let q2 = LaurentPoly::monomial(1, 2);
        let ds = self.delta.on_generator(s);
        let mut out = MElement::zero();
        for (w, c) in m.terms() {
            self.require_member(w)?;
            let sw = ball
                .left_mul(s, w)
                .ok_or_else(|| self.out_of_range(format!("s{s} * {}", ball.word(w))))?;
            let up = ball.length(sw) > ball.length(w);
            let wd = ball.right_mul(w, ds);
            if wd == Some(sw) {
                self.require_member(sw)?;
                if up {
                    out.add_term(w, &(c * &q));
                    out.add_term(sw, &(c * &(&q + &one)));
                } else {
                    out.add_term(w, &(c * &(&(&q2 - &q) - &one)));
                    out.add_term(sw, &(c * &(&q2 - &q)));
                }
            } else {
                let x = ball
                    .right_mul(sw, ds)
                    .ok_or_else(|| self.out_of_range(format!("s{s} * {} * s{ds}", ball.word(w))))?;
                self.require_member(x)?;
                if up {
                    out.add_term(x, c);
                } else {
                    out.add_term(w, &(c * &(&q2 - &one)));
                    out.add_term(x, &(c * &q2));
                }
            }
        }
        Ok(out)
    }

    /// `T_s^{-1} m = q^{-2} T_s m + (q^{-2} - 1) m`
    pub fn ts_inverse_action(&self, s: usize, m: &MElement) -> Result<MElement> {
        let q_m2 = LaurentPoly::monomial(1, -2);
        let mut out = self.ts_action(s, m)?.scale(&q_m2);
        out.add_scaled(m, &(&q_m2 - &LaurentPoly::one()));
        Ok(out)
    }

    /// `bar(a_w)`, built along the predecessor chain from `bar(a_e) = a_e`.
    pub fn bar_basis(&self, w: u32) -> Result<Arc<MElement>> {
        if let Some(b) = self.bars.read().get(&w) {
            return Ok(b.clone());
        }
        self.require_member(w)?;
        let ball = &*self.ball;
        let out = match self.member_info(w) {
            None => MElement::basis(w),
            Some(MemberInfo { descent: s, tag, pred }) => {
                let prev = self.bar_basis(pred)?;
                let moved = self.ts_inverse_action(s, &prev)?;
                match tag {
                    // a_w = T_s a_pred
                    MoveTag::Conj => moved,
                    // (q + 1) a_w = T_s a_pred - q a_pred
                    MoveTag::Double => {
                        let mut num = moved;
                        num.add_scaled(&prev, &-LaurentPoly::monomial(1, -1));
                        let den = LaurentPoly::from_coeffs(-1, [1, 1]);
                        let mut out = MElement::zero();
                        for (y, c) in num.terms() {
                            let quot = c.div_exact(&den).ok_or_else(|| {
                                Error::Integrality(format!(
                                    "bar(a_{}) has a non-integral coefficient at {}",
                                    ball.word(w),
                                    ball.word(y)
                                ))
                            })?;
                            out.add_term(y, &quot);
                        }
                        out
                    }
                }
            }
        };
        // unitriangularity: diagonal q^{-l(w)}, everything else strictly below w
        let diag = LaurentPoly::monomial(1, -i64::from(ball.length(w)));
        if out.coeff(w) != diag {
            return Err(Error::Integrality(format!(
                "bar(a_{}) has diagonal {} instead of {diag}",
                ball.word(w),
                out.coeff(w)
            )));
        }
        for (y, _) in out.terms() {
            if y != w && !(ball.length(y) < ball.length(w) && ball.interval_contains(w, y)) {
                return Err(Error::Integrality(format!(
                    "bar(a_{}) has a term at {} outside [e, w)",
                    ball.word(w),
                    ball.word(y)
                )));
            }
        }
        let out = Arc::new(out);
        Ok(self.bars.write().entry(w).or_insert(out).clone())
    }

    /// The antilinear extension of `bar` to an arbitrary element.
    pub fn bar(&self, m: &MElement) -> Result<MElement> {
        let mut out = MElement::zero();
        for (w, c) in m.terms() {
            out.add_scaled(&*self.bar_basis(w)?, &c.bar());
        }
        Ok(out)
    }

    /// Computes every canonical row up to `max_len`, length stratum by stratum.
    pub fn fill(&self, max_len: u32) -> Result<()> {
        for l in 0..=max_len.min(self.max_len) {
            let level: Vec<u32> = self
                .members
                .iter()
                .copied()
                .filter(|&w| self.ball.length(w) == l)
                .collect();
            level.par_iter().try_for_each(|&w| self.sigma_row(w).map(|_| ()))?;
        }
        Ok(())
    }

    pub fn insert_row(&self, w: u32, row: SigmaRow) {
        self.rows.write().entry(w).or_insert_with(|| Arc::new(row));
    }

    pub fn cached_rows(&self) -> Vec<(u32, Arc<SigmaRow>)> {
        let mut v: Vec<_> = self.rows.read().iter().map(|(&w, r)| (w, r.clone())).collect();
        v.sort_by_key(|(w, _)| *w);
        v
    }

    /// `y -> P^sigma_{y,w}`: the unique `B_w = sum_y P^sigma_{y,w} a_y` with
    /// `q^{l(w)} bar(B_w) = B_w`, `P^sigma_{w,w} = 1` and
    /// `deg P^sigma_{y,w} < (l(w) - l(y)) / 2` for `y < w`.
    pub fn sigma_row(&self, w: u32) -> Result<Arc<SigmaRow>> {
        if let Some(r) = self.rows.read().get(&w) {
            return Ok(r.clone());
        }
        self.require_member(w)?;
        let ball = &*self.ball;
        let lw = i64::from(ball.length(w));
        let mut below: Vec<u32> = self
            .members
            .iter()
            .copied()
            .filter(|&y| ball.length(y) <= ball.length(w) && ball.interval_contains(w, y))
            .collect();
        below.sort_by_key(|&y| std::cmp::Reverse((ball.length(y), y)));
        let bars: Vec<(u32, Arc<MElement>)> = below
            .iter()
            .map(|&y| self.bar_basis(y).map(|b| (y, b)))
            .collect::<Result<_>>()?;
        let mut row = SigmaRow::new();
        row.insert(w, LaurentPoly::one());
        for &x in below.iter().skip(1) {
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
                    "canonical basis at ({}, {}) needs a non-antisymmetric correction {h}",
                    ball.word(x),
                    ball.word(w)
                )));
            }
            let p = h.truncate_below((n + 1) / 2);
            if !p.is_zero() {
                row.insert(x, p);
            }
        }
        let row = Arc::new(row);
        Ok(self.rows.write().entry(w).or_insert(row).clone())
    }

    /// `P^sigma_{y,w}` (zero when `y` is not below `w`).
    pub fn p_sigma(&self, y: u32, w: u32) -> Result<LaurentPoly> {
        self.require_member(y)?;
        Ok(self.sigma_row(w)?.get(&y).cloned().unwrap_or_default())
    }

    /// `(T_s + 1)(T_s - q^2) a_w`, expected zero.
    pub fn quadratic_defect(&self, s: usize, w: u32) -> Result<MElement> {
        let a = MElement::basis(w);
        let t = self.ts_action(s, &a)?;
        let mut inner = t.clone();
        inner.add_scaled(&a, &-LaurentPoly::monomial(1, 2));
        let mut out = self.ts_action(s, &inner)?;
        out.add_scaled(&inner, &LaurentPoly::one());
        Ok(out)
    }

    /// Difference of the two braid words of length `m(s,t)` applied to `a_w`;
    /// `None` when `m` is infinite or the orbit leaves the enumerated range.
    pub fn braid_defect(&self, s: usize, t: usize, w: u32) -> Option<MElement> {
        let m = self.system().coxeter_entry(s, t);
        if m == 0 || s == t {
            return None;
        }
        let run = |first: usize, second: usize| -> Result<MElement> {
            let mut cur = MElement::basis(w);
            for k in 0..m {
                cur = self.ts_action(if k % 2 == 0 { second } else { first }, &cur)?;
            }
            Ok(cur)
        };
        let (a, b) = (run(s, t).ok()?, run(t, s).ok()?);
        let mut diff = a;
        diff.add_scaled(&b, &-LaurentPoly::one());
        Some(diff)
    }
}

/// `e(A)`: dimension of the `(-1)`-eigenspace over `Q`.
pub fn eigen_minus_dim(a: &[Vec<i64>]) -> usize {
    linalg::minus_one_eigenspace_dim(a)
}

fn negate(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    m.iter().map(|row| row.iter().map(|x| -x).collect()).collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect())
        .collect()
}

/// `phi(w) = e(lambda -> wbar(lambda^*)) - e(lambda -> lambda^*)` for `w` in `I_*`,
/// where `lambda^* = -w_J lambda`.
pub fn phi(sys: &AffineSystem, w: &AffineElement) -> Result<usize> {
    if sys.star(w) != sys.inverse(w) {
        return Err(Error::NotTwistedInvolution(sys.word_string(w)));
    }
    let star = negate(&sys.w_j_matrix().matrix());
    let twisted = mat_mul(&w.fin().matrix(), &star);
    let (a, b) = (eigen_minus_dim(&twisted), eigen_minus_dim(&star));
    Ok(a.checked_sub(b).expect("phi is nonnegative"))
}

/// The same statistic inside a finite parabolic `W_{H'}` (`H'` inside `J`) with
/// the involution `Ad(w_{H'})`, on the span of the simple coroots of `H'`:
/// `phi'(z) = e'(-z w_{H'}) - e'(-w_{H'})`.
pub fn phi_prime(h: &[usize], w_h: &AffineElement, z: &AffineElement) -> usize {
    let restrict = |m: &[Vec<i64>]| -> Vec<Vec<i64>> {
        h.iter()
            .map(|&i| h.iter().map(|&j| m[i - 1][j - 1]).collect())
            .collect()
    };
    let wh = restrict(&w_h.fin().matrix());
    let zr = restrict(&z.fin().matrix());
    let a = eigen_minus_dim(&negate(&mat_mul(&zr, &wh)));
    let b = eigen_minus_dim(&negate(&wh));
    a.checked_sub(b).expect("phi' is nonnegative")
}

/// `zeta(a_w) = q^{l(w)} ((q-1)/(q+1))^{phi(w)}`
pub fn zeta_basis(length: u32, phi: usize) -> RationalFn {
    let ratio = RationalFn::new(
        LaurentPoly::from_coeffs(0, [-1, 1]),
        LaurentPoly::from_coeffs(0, [1, 1]),
    )
    .expect("nonzero denominator");
    let pow = ratio.pow(phi as i64).expect("nonzero base");
    &RationalFn::from_poly(LaurentPoly::monomial(1, i64::from(length))) * &pow
}

/// `zeta` and `Z^sigma` on a `*`-twisted module, with `phi` memoized per member.
pub struct Zeta {
    module: Arc<TwistedModule>,
    phis: RwLock<HashMap<u32, usize>>,
}

impl Zeta {
    pub fn new(module: Arc<TwistedModule>) -> Result<Self> {
        if module.involution().id() != InvolutionId::Star {
            return Err(Error::Config("zeta is defined only for the involution *".into()));
        }
        Ok(Self {
            module,
            phis: RwLock::new(HashMap::new()),
        })
    }

    pub fn phi(&self, w: u32) -> Result<usize> {
        if let Some(&v) = self.phis.read().get(&w) {
            return Ok(v);
        }
        self.module.require_member(w)?;
        let v = phi(self.module.system(), self.module.ball().element(w))?;
        self.phis.write().insert(w, v);
        Ok(v)
    }

    pub fn zeta(&self, m: &MElement) -> Result<RationalFn> {
        let mut acc = RationalFn::zero();
        for (w, c) in m.terms() {
            let z = zeta_basis(self.module.ball().length(w), self.phi(w)?);
            acc = &acc + &(&RationalFn::from_poly(c.clone()) * &z);
        }
        Ok(acc)
    }

    /// `Z^sigma_w = zeta(sum_y P^sigma_{y,w} a_y)`
    pub fn z_sigma(&self, w: u32) -> Result<RationalFn> {
        let row = self.module.sigma_row(w)?;
        let mut m = MElement::zero();
        for (&y, p) in row.iter() {
            m.add_term(y, p);
        }
        self.zeta(&m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module(name: &str, id: InvolutionId, l: u32) -> TwistedModule {
        let sys = Arc::new(AffineSystem::from_name(name).unwrap());
        let ball = Arc::new(Ball::new(sys.clone(), l + 2));
        let delta = Involution::from_id(&sys, id).unwrap();
        TwistedModule::new(ball, delta, l).unwrap()
    }

    fn words(m: &TwistedModule) -> Vec<String> {
        m.members().iter().map(|&w| m.ball().word(w)).collect()
    }

    #[test]
    fn a1_star_members() {
        let m = module("A1", InvolutionId::Star, 3);
        assert_eq!(words(&m), vec!["e", "s0", "s1", "s0s1s0", "s1s0s1"]);
        assert_eq!(m.members(), &m.brute_force_members()[..]);
    }

    #[test]
    fn a1_diamond_members() {
        let m = module("A1", InvolutionId::Diamond(1), 4);
        assert!(words(&m).contains(&"s1s0".to_string()));
        assert_eq!(m.members(), &m.brute_force_members()[..]);
    }

    #[test]
    fn ts_examples() {
        let m = module("A1", InvolutionId::Star, 4);
        let b = m.ball().clone();
        let sys = b.system().clone();
        let idx = |w: &[usize]| b.index_of(&sys.from_word(w)).unwrap();
        let t = m.ts_action(0, &MElement::basis(0)).unwrap();
        let mut expect = MElement::zero();
        expect.add_term(0, &LaurentPoly::q());
        expect.add_term(idx(&[0]), &LaurentPoly::from_coeffs(0, [1, 1]));
        assert_eq!(t, expect);
        let t = m.ts_action(0, &MElement::basis(idx(&[1]))).unwrap();
        assert_eq!(t, MElement::basis(idx(&[0, 1, 0])));
    }

    #[test]
    fn module_integrity_small() {
        for (name, id, l) in [
            ("A1", InvolutionId::Star, 8),
            ("A2", InvolutionId::Star, 6),
            ("A2", InvolutionId::Diamond(1), 6),
            ("C2", InvolutionId::Star, 6),
        ] {
            let m = module(name, id, l + 2);
            let n_gens = m.system().num_generators();
            for &w in m.members().iter().filter(|&&w| m.ball().length(w) <= l) {
                for s in 0..n_gens {
                    assert!(m.quadratic_defect(s, w).unwrap().is_zero());
                    for t in 0..n_gens {
                        if let Some(d) = m.braid_defect(s, t, w) {
                            assert!(d.is_zero(), "{name} braid {s} {t} at {}", m.ball().word(w));
                        }
                    }
                }
                let b = m.bar_basis(w).unwrap();
                assert_eq!(m.bar(&b).unwrap(), MElement::basis(w));
            }
        }
    }

    #[test]
    fn sigma_on_finite_part_is_one() {
        let m = module("A2", InvolutionId::Star, 5);
        let sys = m.system().clone();
        let wj = m.ball().index_of(&sys.w_j()).unwrap();
        let row = m.sigma_row(wj).unwrap();
        for (&y, p) in row.iter() {
            assert!(m.ball().element(y).in_finite_part());
            assert!(p.is_one());
        }
    }

    #[test]
    fn phi_examples() {
        let sys = AffineSystem::from_name("A1").unwrap();
        assert_eq!(phi(&sys, &sys.identity()).unwrap(), 0);
        assert_eq!(phi(&sys, sys.generator(0)).unwrap(), 1);
        let d = sys.d_lambda(&[2]).unwrap();
        assert_eq!(phi(&sys, &d).unwrap(), 1);
        assert!(phi(&sys, &sys.from_word(&[0, 1])).is_err());
        let z = zeta_basis(1, 1);
        assert_eq!(
            z,
            RationalFn::new(
                LaurentPoly::from_coeffs(1, [-1, 1]),
                LaurentPoly::from_coeffs(0, [1, 1])
            )
            .unwrap()
        );
    }
}
