//! The normalized invariants `tilde Z`, `tilde Z^sigma` and the identities
//! linking KL polynomials, the twisted module and the dual group.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coxeter::{
    finite_weyl_group, star_permutation, AffineElement, AffineSystem, Ball, DoubleCoset, Involution, InvolutionId,
    Parabolic, SystemId,
};
use crate::error::{Error, Result};
use crate::hecke::{KlOracle, KlTable};
use crate::poly::{LaurentPoly, RationalFn, Substitution};
use crate::rep::{sign, DualRootSystem};
use crate::twisted::{phi, phi_prime, zeta_basis, MElement, TwistedModule, Zeta};

/// Families of identities a run can check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Main,
    Z,
    Coset,
    Parabolic,
    Diamond,
    Bridge,
    Oracles,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Main,
        Check::Z,
        Check::Coset,
        Check::Parabolic,
        Check::Diamond,
        Check::Bridge,
        Check::Oracles,
    ];

    /// Whether the check is meaningful for the given involution.
    pub fn applies_to(self, id: InvolutionId) -> bool {
        match self {
            Check::Main | Check::Z | Check::Coset | Check::Bridge => id == InvolutionId::Star,
            Check::Parabolic | Check::Diamond | Check::Oracles => true,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Check::Main => "main",
            Check::Z => "z",
            Check::Coset => "coset",
            Check::Parabolic => "parabolic",
            Check::Diamond => "diamond",
            Check::Bridge => "bridge",
            Check::Oracles => "oracles",
        };
        f.write_str(s)
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.to_string() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown check {s:?}")))
    }
}

/// One side of a checked identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Poly(LaurentPoly),
    Ratio(RationalFn),
    Word(String),
}

impl Value {
    pub fn int(n: i64) -> Self {
        Value::Poly(LaurentPoly::constant(n))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Poly(p) => write!(f, "{p}"),
            Value::Ratio(r) => match r.as_poly() {
                Some(p) => write!(f, "{p}"),
                None => write!(f, "({}) / ({})", r.num(), r.den()),
            },
            Value::Word(w) => f.write_str(w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub system: SystemId,
    pub involution: String,
    pub check: Check,
    /// Which identity of the family was checked.
    pub identity: String,
    pub lambda: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<i64>>,
    /// Generator subset for parabolic checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<String>,
    pub lhs: Value,
    pub rhs: Value,
    pub pass: bool,
}

impl VerificationRecord {
    fn sort_key(&self) -> impl Ord + '_ {
        (
            self.check,
            &self.identity,
            &self.lambda,
            &self.mu,
            &self.subset,
            self.w.as_ref().map(|s| (s.len(), s)),
            self.y.as_ref().map(|s| (s.len(), s)),
        )
    }
}

/// Sorts records into the canonical emission order.
pub fn sort_records(records: &mut [VerificationRecord]) {
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

/// Builder for records sharing a system and involution.
#[derive(Clone)]
struct Recorder {
    system: SystemId,
    involution: String,
}

impl Recorder {
    fn rec(&self, check: Check, identity: &str, lambda: &[i64], lhs: Value, rhs: Value) -> VerificationRecord {
        let pass = lhs == rhs;
        VerificationRecord {
            system: self.system,
            involution: self.involution.clone(),
            check,
            identity: identity.to_string(),
            lambda: lambda.to_vec(),
            mu: None,
            subset: None,
            y: None,
            w: None,
            lhs,
            rhs,
            pass,
        }
    }
}

trait RecordExt {
    fn mu(self, mu: &[i64]) -> Self;
    fn subset(self, s: &[usize]) -> Self;
    fn y(self, y: String) -> Self;
    fn w(self, w: String) -> Self;
}

impl RecordExt for VerificationRecord {
    fn mu(mut self, mu: &[i64]) -> Self {
        self.mu = Some(mu.to_vec());
        self
    }

    fn subset(mut self, s: &[usize]) -> Self {
        self.subset = Some(s.to_vec());
        self
    }

    fn y(mut self, y: String) -> Self {
        self.y = Some(y);
        self
    }

    fn w(mut self, w: String) -> Self {
        self.w = Some(w);
        self
    }
}

/// Everything checked on one double coset `W_J mu W_J`.
#[derive(Debug, Clone)]
pub struct CosetReport {
    pub mu: Vec<i64>,
    pub b: AffineElement,
    pub d: AffineElement,
    pub h: Vec<usize>,
    pub h_star: Vec<usize>,
    pub records: Vec<VerificationRecord>,
}

impl CosetReport {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }
}

fn ratio(num: LaurentPoly, den: LaurentPoly) -> Result<RationalFn> {
    RationalFn::new(num, den)
}

fn poly(r: &RationalFn) -> Value {
    match r.as_poly() {
        Some(p) => Value::Poly(p),
        None => Value::Ratio(r.clone()),
    }
}

/// Largest ball a workspace will enumerate.
pub const BALL_LIMIT: usize = 2_000_000;

/// Tables for one system and involution up to a length bound.
pub struct Workspace {
    sys: Arc<AffineSystem>,
    ball: Arc<Ball>,
    kl: KlTable,
    module: Arc<TwistedModule>,
    zeta: Option<Zeta>,
    w_j: Parabolic,
    w_j_index: u32,
    max_len: u32,
    rec: Recorder,
}

impl Workspace {
    pub fn new(sys: Arc<AffineSystem>, involution: InvolutionId, max_len: u32) -> Result<Self> {
        let delta = Involution::from_id(&sys, involution)?;
        let w_j = finite_weyl_group(&sys)?;
        if max_len == 0 {
            return Err(Error::Config("max length must be positive".into()));
        }
        let ball = Arc::new(Ball::with_limit(sys.clone(), max_len, BALL_LIMIT)?);
        let w_j_index = ball.require(&sys.w_j())?;
        let module = Arc::new(TwistedModule::new(ball.clone(), delta, max_len)?);
        let zeta = (module.involution().id() == InvolutionId::Star)
            .then(|| Zeta::new(module.clone()))
            .transpose()?;
        let rec = Recorder {
            system: sys.id(),
            involution: module.involution().id().to_string(),
        };
        Ok(Self {
            kl: KlTable::new(ball.clone()),
            sys,
            ball,
            module,
            zeta,
            w_j,
            w_j_index,
            max_len,
            rec,
        })
    }

    pub fn system(&self) -> &Arc<AffineSystem> {
        &self.sys
    }

    pub fn ball(&self) -> &Arc<Ball> {
        &self.ball
    }

    pub fn kl(&self) -> &KlTable {
        &self.kl
    }

    pub fn module(&self) -> &Arc<TwistedModule> {
        &self.module
    }

    pub fn finite_weyl_group(&self) -> &Parabolic {
        &self.w_j
    }

    pub fn max_len(&self) -> u32 {
        self.max_len
    }

    pub fn involution(&self) -> InvolutionId {
        self.module.involution().id()
    }

    /// Computes all KL and canonical-basis rows in range.
    pub fn fill(&self) -> Result<()> {
        self.kl.fill(self.max_len);
        self.module.fill(self.max_len)
    }

    fn zeta(&self) -> Result<&Zeta> {
        self.zeta
            .as_ref()
            .ok_or_else(|| Error::Config("this check needs the involution *".into()))
    }

    /// Dominant `lambda` with `l(d_lambda) <= max_len` and, if given, `<rho,lambda> <= height`.
    pub fn dominant_range(&self, height: Option<u32>) -> Vec<Vec<i64>> {
        let base = self.sys.length(&self.sys.w_j());
        let by_len = self.max_len.saturating_sub(base) / 2;
        let bound = height.map_or(by_len, |h| h.min(by_len));
        self.sys
            .dominant_list(bound)
            .into_iter()
            .filter(|l| self.max_len >= base && self.d_index(l).is_ok())
            .collect()
    }

    pub fn d_index(&self, lambda: &[i64]) -> Result<u32> {
        self.ball.require(&self.sys.d_lambda(lambda)?)
    }

    /// `Z_{d_lambda} / Z_{w_J}`, required to be a polynomial.
    pub fn tilde_z(&self, lambda: &[i64]) -> Result<RationalFn> {
        let d = self.d_index(lambda)?;
        let out = ratio(self.kl.z_poly(d), self.kl.z_poly(self.w_j_index))?;
        if out.as_poly().is_none() {
            return Err(Error::Integrality(format!("tilde Z for {lambda:?} is {out}")));
        }
        Ok(out)
    }

    /// `Z^sigma_{d_lambda} / Z^sigma_{w_J}`, required to be a polynomial.
    pub fn tilde_z_sigma(&self, lambda: &[i64]) -> Result<RationalFn> {
        let zeta = self.zeta()?;
        let d = self.d_index(lambda)?;
        let out = &zeta.z_sigma(d)? * &zeta.z_sigma(self.w_j_index)?.inv()?;
        if out.as_poly().is_none() {
            return Err(Error::Integrality(format!("tilde Z^sigma for {lambda:?} is {out}")));
        }
        Ok(out)
    }

    /// `P^sigma_{d_mu,d_lambda}(q)` against `P_{d_mu,d_lambda}(-q)`.
    pub fn verify_main(&self, mu: &[i64], lambda: &[i64]) -> Result<VerificationRecord> {
        self.zeta()?;
        let (y, w) = (self.d_index(mu)?, self.d_index(lambda)?);
        let lhs = self.module.p_sigma(y, w)?;
        let rhs = self.kl.kl_poly(y, w)?.neg_q();
        Ok(self
            .rec
            .rec(
                Check::Main,
                "sigma-equals-kl-at-minus-q",
                lambda,
                Value::Poly(lhs),
                Value::Poly(rhs),
            )
            .mu(mu))
    }

    /// `tilde Z^sigma(q)` against `tilde Z(-q)`.
    pub fn verify_z(&self, lambda: &[i64]) -> Result<VerificationRecord> {
        let lhs = self.tilde_z_sigma(lambda)?;
        let rhs = self.tilde_z(lambda)?.neg_q();
        Ok(self
            .rec
            .rec(Check::Z, "normalized-sigma-invariant", lambda, poly(&lhs), poly(&rhs)))
    }

    /// `Z^sigma_{w_J}` from the module against `P_J(q^2) / P_{J,*}(q)`.
    pub fn verify_finite_part(&self) -> Result<Vec<VerificationRecord>> {
        let zeta = self.zeta()?;
        let zero = vec![0; self.sys.rank()];
        let p_j = self.w_j.poincare();
        let star = |x: &AffineElement| self.sys.star(x);
        let expect = ratio(p_j.substitute(Substitution::Square), self.w_j.twisted_poincare(star))?;
        let mut out = vec![self.rec.rec(
            Check::Z,
            "finite-part-sigma-invariant",
            &zero,
            poly(&zeta.z_sigma(self.w_j_index)?),
            poly(&expect),
        )];
        let row = self.module.sigma_row(self.w_j_index)?;
        let ones = row.values().filter(|p| p.is_one()).count() as i64;
        let finite = self
            .module
            .members()
            .iter()
            .filter(|&&y| self.ball.element(y).in_finite_part())
            .count() as i64;
        out.push(self.rec.rec(
            Check::Z,
            "finite-part-sigma-row-is-one",
            &zero,
            Value::int(ones),
            Value::int(finite),
        ));
        Ok(out)
    }

    /// `phi(w) = l(w) mod 2` on every enumerated `w` in `I_*`.
    pub fn verify_phi_parity(&self) -> Result<Vec<VerificationRecord>> {
        let zeta = self.zeta()?;
        self.module
            .members()
            .iter()
            .map(|&w| {
                let lhs = (zeta.phi(w)? % 2) as i64;
                let rhs = i64::from(self.ball.length(w) % 2);
                Ok(self
                    .rec
                    .rec(Check::Coset, "phi-parity", &[], Value::int(lhs), Value::int(rhs))
                    .w(self.ball.word(w)))
            })
            .collect()
    }

    /// The identities on one double coset `W_J mu W_J`.
    pub fn verify_coset(&self, mu: &[i64]) -> Result<CosetReport> {
        let sys = &*self.sys;
        let c = DoubleCoset::new(sys, &self.w_j, mu)?;
        let rec = |identity: &str, lhs: Value, rhs: Value| self.rec.rec(Check::Coset, identity, mu, lhs, rhs);
        let q_pow = |l: u32, negate: bool| {
            let c: i64 = if negate && l % 2 == 1 { -1 } else { 1 };
            LaurentPoly::monomial(c, i64::from(l))
        };

        let p_j = self.w_j.poincare().clone();
        let p_j_star = self.w_j.twisted_poincare(|x| sys.star(x));
        let n_j = self.w_j.n_odd() as i64;
        let star_perm = star_permutation(sys);
        let mut h_star: Vec<usize> = c.h.iter().map(|&s| star_perm[s]).collect();
        h_star.sort_unstable();
        let w_h = Parabolic::new(sys, &c.h)?;
        let w_hs = Parabolic::new(sys, &h_star)?;
        let n_hs = w_hs.n_odd() as i64;
        let b_inv = sys.inverse(&c.b);
        let eps = |y: &AffineElement| sys.mul(&sys.mul(&b_inv, &sys.star(y)), &c.b);
        let p_hs = w_hs.poincare().clone();
        let p_hs_eps = w_hs.twisted_poincare(eps);

        let mut zeta_sum = RationalFn::zero();
        let mut len_sum = LaurentPoly::zero();
        let mut signed_len_sum = LaurentPoly::zero();
        for y in &c.elements {
            let l = sys.length(y);
            len_sum += &q_pow(l, false);
            signed_len_sum += &q_pow(l, true);
            if sys.star(y) == sys.inverse(y) {
                zeta_sum = &zeta_sum + &zeta_basis(l, phi(sys, y)?);
            }
        }
        let l_b = sys.length(&c.b);
        let phi_b = phi(sys, &c.b)?;
        let zeta_b = zeta_basis(l_b, phi_b);
        let p_j_sq = p_j.substitute(Substitution::Square);
        let z_sigma_wj = ratio(p_j_sq.clone(), p_j_star.clone())?;

        let mut records = Vec::new();
        let lhs = &zeta_sum * &z_sigma_wj.inv()?;
        let rhs = ratio(signed_len_sum, p_j.neg_q())?;
        records.push(rec("zeta-of-coset-sum", Value::Ratio(lhs), Value::Ratio(rhs)));

        let lhs =
            &(&zeta_b * &RationalFn::from_poly(p_j_star.clone())) * &RationalFn::from_poly(p_hs_eps.clone()).inv()?;
        let rhs = ratio(&q_pow(l_b, true) * &p_j.neg_q(), p_hs.neg_q())?;
        records.push(rec("zeta-of-minimal-element", Value::Ratio(lhs), Value::Ratio(rhs)));

        let rhs = &zeta_b * &ratio(p_j_sq, p_hs_eps)?;
        records.push(rec("zeta-sum-factorization", Value::Ratio(zeta_sum), Value::Ratio(rhs)));

        let rhs = ratio(&q_pow(l_b, false) * &(&p_j * &p_j), p_hs.clone())?;
        records.push(rec(
            "length-sum-factorization",
            poly(&RationalFn::from_poly(len_sum)),
            poly(&rhs),
        ));

        let w_hs_long = w_hs.longest();
        let agree = w_hs
            .elements()
            .iter()
            .filter(|y| eps(y) == sys.mul(&sys.mul(w_hs_long, y), w_hs_long))
            .count();
        records.push(rec(
            "twist-is-conjugation-by-longest",
            Value::int(agree as i64),
            Value::int(w_hs.order() as i64),
        ));

        records.push(rec(
            "phi-of-minimal-element",
            Value::int(phi_b as i64),
            Value::int(n_j - n_hs),
        ));

        let e_j = self.w_j.longest_minus_one_dim() as i64;
        let e_hs = w_hs.longest_minus_one_dim() as i64;
        records.push(rec(
            "eigenspace-difference",
            Value::int(e_j - e_hs),
            Value::int(n_j - n_hs),
        ));

        let w_jl = self.w_j.longest();
        let rebuilt = sys.mul(&sys.mul(&sys.mul(w_jl, w_h.longest()), &c.b), w_jl);
        records.push(rec(
            "longest-element-factorization",
            Value::Word(sys.word_string(&c.d)),
            Value::Word(sys.word_string(&rebuilt)),
        ));

        let phi_d = phi(sys, &c.d)? as i64;
        records.push(rec("phi-of-longest-element", Value::int(phi_d), Value::int(e_j)));
        let b_whs = sys.mul(&c.b, w_hs_long);
        records.push(rec(
            "phi-of-longest-via-minimal",
            Value::int(phi_d),
            Value::int(phi(sys, &b_whs)? as i64),
        ));
        let phi_p_long = phi_prime(&h_star, w_hs_long, w_hs_long) as i64;
        records.push(rec("phi-prime-of-longest", Value::int(phi_p_long), Value::int(e_hs)));

        for z in w_hs.elements() {
            if eps(z) != sys.inverse(z) {
                continue;
            }
            let lhs = phi(sys, &sys.mul(&c.b, z))? as i64;
            let rhs = (phi_prime(&h_star, w_hs_long, z) + phi_b) as i64;
            records.push(rec("phi-additivity", Value::int(lhs), Value::int(rhs)).y(sys.word_string(z)));
        }

        Ok(CosetReport {
            mu: mu.to_vec(),
            b: c.b,
            d: c.d,
            h: c.h,
            h_star,
            records,
        })
    }

    /// Fixed points of `Ad(w_L)` and exponent identities for every proper parabolic.
    pub fn verify_parabolic_lemmas(&self) -> Result<Vec<VerificationRecord>> {
        let sys = &*self.sys;
        let n = sys.num_generators();
        let mut out = Vec::new();
        let one_plus = LaurentPoly::from_coeffs(0, [1, 1]);
        let one_minus = LaurentPoly::from_coeffs(0, [1, -1]);
        for mask in 0..(1u32 << n) - 1 {
            let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let w_l = match Parabolic::new(sys, &subset) {
                Ok(p) => p,
                Err(Error::TooLarge(g)) => {
                    warn!("skipping parabolic {g:?}: too large to enumerate");
                    continue;
                }
                Err(e) => return Err(e),
            };
            let rec = |identity: &str, lhs: Value, rhs: Value| {
                self.rec.rec(Check::Parabolic, identity, &[], lhs, rhs).subset(&subset)
            };
            let long = w_l.longest();
            let fixed = w_l.twisted_poincare(|x| sys.mul(&sys.mul(long, x), long));
            let n_l = w_l.n_odd();
            let rhs = &RationalFn::from_poly(w_l.poincare().neg_q())
                * &ratio(one_plus.clone(), one_minus.clone())?.pow(n_l as i64)?;
            out.push(rec(
                "fixed-points-of-longest-conjugation",
                poly(&RationalFn::from_poly(fixed)),
                poly(&rhs),
            ));
            out.push(rec(
                "longest-eigenspace-equals-odd-exponents",
                Value::int(w_l.longest_minus_one_dim() as i64),
                Value::int(n_l as i64),
            ));
            let prod: i64 = w_l.exponents().iter().map(|&e| i64::from(e) + 1).product();
            out.push(rec(
                "degree-product-equals-order",
                Value::int(prod),
                Value::int(w_l.order() as i64),
            ));
            let sum: i64 = w_l.exponents().iter().map(|&e| i64::from(e)).sum();
            out.push(rec(
                "exponent-sum-equals-reflections",
                Value::int(sum),
                Value::int(w_l.reflection_count(sys) as i64),
            ));
        }
        Ok(out)
    }

    /// Double cosets `W_J \ W / W_J^delta` for the module's involution, with the
    /// coset stability, membership and `P^sigma = P(-q)` checks.
    pub fn verify_diamond(&self) -> Result<Vec<VerificationRecord>> {
        let ball = &*self.ball;
        let delta = self.module.involution();
        let n = ball.len();
        let j: Vec<usize> = (1..self.sys.num_generators()).collect();
        let k = delta.on_generator(0);
        let j_delta: Vec<usize> = (0..self.sys.num_generators()).filter(|&s| s != k).collect();

        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn find(p: &mut [u32], x: u32) -> u32 {
            let mut r = x;
            while p[r as usize] != r {
                r = p[r as usize];
            }
            let mut x = x;
            while p[x as usize] != r {
                let next = p[x as usize];
                p[x as usize] = r;
                x = next;
            }
            r
        }
        for w in 0..n as u32 {
            let left = j.iter().filter_map(|&s| ball.left_mul(s, w));
            let right = j_delta.iter().filter_map(|&t| ball.right_mul(w, t));
            let nbrs: Vec<u32> = left.chain(right).collect();
            for x in nbrs {
                let (a, b) = (find(&mut parent, w), find(&mut parent, x));
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
        }
        let mut comps: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for w in 0..n as u32 {
            let r = find(&mut parent, w);
            comps.entry(r).or_default().push(w);
        }

        let delta_map = delta.on_ball(ball);
        let inverse_index = |w: u32| ball.index_of(&self.sys.inverse(ball.element(w)));
        let mut out = Vec::new();
        let mut longest = Vec::new();
        for members in comps.values() {
            let top = members.iter().map(|&w| ball.length(w)).max().unwrap();
            let tops: Vec<u32> = members.iter().copied().filter(|&w| ball.length(w) == top).collect();
            let d = tops[0];
            let complete = tops.len() == 1
                && j.iter().all(|&s| ball.is_left_descent(s, d))
                && j_delta.iter().all(|&t| ball.is_right_descent(d, t));
            if !complete {
                continue;
            }
            let word = ball.word(d);
            let comp_of = |x: u32| members.binary_search(&x).is_ok();
            let stable = members
                .iter()
                .filter(|&&w| inverse_index(delta_map[w as usize]).is_some_and(comp_of))
                .count();
            out.push(
                self.rec
                    .rec(
                        Check::Diamond,
                        "coset-stable-under-twisted-inverse",
                        &[],
                        Value::int(stable as i64),
                        Value::int(members.len() as i64),
                    )
                    .w(word.clone()),
            );
            let d_inv = inverse_index(d).map(|x| ball.word(x)).unwrap_or_default();
            out.push(
                self.rec
                    .rec(
                        Check::Diamond,
                        "longest-is-twisted-involution",
                        &[],
                        Value::Word(ball.word(delta_map[d as usize])),
                        Value::Word(d_inv),
                    )
                    .w(word),
            );
            longest.push(d);
        }
        longest.sort_by_key(|&d| (ball.length(d), d));
        for &d2 in &longest {
            for &d1 in &longest {
                if ball.length(d1) > ball.length(d2) || !ball.bruhat_leq(d1, d2) {
                    continue;
                }
                let lhs = self.module.p_sigma(d1, d2)?;
                let rhs = self.kl.kl_poly(d1, d2)?.neg_q();
                out.push(
                    self.rec
                        .rec(
                            Check::Diamond,
                            "sigma-equals-kl-at-minus-q",
                            &[],
                            Value::Poly(lhs),
                            Value::Poly(rhs),
                        )
                        .y(ball.word(d1))
                        .w(ball.word(d2)),
                );
            }
        }
        Ok(out)
    }

    /// Weight multiplicities, dimension, trace and signature against the dual group.
    pub fn verify_weight_bridge(&self, lambda: &[i64], dual: &DualRootSystem) -> Result<Vec<VerificationRecord>> {
        let sys = &*self.sys;
        let rec = |identity: &str, lhs: Value, rhs: Value| self.rec.rec(Check::Bridge, identity, lambda, lhs, rhs);
        let d = self.d_index(lambda)?;
        let diagram = dual.freudenthal(lambda)?;
        let dim = dual.weyl_dim(lambda)? as i64;
        let tz = self.tilde_z(lambda)?.as_poly().unwrap();
        let tzs = self.tilde_z_sigma(lambda)?.as_poly().unwrap();
        let rho_l = sys.rho_pairing(lambda);
        let mut out = Vec::new();

        let mut q_dim = LaurentPoly::zero();
        for mu in self.dominant_range(None) {
            let dm = self.d_index(&mu)?;
            if self.ball.length(dm) > self.ball.length(d) {
                continue;
            }
            let below_bruhat = self.ball.bruhat_leq(dm, d);
            let p1 = if below_bruhat {
                let v = self.kl.kl_poly(dm, d)?.eval_unit(1);
                i64::try_from(&v).map_err(|_| Error::Integrality("multiplicity overflow".into()))?
            } else {
                0
            };
            out.push(
                rec(
                    "multiplicity-equals-kl-at-one",
                    Value::int(diagram.mult(&mu) as i64),
                    Value::int(p1),
                )
                .mu(&mu),
            );
            let below_roots = lambda.iter().zip(&mu).all(|(l, m)| l >= m);
            out.push(
                rec(
                    "bruhat-order-matches-root-order",
                    Value::int(below_bruhat as i64),
                    Value::int(below_roots as i64),
                )
                .mu(&mu),
            );
            if below_bruhat && p1 != 0 {
                for nu in dual.orbit(&mu) {
                    q_dim += &LaurentPoly::monomial(p1, sys.rho_pairing(&nu));
                }
            }
        }
        out.push(rec(
            "q-dimension-formula",
            Value::Poly(tz.clone()),
            Value::Poly(q_dim.shift(rho_l)),
        ));
        let dim_val = |p: &LaurentPoly| i64::try_from(&p.eval_unit(1)).unwrap_or(i64::MAX);
        out.push(rec("dimension", Value::int(dim_val(&tz)), Value::int(dim)));
        out.push(rec(
            "weight-count-equals-dimension",
            Value::int(diagram.dim() as i64),
            Value::int(dim),
        ));
        let trace = dual.trace_minus_one_rho(lambda)?;
        out.push(rec(
            "trace-by-orbits",
            Value::int(trace),
            Value::int(dual.trace_by_orbits(lambda)?),
        ));
        let at_minus_one = i64::try_from(&tz.eval_unit(-1)).unwrap_or(i64::MAX);
        out.push(rec(
            "value-at-minus-one",
            Value::int(at_minus_one),
            Value::int(sign(rho_l) * trace),
        ));
        out.push(rec(
            "signature",
            Value::int(dual.signature(lambda)?),
            Value::int(dim_val(&tzs)),
        ));
        Ok(out)
    }

    /// Two-route agreement for KL polynomials, the Bruhat order, `I_delta` and the module relations.
    pub fn verify_oracles(&self) -> Result<Vec<VerificationRecord>> {
        let ball = &*self.ball;
        let oracle = KlOracle::new(self.ball.clone());
        let in_range: Vec<u32> = (0..ball.len() as u32)
            .filter(|&w| ball.length(w) <= self.max_len)
            .collect();
        let per_w: Vec<Vec<VerificationRecord>> = in_range
            .par_iter()
            .map(|&w| -> Result<Vec<VerificationRecord>> {
                let mut out = Vec::new();
                let primary = self.kl.row(w);
                let other = oracle.kl_row(w)?;
                for y in ball.lower_interval(w) {
                    let a = primary.get(&y).cloned().unwrap_or_default();
                    let b = other.get(&y).cloned().unwrap_or_default();
                    out.push(
                        self.rec
                            .rec(Check::Oracles, "kl-two-routes", &[], Value::Poly(a), Value::Poly(b))
                            .y(ball.word(y))
                            .w(ball.word(w)),
                    );
                }
                let mismatches = (0..ball.len() as u32)
                    .filter(|&y| ball.bruhat_leq(y, w) != ball.interval_contains(w, y))
                    .count();
                out.push(
                    self.rec
                        .rec(
                            Check::Oracles,
                            "bruhat-two-routes",
                            &[],
                            Value::int(mismatches as i64),
                            Value::int(0),
                        )
                        .w(ball.word(w)),
                );
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let mut out: Vec<VerificationRecord> = per_w.into_iter().flatten().collect();

        let closure = self.module.members().to_vec();
        let brute = self.module.brute_force_members();
        let differ = closure.len().abs_diff(brute.len()) + closure.iter().zip(&brute).filter(|(a, b)| a != b).count();
        out.push(self.rec.rec(
            Check::Oracles,
            "twisted-involutions-two-routes",
            &[],
            Value::int(differ as i64),
            Value::int(0),
        ));
        let n_gens = self.sys.num_generators();
        for &w in &closure {
            let bar = self.module.bar_basis(w)?;
            let mut twice = self.module.bar(&bar)?;
            twice.add_scaled(&MElement::basis(w), &-LaurentPoly::one());
            out.push(
                self.rec
                    .rec(
                        Check::Oracles,
                        "bar-is-involution",
                        &[],
                        Value::int(twice.terms().count() as i64),
                        Value::int(0),
                    )
                    .w(ball.word(w)),
            );
            if ball.length(w) + 2 > self.max_len {
                continue;
            }
            let defects = (0..n_gens)
                .map(|s| self.module.quadratic_defect(s, w).map(|m| !m.is_zero()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|&bad| bad)
                .count();
            out.push(
                self.rec
                    .rec(
                        Check::Oracles,
                        "quadratic-relation",
                        &[],
                        Value::int(defects as i64),
                        Value::int(0),
                    )
                    .w(ball.word(w)),
            );
        }
        Ok(out)
    }

    /// Runs the selected checks over every dominant `lambda` in range; records sorted.
    pub fn verify_all(&self, checks: &[Check], height: Option<u32>) -> Result<Vec<VerificationRecord>> {
        let id = self.involution();
        for c in checks {
            if !c.applies_to(id) {
                return Err(Error::Config(format!("check {c} needs the involution *, not {id}")));
            }
        }
        self.fill()?;
        let has = |c: Check| checks.contains(&c);
        let lambdas = self.dominant_range(height);
        info!("{} dominant coweights in range", lambdas.len());
        let dual = has(Check::Bridge).then(|| DualRootSystem::new(self.sys.clone()));
        let per_lambda: Vec<Vec<VerificationRecord>> = lambdas
            .par_iter()
            .map(|lambda| -> Result<Vec<VerificationRecord>> {
                info!("checking lambda = {lambda:?}");
                let mut out = Vec::new();
                if has(Check::Main) {
                    for mu in &lambdas {
                        if self.ball.bruhat_leq(self.d_index(mu)?, self.d_index(lambda)?) {
                            out.push(self.verify_main(mu, lambda)?);
                        }
                    }
                }
                if has(Check::Z) {
                    out.push(self.verify_z(lambda)?);
                }
                if has(Check::Coset) {
                    out.extend(self.verify_coset(lambda)?.records);
                }
                if let Some(dual) = &dual {
                    out.extend(self.verify_weight_bridge(lambda, dual)?);
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let mut out: Vec<VerificationRecord> = per_lambda.into_iter().flatten().collect();
        if has(Check::Z) {
            out.extend(self.verify_finite_part()?);
        }
        if has(Check::Coset) {
            out.extend(self.verify_phi_parity()?);
        }
        if has(Check::Parabolic) {
            out.extend(self.verify_parabolic_lemmas()?);
        }
        if has(Check::Diamond) {
            out.extend(self.verify_diamond()?);
        }
        if has(Check::Oracles) {
            out.extend(self.verify_oracles()?);
        }
        sort_records(&mut out);
        Ok(out)
    }
}

/// Counts of passing and failing records per check.
pub fn summarize(records: &[VerificationRecord]) -> BTreeMap<Check, (usize, usize)> {
    let mut out: BTreeMap<Check, (usize, usize)> = BTreeMap::new();
    for r in records {
        let e = out.entry(r.check).or_default();
        if r.pass {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    out
}
