//! Weight multiplicities, dimensions and the trace of `(-1)^rho` for the dual
//! group, whose roots are the coroots of the affine system's finite part.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use parking_lot::RwLock;

use crate::coxeter::AffineSystem;
use crate::error::{Error, Result};

/// Multiplicities `nu -> m_lambda(nu)` of the irreducible module of highest weight `lambda`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDiagram {
    pub lambda: Vec<i64>,
    pub mults: BTreeMap<Vec<i64>, u64>,
}

impl WeightDiagram {
    pub fn mult(&self, nu: &[i64]) -> u64 {
        self.mults.get(nu).copied().unwrap_or(0)
    }

    pub fn dim(&self) -> u64 {
        self.mults.values().sum()
    }
}

/// Root data of the dual group on the coroot lattice.
pub struct DualRootSystem {
    sys: Arc<AffineSystem>,
    /// Positive roots of the dual group (positive coroots), simple-coroot coordinates.
    roots: Vec<Vec<i64>>,
    /// Sum of the positive roots of the dual group.
    two_rho_dual: Vec<i64>,
    form: Vec<Vec<i64>>,
    diagrams: RwLock<HashMap<Vec<i64>, Arc<WeightDiagram>>>,
}

/// Symmetric `B` on simple coroots with `2 B_ji / B_ii = <alpha_i, alpha_j^vee>`,
/// scaled so the shortest coroots have `B_ii = 2`.
pub fn invariant_form(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = cartan.len();
    let mut diag: Vec<Option<BigRational>> = vec![None; r];
    diag[0] = Some(BigRational::from_integer(1.into()));
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let di = diag[i].clone().unwrap();
        for j in 0..r {
            if i == j || cartan[i][j] == 0 || diag[j].is_some() {
                continue;
            }
            // a_ji B_ii = a_ij B_jj
            let dj = di.clone() * BigRational::from_integer(cartan[j][i].into())
                / BigRational::from_integer(cartan[i][j].into());
            diag[j] = Some(dj);
            queue.push_back(j);
        }
    }
    let diag: Vec<BigRational> = diag.into_iter().map(|d| d.expect("connected diagram")).collect();
    let min = diag.iter().min().unwrap().clone();
    let scaled: Vec<BigRational> = diag
        .iter()
        .map(|d| d / &min * BigRational::from_integer(2.into()))
        .collect();
    let mut out = vec![vec![0i64; r]; r];
    for i in 0..r {
        for j in 0..r {
            let v = &scaled[i] * BigRational::from_integer(cartan[j][i].into()) / BigRational::from_integer(2.into());
            assert!(v.is_integer(), "invariant form is integral");
            out[j][i] = i64::try_from(v.to_integer()).unwrap();
        }
    }
    for i in 0..r {
        for j in 0..r {
            assert_eq!(out[i][j], out[j][i], "invariant form is symmetric");
        }
    }
    out
}

impl DualRootSystem {
    pub fn new(sys: Arc<AffineSystem>) -> Self {
        let roots = sys.root_data().pos_coroots.clone();
        let r = sys.rank();
        let mut two_rho_dual = vec![0i64; r];
        for beta in &roots {
            for (x, b) in two_rho_dual.iter_mut().zip(beta) {
                *x += b;
            }
        }
        let form = invariant_form(sys.cartan());
        Self {
            sys,
            roots,
            two_rho_dual,
            form,
            diagrams: RwLock::new(HashMap::new()),
        }
    }

    pub fn system(&self) -> &Arc<AffineSystem> {
        &self.sys
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn invariant_form(&self) -> &[Vec<i64>] {
        &self.form
    }

    /// `<rho, nu>` with `rho` the half-sum of positive roots of the original group.
    pub fn rho_pairing(&self, nu: &[i64]) -> i64 {
        self.sys.rho_pairing(nu)
    }

    fn require_dominant(&self, lambda: &[i64]) -> Result<()> {
        let ok =
            lambda.len() == self.sys.rank() && (1..=self.sys.rank()).all(|i| self.sys.simple_pairing(i, lambda) >= 0);
        if ok {
            Ok(())
        } else {
            Err(Error::NotDominant(format!("{lambda:?}")))
        }
    }

    /// The `W_J`-orbit of `nu`, sorted.
    pub fn orbit(&self, nu: &[i64]) -> Vec<Vec<i64>> {
        let mut seen = BTreeSet::from([nu.to_vec()]);
        let mut queue = VecDeque::from([nu.to_vec()]);
        while let Some(x) = queue.pop_front() {
            for i in 1..=self.sys.rank() {
                let c = self.sys.simple_pairing(i, &x);
                if c == 0 {
                    continue;
                }
                let mut y = x.clone();
                y[i - 1] -= c;
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// The dominant element of the `W_J`-orbit of `nu`.
    pub fn dominant_conjugate(&self, nu: &[i64]) -> Vec<i64> {
        let mut x = nu.to_vec();
        'outer: loop {
            for i in 1..=self.sys.rank() {
                let c = self.sys.simple_pairing(i, &x);
                if c < 0 {
                    x[i - 1] -= c;
                    continue 'outer;
                }
            }
            return x;
        }
    }

    fn pair(form: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                acc += xi * form[i][j] * yj;
            }
        }
        acc
    }

    pub fn freudenthal(&self, lambda: &[i64]) -> Result<Arc<WeightDiagram>> {
        if let Some(d) = self.diagrams.read().get(lambda) {
            return Ok(d.clone());
        }
        let d = Arc::new(self.freudenthal_with_form(lambda, &self.form)?);
        Ok(self.diagrams.write().entry(lambda.to_vec()).or_insert(d).clone())
    }

    /// Freudenthal's recursion descending from `lambda` level by level, with an
    /// arbitrary `W_J`-invariant form.
    pub fn freudenthal_with_form(&self, lambda: &[i64], form: &[Vec<i64>]) -> Result<WeightDiagram> {
        self.require_dominant(lambda)?;
        let r = self.sys.rank();
        let norm = |x: &[i64]| Self::pair(form, x, x);
        let shifted = |x: &[i64]| -> i64 {
            // (x + rho', x + rho') - (rho', rho')
            norm(x) + Self::pair(form, x, &self.two_rho_dual)
        };
        let top = shifted(lambda);
        let mut mults: BTreeMap<Vec<i64>, u64> = BTreeMap::from([(lambda.to_vec(), 1)]);
        let mut level: BTreeSet<Vec<i64>> = BTreeSet::from([lambda.to_vec()]);
        while !level.is_empty() {
            let mut next = BTreeSet::new();
            for nu in &level {
                for i in 0..r {
                    let mut cand = nu.clone();
                    cand[i] -= 1;
                    next.insert(cand);
                }
            }
            let mut kept = BTreeSet::new();
            for nu in next {
                let dom = self.dominant_conjugate(&nu);
                if lambda.iter().zip(&dom).any(|(l, d)| l < d) {
                    continue;
                }
                let den = top - shifted(&nu);
                if den <= 0 {
                    return Err(Error::Integrality(format!(
                        "non-positive Freudenthal denominator at {nu:?} for {lambda:?}"
                    )));
                }
                let mut num = 0i64;
                for beta in &self.roots {
                    let mut x: Vec<i64> = nu.iter().zip(beta).map(|(a, b)| a + b).collect();
                    while let Some(&m) = mults.get(&x) {
                        num += m as i64 * Self::pair(form, &x, beta);
                        for (xi, b) in x.iter_mut().zip(beta) {
                            *xi += b;
                        }
                    }
                }
                let (q, rem) = (2 * num).div_rem(&den);
                if rem != 0 || q < 0 {
                    return Err(Error::Integrality(format!(
                        "Freudenthal multiplicity {}/{} at {nu:?} for {lambda:?}",
                        2 * num,
                        den
                    )));
                }
                if q > 0 {
                    mults.insert(nu.clone(), q as u64);
                    kept.insert(nu);
                }
            }
            level = kept;
        }
        Ok(WeightDiagram {
            lambda: lambda.to_vec(),
            mults,
        })
    }

    /// Weyl's product formula over the positive roots of the dual group.
    pub fn weyl_dim(&self, lambda: &[i64]) -> Result<u64> {
        self.require_dominant(lambda)?;
        let rd = self.sys.root_data();
        let two_rho_dual = &self.two_rho_dual;
        let mut acc = BigRational::from_integer(1.into());
        // coroots of the dual group are the roots of the original one
        for alpha in &rd.pos_roots {
            let f = rd.functional(alpha);
            let pair = |x: &[i64]| -> i64 { f.iter().zip(x).map(|(a, b)| a * b).sum() };
            let num = 2 * pair(lambda) + pair(two_rho_dual);
            let den = pair(two_rho_dual);
            acc *= BigRational::new(num.into(), den.into());
        }
        if !acc.is_integer() {
            return Err(Error::Integrality(format!("Weyl dimension {acc} for {lambda:?}")));
        }
        u64::try_from(acc.to_integer())
            .map_err(|_| Error::Integrality(format!("Weyl dimension overflow for {lambda:?}")))
    }

    /// `tr((-1)^rho, V_lambda) = sum_nu m(nu) (-1)^{<rho,nu>}`
    pub fn trace_minus_one_rho(&self, lambda: &[i64]) -> Result<i64> {
        let d = self.freudenthal(lambda)?;
        Ok(d.mults
            .iter()
            .map(|(nu, &m)| sign(self.rho_pairing(nu)) * m as i64)
            .sum())
    }

    /// The same trace summed over dominant orbit representatives.
    pub fn trace_by_orbits(&self, lambda: &[i64]) -> Result<i64> {
        let d = self.freudenthal(lambda)?;
        let mut acc = 0;
        for (nu, &m) in &d.mults {
            if self.dominant_conjugate(nu) != *nu {
                continue;
            }
            let orbit_sum: i64 = self.orbit(nu).iter().map(|x| sign(self.rho_pairing(x))).sum();
            acc += m as i64 * orbit_sum;
        }
        Ok(acc)
    }

    /// `(-1)^{<rho,lambda>} tr((-1)^rho, V_lambda)`
    pub fn signature(&self, lambda: &[i64]) -> Result<i64> {
        Ok(sign(self.rho_pairing(lambda)) * self.trace_minus_one_rho(lambda)?)
    }
}

/// `(-1)^n`
pub fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dual(name: &str) -> DualRootSystem {
        DualRootSystem::new(Arc::new(AffineSystem::from_name(name).unwrap()))
    }

    #[test]
    fn rank_one() {
        let g = dual("A1");
        let d = g.freudenthal(&[1]).unwrap();
        assert_eq!(d.mults, BTreeMap::from([(vec![-1], 1), (vec![0], 1), (vec![1], 1)]));
        for n in 0..5 {
            assert_eq!(g.weyl_dim(&[n]).unwrap(), 2 * n as u64 + 1);
            assert_eq!(g.freudenthal(&[n]).unwrap().dim(), 2 * n as u64 + 1);
        }
        assert_eq!(g.trace_minus_one_rho(&[1]).unwrap(), -1);
        assert_eq!(g.signature(&[1]).unwrap(), 1);
    }

    #[test]
    fn pgl3_adjoint() {
        let g = dual("A2");
        let d = g.freudenthal(&[1, 1]).unwrap();
        assert_eq!(d.mult(&[0, 0]), 2);
        assert_eq!(d.mult(&[1, 0]), 1);
        assert_eq!(d.dim(), 8);
        assert_eq!(g.weyl_dim(&[1, 1]).unwrap(), 8);
        assert_eq!(g.trace_minus_one_rho(&[1, 1]).unwrap(), 0);
        assert_eq!(g.signature(&[1, 1]).unwrap(), 0);
        assert!(g.freudenthal(&[-1, 1]).is_err());
    }

    #[test]
    fn dims_and_forms_agree() {
        for name in ["A3", "C2", "C3", "G2", "D4", "F4", "B3", "E6"] {
            let g = dual(name);
            let r = g.system().rank();
            let scaled: Vec<Vec<i64>> = g
                .invariant_form()
                .iter()
                .map(|row| row.iter().map(|x| 3 * x).collect())
                .collect();
            let mut lams = vec![vec![0; r], g.system().highest_coroot().to_vec()];
            for i in 0..r {
                let mut e = vec![0; r];
                e[i] = 1;
                lams.push(e);
            }
            for lam in lams {
                if g.require_dominant(&lam).is_err() {
                    continue;
                }
                let d = g.freudenthal(&lam).unwrap();
                assert_eq!(d.dim(), g.weyl_dim(&lam).unwrap(), "{name} {lam:?}");
                assert_eq!(*d, g.freudenthal_with_form(&lam, &scaled).unwrap());
                assert_eq!(g.trace_minus_one_rho(&lam).unwrap(), g.trace_by_orbits(&lam).unwrap());
                assert!(g.signature(&lam).unwrap().unsigned_abs() <= d.dim());
                for (nu, &m) in &d.mults {
                    assert_eq!(m, d.mult(&g.dominant_conjugate(nu)));
                }
            }
        }
    }
}
