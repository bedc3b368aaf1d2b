//! Finite standard parabolic subgroups `W_H`, `H` a proper subset of `S`.

use std::collections::{HashMap, HashSet};

use super::affine::{AffineElement, AffineSystem};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::LaurentPoly;

/// Refuse to enumerate parabolic subgroups larger than this.
pub const ENUMERATION_LIMIT: usize = 200_000;

/// Largest degree tried when factoring a Poincare polynomial into `[d]_q` factors.
const MAX_DEGREE: u32 = 40;

#[derive(Debug, Clone)]
pub struct Parabolic {
    gens: Vec<usize>,
    elements: Vec<AffineElement>,
    lengths: Vec<u32>,
    longest: usize,
    poincare: LaurentPoly,
    exponents: Vec<u32>,
}

impl Parabolic {
    /// Enumerates `W_H` by closure under right multiplication.
    pub fn new(sys: &AffineSystem, gens: &[usize]) -> Result<Self> {
        let mut gens = gens.to_vec();
        gens.sort_unstable();
        gens.dedup();
        if gens.len() >= sys.num_generators() || gens.iter().any(|&s| s >= sys.num_generators()) {
            return Err(Error::InfiniteParabolic(gens));
        }
        let e = sys.identity();
        let mut elements = vec![e.clone()];
        let mut seen: HashSet<AffineElement> = HashSet::from([e]);
        let mut i = 0;
        while i < elements.len() {
            for &s in &gens {
                let x = sys.mul_gen_right(&elements[i], s);
                if seen.insert(x.clone()) {
                    elements.push(x);
                    if elements.len() > ENUMERATION_LIMIT {
                        return Err(Error::TooLarge(gens));
                    }
                }
            }
            i += 1;
        }
        let lengths: Vec<u32> = elements.iter().map(|w| sys.length(w)).collect();
        let top = *lengths.iter().max().unwrap();
        let longest_candidates: Vec<usize> = (0..elements.len()).filter(|&k| lengths[k] == top).collect();
        assert_eq!(
            longest_candidates.len(),
            1,
            "finite Coxeter group has a unique longest element"
        );
        let poincare = LaurentPoly::from_terms(lengths.iter().map(|&l| (i64::from(l), 1)));
        let degrees = factor_degrees(&poincare, gens.len())
            .ok_or_else(|| Error::Domain(format!("no degree factorization of {poincare} for {gens:?}")))?;
        Ok(Self {
            gens,
            elements,
            lengths,
            longest: longest_candidates[0],
            poincare,
            exponents: degrees.into_iter().map(|d| d - 1).collect(),
        })
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn elements(&self) -> &[AffineElement] {
        &self.elements
    }

    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn longest(&self) -> &AffineElement {
        &self.elements[self.longest]
    }

    pub fn contains(&self, w: &AffineElement) -> bool {
        self.elements.contains(w)
    }

    /// `P_H = sum_{x in W_H} q^{l(x)}`
    pub fn poincare(&self) -> &LaurentPoly {
        &self.poincare
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Number of odd exponents.
    pub fn n_odd(&self) -> usize {
        self.exponents.iter().filter(|&&e| e % 2 == 1).count()
    }

    /// `sum_{x in W_H, theta(x) = x} q^{l(x)}`
    pub fn twisted_poincare(&self, theta: impl Fn(&AffineElement) -> AffineElement) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.elements
                .iter()
                .zip(&self.lengths)
                .filter(|(x, _)| theta(x) == **x)
                .map(|(_, &l)| (i64::from(l), 1)),
        )
    }

    /// Number of reflections, counted as distinct conjugates of the generators.
    pub fn reflection_count(&self, sys: &AffineSystem) -> usize {
        let mut refl = HashSet::new();
        for w in &self.elements {
            let inv = sys.inverse(w);
            for &s in &self.gens {
                refl.insert(sys.mul(&sys.mul_gen_right(w, s), &inv));
            }
        }
        refl.len()
    }

    /// Dimension of the `(-1)`-eigenspace of the linear part of `w_H` on `Lambda_Q`.
    pub fn longest_minus_one_dim(&self) -> usize {
        linalg::minus_one_eigenspace_dim(&self.longest().fin().matrix())
    }

    /// Index lookup for elements of this subgroup.
    pub fn index_map(&self) -> HashMap<AffineElement, usize> {
        self.elements.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect()
    }
}

/// `[d]_q = 1 + q + ... + q^{d-1}`
pub fn q_integer(d: u32) -> LaurentPoly {
    LaurentPoly::from_coeffs(0, std::iter::repeat_n(1, d as usize))
}

/// Finds the multiset `{d_i}` (size `count`, each `2 <= d_i <= 40`) with
/// `prod [d_i]_q = p`, searching in nondecreasing order.
pub fn factor_degrees(p: &LaurentPoly, count: usize) -> Option<Vec<u32>> {
    fn rec(rem: &LaurentPoly, count: usize, min: u32, acc: &mut Vec<u32>) -> bool {
        if count == 0 {
            return rem.is_one();
        }
        let deg = rem.max_exp().unwrap_or(0);
        for d in min..=MAX_DEGREE {
            // remaining factors each contribute at least d - 1 to the degree
            if i64::from(d - 1) * count as i64 > deg {
                break;
            }
            if let Some(q) = rem.div_exact(&q_integer(d)) {
                acc.push(d);
                if rec(&q, count - 1, d, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut acc = Vec::new();
    rec(p, count, 2, &mut acc).then_some(acc)
}
