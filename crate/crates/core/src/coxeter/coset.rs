//! The double cosets `W_J mu W_J` of dominant translations.

use std::collections::BTreeSet;

use super::affine::{AffineElement, AffineSystem};
use super::parabolic::Parabolic;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct DoubleCoset {
    pub mu: Vec<i64>,
    /// Sorted by `(length, element)`.
    pub elements: Vec<AffineElement>,
    /// Unique element of minimal length.
    pub b: AffineElement,
    /// Unique element of maximal length, `d_mu`.
    pub d: AffineElement,
    /// `H = J cap b J b^{-1}`, as generator indices.
    pub h: Vec<usize>,
}

/// `J = S - {s_0}` as a parabolic subgroup.
pub fn finite_weyl_group(sys: &AffineSystem) -> Result<Parabolic> {
    let j: Vec<usize> = (1..sys.num_generators()).collect();
    Parabolic::new(sys, &j)
}

impl DoubleCoset {
    pub fn new(sys: &AffineSystem, w_j: &Parabolic, mu: &[i64]) -> Result<Self> {
        if !sys.is_dominant(mu) {
            return Err(Error::NotDominant(format!("{mu:?}")));
        }
        let t = sys.translation(mu);
        let mut set = BTreeSet::new();
        for u in w_j.elements() {
            let ut = sys.mul(u, &t);
            for v in w_j.elements() {
                set.insert(sys.mul(&ut, v));
            }
        }
        let mut elements: Vec<(u32, AffineElement)> = set.into_iter().map(|w| (sys.length(&w), w)).collect();
        elements.sort();
        let min_len = elements[0].0;
        let max_len = elements.last().unwrap().0;
        assert_eq!(
            elements.iter().filter(|(l, _)| *l == min_len).count(),
            1,
            "unique minimal element"
        );
        assert_eq!(
            elements.iter().filter(|(l, _)| *l == max_len).count(),
            1,
            "unique maximal element"
        );
        let b = elements[0].1.clone();
        let d = elements.last().unwrap().1.clone();
        assert_eq!(d, sys.d_lambda(mu)?, "longest element is d_mu");

        let b_inv = sys.inverse(&b);
        let conj = |s: usize| sys.mul(&sys.mul(&b_inv, sys.generator(s)), &b);
        let h: Vec<usize> = w_j
            .generators()
            .iter()
            .copied()
            .filter(|&s| w_j.generators().iter().any(|&t| sys.generator(t) == &conj(s)))
            .collect();
        let h_wide: Vec<usize> = w_j
            .generators()
            .iter()
            .copied()
            .filter(|&s| conj(s).in_finite_part())
            .collect();
        assert_eq!(h, h_wide, "J cap bJb^-1 agrees with {{s in J : b^-1 s b in W_J}}");

        Ok(Self {
            mu: mu.to_vec(),
            elements: elements.into_iter().map(|(_, w)| w).collect(),
            b,
            d,
            h,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_cosets() {
        let sys = AffineSystem::from_name("A1").unwrap();
        let wj = finite_weyl_group(&sys).unwrap();
        let c0 = DoubleCoset::new(&sys, &wj, &[0]).unwrap();
        assert_eq!(c0.len(), 2);
        assert_eq!(c0.b, sys.identity());
        assert_eq!(c0.d, sys.w_j());
        assert_eq!(c0.h, vec![1]);

        let c1 = DoubleCoset::new(&sys, &wj, &[1]).unwrap();
        let words: Vec<String> = c1.elements.iter().map(|w| sys.word_string(w)).collect();
        assert_eq!(words.len(), 4);
        for w in ["s0", "s0s1", "s1s0", "s1s0s1"] {
            assert!(words.contains(&w.to_string()), "{w}");
        }
        assert_eq!(sys.word_string(&c1.b), "s0");
        assert_eq!(sys.word_string(&c1.d), "s1s0s1");
        assert!(c1.h.is_empty());
        assert!(DoubleCoset::new(&sys, &wj, &[-1]).is_err());
    }

    #[test]
    fn coset_sizes() {
        for name in ["A2", "C2", "G2"] {
            let sys = AffineSystem::from_name(name).unwrap();
            let wj = finite_weyl_group(&sys).unwrap();
            for mu in sys.dominant_list(3) {
                let c = DoubleCoset::new(&sys, &wj, &mu).unwrap();
                let wh = Parabolic::new(&sys, &c.h).unwrap();
                assert_eq!(c.len() * wh.order(), wj.order() * wj.order(), "{name} {mu:?}");
            }
        }
    }
}
