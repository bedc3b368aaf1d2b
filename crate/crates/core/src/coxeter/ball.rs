//! Length-bounded enumeration of `W`, multiplication tables and the Bruhat order.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use parking_lot::RwLock;

use super::affine::{AffineElement, AffineSystem};
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

/// All elements of length at most `max_len`, interned as indices in BFS order.
///
/// BFS order is stable under increasing `max_len`: a smaller ball is a prefix
/// of a larger one.
pub struct Ball {
    sys: Arc<AffineSystem>,
    max_len: u32,
    elems: Vec<AffineElement>,
    bfs_level: Vec<u32>,
    lengths: Vec<u32>,
    index: HashMap<AffineElement, u32>,
    left: Vec<Vec<u32>>,
    right: Vec<Vec<u32>>,
    bruhat_memo: RwLock<HashMap<(u32, u32), bool>>,
    intervals: OnceLock<Vec<FixedBitSet>>,
}

impl Ball {
    pub fn new(sys: Arc<AffineSystem>, max_len: u32) -> Self {
        Self::with_limit(sys, max_len, usize::MAX).expect("no element limit")
    }

    /// Like [`Ball::new`], giving up once more than `limit` elements are found.
    pub fn with_limit(sys: Arc<AffineSystem>, max_len: u32, limit: usize) -> Result<Self> {
        let n_gens = sys.num_generators();
        let e = sys.identity();
        let mut elems = vec![e.clone()];
        let mut bfs_level = vec![0];
        let mut index = HashMap::from([(e, 0u32)]);
        let mut frontier = 0..1;
        for level in 1..=max_len {
            let start = elems.len();
            for i in frontier.clone() {
                for s in 0..n_gens {
                    let x = sys.mul_gen_right(&elems[i], s);
                    if !index.contains_key(&x) {
                        index.insert(x.clone(), elems.len() as u32);
                        elems.push(x);
                        bfs_level.push(level);
                    }
                }
            }
            frontier = start..elems.len();
            if elems.len() > limit {
                return Err(Error::BudgetExceeded(format!(
                    "more than {limit} elements of length at most {max_len}"
                )));
            }
        }
        let lengths: Vec<u32> = elems.iter().map(|w| sys.length(w)).collect();
        let table = |left_side: bool| -> Vec<Vec<u32>> {
            (0..n_gens)
                .map(|s| {
                    elems
                        .iter()
                        .map(|w| {
                            let x = if left_side {
                                sys.mul_gen_left(s, w)
                            } else {
                                sys.mul_gen_right(w, s)
                            };
                            index.get(&x).copied().unwrap_or(NONE)
                        })
                        .collect()
                })
                .collect()
        };
        let left = table(true);
        let right = table(false);
        Ok(Self {
            sys,
            max_len,
            elems,
            bfs_level,
            lengths,
            index,
            left,
            right,
            bruhat_memo: RwLock::new(HashMap::new()),
            intervals: OnceLock::new(),
        })
    }

    pub fn system(&self) -> &Arc<AffineSystem> {
        &self.sys
    }

    pub fn max_len(&self) -> u32 {
        self.max_len
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn element(&self, i: u32) -> &AffineElement {
        &self.elems[i as usize]
    }

    pub fn elements(&self) -> &[AffineElement] {
        &self.elems
    }

    pub fn length(&self, i: u32) -> u32 {
        self.lengths[i as usize]
    }

    pub fn index_of(&self, w: &AffineElement) -> Option<u32> {
        self.index.get(w).copied()
    }

    /// Index of `w`, or an out-of-range error.
    pub fn require(&self, w: &AffineElement) -> Result<u32> {
        self.index_of(w)
            .ok_or_else(|| Error::OutOfRange(self.sys.word_string(w), self.max_len))
    }

    pub fn word(&self, i: u32) -> String {
        self.sys.word_string(self.element(i))
    }

    /// `s * w` when it lies in the ball.
    pub fn left_mul(&self, s: usize, i: u32) -> Option<u32> {
        let j = self.left[s][i as usize];
        (j != NONE).then_some(j)
    }

    /// `w * s` when it lies in the ball.
    pub fn right_mul(&self, i: u32, s: usize) -> Option<u32> {
        let j = self.right[s][i as usize];
        (j != NONE).then_some(j)
    }

    pub fn is_left_descent(&self, s: usize, i: u32) -> bool {
        self.left_mul(s, i).is_some_and(|j| self.length(j) < self.length(i))
    }

    pub fn is_right_descent(&self, i: u32, s: usize) -> bool {
        self.right_mul(i, s).is_some_and(|j| self.length(j) < self.length(i))
    }

    pub fn first_left_descent(&self, i: u32) -> Option<usize> {
        (0..self.sys.num_generators()).find(|&s| self.is_left_descent(s, i))
    }

    /// Indices whose formula length differs from their BFS distance (expected empty).
    pub fn length_mismatches(&self) -> Vec<u32> {
        (0..self.len() as u32)
            .filter(|&i| self.lengths[i as usize] != self.bfs_level[i as usize])
            .collect()
    }

    /// Elements of length exactly `l`, in index order.
    pub fn of_length(&self, l: u32) -> impl Iterator<Item = u32> + '_ {
        (0..self.len() as u32).filter(move |&i| self.length(i) == l)
    }

    /// Bruhat order by the descent recursion `y <= w iff min(y, sy) <= sw` for `sw < w`.
    pub fn bruhat_leq(&self, y: u32, w: u32) -> bool {
        let (ly, lw) = (self.length(y), self.length(w));
        if ly > lw {
            return false;
        }
        if y == w {
            return true;
        }
        if ly == lw {
            return false;
        }
        if let Some(&hit) = self.bruhat_memo.read().get(&(y, w)) {
            return hit;
        }
        let s = self.first_left_descent(w).expect("w != e has a descent");
        let sw = self.left_mul(s, w).unwrap();
        // sy has length <= l(y) + 1 <= l(w), so it is in the ball
        let sy = self.left_mul(s, y).expect("sy within range");
        let low = if self.length(sy) < ly { sy } else { y };
        let out = self.bruhat_leq(low, sw);
        self.bruhat_memo.write().insert((y, w), out);
        out
    }

    /// `[e, w]` for every `w`, built from `[e,w] = [e,sw] u s[e,sw]` when `sw < w`.
    pub fn intervals(&self) -> &[FixedBitSet] {
        self.intervals.get_or_init(|| {
            let n = self.len();
            let mut order: Vec<u32> = (0..n as u32).collect();
            order.sort_by_key(|&i| self.length(i));
            let mut out = vec![FixedBitSet::new(); n];
            for w in order {
                let mut set = FixedBitSet::with_capacity(n);
                match self.first_left_descent(w) {
                    None => set.insert(w as usize),
                    Some(s) => {
                        let sw = self.left_mul(s, w).unwrap();
                        let lower = &out[sw as usize];
                        set.union_with(lower);
                        for y in lower.ones() {
                            set.insert(self.left_mul(s, y as u32).unwrap() as usize);
                        }
                    }
                }
                out[w as usize] = set;
            }
            out
        })
    }

    /// The Bruhat interval `[e, w]` sorted by `(length, index)`.
    pub fn lower_interval(&self, w: u32) -> Vec<u32> {
        let mut v: Vec<u32> = self.intervals()[w as usize].ones().map(|i| i as u32).collect();
        v.sort_by_key(|&i| (self.length(i), i));
        v
    }

    pub fn interval_contains(&self, w: u32, y: u32) -> bool {
        self.intervals()[w as usize].contains(y as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(name: &str, l: u32) -> Ball {
        Ball::new(Arc::new(AffineSystem::from_name(name).unwrap()), l)
    }

    #[test]
    fn a1_sizes() {
        let b = ball("A1", 5);
        // two elements per positive length in the infinite dihedral group
        assert_eq!(b.len(), 11);
        assert!(b.length_mismatches().is_empty());
    }

    #[test]
    fn lengths_match_bfs() {
        for (name, l) in [
            ("A2", 8),
            ("C2", 8),
            ("G2", 8),
            ("A3", 6),
            ("B3", 5),
            ("D4", 4),
            ("F4", 4),
        ] {
            let b = ball(name, l);
            assert!(b.length_mismatches().is_empty(), "{name}");
        }
    }

    #[test]
    fn bruhat_examples() {
        let b = ball("A1", 4);
        let sys = b.system().clone();
        let idx = |w: &[usize]| b.index_of(&sys.from_word(w)).unwrap();
        assert!(b.bruhat_leq(idx(&[0]), idx(&[1, 0, 1])));
        assert!(!b.bruhat_leq(idx(&[1, 0]), idx(&[0, 1])));
        for w in 0..b.len() as u32 {
            assert!(b.bruhat_leq(0, w));
        }
    }

    #[test]
    fn bruhat_two_routes_agree() {
        for (name, l) in [("A2", 7), ("C2", 7), ("G2", 7)] {
            let b = ball(name, l);
            for w in 0..b.len() as u32 {
                for y in 0..b.len() as u32 {
                    assert_eq!(b.bruhat_leq(y, w), b.interval_contains(w, y), "{name} {y} {w}");
                }
            }
        }
    }
}
