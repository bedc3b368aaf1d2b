//! Elements of the finite Weyl group, realized as integer matrices on the
//! coroot lattice in the simple-coroot basis.

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

/// A finite Weyl group element together with its inverse matrix.
///
/// Equality, hashing and ordering look only at the matrix.
#[derive(Clone, Debug)]
pub struct FiniteWeylElement {
    rank: usize,
    mat: Box<[i64]>,
    inv: Box<[i64]>,
}

impl FiniteWeylElement {
    pub fn identity(rank: usize) -> Self {
        let mut mat = vec![0i64; rank * rank];
        for i in 0..rank {
            mat[i * rank + i] = 1;
        }
        let mat: Box<[i64]> = mat.into();
        Self {
            rank,
            inv: mat.clone(),
            mat,
        }
    }

    /// An involutive matrix (a reflection), which is its own inverse.
    pub(crate) fn reflection(rank: usize, mat: Vec<i64>) -> Self {
        let mat: Box<[i64]> = mat.into();
        let out = Self {
            rank,
            inv: mat.clone(),
            mat,
        };
        debug_assert!(out.compose(&out).is_identity());
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.mat[i * self.rank + j]
    }

    /// The matrix as rows.
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        self.mat.chunks(self.rank).map(<[i64]>::to_vec).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.rank).all(|i| (0..self.rank).all(|j| self.entry(i, j) == i64::from(i == j)))
    }

    pub fn inverse(&self) -> Self {
        Self {
            rank: self.rank,
            mat: self.inv.clone(),
            inv: self.mat.clone(),
        }
    }

    /// `self * other`, acting as `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.rank, other.rank, "elements of different systems");
        Self {
            rank: self.rank,
            mat: mat_mul(self.rank, &self.mat, &other.mat),
            inv: mat_mul(self.rank, &other.inv, &self.inv),
        }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        mat_vec(self.rank, &self.mat, v)
    }

    pub fn apply_inverse(&self, v: &[i64]) -> Vec<i64> {
        mat_vec(self.rank, &self.inv, v)
    }
}

fn mat_mul(r: usize, a: &[i64], b: &[i64]) -> Box<[i64]> {
    let mut out = vec![0i64; r * r];
    for i in 0..r {
        for k in 0..r {
            let x = a[i * r + k];
            if x == 0 {
                continue;
            }
            for j in 0..r {
                out[i * r + j] += x * b[k * r + j];
            }
        }
    }
    out.into()
}

fn mat_vec(r: usize, a: &[i64], v: &[i64]) -> Vec<i64> {
    (0..r).map(|i| (0..r).map(|j| a[i * r + j] * v[j]).sum()).collect()
}

impl PartialEq for FiniteWeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat
    }
}

impl Eq for FiniteWeylElement {}

impl Hash for FiniteWeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.mat.hash(state);
    }
}

impl PartialOrd for FiniteWeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteWeylElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mat.cmp(&other.mat)
    }
}
