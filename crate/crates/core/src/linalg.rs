//! Small exact linear algebra over `Q` for integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Reduced row echelon form; returns the pivot columns.
fn rref(rows: &mut [Vec<BigRational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let delta = &f * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

fn to_rational(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    m.iter()
        .map(|row| row.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect()
}

pub fn rank(m: &[Vec<i64>]) -> usize {
    rref(&mut to_rational(m)).len()
}

/// Dimension of the kernel of `m` acting on column vectors.
pub fn kernel_dim(m: &[Vec<i64>]) -> usize {
    let ncols = m.first().map_or(0, Vec::len);
    ncols - rank(m)
}

/// Dimension of the `(-1)`-eigenspace of a square integer matrix.
pub fn minus_one_eigenspace_dim(m: &[Vec<i64>]) -> usize {
    let shifted: Vec<Vec<i64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &x)| if i == j { x + 1 } else { x })
                .collect()
        })
        .collect();
    kernel_dim(&shifted)
}

/// A basis of the rational kernel, each vector scaled to a primitive integer vector.
pub fn kernel_basis(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut rows = to_rational(m);
    let pivots = rref(&mut rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rows[r][f].clone();
            }
            primitive_integer(&v)
        })
        .collect()
}

fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if ints.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    ints.into_iter().map(|x| x / &g * &sign).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_affine_a2_cartan() {
        let m = vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]];
        assert_eq!(kernel_dim(&m), 1);
        let k = kernel_basis(&m);
        assert_eq!(k, vec![vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)]]);
    }

    #[test]
    fn eigenspaces() {
        assert_eq!(minus_one_eigenspace_dim(&[vec![-1, 0], vec![0, -1]]), 2);
        assert_eq!(minus_one_eigenspace_dim(&[vec![0, 1], vec![1, 0]]), 1);
        assert_eq!(minus_one_eigenspace_dim(&[vec![1, 0], vec![0, 1]]), 0);
    }
}
