//! Smith normal form over the integers.
//!
//! Pivoting always brings the nonzero entry of least absolute value into the
//! pivot position, then reduces its row and column by truncated division until
//! both are clear. A non-divisible entry in the trailing block is folded into
//! the pivot row, which strictly lowers the pivot on the next round.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `d = u * a * v` with `u`, `v` unimodular; `v_inv` is kept alongside `v`.
#[derive(Clone, Debug)]
pub struct SnfParts {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfParts {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Returns `(U, D, V)` with `D = U·A·V`.
pub fn snf_triple(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let p = snf(a);
    (p.u, p.d, p.v)
}

pub fn snf(a: &IntMatrix) -> SnfParts {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    let mut ops = Ops { d: &mut d, u: &mut u, v: &mut v, v_inv: &mut v_inv };

    for t in 0..rows.min(cols) {
        let Some((pr, pc)) = ops.smallest_in_block(t) else {
            break;
        };
        ops.swap_rows(t, pr);
        ops.swap_cols(t, pc);
        loop {
            let pivot = ops.d.get(t, t).clone();
            for i in t + 1..rows {
                let q = ops.d.get(i, t) / &pivot;
                ops.add_row(i, t, &-q);
            }
            for j in t + 1..cols {
                let q = ops.d.get(t, j) / &pivot;
                ops.add_col(j, t, &-q);
            }
            if let Some((r, c)) = ops.smallest_on_cross(t) {
                ops.swap_rows(t, r);
                ops.swap_cols(t, c);
                continue;
            }
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !ops.d.get(i, j).is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => ops.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if ops.d.get(t, t).is_negative() {
            ops.d.negate_row(t);
            ops.u.negate_row(t);
        }
    }
    SnfParts { u, d, v, v_inv }
}

struct Ops<'a> {
    d: &'a mut IntMatrix,
    u: &'a mut IntMatrix,
    v: &'a mut IntMatrix,
    v_inv: &'a mut IntMatrix,
}

impl Ops<'_> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.d.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
    }

    /// col[dst] += k * col[src]; the inverse picks up row[src] -= k * row[dst].
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.d.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
        self.v_inv.add_row_multiple(src, dst, &-k);
    }

    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let x = self.d.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().map_or(true, |(_, b)| ax < *b) {
                    best = Some(((i, j), ax));
                }
            }
        }
        best.map(|(pos, _)| pos)
    }

    /// Smallest nonzero entry left in row `t` or column `t` off the pivot.
    fn smallest_on_cross(&self, t: usize) -> Option<(usize, usize)> {
        let col = (t + 1..self.d.rows()).map(|i| (i, t));
        let row = (t + 1..self.d.cols()).map(|j| (t, j));
        col.chain(row)
            .filter(|&(i, j)| !self.d.get(i, j).is_zero())
            .min_by_key(|&(i, j)| self.d.get(i, j).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SnfParts {
        let p = snf(a);
        assert_eq!(&(&p.u * a) * &p.v, p.d);
        assert_eq!(&p.v * &p.v_inv, IntMatrix::identity(a.cols()));
        assert!(p.d.is_diagonal());
        let diag = p.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]), "{diag:?}");
            } else {
                assert!(w[0].is_zero() || w[1].is_zero());
            }
        }
        assert!(diag.iter().all(|x| !x.is_negative()));
        p
    }

    #[test]
    fn diag_two_three() {
        let p = check(&IntMatrix::diagonal(&[2, 3]));
        assert_eq!(p.d, IntMatrix::diagonal(&[1, 6]));
    }

    #[test]
    fn identity_and_zero_are_fixed() {
        assert_eq!(check(&IntMatrix::identity(3)).d, IntMatrix::identity(3));
        assert_eq!(check(&IntMatrix::zeros(2, 2)).d, IntMatrix::zeros(2, 2));
    }

    #[test]
    fn rectangular_and_negative() {
        let a = IntMatrix::from_rows(&[vec![-4, 6, 0], vec![2, -2, 8]]);
        let p = check(&a);
        // gcd of entries is 2, gcd of 2x2 minors (-4, -32, 48) is 4
        assert_eq!(p.diagonal(), vec![BigInt::from(2), BigInt::from(2)]);
        check(&IntMatrix::from_rows(&[vec![0, 0], vec![0, 5], vec![0, 0]]));
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(3, 0));
    }
}
