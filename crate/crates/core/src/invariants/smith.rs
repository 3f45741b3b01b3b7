//! Smith normal form over the integers, with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::matrix::IntegerMatrix;

/// Result of [`smith_normal_form`]: `left · input · right = diagonal`, where
/// `left` and `right` are unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// `min(rows, cols)` diagonal entries: nonzero factors with
    /// `d₁ | d₂ | ...`, then zeros.
    pub factors: Vec<BigInt>,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
    pub diagonal: IntegerMatrix,
}

impl SmithForm {
    pub fn nonzero_factors(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().filter(|d| !d.is_zero())
    }

    pub fn rank(&self) -> usize {
        self.nonzero_factors().count()
    }
}

/// Diagonalizes `m` by row and column operations, always pivoting on an
/// entry of least absolute value.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntegerMatrix::identity(rows);
    let mut right = IntegerMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = min_abs_entry(&a, t) else {
                return finish(a, left, right);
            };
            a.swap_rows(t, pi);
            left.swap_rows(t, pi);
            a.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let pivot = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = a.get(i, t).div_floor(&pivot);
                let neg = -q;
                a.add_row_multiple(i, t, &neg);
                left.add_row_multiple(i, t, &neg);
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = a.get(t, j).div_floor(&pivot);
                let neg = -q;
                a.add_col_multiple(j, t, &neg);
                right.add_col_multiple(j, t, &neg);
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // pivot must divide the whole remaining block
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    a.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
    }
    finish(a, left, right)
}

fn min_abs_entry(a: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let abs = v.abs();
            if best.as_ref().is_none_or(|(_, _, b)| abs < *b) {
                best = Some((i, j, abs));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn finish(diagonal: IntegerMatrix, left: IntegerMatrix, right: IntegerMatrix) -> SmithForm {
    let factors = (0..diagonal.rows().min(diagonal.cols()))
        .map(|i| diagonal.get(i, i).clone())
        .collect();
    SmithForm {
        factors,
        left,
        right,
        diagonal,
    }
}
