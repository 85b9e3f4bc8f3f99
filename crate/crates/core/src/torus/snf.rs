//! Smith normal form of integer matrices.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        IntMatrix { rows: n, cols, data }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = a * other.get(k, j);
                    out.data[i * other.cols + j] += v;
                }
            }
        }
        out
    }

    /// Whether the matrix is diagonal with non-negative entries, each dividing the next
    /// non-zero one, and zeros only at the end.
    pub fn is_smith_form(&self) -> bool {
        let n = self.rows.min(self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j && !self.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        let diag: Vec<&BigInt> = (0..n).map(|i| self.get(i, i)).collect();
        if diag.iter().any(|d| d.is_negative()) {
            return false;
        }
        diag.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (w[1] % w[0]).is_zero()
            }
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[t] += k * row[s]`
    fn add_row(&mut self, t: usize, s: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = k * self.get(s, j);
            self.data[t * self.cols + j] += v;
        }
    }

    /// `col[t] += k * col[s]`
    fn add_col(&mut self, t: usize, s: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = k * self.get(i, s);
            self.data[i * self.cols + t] += v;
        }
    }

    fn negate_row(&mut self, t: usize) {
        for j in 0..self.cols {
            let v = -self.get(t, j);
            self.data[t * self.cols + j] = v;
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// `left * input * right = diagonal` with `left` and `right` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
}

impl SmithDecomposition {
    /// Non-zero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let d = &self.diagonal;
        (0..d.rows.min(d.cols)).map(|i| d.get(i, i).clone()).filter(|x| !x.is_zero()).collect()
    }
}

struct Reducer {
    a: IntMatrix,
    left: Option<IntMatrix>,
    right: Option<IntMatrix>,
}

impl Reducer {
    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        if let Some(u) = &mut self.left {
            u.swap_rows(x, y);
        }
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        if let Some(v) = &mut self.right {
            v.swap_cols(x, y);
        }
    }

    fn add_row(&mut self, t: usize, s: usize, k: &BigInt) {
        self.a.add_row(t, s, k);
        if let Some(u) = &mut self.left {
            u.add_row(t, s, k);
        }
    }

    fn add_col(&mut self, t: usize, s: usize, k: &BigInt) {
        self.a.add_col(t, s, k);
        if let Some(v) = &mut self.right {
            v.add_col(t, s, k);
        }
    }

    fn negate_row(&mut self, t: usize) {
        self.a.negate_row(t);
        if let Some(u) = &mut self.left {
            u.negate_row(t);
        }
    }

    fn smallest_from(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let v = self.a.get(i, j);
                if v.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| v.abs() < self.a.get(bi, bj).abs()) {
                    best = Some((i, j));
                    if v.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let n = self.a.rows.min(self.a.cols);
        for t in 0..n {
            loop {
                let Some((i, j)) = self.smallest_from(t) else { return };
                self.swap_rows(t, i);
                self.swap_cols(t, j);
                let pivot = self.a.get(t, t).clone();
                let mut clean = true;
                for i in t + 1..self.a.rows {
                    let q = self.a.get(i, t) / &pivot;
                    if !q.is_zero() {
                        self.add_row(i, t, &-q);
                    }
                    clean &= self.a.get(i, t).is_zero();
                }
                for j in t + 1..self.a.cols {
                    let q = self.a.get(t, j) / &pivot;
                    if !q.is_zero() {
                        self.add_col(j, t, &-q);
                    }
                    clean &= self.a.get(t, j).is_zero();
                }
                if !clean {
                    continue;
                }
                let bad_row = (t + 1..self.a.rows)
                    .find(|&i| (t + 1..self.a.cols).any(|j| !(self.a.get(i, j) % &pivot).is_zero()));
                match bad_row {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a.get(t, t).is_negative() {
                self.negate_row(t);
            }
        }
    }
}

/// Invariant factors `d_1 | d_2 | ...` (the non-zero diagonal entries) of `a`.
pub fn smith_normal_form(a: &IntMatrix) -> Vec<BigInt> {
    let mut r = Reducer { a: a.clone(), left: None, right: None };
    r.run();
    let d = &r.a;
    (0..d.rows.min(d.cols)).map(|i| d.get(i, i).clone()).filter(|x| !x.is_zero()).collect()
}

/// Smith normal form together with the unimodular transforms.
pub fn smith_decomposition(a: &IntMatrix) -> SmithDecomposition {
    let mut r = Reducer {
        a: a.clone(),
        left: Some(IntMatrix::identity(a.rows)),
        right: Some(IntMatrix::identity(a.cols)),
    };
    r.run();
    SmithDecomposition { left: r.left.unwrap(), diagonal: r.a, right: r.right.unwrap() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(smith_normal_form(&IntMatrix::from_i64(&[vec![2, 4], vec![6, 8]])), ints(&[2, 4]));
        assert_eq!(smith_normal_form(&IntMatrix::from_i64(&[vec![2, 0], vec![0, 3]])), ints(&[1, 6]));
        assert_eq!(smith_normal_form(&IntMatrix::from_i64(&[vec![0, 0, 0]])), ints(&[]));
        assert_eq!(smith_normal_form(&IntMatrix::from_i64(&[vec![2, -1, 0]])), ints(&[1]));
        assert_eq!(smith_normal_form(&IntMatrix::zeros(0, 3)), ints(&[]));
    }

    #[test]
    fn divisibility_needs_mixing() {
        // diag(4, 6) -> diag(2, 12)
        let a = IntMatrix::from_i64(&[vec![4, 0], vec![0, 6]]);
        let d = smith_decomposition(&a);
        assert_eq!(d.invariant_factors(), ints(&[2, 12]));
        assert_eq!(d.left.mul(&a).mul(&d.right), d.diagonal);
    }

    fn det2(m: &IntMatrix) -> BigInt {
        m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0)
    }

    proptest! {
        #[test]
        fn decomposition_is_consistent(
            rows in 1usize..5,
            cols in 1usize..5,
            seed in proptest::collection::vec(-6i64..=6, 25),
        ) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| seed[i * 5..i * 5 + cols].to_vec()).collect();
            let a = IntMatrix::from_i64(&data);
            let d = smith_decomposition(&a);
            prop_assert!(d.diagonal.is_smith_form());
            prop_assert_eq!(d.left.mul(&a).mul(&d.right), d.diagonal.clone());
            prop_assert_eq!(d.invariant_factors(), smith_normal_form(&a));
            if rows == 2 {
                prop_assert!(det2(&d.left).abs().is_one());
            }
            if cols == 2 {
                prop_assert!(det2(&d.right).abs().is_one());
            }
        }
    }
}
