//! Small dense matrices over the rationals.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::{common_denominator, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    /// Row-major constructor.
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter("matrix dimensions must be positive".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension { expected: rows * cols, got: entries.len() });
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            if row.len() != n_cols {
                return Err(Error::Dimension { expected: n_cols, got: row.len() });
            }
            entries.extend(row);
        }
        Matrix::new(n_rows, n_cols, entries)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        Matrix { rows: n, cols: n, entries }
    }

    /// Vandermonde matrix with rows `(1, x, x^2, ..., x^(n-1))`.
    pub fn vandermonde(xs: &[Rational]) -> Self {
        let n = xs.len();
        let mut entries = Vec::with_capacity(n * n);
        for x in xs {
            let mut power = Rational::one();
            for _ in 0..n {
                entries.push(power.clone());
                power *= x;
            }
        }
        Matrix { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, entries }
    }

    /// Copy with column `col` replaced by `values`.
    pub fn with_column(&self, col: usize, values: &[Rational]) -> Result<Self> {
        if values.len() != self.rows {
            return Err(Error::Dimension { expected: self.rows, got: values.len() });
        }
        let mut out = self.clone();
        for (r, v) in values.iter().enumerate() {
            out.entries[r * self.cols + col] = v.clone();
        }
        Ok(out)
    }

    fn require_square(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(())
    }

    /// Exact determinant.
    ///
    /// Each row is scaled to integers by the lcm of its denominators, the
    /// integer matrix is reduced with Bareiss' fraction-free elimination, and
    /// the row scalings are divided back out at the end.
    pub fn determinant(&self) -> Result<Rational> {
        self.require_square()?;
        let n = self.rows;
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for r in 0..n {
            let row = self.row(r);
            let den = common_denominator(row);
            a.push(row.iter().map(|v| v.numer() * (&den / v.denom())).collect());
            scale *= den;
        }
        let det = bareiss_determinant(a);
        Ok(Rational::new(det, scale))
    }

    /// Solves `self * x = rhs` by Gauss-Jordan elimination over the rationals.
    pub fn solve(&self, rhs: &[Rational]) -> Result<Vec<Rational>> {
        self.require_square()?;
        let n = self.rows;
        if rhs.len() != n {
            return Err(Error::Dimension { expected: n, got: rhs.len() });
        }
        let mut aug: Vec<Vec<Rational>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.push(rhs[r].clone());
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !aug[r][col].is_zero()).ok_or(Error::Singular)?;
            aug.swap(col, pivot);
            let inv = aug[col][col].recip();
            for v in aug[col][col..].iter_mut() {
                *v *= &inv;
            }
            let pivot_row = aug[col].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (v, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *v -= &factor * p;
                }
            }
        }
        Ok(aug.into_iter().map(|mut row| row.pop().expect("augmented column")).collect())
    }
}

/// Bareiss elimination on an integer matrix. Every division is exact.
fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Free-function form of [`Matrix::determinant`].
pub fn determinant(m: &Matrix) -> Result<Rational> {
    m.determinant()
}

/// Free-function form of [`Matrix::solve`].
pub fn solve_linear(m: &Matrix, rhs: &[Rational]) -> Result<Vec<Rational>> {
    m.solve(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};
    use proptest::prelude::*;

    fn ints(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(ints(&[&[1, 1], &[0, 1]]).determinant().unwrap(), int(1));
        // columns (1, q_j) for the counterclockwise unit triangle
        assert_eq!(ints(&[&[1, 1, 1], &[0, 1, 0], &[0, 0, 1]]).determinant().unwrap(), int(1));
        let v = Matrix::vandermonde(&[int(0), int(1), int(2)]);
        assert_eq!(v.determinant().unwrap(), int(2));
    }

    #[test]
    fn determinant_needs_pivoting_and_fractions() {
        let m = Matrix::from_rows(vec![
            vec![int(0), rat(1, 2), int(3)],
            vec![rat(2, 3), int(0), int(1)],
            vec![int(1), int(1), rat(-1, 5)],
        ])
        .unwrap();
        // cofactor expansion along the first row
        let expected = -rat(1, 2) * (rat(2, 3) * rat(-1, 5) - int(1)) + int(3) * (rat(2, 3) - int(0));
        assert_eq!(m.determinant().unwrap(), expected);
        let singular = ints(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.determinant().unwrap(), int(0));
    }

    #[test]
    fn non_square_is_rejected() {
        let m = Matrix::new(2, 3, vec![int(0); 6]).unwrap();
        assert!(matches!(m.determinant(), Err(Error::NotSquare { rows: 2, cols: 3 })));
        assert!(matches!(m.solve(&[int(0), int(0)]), Err(Error::NotSquare { .. })));
        assert!(Matrix::new(2, 2, vec![int(0); 3]).is_err());
    }

    #[test]
    fn solve_examples() {
        assert_eq!(Matrix::identity(2).solve(&[int(3), int(5)]).unwrap(), vec![int(3), int(5)]);
        assert_eq!(
            ints(&[&[1, 1], &[1, 2]]).solve(&[int(1), int(4)]).unwrap(),
            vec![int(-2), int(3)]
        );
        let v = Matrix::vandermonde(&[int(0), int(1), int(2)]);
        assert_eq!(v.solve(&[int(1), int(2), int(5)]).unwrap(), vec![int(1), int(0), int(1)]);
        assert!(matches!(ints(&[&[1, 2], &[2, 4]]).solve(&[int(1), int(1)]), Err(Error::Singular)));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..12).prop_map(|(n, d)| rat(n, d))
    }

    fn cofactor_det(m: &Matrix) -> Rational {
        let n = m.rows();
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut total = Rational::zero();
        for c in 0..n {
            let minor: Vec<Vec<Rational>> = (1..n)
                .map(|r| (0..n).filter(|&j| j != c).map(|j| m.get(r, j).clone()).collect())
                .collect();
            let term = m.get(0, c) * cofactor_det(&Matrix::from_rows(minor).unwrap());
            if c % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor_expansion(
            n in 1usize..6,
            entries in proptest::collection::vec(small_rational(), 25),
        ) {
            let m = Matrix::new(n, n, entries[..n * n].to_vec()).unwrap();
            prop_assert_eq!(m.determinant().unwrap(), cofactor_det(&m));
        }

        #[test]
        fn vandermonde_determinant_is_the_product(
            mut xs in proptest::collection::btree_set(-40i64..40, 1..8),
        ) {
            let xs: Vec<Rational> = std::mem::take(&mut xs).into_iter().map(int).collect();
            let mut product = Rational::one();
            for j in 0..xs.len() {
                for i in 0..j {
                    product *= &xs[j] - &xs[i];
                }
            }
            let det = Matrix::vandermonde(&xs).determinant().unwrap();
            prop_assert!(det > Rational::zero());
            prop_assert_eq!(det, product);
        }

        #[test]
        fn solution_substitutes_back(
            n in 1usize..6,
            entries in proptest::collection::vec(small_rational(), 25),
            rhs in proptest::collection::vec(small_rational(), 5),
        ) {
            let m = Matrix::new(n, n, entries[..n * n].to_vec()).unwrap();
            let rhs = &rhs[..n];
            match m.solve(rhs) {
                Ok(x) => {
                    for (r, want) in rhs.iter().enumerate() {
                        let lhs: Rational = m.row(r).iter().zip(&x).map(|(a, b)| a * b).sum();
                        prop_assert_eq!(&lhs, want);
                    }
                }
                Err(Error::Singular) => prop_assert!(m.determinant().unwrap().is_zero()),
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }
    }
}
