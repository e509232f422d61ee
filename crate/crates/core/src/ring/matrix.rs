//! Dense matrices over any [`CommRing`].

use std::fmt;

use super::CommRing;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Build from row-major data.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

impl<E: fmt::Debug> fmt::Debug for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for i in 0..self.rows {
            list.entry(&&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        list.finish()
    }
}

/// Matrix arithmetic available on every commutative ring.
pub trait MatrixRing: CommRing {
    fn mat_zero(&self, rows: usize, cols: usize) -> Matrix<Self::Elem> {
        Matrix::from_fn(rows, cols, |_, _| self.zero())
    }

    fn identity(&self, n: usize) -> Matrix<Self::Elem> {
        Matrix::from_fn(n, n, |i, j| if i == j { self.one() } else { self.zero() })
    }

    fn mat_add(&self, a: &Matrix<Self::Elem>, b: &Matrix<Self::Elem>) -> Matrix<Self::Elem> {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        Matrix {
            rows: a.rows,
            cols: a.cols,
            data: a.data.iter().zip(&b.data).map(|(x, y)| self.add(x, y)).collect(),
        }
    }

    fn mat_sub(&self, a: &Matrix<Self::Elem>, b: &Matrix<Self::Elem>) -> Matrix<Self::Elem> {
        assert_eq!((a.rows, a.cols), (b.rows, b.cols));
        Matrix {
            rows: a.rows,
            cols: a.cols,
            data: a.data.iter().zip(&b.data).map(|(x, y)| self.sub(x, y)).collect(),
        }
    }

    fn mat_neg(&self, a: &Matrix<Self::Elem>) -> Matrix<Self::Elem> {
        a.map(|x| self.neg(x))
    }

    fn mat_scale(&self, c: &Self::Elem, a: &Matrix<Self::Elem>) -> Matrix<Self::Elem> {
        a.map(|x| self.mul(c, x))
    }

    fn mat_mul(&self, a: &Matrix<Self::Elem>, b: &Matrix<Self::Elem>) -> Matrix<Self::Elem> {
        assert_eq!(a.cols, b.rows, "dimension mismatch in matrix product");
        let mut data = Vec::with_capacity(a.rows * b.cols);
        for i in 0..a.rows {
            for j in 0..b.cols {
                let mut acc = self.zero();
                for k in 0..a.cols {
                    let x = a.get(i, k);
                    if self.is_zero(x) {
                        continue;
                    }
                    acc = self.add(&acc, &self.mul(x, b.get(k, j)));
                }
                data.push(acc);
            }
        }
        Matrix { rows: a.rows, cols: b.cols, data }
    }

    fn mat_vec(&self, a: &Matrix<Self::Elem>, v: &[Self::Elem]) -> Vec<Self::Elem> {
        assert_eq!(a.cols, v.len());
        (0..a.rows)
            .map(|i| {
                a.row(i)
                    .iter()
                    .zip(v)
                    .fold(self.zero(), |acc, (x, y)| self.add(&acc, &self.mul(x, y)))
            })
            .collect()
    }

    fn is_identity(&self, a: &Matrix<Self::Elem>) -> bool {
        a.is_square() && *a == self.identity(a.rows)
    }

    fn mat_pow(&self, a: &Matrix<Self::Elem>, mut e: u64) -> Matrix<Self::Elem> {
        let mut acc = self.identity(a.rows);
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mat_mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mat_mul(&base, &base);
            }
        }
        acc
    }

    /// Inverse over a local ring: Gauss–Jordan with unit pivots.
    fn mat_inv(&self, a: &Matrix<Self::Elem>) -> Option<Matrix<Self::Elem>> {
        assert!(a.is_square());
        let n = a.rows;
        let mut m = a.to_rows();
        let mut inv = self.identity(n).to_rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| self.is_unit(&m[r][col]))?;
            m.swap(col, piv);
            inv.swap(col, piv);
            let s = self.inv(&m[col][col])?;
            for j in 0..n {
                m[col][j] = self.mul(&s, &m[col][j]);
                inv[col][j] = self.mul(&s, &inv[col][j]);
            }
            for r in 0..n {
                if r == col || self.is_zero(&m[r][col]) {
                    continue;
                }
                let f = m[r][col].clone();
                for j in 0..n {
                    let t = self.mul(&f, &m[col][j]);
                    m[r][j] = self.sub(&m[r][j], &t);
                    let t = self.mul(&f, &inv[col][j]);
                    inv[r][j] = self.sub(&inv[r][j], &t);
                }
            }
        }
        Some(Matrix::from_rows(inv))
    }

    fn trace(&self, a: &Matrix<Self::Elem>) -> Self::Elem {
        (0..a.rows.min(a.cols)).fold(self.zero(), |acc, i| self.add(&acc, a.get(i, i)))
    }

    /// det(xI - A) by Berkowitz's division-free algorithm, little-endian and monic.
    fn char_poly(&self, a: &Matrix<Self::Elem>) -> Vec<Self::Elem> {
        assert!(a.is_square());
        let n = a.rows;
        if n == 0 {
            return vec![self.one()];
        }
        // big-endian coefficients of the characteristic polynomial of the leading r×r block
        let mut vect = vec![self.one(), self.neg(a.get(0, 0))];
        for r in 1..n {
            let s: Vec<_> = (0..r).map(|j| a.get(r, j).clone()).collect();
            let mut qc: Vec<_> = (0..r).map(|i| a.get(i, r).clone()).collect();
            let mut t = Vec::with_capacity(r + 2);
            t.push(self.one());
            t.push(self.neg(a.get(r, r)));
            for _ in 0..r {
                let dot = s
                    .iter()
                    .zip(&qc)
                    .fold(self.zero(), |acc, (x, y)| self.add(&acc, &self.mul(x, y)));
                t.push(self.neg(&dot));
                qc = (0..r)
                    .map(|i| {
                        (0..r).fold(self.zero(), |acc, k| {
                            self.add(&acc, &self.mul(a.get(i, k), &qc[k]))
                        })
                    })
                    .collect();
            }
            let next: Vec<_> = (0..r + 2)
                .map(|i| {
                    (0..=i.min(r)).fold(self.zero(), |acc, j| {
                        self.add(&acc, &self.mul(&t[i - j], &vect[j]))
                    })
                })
                .collect();
            vect = next;
        }
        vect.reverse();
        vect
    }
}

impl<R: CommRing + ?Sized> MatrixRing for R {}

#[cfg(test)]
mod tests {
    use super::super::GaloisRing;
    use super::*;

    fn z(n: u32) -> GaloisRing {
        GaloisRing::new(3, n, 1).unwrap()
    }

    fn m(r: &GaloisRing, rows: &[&[i64]]) -> Matrix<super::super::GrElem> {
        Matrix::from_rows(rows.iter().map(|row| row.iter().map(|&x| r.from_int(x)).collect()).collect())
    }

    #[test]
    fn inverse_and_product() {
        let r = z(2);
        let a = m(&r, &[&[1, 3, 0], &[2, 4, 1], &[0, 5, 7]]);
        let inv = r.mat_inv(&a).unwrap();
        assert!(r.is_identity(&r.mat_mul(&a, &inv)));
        assert!(r.is_identity(&r.mat_mul(&inv, &a)));
        let singular = m(&r, &[&[3, 0], &[0, 1]]);
        assert!(r.mat_inv(&singular).is_none());
    }

    #[test]
    fn char_poly_small() {
        let r = z(3);
        let a = m(&r, &[&[1, 2], &[3, 4]]);
        // x^2 - 5x - 2
        assert_eq!(r.char_poly(&a), vec![r.from_int(-2), r.from_int(-5), r.one()]);
        let b = m(&r, &[&[2, 1, 0], &[0, 2, 1], &[0, 0, 2]]);
        // (x - 2)^3 = x^3 - 6x^2 + 12x - 8
        assert_eq!(
            r.char_poly(&b),
            vec![r.from_int(-8), r.from_int(12), r.from_int(-6), r.one()]
        );
    }

    #[test]
    fn char_poly_matches_cayley_hamilton() {
        let r = z(2);
        let a = m(&r, &[&[1, 5, 7, 2], &[0, 3, 8, 1], &[4, 4, 2, 6], &[1, 0, 0, 5]]);
        let cp = r.char_poly(&a);
        let mut acc = r.mat_zero(4, 4);
        for c in cp.iter().rev() {
            acc = r.mat_add(&r.mat_mul(&acc, &a), &r.mat_scale(c, &r.identity(4)));
        }
        assert_eq!(acc, r.mat_zero(4, 4));
        assert_eq!(cp[3], r.neg(&r.trace(&a)));
    }

    #[test]
    fn power_and_vector_product() {
        let r = z(1);
        let a = m(&r, &[&[0, 1], &[1, 1]]);
        assert!(r.is_identity(&r.mat_pow(&a, 8)));
        assert_eq!(r.mat_vec(&a, &[r.one(), r.zero()]), vec![r.zero(), r.one()]);
    }
}
