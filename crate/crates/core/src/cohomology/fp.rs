//! Dense linear algebra over F_p on `u32` entries.

pub(crate) fn inv_mod(x: u32, p: u32) -> u32 {
    let (mut base, mut e, mut acc) = (x as u64 % p as u64, p as u64 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Row-major product of an (r×k) and a (k×c) matrix.
pub(crate) fn mat_mul(p: u32, a: &[u32], b: &[u32], r: usize, k: usize, c: usize) -> Vec<u32> {
    let mut out = vec![0u32; r * c];
    for i in 0..r {
        for t in 0..k {
            let x = a[i * k + t] as u64;
            if x == 0 {
                continue;
            }
            for j in 0..c {
                out[i * c + j] = ((out[i * c + j] as u64 + x * b[t * c + j] as u64) % p as u64) as u32;
            }
        }
    }
    out
}

pub(crate) fn mat_vec(p: u32, a: &[u32], v: &[u32]) -> Vec<u32> {
    let n = v.len();
    a.chunks(n)
        .map(|row| (row.iter().zip(v).map(|(&x, &y)| x as u64 * y as u64).sum::<u64>() % p as u64) as u32)
        .collect()
}

pub(crate) fn identity(n: usize) -> Vec<u32> {
    (0..n * n).map(|k| (k / n == k % n) as u32).collect()
}

/// Reduced row echelon form built one row at a time.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    p: u32,
    ncols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(p: u32, ncols: usize) -> Self {
        Echelon { p, ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [u32]) {
        let p = self.p as u64;
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = v[c] as u64;
            if f == 0 {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                *x = ((*x as u64 + (p - f) * r as u64) % p) as u32;
            }
        }
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        assert_eq!(v.len(), self.ncols);
        self.reduce(&mut v);
        let Some(c) = v.iter().position(|&x| x != 0) else { return false };
        let p = self.p as u64;
        let s = inv_mod(v[c], self.p) as u64;
        for x in v.iter_mut() {
            *x = (*x as u64 * s % p) as u32;
        }
        for row in self.rows.iter_mut() {
            let f = row[c] as u64;
            if f != 0 {
                for (x, &r) in row.iter_mut().zip(&v) {
                    *x = ((*x as u64 + (p - f) * r as u64) % p) as u32;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < c);
        self.pivots.insert(at, c);
        self.rows.insert(at, v);
        true
    }

    /// Treating the last column as right-hand side: a solution with free variables
    /// set to zero, or `None` if the system is inconsistent.
    pub fn particular_solution(&self) -> Option<Vec<u32>> {
        let u = self.ncols - 1;
        if self.pivots.last() == Some(&u) {
            return None;
        }
        let mut x = vec![0u32; u];
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            x[c] = row[u];
        }
        Some(x)
    }

    /// Basis of the solutions of the homogeneous system in the first `u` columns.
    pub fn nullspace(&self, u: usize) -> Vec<Vec<u32>> {
        let p = self.p;
        (0..u)
            .filter(|c| !self.pivots.contains(c))
            .map(|f| {
                let mut x = vec![0u32; u];
                x[f] = 1;
                for (row, &c) in self.rows.iter().zip(&self.pivots) {
                    if c < u {
                        x[c] = (p - row[f]) % p;
                    }
                }
                x
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // x + y = 1, x - y = 0 over F_5 → x = y = 3
        let mut e = Echelon::new(5, 3);
        e.insert(vec![1, 1, 1]);
        e.insert(vec![1, 4, 0]);
        assert_eq!(e.particular_solution(), Some(vec![3, 3]));
        assert!(e.nullspace(2).is_empty());
    }

    #[test]
    fn detects_inconsistency_and_kernel() {
        let mut e = Echelon::new(3, 4);
        e.insert(vec![1, 2, 0, 1]);
        assert!(!e.insert(vec![2, 1, 0, 2]));
        let ker = e.nullspace(3);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert_eq!((k[0] + 2 * k[1]) % 3, 0);
        }
        e.insert(vec![0, 0, 0, 1]);
        assert_eq!(e.particular_solution(), None);
    }

    #[test]
    fn inverse_mod_p() {
        for p in [2u32, 3, 5, 7, 11] {
            for x in 1..p {
                assert_eq!(x as u64 * inv_mod(x, p) as u64 % p as u64, 1);
            }
        }
    }
}
